"""Sequential topological complexity of polyhedral products of spheres."""

from .algebra import (
    Certificate,
    ExteriorAlgebra,
    TensorElement,
    build_certificate,
    certificate_for,
    diagonal_pullback,
    is_zero_divisor,
    zcl_lower_search,
    zd_bar,
    zd_spread,
)
from .errors import (
    AmbiguityError,
    CertificateError,
    DomainError,
    PlannerConsistencyError,
    PolyTCError,
)
from .formulas import (
    NormWitness,
    SphereProductSpec,
    generic_bounds,
    make_spec,
    mixed_norm,
    norm_nk,
    norm_ns,
    tc_s,
    tc_wedge,
)
from .planner import Configuration, PathPlan, Stratum, classify, domain_count, plan
from .simplicial import SimplicialComplex, from_maximal_faces, join, disjoint_union, skeleton

__version__ = "0.1.0"

__all__ = [
    "AmbiguityError", "Certificate", "CertificateError", "Configuration", "DomainError",
    "ExteriorAlgebra", "NormWitness", "PathPlan", "PlannerConsistencyError", "PolyTCError",
    "SimplicialComplex", "SphereProductSpec", "Stratum", "TensorElement", "build_certificate",
    "certificate_for", "classify", "diagonal_pullback", "disjoint_union", "domain_count",
    "from_maximal_faces", "generic_bounds", "is_zero_divisor", "join", "make_spec", "mixed_norm",
    "norm_nk", "norm_ns", "plan", "skeleton", "tc_s", "tc_wedge", "zcl_lower_search", "zd_bar",
    "zd_spread",
]
