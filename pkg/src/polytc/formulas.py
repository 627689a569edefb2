"""Combinatorial formulas for the sequential topological complexity of
polyhedral products of spheres.

Everything here is exact integer arithmetic over the index complex.  The
central quantity is the mixed norm

    max over maximal faces J_1..J_s of  sum |J_i| - |J_1 & ... & J_s & J_O|

where ``J_O`` is the set of odd-dimensional sphere factors.  It equals
``TC_s`` of the polyhedral product.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from . import _kernels
from .errors import DomainError
from .simplicial import (
    Face,
    SimplicialComplex,
    disjoint_union,
    face_to_mask,
    from_maximal_faces,
    join,
    skeleton,
)


@dataclass(frozen=True)
class SphereProductSpec:
    """A simplicial complex on [n] with a sphere dimension per vertex."""

    complex: SimplicialComplex
    dims: tuple[int, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        dims = tuple(int(k) for k in self.dims)
        object.__setattr__(self, "dims", dims)
        if len(dims) != self.complex.n:
            raise DomainError(f"expected {self.complex.n} sphere dimensions, got {len(dims)}")
        if any(k < 1 for k in dims):
            raise DomainError(f"sphere dimensions must be >= 1, got {dims}")

    @property
    def n(self) -> int:
        return self.complex.n

    @cached_property
    def even(self) -> Face:
        return tuple(i + 1 for i, k in enumerate(self.dims) if k % 2 == 0)

    @cached_property
    def odd(self) -> Face:
        return tuple(i + 1 for i, k in enumerate(self.dims) if k % 2 == 1)

    @cached_property
    def even_mask(self) -> int:
        return face_to_mask(self.even)

    @cached_property
    def odd_mask(self) -> int:
        return face_to_mask(self.odd)

    def to_dict(self) -> dict:
        d = self.complex.to_dict()
        d["dims"] = list(self.dims)
        if self.name:
            d["name"] = self.name
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "SphereProductSpec":
        try:
            cx = SimplicialComplex.from_dict(data)
            dims = data["dims"]
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed spec: {exc}") from exc
        return cls(cx, tuple(dims), data.get("name", ""))

    @classmethod
    def from_json(cls, text: str) -> "SphereProductSpec":
        return cls.from_dict(json.loads(text))


def make_spec(n: int, faces, dims, name: str = "") -> SphereProductSpec:
    return SphereProductSpec(from_maximal_faces(n, faces), tuple(dims), name)


@dataclass(frozen=True)
class NormWitness:
    faces: tuple[Face, ...]
    value: int

    def to_dict(self) -> dict:
        return {"value": self.value, "witness": [list(f) for f in self.faces]}


def _check_s(s: int, low: int = 2) -> None:
    if int(s) != s or s < low:
        raise DomainError(f"s must be an integer >= {low}, got {s}")


def _check_faces(K: SimplicialComplex, faces: Sequence[Sequence[int]]) -> list[frozenset]:
    out = []
    for f in faces:
        if not K.contains(f):
            raise DomainError(f"{tuple(f)} is not a face of {K}")
        out.append(frozenset(f))
    return out


# -- norms -----------------------------------------------------------------

def norm_symmetric(faces: Sequence[frozenset]) -> int:
    return sum(len(f) for f in faces) - len(frozenset.intersection(*faces))


def norm_recursive(faces: Sequence[frozenset]) -> int:
    total = 0
    prefix = faces[0]
    for f in faces[1:]:
        total += len(prefix - f) + len(f)
        prefix = prefix & f
    return total


def norm_nk(K: SimplicialComplex, faces: Sequence[Sequence[int]]) -> int:
    """Norm of a tuple of faces, checked through both of its formulas."""
    if len(faces) < 1:
        raise DomainError("need at least one face")
    sets = _check_faces(K, faces)
    sym = norm_symmetric(sets)
    rec = norm_recursive(sets)
    assert sym == rec, f"norm formulas disagree on {faces}: {sym} != {rec}"
    return sym


def mixed_value_symmetric(faces: Sequence[frozenset], odd: frozenset) -> int:
    return sum(len(f) for f in faces) - len(frozenset.intersection(*faces) & odd)


def mixed_value_recursive(faces: Sequence[frozenset], even: frozenset) -> int:
    return norm_recursive(faces) + len(frozenset.intersection(*faces) & even)


def _witness(K: SimplicialComplex, idx) -> tuple[Face, ...]:
    return tuple(K.maximal_faces[i] for i in idx)


def mixed_norm(spec: SphereProductSpec, s: int, backend: str | None = None) -> tuple[int, NormWitness]:
    """Maximize the mixed norm over multisets of maximal faces.

    The maximum is searched twice, once scoring with the symmetric
    expression and once with the prefix-recursive one; both searches must
    agree on the value.
    """
    _check_s(s)
    K = spec.complex
    masks = K.maximal_masks
    v_sym, i_sym = _kernels.best_multiset(masks, s, spec.odd_mask, spec.even_mask,
                                          _kernels.SYMMETRIC, backend)
    v_rec, _ = _kernels.best_multiset(masks, s, spec.odd_mask, spec.even_mask,
                                      _kernels.RECURSIVE, backend)
    assert v_sym == v_rec, f"mixed norm searches disagree: {v_sym} != {v_rec}"
    faces = _witness(K, i_sym)
    sets = [frozenset(f) for f in faces]
    check = mixed_value_recursive(sets, frozenset(spec.even))
    assert check == v_sym == mixed_value_symmetric(sets, frozenset(spec.odd))
    return v_sym, NormWitness(faces, v_sym)


def norm_ns(K: SimplicialComplex, s: int, backend: str | None = None) -> tuple[int, NormWitness]:
    """s-norm of a complex: the mixed norm with every factor odd."""
    spec = SphereProductSpec(K, (1,) * K.n)
    return mixed_norm(spec, s, backend)


def tc_s(spec: SphereProductSpec, s: int, backend: str | None = None) -> tuple[int, NormWitness]:
    """Sequential topological complexity ``TC_s`` of the polyhedral product."""
    return mixed_norm(spec, s, backend)


# -- closed forms ----------------------------------------------------------

def _all_odd(spec: SphereProductSpec) -> bool:
    return not spec.even


def tc_pure_closed_form(spec: SphereProductSpec, s: int) -> int:
    """``s*d - min |J_1 & ... & J_s|`` over maximal faces, for pure all-odd specs."""
    _check_s(s)
    K = spec.complex
    if not K.is_pure or not _all_odd(spec):
        raise DomainError("closed form needs a pure complex and odd spheres only")
    d = K.dim + 1
    sets = [frozenset(f) for f in K.maximal_faces]
    smallest = min(len(frozenset.intersection(*c))
                   for c in itertools.combinations_with_replacement(sets, s))
    value = s * d - smallest
    assert value == tc_s(spec, s)[0]
    return value


def tc_skeleton_closed_form(n: int, d: int, s: int) -> int:
    _check_s(s)
    if d < 1 or d > n:
        raise DomainError(f"need 1 <= d <= n, got d={d}, n={n}")
    value = min(s * d, (s - 1) * n)
    assert value == tc_s(SphereProductSpec(skeleton(n, d), (1,) * n), s)[0]
    return value


def linear_growth_check(spec: SphereProductSpec, s: int) -> bool:
    """Whether ``TC_s = d (s - w) + TC_w`` with ``w`` the number of maximal faces.

    Also asserts that the ``TC_w`` witness uses a face of maximal size.
    """
    if not _all_odd(spec):
        raise DomainError("linear growth identity is stated for odd spheres only")
    K = spec.complex
    w = K.num_maximal
    if s < w:
        raise DomainError(f"need s >= w = {w}, got s={s}")
    d = K.dim + 1
    if w >= 2:
        tw, wit = tc_s(spec, w)
    else:
        # a single maximal face: TC_1 is the trivial 0 and the witness is (J,)
        tw, wit = 0, NormWitness(K.maximal_faces, 0)
    assert max(len(f) for f in wit.faces) == d
    return tc_s(spec, s)[0] == d * (s - w) + tw


def cat_power(K: SimplicialComplex, p: int) -> int:
    """Category of the ``p``-fold Cartesian power."""
    if p < 1:
        raise DomainError(f"p must be >= 1, got {p}")
    return p * (1 + K.dim)


def tc_wedge(spec_x: SphereProductSpec, spec_y: SphereProductSpec, s: int) -> int:
    """``TC_s(X v Y) = max{TC_s X, TC_s Y, cat(X^{s-1}) + cat Y}`` for ``cat X >= cat Y``."""
    _check_s(s)
    cat_x = cat_power(spec_x.complex, 1)
    cat_y = cat_power(spec_y.complex, 1)
    if cat_x < cat_y:
        raise DomainError("wedge formula needs cat(X) >= cat(Y); swap the arguments")
    value = max(tc_s(spec_x, s)[0], tc_s(spec_y, s)[0],
                cat_power(spec_x.complex, s - 1) + cat_y)
    wedge = wedge_spec(spec_x, spec_y)
    assert value == tc_s(wedge, s)[0]
    return value


def wedge_spec(spec_x: SphereProductSpec, spec_y: SphereProductSpec) -> SphereProductSpec:
    return SphereProductSpec(disjoint_union(spec_x.complex, spec_y.complex), spec_x.dims + spec_y.dims)


def product_spec(spec_x: SphereProductSpec, spec_y: SphereProductSpec) -> SphereProductSpec:
    return SphereProductSpec(join(spec_x.complex, spec_y.complex), spec_x.dims + spec_y.dims)


def generic_bounds(spec: SphereProductSpec, s: int) -> tuple[int, int]:
    """Cohomological lower bound and dimension/connectivity upper bound.

    The upper bound uses the minimal cell structure: homotopy dimension is
    the largest total cell degree, connectivity is ``min k_i - 1`` over
    vertices that occur in the complex.
    """
    _check_s(s)
    lower = mixed_norm(spec, s)[0]
    K = spec.complex
    if K.is_empty:
        return lower, 0
    hdim = max(sum(spec.dims[i - 1] for i in f) for f in K.maximal_faces)
    conn = min(spec.dims[i - 1] for i in K.vertices) - 1
    upper = (s * hdim) // (conn + 1)
    assert lower <= upper
    return lower, upper


def weighted_dim(K: SimplicialComplex, weights: Sequence[int]) -> int:
    """Largest total weight of a face, minus one."""
    weights = tuple(int(c) for c in weights)
    if len(weights) != K.n:
        raise DomainError(f"expected {K.n} weights, got {len(weights)}")
    if any(c < 0 for c in weights):
        raise DomainError("weights must be nonnegative")
    return max(sum(weights[i - 1] for i in f) for f in K.maximal_faces) - 1


def tc_polyhedral_general(K: SimplicialComplex, cone_lengths: Sequence[int], s: int) -> int:
    """``TC_s = s (1 + weighted_dim)`` for a polyhedral product whose factors
    have ``TC_s = zcl_s`` and ``TC_s = s * cone length``.  Those two
    hypotheses on the factors are the caller's responsibility.
    """
    _check_s(s)
    return s * (1 + weighted_dim(K, cone_lengths))


# -- brute-force oracles ------------------------------------------------

def mixed_norm_bruteforce(spec: SphereProductSpec, s: int, all_faces: bool = False) -> int:
    """Maximum of the prefix-recursive mixed norm over ORDERED tuples.

    With ``all_faces`` the tuples range over every face, not only maximal
    ones.  Used as an independent oracle in tests.
    """
    K = spec.complex
    pool = K.faces() if all_faces else list(K.maximal_faces)
    sets = [frozenset(f) for f in pool]
    even = frozenset(spec.even)
    return max(mixed_value_recursive(t, even) for t in itertools.product(sets, repeat=s))
