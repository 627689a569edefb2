"""Named example complexes and the exhaustive small-complex corpus."""

from __future__ import annotations

import itertools
from functools import lru_cache

from .formulas import SphereProductSpec
from .simplicial import SimplicialComplex, from_maximal_faces

K1_FACES = [[1, 2], [2, 3], [3, 4]]
K2_FACES = [[1, 2], [1, 3], [1, 4]]


def path_complex() -> SimplicialComplex:
    return from_maximal_faces(4, K1_FACES)


def star_complex() -> SimplicialComplex:
    return from_maximal_faces(4, K2_FACES)


def sphere(k: int) -> SphereProductSpec:
    return SphereProductSpec(from_maximal_faces(1, [[1]]), (k,), f"S^{k}")


@lru_cache(maxsize=None)
def small_complexes(max_n: int = 4, max_facets: int = 4) -> tuple[SimplicialComplex, ...]:
    """Every complex on [n], n <= max_n, with at most ``max_facets`` maximal
    faces and no ghost vertices (labelled, not up to isomorphism)."""
    out = []
    for n in range(1, max_n + 1):
        subsets = [frozenset(c) for r in range(1, n + 1)
                   for c in itertools.combinations(range(1, n + 1), r)]
        full = frozenset(range(1, n + 1))
        for r in range(1, max_facets + 1):
            for combo in itertools.combinations(subsets, r):
                if any(a < b or b < a for a, b in itertools.combinations(combo, 2)):
                    continue
                if frozenset().union(*combo) != full:
                    continue
                out.append(from_maximal_faces(n, [sorted(f) for f in combo]))
    return tuple(out)


# dimension patterns applied to every complex: all odd, all even, mixed
_PATTERNS = (
    ("odd", (1, 3, 1, 3)),
    ("even", (2, 2, 2, 2)),
    ("mixed", (1, 2, 3, 2)),
    ("mixed2", (2, 1, 2, 3)),
)


def corpus(max_n: int = 4, max_facets: int = 4, patterns=None) -> list[SphereProductSpec]:
    """Small complexes crossed with parity patterns (sphere dims in {1, 2, 3})."""
    pats = _PATTERNS if patterns is None else [p for p in _PATTERNS if p[0] in patterns]
    out = []
    for idx, K in enumerate(small_complexes(max_n, max_facets)):
        for tag, dims in pats:
            name = f"c{idx:03d}-{tag}"
            out.append(SphereProductSpec(K, dims[: K.n], name))
    return out
