"""Abstract simplicial complexes on the vertex set [n] = {1, ..., n}.

A complex is stored by its antichain of maximal faces.  The empty face is
always a member, so the "empty" complex is ``{()}`` and has dimension -1.
Vertices are 1-based.  Faces are sorted tuples of ints; internally most of
the package works with bitmasks where vertex ``i`` is bit ``i - 1``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import DomainError

Face = tuple[int, ...]


def face_to_mask(face: Iterable[int]) -> int:
    mask = 0
    for v in face:
        mask |= 1 << (v - 1)
    return mask


def mask_to_face(mask: int) -> Face:
    out = []
    v = 1
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


def _canonical_face(face: Iterable[int], n: int) -> Face:
    members = sorted(set(int(v) for v in face))
    for v in members:
        if v < 1 or v > n:
            raise DomainError(f"vertex {v} outside [1, {n}]")
    return tuple(members)


def _maximal_antichain(faces: Iterable[Face]) -> tuple[Face, ...]:
    uniq = sorted(set(faces), key=lambda f: (-len(f), f))
    kept: list[Face] = []
    kept_sets: list[frozenset] = []
    for f in uniq:
        fs = frozenset(f)
        if any(fs <= k for k in kept_sets):
            continue
        kept.append(f)
        kept_sets.append(fs)
    if not kept:
        return ((),)
    return tuple(sorted(kept))


@dataclass(frozen=True)
class SimplicialComplex:
    """Simplicial complex on ``[n]`` given by its maximal faces.

    Build instances through :func:`from_maximal_faces` (or the other
    constructors below) so the antichain invariant holds; the raw
    constructor trusts its input.
    """

    n: int
    maximal_faces: tuple[Face, ...]

    # -- queries ---------------------------------------------------------

    @cached_property
    def maximal_masks(self) -> tuple[int, ...]:
        return tuple(face_to_mask(f) for f in self.maximal_faces)

    @property
    def dim(self) -> int:
        return max(len(f) for f in self.maximal_faces) - 1

    @property
    def num_maximal(self) -> int:
        return len(self.maximal_faces)

    @property
    def is_pure(self) -> bool:
        return len({len(f) for f in self.maximal_faces}) == 1

    @property
    def is_empty(self) -> bool:
        """True for the complex ``{()}`` whose only face is the empty one."""
        return self.maximal_faces == ((),)

    @cached_property
    def vertices(self) -> Face:
        """Vertices that appear in at least one face (ghosts excluded)."""
        return tuple(sorted({v for f in self.maximal_faces for v in f}))

    def contains_mask(self, mask: int) -> bool:
        return any(mask & ~m == 0 for m in self.maximal_masks)

    def contains(self, face: Iterable[int]) -> bool:
        return self.contains_mask(face_to_mask(face))

    def __contains__(self, face) -> bool:
        return self.contains(face)

    def iter_faces(self) -> Iterator[Face]:
        """Yield every face once, in (size, lexicographic) order."""
        seen: set[Face] = set()
        for f in self.maximal_faces:
            for r in range(len(f) + 1):
                for sub in itertools.combinations(f, r):
                    seen.add(sub)
        yield from sorted(seen, key=lambda f: (len(f), f))

    def faces(self) -> list[Face]:
        return list(self.iter_faces())

    @cached_property
    def face_masks(self) -> frozenset[int]:
        return frozenset(face_to_mask(f) for f in self.iter_faces())

    # -- serialization ---------------------------------------------------

    def to_dict(self) -> dict:
        faces = [] if self.is_empty else [list(f) for f in self.maximal_faces]
        return {"n": self.n, "maximal_faces": faces}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "SimplicialComplex":
        return from_maximal_faces(int(data["n"]), data.get("maximal_faces", []))

    def __repr__(self) -> str:
        body = ", ".join("{" + ",".join(map(str, f)) + "}" for f in self.maximal_faces)
        return f"SimplicialComplex(n={self.n}, [{body}])"


def from_maximal_faces(n: int, faces: Iterable[Iterable[int]]) -> SimplicialComplex:
    """Canonicalize a list of faces into the complex they generate.

    Dominated and duplicate faces are dropped.  An empty list gives ``{()}``.
    """
    if int(n) != n or n <= 0:
        raise DomainError(f"vertex count must be a positive integer, got {n}")
    n = int(n)
    canon = [_canonical_face(f, n) for f in faces]
    return SimplicialComplex(n, _maximal_antichain(canon))


def skeleton(n: int, d: int) -> SimplicialComplex:
    """All subsets of [n] of size at most ``d``."""
    if n <= 0:
        raise DomainError(f"vertex count must be positive, got {n}")
    if d < 0 or d > n:
        raise DomainError(f"skeleton size {d} outside [0, {n}]")
    if d == 0:
        return SimplicialComplex(n, ((),))
    return SimplicialComplex(n, tuple(itertools.combinations(range(1, n + 1), d)))


def full_simplex(n: int) -> SimplicialComplex:
    return skeleton(n, n)


def _shift(face: Face, k: int) -> Face:
    return tuple(v + k for v in face)


def join(k1: SimplicialComplex, k2: SimplicialComplex) -> SimplicialComplex:
    """Join on ``[n1 + n2]``; the index complex of a Cartesian product."""
    faces = [a + _shift(b, k1.n) for a in k1.maximal_faces for b in k2.maximal_faces]
    return from_maximal_faces(k1.n + k2.n, faces)


def disjoint_union(k1: SimplicialComplex, k2: SimplicialComplex) -> SimplicialComplex:
    """Disjoint union on ``[n1 + n2]``; the index complex of a wedge."""
    faces: list[Face] = []
    if not k1.is_empty:
        faces.extend(k1.maximal_faces)
    if not k2.is_empty:
        faces.extend(_shift(f, k1.n) for f in k2.maximal_faces)
    return from_maximal_faces(k1.n + k2.n, faces)


def fat_wedge_removed(n: int, removed: Sequence[int]) -> SimplicialComplex:
    """Fat-wedge index (all proper subsets of [n]) with the facets
    ``[n] - {i}``, ``i in removed``, deleted."""
    removed = set(removed)
    facets = [tuple(v for v in range(1, n + 1) if v != i) for i in range(1, n + 1) if i not in removed]
    smaller = [
        f for f in itertools.combinations(range(1, n + 1), n - 2)
        if set(range(1, n + 1)) - set(f) <= removed
    ]
    return from_maximal_faces(n, facets + smaller)


def two_simplices(c1: int, c2: int) -> SimplicialComplex:
    """Two disjoint simplices of sizes ``c1`` and ``c2``."""
    return disjoint_union(full_simplex(c1), full_simplex(c2))
