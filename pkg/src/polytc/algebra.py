"""Exact rational Stanley-Reisner exterior algebra and zero-divisor certificates.

``H*(X; Q)`` for a polyhedral product of spheres is the exterior algebra on
generators ``eps_i`` (degree ``k_i``) modulo the monomials of non-faces.
Basis monomials ``eps_J`` are keyed by the bitmask of ``J``; tensor basis
elements by tuples of bitmasks.  Coefficients are :class:`fractions.Fraction`.

Sign convention: generators are ordered 1 < ... < n and a monomial is
written in increasing order; multiplying two monomials sorts the
concatenation, each transposition of ``eps_a`` and ``eps_b`` costing
``(-1)^(k_a k_b)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import CertificateError, DomainError
from .formulas import SphereProductSpec, norm_nk
from .simplicial import Face, face_to_mask, mask_to_face


def _popcount(x: int) -> int:
    return bin(x).count("1")


class ExteriorAlgebra:
    """Multiplication tables for ``H*(X; Q)`` of one spec."""

    def __init__(self, spec: SphereProductSpec):
        self.spec = spec
        self.n = spec.n
        self._odd = spec.odd_mask
        self._deg_cache: dict[int, int] = {}
        self._mul_cache: dict[tuple[int, int], tuple[int, int]] = {}

    def degree(self, mask: int) -> int:
        d = self._deg_cache.get(mask)
        if d is None:
            d = sum(self.spec.dims[i - 1] for i in mask_to_face(mask))
            self._deg_cache[mask] = d
        return d

    def is_face(self, mask: int) -> bool:
        return self.spec.complex.contains_mask(mask)

    def monomial_product(self, a: int, b: int) -> tuple[int, int]:
        """``eps_a * eps_b = sign * eps_(a|b)``; returns ``(sign, mask)``, sign 0 for zero."""
        key = (a, b)
        hit = self._mul_cache.get(key)
        if hit is not None:
            return hit
        if a & b or not self.is_face(a | b):
            out = (0, 0)
        else:
            # only odd generators anticommute
            ao = a & self._odd
            bo = b & self._odd
            parity = 0
            while bo:
                low = bo & -bo
                parity += _popcount(ao & ~((low << 1) - 1))
                bo ^= low
            out = (-1 if parity & 1 else 1, a | b)
        self._mul_cache[key] = out
        return out

    # constructors
    def one(self) -> "AlgebraElement":
        return AlgebraElement(self, {0: Fraction(1)})

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    def eps(self, face: Iterable[int], coef=1) -> "AlgebraElement":
        """The basis monomial ``eps_J`` (zero when ``J`` is not a face)."""
        face = tuple(face)
        for v in face:
            if v < 1 or v > self.n:
                raise DomainError(f"vertex {v} outside [1, {self.n}]")
        m = face_to_mask(face)
        if len(set(face)) != len(face) or not self.is_face(m):
            return self.zero()
        return AlgebraElement(self, {m: Fraction(coef)})

    def tensor_one(self, s: int) -> "TensorElement":
        return TensorElement(self, s, {(0,) * s: Fraction(1)})

    def tensor_zero(self, s: int) -> "TensorElement":
        return TensorElement(self, s, {})


def _clean(terms: dict) -> dict:
    return {k: v for k, v in terms.items() if v != 0}


class AlgebraElement:
    __slots__ = ("alg", "terms")

    def __init__(self, alg: ExteriorAlgebra, terms: dict[int, Fraction]):
        self.alg = alg
        for m in terms:
            if not alg.is_face(m):
                raise DomainError(f"{mask_to_face(m)} is not a face")
        self.terms = _clean(terms)

    def _check(self, other):
        if not isinstance(other, AlgebraElement) or other.alg.spec != self.alg.spec:
            raise DomainError("elements live over different carriers")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return AlgebraElement(self.alg, out)

    def __neg__(self):
        return AlgebraElement(self.alg, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "AlgebraElement":
        c = Fraction(c)
        return AlgebraElement(self.alg, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return multiply(self, other)

    __rmul__ = scale

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.terms
        return isinstance(other, AlgebraElement) and self.alg.spec == other.alg.spec and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def has_positive_degree(self) -> bool:
        return bool(self.terms) and 0 not in self.terms

    def sorted_terms(self) -> list[tuple[Face, Fraction]]:
        return sorted((mask_to_face(k), v) for k, v in self.terms.items())

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{v}*e{list(f)}" for f, v in self.sorted_terms())


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    a._check(b)
    alg = a.alg
    out: dict[int, Fraction] = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            sign, m = alg.monomial_product(ma, mb)
            if sign:
                out[m] = out.get(m, 0) + sign * ca * cb
    return AlgebraElement(alg, out)


class TensorElement:
    """Element of the ``s``-fold tensor power of ``H*(X; Q)``."""

    __slots__ = ("alg", "s", "terms")

    def __init__(self, alg: ExteriorAlgebra, s: int, terms: dict[tuple[int, ...], Fraction]):
        self.alg = alg
        self.s = s
        self.terms = _clean(terms)

    @classmethod
    def basis(cls, alg: ExteriorAlgebra, faces: Sequence[Iterable[int]], coef=1) -> "TensorElement":
        key = tuple(face_to_mask(f) for f in faces)
        for m in key:
            if not alg.is_face(m):
                return cls(alg, len(key), {})
        return cls(alg, len(key), {key: Fraction(coef)})

    def _check(self, other):
        if not isinstance(other, TensorElement) or other.s != self.s or other.alg.spec != self.alg.spec:
            raise DomainError("tensor elements have different carriers or lengths")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return TensorElement(self.alg, self.s, out)

    def __neg__(self):
        return TensorElement(self.alg, self.s, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "TensorElement":
        c = Fraction(c)
        return TensorElement(self.alg, self.s, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return tensor_multiply(self, other)

    __rmul__ = scale

    def __pow__(self, p: int):
        out = self.alg.tensor_one(self.s)
        for _ in range(p):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.terms
        return (isinstance(other, TensorElement) and self.s == other.s
                and self.alg.spec == other.alg.spec and self.terms == other.terms)

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, faces: Sequence[Iterable[int]]) -> Fraction:
        return self.terms.get(tuple(face_to_mask(f) for f in faces), Fraction(0))

    def sorted_terms(self) -> list[tuple[tuple[Face, ...], Fraction]]:
        return sorted((tuple(mask_to_face(m) for m in k), v) for k, v in self.terms.items())

    def to_dict(self) -> dict:
        return {"terms": [{"faces": [list(f) for f in faces], "coef": str(c)}
                          for faces, c in self.sorted_terms()]}

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for faces, c in self.sorted_terms():
            parts.append(f"{c}*" + "(x)".join(f"e{list(f)}" for f in faces))
        return " + ".join(parts)


def tensor_multiply(a: TensorElement, b: TensorElement) -> TensorElement:
    """Koszul product: ``(a_1 x..x a_s)(b_1 x..x b_s) = (-1)^e (a_1 b_1 x..x a_s b_s)``
    with ``e = sum_{i<j} deg(b_i) deg(a_j)``."""
    a._check(b)
    alg = a.alg
    s = a.s
    out: dict[tuple[int, ...], Fraction] = {}
    for ka, ca in a.terms.items():
        a_odd = [alg.degree(m) & 1 for m in ka]
        # suffix[i] = number of odd-degree a_j with j > i
        suffix = [0] * s
        acc = 0
        for i in range(s - 1, -1, -1):
            suffix[i] = acc
            acc += a_odd[i]
        for kb, cb in b.terms.items():
            parity = 0
            sign = 1
            prod = []
            for i in range(s):
                if alg.degree(kb[i]) & 1:
                    parity += suffix[i]
                sg, m = alg.monomial_product(ka[i], kb[i])
                if not sg:
                    break
                sign *= sg
                prod.append(m)
            else:
                if parity & 1:
                    sign = -sign
                key = tuple(prod)
                out[key] = out.get(key, 0) + sign * ca * cb
    return TensorElement(alg, s, out)


def diagonal_pullback(t: TensorElement) -> AlgebraElement:
    """Multiply the tensor factors together (the map induced by the diagonal)."""
    alg = t.alg
    out: dict[int, Fraction] = {}
    for key, c in t.terms.items():
        sign, acc = 1, 0
        for m in key:
            sg, acc = alg.monomial_product(acc, m)
            if not sg:
                break
            sign *= sg
        else:
            out[acc] = out.get(acc, 0) + sign * c
    return AlgebraElement(alg, out)


def is_zero_divisor(t: TensorElement) -> bool:
    return diagonal_pullback(t).is_zero()


def embed(u: AlgebraElement, position: int, s: int) -> TensorElement:
    """``1 x .. x u x .. x 1`` with ``u`` at 1-based ``position``."""
    if not 1 <= position <= s:
        raise DomainError(f"position {position} outside [1, {s}]")
    terms = {}
    for m, c in u.terms.items():
        key = [0] * s
        key[position - 1] = m
        terms[tuple(key)] = c
    return TensorElement(u.alg, s, terms)


def zd_spread(u: AlgebraElement, ell: int, s: int) -> TensorElement:
    """``u x 1 x..x 1 - 1 x..x u x..x 1`` with the second ``u`` in slot ``ell``."""
    if not 2 <= ell <= s:
        raise DomainError(f"ell must lie in [2, {s}], got {ell}")
    return embed(u, 1, s) - embed(u, ell, s)


def zd_bar(u: AlgebraElement, s: int) -> TensorElement:
    """``sum_{i<s} (u in slot i) - (s-1)(u in slot s)``."""
    if s < 2:
        raise DomainError(f"s must be >= 2, got {s}")
    if 0 in u.terms:
        raise DomainError("zd_bar needs an element of positive degree")
    out = embed(u, s, s).scale(-(s - 1))
    for i in range(1, s):
        out = out + embed(u, i, s)
    return out


def product(factors: Sequence[TensorElement], alg: ExteriorAlgebra, s: int) -> TensorElement:
    out = alg.tensor_one(s)
    for f in factors:
        out = out * f
        if out.is_zero():
            break
    return out


def _require_face(alg: ExteriorAlgebra, face: Iterable[int]) -> frozenset:
    f = frozenset(face)
    if not alg.is_face(face_to_mask(f)):
        raise DomainError(f"{tuple(sorted(f))} is not a face")
    return f


def gamma_factors(alg: ExteriorAlgebra, prefix: Sequence[Iterable[int]], face: Iterable[int],
                  ell: int, s: int) -> list[TensorElement]:
    """The spread zero-divisors ``eps_j(ell)`` for ``j`` in
    ``(J_1 & .. & J_{ell-1} - J_ell) | J_ell``, in increasing ``j``."""
    if ell < 2 or len(prefix) != ell - 1:
        raise DomainError("gamma needs ell >= 2 and exactly ell-1 prefix faces")
    sets = [_require_face(alg, f) for f in prefix]
    last = _require_face(alg, face)
    support = (frozenset.intersection(*sets) - last) | last
    return [zd_spread(alg.eps((j,)), ell, s) for j in sorted(support)]


def gamma_product_factor(alg, prefix, face, ell, s) -> tuple[TensorElement, int]:
    """Product of :func:`gamma_factors`, with its factor count."""
    fs = gamma_factors(alg, prefix, face, ell, s)
    return product(fs, alg, s), len(fs)


def eps_bar_even_factors(alg: ExteriorAlgebra, face: Iterable[int], s: int) -> list[TensorElement]:
    f = _require_face(alg, face)
    if not f <= frozenset(alg.spec.even):
        raise DomainError(f"{tuple(sorted(f))} is not contained in the even factors")
    out = []
    for j in sorted(f):
        z = zd_spread(alg.eps((j,)), 2, s)
        out.extend((z, z))
    return out


def eps_bar_even(alg: ExteriorAlgebra, face: Iterable[int], s: int) -> TensorElement:
    """``prod_j (eps_j(2))^2``, equal to ``(-2)^|J'| eps_J' x eps_J' x 1 x..x 1``."""
    face = tuple(sorted(face))
    value = product(eps_bar_even_factors(alg, face, s), alg, s)
    closed = TensorElement.basis(alg, [face, face] + [()] * (s - 2), (-2) ** len(face))
    assert value == closed, f"eps_bar closed form failed for {face}"
    return value


def gamma_bar_factors(alg: ExteriorAlgebra, j1, j2, jprime, s: int) -> list[TensorElement]:
    a = _require_face(alg, j1)
    b = _require_face(alg, j2)
    c = frozenset(jprime)
    support = (a - b) | (b - c)
    return [zd_spread(alg.eps((j,)), 2, s) for j in sorted(support)]


def gamma_bar(alg: ExteriorAlgebra, j1, j2, jprime, s: int) -> TensorElement:
    """``prod eps_j(2)`` over ``j`` in ``(J_1 - J_2) | (J_2 - J')``."""
    return product(gamma_bar_factors(alg, j1, j2, jprime, s), alg, s)


@dataclass
class Certificate:
    factors: list[TensorElement]
    product: TensorElement
    distinguished: tuple[tuple[Face, ...], Fraction]
    tuple_faces: tuple[Face, ...]

    @property
    def count(self) -> int:
        return len(self.factors)

    def to_dict(self) -> dict:
        faces, coef = self.distinguished
        return {
            "factors": [f.to_dict() for f in self.factors],
            "count": self.count,
            "distinguished": {"faces": [list(f) for f in faces], "coef": str(coef)},
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def build_certificate(spec: SphereProductSpec, s: int, faces: Sequence[Iterable[int]],
                      alg: ExteriorAlgebra | None = None) -> Certificate:
    """Nonzero product of ``N(J_1..J_s) + |J'|`` zero-divisors, ``J' = J_1 &..& J_s & J_E``.

    Factors, in order: the squared spreads behind ``eps_bar(J')``, the
    spreads of ``gamma_bar(J_1, J_2)``, then those of ``gamma(J_1..J_l)`` for
    ``l = 3..s``.  Raises :class:`CertificateError` if any check fails.
    """
    if s < 2 or len(faces) != s:
        raise DomainError(f"need s >= 2 faces, got s={s} and {len(faces)} faces")
    alg = alg or ExteriorAlgebra(spec)
    faces = tuple(tuple(sorted(f)) for f in faces)
    sets = [_require_face(alg, f) for f in faces]
    common = frozenset.intersection(*sets)
    jprime = common & frozenset(spec.even)

    factors = eps_bar_even_factors(alg, jprime, s)
    factors += gamma_bar_factors(alg, faces[0], faces[1], jprime, s)
    for ell in range(3, s + 1):
        factors += gamma_factors(alg, faces[: ell - 1], faces[ell - 1], ell, s)

    expected = norm_nk(spec.complex, faces) + len(jprime)
    if len(factors) != expected:
        raise CertificateError(f"factor count {len(factors)} != {expected}")
    for f in factors:
        if not is_zero_divisor(f):
            raise CertificateError("a certificate factor is not a zero-divisor")
    prod = product(factors, alg, s)
    if prod.is_zero():
        raise CertificateError(f"certificate product vanishes for {faces}")

    first = tuple(sorted(jprime | (sets[0] - common)))
    key_faces = (first,) + faces[1:]
    coef = prod.coefficient(key_faces)
    if abs(coef) != 2 ** len(jprime):
        raise CertificateError(f"distinguished coefficient {coef} is not +-2^{len(jprime)}")
    return Certificate(factors, prod, (key_faces, coef), faces)


def certificate_for(spec: SphereProductSpec, s: int) -> Certificate:
    """Certificate built on the mixed-norm witness; its count is ``TC_s``."""
    from .formulas import mixed_norm

    value, wit = mixed_norm(spec, s)
    cert = build_certificate(spec, s, wit.faces)
    if cert.count != value:
        raise CertificateError(f"certificate count {cert.count} != mixed norm {value}")
    return cert


# -- independent lower-bound search ---------------------------------------

@dataclass
class SearchResult:
    length: int
    truncated: bool
    evaluations: int


def generating_family(alg: ExteriorAlgebra, s: int) -> list[tuple[TensorElement, int]]:
    """Spreads ``eps_J(l)`` and bars ``eps_J`` over nonempty faces ``J``,
    paired with ``|J|`` and sorted by it."""
    family = []
    for face in alg.spec.complex.iter_faces():
        if not face:
            continue
        u = alg.eps(face)
        for ell in range(2, s + 1):
            family.append((zd_spread(u, ell, s), len(face)))
        family.append((zd_bar(u, s), len(face)))
    family.sort(key=lambda item: item[1])
    return family


def _integral(t: TensorElement) -> TensorElement:
    return TensorElement(t.alg, t.s, {k: int(v) for k, v in t.terms.items()})


def _normal_key(t: TensorElement):
    items = sorted(t.terms.items())
    g = 0
    for _, v in items:
        g = math.gcd(g, v)
    if items[0][1] < 0:
        g = -g
    return tuple((k, v // g) for k, v in items)


def zcl_lower_search(spec: SphereProductSpec, s: int, budget: int = 1_000_000,
                     stop_at: int | None = None) -> SearchResult:
    """Longest nonzero product found from the generating family.

    Depth-first; an element already reached (up to scalar) with at least
    the same length is not expanded again.  Each factor adds ``|J|``
    generator letters to every term and a nonzero basis tensor carries at
    most ``s * (1 + dim K)`` letters, which bounds the remaining depth.
    The result only ever certifies a lower bound for the zero-divisor
    cup-length.
    """
    alg = ExteriorAlgebra(spec)
    # generators have integer coefficients, so products stay integral
    family = [(_integral(g), w) for g, w in generating_family(alg, s)]
    K = spec.complex
    capacity = s * (K.dim + 1)

    best = 0
    evals = 0
    depth_seen: dict = {}
    truncated = False
    one = TensorElement(alg, s, {(0,) * s: 1})
    # stack entries: (product, length, letters)
    stack = [(one, 0, 0)]
    while stack and not truncated:
        cur, length, letters = stack.pop()
        best = max(best, length)
        if stop_at is not None and best >= stop_at:
            break
        if length + capacity - letters <= best:
            continue
        children = []
        for gen, width in family:
            if letters + width > capacity:
                break
            if evals >= budget:
                truncated = True
                break
            evals += 1
            nxt = cur * gen
            if nxt.is_zero():
                continue
            key = _normal_key(nxt)
            if depth_seen.get(key, -1) >= length + 1:
                continue
            depth_seen[key] = length + 1
            children.append((nxt, length + 1, letters + width))
        if children:
            best = max(best, length + 1)
        stack.extend(reversed(children))
    return SearchResult(best, truncated, evals)
