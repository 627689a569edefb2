"""Randomized and exhaustive checks tying formulas, certificates and the
planner together.  Failures are collected as data in a report rather than
raised, and every report is a pure function of its inputs and seed."""

from __future__ import annotations

import itertools
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import formulas as F
from . import sphere
from .algebra import ExteriorAlgebra, build_certificate, is_zero_divisor
from .corpus import K1_FACES, K2_FACES, sphere as sphere_spec
from .errors import AmbiguityError, CertificateError, PlannerConsistencyError, PolyTCError
from .formulas import SphereProductSpec
from .planner import TOL, Configuration, plan
from .simplicial import (
    fat_wedge_removed,
    from_maximal_faces,
    skeleton,
    two_simplices,
)

GRID = 256
DELTA = 1e-4
LIPSCHITZ = 100.0


@dataclass
class VerificationReport:
    kind: str
    spec_id: str
    s: object
    trials: int
    seed: int | None = None
    tolerances: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    max_norm_seen: int | None = None
    expected_norm: int | None = None
    checks: int = 0
    strata_seen: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, prop: str, detail: str, configuration=None) -> None:
        self.failures.append({"property": prop, "configuration": configuration, "detail": detail})

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "spec": self.spec_id,
            "s": self.s,
            "trials": self.trials,
            "seed": self.seed,
            "tolerances": self.tolerances,
            "checks": self.checks,
            "max_norm_seen": self.max_norm_seen,
            "expected_norm": self.expected_norm,
            "strata_seen": [list(p) for p in self.strata_seen],
            "passed": self.passed,
            "failures": self.failures,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("POLYTC_THREADS", "1")))
    except ValueError:
        return 1


def _spec_id(spec: SphereProductSpec) -> str:
    return spec.name or json.dumps(spec.to_dict(), sort_keys=True)


# -- sampling ---------------------------------------------------------------

def _random_point(rng: np.random.Generator, k: int) -> np.ndarray:
    while True:
        v = rng.standard_normal(k + 1)
        nrm = np.linalg.norm(v)
        if nrm > 1e-6:
            return v / nrm


def _random_face(spec: SphereProductSpec, rng: np.random.Generator) -> tuple[int, ...]:
    top = spec.complex.maximal_faces[rng.integers(spec.complex.num_maximal)]
    keep = rng.random(len(top)) < 0.75
    return tuple(v for v, k in zip(top, keep) if k)


def sample_configuration(spec: SphereProductSpec, s: int, rng: np.random.Generator,
                         mode: str = "generic", faces: Sequence[Iterable[int]] | None = None
                         ) -> Configuration:
    """Random configuration on a product of open cells.

    ``generic`` draws independent uniform points on the cells' open parts
    (one cell per column, random or given by ``faces``).  ``degenerate``
    then, each with probability 1/2, repeats earlier columns, puts entries at
    a pole and makes entries agree up to sign with earlier ones.
    """
    if mode not in ("generic", "degenerate"):
        raise ValueError(f"unknown sampling mode {mode!r}")
    if faces is None:
        faces = [_random_face(spec, rng) for _ in range(s)]
    faces = [tuple(f) for f in faces]
    rows = [np.tile(sphere.base_point(k), (s, 1)) for k in spec.dims]
    for j, face in enumerate(faces):
        for i in face:
            rows[i - 1][j] = _random_point(rng, spec.dims[i - 1])
    if mode == "degenerate":
        for j in range(1, s):
            if rng.random() < 0.5:
                src = int(rng.integers(j))
                for row in rows:
                    row[j] = row[src]
                faces[j] = faces[src]
        for j, face in enumerate(faces):
            for i in face:
                if rng.random() < 0.5:
                    sign = 1.0 if rng.random() < 0.5 else -1.0
                    rows[i - 1][j] = sign * sphere.base_point(spec.dims[i - 1])
        for j in range(1, s):
            for i in faces[j]:
                if rng.random() < 0.5:
                    src = int(rng.integers(j))
                    sign = 1.0 if rng.random() < 0.5 else -1.0
                    rows[i - 1][j] = sign * rows[i - 1][src]
    return Configuration(spec, rows)


def perturb_within_stratum(config: Configuration, st, rng: np.random.Generator,
                           delta: float = DELTA) -> Configuration:
    """Move every non-polar orbit representative by about ``delta`` and
    carry the move to the rest of its part, preserving signs."""
    rows = []
    for i, row in enumerate(config.rows):
        new = row.copy()
        e0 = sphere.base_point(row.shape[1] - 1)
        for part in st.partitions[i]:
            lead = row[part[0] - 1]
            if np.max(np.abs(np.abs(lead) - e0)) <= TOL:
                continue
            step = rng.standard_normal(lead.size)
            step -= np.dot(step, lead) * lead
            step *= delta / max(np.linalg.norm(step), 1e-300)
            moved = lead + step
            moved /= np.linalg.norm(moved)
            for j in part:
                sign = 1.0 if np.dot(row[j - 1], lead) > 0 else -1.0
                new[j - 1] = sign * moved
        rows.append(new)
    return Configuration(config.spec, rows)


def _row_options(c: int, s: int, even: bool) -> list[tuple[int, int]]:
    """Reachable ``(parts - 1, avoids poles)`` for a row whose entries may
    leave the base point in ``c`` of the ``s`` columns."""
    if c < s:
        return [(p, 0) for p in range(c + 1)]
    opts = [(p, 0) for p in range(s)]
    if even:
        opts += [(p, 1) for p in range(s)]
    return opts


def _realize_row(k: int, cols: list[int], s: int, parts: int, avoid: int, odd: bool,
                 rng: np.random.Generator) -> np.ndarray:
    e0 = sphere.base_point(k)
    row = np.tile(e0, (s, 1))
    order = [int(j) for j in rng.permutation(cols)]
    full = len(cols) == s
    use_pole = not avoid and (not full or not odd or rng.random() < 0.5)
    groups = parts if use_pole else parts + 1
    points = [_random_point(rng, k) for _ in range(groups)]

    def put(j, g):
        row[j] = (1.0 if rng.random() < 0.5 else -1.0) * points[g]

    for t, j in enumerate(order):
        if t < groups:
            put(j, t)
        elif not use_pole:
            put(j, groups - 1)
        elif (full and t == groups) or groups == 0 or rng.random() < 0.5:
            row[j] = -e0
        else:
            put(j, int(rng.integers(groups)))
    return row


def stratum_shapes(spec: SphereProductSpec, s: int, rng: np.random.Generator
                   ) -> list[tuple[tuple[int, int], Configuration]]:
    """One configuration for every reachable ``(partition norm, number of
    pole-avoiding even rows)`` pair.

    Classification only sees equality up to sign and pole membership, and an
    entry at ``-e0`` behaves like the base point there, so multisets of
    maximal faces reach every pair.
    """
    even = set(spec.even)
    found: dict[tuple[int, int], tuple] = {}
    for tup in itertools.combinations_with_replacement(spec.complex.maximal_faces, s):
        cols = [[j for j, f in enumerate(tup) if i in f] for i in range(1, spec.n + 1)]
        reach: dict[tuple[int, int], tuple] = {(0, 0): ()}
        for i, c in enumerate(cols, start=1):
            step: dict[tuple[int, int], tuple] = {}
            for (a, b), picks in reach.items():
                for p, av in _row_options(len(c), s, i in even):
                    step.setdefault((a + p, b + av), picks + ((p, av),))
            reach = step
        for pair, picks in reach.items():
            found.setdefault(pair, (cols, picks))
    out = []
    for pair in sorted(found):
        cols, picks = found[pair]
        rows = [_realize_row(k, c, s, p, av, k % 2 == 1, rng)
                for k, c, (p, av) in zip(spec.dims, cols, picks)]
        out.append((pair, Configuration(spec, rows)))
    return out


# -- planner ------------------------------------------------------------------

def _support_masks(evals: list[np.ndarray], tol: float) -> np.ndarray:
    """Support bitmask of every path at every grid time: shape ``(s, T)``."""
    masks = None
    for i, block in enumerate(evals):
        e0 = sphere.base_point(block.shape[2] - 1)
        off = np.max(np.abs(block - e0), axis=2) > tol
        bit = off.astype(np.int64) << i
        masks = bit if masks is None else masks | bit
    return masks


def _check_trial(spec, s, trial, seed, tol, grid, delta, lipschitz, witness, expected):
    """Sample trial ``trial`` from its own substream and check it."""
    rng = np.random.default_rng([seed, trial])
    mode = "generic" if trial % 2 == 0 else "degenerate"
    config = sample_configuration(spec, s, rng, mode, witness if trial == 0 else None)
    return _check_config(config, f"trial {trial} ({mode})", rng, tol, grid, delta, lipschitz,
                         expected)


def _check_config(config, label, rng, tol, grid, delta, lipschitz, expected):
    """Run every planner property on one configuration.

    Returns ``((domain index, stratum) or None, failures)``.
    """
    spec, s = config.spec, config.s
    fails = []

    def fail(prop, detail):
        fails.append({"property": prop, "configuration": config.to_dict(),
                      "detail": f"{label}: {detail}"})

    try:
        norm, pp, st = plan(config, tol)
    except (AmbiguityError, PlannerConsistencyError) as exc:
        fail("classification", str(exc))
        return None, fails
    if norm > expected:
        fail("norm_bound", f"stratum norm {norm} exceeds {expected}")

    t = np.linspace(0.0, 1.0, grid)
    evals = pp.eval(t)
    for i, block in enumerate(evals):
        row = config.rows[i]
        err0 = np.max(np.abs(block[:, 0, :] - row[0]))
        err1 = np.max(np.abs(block[:, -1, :] - row))
        if max(err0, err1) > tol:
            fail("endpoints", f"row {i + 1}: start error {err0:.3g}, end error {err1:.3g}")
        if np.max(np.abs(block[0] - row[0])) > tol:
            fail("first_path_constant", f"row {i + 1} moves in path 1")
        e0 = sphere.base_point(row.shape[1] - 1)
        first_half = t <= 0.5
        second_half = t >= 0.5
        if np.array_equal(row[0], e0) and not np.all(block[:, first_half, :] == e0):
            fail("two_section", f"row {i + 1} starts at the base point but moves before t=1/2")
        for j in range(s):
            if np.array_equal(row[j], e0) and not np.all(block[j, second_half, :] == e0):
                fail("two_section", f"row {i + 1} of path {j + 1} is not at the base point after t=1/2")

    faces = spec.complex.face_masks
    supports = _support_masks(evals, tol)
    bad = sorted({int(m) for m in np.unique(supports)} - faces)
    if bad:
        fail("containment", f"supports {bad} (bitmasks) are not faces")

    moved = perturb_within_stratum(config, st, rng, delta)
    try:
        _, pp2, st2 = plan(moved, tol)
    except (AmbiguityError, PlannerConsistencyError) as exc:
        fail("continuity", f"perturbed configuration not plannable: {exc}")
        return (norm, st), fails
    if st2 != st:
        fail("continuity", "perturbation left the stratum")
        return (norm, st), fails
    shift = max(float(np.max(np.linalg.norm(a - b, axis=1))) for a, b in zip(config.rows, moved.rows))
    gaps = [float(np.max(np.linalg.norm(a - b, axis=2))) for a, b in zip(evals, pp2.eval(t))]
    gap = max(gaps)
    if gap > lipschitz * max(shift, 1e-300) and gap > tol:
        i = int(np.argmax(gaps))
        row = config.rows[i]
        # steep but continuous near antipodal pairs: report how close they are
        anti = float(np.min(np.linalg.norm(row[1:] + row[0], axis=1))) if s > 1 else float("nan")
        fail("continuity", f"path gap {gap:.3g} for input shift {shift:.3g} (ratio "
                           f"{gap / shift:.0f}) in row {i + 1}; nearest antipodal pair to "
                           f"column 1 at distance {anti:.3g}")
    return (norm, st), fails


def verify_planner(spec: SphereProductSpec, s: int, trials: int = 1000, tol: float = TOL,
                   seed: int = 0, grid: int = GRID, delta: float = DELTA,
                   lipschitz: float = LIPSCHITZ, shapes: bool = True) -> VerificationReport:
    """Planner properties on ``trials`` samples, alternating generic and
    degenerate; trial 0 is a generic sample on the norm-maximizing cells.

    With ``shapes`` (and ``trials > 0``) one extra configuration per
    reachable stratum shape is checked as well, see :func:`stratum_shapes`.
    """
    F._check_s(s)
    expected, wit = F.mixed_norm(spec, s)
    rep = VerificationReport("planner", _spec_id(spec), s, trials, seed,
                             {"classification": tol, "base_point": tol, "endpoint": tol,
                              "continuity_delta": delta, "continuity_lipschitz": lipschitz,
                              "grid": grid},
                             expected_norm=expected)
    if trials <= 0:
        return rep
    args = (spec, s)
    rest = (seed, tol, grid, delta, lipschitz, wit.faces, expected)

    def run(trial):
        return _check_trial(*args, trial, *rest)

    workers = _workers()
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(run, range(trials)))
    else:
        results = [run(k) for k in range(trials)]

    if shapes:
        build_rng = np.random.default_rng([seed, 1, 1])
        for idx, (pair, config) in enumerate(stratum_shapes(spec, s, build_rng)):
            rng = np.random.default_rng([seed, 1, idx + 2])
            got, fails = _check_config(config, f"shape {pair}", rng, tol, grid, delta, lipschitz,
                                       expected)
            st = got and got[1]
            if st and (st.partition_norm, len(st.avoiding)) != pair:
                fails.append({"property": "stratum_coverage", "configuration": config.to_dict(),
                              "detail": f"shape {pair} classified as "
                                        f"{(st.partition_norm, len(st.avoiding))}"})
            results.append((got, fails))

    seen = -1
    shapes_seen = set()
    for got, fails in results:
        rep.checks += 1
        rep.failures.extend(fails)
        if got is not None:
            norm, st = got
            seen = max(seen, norm)
            shapes_seen.add((st.partition_norm, len(st.avoiding)))
    rep.max_norm_seen = seen if seen >= 0 else None
    rep.strata_seen = sorted(shapes_seen)
    if rep.max_norm_seen != expected:
        rep.fail("norm_coverage", f"largest stratum norm seen {rep.max_norm_seen}, expected {expected}")
    return rep


# -- formulas -------------------------------------------------------------------

def _pairs(specs: Sequence[SphereProductSpec], count: int, seed: int) -> list[tuple[int, int]]:
    rng = np.random.default_rng(seed)
    return [tuple(int(v) for v in rng.integers(len(specs), size=2)) for _ in range(count)]


def verify_formulas(corpus: Sequence[SphereProductSpec], s_range: Iterable[int],
                    pairs: int = 20, seed: int = 0, closed_forms: bool = True) -> VerificationReport:
    """Exact formula identities over the corpus and the closed-form grids."""
    s_values = list(s_range)
    rep = VerificationReport("formulas", f"corpus[{len(corpus)}]", s_values, len(corpus), seed)

    def check(ok: bool, prop: str, detail: str):
        rep.checks += 1
        if not ok:
            rep.fail(prop, detail)

    seen_complexes = set()
    for spec in corpus:
        K = spec.complex
        sets = [frozenset(f) for f in K.maximal_faces]
        for s in s_values:
            if (K, s) not in seen_complexes:
                seen_complexes.add((K, s))
                best = 0
                for tup in itertools.product(sets, repeat=s):
                    a, b = F.norm_symmetric(tup), F.norm_recursive(tup)
                    check(a == b, "norm_forms", f"{K} {tup}: {a} != {b}")
                    best = max(best, a)
                check(F.norm_ns(K, s)[0] == best, "norm_ns", f"{K} s={s}")
                check(F.tc_s(SphereProductSpec(K, (2,) * K.n), s)[0] == s * (1 + K.dim),
                      "even_specialization", f"{K} s={s}")
            value = F.mixed_norm(spec, s)[0]
            for backend in ("numba", "numpy"):
                check(F.mixed_norm(spec, s, backend)[0] == value, "backends", f"{spec.name} s={s}")
            brute = F.mixed_norm_bruteforce(spec, s)
            check(brute == value, "mixed_forms", f"{spec.name} s={s}: {brute} != {value}")
            if not spec.even:
                check(value == F.norm_ns(K, s)[0], "odd_specialization", f"{spec.name} s={s}")
            lo, hi = F.generic_bounds(spec, s)
            check(lo <= value <= hi, "bounds", f"{spec.name} s={s}: {lo} <= {value} <= {hi}")
        if not spec.even:
            w = K.num_maximal
            for s in range(max(w, 2), max(w, 2) + 3):
                try:
                    ok = F.linear_growth_check(spec, s)
                except AssertionError:
                    ok = False
                check(ok, "linear_growth", f"{spec.name} s={s}")

    for a, b in _pairs(corpus, pairs, seed):
        x, y = corpus[a], corpus[b]
        for s in s_values:
            tx, ty = F.tc_s(x, s)[0], F.tc_s(y, s)[0]
            joined = F.tc_s(F.product_spec(x, y), s)[0]
            check(joined == tx + ty, "join_additivity", f"{x.name} * {y.name} s={s}: {joined} != {tx + ty}")
            big, small = (x, y) if x.complex.dim >= y.complex.dim else (y, x)
            formula = max(F.tc_s(big, s)[0], F.tc_s(small, s)[0],
                          F.cat_power(big.complex, s - 1) + F.cat_power(small.complex, 1))
            direct = F.tc_s(F.wedge_spec(big, small), s)[0]
            check(formula == direct, "wedge", f"{big.name} v {small.name} s={s}: {formula} != {direct}")

    if closed_forms:
        for name, expected, computed in closed_form_rows():
            check(expected == computed, "closed_form", f"{name}: expected {expected}, got {computed}")
    return rep


# -- certificates -----------------------------------------------------------------

def verify_certificates(corpus: Sequence[SphereProductSpec], s_range: Iterable[int]) -> VerificationReport:
    """Certificate soundness on every corpus member."""
    s_values = list(s_range)
    rep = VerificationReport("certificates", f"corpus[{len(corpus)}]", s_values, len(corpus))
    for spec in corpus:
        alg = ExteriorAlgebra(spec)
        for s in s_values:
            rep.checks += 1
            value, wit = F.mixed_norm(spec, s)
            tag = f"{spec.name or spec.to_dict()} s={s}"
            try:
                cert = build_certificate(spec, s, wit.faces, alg)
            except CertificateError as exc:
                rep.fail("certificate", f"{tag}: {exc}")
                continue
            jprime = frozenset.intersection(*map(frozenset, wit.faces)) & frozenset(spec.even)
            if cert.count != value:
                rep.fail("count", f"{tag}: {cert.count} factors, norm {value}")
            if not all(is_zero_divisor(f) for f in cert.factors):
                rep.fail("zero_divisor", tag)
            if cert.product.is_zero():
                rep.fail("nonzero", tag)
            if abs(cert.distinguished[1]) != 2 ** len(jprime):
                rep.fail("distinguished", f"{tag}: coefficient {cert.distinguished[1]}")
            if not spec.even and cert.count != F.norm_ns(spec.complex, s)[0]:
                rep.fail("odd_count", tag)
            if not spec.odd and cert.count != s * (1 + spec.complex.dim):
                rep.fail("even_count", tag)
    return rep


# -- reference values -------------------------------------------------------------

def _odd(K) -> SphereProductSpec:
    return SphereProductSpec(K, (1,) * K.n)


def fat_wedge_expected(n: int, removed: int) -> int:
    if removed <= 1:
        return n * (n - 1) - removed
    delta, odd = divmod(removed, 2)
    return n * (n - 1) - (delta + 1 if odd else delta)


def closed_form_rows() -> list[tuple[str, int, int]]:
    """``(claim, expected, computed)`` for every closed-form reference value."""
    rows = []
    k1 = _odd(from_maximal_faces(4, K1_FACES))
    k2 = _odd(from_maximal_faces(4, K2_FACES))
    rows.append(("TC_3 of the path-shaped index", 6, F.tc_s(k1, 3)[0]))
    rows.append(("TC_3 of the star-shaped index", 5, F.tc_s(k2, 3)[0]))
    for c1 in range(3, 6):
        for c2 in range(2, c1):
            for s in range(2, 6):
                rows.append((f"two simplices c1={c1} c2={c2} s={s}", (s - 1) * c1 + c2,
                             F.tc_s(_odd(two_simplices(c1, c2)), s)[0]))
    for n in range(2, 7):
        for d in range(1, n + 1):
            for s in range(2, 6):
                rows.append((f"skeleton n={n} d={d} s={s}", min(s * d, (s - 1) * n),
                             F.tc_s(_odd(skeleton(n, d)), s)[0]))
    for n in (4, 5):
        for r in range(n):
            for removed in itertools.combinations(range(1, n + 1), r):
                rows.append((f"fat wedge n={n} removed={list(removed)}", fat_wedge_expected(n, r),
                             F.tc_s(_odd(fat_wedge_removed(n, removed)), n)[0]))
    for k in (1, 3, 5):
        for s in range(2, 7):
            rows.append((f"S^{k} s={s}", s - 1, F.tc_s(sphere_spec(k), s)[0]))
    for k in (2, 4):
        for s in range(2, 7):
            rows.append((f"S^{k} s={s}", s, F.tc_s(sphere_spec(k), s)[0]))
    return rows


def sandwich_rows(corpus: Sequence[SphereProductSpec], s_range: Iterable[int]):
    """``(name, s, certificate count, norm, domain count)`` per corpus entry."""
    from .algebra import certificate_for
    from .planner import domain_count

    out = []
    for spec in corpus:
        for s in s_range:
            try:
                count = certificate_for(spec, s).count
            except PolyTCError:
                count = None
            out.append((spec.name, s, count, F.mixed_norm(spec, s)[0], domain_count(spec, s)))
    return out
