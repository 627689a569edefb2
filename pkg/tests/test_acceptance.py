"""Acceptance criteria, one test each.

Every test prints a single ``criterion N: PASS|FAIL`` line (visible even
without ``-s``) before asserting, so a run doubles as a report.
"""

import itertools
import math
import time

import pytest

from polytc import algebra as A
from polytc import harness as H
from polytc.corpus import corpus, small_complexes, sphere
from polytc.formulas import SphereProductSpec, mixed_norm


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail, elapsed, limit=None):
        timing = f"{elapsed:.1f}s" + (f" (limit {limit:g}s)" if limit else "")
        with capsys.disabled():
            print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'}  {title}  [{detail}; {timing}]")
    return emit


def _failure_summary(rep, limit=3):
    return "; ".join(f"{f['property']}: {f['detail']}" for f in rep.failures[:limit])


def test_criterion_1_reference_values(report):
    t0 = time.perf_counter()
    rows = H.closed_form_rows()
    elapsed = time.perf_counter() - t0
    wrong = [r for r in rows if r[1] != r[2]]
    claims = {r[0].split(" n=")[0].split(" c1=")[0].split(" s=")[0] for r in rows}
    ok = not wrong and elapsed < 10
    report(1, "reference values", ok, f"{len(rows) - len(wrong)}/{len(rows)} exact", elapsed, 10)
    assert not wrong, wrong[:5]
    assert elapsed < 10
    assert {"TC_3 of the path-shaped index", "TC_3 of the star-shaped index", "two simplices",
            "skeleton", "fat wedge"} <= claims


def test_criterion_2_formula_equivalences(report):
    specs = corpus()
    t0 = time.perf_counter()
    rep = H.verify_formulas(specs, (2, 3, 4), pairs=20, seed=0, closed_forms=False)
    elapsed = time.perf_counter() - t0
    n_complexes = len({sp.complex for sp in specs})
    ok = rep.passed and n_complexes >= 50
    report(2, "formula equivalences", ok,
           f"{n_complexes} complexes, {len(specs)} specs, {rep.checks} exact checks, "
           f"{len(rep.failures)} failures", elapsed)
    assert n_complexes >= 50
    assert {d for sp in specs for d in sp.dims} == {1, 2, 3}
    assert rep.passed, _failure_summary(rep)


def test_criterion_3_certificates(report):
    t0 = time.perf_counter()
    rep = H.verify_certificates(corpus(), (2, 3))
    sanity = []
    for k in (2, 4):
        alg = A.ExteriorAlgebra(sphere(k))
        eps = alg.eps((1,))
        for s in range(2, 7):
            power = A.zd_bar(eps, s) ** s
            expected = A.TensorElement.basis(alg, [(1,)] * s, (1 - s) * math.factorial(s))
            sanity.append(power == expected)
    elapsed = time.perf_counter() - t0
    ok = rep.passed and all(sanity) and elapsed < 60
    report(3, "certificate soundness", ok,
           f"{rep.checks} certificates, {len(rep.failures)} failures, "
           f"{sum(sanity)}/{len(sanity)} bar-power identities", elapsed, 60)
    assert rep.passed, _failure_summary(rep)
    assert all(sanity)
    assert elapsed < 60


def test_criterion_4_search_oracle(report):
    t0 = time.perf_counter()
    mismatches, count = [], 0
    for K in small_complexes(3, 4):
        for dims in itertools.product((1, 2), repeat=K.n):
            spec = SphereProductSpec(K, dims)
            for s in (2, 3):
                count += 1
                found = A.zcl_lower_search(spec, s)
                value = mixed_norm(spec, s)[0]
                if found.truncated or found.length != value:
                    mismatches.append((K.maximal_faces, dims, s, found, value))
    elapsed = time.perf_counter() - t0
    ok = not mismatches and elapsed < 120
    report(4, "cup-length search = mixed norm", ok,
           f"{count - len(mismatches)}/{count} instances agree", elapsed, 120)
    assert not mismatches, mismatches[:3]
    assert elapsed < 120


def test_criterion_5_planner(report):
    specs = corpus(max_n=3)
    t0 = time.perf_counter()
    failed, runs, trials = [], 0, 0
    for spec in specs:
        for s in (2, 3):
            rep = H.verify_planner(spec, s, trials=1000, tol=1e-9, seed=0, grid=256,
                                   delta=1e-4, lipschitz=100.0)
            runs += 1
            trials += rep.checks
            if not rep.passed:
                failed.append((spec.name, s, _failure_summary(rep)))
    elapsed = time.perf_counter() - t0
    ok = not failed and elapsed < 300
    report(5, "planner verification", ok,
           f"{runs} spec/s runs, {trials} configurations, {len(failed)} failing runs", elapsed, 300)
    assert not failed, failed[:3]
    assert elapsed < 300


def test_criterion_6_sandwich(report):
    t0 = time.perf_counter()
    rows = H.sandwich_rows(corpus(), (2, 3))
    bad = [r for r in rows if not (r[2] == r[3] == r[4] - 1)]
    elapsed = time.perf_counter() - t0
    report(6, "certificate count = norm = domains - 1", not bad,
           f"{len(rows) - len(bad)}/{len(rows)} entries close", elapsed)
    assert not bad, bad[:5]
