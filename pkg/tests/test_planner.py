import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polytc import planner as P
from polytc import sphere as S
from polytc.corpus import sphere
from polytc.errors import AmbiguityError, DomainError, PlannerConsistencyError
from polytc.formulas import make_spec, mixed_norm
from polytc.harness import sample_configuration
from strategies import specs

E0_2 = S.base_point(2)
X2 = np.array([0.0, 0.6, 0.8])


def torus():
    return make_spec(2, [[1, 2]], [1, 1])


def test_configuration_validation():
    sp = sphere(2)
    with pytest.raises(DomainError):
        P.Configuration(sp, [[[1.0, 0.0, 0.0]], [[1.0, 0.0, 0.0]]])
    with pytest.raises(DomainError):
        P.Configuration(sp, [[[2.0, 0.0, 0.0]]])
    with pytest.raises(DomainError):
        P.Configuration(sp, [[[1.0, 0.0]]])
    wedge = make_spec(2, [[1], [2]], [1, 1])
    with pytest.raises(DomainError):
        P.Configuration(wedge, [[[0.0, 1.0]], [[0.0, 1.0]]])


def test_configuration_is_immutable_and_hashable():
    c = P.Configuration(sphere(2), [[E0_2, X2]])
    with pytest.raises(AttributeError):
        c.rows = ()
    with pytest.raises(ValueError):
        c.rows[0][0, 0] = 5.0
    same = P.Configuration.from_dict(sphere(2), json.loads(c.to_json()))
    assert same == c and hash(same) == hash(c)
    assert c.support(1) == () and c.support(2) == (1,)


def test_malformed_columns_are_domain_errors():
    with pytest.raises(DomainError):
        P.Configuration.from_dict(sphere(2), {"cols": []})
    with pytest.raises(DomainError):
        P.Configuration.from_columns(torus(), [[[1.0, 0.0]]])


def test_classification_examples():
    st_ = P.classify(P.Configuration(sphere(2), [[X2, -X2]]))
    assert st_.partitions == (((1, 2),),)
    assert st_.avoiding == (1,) and st_.norm == 1
    st_ = P.classify(P.Configuration(sphere(1), [[[0.0, 1.0], [0.0, -1.0]]]))
    assert st_.norm == 0 and st_.repeats == ((),)
    st_ = P.classify(P.Configuration(sphere(2), [[E0_2, -E0_2, X2]]))
    assert st_.partitions == (((1, 2), (3,)),)
    assert st_.avoiding == () and st_.flag(1) == 1 and st_.norm == 1
    st_ = P.classify(P.Configuration(sphere(2), [[X2, X2, E0_2]]))
    assert st_.repeats == ((2,),) and st_.flag(1) == 0


def test_stratum_json():
    st_ = P.classify(P.Configuration(sphere(2), [[E0_2, -E0_2]]))
    d = st_.to_dict()
    assert set(d) == {"partitions", "avoiding_poles", "repeats", "pole_flags", "norm"}
    assert d["pole_flags"] == {"1": 1} and P.stratum_norm(st_) == d["norm"] == 0


def test_ambiguity_band():
    y = np.array([np.cos(5e-9), np.sin(5e-9)])
    with pytest.raises(AmbiguityError):
        P.classify(P.Configuration(sphere(1), [[[1.0, 0.0], y]]))
    far = np.array([np.cos(1e-7), np.sin(1e-7)])
    assert P.classify(P.Configuration(sphere(1), [[[0.0, 1.0], far]])).norm == 1


def test_rule_choices():
    idx, pp, st_ = P.plan(P.Configuration(sphere(2), [[X2, -X2]]))
    assert idx == 1
    assert pp.rule_table() == [["geodesic", "semicircle_upsilon"]]
    idx, pp, _ = P.plan(P.Configuration(sphere(3), [[[0, 1.0, 0, 0], [0, -1.0, 0, 0]]]))
    assert idx == 0 and pp.rule_table() == [["geodesic", "semicircle_nu"]]
    _, pp, _ = P.plan(P.Configuration(sphere(2), [[E0_2, -E0_2]]))
    assert pp.rule_table() == [["geodesic", "meridian"]]


def test_polar_row_is_held_for_the_first_half():
    _, pp, _ = P.plan(P.Configuration(sphere(2), [[E0_2, -E0_2]]))
    for t in (0.0, 0.25, 0.5):
        assert np.array_equal(pp.point(2, t)[0], E0_2)
    assert np.array_equal(pp.point(2, 1.0)[0], -E0_2)


def test_delays_follow_distance_to_base_point():
    _, pp, _ = P.plan(P.Configuration(torus(), [[[0.0, 1.0]] * 2, [[-1.0, 0.0]] * 2]))
    assert pp.delays == pytest.approx((0.25, 0.0))


def test_generic_torus_norm():
    rng = np.random.default_rng(1)
    c = sample_configuration(torus(), 2, rng, faces=[(1, 2), (1, 2)])
    assert P.plan(c)[0] == 2


def test_inconsistent_stratum_is_reported():
    c = P.Configuration(sphere(2), [[X2, E0_2]])
    bogus = P.Stratum(partitions=(((1, 2),),), avoiding=(), repeats=((),), pole_flags=((1, 1),))
    with pytest.raises(PlannerConsistencyError):
        P.local_rule(c, bogus)


def test_domain_count():
    assert P.domain_count(sphere(2), 3) == 4
    assert P.domain_count(torus(), 2) == 3


def test_trace_layout():
    c = P.Configuration(torus(), [[[1.0, 0.0], [0.0, 1.0]], [[1.0, 0.0], [-1.0, 0.0]]])
    _, pp, _ = P.plan(c)
    text = P.trace_csv(pp, 5)
    lines = text.strip().split("\n")
    assert lines[0].split(",") == ["t", "p1_x1_0", "p1_x1_1", "p1_x2_0", "p1_x2_1",
                                   "p2_x1_0", "p2_x1_1", "p2_x2_0", "p2_x2_1"]
    assert len(lines) == 6
    last = [float(v) for v in lines[-1].split(",")]
    assert last == [1.0, 1.0, 0.0, 1.0, 0.0, 0.0, 1.0, -1.0, 0.0]
    with pytest.raises(DomainError):
        P.trace_rows(pp, 1)


def _check_plan(config):
    idx, pp, st_ = P.plan(config)
    spec, s = config.spec, config.s
    t = np.linspace(0, 1, 65)
    evals = pp.eval(t)
    for i, block in enumerate(evals, start=1):
        for j in range(1, s + 1):
            assert np.array_equal(block[j - 1, 0], config.entry(i, 1))
            assert np.array_equal(block[j - 1, -1], config.entry(i, j))
        assert np.all(block[0] == config.entry(i, 1))
        e0 = S.base_point(spec.dims[i - 1])
        if np.array_equal(config.entry(i, 1), e0):
            assert np.all(block[:, t <= 0.5] == e0)
        assert np.allclose(np.linalg.norm(block, axis=2), 1.0, atol=1e-12)
    # every path stays inside the polyhedral product
    for T in range(t.size):
        for j in range(s):
            supp = tuple(i + 1 for i, b in enumerate(evals)
                         if np.max(np.abs(b[j, T] - S.base_point(b.shape[2] - 1))) > 1e-12)
            assert spec.complex.contains(supp)
    return idx


@settings(max_examples=40)
@given(specs(max_n=3, max_facets=3), st.integers(2, 3), st.integers(0, 2**32 - 1),
       st.sampled_from(["generic", "degenerate"]))
def test_plans_are_valid_and_bounded(spec, s, seed, mode):
    rng = np.random.default_rng(seed)
    config = sample_configuration(spec, s, rng, mode)
    try:
        idx = _check_plan(config)
    except AmbiguityError:
        return
    assert 0 <= idx <= mixed_norm(spec, s)[0]


def test_witness_cells_reach_the_top_domain():
    for spec in [sphere(2), torus(), make_spec(3, [[1, 2], [2, 3]], [1, 2, 1])]:
        for s in (2, 3):
            value, wit = mixed_norm(spec, s)
            rng = np.random.default_rng(7)
            config = sample_configuration(spec, s, rng, faces=wit.faces)
            assert P.plan(config)[0] == value


def test_geodesic_rows_are_continuous_but_steep_near_antipodes():
    x = np.array([0.0, 0.6, 0.8])
    t = np.linspace(0, 1, 257)

    def trace(y):
        return P.plan(P.Configuration(sphere(2), [[x, y]]))[1].eval(t)[0]

    for eps in (1e-1, 1e-2):
        y = -x + eps * np.array([1.0, 0.0, 0.0])
        y /= np.linalg.norm(y)
        ratios = []
        for h in (1e-5, 1e-6):
            z = y + h * np.array([0.0, 0.8, -0.6])
            z /= np.linalg.norm(z)
            ratios.append(np.max(np.linalg.norm(trace(y) - trace(z), axis=2)) / np.linalg.norm(y - z))
        # the gap shrinks with the shift (no jump) at a rate near 1/eps
        assert ratios[0] == pytest.approx(ratios[1], rel=0.05)
        assert 0.5 / eps < ratios[0] < 5 / eps
