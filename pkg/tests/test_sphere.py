import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from polytc import sphere as S
from polytc.errors import DomainError


def unit_vectors(k):
    coords = st.floats(-1, 1, allow_nan=False)
    return (st.lists(coords, min_size=k + 1, max_size=k + 1)
            .map(np.array)
            .filter(lambda v: np.linalg.norm(v) > 1e-3)
            .map(lambda v: v / np.linalg.norm(v)))


def test_distance_examples():
    e0 = S.base_point(2)
    assert S.dist(e0, e0) == 0.0
    assert S.dist(e0, -e0) == pytest.approx(0.5, abs=1e-15)
    assert S.dist(e0, np.array([0.0, 1.0, 0.0])) == pytest.approx(0.25, abs=1e-15)
    with pytest.raises(DomainError):
        S.dist(e0, S.base_point(3))


def test_as_point_validation():
    with pytest.raises(DomainError):
        S.as_point([1.0, 1.0])
    with pytest.raises(DomainError):
        S.as_point([1.0])
    with pytest.raises(DomainError):
        S.as_point([1.0, 0.0], k=2)
    assert S.as_point([0.0, 1.0]).tolist() == [0.0, 1.0]


def test_field_domains():
    with pytest.raises(DomainError):
        S.field_nu(S.base_point(2))
    with pytest.raises(DomainError):
        S.field_upsilon(S.base_point(1))
    with pytest.raises(DomainError):
        S.field_upsilon(-S.base_point(2))
    assert S.is_pole(-S.base_point(4)) and not S.is_pole(np.array([0.0, 1.0, 0.0]))


@pytest.mark.parametrize("k", [1, 3, 5])
@given(data=st.data())
def test_nu_is_a_unit_tangent_field(k, data):
    x = data.draw(unit_vectors(k))
    v = S.field_nu(x)
    assert abs(np.dot(v, x)) < 1e-12
    assert abs(np.linalg.norm(v) - 1) < 1e-12


@pytest.mark.parametrize("k", [2, 4])
@given(data=st.data())
def test_upsilon_is_a_unit_tangent_field_off_the_poles(k, data):
    x = data.draw(unit_vectors(k).filter(lambda v: np.linalg.norm(v[1:]) > 1e-3))
    v = S.field_upsilon(x)
    assert v[0] == 0.0
    assert abs(np.dot(v, x)) < 1e-12
    assert abs(np.linalg.norm(v) - 1) < 1e-12


def test_constant_geodesic():
    x = np.array([0.6, 0.8])
    p = S.rule_geodesic(x, x)
    assert p.length == 0.0
    assert np.array_equal(p(np.linspace(0, 1, 5)), np.tile(x, (5, 1)))


def test_geodesic_rejects_antipodes():
    x = np.array([0.0, 0.6, 0.8])
    with pytest.raises(DomainError):
        S.rule_geodesic(x, -x)


@pytest.mark.parametrize("k", [1, 2, 3])
@given(data=st.data())
def test_geodesic_endpoints_and_speed(k, data):
    x = data.draw(unit_vectors(k))
    y = data.draw(unit_vectors(k).filter(lambda v: np.linalg.norm(v + x) > 1e-2))
    p = S.rule_geodesic(x, y)
    assert np.array_equal(p(0.0), x)
    assert np.array_equal(p(1.0), y)
    if p.length > 0:
        assert np.array_equal(p(p.length), y)
    assert p.length == pytest.approx(float(S.dist(x, y)), abs=1e-15)
    ts = np.linspace(0, p.length, 9)
    pts = p(ts)
    assert np.allclose(np.linalg.norm(pts, axis=1), 1.0, atol=1e-12)
    # constant speed: distance from the start grows linearly
    assert np.allclose(S.dist(pts, x), ts, atol=1e-9)


@given(data=st.data())
def test_delayed_path_holds_exactly(data):
    x = data.draw(unit_vectors(3))
    delay = data.draw(st.floats(0, 0.5))
    p = S.rule_semicircle_odd(x).with_delay(delay)
    before = np.linspace(0, delay, 4)
    assert np.array_equal(p(before), np.tile(x, (4, 1)))
    assert np.array_equal(p(delay + 0.5), -x)
    assert p.arrival == delay + 0.5


@pytest.mark.parametrize("k", [1, 3])
def test_odd_semicircle_passes_through_nu(k):
    x = S.base_point(k)
    p = S.rule_semicircle_odd(x)
    assert np.allclose(p(0.25), S.field_nu(x), atol=1e-15)
    assert np.array_equal(p(0.5), -x)


def test_even_semicircle_stays_off_the_poles():
    x = np.array([0.3, 0.0, np.sqrt(1 - 0.09)])
    p = S.rule_semicircle_even(x)
    pts = p(np.linspace(0, 0.5, 101))
    assert np.all(np.abs(np.abs(pts[:, 0]) - 1) > 0.1)
    assert np.array_equal(pts[-1], -x)


def test_meridian():
    e0 = S.base_point(2)
    p = S.rule_meridian(e0, -e0)
    assert np.allclose(p(0.25), [0.0, 1.0, 0.0], atol=1e-15)
    assert np.array_equal(p(0.5), -e0)
    assert S.rule_meridian(-e0, e0).kind == "meridian"
    with pytest.raises(DomainError):
        S.rule_meridian(e0, e0)


def test_ending_at_snaps_the_end():
    x = S.base_point(1)
    target = np.array([-1.0, 1e-17])
    p = S.rule_semicircle_odd(x).ending_at(target)
    assert np.array_equal(p(0.5), target)


def test_batched_evaluation_shape():
    starts = np.array([[1.0, 0.0], [0.0, 1.0]])
    tangents = np.array([[0.0, 1.0], [-1.0, 0.0]])
    out = S.eval_arcs(starts, tangents, -starts, [0.5, 0.25], [0.0, 0.1], np.linspace(0, 1, 7))
    assert out.shape == (2, 7, 2)
    assert np.array_equal(out[:, 0], starts)
