"""Unit spheres with the half-turn-equals-one-half metric and the elementary
sphere paths used by the planner.

Every path here is a great-circle arc run at unit speed and then held:

    p(t) = cos(2 pi u) x + sin(2 pi u) w,   u = clip(t - delay, 0, length)

with ``x`` the start, ``w`` a unit tangent at ``x`` and ``length`` the arc
length in the normalized metric.  Before ``delay`` the path sits exactly at
``x``; from ``delay + length`` on it sits exactly at its stored end point.
That snapping makes endpoint and hold properties bitwise exact.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError

TWO_PI = 2.0 * np.pi
UNIT_TOL = 1e-12
POLE_TOL = 1e-12
# paths snap to their end point once this close to the arrival time
SNAP = 1e-12


def base_point(k: int) -> np.ndarray:
    e = np.zeros(k + 1)
    e[0] = 1.0
    return e


def as_point(x, k: int | None = None, tol: float = UNIT_TOL) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise DomainError(f"a sphere point needs at least 2 coordinates, got shape {x.shape}")
    if k is not None and x.size != k + 1:
        raise DomainError(f"expected a point of S^{k} ({k + 1} coordinates), got {x.size}")
    if abs(np.linalg.norm(x) - 1.0) > tol:
        raise DomainError(f"not a unit vector (norm {np.linalg.norm(x)!r})")
    return x


def angle(x, y) -> np.ndarray:
    """Angle between unit vectors, accurate near 0 and near pi."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape[-1] != y.shape[-1]:
        raise DomainError("points live on spheres of different dimension")
    return 2.0 * np.arctan2(np.linalg.norm(x - y, axis=-1), np.linalg.norm(x + y, axis=-1))


def dist(x, y):
    """Geodesic distance normalized so antipodal points are 1/2 apart."""
    return angle(x, y) / TWO_PI


def field_nu(x) -> np.ndarray:
    """Unit tangent field on an odd sphere: rotate each consecutive
    coordinate pair by a quarter turn."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1] % 2:
        raise DomainError(f"nu is defined on odd spheres only, got S^{x.shape[-1] - 1}")
    out = np.empty_like(x)
    out[..., 0::2] = -x[..., 1::2]
    out[..., 1::2] = x[..., 0::2]
    return out


def is_pole(x, tol: float = POLE_TOL) -> bool:
    x = np.asarray(x, dtype=float)
    return abs(abs(x[0]) - 1.0) <= tol


def field_upsilon(x, tol: float = POLE_TOL) -> np.ndarray:
    """Unit tangent field on an even sphere minus the poles: the odd-sphere
    rotation applied to the coordinates after the first, normalized."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1] % 2 == 0:
        raise DomainError(f"upsilon is defined on even spheres only, got S^{x.shape[-1] - 1}")
    if is_pole(x, tol):
        raise DomainError("upsilon is undefined at the poles")
    v = np.zeros_like(x)
    v[1:] = field_nu(x[1:])
    nrm = np.linalg.norm(v)
    if nrm == 0.0:
        raise DomainError("upsilon is undefined at the poles")
    return v / nrm


@dataclass(frozen=True)
class SpherePath:
    """A delayed, unit-speed great-circle arc followed by a hold.

    ``kind`` names the rule that produced it; it does not affect evaluation.
    """

    start: np.ndarray
    tangent: np.ndarray
    end: np.ndarray
    length: float
    delay: float = 0.0
    kind: str = "constant"

    @property
    def dim(self) -> int:
        return self.start.size - 1

    @property
    def arrival(self) -> float:
        return self.delay + self.length

    def with_delay(self, delay: float) -> "SpherePath":
        return replace(self, delay=float(delay))

    def ending_at(self, y) -> "SpherePath":
        """Same motion, but snap to ``y`` (a point numerically equal to the
        arc end) on arrival."""
        return replace(self, end=np.asarray(y, dtype=float))

    def __call__(self, t):
        t_arr = np.asarray(t, dtype=float)
        out = eval_arcs(self.start[None], self.tangent[None], self.end[None],
                        np.array([self.length]), np.array([self.delay]), np.atleast_1d(t_arr))[0]
        return out[0] if t_arr.ndim == 0 else out


def eval_arcs(starts, tangents, ends, lengths, delays, t) -> np.ndarray:
    """Evaluate a batch of arcs on a common time grid.

    Arrays are ``(m, k+1)`` for points, ``(m,)`` for lengths and delays and
    ``(T,)`` for times; the result is ``(m, T, k+1)``.
    """
    t = np.asarray(t, dtype=float)
    lengths = np.asarray(lengths, dtype=float)
    delays = np.asarray(delays, dtype=float)
    u = t[None, :] - delays[:, None]
    u = np.minimum(np.maximum(u, 0.0), lengths[:, None])
    phase = TWO_PI * u
    out = (np.cos(phase)[..., None] * starts[:, None, :]
           + np.sin(phase)[..., None] * tangents[:, None, :])
    before = t[None, :] <= delays[:, None]
    after = t[None, :] >= (delays + lengths)[:, None] - SNAP
    # holding at the start wins over arrival for (near) zero-length arcs
    out = np.where(after[..., None], ends[:, None, :], out)
    out = np.where(before[..., None], starts[:, None, :], out)
    return out


def _constant(x: np.ndarray, kind: str = "constant") -> SpherePath:
    return SpherePath(x, np.zeros_like(x), x, 0.0, 0.0, kind)


def rule_geodesic(x, y) -> SpherePath:
    """Shortest arc from ``x`` to ``y``; antipodal input is rejected."""
    x = as_point(x)
    y = as_point(y, x.size - 1)
    if np.array_equal(x, y):
        return _constant(x, "geodesic")
    theta = float(angle(x, y))
    if np.linalg.norm(x + y) <= 1e-12:
        raise DomainError("geodesic rule is undefined for antipodal points")
    # unit tangent at x pointing to y; projection is stable for small angles
    w = y - np.dot(x, y) * x
    nrm = np.linalg.norm(w)
    if nrm == 0.0:
        return SpherePath(x, np.zeros_like(x), y, theta / TWO_PI, 0.0, "geodesic")
    return SpherePath(x, w / nrm, y, theta / TWO_PI, 0.0, "geodesic")


def rule_semicircle_odd(x) -> SpherePath:
    """Half turn from ``x`` to ``-x`` along the ``nu`` direction."""
    x = as_point(x)
    return SpherePath(x, field_nu(x), -x, 0.5, 0.0, "semicircle_nu")


def rule_semicircle_even(x) -> SpherePath:
    """Half turn from ``x`` to ``-x`` along the ``upsilon`` direction."""
    x = as_point(x)
    return SpherePath(x, field_upsilon(x), -x, 0.5, 0.0, "semicircle_upsilon")


def rule_meridian(x, y, tol: float = POLE_TOL) -> SpherePath:
    """Pole-to-opposite-pole half turn through the point ``(0, 1, 0, ...)``."""
    x = as_point(x)
    y = as_point(y, x.size - 1)
    e0 = base_point(x.size - 1)
    e1 = np.zeros_like(x)
    e1[1] = 1.0
    down = np.max(np.abs(x - e0)) <= tol and np.max(np.abs(y + e0)) <= tol
    up = np.max(np.abs(x + e0)) <= tol and np.max(np.abs(y - e0)) <= tol
    if down or up:
        return SpherePath(x, e1, y, 0.5, 0.0, "meridian")
    raise DomainError("meridian rule only joins the two poles")
