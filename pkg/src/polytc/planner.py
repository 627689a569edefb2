"""Sequential motion planner on a polyhedral product of spheres.

A configuration is an ``n x s`` matrix whose entry ``(i, j)`` is a point of
the ``i``-th sphere; column ``j`` is the ``j``-th stop.  The planner sorts a
configuration into a stratum and then moves every column out of column 1
coordinatewise, with a per-row delay that keeps base-point coordinates still
during the first half and lands base-point targets by the midpoint.  The
stratum norm is the index of the local domain the configuration falls in.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import sphere
from .errors import AmbiguityError, DomainError, PlannerConsistencyError
from .formulas import SphereProductSpec, mixed_norm
from .simplicial import Face

TOL = 1e-9


class Configuration:
    """Immutable ``n x s`` matrix of sphere points.

    ``rows[i]`` is an ``(s, k_i + 1)`` array holding row ``i + 1``.
    """

    __slots__ = ("spec", "rows")

    def __init__(self, spec: SphereProductSpec, rows: Sequence, tol: float = TOL):
        if len(rows) != spec.n:
            raise DomainError(f"expected {spec.n} rows, got {len(rows)}")
        arrs = []
        s = None
        for i, (row, k) in enumerate(zip(rows, spec.dims), start=1):
            a = np.array(row, dtype=float)
            if a.ndim != 2 or a.shape[1] != k + 1:
                raise DomainError(f"row {i} must have shape (s, {k + 1}), got {a.shape}")
            if s is None:
                s = a.shape[0]
            elif a.shape[0] != s:
                raise DomainError("rows disagree on the number of columns")
            if not np.all(np.abs(np.linalg.norm(a, axis=1) - 1.0) <= tol):
                raise DomainError(f"row {i} contains a non-unit vector")
            a.setflags(write=False)
            arrs.append(a)
        if not s:
            raise DomainError("a configuration needs at least one column")
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "rows", tuple(arrs))
        for j in range(s):
            supp = self.support(j + 1, tol)
            if not spec.complex.contains(supp):
                raise DomainError(f"column {j + 1} has support {supp}, not a face")

    def __setattr__(self, name, value):
        raise AttributeError("Configuration is immutable")

    @property
    def s(self) -> int:
        return self.rows[0].shape[0]

    def entry(self, i: int, j: int) -> np.ndarray:
        """Point in row ``i``, column ``j`` (both 1-based)."""
        return self.rows[i - 1][j - 1]

    def support(self, j: int, tol: float = TOL) -> Face:
        return tuple(i + 1 for i, row in enumerate(self.rows)
                     if np.max(np.abs(row[j - 1] - sphere.base_point(row.shape[1] - 1))) > tol)

    def columns(self) -> list[list[list[float]]]:
        return [[row[j].tolist() for row in self.rows] for j in range(self.s)]

    @classmethod
    def from_columns(cls, spec: SphereProductSpec, columns, tol: float = TOL) -> "Configuration":
        try:
            rows = [[col[i] for col in columns] for i in range(spec.n)]
        except (IndexError, TypeError) as exc:
            raise DomainError(f"malformed columns: {exc}") from exc
        return cls(spec, rows, tol)

    def to_dict(self) -> dict:
        return {"columns": self.columns()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, spec: SphereProductSpec, data: dict, tol: float = TOL) -> "Configuration":
        if not isinstance(data, dict) or "columns" not in data:
            raise DomainError("configuration JSON needs a 'columns' key")
        return cls.from_columns(spec, data["columns"], tol)

    def __eq__(self, other):
        return (isinstance(other, Configuration) and self.spec == other.spec
                and all(np.array_equal(a, b) for a, b in zip(self.rows, other.rows)))

    def __hash__(self):
        return hash((self.spec, tuple(a.tobytes() for a in self.rows)))


def base_configuration(spec: SphereProductSpec, s: int) -> Configuration:
    return Configuration(spec, [np.tile(sphere.base_point(k), (s, 1)) for k in spec.dims])


@dataclass(frozen=True)
class Stratum:
    """Classification data of a configuration.

    ``partitions[i]`` groups the columns of row ``i + 1`` by equality up to
    sign, parts ordered by least element; ``avoiding`` lists the even rows
    with no entry at either pole; ``repeats[i]`` lists the columns of the
    first part equal (with sign +) to column 1; ``pole_flags`` maps each
    remaining even row to whether its first part touches a pole.
    All indices are 1-based.
    """

    partitions: tuple[tuple[tuple[int, ...], ...], ...]
    avoiding: tuple[int, ...]
    repeats: tuple[tuple[int, ...], ...]
    pole_flags: tuple[tuple[int, int], ...]

    @property
    def partition_norm(self) -> int:
        return sum(len(p) - 1 for p in self.partitions)

    @property
    def norm(self) -> int:
        return self.partition_norm + len(self.avoiding)

    def flag(self, i: int) -> int:
        """Effective pole flag of row ``i``; rows avoiding the poles get 0."""
        return dict(self.pole_flags).get(i, 0)

    def to_dict(self) -> dict:
        return {
            "partitions": [[list(a) for a in p] for p in self.partitions],
            "avoiding_poles": list(self.avoiding),
            "repeats": [list(b) for b in self.repeats],
            "pole_flags": {str(i): t for i, t in self.pole_flags},
            "norm": self.norm,
        }


def _linf_pairs(row: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    diff = np.max(np.abs(row[:, None, :] - row[None, :, :]), axis=2)
    anti = np.max(np.abs(row[:, None, :] + row[None, :, :]), axis=2)
    return diff, anti


def _ambiguous(d: np.ndarray, tol: float) -> bool:
    return bool(np.any((d > tol) & (d < 10 * tol)))


def classify(config: Configuration, tol: float = TOL) -> Stratum:
    """Stratum of ``config``.  Raises :class:`AmbiguityError` when some
    comparison lands strictly between ``tol`` and ``10 * tol``."""
    spec = config.spec
    even = set(spec.even)
    partitions, avoiding, repeats, flags = [], [], [], []
    for i, row in enumerate(config.rows, start=1):
        s = row.shape[0]
        diff, anti = _linf_pairs(row)
        near = np.minimum(diff, anti)
        e0 = sphere.base_point(row.shape[1] - 1)
        pole_d = np.minimum(np.max(np.abs(row - e0), axis=1), np.max(np.abs(row + e0), axis=1))
        if _ambiguous(near[np.triu_indices(s, 1)], tol) or _ambiguous(pole_d, tol) \
                or _ambiguous(diff[0], tol):
            raise AmbiguityError(f"row {i} is within {10 * tol:g} of a stratum boundary")
        leaders: list[int] = []
        parts: list[list[int]] = []
        for j in range(s):
            for p, lead in enumerate(leaders):
                if near[lead, j] <= tol:
                    parts[p].append(j + 1)
                    break
            else:
                leaders.append(j)
                parts.append([j + 1])
        partitions.append(tuple(tuple(p) for p in parts))
        first = parts[0]
        repeats.append(tuple(j for j in first[1:] if diff[0, j - 1] <= tol))
        at_pole = pole_d <= tol
        if i in even:
            if not at_pole.any():
                avoiding.append(i)
            else:
                flags.append((i, int(any(at_pole[j - 1] for j in first))))
    return Stratum(tuple(partitions), tuple(avoiding), tuple(repeats), tuple(flags))


def stratum_norm(st: Stratum) -> int:
    return st.norm


@dataclass(frozen=True)
class PathPlan:
    """``s`` synchronized paths out of column 1.

    ``paths[j][i]`` drives row ``i + 1`` of path ``j + 1``; ``delays[i]`` is
    the common hold time of row ``i + 1``.
    """

    spec: SphereProductSpec
    paths: tuple[tuple[sphere.SpherePath, ...], ...]
    delays: tuple[float, ...]

    @property
    def s(self) -> int:
        return len(self.paths)

    def rule_table(self) -> list[list[str]]:
        """Rule names indexed ``[row][path]``."""
        return [[self.paths[j][i].kind for j in range(self.s)] for i in range(self.spec.n)]

    def eval_row(self, i: int, t) -> np.ndarray:
        """Row ``i`` (1-based) of every path on the grid ``t``: ``(s, T, k_i + 1)``."""
        ps = [self.paths[j][i - 1] for j in range(self.s)]
        return sphere.eval_arcs(
            np.stack([p.start for p in ps]), np.stack([p.tangent for p in ps]),
            np.stack([p.end for p in ps]), np.array([p.length for p in ps]),
            np.array([p.delay for p in ps]), np.atleast_1d(np.asarray(t, dtype=float)))

    def eval(self, t) -> list[np.ndarray]:
        """All rows on the grid ``t``, as a list of ``(s, T, k_i + 1)`` arrays."""
        return [self.eval_row(i, t) for i in range(1, self.spec.n + 1)]

    def point(self, j: int, t: float) -> list[np.ndarray]:
        """Position of path ``j`` (1-based) at time ``t``, one array per row."""
        return [p(t) for p in self.paths[j - 1]]


def _row_path(x, y, kind_rule: str, odd: bool, flag: int, delay: float, tol: float):
    try:
        if kind_rule == "geodesic":
            path = sphere.rule_geodesic(x, y)
        elif odd:
            path = sphere.rule_semicircle_odd(x).ending_at(y)
        elif flag == 0:
            path = sphere.rule_semicircle_even(x).ending_at(y)
        else:
            path = sphere.rule_meridian(x, y, tol)
    except DomainError as exc:
        raise PlannerConsistencyError(f"local rule applied outside its domain: {exc}") from exc
    return path.with_delay(delay)


def local_rule(config: Configuration, st: Stratum, tol: float = TOL) -> PathPlan:
    """Path plan of ``config`` on its stratum ``st``."""
    spec = config.spec
    odd = set(spec.odd)
    s = config.s
    delays = []
    cols: list[list[sphere.SpherePath]] = [[] for _ in range(s)]
    for i, row in enumerate(config.rows, start=1):
        x = row[0]
        delay = 0.5 - float(sphere.dist(x, sphere.base_point(row.shape[1] - 1)))
        delays.append(delay)
        first = set(st.partitions[i - 1][0])
        straight = set(st.repeats[i - 1]) | {1}
        flag = st.flag(i)
        for j in range(1, s + 1):
            rule = "geodesic" if (j not in first or j in straight) else "turn"
            cols[j - 1].append(_row_path(x, row[j - 1], rule, i in odd, flag, delay, tol))
    return PathPlan(spec, tuple(tuple(c) for c in cols), tuple(delays))


def plan(config: Configuration, tol: float = TOL) -> tuple[int, PathPlan, Stratum]:
    """Classify and plan.  Returns ``(domain index, plan, stratum)``."""
    st = classify(config, tol)
    return st.norm, local_rule(config, st, tol), st


def domain_count(spec: SphereProductSpec, s: int) -> int:
    """Number of local domains used by the planner."""
    return mixed_norm(spec, s)[0] + 1


# -- traces -----------------------------------------------------------------

def trace_header(spec: SphereProductSpec, s: int) -> list[str]:
    head = ["t"]
    for j in range(1, s + 1):
        for i, k in enumerate(spec.dims, start=1):
            head.extend(f"p{j}_x{i}_{c}" for c in range(k + 1))
    return head


def trace_rows(path_plan: PathPlan, grid: int) -> tuple[list[str], np.ndarray]:
    if grid < 2:
        raise DomainError("trace grid needs at least 2 points")
    t = np.linspace(0.0, 1.0, grid)
    rows = path_plan.eval(t)
    blocks = [t[:, None]]
    for j in range(path_plan.s):
        blocks.extend(r[j] for r in rows)
    return trace_header(path_plan.spec, path_plan.s), np.hstack(blocks)


def write_trace(path_plan: PathPlan, grid: int, fh) -> None:
    head, data = trace_rows(path_plan, grid)
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(head)
    for line in data:
        w.writerow(repr(float(v)) for v in line)


def trace_csv(path_plan: PathPlan, grid: int) -> str:
    buf = io.StringIO()
    write_trace(path_plan, grid, buf)
    return buf.getvalue()
