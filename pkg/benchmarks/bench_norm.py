"""Compare the compiled and the vectorized mixed-norm search.

    python benchmarks/bench_norm.py [--repeat 3]

Both backends must return the same value; the script prints median wall
times per instance and the speedup of the compiled kernel.
"""

from __future__ import annotations

import argparse
import statistics
import time

from polytc import formulas as F
from polytc.simplicial import fat_wedge_removed, skeleton

CASES = [
    ("skeleton(6,3) odd", F.SphereProductSpec(skeleton(6, 3), (1,) * 6), 4),
    ("skeleton(7,3) mixed", F.SphereProductSpec(skeleton(7, 3), (1, 2) * 3 + (1,)), 4),
    ("skeleton(8,4) odd", F.SphereProductSpec(skeleton(8, 4), (3,) * 8), 3),
    ("fat wedge n=6 odd", F.SphereProductSpec(fat_wedge_removed(6, [1, 2, 3]), (1,) * 6), 6),
    ("skeleton(10,3) mixed", F.SphereProductSpec(skeleton(10, 3), (1, 2) * 5), 3),
    ("skeleton(10,3) mixed", F.SphereProductSpec(skeleton(10, 3), (1, 2) * 5), 4),
]


def _time(spec, s, backend, repeat):
    times, value = [], None
    for _ in range(repeat):
        t0 = time.perf_counter()
        value = F.mixed_norm(spec, s, backend)[0]
        times.append(time.perf_counter() - t0)
    return value, statistics.median(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    # compile outside the timed region
    F.mixed_norm(CASES[0][1], 2, "numba")
    print(f"{'instance':<22} {'s':>2} {'value':>6} {'numba [s]':>10} {'numpy [s]':>10} {'speedup':>8}")
    for name, spec, s in CASES:
        v1, t1 = _time(spec, s, "numba", args.repeat)
        v2, t2 = _time(spec, s, "numpy", args.repeat)
        if v1 != v2:
            raise SystemExit(f"backends disagree on {name}: {v1} != {v2}")
        print(f"{name:<22} {s:>2} {v1:>6} {t1:>10.4f} {t2:>10.4f} {t2 / t1:>8.1f}")


if __name__ == "__main__":
    main()
