"""Command-line interface: ``polytc {tc,zcl,plan,verify,examples}``.

Exit codes: 0 success, 2 bad input, 3 certificate failure, 4 ambiguous
configuration, 5 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import formulas as F
from .algebra import certificate_for
from .errors import AmbiguityError, CertificateError, DomainError, PlannerConsistencyError
from .formulas import SphereProductSpec

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_CERTIFICATE = 3
EXIT_AMBIGUITY = 4
EXIT_VERIFY = 5


class InputError(Exception):
    pass


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def load_spec(path: str) -> SphereProductSpec:
    data = _load_json(path)
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object")
    try:
        return SphereProductSpec.from_dict(data)
    except (DomainError, ValueError, TypeError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")
    else:
        print(text)


def _fmt_faces(faces) -> str:
    return " ".join("{" + ",".join(map(str, f)) + "}" for f in faces)


def cmd_tc(args) -> int:
    spec = load_spec(args.spec)
    value, wit = F.tc_s(spec, args.s)
    if args.json:
        print(json.dumps(wit.to_dict()))
    else:
        print(value)
        print(f"witness: {_fmt_faces(wit.faces)}")
    return EXIT_OK


def cmd_zcl(args) -> int:
    spec = load_spec(args.spec)
    try:
        cert = certificate_for(spec, args.s)
    except CertificateError as exc:
        print(f"certificate failure: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATE
    _emit(cert.to_json(), args.out)
    if args.out:
        print(f"{cert.count} zero-divisors, certificate written to {args.out}")
    return EXIT_OK


def cmd_plan(args) -> int:
    from .planner import Configuration, plan, write_trace

    spec = load_spec(args.spec)
    try:
        config = Configuration.from_dict(spec, _load_json(args.config), args.tol)
    except DomainError as exc:
        raise InputError(f"{args.config}: {exc}") from exc
    if config.s != args.s:
        raise InputError(f"configuration has {config.s} columns but --s is {args.s}")
    try:
        index, pp, st = plan(config, args.tol)
    except AmbiguityError as exc:
        print(f"ambiguous configuration: {exc}", file=sys.stderr)
        return EXIT_AMBIGUITY
    summary = {"domain_index": index, "stratum": st.to_dict(), "rules": pp.rule_table(),
               "delays": list(pp.delays)}
    print(json.dumps(summary))
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            write_trace(pp, args.grid, fh)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .harness import verify_planner

    spec = load_spec(args.spec)
    rep = verify_planner(spec, args.s, trials=args.trials, tol=args.tol, seed=args.seed,
                         grid=args.grid)
    _emit(rep.to_json(), args.out)
    return EXIT_OK if rep.passed else EXIT_VERIFY


def example_rows() -> list[tuple[str, int, int]]:
    from .corpus import sphere
    from .harness import closed_form_rows
    from .planner import domain_count
    from .simplicial import from_maximal_faces, two_simplices

    rows = closed_form_rows()
    s1, s2 = sphere(1), sphere(2)
    for s in range(2, 6):
        rows.append((f"wedge S^1 v S^1 s={s}", s, F.tc_wedge(s1, s1, s)))
    rows.append(("wedge S^2 v S^2 s=2", 2, F.tc_wedge(s2, s2, 2)))
    for p in range(1, 5):
        rows.append((f"cat of the {p}-th power of two simplices (3,2)", 3 * p,
                     F.cat_power(two_simplices(3, 2), p)))
    k1 = SphereProductSpec(from_maximal_faces(4, [[1, 2], [2, 3], [3, 4]]), (1,) * 4)
    rows.append(("local domains, path-shaped index s=3", 7, domain_count(k1, 3)))
    for s in range(2, 5):
        rows.append((f"local domains S^3 s={s}", s, domain_count(sphere(3), s)))
        rows.append((f"local domains S^2 s={s}", s + 1, domain_count(s2, s)))
    return rows


def cmd_examples(args) -> int:
    rows = example_rows()
    width = max(len(r[0]) for r in rows)
    print(f"{'claim':<{width}}  {'expected':>8}  {'computed':>8}  result")
    ok = True
    for claim, expected, computed in rows:
        passed = expected == computed
        ok &= passed
        print(f"{claim:<{width}}  {expected:>8}  {computed:>8}  {'PASS' if passed else 'FAIL'}")
    print(f"{sum(e == c for _, e, c in rows)}/{len(rows)} claims reproduced")
    return EXIT_OK if ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="polytc", description=(
        "Sequential topological complexity of polyhedral products of spheres: "
        "exact values, zero-divisor certificates and an explicit motion planner."))
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--spec", required=True, help="spec JSON: n, dims, maximal_faces")
        sp.add_argument("--s", type=int, required=True, help="number of stops (s >= 2)")

    sp = sub.add_parser("tc", help="print TC_s and a witness tuple of faces")
    common(sp)
    sp.add_argument("--json", action="store_true", help="emit {value, witness} JSON")
    sp.set_defaults(func=cmd_tc)

    sp = sub.add_parser("zcl", help="emit a zero-divisor certificate")
    common(sp)
    sp.add_argument("--out", help="write the certificate JSON here instead of stdout")
    sp.set_defaults(func=cmd_zcl)

    sp = sub.add_parser("plan", help="classify a configuration and export its path trace")
    common(sp)
    sp.add_argument("--config", required=True, help='configuration JSON {"columns": ...}')
    sp.add_argument("--grid", type=int, default=256, help="trace grid size (default 256)")
    sp.add_argument("--out", help="trace CSV path")
    sp.add_argument("--tol", type=float, default=1e-9, help="classification tolerance")
    sp.set_defaults(func=cmd_plan)

    sp = sub.add_parser("verify", help="randomized planner verification")
    common(sp)
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.add_argument("--grid", type=int, default=256)
    sp.add_argument("--out", help="write the report JSON here instead of stdout")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("examples", help="reproduce the reference values table")
    sp.set_defaults(func=cmd_examples)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PlannerConsistencyError as exc:
        print(f"internal planner error: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
