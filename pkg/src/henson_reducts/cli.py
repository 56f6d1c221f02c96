"""Command-line front end.

Exit codes: 0 when the checked property holds, 1 when it fails (the
certificate is printed), 2 on usage, input or budget errors.  With
``--format json`` every outcome, errors included, is a single JSON document on
standard output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from .behavior import LEMMAS, Refutation, verify_lemma_table
from .digraph import DigraphError
from .errors import BudgetExceeded, WitnessConstructionError
from .family import build_family_set, distinguish_family, find_blocker, verify_maximality
from .forbidden import ForbiddenSet, ForbiddenSetError, antichain_violation
from .fraisse import build_approximation, verify_extension_property
from .reducts import classify_reducts

WORKERS_ENV = "HENSON_REDUCTS_WORKERS"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def _workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None
    if n < 1:
        raise UsageError(f"{WORKERS_ENV} must be at least 1")
    return n


def _read_set(path: str) -> ForbiddenSet:
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return ForbiddenSet.loads(text)


def _indices(raw: str) -> list[int]:
    try:
        return [int(x) for x in raw.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"indices must be comma-separated integers, got {raw!r}") from None


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# -- commands: each returns (exit code, json payload, text) ---------------------


def cmd_check_antichain(args) -> tuple[int, dict, str]:
    t = _read_set(args.file)
    hit = antichain_violation(t)
    if hit is None:
        return 0, {"antichain": True, "members": len(t)}, "anti-chain: yes\n"
    s, u, f = hit
    payload = {"antichain": False, "certificate": {"smaller": s.to_json(), "larger": u.to_json(), "embedding": list(f)}}
    text = f"anti-chain: no\n  {s.n}-vertex member embeds in {u.n}-vertex member via {list(f)}\n"
    return 1, payload, text


def cmd_classify(args) -> tuple[int, dict, str]:
    t = _read_set(args.file)
    lattice = classify_reducts(t, args.scale)
    ok = lattice.graph_status.recheck(t)
    if args.format == "dot":
        return (0 if ok else 1), lattice.to_json(), lattice.to_dot()
    return (0 if ok else 1), lattice.to_json(), lattice.text()


def cmd_build(args) -> tuple[int, dict, str]:
    t = _read_set(args.file)
    if args.n < 1 or args.level < 0:
        raise UsageError("need --n >= 1 and --level >= 0")
    d = build_approximation(t, args.n, args.level, args.seed, budget=args.budget)
    report = verify_extension_property(d, t, args.level, workers=_workers())
    missing = len(report.missing)
    print(f"unmet realizable demands: {missing} (level {args.level}, {d.n} vertices)", file=sys.stderr)
    code = 0 if missing == 0 else 1
    if args.format == "dot":
        return code, {}, d.to_dot()
    payload = {"digraph": d.to_json(), "order": "index", "report": report.to_json()}
    text = f"{d.n} vertices, {len(d.edges)} edges\n" + "".join(f"{u} -> {v}\n" for u, v in sorted(d.edges))
    return code, payload, text


def cmd_verify_lemma(args) -> tuple[int, dict, str]:
    t = _read_set(args.file)
    reports = verify_lemma_table(args.lemma, t)
    lines, ok = [], True
    for r in reports:
        good = r.recheck(t)
        ok &= good
        lines.append(r.line() + ("" if good else "  [RECHECK FAILED]"))
        if isinstance(r.certificate, Refutation):
            w = r.certificate.witness
            lines.append(f"    witness n={w.n} edges={sorted(w.edges)}")
    payload = {"lemma": args.lemma, "rows": len(reports), "rechecked": ok, "reports": [r.to_json() for r in reports]}
    return (0 if ok else 1), payload, "\n".join(lines) + "\n"


def cmd_family(args) -> tuple[int, dict, str]:
    blocker = find_blocker(args.blocker_max_size, args.budget)
    k = blocker.size
    idx = _indices(args.indices) if args.indices else [k + 2, k + 3]
    t = build_family_set(idx, blocker.tournament)
    anti = antichain_violation(t) is None
    report = verify_maximality(t, blocker.tournament, args.linear_bound)
    ok = anti and report.all_hold and report.recheck(t, blocker.tournament)
    payload = {
        "blocker": blocker.to_json(),
        "indices": idx,
        "forbidden_set": t.to_json(),
        "antichain": anti,
        "maximality": report.to_json(),
    }
    text = (
        f"blocker: {k} vertices, source {blocker.source + 1}, "
        f"3-cycles per vertex {list(blocker.tournament.cycle_counts)}\n"
        f"indices: {idx}; forbidden set has {len(t)} tournaments; anti-chain: {'yes' if anti else 'no'}\n"
        f"minus blocked: {report.minus_blocked}\nsw blocked: {report.sw_blocked}\n"
        f"linear orders up to {report.linear_order_bound} allowed: {report.linear_orders_embed}\n"
        f"extensions of the blocker all forbidden: {report.extension_blocking}\n"
    )
    return (0 if ok else 1), payload, text


def cmd_distinguish(args) -> tuple[int, dict, str]:
    blocker = find_blocker(args.blocker_max_size, args.budget)
    cert = distinguish_family(_indices(args.indices1), _indices(args.indices2), blocker.tournament)
    other = "second" if cert.member_of == "first" else "first"
    text = f"I_{cert.n} is forbidden in the {cert.member_of} family and allowed in the {other}\n"
    return 0, {"certificate": cert.to_json(), "blocker": blocker.to_json()}, text


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="henson-reducts", description="Finite checks for reducts of Henson digraphs.")
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("json", "dot", "text"), default="text")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("check-antichain", parents=[fmt], help="is the forbidden set an anti-chain?")
    s.add_argument("file", help="forbidden set JSON, or - for stdin")
    s.set_defaults(run=cmd_check_antichain)

    s = sub.add_parser("classify", parents=[fmt], help="reduct lattice with scale-tagged graph status")
    s.add_argument("file")
    s.add_argument("--scale", type=int, default=4)
    s.set_defaults(run=cmd_classify)

    s = sub.add_parser("build", parents=[fmt], help="finite approximation of the generic digraph")
    s.add_argument("file")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--level", type=int, default=2)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--budget", type=int, default=400, help="vertex cap for the construction")
    s.set_defaults(run=cmd_build)

    s = sub.add_parser("verify-lemma", parents=[fmt], help="case table with certificates")
    s.add_argument("lemma", choices=LEMMAS)
    s.add_argument("file")
    s.set_defaults(run=cmd_verify_lemma)

    for name, fn in (("family", cmd_family), ("distinguish", cmd_distinguish)):
        s = sub.add_parser(name, parents=[fmt])
        if name == "family":
            s.add_argument("--indices", default="", help="comma-separated I_n sizes (default k+2,k+3)")
            s.add_argument("--linear-bound", type=int, default=12)
        else:
            s.add_argument("--indices1", required=True)
            s.add_argument("--indices2", required=True)
        s.add_argument("--blocker-max-size", type=int, default=8)
        s.add_argument("--budget", type=int, default=200_000, help="tournament candidates for the blocker search")
        s.set_defaults(run=fn)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    as_json = "json" in argv and "--format" in argv
    try:
        args = build_parser().parse_args(argv)
        as_json = args.format == "json"
        if args.format == "dot" and args.command not in ("build", "classify"):
            raise UsageError("--format dot is only available for build and classify")
        code, payload, text = args.run(args)
    except (UsageError, ForbiddenSetError, DigraphError, BudgetExceeded, WitnessConstructionError, ValueError) as exc:
        kind = type(exc).__name__
        if as_json:
            sys.stdout.write(_dump({"error": kind, "message": str(exc)}))
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(_dump(payload) if as_json else text)
    return code


if __name__ == "__main__":
    sys.exit(main())
