"""Command-line front end: ``hnk graph|aut|geodesic|seq|verify``.

Exit codes: 0 success, 1 a claim was refuted or a mismatch found, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import __version__
from .autsearch import stabilizer, translations_transitive, verification_entry
from .counts import Family as SeqFamily, monotonicity_check, u_sequence
from .hgraph import Component, GraphParams, build_graph, to_dot, to_json
from .subsets import UsageError, format_bits
from .symmetries import predicted_aut_order
from .transitivity import classify_geodesic_transitivity, is_s_geodesic_transitive, transitivity_verdict
from .verify import run_verification

EXIT_OK, EXIT_REFUTED, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse already exits 2; keep the message format uniform
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _graph_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--component", choices=["odd", "even"], default=None,
                   help="restrict to one parity component (even k only)")


def _params(args) -> GraphParams:
    comp = Component(args.component) if args.component else Component.WHOLE
    return GraphParams(args.n, args.k, comp)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hnk", description="Build and verify the subset graphs H(n,k).")
    parser.add_argument("--version", action="version", version=f"hnk {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("graph", help="export H(n,k) as DOT or JSON")
    _graph_args(g)
    g.add_argument("--format", choices=["dot", "json"], default="json")

    a = sub.add_parser("aut", help="predicted vs oracle automorphism-group order")
    _graph_args(a)
    a.add_argument("--brute-force", action="store_true", help="run the automorphism search")
    a.add_argument("--strict", action="store_true",
                   help="fail on even-k whole-graph disagreements too")
    a.add_argument("--json", action="store_true")

    t = sub.add_parser("geodesic", help="arc- and geodesic-transitivity verdicts")
    _graph_args(t)
    grp = t.add_mutually_exclusive_group(required=True)
    grp.add_argument("--s", type=int, help="check s-geodesic transitivity for this s")
    grp.add_argument("--full", action="store_true", help="check up to the diameter")

    s = sub.add_parser("seq", help="neighbour-count sequence tables")
    s.add_argument("--family", required=True, choices=[f.value for f in SeqFamily])
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--n", type=int, default=None)
    s.add_argument("--json", action="store_true")

    v = sub.add_parser("verify", help="run every claim check over the grid n <= max-n")
    v.add_argument("--max-n", type=int, default=6)
    v.add_argument("--seed", type=int, default=0, help="seed for sampled composition laws")
    v.add_argument("--strict", action="store_true",
                   help="count even-k whole-graph order disagreements as failures")
    v.add_argument("--out", default=None, help="write the JSON report here instead of stdout")
    v.add_argument("--timings", action="store_true",
                   help="include per-claim runtimes (makes the report run-dependent)")
    return parser


def _cmd_graph(args, out) -> int:
    g = build_graph(_params(args))
    out.write((to_dot(g) if args.format == "dot" else to_json(g)) + "\n")
    return EXIT_OK


def _cmd_aut(args, out) -> int:
    params = _params(args)
    pred = predicted_aut_order(args.n, args.k)
    predicted = pred.value if params.component is Component.WHOLE else pred.component_value
    record = {"graph": params.label, "n": args.n, "k": args.k,
              "component": params.component.value, "predicted": predicted, "case": pred.case_tag}
    verdict = "UNKNOWN"
    if args.brute_force:
        g = build_graph(params)
        entry = verification_entry(g)
        record.update(entry.to_json_dict())
        if predicted is not None:
            verdict = "AGREE" if entry.oracle_order == predicted else "DISAGREE"
    else:
        verdict = "PREDICTED" if predicted is not None else "UNKNOWN"
    record["verdict"] = verdict
    if args.json:
        out.write(json.dumps(record, sort_keys=True) + "\n")
    else:
        out.write(f"{params.label}  case: {pred.case_tag}\n")
        out.write(f"predicted  {predicted if predicted is not None else 'unknown'}\n")
        if args.brute_force:
            out.write(f"oracle     {record['oracle_order']}  "
                      f"(stabilizer of the root: {record['stabilizer_order']}, "
                      f"outside constructed maps: {record['elements_outside_known_group']})\n")
        for c in pred.caveats:
            out.write(f"note       {c}\n")
        out.write(verdict + "\n")
    if verdict == "DISAGREE":
        open_question = args.k % 2 == 0 and params.component is Component.WHOLE
        return EXIT_REFUTED if args.strict or not open_question else EXIT_OK
    return EXIT_OK


def _cmd_geodesic(args, out) -> int:
    params = _params(args)
    if args.k % 2 == 0 and params.component is Component.WHOLE:
        raise UsageError("H(n,k) is disconnected for even k; pass --component odd|even")
    g = build_graph(params)
    if not translations_transitive(g):
        raise UsageError(f"{params.label} is not vertex-transitive")
    stab = stabilizer(g, materialize=False)
    label = params.label
    if args.full:
        v = transitivity_verdict(g, stab)
        out.write(f"{label}  diameter {v.diameter}\n")
        out.write(f"arc-transitive          {'yes' if v.arc_transitive else 'no'}\n")
        for s in sorted(v.s_geodesic_transitive):
            out.write(f"{s}-geodesic transitive   {'yes' if v.s_geodesic_transitive[s] else 'no'}\n")
        out.write(f"geodesic transitive     {'yes' if v.geodesic_transitive else 'no'}\n")
        fail_reps = v.witness_orbits
    else:
        res = is_s_geodesic_transitive(g, args.s, stab)
        out.write(f"{label}\n")
        for i in sorted(res.orbits):
            o = res.orbits[i]
            out.write(f"{i}-geodesics: {o.count}, stabilizer orbits: {len(o.representatives)}\n")
        out.write(f"{args.s}-geodesic transitive   {'yes' if res.transitive else 'no'}\n")
        fail = res.failing_length
        fail_reps = res.orbits[fail].representatives if fail else []
    for rep in fail_reps:
        out.write("orbit representative: " + " ~ ".join(format_bits(v) for v in rep) + "\n")
    if 1 <= args.k <= args.n - 1:
        out.write(f"classification rule     {classify_geodesic_transitivity(args.n, args.k).value}\n")
    return EXIT_OK


def _cmd_seq(args, out) -> int:
    table = u_sequence(args.family, args.k, args.n)
    verdict = monotonicity_check(table)
    if args.json:
        d = table.to_json_dict()
        d["monotonicity"] = {"ok": verdict.ok, "first_violation": verdict.first_violation}
        out.write(json.dumps(d) + "\n")
    else:
        out.write(table.format() + "\n")
        out.write(f"shape: {verdict.describe()}\n")
    return EXIT_OK if verdict.ok else EXIT_REFUTED


def _cmd_verify(args, out) -> int:
    report = run_verification(args.max_n, args.seed)
    text = json.dumps(report.to_json_dict(timings=args.timings), indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    summary = report.summary()
    print(" ".join(f"{k}={v}" for k, v in summary.items()), file=sys.stderr)
    return EXIT_REFUTED if report.refuted(args.strict) else EXIT_OK


COMMANDS = {"graph": _cmd_graph, "aut": _cmd_aut, "geodesic": _cmd_geodesic,
            "seq": _cmd_seq, "verify": _cmd_verify}


def run_cli(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args, out)
    except SystemExit as exc:
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
