"""Command-line interface.

Verbs: certify, mc-delta3, mc-concentration, mc-crosscheck, haar-verify,
moments, verify-suite.  Exit code 0 iff the run produced no failed verdict
and no error; errors print a machine-readable JSON object and exit 2.
"""

from __future__ import annotations

import argparse
import sys

from . import experiments
from .errors import GapcertError
from .graphs import GraphError


def _add_common(parser):
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--out", type=str, default=None,
                        help="write the JSON report to this path")
    parser.add_argument("--json", action="store_true",
                        help="print the full JSON report to stdout")
    parser.add_argument("--threads", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gapcert",
        description="Gap certificates for 2-local projector Hamiltonians",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("certify", help="certify a graph from an edge-list file")
    p.add_argument("graph_file")
    p.add_argument("--model", choices=("goe", "haar"), required=True)
    p.add_argument("--d", type=int, help="local dimension (goe)")
    p.add_argument("--q", type=int, help="base dimension (haar)")
    p.add_argument("--t", type=int, help="moment order (haar)")
    p.add_argument("--strategy", choices=("auto", "two-leg", "star"),
                   default="auto")
    _add_common(p)

    p = sub.add_parser("mc-delta3", help="validity frequency of the 3-site bound")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--threshold", type=float, required=True)
    _add_common(p)

    p = sub.add_parser("mc-concentration", help="empirical trace and norm tails")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--n", type=int, default=100_000)
    p.add_argument("--md-p-max", type=int, default=6)
    _add_common(p)

    p = sub.add_parser("mc-crosscheck", help="dense 3-site gap vs closed form")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--product-controls", type=int, default=0)
    _add_common(p)

    p = sub.add_parser("haar-verify", help="frustration-freeness / defect audit")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--max-chain", type=int, default=3)
    p.add_argument("--star-legs", type=int, default=None)
    _add_common(p)

    p = sub.add_parser("moments", help="exact moments and the m_d estimate")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--p-max", type=int, default=6)
    _add_common(p)

    p = sub.add_parser("verify-suite", help="run the acceptance checks")
    p.add_argument("--level", choices=("fast", "full"), default="fast")
    _add_common(p)

    return parser


def _run(args) -> experiments.ExperimentReport:
    if args.command == "certify":
        if args.model == "goe":
            if args.d is None:
                raise GapcertError("--d is required for the goe model")
            model = {"kind": "goe", "d": args.d, "seed": args.seed}
        else:
            if args.q is None or args.t is None:
                raise GapcertError("--q and --t are required for the haar model")
            model = {"kind": "haar", "q": args.q, "t": args.t}
        report, _ = experiments.run_certification(
            args.graph_file, model, strategy=args.strategy
        )
        return report
    if args.command == "mc-delta3":
        return experiments.mc_delta3_frequency(
            args.d, args.n, args.threshold, args.seed, threads=args.threads
        )
    if args.command == "mc-concentration":
        return experiments.mc_concentration(
            args.d, args.delta, args.epsilon, args.n, args.seed,
            md_p_max=args.md_p_max, threads=args.threads,
        )
    if args.command == "mc-crosscheck":
        return experiments.mc_ed_crosscheck(
            args.d, args.n, args.seed, product_controls=args.product_controls
        )
    if args.command == "haar-verify":
        return experiments.haar_verify(
            args.q, args.t, max_chain=args.max_chain, star_legs=args.star_legs
        )
    if args.command == "moments":
        return experiments.moment_report(args.d, p_max=args.p_max)
    if args.command == "verify-suite":
        return experiments.verify_suite(level=args.level, seed=args.seed,
                                        threads=args.threads)
    raise AssertionError(args.command)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = _run(args)
    except (GapcertError, GraphError, OSError, ValueError) as exc:
        import json
        print(json.dumps({"error": {
            "type": type(exc).__name__, "message": str(exc),
        }}))
        return 2
    if args.out:
        experiments.write_report(report, args.out)
    if args.json:
        sys.stdout.write(experiments.report_to_json(report))
    else:
        print(f"[{report.experiment_kind}]")
        for verdict in report.verdicts:
            mark = "PASS" if verdict.passed else "FAIL"
            print(f"  {mark}  {verdict.name}: measured={verdict.measured!r} "
                  f"{verdict.comparator} target={verdict.target!r}")
        total = len(report.verdicts)
        passed = sum(1 for v in report.verdicts if v.passed)
        print(f"  {passed}/{total} verdicts passed")
    return 0 if report.all_passed else 1


if __name__ == "__main__":
    sys.exit(main())
