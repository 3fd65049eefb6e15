"""Command-line harness: single tasks, full suites, geometry demos."""

import argparse
import sys
from pathlib import Path

from . import bench, manifold


def _add_config_arg(p):
    p.add_argument("--config", metavar="JSON", default=None,
                   help="JSON config file (defaults apply for absent keys)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="da", description="Distribution-alignment domain adaptation harness"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one source->target task")
    run.add_argument("--dataset", required=True, choices=sorted(bench.DATASETS))
    run.add_argument("--source", required=True, help="source domain code, e.g. A")
    run.add_argument("--target", required=True, help="target domain code, e.g. D")
    run.add_argument("--features", required=True, help="directory with <domain>.mdaf files")
    run.add_argument("--method", required=True, choices=bench.METHODS)
    _add_config_arg(run)

    suite = sub.add_parser("suite", help="run a full benchmark suite")
    suite.add_argument("--dataset", required=True, choices=sorted(bench.DATASETS))
    suite.add_argument("--features", required=True)
    _add_config_arg(suite)
    suite.add_argument("--out", default=None, help="write the accuracy table CSV here")
    suite.add_argument("--methods", default=",".join(bench.METHODS),
                       help="comma-separated method list")
    suite.add_argument("--no-fig", action="store_true",
                       help="skip rendering the PNG next to the CSV")

    demo = sub.add_parser("demo", help="emit geodesic demo curves")
    demo.add_argument("--kind", required=True, choices=("sphere", "shape"))
    demo.add_argument("--steps", type=int, default=None,
                      help="sample count (shape default: the 0/0.05/0.5/0.95/1 grid)")
    demo.add_argument("--out", required=True, help="CSV output path")
    demo.add_argument("--no-fig", action="store_true")
    return parser


def _cmd_run(args):
    config = bench.load_config(args.config)
    spec = bench.make_suite(args.dataset, args.features, config=config)
    valid = {d for pair in spec.tasks for d in pair}
    for code in (args.source, args.target):
        if code not in valid:
            raise ValueError(f"domain {code!r} not part of {args.dataset} (expected one of {sorted(valid)})")
    result = bench.run_task(spec, args.source, args.target, args.method)
    print(f"{args.dataset} {args.source}->{args.target} [{result.method}] "
          f"accuracy: {100.0 * result.accuracy:.1f}")
    for i, it in enumerate(result.diagnostics, start=1):
        acc = "n/a" if it.target_accuracy is None else f"{100.0 * it.target_accuracy:.1f}"
        print(f"  iter {i:2d}: mu={it.mu:.4f} churn={it.pseudo_label_churn} accuracy={acc}")
    return 0


def _cmd_suite(args):
    config = bench.load_config(args.config)
    methods = tuple(m.strip() for m in args.methods.split(",") if m.strip())
    spec = bench.make_suite(args.dataset, args.features, config=config, methods=methods)
    table = bench.run_suite(spec, out_csv=args.out)
    print(table.as_text())
    if args.out:
        print(f"wrote {args.out}")
        if not args.no_fig:
            from . import report

            png = str(Path(args.out).with_suffix(".png"))
            report.render_suite_figure(table, png)
            print(f"wrote {png}")
    return 0


def _cmd_demo(args):
    rows = manifold.demo_emit(args.kind, args.out, steps=args.steps)
    print(f"wrote {args.out}")
    if not args.no_fig:
        from . import report

        png = str(Path(args.out).with_suffix(".png"))
        report.render_demo_figure(args.kind, rows, png)
        print(f"wrote {png}")
    return 0


_COMMANDS = {"run": _cmd_run, "suite": _cmd_suite, "demo": _cmd_demo}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
