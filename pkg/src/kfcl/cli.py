"""Command-line front end: ``kfcl verify | multiorder | sharpness | chi | validate | run``."""
from __future__ import annotations

import argparse
import logging
import sys

from .errors import KfclError
from .harness.config import ExperimentConfig
from .harness.runner import EXIT_ERROR, run


def _common(p: argparse.ArgumentParser, cover_required: bool = True):
    p.add_argument("--cover", required=cover_required,
                   help="cover file (JSON) or builtin: simplex-voronoi:N, caps-random:N,K,SEED, caps-demo-s1")
    p.add_argument("--out", help="write the JSON report here")
    p.add_argument("--timing", action="store_true", help="add wall time to the report (breaks byte-identity)")


def _grid(p: argparse.ArgumentParser, default: int = 3600):
    p.add_argument("--grid", type=int, default=default, help="base grid resolution (even, >= 100)")
    p.add_argument("--seed", type=int, default=0, help="seed for the low-discrepancy grid")
    p.add_argument("--no-anchors", action="store_true", help="do not add the cover's anchor points to the grid")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--csv", help="write per-point achieved values as CSV")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kfcl", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="single-order alternating pattern search")
    _common(p)
    _grid(p)
    p.add_argument("--order-seed", type=int, help="draw a random order instead of the cover's first order")

    p = sub.add_parser("multiorder", help="alternating chains monotone in several orders")
    _common(p)
    _grid(p)
    p.add_argument("--orders", type=int, default=2)
    p.add_argument("--order-seed", type=int)
    p.add_argument("--lemma-rank", action="store_true", help="check the rank of the signed-antichain image instead")

    p = sub.add_parser("sharpness", help="longest common monotone sequence in [m]^R")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--out")
    p.add_argument("--timing", action="store_true")

    p = sub.add_parser("chi", help="layer-cake decomposition of the smoothed membership at a point")
    _common(p, cover_required=False)
    p.add_argument("--point", type=float, nargs="+", help="unit vector coordinates")
    p.add_argument("--epsilon", type=float)

    p = sub.add_parser("validate", help="antipodal-freeness and grid coverage of a cover")
    _common(p)
    p.add_argument("--grid", type=int, default=3600)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epsilon", type=float)

    p = sub.add_parser("run", help="run an experiment described by a JSON configuration")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.add_argument("--timing", action="store_true")
    return parser


def config_from_args(args) -> ExperimentConfig:
    cmd = args.command
    if cmd == "run":
        cfg = ExperimentConfig.from_file(args.config)
        if args.out:
            cfg.output = args.out
        return cfg
    if cmd == "sharpness":
        return ExperimentConfig("sharpness", d=args.d, m=args.m, output=args.out)
    if cmd == "chi":
        return ExperimentConfig("chi-demo", cover=args.cover, point=args.point, epsilon=args.epsilon,
                                output=args.out)
    if cmd == "validate":
        return ExperimentConfig("validate-cover", cover=args.cover, resolution=args.grid, seed=args.seed,
                                epsilon=args.epsilon, output=args.out)
    common = dict(cover=args.cover, resolution=args.grid, seed=args.seed, order_seed=args.order_seed,
                  workers=args.workers, output=args.out, csv=args.csv, anchors=not args.no_anchors)
    if cmd == "verify":
        return ExperimentConfig("kfcl", **common)
    if args.lemma_rank:
        kind = "lemma-rank"
    else:
        kind = "two-orders" if args.orders == 2 else "d-orders"
    return ExperimentConfig(kind, orders=args.orders, **common)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = config_from_args(args)
        report = run(config, write=False)
    except (KfclError, OSError) as exc:
        print(f"kfcl: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    text = report.dumps(include_timing=args.timing)
    if config.output:
        with open(config.output, "w") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
