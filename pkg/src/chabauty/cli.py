"""``chab`` command line."""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from chabauty import experiments
from chabauty.figures import FIGURE_KINDS


def _out_dir(arg: str | None) -> Path:
    return Path(os.environ.get("CHAB_OUT") or arg or ".")


def cmd_run(args) -> int:
    try:
        cfg = experiments.load_config(args.config)
    except experiments.ConfigError as exc:
        print(f"chab: invalid config: {exc}", file=sys.stderr)
        return 2
    code = experiments.run(cfg)
    print(f"chab: wrote results to {cfg.out}", file=sys.stderr)
    return code


def cmd_figure(args) -> int:
    fig = {"kind": args.kind}
    if args.r:
        fig["r"] = args.r
    for key in ("m", "q_max", "m_max", "p", "q"):
        val = getattr(args, key)
        if val is not None:
            fig[key] = val
    if args.kind == "decay-curve":
        print("chab: decay curves come from `chab run` with a decay config", file=sys.stderr)
        return 2
    try:
        svg = experiments.render_figure(fig)
    except ValueError as exc:
        print(f"chab: {exc}", file=sys.stderr)
        return 2
    out = _out_dir(args.out) / f"{args.kind}.svg"
    experiments.write_atomic(out, svg)
    print(out)
    return 0


def cmd_sweep(args) -> int:
    cfg = experiments.ExperimentConfig(
        kind="oracle-sweep", out=_out_dir(args.out), seed=args.seed, pairs=args.pairs, max_size=args.max_size
    )
    code = experiments.run(cfg)
    status = "0 mismatches" if code == 0 else "MISMATCHES FOUND"
    print(f"chab: oracle sweep over {args.pairs} pairs per space: {status}")
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chab", description="Chabauty spaces of R and C*: distances, limits, figures.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run an experiment from a JSON config")
    p.add_argument("config")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("figure", help="emit one figure as SVG")
    p.add_argument("kind", choices=FIGURE_KINDS)
    p.add_argument("--r", type=float, action="append", help="generator for line-points (repeatable)")
    p.add_argument("--m", type=int)
    p.add_argument("--q-max", dest="q_max", type=int)
    p.add_argument("--m-max", dest="m_max", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--out", help="output directory (CHAB_OUT overrides)")
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("sweep-oracle", help="compare brute-force and grid Hausdorff engines")
    p.add_argument("--pairs", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-size", dest="max_size", type=int, default=500)
    p.add_argument("--out", help="output directory (CHAB_OUT overrides)")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
