"""qpt-figures: render result files into images.

Kinds: profiles (sweep CSV + report JSON), scatter (batch CSV),
wl-sweep (w_L sweep CSV).
"""

from __future__ import annotations

import argparse
import sys

from .plots import SchemaError, plot_profiles, plot_scatter, plot_wl_sweep


def _build_parser():
    ap = argparse.ArgumentParser(prog="qpt-figures",
                                 description="figures from qpt-bounds outputs")
    sub = ap.add_subparsers(dest="kind", required=True)

    p = sub.add_parser("profiles", help="energy/fidelity/gap panels")
    p.add_argument("--in", dest="inputs", nargs=2, required=True,
                   metavar=("SWEEP_CSV", "REPORT_JSON"))
    p.add_argument("--out", required=True)

    p = sub.add_parser("scatter", help="bounds vs observed scatter")
    p.add_argument("--in", dest="inputs", nargs=1, required=True,
                   metavar="BATCH_CSV")
    p.add_argument("--out", required=True)

    p = sub.add_parser("wl-sweep", help="bounds vs depth-parameter sweep")
    p.add_argument("--in", dest="inputs", nargs=1, required=True,
                   metavar="WMIS_CSV")
    p.add_argument("--out", required=True)
    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.kind == "profiles":
            out = plot_profiles(args.inputs[0], args.inputs[1], args.out)
        elif args.kind == "scatter":
            out = plot_scatter(args.inputs[0], args.out)
        else:
            out = plot_wl_sweep(args.inputs[0], args.out)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
