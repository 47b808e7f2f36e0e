"""Command-line entry points: run, converge, compare."""

import argparse
import json
import sys

from .errors import ConfigError, NumericalFailure
from .harness import (load_config, resolve_config, run_case,
                      run_convergence, compare_profile, CASES)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2


def _add_common(p):
    p.add_argument("--case", choices=CASES, help="test case to set up")
    p.add_argument("--config", help="flat key = value config file")
    p.add_argument("--nx", type=int)
    p.add_argument("--ny", type=int)
    p.add_argument("--cfl", type=float)
    p.add_argument("--t-end", type=float, dest="t_end")
    p.add_argument("--out", dest="out_dir")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="swmorph",
        description="Shallow-water flow with suspended sediment over an "
                    "erodible bed: run bundled cases, measure convergence, "
                    "compare against reference profiles.")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one test case")
    _add_common(run_p)

    conv_p = sub.add_parser("converge", help="self-convergence study")
    _add_common(conv_p)
    conv_p.add_argument("--n-list", default="50,100,200",
                        help="comma-separated doubling resolutions")
    conv_p.add_argument("--field", default="h,zb",
                        help="comma-separated snapshot fields to rate")

    cmp_p = sub.add_parser("compare", help="L1 misfit against data points")
    cmp_p.add_argument("--snapshot", required=True)
    cmp_p.add_argument("--data", required=True)
    cmp_p.add_argument("--field", default="eta")
    return parser


def _resolved(args):
    file_overrides = load_config(args.config) if args.config else {}
    cli = {"case": args.case, "nx": args.nx, "ny": args.ny,
           "cfl": args.cfl, "t_end": args.t_end, "out_dir": args.out_dir}
    return resolve_config(file_overrides=file_overrides, cli_overrides=cli)


def cmd_run(args):
    report = run_case(_resolved(args))
    print(json.dumps(report, indent=2))
    return EXIT_OK


def cmd_converge(args):
    cfg = _resolved(args)
    n_list = [int(tok) for tok in args.n_list.split(",")]
    names = [tok.strip() for tok in args.field.split(",") if tok.strip()]
    table = run_convergence(cfg, n_list, names)
    print(f"case {cfg.case}, resolutions {table['n_list']}")
    for name, entry in table["fields"].items():
        errs = "  ".join(f"{e:.6e}" for e in entry["errors"])
        rates = "  ".join(f"{r:.3f}" for r in entry["rates"])
        print(f"{name:>4}: L1 diffs {errs}   rates {rates}")
    return EXIT_OK


def cmd_compare(args):
    misfit = compare_profile(args.snapshot, args.data, field=args.field)
    print(f"L1 misfit ({args.field}): {misfit:.6e}")
    return EXIT_OK


def main(argv=None):
    args = build_parser().parse_args(argv)
    handlers = {"run": cmd_run, "converge": cmd_converge,
                "compare": cmd_compare}
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
