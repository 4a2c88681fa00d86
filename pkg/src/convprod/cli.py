"""Command line entry point: ``convprod-bench {spectrum,rate,timing,compare}``.

Exit codes: 0 on success, 2 on invalid input, 3 on I/O failure.
"""
import argparse
import json
import logging
import sys

from . import bench
from .estimators import ESTIMATORS
from .exceptions import ConvprodError
from .gallery import KERNELS

log = logging.getLogger("convprod")

EXIT_OK, EXIT_PRECONDITION, EXIT_IO = 0, 2, 3

DEFAULTS = {
    "kernel": "gaussian",
    "method": "spline",
    "n": [256],
    "m": [4, 8, 16, 32],
    "alpha": None,
    "kappa": None,
    "out": None,
    "seed": 0,
    "repeats": 5,
}


def _int_list(text):
    try:
        return [int(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma separated list of integers, got {text!r}")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="convprod-bench",
        description="Benchmarks for convolution-product expansions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("spectrum", "singular values of a gallery kernel"),
        ("rate", "error and cost of one method over several orders"),
        ("timing", "dense versus fast product wall-clock times"),
        ("compare", "all methods against the SVD at equal term counts"),
    ]:
        p = sub.add_parser(name, help=help_text)
        # defaults stay None so that --config values can fill the gaps
        p.add_argument("--kernel", choices=sorted(KERNELS))
        p.add_argument("--method", choices=sorted(ESTIMATORS))
        p.add_argument("--n", type=_int_list, help="grid size (comma list for timing)")
        p.add_argument("--m", type=_int_list, help="comma separated orders")
        p.add_argument("--alpha", type=int, help="spline order or wavelet vanishing moments")
        p.add_argument("--kappa", type=float, help="support bound for kernels that take one")
        p.add_argument("--out", help="CSV output path (stdout when omitted)")
        p.add_argument("--seed", type=int, help="seed of the random timing vectors")
        p.add_argument("--repeats", type=int, help="timing repeats (best is reported)")
        p.add_argument("--config", help="JSON file whose keys mirror the flags")
        p.add_argument("-v", "--verbose", action="store_true")
    return parser


def _resolve(args):
    opts = dict(DEFAULTS)
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            config = json.load(fh)
        unknown = set(config) - set(DEFAULTS)
        if unknown:
            raise ConvprodError(f"unknown config keys: {sorted(unknown)}")
        for key in ("n", "m"):
            if key in config and not isinstance(config[key], list):
                config[key] = _int_list(config[key])
        opts.update(config)
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            opts[key] = value
    return opts


def _kernel_params(opts):
    if opts["kappa"] is None:
        return {}
    if opts["kernel"] in ("gaussian", "worst_case", "pure_conv"):
        return {"kappa": opts["kappa"]}
    raise ConvprodError(f"kernel {opts['kernel']!r} has a fixed support bound")


def _single(values, name):
    if len(values) != 1:
        raise ConvprodError(f"--{name} takes a single value for this command")
    return values[0]


def _emit(opts, header, rows):
    if opts["out"]:
        return
    print(",".join(header))
    for row in rows:
        print(",".join(bench._fmt(v) for v in row))


def run(args):
    opts = _resolve(args)
    params = _kernel_params(opts)
    if args.command == "spectrum":
        n = _single(opts["n"], "n")
        sigma = bench.cmd_spectrum(opts["kernel"], n, opts["out"], **params)
        _emit(opts, ("index", "sigma"), [(i + 1, float(s)) for i, s in enumerate(sigma)])
    elif args.command == "rate":
        n = _single(opts["n"], "n")
        report = bench.cmd_rate(
            opts["kernel"], opts["method"], opts["m"], n, opts["alpha"], opts["out"], **params
        )
        _emit(
            opts,
            report.HEADER,
            [(r.m, r.hs_error, r.flop_estimate, r.storage_count, r.wall_time_ms) for r in report.rows],
        )
        print(f"# slope {report.slope:.6f}", file=sys.stderr)
    elif args.command == "timing":
        m = _single(opts["m"], "m")
        rows = bench.cmd_timing(
            opts["kernel"], opts["method"], m, opts["n"], opts["alpha"], opts["out"],
            seed=opts["seed"], repeats=opts["repeats"], **params,
        )
        _emit(opts, ("n", "dense_ms", "fast_ms", "flop_estimate"), rows)
    elif args.command == "compare":
        n = _single(opts["n"], "n")
        rows = bench.cmd_compare(
            opts["kernel"], n, opts["m"], alpha=opts["alpha"], out_path=opts["out"], **params
        )
        _emit(opts, ("method", "m", "terms", "error", "svd_error", "flops", "storage"), rows)
    return EXIT_OK


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return run(args)
    except OSError as exc:
        log.error("I/O error: %s", exc)
        return EXIT_IO
    except (ConvprodError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
