"""Command line entry point.

Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .benchmark import BenchmarkSpec, run_benchmark, sin_truth, write_truth_csv
from .differentiator import (
    WindowConfig,
    estimate_series,
    write_estimates_csv,
)
from .errors import DataError, NumericalError
from .kernel import QUADRATURE_RULES, DiffOrder, build_fractional_kernel
from .metrics import DEFAULT_TRIM
from .rl_oracle import rl_monomial
from .signals import add_noise, calibrate_c, read_signal_csv, sample, write_signal_csv
from .specfun import JacobiParams

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 2, 3, 4

log = logging.getLogger("fracjacobi")


def _filter_args(p: argparse.ArgumentParser, alpha_default=0.5) -> None:
    p.add_argument("--alpha", type=float, default=alpha_default, help="derivative order (>= 0)")
    p.add_argument("--mu", type=float, default=0.0, help="Jacobi weight exponent at t = 1")
    p.add_argument("--kappa", type=float, default=0.0, help="Jacobi weight exponent at t = 0")
    p.add_argument("--order-n", dest="N", type=int, default=14, help="truncation order N")
    p.add_argument(
        "--quadrature", choices=QUADRATURE_RULES, default="gregory",
        help="quadrature rule for the kernel integral",
    )


def _signal_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--signal", choices=("sin", "power"), default="sin")
    p.add_argument("--omega", type=float, default=5.0, help="angular frequency for sin")
    p.add_argument("--power", type=int, default=1, help="exponent for power")
    p.add_argument("--a", type=float, default=0.0, help="interval start")
    p.add_argument("--b", type=float, default=4.0, help="interval end")
    p.add_argument("-M", "--M", dest="M", type=int, default=1000, help="number of sample intervals")


def _test_function(args):
    if args.signal == "sin":
        return lambda x: np.sin(args.omega * x)
    return lambda x: np.asarray(x, dtype=float) ** args.power


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracjacobi",
        description="Fractional-order differentiation of noisy samples with Jacobi kernels.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("differentiate", help="estimate a derivative from a signal CSV")
    p.add_argument("input", type=Path, help="signal CSV with header x,value[,noise]")
    p.add_argument("-o", "--output", type=Path, required=True, help="estimate CSV x,estimate")
    _filter_args(p)
    p.add_argument("--mode", choices=("global", "causal"), default="global")
    p.add_argument("--window", type=int, help="samples per causal window")

    p = sub.add_parser("generate", help="sample a test signal, optionally with noise")
    p.add_argument("-o", "--output", type=Path, required=True)
    _signal_args(p)
    noise = p.add_mutually_exclusive_group()
    noise.add_argument("--c", type=float, help="noise level")
    noise.add_argument("--snr", type=float, help="target SNR in dB (noise level is calibrated)")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("oracle", help="write reference derivatives x,alpha,truth")
    p.add_argument("-o", "--output", type=Path, required=True)
    _signal_args(p)
    p.add_argument("--alpha", type=float, action="append", required=True, help="repeatable")

    p = sub.add_parser("kernel", help="dump a fractional kernel as tau,value")
    p.add_argument("-o", "--output", type=Path, required=True)
    _filter_args(p)
    p.add_argument("--t", type=float, default=1.0, help="normalized abscissa in (0, 1]")
    p.add_argument("-M", "--M", dest="M", type=int, default=1000)

    p = sub.add_parser("benchmark", help="compare against DFOSGD on sin(omega x)")
    p.add_argument("--outdir", type=Path, required=True)
    p.add_argument("--alpha", type=float, action="append", help="repeatable; default 0.5 and 1.5")
    p.add_argument("--order-n", dest="N", type=int, default=14)
    p.add_argument("--theta", type=int, default=5)
    p.add_argument("--mu", type=float, default=0.0)
    p.add_argument("--kappa", type=float, default=0.0)
    p.add_argument("-M", "--M", dest="M", type=int, default=1000)
    p.add_argument("--interval", type=float, nargs=2, default=(0.0, 4.0), metavar=("A", "B"))
    p.add_argument("--omega", type=float, default=5.0)
    noise = p.add_mutually_exclusive_group()
    noise.add_argument("--snr", type=float, help="target SNR in dB (default 10)")
    noise.add_argument("--c", type=float, help="fixed noise level instead of calibration")
    p.add_argument("--seed", type=int, action="append", help="repeatable; default 0..n-seeds-1")
    p.add_argument("--n-seeds", type=int, default=20)
    p.add_argument("--trim", type=float, default=DEFAULT_TRIM)
    p.add_argument("--quadrature", choices=QUADRATURE_RULES, default="gregory")
    p.add_argument("--fixture", type=Path, help="truth CSV x,alpha,truth to score against")
    return parser


def cmd_differentiate(args) -> int:
    signal = read_signal_csv(args.input)
    params = JacobiParams(args.mu, args.kappa)
    config = WindowConfig(
        a=signal.a, h=signal.h, t=1.0, N=args.N, order=DiffOrder(args.alpha),
        params=params, rule=args.quadrature,
    )
    if args.mode == "causal" and args.window is None:
        raise ValueError("--mode causal needs --window")
    series = estimate_series(signal, config, args.mode, args.window)
    write_estimates_csv(args.output, series)
    return EXIT_OK


def cmd_generate(args) -> int:
    signal = sample(_test_function(args), args.a, args.b, args.M)
    c = args.c
    if args.snr is not None:
        c = calibrate_c(signal, args.snr, args.seed)
    if c is not None:
        signal = add_noise(signal, c, args.seed)
    write_signal_csv(args.output, signal)
    return EXIT_OK


def cmd_oracle(args) -> int:
    x = sample(lambda x: x, args.a, args.b, args.M).x
    x = x[x > 0]
    if x.size == 0:
        raise ValueError("oracle needs sample points with x > 0")
    rows = []
    for al in args.alpha:
        if args.signal == "sin":
            truth = sin_truth(args.omega, al, x)
        else:
            truth = [rl_monomial(args.power, al, xi) for xi in x]
        rows.extend(zip(x, [al] * x.size, truth))
    write_truth_csv(args.output, rows)
    return EXIT_OK


def cmd_kernel(args) -> int:
    params = JacobiParams(args.mu, args.kappa)
    table = build_fractional_kernel(params, DiffOrder(args.alpha), args.N, args.t, args.M, args.quadrature)
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write("tau,value\n")
        for tau, v in zip(table.grid, table.values):
            fh.write(f"{float(tau)!r},{float(v)!r}\n")
    return EXIT_OK


def cmd_benchmark(args) -> int:
    seeds = tuple(args.seed) if args.seed else tuple(range(args.n_seeds))
    snr = None if args.c is not None else (10.0 if args.snr is None else args.snr)
    spec = BenchmarkSpec(
        alphas=tuple(args.alpha) if args.alpha else (0.5, 1.5),
        N=args.N, theta=args.theta, mu=args.mu, kappa=args.kappa, M=args.M,
        interval=tuple(args.interval), omega=args.omega, snr_db=snr, c=args.c,
        seeds=seeds, trim_fraction=args.trim, rule=args.quadrature,
    )
    result = run_benchmark(spec, args.outdir, args.fixture)
    print(f"# trim={spec.trim_fraction} quadrature={spec.rule} seeds={len(seeds)}")
    print("method,alpha,condition,median_rmse,runs")
    for method, al, cond, med, n in result.summary():
        print(f"{method},{al:g},{cond},{med:.6g},{n}")
    return EXIT_OK


COMMANDS = {
    "differentiate": cmd_differentiate,
    "generate": cmd_generate,
    "oracle": cmd_oracle,
    "kernel": cmd_kernel,
    "benchmark": cmd_benchmark,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(name)s: %(message)s",
    )
    try:
        return COMMANDS[args.command](args)
    except DataError as exc:
        print(f"fracjacobi: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (NumericalError, FloatingPointError) as exc:
        print(f"fracjacobi: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"fracjacobi: invalid parameters: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"fracjacobi: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
