"""
Subcommands of the ``vage`` command line.

Each handler receives the parsed namespace and returns the payload to emit;
``run`` prints it (JSON unless the handler returns CSV text) and maps library
errors to exit codes.
"""
import argparse
import logging
import math
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from src.vage_spaces.config import Settings, parse_window
from src.vage_spaces.errors import UsageError, VageError
from src.vage_spaces.algebra.linsys import (
    Realization, eval_realization, impulse_response, kalman_observable, observability_rank,
    observability_witness, realization_concat_col, realization_concat_row, realization_inverse,
    realization_product, realization_sum
)
from src.vage_spaces.algebra.power_series import PowerSeries, compose
from src.vage_spaces.algebra.series import Series
from src.vage_spaces.analysis.event_system import EventManager, LoggingCheckSubscriber
from src.vage_spaces.analysis.inequalities import check_vage, demonstrate_schwartz_failure, zhang_partial
from src.vage_spaces.analysis.suites import vage_suite
from src.vage_spaces.cli.codec import dumps, loads, realization_from_json, series_from_json, to_csv
from src.vage_spaces.cli.expression import parse_series
from src.vage_spaces.hermite.functions import (
    exp_sqrt_decay, geometric_decay, hermite_fn_table, mehler_table, strip_radius
)
from src.vage_spaces.hermite.quadrature import gp_coefficient_norm, gp_integral_norm
from src.vage_spaces.interfaces.weight import Weight
from src.vage_spaces.monoid.multi_index import TruncationSpec
from src.vage_spaces.weights.classification import (
    WeightProfile, check_superexponential, is_admissible, is_regular, regularity_sum, vage_constant
)
from src.vage_spaces.weights.weight_factories import parse_weight

logger = logging.getLogger(__name__)


class CsvOutput(str):
    """Marker for handlers that produce CSV instead of JSON."""


# argument helpers

def _count(text: str) -> int:
    """Nonnegative integer, also accepting forms like ``1e6``."""
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if not value.is_integer() or value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text!r}")
    return int(value)


def _float_list(text: str) -> List[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _complex_list(text: str) -> List[complex]:
    try:
        return [complex(part.strip().replace("i", "j")) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated complex numbers, got {text!r}") from None


def _grid(text: str) -> np.ndarray:
    values = _float_list(text)
    if len(values) != 3 or values[2] < 1 or not float(values[2]).is_integer():
        raise argparse.ArgumentTypeError(f"grid must look like 'lo,hi,count', got {text!r}")
    return np.linspace(values[0], values[1], int(values[2]))


def _read_text(text: str) -> str:
    """Inline text, or the contents of a file when written as ``@path``."""
    if text.startswith("@"):
        try:
            return Path(text[1:]).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read {text[1:]}: {exc}") from exc
    return text


def _series(text: str, window: TruncationSpec) -> Series:
    text = _read_text(text).strip()
    if text.startswith("{"):
        return series_from_json(loads(text), window)
    return parse_series(text, window)


def _realization(text: str) -> Realization:
    return realization_from_json(loads(_read_text(text)))


def _weight(text: str) -> Weight:
    return parse_weight(_read_text(text))


def _window(args) -> TruncationSpec:
    return TruncationSpec(*args.window)


# weight

def weight_check(args) -> Dict[str, Any]:
    weight = _weight(args.spec)
    probe = TruncationSpec(args.K, args.N)
    admissibility = is_admissible(weight, probe)
    superexponential = check_superexponential(weight, probe)
    regular_sum = regularity_sum(weight, args.d, args.K) if admissibility.ok else None
    return {
        "weight": weight.to_spec(),
        "window": probe.to_json(),
        "admissible": admissibility.ok,
        "admissibility": admissibility,
        "d": args.d,
        "regular": is_regular(weight, args.d),
        "regularity_sum": regular_sum,
        "superexponential": superexponential.ok,
        "pairs_tested": superexponential.pairs_tested,
        "witness": [str(alpha) for alpha in superexponential.witness] if superexponential.witness else None,
        "profile": WeightProfile.of(weight),
    }


def weight_vage_constant(args) -> Dict[str, Any]:
    weight = _weight(args.spec)
    window = None if args.closed_form else _window(args)
    return {
        "weight": weight.to_spec(),
        "d": args.d,
        "closed_form": args.closed_form,
        "window": window.to_json() if window else None,
        "value": vage_constant(weight, args.d, window),
    }


# series

def series_op(args):
    window = _window(args)
    lhs, rhs = _series(args.lhs, window), _series(args.rhs, window)
    if args.op == "convolve":
        return lhs.convolve(rhs)
    if args.op == "add":
        return lhs + rhs
    return lhs - rhs


def series_invert(args):
    f = _series(args.input, _window(args))
    if args.neumann is not None:
        return f.neumann_invert(args.neumann)
    return f.invert()


def series_norm(args) -> Dict[str, Any]:
    f = _series(args.input, _window(args))
    weight = _weight(args.spec)
    return {
        "weight": weight.to_spec(),
        "window": f.window.to_json(),
        "p": args.p,
        "norm": f.norm(weight, args.p),
        "lower_bound": True,
    }


def _power_series(text: str) -> PowerSeries:
    try:
        return PowerSeries.by_name(text)
    except KeyError:
        pass
    try:
        return PowerSeries.from_coefficients(_complex_list(text))
    except argparse.ArgumentTypeError as exc:
        raise UsageError(f"unknown power series {text!r}; use a built-in name or coefficients") from exc


def series_compose(args):
    f = _series(args.input, _window(args))
    weight = _weight(args.spec) if args.spec else None
    return compose(_power_series(args.phi), f, weight=weight, d=args.d, guard=not args.no_guard)


def series_derive(args):
    return _series(args.input, _window(args)).derive(args.generator)


# analysis

def analysis_vage(args) -> Dict[str, Any]:
    weight = _weight(args.spec)
    window = _window(args)
    if args.lhs is not None or args.rhs is not None:
        if args.lhs is None or args.rhs is None:
            raise UsageError("--lhs and --rhs must be given together")
        report = check_vage(_series(args.lhs, window), _series(args.rhs, window), weight, args.p, args.q, args.d)
        return {"weight": weight.to_spec(), "window": window.to_json(), "report": report}

    manager = EventManager()
    manager.subscribe(LoggingCheckSubscriber())
    return vage_suite(weight, args.p, args.q, args.d, window, args.random, args.seed, manager)


def analysis_schwartz_failure(args):
    return demonstrate_schwartz_failure(args.p, args.q, args.target)


def analysis_zhang(args) -> Dict[str, Any]:
    value = zhang_partial(args.d, args.K)
    return {
        "d": args.d,
        "K": args.K,
        "value": value,
        "target": "pi/2" if args.d == 2 else None,
        "limit": vage_constant(parse_weight("kondratiev"), args.d) ** 2 if args.d >= 2 else math.inf,
    }


# linsys

_COMPOSE_OPS: Dict[str, Callable[..., Realization]] = {
    "sum": realization_sum,
    "product": realization_product,
    "concat-col": realization_concat_col,
    "concat-row": realization_concat_row,
}


def linsys_eval(args):
    r = _realization(args.real)
    return eval_realization(r, _series(args.at, r.window))


def linsys_compose(args):
    lhs = _realization(args.lhs)
    if args.op == "inverse":
        return realization_inverse(lhs)
    if args.rhs is None:
        raise UsageError(f"--op {args.op} needs --rhs")
    return _COMPOSE_OPS[args.op](lhs, _realization(args.rhs))


def linsys_observable(args) -> Dict[str, Any]:
    r = _realization(args.real)
    ce, ae = r.c.expectation(), r.a.expectation()
    return {
        "state_dim": r.state_dim,
        "kalman_observable": kalman_observable(ce, ae),
        "rank": observability_rank(ce, ae),
        "witness": observability_witness(r, args.trials, args.seed),
    }


def linsys_impulse(args):
    return impulse_response(_realization(args.real), args.terms)


# hermite

def hermite_mehler(args) -> CsvOutput:
    axis = args.grid
    points = [(u, v) for u in axis for v in axis]
    rows = [
        (r.u.real, r.v.real, r.s.real, r.lhs.real, r.lhs.imag, r.rhs.real, r.rhs.imag, r.abs_err)
        for r in mehler_table(points, args.s, args.terms)
    ]
    return CsvOutput(to_csv(["u", "v", "s", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "abs_err"], rows))


def hermite_gp_norm(args) -> Dict[str, Any]:
    integral = gp_integral_norm(args.coeffs, args.p)
    coefficient_norm = gp_coefficient_norm(args.coeffs, args.p)
    return {
        "p": args.p,
        "coefficients": list(args.coeffs),
        "integral": integral,
        "coefficient_norm": coefficient_norm,
        "relative_error": abs(integral - coefficient_norm) / coefficient_norm if coefficient_norm else 0.0,
    }


def hermite_strip(args):
    if args.decay == "exp-sqrt":
        log_coeff = exp_sqrt_decay(args.rate)
    elif args.decay == "geometric":
        log_coeff = geometric_decay(args.ratio)
    else:
        if args.values is None:
            raise UsageError("--decay custom needs --values with a JSON list of log|F_n|")
        log_coeff = loads(_read_text(args.values))
    report = strip_radius(log_coeff, args.nmax, cap=args.cap)
    return {"decay": args.decay, "nmax": args.nmax, "estimate": report}


def hermite_functions(args) -> CsvOutput:
    table = hermite_fn_table(args.nmax, args.grid).real
    header = ["x"] + [f"xi_{n}" for n in range(args.nmax + 1)]
    rows = [[float(x)] + [float(v) for v in table[:, i]] for i, x in enumerate(args.grid)]
    return CsvOutput(to_csv(header, rows))


# parser

def _common_flags(settings: Settings) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--window", type=_window_flag, default=settings.default_window,
                        help="truncation window K,N (default from VAGE_WINDOW)")
    common.add_argument("--seed", type=int, default=settings.seed, help="random seed (default from VAGE_SEED)")
    common.add_argument("--log-level", type=str.upper, default=None,
                        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
                        help="logging level (default from VAGE_LOG_LEVEL)")
    common.add_argument("--out", default=None, help="write output to this path instead of stdout")
    return common


def _window_flag(text: str):
    try:
        return parse_window(text)
    except UsageError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser(settings: Optional[Settings] = None) -> argparse.ArgumentParser:
    settings = settings or Settings()
    common = _common_flags(settings)
    parser = argparse.ArgumentParser(
        prog="vage", description="Exact truncated computation in weighted convolution rings"
    )
    groups = parser.add_subparsers(dest="group", required=True)

    def command(group, name: str, handler, help_text: str) -> argparse.ArgumentParser:
        sub = group.add_parser(name, parents=[common], help=help_text)
        sub.set_defaults(handler=handler)
        return sub

    weight = groups.add_parser("weight", help="weight classification").add_subparsers(dest="command", required=True)
    sub = command(weight, "check", weight_check, "admissibility, regularity and superexponential report")
    sub.add_argument("--spec", required=True)
    sub.add_argument("--d", type=int, default=1)
    sub.add_argument("--K", type=_count, default=4)
    sub.add_argument("--N", type=_count, default=2, help="degree of the superexponential probe window")
    sub = command(weight, "vage-constant", weight_vage_constant, "A(d), closed form or window partial sum")
    sub.add_argument("--spec", required=True)
    sub.add_argument("--d", type=int, required=True)
    sub.add_argument("--closed-form", action="store_true")

    series = groups.add_parser("series", help="ring arithmetic").add_subparsers(dest="command", required=True)
    sub = command(series, "op", series_op, "binary operation on two series")
    sub.add_argument("--lhs", required=True)
    sub.add_argument("--rhs", required=True)
    sub.add_argument("--op", choices=["convolve", "add", "subtract"], default="convolve")
    sub = command(series, "invert", series_invert, "truncated inverse")
    sub.add_argument("--in", dest="input", required=True)
    sub.add_argument("--neumann", type=_count, default=None, help="use Neumann summation with this many terms")
    sub = command(series, "norm", series_norm, "window-restricted weighted norm")
    sub.add_argument("--in", dest="input", required=True)
    sub.add_argument("--spec", required=True)
    sub.add_argument("--p", type=float, required=True)
    sub = command(series, "compose", series_compose, "power series of a ring element")
    sub.add_argument("--phi", required=True, help="exp, geometric, identity, sin, cos, log1p or coefficients")
    sub.add_argument("--in", dest="input", required=True)
    sub.add_argument("--spec", default=None, help="weight for the |E[f]| < R/A(d) guard")
    sub.add_argument("--d", type=int, default=None)
    sub.add_argument("--no-guard", action="store_true")
    sub = command(series, "derive", series_derive, "formal partial derivative")
    sub.add_argument("--in", dest="input", required=True)
    sub.add_argument("--generator", type=int, required=True)

    analysis = groups.add_parser("analysis", help="inequality experiments").add_subparsers(dest="command", required=True)
    sub = command(analysis, "vage", analysis_vage, "Vage inequality on given or random pairs")
    sub.add_argument("--spec", required=True)
    sub.add_argument("--p", type=int, required=True)
    sub.add_argument("--q", type=int, required=True)
    sub.add_argument("--d", type=int, required=True)
    sub.add_argument("--random", type=_count, default=100)
    sub.add_argument("--lhs", default=None)
    sub.add_argument("--rhs", default=None)
    sub = command(analysis, "schwartz-failure", analysis_schwartz_failure, "unbounded monomial ratios")
    sub.add_argument("--p", type=int, required=True)
    sub.add_argument("--q", type=int, required=True)
    sub.add_argument("--target", type=float, required=True)
    sub = command(analysis, "zhang", analysis_zhang, "Kondratiev partial products")
    sub.add_argument("--d", type=int, required=True)
    sub.add_argument("--K", type=_count, required=True)

    linsys = groups.add_parser("linsys", help="realizations").add_subparsers(dest="command", required=True)
    sub = command(linsys, "eval", linsys_eval, "evaluate a realization at a ring element")
    sub.add_argument("--real", required=True)
    sub.add_argument("--at", required=True)
    sub = command(linsys, "compose", linsys_compose, "realization algebra")
    sub.add_argument("--op", choices=["sum", "product", "inverse", "concat-col", "concat-row"], required=True)
    sub.add_argument("--lhs", required=True)
    sub.add_argument("--rhs", default=None)
    sub = command(linsys, "observable", linsys_observable, "Kalman test and witness search")
    sub.add_argument("--real", required=True)
    sub.add_argument("--trials", type=_count, default=10)
    sub = command(linsys, "impulse", linsys_impulse, "Markov parameters D, CB, CAB, ...")
    sub.add_argument("--real", required=True)
    sub.add_argument("--terms", type=_count, required=True)

    hermite = groups.add_parser("hermite", help="Hermite functions").add_subparsers(dest="command", required=True)
    sub = command(hermite, "mehler", hermite_mehler, "Mehler identity error table (CSV)")
    sub.add_argument("--grid", type=_grid, default=_grid("-2,2,5"),
                     help="LO,HI,COUNT for both axes; write --grid=-1,1,3 when LO is negative")
    sub.add_argument("--s", type=_complex_list, default=[-0.5, -0.3, -0.1, 0.1, 0.3, 0.5],
                     help="comma-separated s values with |s| < 1; write --s=-0.1,0.1 when the list starts negative")
    sub.add_argument("--terms", type=_count, default=200)
    sub = command(hermite, "gp-norm", hermite_gp_norm, "G_p norm by quadrature and by coefficients")
    sub.add_argument("--coeffs", type=_complex_list, required=True)
    sub.add_argument("--p", type=int, required=True)
    sub = command(hermite, "strip", hermite_strip, "strip of convergence estimate")
    sub.add_argument("--decay", choices=["exp-sqrt", "geometric", "custom"], required=True)
    sub.add_argument("--nmax", type=_count, required=True)
    sub.add_argument("--rate", type=float, default=1.0, help="exp-sqrt decay rate")
    sub.add_argument("--ratio", type=float, default=2.0 ** -0.5, help="geometric decay ratio")
    sub.add_argument("--values", default=None)
    sub.add_argument("--cap", type=float, default=10.0)
    sub = command(hermite, "functions", hermite_functions, "xi_n samples (CSV)")
    sub.add_argument("--nmax", type=_count, required=True)
    sub.add_argument("--grid", type=_grid, required=True)

    return parser


def _emit(payload: Any, out: Optional[str]) -> None:
    text = str(payload) if isinstance(payload, CsvOutput) else dumps(payload) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def run(argv: Optional[Sequence[str]] = None, settings: Optional[Settings] = None) -> int:
    """Parse, dispatch and emit; returns the process exit code."""
    try:
        settings = settings or Settings.from_env()
        args = build_parser(settings).parse_args(argv)
        settings.configure_logging(args.log_level)
        logger.info("running %s %s", args.group, args.command)
        _emit(args.handler(args), args.out)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    except VageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.exit_code
    return 0
