"""Command-line front end: every library computation as a reproducible run.

Subcommands
-----------
``enumerate``     list the ensemble elements for (k, N)
``partition``     normalizing constant of the weighted ensemble
``constant``     large-N extrapolation of the normalized partition constant
``charfn``        ensemble characteristic function at one or many frequencies
``limit-charfn``  its large-N limit
``dickman``       the limiting density family: the delay-equation solution
                  and the weighted density built from it
``sum``           cutoff-weighted sum by the direct, spectral, or asymptotic
                  route
``compare``       direct versus spectral route with a declared tolerance
``regions``       truncation-regime classification over a parameter grid
``example``       the certified lower-bound chain report
``appendix``      remainder-term magnitude scan with envelope fits

Reproducibility
---------------
Every artifact embeds the library version and the fully resolved run
configuration.  Re-running an emitted configuration (see :func:`argv_of`)
reproduces the output byte for byte on the same platform: no timestamps,
dictionary keys sorted, floats written in shortest exact decimal form (a
binary64 value round-trips through at most 17 significant digits).  CSV
cells use an explicit ``%.17g``.  All output is UTF-8.

JSON is the canonical format.  CSV is available for grid-shaped results;
the column layouts are documented in ``--help`` and stable.

Exit codes: 0 success, 2 usage or domain error, 3 tolerance failure or
route disagreement, 4 size-cap refusal.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np

from . import __version__
from .certify import reproduce_example
from .dickman import charfn_limit, rho_at, solve_rho, w_density, w_integral
from .ensemble import (
    CharfnEvaluator,
    EnsembleConfig,
    FastCharfn,
    enumerate_ensemble,
    partition_constant,
    partition_function,
)
from .errors import (
    DegenerateConfigError,
    DomainError,
    PoleError,
    SizeCapError,
    ToleranceError,
)
from .remainders import bound_scan
from .smoothsum import (
    asymptotic_prediction,
    comparison_tolerance,
    error_region,
    get_cutoff,
    smooth_sum_direct,
    smooth_sum_spectral,
)

__all__ = ["RunConfig", "argv_of", "build_parser", "main", "run"]

#: Characteristic-function evaluations switch to the bucketed fast path
#: above this N, matching the scan helpers elsewhere in the package.
_EXACT_CHARFN_LIMIT = 10**4

_EPILOG = """\
CSV column layouts (stable across versions; JSON is canonical):
  enumerate     element
  charfn        lambda, re, im
  limit-charfn  lambda, re, im
  dickman       u, rho, w
  regions       tau, eta, case
  appendix      N, lambda, term, magnitude   (envelope fit in '#' comments)

Numbers are serialized with up to 17 significant digits, enough to
reproduce every binary64 value exactly.  Output is UTF-8.

Exit codes:
  0  success
  2  usage or domain error (bad flags, parameters outside the domain)
  3  tolerance failure, or compare routes disagreeing beyond tolerance
  4  size-cap refusal (enumeration would exceed the element cap)

Environment:
  KFREE_THREADS  fallback for --threads when the flag is absent
"""


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved parameters of one CLI run.

    Every emitted artifact embeds this record; feeding it back through
    :func:`argv_of` reproduces the run.  Fields that a subcommand does not
    use stay ``None``.
    """

    command: str
    k: Optional[int] = None
    alpha_re: float = 1.0
    alpha_im: float = 0.0
    N: Optional[int] = None
    N_list: Optional[tuple[int, ...]] = None
    lam_values: Optional[tuple[float, ...]] = None
    cutoff: Optional[str] = None
    route: Optional[str] = None
    R_rule: Optional[str] = None
    R: Optional[float] = None
    tau: Optional[float] = None
    tol: Optional[float] = None
    r: Optional[float] = None
    M: Optional[int] = None
    u_max: Optional[float] = None
    step: Optional[float] = None
    points: Optional[int] = None
    delta: Optional[float] = None
    tau_values: Optional[tuple[float, ...]] = None
    eta_values: Optional[tuple[float, ...]] = None
    term: Optional[tuple[int, ...]] = None
    cap: Optional[int] = None
    threads: Optional[int] = None
    output: Optional[str] = None
    format: str = "json"

    @property
    def alpha(self) -> complex:
        return complex(self.alpha_re, self.alpha_im)


@dataclass
class _Artifact:
    """Result payload plus the optional CSV rendering of a handler."""

    result: dict
    csv: Optional[tuple[tuple[str, ...], list[tuple]]] = None
    csv_comments: tuple[str, ...] = ()
    status: int = 0
    message: Optional[str] = None


# ---------------------------------------------------------------------------
# Parsing


def _add_alpha(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument(
        "--alpha",
        type=float,
        default=None,
        help="real weight exponent base (shorthand for --alpha-re)",
    )
    group.add_argument(
        "--alpha-re",
        type=float,
        default=None,
        help="real part of the weight exponent base (default 1)",
    )
    parser.add_argument(
        "--alpha-im",
        type=float,
        default=0.0,
        help="imaginary part of the weight exponent base (default 0)",
    )


def _add_lambda(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument(
        "--lambda",
        dest="lam",
        type=float,
        action="append",
        default=None,
        metavar="LAMBDA",
        help="frequency; repeat the flag for several values",
    )
    group.add_argument(
        "--lambda-grid",
        dest="lam_grid",
        nargs=3,
        type=float,
        default=None,
        metavar=("START", "STOP", "COUNT"),
        help="evenly spaced frequencies START..STOP (COUNT points)",
    )


def _add_output(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--output", default=None, help="write the artifact here instead of stdout")
    parser.add_argument(
        "--format",
        choices=("json", "csv"),
        default="json",
        help="json (canonical) or csv for grid-shaped results",
    )
    parser.add_argument(
        "--threads",
        type=int,
        default=None,
        help="cap worker threads in native kernels (fallback: KFREE_THREADS)",
    )


def _add_truncation(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--R-rule",
        dest="R_rule",
        choices=("fixed", "logN/loglogN", "power"),
        default=None,
        help="spectral truncation rule; power means R = (log N)^(1 - tau)",
    )
    parser.add_argument("--R", type=float, default=None, help="radius for --R-rule fixed")
    parser.add_argument("--tau", type=float, default=None, help="exponent offset for --R-rule power")
    parser.add_argument(
        "--tol",
        type=float,
        default=1e-9,
        help="quadrature tolerance for the spectral route (default 1e-9)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kfree",
        description="Smooth sums over k-free integers with bounded prime factors.",
        epilog=_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"kfree {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("enumerate", help="list the ensemble elements for (k, N)")
    p.add_argument("--k", type=int, required=True, help="forbidden prime-power exponent")
    p.add_argument("--N", type=int, required=True, help="largest allowed prime factor")
    p.add_argument("--cap", type=int, default=2**26, help="refuse ensembles larger than this")
    _add_output(p)

    p = sub.add_parser("partition", help="normalizing constant of the weighted ensemble")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    _add_alpha(p)
    _add_output(p)

    p = sub.add_parser("constant", help="large-N extrapolation of the partition constant")
    p.add_argument("--k", type=int, required=True)
    p.add_argument(
        "--N-list",
        dest="N_list",
        default=None,
        help="comma-separated prime bounds for the extrapolation ladder",
    )
    _add_alpha(p)
    _add_output(p)

    p = sub.add_parser("charfn", help="ensemble characteristic function")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    _add_alpha(p)
    _add_lambda(p)
    _add_output(p)

    p = sub.add_parser("limit-charfn", help="large-N limit of the characteristic function")
    _add_alpha(p)
    _add_lambda(p)
    _add_output(p)

    p = sub.add_parser("dickman", help="limiting density family on a grid")
    _add_alpha(p)
    p.add_argument("--u-max", dest="u_max", type=float, default=12.0, help="grid endpoint (default 12)")
    p.add_argument("--step", type=float, default=1e-3, help="delay-equation step (default 1e-3)")
    p.add_argument("--points", type=int, default=201, help="rows in the output table (default 201)")
    _add_output(p)

    p = sub.add_parser("sum", help="cutoff-weighted sum over the ensemble")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    _add_alpha(p)
    p.add_argument("--cutoff", default="gaussian", help="cutoff name (see errors for the list)")
    p.add_argument(
        "--route",
        choices=("direct", "spectral", "asymptotic"),
        default="spectral",
        help="evaluation route (default spectral)",
    )
    _add_truncation(p)
    _add_output(p)

    p = sub.add_parser("compare", help="direct vs spectral routes with declared tolerance")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    _add_alpha(p)
    p.add_argument("--cutoff", default="gaussian", help="cutoff name")
    _add_truncation(p)
    _add_output(p)

    p = sub.add_parser("regions", help="truncation-regime classification over a grid")
    tg = p.add_mutually_exclusive_group(required=True)
    tg.add_argument("--tau-list", dest="tau_list", default=None, help="comma-separated tau values in (0, 1)")
    tg.add_argument(
        "--tau-grid",
        dest="tau_grid",
        nargs=3,
        type=float,
        default=None,
        metavar=("START", "STOP", "COUNT"),
    )
    eg = p.add_mutually_exclusive_group(required=True)
    eg.add_argument("--eta-list", dest="eta_list", default=None, help="comma-separated decay orders > 1")
    eg.add_argument(
        "--eta-grid",
        dest="eta_grid",
        nargs=3,
        type=float,
        default=None,
        metavar=("START", "STOP", "COUNT"),
    )
    p.add_argument("--delta", type=float, default=0.0, help="decay offset of the weight (default 0)")
    _add_output(p)

    p = sub.add_parser("example", help="certified lower-bound chain report")
    p.add_argument("--r", type=float, default=5.0, help="decay rate of the worked example (default 5)")
    p.add_argument("--M", type=int, default=1000, help="midpoint-rule panel count (default 1000)")
    _add_output(p)

    p = sub.add_parser("appendix", help="remainder-term magnitude scan with envelope fits")
    p.add_argument("--k", type=int, required=True)
    p.add_argument(
        "--term",
        required=True,
        help="remainder index triple a,b,c (for example 2,1,1)",
    )
    p.add_argument(
        "--N-list",
        dest="N_list",
        required=True,
        help="comma-separated prime bounds for the scan",
    )
    _add_alpha(p)
    _add_lambda(p)
    _add_output(p)

    return parser


def _parse_int_list(text: str, flag: str) -> tuple[int, ...]:
    values = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            number = float(part)
        except ValueError as exc:
            raise DomainError(f"{flag} expects comma-separated integers, got {part!r}") from exc
        if number != int(number):
            raise DomainError(f"{flag} expects integers, got {part!r}")
        values.append(int(number))
    if not values:
        raise DomainError(f"{flag} is empty")
    return tuple(values)


def _parse_float_list(text: str, flag: str) -> tuple[float, ...]:
    try:
        values = tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise DomainError(f"{flag} expects comma-separated numbers") from exc
    if not values:
        raise DomainError(f"{flag} is empty")
    return values


def _resolve_grid(
    single: Optional[Sequence[float]],
    grid: Optional[Sequence[float]],
    flag: str,
) -> Optional[tuple[float, ...]]:
    if single is not None:
        return tuple(float(x) for x in single)
    if grid is not None:
        start, stop, count = grid
        if count != int(count) or int(count) < 2:
            raise DomainError(f"{flag} COUNT must be an integer >= 2")
        return tuple(float(x) for x in np.linspace(start, stop, int(count)))
    return None


def _resolve_threads(flag_value: Optional[int]) -> Optional[int]:
    if flag_value is None:
        env = os.environ.get("KFREE_THREADS")
        if env is None:
            return None
        try:
            flag_value = int(env)
        except ValueError as exc:
            raise DomainError(f"KFREE_THREADS must be an integer, got {env!r}") from exc
    if flag_value < 1:
        raise DomainError("thread cap must be at least 1")
    return flag_value


_THREAD_LIMITER = None


def _apply_thread_cap(threads: Optional[int]) -> None:
    """Cap native thread pools; the Python layer is single-threaded anyway."""
    global _THREAD_LIMITER
    if threads is None:
        return
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ[var] = str(threads)
    try:
        import threadpoolctl
    except ImportError:
        return
    _THREAD_LIMITER = threadpoolctl.threadpool_limits(limits=threads)


def _config_from_namespace(ns: argparse.Namespace) -> RunConfig:
    fields = {"command": ns.command}
    if hasattr(ns, "alpha"):
        if ns.alpha is not None:
            fields["alpha_re"] = ns.alpha
        elif ns.alpha_re is not None:
            fields["alpha_re"] = ns.alpha_re
        fields["alpha_im"] = ns.alpha_im
    if hasattr(ns, "lam"):
        fields["lam_values"] = _resolve_grid(ns.lam, ns.lam_grid, "--lambda-grid")
    if getattr(ns, "N_list", None) is not None:
        fields["N_list"] = _parse_int_list(ns.N_list, "--N-list")
    if getattr(ns, "term", None) is not None:
        raw = _parse_int_list(ns.term, "--term")
        if len(raw) != 3:
            raise DomainError("--term expects exactly three comma-separated indices")
        fields["term"] = raw
    if getattr(ns, "tau_list", None) is not None or getattr(ns, "tau_grid", None) is not None:
        single = _parse_float_list(ns.tau_list, "--tau-list") if ns.tau_list is not None else None
        fields["tau_values"] = _resolve_grid(single, ns.tau_grid, "--tau-grid")
    if getattr(ns, "eta_list", None) is not None or getattr(ns, "eta_grid", None) is not None:
        single = _parse_float_list(ns.eta_list, "--eta-list") if ns.eta_list is not None else None
        fields["eta_values"] = _resolve_grid(single, ns.eta_grid, "--eta-grid")
    for name in (
        "k",
        "N",
        "cutoff",
        "route",
        "R_rule",
        "R",
        "tau",
        "tol",
        "r",
        "M",
        "u_max",
        "step",
        "points",
        "delta",
        "cap",
        "output",
        "format",
    ):
        if hasattr(ns, name) and getattr(ns, name) is not None:
            fields[name] = getattr(ns, name)
    fields["threads"] = _resolve_threads(getattr(ns, "threads", None))
    return RunConfig(**fields)


# ---------------------------------------------------------------------------
# Serialization


def _jsonify(obj):
    """Recursively convert a result object into JSON-serializable values."""
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, complex):
        return {"im": float(obj.imag), "re": float(obj.real)}
    if isinstance(obj, float):
        return obj
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, np.complexfloating)):
        return _jsonify(complex(obj)) if np.iscomplexobj(obj) else float(obj)
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return _jsonify(dataclasses.asdict(obj))
    if isinstance(obj, Mapping):
        return {str(key): _jsonify(value) for key, value in obj.items()}
    if isinstance(obj, np.ndarray):
        return [_jsonify(value) for value in obj.tolist()]
    if isinstance(obj, (list, tuple)):
        return [_jsonify(value) for value in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _render(config: RunConfig, artifact: _Artifact) -> str:
    config_doc = _jsonify(dataclasses.asdict(config))
    if config.format == "csv":
        if artifact.csv is None:
            raise DomainError(f"no CSV layout for subcommand {config.command!r}; use --format json")
        header, rows = artifact.csv
        lines = [
            f"# kfree-version: {__version__}",
            "# run-config: " + json.dumps(config_doc, sort_keys=True, ensure_ascii=False),
        ]
        lines.extend(artifact.csv_comments)
        lines.append(",".join(header))
        lines.extend(",".join(_cell(value) for value in row) for row in rows)
        return "\n".join(lines) + "\n"
    doc = {
        "result": _jsonify(artifact.result),
        "run_config": config_doc,
        "version": __version__,
    }
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _emit(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)


def argv_of(run_config: Mapping) -> list[str]:
    """Rebuild the argument vector that reproduces an emitted run.

    Accepts the ``run_config`` mapping found in any artifact and returns an
    argv suitable for :func:`run`.  Floats are rendered with ``repr`` so
    the replayed run resolves to bit-identical parameters.
    """
    command = run_config["command"]
    if command not in _COMMAND_FIELDS:
        raise DomainError(f"unknown command {command!r} in run configuration")
    argv = [command]

    def _num(value) -> str:
        return repr(float(value))

    for name in _COMMAND_FIELDS[command]:
        value = run_config.get(name)
        if name == "alpha":
            argv += ["--alpha-re", _num(run_config["alpha_re"])]
            argv += ["--alpha-im", _num(run_config["alpha_im"])]
        elif value is None:
            continue
        elif name == "lam_values":
            for lam in value:
                argv += ["--lambda", _num(lam)]
        elif name == "N_list":
            argv += ["--N-list", ",".join(str(int(n)) for n in value)]
        elif name == "term":
            argv += ["--term", ",".join(str(int(i)) for i in value)]
        elif name == "tau_values":
            argv += ["--tau-list", ",".join(_num(x) for x in value)]
        elif name == "eta_values":
            argv += ["--eta-list", ",".join(_num(x) for x in value)]
        elif name in ("k", "N", "cap", "M", "points", "threads"):
            argv += [_FLAGS[name], str(int(value))]
        elif name in ("R", "tau", "tol", "r", "u_max", "step", "delta"):
            argv += [_FLAGS[name], _num(value)]
        else:
            argv += [_FLAGS[name], str(value)]
    return argv


_FLAGS = {
    "k": "--k",
    "N": "--N",
    "cap": "--cap",
    "M": "--M",
    "points": "--points",
    "threads": "--threads",
    "R": "--R",
    "tau": "--tau",
    "tol": "--tol",
    "r": "--r",
    "u_max": "--u-max",
    "step": "--step",
    "delta": "--delta",
    "cutoff": "--cutoff",
    "route": "--route",
    "R_rule": "--R-rule",
    "output": "--output",
    "format": "--format",
}

_COMMON_TAIL = ("threads", "output", "format")

_COMMAND_FIELDS = {
    "enumerate": ("k", "N", "cap") + _COMMON_TAIL,
    "partition": ("k", "alpha", "N") + _COMMON_TAIL,
    "constant": ("k", "alpha", "N_list") + _COMMON_TAIL,
    "charfn": ("k", "alpha", "N", "lam_values") + _COMMON_TAIL,
    "limit-charfn": ("alpha", "lam_values") + _COMMON_TAIL,
    "dickman": ("alpha", "u_max", "step", "points") + _COMMON_TAIL,
    "sum": ("k", "alpha", "N", "cutoff", "route", "R_rule", "R", "tau", "tol") + _COMMON_TAIL,
    "compare": ("k", "alpha", "N", "cutoff", "R_rule", "R", "tau", "tol") + _COMMON_TAIL,
    "regions": ("tau_values", "eta_values", "delta") + _COMMON_TAIL,
    "example": ("r", "M") + _COMMON_TAIL,
    "appendix": ("k", "alpha", "N_list", "term", "lam_values") + _COMMON_TAIL,
}


# ---------------------------------------------------------------------------
# Handlers


def _ensemble_config(config: RunConfig) -> EnsembleConfig:
    if config.k is None or config.N is None:
        raise DomainError(f"{config.command} requires --k and --N")
    return EnsembleConfig(config.k, config.alpha, config.N)


def _require_lambdas(config: RunConfig) -> tuple[float, ...]:
    if not config.lam_values:
        raise DomainError(f"{config.command} requires --lambda or --lambda-grid")
    return config.lam_values


def _resolve_radius(config: RunConfig, n_value: int) -> Optional[float]:
    rule = config.R_rule
    if rule is None:
        return config.R
    log_n = math.log(n_value)
    if rule == "fixed":
        if config.R is None:
            raise DomainError("--R-rule fixed requires --R")
        return config.R
    if rule == "logN/loglogN":
        if log_n <= 1.0:
            raise DomainError("--R-rule logN/loglogN requires N >= 3")
        return log_n / math.log(log_n)
    if config.tau is None:
        raise DomainError("--R-rule power requires --tau")
    return log_n ** (1.0 - config.tau)


def _cmd_enumerate(config: RunConfig) -> _Artifact:
    cfg = _ensemble_config(config)
    elements = [value for value, _ in enumerate_ensemble(cfg, cap=config.cap)]
    result = {"count": len(elements), "elements": elements}
    csv = (("element",), [(value,) for value in elements])
    return _Artifact(result=result, csv=csv)


def _cmd_partition(config: RunConfig) -> _Artifact:
    value = partition_function(_ensemble_config(config))
    return _Artifact(result={"value": value})


def _cmd_constant(config: RunConfig) -> _Artifact:
    if config.k is None:
        raise DomainError("constant requires --k")
    if config.N_list is None:
        report = partition_constant(config.k, config.alpha)
    else:
        report = partition_constant(config.k, config.alpha, config.N_list)
    return _Artifact(result={"report": report})


def _charfn_rows(values, lams) -> tuple[dict, tuple]:
    rows = [
        {"im": float(value.imag), "lambda": float(lam), "re": float(value.real)}
        for lam, value in zip(lams, values)
    ]
    csv = (
        ("lambda", "re", "im"),
        [(float(lam), float(value.real), float(value.imag)) for lam, value in zip(lams, values)],
    )
    if len(rows) == 1:
        return {"lambda": rows[0]["lambda"], "value": complex(values[0])}, csv
    return {"rows": rows}, csv


def _cmd_charfn(config: RunConfig) -> _Artifact:
    cfg = _ensemble_config(config)
    lams = _require_lambdas(config)
    if cfg.N <= _EXACT_CHARFN_LIMIT:
        values = CharfnEvaluator(cfg).grid(lams)
    else:
        values = FastCharfn(cfg).grid(lams)
    result, csv = _charfn_rows(values, lams)
    return _Artifact(result=result, csv=csv)


def _cmd_limit_charfn(config: RunConfig) -> _Artifact:
    lams = _require_lambdas(config)
    values = [charfn_limit(config.alpha, lam) for lam in lams]
    result, csv = _charfn_rows(values, lams)
    return _Artifact(result=result, csv=csv)


def _cmd_dickman(config: RunConfig) -> _Artifact:
    if config.alpha_im != 0.0:
        raise DomainError("the density family is defined for real weights; drop --alpha-im")
    alpha = config.alpha_re
    if config.points is None or config.points < 2:
        raise DomainError("--points must be at least 2")
    grid = solve_rho(alpha, u_max=config.u_max, step=config.step)
    us = np.linspace(0.0, config.u_max, config.points)
    rhos = rho_at(grid, us)
    ws = [w_density(alpha, float(u), grid) for u in us]
    rows = [
        {"rho": float(rho), "u": float(u), "w": float(w)}
        for u, rho, w in zip(us, rhos, ws)
    ]
    result = {
        "a0": float(grid.a0),
        "rows": rows,
        "w_integral": float(w_integral(grid)),
    }
    csv = (("u", "rho", "w"), [(float(u), float(r_), float(w)) for u, r_, w in zip(us, rhos, ws)])
    return _Artifact(result=result, csv=csv)


def _cmd_sum(config: RunConfig) -> _Artifact:
    cfg = _ensemble_config(config)
    cutoff = get_cutoff(config.cutoff)
    radius = _resolve_radius(config, cfg.N)
    route = config.route or "spectral"
    if route == "direct":
        value = smooth_sum_direct(cfg, cutoff)
        result = {"route": route, "value": value}
    elif route == "spectral":
        spectral = smooth_sum_spectral(cfg, cutoff, R=radius, tol=config.tol)
        result = {
            "R": float(spectral.R),
            "declared_tolerance": float(spectral.declared_tolerance),
            "quadrature_error": float(spectral.quadrature_error),
            "route": route,
            "tail_bound": float(spectral.tail_bound),
            "value": spectral.value,
        }
    else:
        report = asymptotic_prediction(cfg, cutoff, R=radius)
        result = {"report": report, "route": route}
    return _Artifact(result=result)


def _cmd_compare(config: RunConfig) -> _Artifact:
    cfg = _ensemble_config(config)
    cutoff = get_cutoff(config.cutoff)
    direct = smooth_sum_direct(cfg, cutoff)
    spectral = smooth_sum_spectral(cfg, cutoff, R=_resolve_radius(config, cfg.N), tol=config.tol)
    difference = abs(direct - spectral.value)
    declared = comparison_tolerance(cfg, direct, spectral)
    rounding = declared - float(spectral.declared_tolerance)
    agree = difference <= declared
    result = {
        "R": float(spectral.R),
        "agree": agree,
        "declared_tolerance": declared,
        "difference": float(difference),
        "direct": direct,
        "quadrature_error": float(spectral.quadrature_error),
        "rounding_allowance": rounding,
        "spectral": spectral.value,
        "tail_bound": float(spectral.tail_bound),
    }
    message = None if agree else "routes disagree beyond the declared tolerance"
    return _Artifact(result=result, status=0 if agree else 3, message=message)


def _cmd_regions(config: RunConfig) -> _Artifact:
    delta = config.delta if config.delta is not None else 0.0
    rows = []
    for tau in config.tau_values or ():
        for eta in config.eta_values or ():
            rows.append((float(tau), float(eta), error_region(tau, eta, delta)))
    if not rows:
        raise DomainError("regions requires tau and eta values")
    result = {"rows": [{"case": case, "eta": eta, "tau": tau} for tau, eta, case in rows]}
    return _Artifact(result=result, csv=(("tau", "eta", "case"), rows))


def _cmd_example(config: RunConfig) -> _Artifact:
    report = reproduce_example(r=config.r, M=config.M)
    message = None if report.passed else "the certified bound chain did not close"
    return _Artifact(result={"report": report}, status=0 if report.passed else 3, message=message)


def _cmd_appendix(config: RunConfig) -> _Artifact:
    if config.k is None or config.N_list is None or config.term is None:
        raise DomainError("appendix requires --k, --N-list, and --term")
    lams = _require_lambdas(config)
    cfgs = [EnsembleConfig(config.k, config.alpha, n) for n in config.N_list]
    report = bound_scan(config.term, cfgs, lams)
    term_text = "-".join(str(i) for i in config.term)
    result = {
        "alternatives": report.alternatives,
        "fit": report.fit,
        "label": report.label,
        "rows": report.rows,
        "term": list(config.term),
    }
    csv_rows = [
        (int(row.N), float(row.lam), term_text, float(row.magnitude)) for row in report.rows
    ]
    comments = [
        "# fit: model={} coefficients=({}) residual={}".format(
            report.fit.model,
            ", ".join(format(c, ".17g") for c in report.fit.coefficients),
            format(report.fit.residual, ".17g"),
        )
    ]
    for fit in report.alternatives:
        comments.append(
            "# alternative: model={} coefficients=({}) residual={}".format(
                fit.model,
                ", ".join(format(c, ".17g") for c in fit.coefficients),
                format(fit.residual, ".17g"),
            )
        )
    return _Artifact(
        result=result,
        csv=(("N", "lambda", "term", "magnitude"), csv_rows),
        csv_comments=tuple(comments),
    )


_HANDLERS = {
    "enumerate": _cmd_enumerate,
    "partition": _cmd_partition,
    "constant": _cmd_constant,
    "charfn": _cmd_charfn,
    "limit-charfn": _cmd_limit_charfn,
    "dickman": _cmd_dickman,
    "sum": _cmd_sum,
    "compare": _cmd_compare,
    "regions": _cmd_regions,
    "example": _cmd_example,
    "appendix": _cmd_appendix,
}


# ---------------------------------------------------------------------------
# Entry points


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse ``argv``, execute the subcommand, emit the artifact.

    Returns the exit status; see the module docstring for the code map.
    """
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        config = _config_from_namespace(ns)
        _apply_thread_cap(config.threads)
        artifact = _HANDLERS[config.command](config)
        text = _render(config, artifact)
        _emit(text, config.output)
    except (DomainError, DegenerateConfigError, PoleError, KeyError, OSError) as exc:
        print(f"kfree: error: {exc}", file=sys.stderr)
        return 2
    except ToleranceError as exc:
        print(f"kfree: tolerance failure: {exc}", file=sys.stderr)
        return 3
    except SizeCapError as exc:
        print(f"kfree: size cap: {exc}", file=sys.stderr)
        return 4
    if artifact.message:
        print(f"kfree: {artifact.message}", file=sys.stderr)
    return artifact.status


def main() -> None:
    sys.exit(run())
