"""Cutoff-weighted sums over the ensemble by three exchangeable routes.

For a cutoff f and ensemble parameters (k, alpha, N) the central quantity is

    S = sum over ensemble elements x of  f(log x / log N) * alpha^Omega(x) / x.

Routes:

* ``smooth_sum_direct``    -- the literal finite sum (enumerable N only);
* ``smooth_sum_spectral``  -- the exact identity S = Z * integral of
  phi_N(lambda) * fhat(lambda) over the frequency line, truncated at |lambda|
  <= R with a reported tail bound;
* ``asymptotic_prediction`` -- the large-N form C * (log N)^alpha * integral
  of the limiting characteristic function against fhat over |lambda| <= R,
  with an error envelope in the two standard terms.

Fourier convention throughout: fhat(lambda) = (1/2pi) * integral of
f(u) e^{-i lambda u} du, so that f(u) = integral of fhat(lambda) e^{i lambda u}
d lambda with no extra factor.  Indicator cutoffs use closed intervals (the
right endpoint u = 1 is included), matching the direct route's treatment of
elements with log x = log N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.integrate import quad

from ._quad import gauss_panels
from .dickman import charfn_limit_grid
from .ensemble import (
    CharfnEvaluator,
    EnsembleConfig,
    FastCharfn,
    enumerate_ensemble,
    forbidden_alphas,
    measure,
    partition_constant,
    partition_function,
)
from .errors import DegenerateConfigError, DomainError, ToleranceError
from .primes import prime_count, sieve_primes

__all__ = [
    "CutoffDescriptor",
    "ComparisonReport",
    "SpectralSum",
    "RateDescriptor",
    "builtin_cutoffs",
    "get_cutoff",
    "fourier_transform",
    "smooth_sum_direct",
    "smooth_sum_spectral",
    "asymptotic_prediction",
    "error_region",
    "corollary1_rate",
    "theorem1_ratio_scan",
]

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# cutoff descriptors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CutoffDescriptor:
    """A cutoff f together with its transform and decay metadata.

    ``transform`` evaluates fhat at one frequency; ``transform_batch`` (when
    present) evaluates a whole numpy grid at once and is the fast path for
    panel quadrature.  ``eta``/``decay_constant`` give the generic envelope
    |fhat(lam)| <= C / (1 + |lam|^eta); ``transform_bound``, when set, is a
    tighter explicit envelope used preferentially.  ``tail_integral`` maps R
    to a bound on the integral of |fhat| over |lam| > R (both half lines).
    """

    name: str
    evaluate: Callable[[float], float]
    transform: Callable[[float], complex]
    eta: float
    decay_constant: float
    support: Optional[tuple]
    tail_integral: Callable[[float], float]
    transform_batch: Optional[Callable] = None
    transform_bound: Optional[Callable[[float], float]] = None
    # (u, f(u) - (f(u+) + f(u-))/2) at each jump discontinuity: Fourier
    # inversion converges to the midpoint there, so ensemble elements that
    # land exactly on a jump need an explicit atom correction (see
    # smooth_sum_spectral).
    jumps: tuple = ()

    def transform_grid(self, lams: np.ndarray) -> np.ndarray:
        lams = np.asarray(lams, dtype=float)
        if self.transform_batch is not None:
            return self.transform_batch(lams)
        return np.array([self.transform(float(l)) for l in lams], dtype=complex)


# -- indicator of [0, 1] ----------------------------------------------------


def _indicator_evaluate(u: float) -> float:
    return 1.0 if 0.0 <= u <= 1.0 else 0.0


def _indicator_transform_batch(lams: np.ndarray) -> np.ndarray:
    lams = np.asarray(lams, dtype=float)
    # (1/2pi) * (1 - e^{-i lam}) / (i lam) in the removable-singularity form
    # e^{-i lam / 2} * sinc(lam / 2pi) / 2pi, exact at lam = 0.
    return np.exp(-0.5j * lams) * np.sinc(lams / TWO_PI) / TWO_PI


def _indicator_tail(R: float) -> float:
    # The transform decays like 1/(pi*lam) only, so the absolute tail
    # integral diverges; symmetric integration pairs +/-lambda and the
    # oscillatory tail obeys a Dirichlet-test envelope ~ 1/R.  This is a
    # reported envelope (constant 4/pi fitted), not a proof.
    if R <= 0:
        return math.inf
    return 4.0 / (math.pi * R)


# -- smooth bump on [-1, 1] -------------------------------------------------


def _bump_evaluate(u: float) -> float:
    if abs(u) >= 1.0:
        return 0.0
    return math.exp(-1.0 / (1.0 - u * u))


@lru_cache(maxsize=None)
def _bump_nodes():
    """Cached Gauss-Legendre grid of the bump profile on [0, 1].

    100 panels x 20 nodes resolve cos(lam*u) to machine precision for
    lam up to ~500 (about 0.6 oscillation periods per panel).
    """
    x, w = gauss_panels(0.0, 1.0, 100, 20)
    g = np.array([_bump_evaluate(float(xi)) for xi in x])
    return x, w * g


def bump_transform(lam: float, tol: float = 1e-12) -> float:
    """fhat of the bump at one frequency by adaptive oscillatory quadrature.

    The profile is even, so fhat(lam) = (1/pi) * integral over [0, 1] of
    e^{-1/(1-u^2)} cos(lam*u) du; the cos-weighted adaptive rule reports a
    per-call error estimate checked against ``tol``.
    """
    val, err = quad(
        _bump_evaluate, 0.0, 1.0, weight="cos", wvar=abs(float(lam)),
        epsabs=tol, epsrel=0.0, limit=400,
    )
    if err > 50 * tol:
        raise ToleranceError(f"bump transform error estimate {err:.2e} > {tol:.2e}")
    return val / math.pi


def _bump_transform_batch(lams: np.ndarray) -> np.ndarray:
    lams = np.asarray(lams, dtype=float)
    x, wg = _bump_nodes()
    return (np.cos(np.outer(lams, x)) @ wg / math.pi).astype(complex)


def _bump_transform_bound(lam: float) -> float:
    lam = abs(lam)
    if lam < 1.0:
        return 0.070664  # |fhat| <= fhat(0), rounded up in the last digit
    return 1.5 / math.pi * math.exp(-math.sqrt(lam)) * lam**-0.75


def _bump_tail(R: float) -> float:
    # integral over lam > R of (3/2pi) e^{-sqrt(lam)} lam^{-3/4} d lam
    #   = (3/pi) * Gamma(1/2, sqrt(R)) = (3/sqrt(pi)) * erfc(R^{1/4}),
    # doubled for both half lines... the envelope already covers one half
    # line; symmetric tails double it.
    R = max(float(R), 1.0)
    return 2.0 * 3.0 / math.sqrt(math.pi) * math.erfc(R**0.25)


# -- bump rescaled to [0, 1] ------------------------------------------------


def _bump01_evaluate(u: float) -> float:
    return _bump_evaluate(2.0 * u - 1.0)


def _bump01_transform_batch(lams: np.ndarray) -> np.ndarray:
    lams = np.asarray(lams, dtype=float)
    return np.exp(-0.5j * lams) * 0.5 * _bump_transform_batch(0.5 * lams)


def _bump01_tail(R: float) -> float:
    # |fhat01(lam)| = |fhat(lam/2)| / 2, so the tail integral equals the
    # plain bump tail beyond R/2.
    return _bump_tail(0.5 * float(R))


# -- Gaussian control case --------------------------------------------------


def _gauss_evaluate(u: float) -> float:
    return math.exp(-0.5 * u * u)


def _gauss_transform_batch(lams: np.ndarray) -> np.ndarray:
    lams = np.asarray(lams, dtype=float)
    return (np.exp(-0.5 * lams**2) / math.sqrt(TWO_PI)).astype(complex)


def _gauss_tail(R: float) -> float:
    return float(math.erfc(max(R, 0.0) / math.sqrt(2.0)))


def builtin_cutoffs() -> tuple:
    """The four built-in cutoffs: indicator, bump, shifted bump, Gaussian."""
    indicator = CutoffDescriptor(
        name="indicator",
        evaluate=_indicator_evaluate,
        transform=lambda lam: complex(_indicator_transform_batch(np.array([lam]))[0]),
        # sup over lam of (1 + lam)|fhat| is ~0.42 (attained near lam = pi);
        # 1/2 is a clean upper bound for the S_1 membership envelope
        eta=1.0,
        decay_constant=0.5,
        support=(0.0, 1.0),
        tail_integral=_indicator_tail,
        transform_batch=_indicator_transform_batch,
        jumps=((0.0, 0.5), (1.0, 0.5)),
    )
    bump = CutoffDescriptor(
        name="bump",
        evaluate=_bump_evaluate,
        transform=lambda lam, tol=1e-12: complex(bump_transform(lam, tol)),
        eta=10.0,
        decay_constant=2e15,
        support=(-1.0, 1.0),
        tail_integral=_bump_tail,
        transform_batch=_bump_transform_batch,
        transform_bound=_bump_transform_bound,
    )
    bump01 = CutoffDescriptor(
        name="bump01",
        evaluate=_bump01_evaluate,
        transform=lambda lam: complex(_bump01_transform_batch(np.array([lam]))[0]),
        # half-argument decay e^{-sqrt(lam/2)}: sup of (1+lam^10)|fhat| is
        # ~6e17 near lam = 800
        eta=10.0,
        decay_constant=1e18,
        support=(0.0, 1.0),
        tail_integral=_bump01_tail,
        transform_batch=_bump01_transform_batch,
        transform_bound=lambda lam: 0.5 * _bump_transform_bound(0.5 * lam),
    )
    gaussian = CutoffDescriptor(
        name="gaussian",
        evaluate=_gauss_evaluate,
        transform=lambda lam: complex(_gauss_transform_batch(np.array([lam]))[0]),
        eta=10.0,
        decay_constant=300.0,
        support=None,
        tail_integral=_gauss_tail,
        transform_batch=_gauss_transform_batch,
    )
    return indicator, bump, bump01, gaussian


@lru_cache(maxsize=1)
def _builtin_map() -> dict:
    return {f.name: f for f in builtin_cutoffs()}


def get_cutoff(name: str) -> CutoffDescriptor:
    try:
        return _builtin_map()[name]
    except KeyError:
        raise DomainError(
            f"unknown cutoff {name!r}; available: {sorted(_builtin_map())}"
        ) from None


def fourier_transform(f: CutoffDescriptor, lam: float, tol: float = 1e-9) -> complex:
    """fhat(lam) by direct adaptive quadrature of f(u) e^{-i lam u} / 2pi.

    Deliberately ignores the descriptor's own transform so it can serve as an
    independent cross-check of the closed forms and cached grids.
    """
    lo, hi = f.support if f.support is not None else (-40.0, 40.0)
    lam = float(lam)
    re, re_err = quad(
        lambda u: f.evaluate(u) * math.cos(lam * u), lo, hi,
        epsabs=tol, epsrel=tol, limit=400,
    )
    im, im_err = quad(
        lambda u: -f.evaluate(u) * math.sin(lam * u), lo, hi,
        epsabs=tol, epsrel=tol, limit=400,
    )
    if re_err + im_err > 50 * tol:
        raise ToleranceError(
            f"transform quadrature error {re_err + im_err:.2e} exceeds {tol:.2e}"
        )
    return complex(re, im) / TWO_PI


# ---------------------------------------------------------------------------
# route 1: direct summation
# ---------------------------------------------------------------------------


def smooth_sum_direct(cfg: EnsembleConfig, f: CutoffDescriptor) -> complex:
    """The literal cutoff-weighted sum over the enumerated ensemble."""
    alpha = complex(cfg.alpha)
    total = 0.0 + 0.0j
    for value, fac in enumerate_ensemble(cfg):
        fu = f.evaluate(fac.xi(cfg.N))
        if fu:
            total += fu * alpha**fac.omega / value
    return total


# ---------------------------------------------------------------------------
# route 2: spectral identity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpectralSum:
    """Truncated spectral evaluation with its error budget.

    ``declared_tolerance`` = quadrature error estimate + tail bound is the
    agreement radius guaranteed against the direct route.
    """

    value: complex
    R: float
    quadrature_error: float
    tail_bound: float

    @property
    def declared_tolerance(self) -> float:
        return self.quadrature_error + self.tail_bound


def comparison_tolerance(cfg: EnsembleConfig, direct: complex, spectral: SpectralSum) -> float:
    """Agreement radius for a direct-vs-spectral route comparison.

    ``declared_tolerance`` budgets the spectral route's truncation and
    quadrature only.  Comparing against the literal sum adds the binary64
    rounding accumulated over its k^pi(N) terms; that part is modeled as a
    random walk over the term count with an 8x safety factor and scaled by
    the magnitudes being compared.
    """
    count = float(cfg.k) ** prime_count(cfg.N)
    rounding = (
        8.0
        * float(np.finfo(float).eps)
        * math.sqrt(count)
        * (1.0 + abs(direct) + abs(spectral.value))
    )
    return float(spectral.declared_tolerance + rounding)


_PANEL_WIDTH = 1.0
_PANEL_NODES = 16


def _symmetric_grid(R: float, coarse: bool = False):
    half = max(1, int(math.ceil(R / _PANEL_WIDTH)))
    if coarse:
        half = max(1, half // 2)
    return gauss_panels(-R, R, 2 * half, _PANEL_NODES)


_transform_node_cache: dict = {}


def _transform_on_grid(f: CutoffDescriptor, points: np.ndarray, key) -> np.ndarray:
    if key is not None:
        cached = _transform_node_cache.get((f.name, key))
        if cached is not None:
            return cached
    vals = f.transform_grid(points)
    if key is not None:
        _transform_node_cache[(f.name, key)] = vals
    return vals


def _atom_correction(cfg: EnsembleConfig, f: CutoffDescriptor) -> complex:
    """Exact correction for ensemble elements sitting on jumps of f.

    Fourier inversion of a discontinuous cutoff converges to the midpoint
    value at each jump u_j, while the direct sum uses f(u_j) itself.  The
    only candidate element with log x / log N = u_j is x = N^{u_j}, whose
    weighted mass alpha^Omega(x)/x is added back scaled by the convention
    gap f(u_j) - midpoint.
    """
    total = 0.0 + 0.0j
    for u_j, delta in f.jumps:
        x_star = math.exp(u_j * math.log(cfg.N))
        xr = int(round(x_star))
        if xr < 1 or abs(x_star - xr) > 1e-9 * max(xr, 1):
            continue
        try:
            total += delta * measure(cfg, [xr])
        except DomainError:
            continue
    return total


def smooth_sum_spectral(
    cfg: EnsembleConfig,
    f: CutoffDescriptor,
    R: Optional[float] = None,
    tol: float = 1e-9,
    charfn=None,
) -> SpectralSum:
    """Z times the truncated frequency integral of phi_N * fhat.

    When ``R`` is omitted it is doubled from 8 upward until the tail bound
    (trivial bound on |Z * phi_N| times the integral of |fhat| beyond R)
    drops below ``tol/2``; failure to reach that within R = 4096 raises
    :class:`ToleranceError` naming the last R tried.  An explicit ``R`` is
    honored as given and the tail bound is only reported.  The quadrature
    error is estimated by re-evaluating on a half-resolution panel grid.

    Discontinuous cutoffs receive the exact boundary-atom correction of
    :func:`_atom_correction` so that the routes share one convention (the
    closed-interval reading of indicator endpoints).
    """
    z = partition_function(cfg)
    z_abs = abs(partition_function(EnsembleConfig(k=cfg.k, alpha=abs(cfg.alpha), N=cfg.N)))
    if abs(z) == 0.0:
        raise DegenerateConfigError("partition function vanishes; spectral route undefined")
    if R is None:
        R = 8.0
        while z_abs * f.tail_integral(R) > 0.5 * tol:
            R *= 2.0
            if R > 4096.0:
                raise ToleranceError(
                    f"tail bound {z_abs * f.tail_integral(R):.2e} still above "
                    f"tol/2 = {0.5 * tol:.2e} at R = {R:.0f}; cutoff decays too slowly"
                )
    R = float(R)
    tail_bound = float(z_abs * f.tail_integral(R))
    if charfn is None:
        charfn = CharfnEvaluator(cfg)
    fine_pts, fine_w = _symmetric_grid(R)
    coarse_pts, coarse_w = _symmetric_grid(R, coarse=True)
    key = (round(R, 12), len(fine_pts))
    fhat_fine = _transform_on_grid(f, fine_pts, key)
    fhat_coarse = _transform_on_grid(f, coarse_pts, (round(R, 12), len(coarse_pts)))
    fine = complex(np.dot(fine_w, charfn.grid(fine_pts) * fhat_fine))
    coarse = complex(np.dot(coarse_w, charfn.grid(coarse_pts) * fhat_coarse))
    return SpectralSum(
        value=z * fine + _atom_correction(cfg, f),
        R=R,
        quadrature_error=float(abs(z) * abs(fine - coarse)),
        tail_bound=tail_bound,
    )


# ---------------------------------------------------------------------------
# route 3: large-N asymptotic
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ComparisonReport:
    """All computable routes for one configuration, with the error envelope."""

    k: int
    alpha: complex
    N: int
    cutoff: str
    R: float
    constant: complex
    direct: Optional[complex]
    spectral: complex
    asymptotic: complex
    epsilon_bound: float
    ratios: dict = field(default_factory=dict)


def _limit_integral(alpha: complex, f: CutoffDescriptor, R: float) -> complex:
    pts, w = _symmetric_grid(R)
    fhat = _transform_on_grid(f, pts, (round(R, 12), len(pts)))
    return complex(np.dot(w, charfn_limit_grid(alpha, pts) * fhat))


def asymptotic_prediction(
    cfg: EnsembleConfig,
    f: CutoffDescriptor,
    R: Optional[float] = None,
    constant: Optional[complex] = None,
    enumeration_limit: int = 1 << 20,
) -> ComparisonReport:
    """Leading-order prediction C*(log N)^alpha * integral over |lam| <= R.

    Preconditions are checked numerically and violations raise errors naming
    the failed inequality.  ``constant`` short-circuits the extrapolation of
    the partition constant (useful when sweeping N at fixed (k, alpha)).
    ``epsilon_bound`` is the standard two-term envelope with unit constants:
    log log N / log N plus (log N)^{|alpha| - Re alpha} / R^{eta - 1}.
    """
    alpha = complex(cfg.alpha)
    for bad in forbidden_alphas(cfg.k, max(3, int(abs(alpha)) + 1)):
        if abs(alpha - bad) < 1e-12:
            raise DegenerateConfigError(f"alpha = {alpha} lies in the forbidden set")
    if abs(alpha) >= 2:
        raise DomainError("precondition failed: |alpha| < 2")
    delta = abs(alpha) - alpha.real
    if not f.eta > delta + 1.0:
        raise DomainError(
            f"precondition failed: eta > |alpha| - Re alpha + 1 "
            f"(eta = {f.eta}, delta = {delta:.3f})"
        )
    log_n = math.log(cfg.N)
    if R is None:
        R = log_n / math.log(log_n)
    R = float(R)
    if not R <= log_n:
        raise DomainError(f"precondition failed: R <= log N (R = {R:.3f}, log N = {log_n:.3f})")
    if not log_n**delta / R ** (f.eta - 1.0) <= 1.0:
        raise DomainError(
            "precondition failed: (log N)^(|alpha| - Re alpha) / R^(eta - 1) <= 1"
        )
    if constant is None:
        constant = partition_constant(cfg.k, alpha).value
    constant = complex(constant)
    log_pow = complex(np.exp(alpha * math.log(log_n)))
    asymptotic = constant * log_pow * _limit_integral(alpha, f, R)
    # exact per-prime evaluator up to 10^4; beyond that the bucketed fast
    # evaluator keeps large-N sweeps tractable (validated against the exact
    # one in the ensemble tests)
    charfn = None
    if cfg.N > 10**4:
        charfn = FastCharfn(cfg, head_limit=10**4, buckets=4096)
    spectral = smooth_sum_spectral(cfg, f, charfn=charfn)
    n_primes = len(sieve_primes(cfg.N).primes)
    direct = None
    if cfg.k**n_primes <= enumeration_limit:
        direct = smooth_sum_direct(cfg, f)
    epsilon_bound = math.log(log_n) / log_n + log_n**delta / R ** (f.eta - 1.0)
    ratios = {"spectral_over_asymptotic": spectral.value / asymptotic}
    if direct is not None:
        ratios["direct_over_spectral"] = direct / spectral.value
    return ComparisonReport(
        k=cfg.k,
        alpha=alpha,
        N=cfg.N,
        cutoff=f.name,
        R=R,
        constant=constant,
        direct=direct,
        spectral=spectral.value,
        asymptotic=asymptotic,
        epsilon_bound=float(epsilon_bound),
        ratios=ratios,
    )


# ---------------------------------------------------------------------------
# error-regime classification
# ---------------------------------------------------------------------------


def error_region(tau: float, eta: float, delta: float = 0.0) -> str:
    """Classify the truncation regime for R = (log N)^(1 - tau).

    Returns ``"a"`` when the log log N / log N term dominates (tau at or
    below the lower hyperbola), ``"b"`` between the two hyperbolas, and
    ``"invalid"`` at or above the upper one, where the truncation term no
    longer vanishes.  ``delta`` is the decay offset |alpha| - Re alpha of
    the intended weight.
    """
    if not eta > 1.0:
        raise DomainError("error_region requires eta > 1")
    if not 0.0 < tau < 1.0:
        raise DomainError("tau must lie in (0, 1)")
    upper = (eta - (delta + 1.0)) / (eta - 1.0)
    lower = max(0.0, (eta - (delta + 2.0)) / (eta - 1.0))
    if tau >= upper:
        return "invalid"
    if tau <= lower:
        return "a"
    return "b"


@dataclass(frozen=True)
class RateDescriptor:
    """Symbolic convergence rate (log log N)^a / (log N)^b."""

    branch: str
    loglog_exponent: float
    log_exponent: float

    def describe(self) -> str:
        return (
            f"(log log N)^{self.loglog_exponent:g} / (log N)^{self.log_exponent:g}"
        )

    def evaluate(self, N: float) -> float:
        ln = math.log(N)
        return math.log(ln) ** self.loglog_exponent / ln**self.log_exponent


def corollary1_rate(eta: float, delta: float) -> RateDescriptor:
    """Error decay rate for the balanced truncation R = log N / log log N.

    Above ``eta = delta + 2`` the rate saturates at log log N / log N; at or
    below that threshold (but above ``delta``) the truncation term leads and
    the exponents depend on eta.
    """
    if not eta > delta:
        raise DomainError("corollary1_rate requires eta > delta")
    if eta > delta + 2.0:
        return RateDescriptor(branch="loglog-over-log", loglog_exponent=1.0, log_exponent=1.0)
    return RateDescriptor(
        branch="power",
        loglog_exponent=eta - 1.0,
        log_exponent=eta - (delta + 1.0),
    )


# ---------------------------------------------------------------------------
# large-N ratio scan
# ---------------------------------------------------------------------------


def theorem1_ratio_scan(
    k: int,
    alpha: complex,
    n_values: Sequence[int],
    f: Optional[CutoffDescriptor] = None,
    R_numerator: float = 360.0,
    head_limit: int = 10**4,
    buckets: int = 4096,
) -> list:
    """Ratio of the spectral integral to its limiting prediction, per N.

    Returns [(N, R_N, ratio)] where ratio = (integral of phi_N * fhat over
    |lam| <= R_numerator) / (integral of the limiting characteristic
    function * fhat over |lam| <= R_N), R_N = log N / log log N.  The
    partition factor cancels in the ratio, so the scan stays well
    conditioned even where Z itself tends to zero.  phi_N is evaluated with
    the bucketed fast evaluator (exact at and below N = 10^4).
    """
    if f is None:
        f = get_cutoff("bump")
    num_pts, num_w = _symmetric_grid(float(R_numerator))
    fhat_num = _transform_on_grid(
        f, num_pts, (round(float(R_numerator), 12), len(num_pts))
    )
    out = []
    for N in sorted(int(n) for n in n_values):
        cfg = EnsembleConfig(k=k, alpha=alpha, N=N)
        if N <= 10**4:
            charfn = CharfnEvaluator(cfg)
        else:
            charfn = FastCharfn(cfg, head_limit=head_limit, buckets=buckets)
        numerator = complex(np.dot(num_w, charfn.grid(num_pts) * fhat_num))
        log_n = math.log(N)
        R_N = log_n / math.log(log_n)
        denominator = _limit_integral(complex(alpha), f, R_N)
        out.append((N, R_N, numerator / denominator))
    return out
