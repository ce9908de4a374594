"""SINR distribution under matched-filter precoding.

The exact CDF and PDF come from inverting the characteristic function of
``Z = 1/SINR``.  Alongside them sit the Beta moment-matching approximation,
its high-SNR closed form, the high-SNR limit law of ``1/((K-1) SINR)`` and
the massive-MIMO limit of ``SINR/L``.
"""
from dataclasses import dataclass, field
from fractions import Fraction
import math
from typing import Optional

import numpy as np
from scipy import integrate

from .charfn import SystemConfig, cf_denominator, cf_scaled_interference
from .errors import DomainError
from .inversion import CfHandle, InversionResult, QuadratureSpec, fourier_pdf, gil_pelaez_cdf
from .special_fn import ln_beta, regularized_incomplete_beta, regularized_upper_gamma_int

CDF_METHODS = ("exact", "beta_approx", "high_snr", "massive_limit", "monte_carlo")


@dataclass
class DistributionCurve:
    """A CDF or PDF tabulated on an increasing grid."""

    grid: np.ndarray
    values: np.ndarray
    kind: str
    method: str
    cfg: Optional[SystemConfig] = None
    error_estimates: Optional[np.ndarray] = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.kind not in ("cdf", "pdf"):
            raise DomainError(f"kind must be 'cdf' or 'pdf', got {self.kind!r}")
        if self.method not in CDF_METHODS:
            raise DomainError(f"unknown method {self.method!r}")
        if self.grid.shape != self.values.shape or self.grid.ndim != 1:
            raise DomainError("grid and values must be 1-d arrays of equal length")
        if np.any(np.diff(self.grid) <= 0):
            raise DomainError("grid must be strictly increasing")


@dataclass(frozen=True)
class BetaApproxParams:
    """Shapes of the Beta surrogate for ``X' = X/(K-1)``, kept as exact rationals."""

    alpha: Fraction
    beta: Fraction

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise DomainError("Beta shapes must be positive")

    @property
    def mean(self):
        return self.alpha / (self.alpha + self.beta)

    @property
    def variance(self):
        s = self.alpha + self.beta
        return self.alpha * self.beta / (s * s * (s + 1))


def _check_gamma(gamma):
    if not (gamma > 0):
        raise DomainError(f"gamma must be positive, got {gamma!r}")
    return float(gamma)


def denominator_handle(cfg, branch="principal"):
    """CF of ``Z`` wrapped with integrator hints."""
    mean = (cfg.K - 1) / cfg.L
    if math.isfinite(cfg.p_t):
        mean += cfg.noise_ratio / (cfg.L - 1)
    return CfHandle(lambda t: cf_denominator(t, cfg, branch), bandwidth=float(cfg.K - 1), mean=mean)


def exact_cdf_result(gamma, cfg, quad=None, branch="principal"):
    """``F_SINR(gamma)`` together with the inversion diagnostics.

    The returned :class:`InversionResult` holds the SINR CDF, i.e. ``1 - F_Z(1/gamma)``.
    """
    gamma = _check_gamma(gamma)
    if cfg.K == 1:
        # no interference: SINR = ||h||^2 / a with ||h||^2 ~ Gamma(L, 1)
        if not math.isfinite(cfg.p_t):
            return InversionResult(0.0, 0.0, 0, 0.0, False, False)
        value = 1.0 - float(regularized_upper_gamma_int(cfg.L, cfg.noise_ratio * gamma))
        return InversionResult(value, 0.0, 0, 0.0, False, False)
    r = gil_pelaez_cdf(1.0 / gamma, denominator_handle(cfg, branch), quad)
    return r._replace(value=1.0 - r.value)


def sinr_cdf_exact(gamma, cfg, quad=None, branch="principal"):
    """Exact SINR CDF ``F(gamma) = 1 - F_Z(1/gamma)``.

    ``branch="flipped"`` swaps the square-root branch in the noise CF and
    exists only as a negative control.
    """
    return exact_cdf_result(gamma, cfg, quad, branch).value


def exact_pdf_result(gamma, cfg, quad=None, branch="principal"):
    gamma = _check_gamma(gamma)
    if cfg.K == 1:
        if not math.isfinite(cfg.p_t):
            return InversionResult(0.0, 0.0, 0, 0.0, False, False)
        a = cfg.noise_ratio
        L = cfg.L
        value = a * math.exp((L - 1) * math.log(a * gamma) - a * gamma - math.lgamma(L))
        return InversionResult(value, 0.0, 0, 0.0, False, False)
    r = fourier_pdf(1.0 / gamma, denominator_handle(cfg, branch), quad)
    scale = 1.0 / (gamma * gamma)
    return r._replace(value=r.value * scale, error=r.error * scale)


def sinr_pdf_exact(gamma, cfg, quad=None, branch="principal"):
    """Exact SINR density ``f(gamma) = f_Z(1/gamma) / gamma**2``."""
    return exact_pdf_result(gamma, cfg, quad, branch).value


def outage_probability(gamma_th, cfg, quad=None):
    """Probability that the SINR falls below ``gamma_th``."""
    return sinr_cdf_exact(gamma_th, cfg, quad)


def beta_approx_params(L, K):
    """Shapes matching the first two moments of ``X' = X/(K-1)``.

    ``alpha = ((K-1)(L+1) - 1)/L`` and ``beta = alpha (L-1)``, exact rationals.
    """
    if int(L) != L or L < 2 or int(K) != K or K < 2:
        raise DomainError(f"need integers L >= 2 and K >= 2, got L={L!r}, K={K!r}")
    L, K = int(L), int(K)
    alpha = Fraction((K - 1) * (L + 1) - 1, L)
    return BetaApproxParams(alpha, alpha * (L - 1))


def sinr_cdf_beta_approx(gamma, cfg, quad=None):
    """SINR CDF with the interference sum replaced by its Beta surrogate.

    ``1 - int_0^xi Beta(x; alpha, beta) Q(L, a/(1/gamma - (K-1)x)) dx`` with
    ``xi = min(1/((K-1) gamma), 1)``; the ``Q`` factor tends to zero at
    ``x = xi`` when ``xi < 1`` and the integrand is continued by 0 there.
    """
    gamma = _check_gamma(gamma)
    quad = quad or QuadratureSpec()
    params = beta_approx_params(cfg.L, cfg.K)
    alpha, beta = float(params.alpha), float(params.beta)
    inv = 1.0 / gamma
    km1 = cfg.K - 1
    xi = min(inv / km1, 1.0)
    a = cfg.noise_ratio
    if a == 0:
        return 1.0 - regularized_incomplete_beta(xi, alpha, beta)
    lnb = ln_beta(alpha, beta)

    def integrand(x):
        if x <= 0.0 or x >= 1.0:
            return 0.0
        gap = inv - km1 * x
        if gap <= 0.0:
            return 0.0
        dens = math.exp((alpha - 1) * math.log(x) + (beta - 1) * math.log1p(-x) - lnb)
        return dens * float(regularized_upper_gamma_int(cfg.L, a / gap))

    # Q(L, a/gap) drops from 1 to 0 around a/gap = L
    points = [p for p in ((inv - a / cfg.L) / km1, (inv - 2 * a / cfg.L) / km1,
                          (inv - 0.5 * a / cfg.L) / km1, 1.0 / cfg.L)
              if 0.0 < p < xi]
    val, err = integrate.quad(integrand, 0.0, xi, points=sorted(set(points)) or None,
                              epsabs=0.1 * quad.abs_tol, epsrel=quad.rel_tol, limit=500)
    return min(max(1.0 - val, 0.0), 1.0)


def sinr_cdf_high_snr_beta(gamma, L, K):
    """High-SNR closed form of the Beta approximation: ``1 - I_xi(alpha, beta)``."""
    gamma = _check_gamma(gamma)
    params = beta_approx_params(L, K)
    xi = min(1.0 / ((K - 1) * gamma), 1.0)
    return 1.0 - regularized_incomplete_beta(xi, float(params.alpha), float(params.beta))


def scaled_interference_limit_cdf(x, L, K, quad=None):
    """CDF of ``X' = X/(K-1)``, the high-SNR limit law of ``1/((K-1) SINR)``."""
    if not x > 0:
        raise DomainError(f"x must be positive, got {x!r}")
    if x >= 1.0:
        return 1.0
    cfg = SystemConfig(L, K, math.inf)
    handle = CfHandle(lambda t: cf_scaled_interference(t, cfg), bandwidth=1.0, mean=1.0 / L)
    return gil_pelaez_cdf(x, handle, quad).value


def scaled_inverse_sinr_cdf(x, cfg, quad=None):
    """CDF of ``1/((K-1) SINR)`` at ``x``.

    Equals ``1 - F_SINR(1/((K-1) x))``; with ``cfg.p_t = inf`` it is the limit
    law :func:`scaled_interference_limit_cdf`.
    """
    if cfg.K < 2:
        raise DomainError("1/((K-1) SINR) needs K >= 2")
    if not x > 0:
        raise DomainError(f"x must be positive, got {x!r}")
    if not math.isfinite(cfg.p_t):
        return scaled_interference_limit_cdf(x, cfg.L, cfg.K, quad)
    return 1.0 - sinr_cdf_exact(1.0 / ((cfg.K - 1) * x), cfg, quad)


def massive_limit_cdf(x, K, p_t, sigma2=1.0):
    """Large-``L`` limit CDF of ``SINR/L``.

    ``SINR/L`` tends to ``1/(a + G)`` with ``G ~ Gamma(K-1, 1)`` and
    ``a = K sigma2 / p_t``, so the CDF is ``Q(K-1, 1/x - a)`` (1 once
    ``1/x <= a``).
    """
    if int(K) != K or K < 2:
        raise DomainError(f"K must be an integer >= 2, got {K!r}")
    if not x > 0:
        raise DomainError(f"x must be positive, got {x!r}")
    if not p_t > 0 or not sigma2 > 0:
        raise DomainError("p_t and sigma2 must be positive")
    a = K * sigma2 / p_t
    gap = 1.0 / x - a
    if gap <= 0:
        return 1.0
    return float(regularized_upper_gamma_int(int(K) - 1, gap))


def nonconvergence_probability_bound(eps):
    """Upper bound ``e^eps - e^-eps`` on ``Pr{|X' - L X_i| <= eps}`` for ``X' ~ Exp(1)``."""
    if not eps > 0:
        raise DomainError(f"eps must be positive, got {eps!r}")
    return 2.0 * math.sinh(eps)


def default_grid(cfg, points=50):
    """Log grid over ``[1e-3, 1e3] * L/K``."""
    centre = cfg.L / cfg.K
    return np.geomspace(1e-3 * centre, 1e3 * centre, points)


def cdf_curve(cfg, grid=None, method="exact", quad=None):
    """Tabulate an analytic SINR CDF on ``grid``."""
    grid = default_grid(cfg) if grid is None else np.asarray(grid, dtype=float)
    errors = None
    if method == "exact":
        res = [exact_cdf_result(g, cfg, quad) for g in grid]
        values = [r.value for r in res]
        errors = np.array([r.error for r in res])
    elif method == "beta_approx":
        values = [sinr_cdf_beta_approx(g, cfg, quad) for g in grid]
    elif method == "high_snr":
        values = [sinr_cdf_high_snr_beta(g, cfg.L, cfg.K) for g in grid]
    elif method == "massive_limit":
        values = [massive_limit_cdf(g / cfg.L, cfg.K, cfg.p_t, cfg.sigma2) for g in grid]
    else:
        raise DomainError(f"cdf_curve does not compute method {method!r}")
    return DistributionCurve(grid, np.array(values), "cdf", method, cfg, errors)


def pdf_curve(cfg, grid=None, quad=None):
    """Tabulate the exact SINR density on ``grid``."""
    grid = default_grid(cfg) if grid is None else np.asarray(grid, dtype=float)
    res = [exact_pdf_result(g, cfg, quad) for g in grid]
    return DistributionCurve(grid, np.array([r.value for r in res]), "pdf", "exact", cfg,
                             np.array([r.error for r in res]))
