"""Ergodic rate ``E[ln(1 + SINR)]`` in nats/s/Hz: closed-form estimates and Monte Carlo."""
from dataclasses import dataclass
import math
from typing import Optional

import numpy as np

from .errors import DomainError
from .montecarlo import McSpec, mean_and_se, simulate_components


@dataclass(frozen=True)
class DenominatorMoments:
    """Mean and variance of ``Z = 1/SINR``; the variance needs ``L > 2``."""

    mu_z: float
    sigma2_z: Optional[float] = None


def denominator_moments(cfg, variance=True):
    """``mu_Z = a/(L-1) + (K-1)/L`` and
    ``sigma2_Z = a^2/((L-1)^2 (L-2)) + (K-1)(L-1)/(L^2 (L+1))`` with ``a = K sigma^2/P_t``.
    """
    L, K = cfg.L, cfg.K
    a = cfg.noise_ratio
    mu = a / (L - 1) + (K - 1) / L
    if not variance:
        return DenominatorMoments(mu)
    if L <= 2:
        raise DomainError("the variance of Z is finite only for L > 2")
    var = a * a / ((L - 1) ** 2 * (L - 2)) + (K - 1) * (L - 1) / (L * L * (L + 1))
    return DenominatorMoments(mu, var)


def ergodic_rate_jensen(cfg):
    """Jensen lower bound ``ln(1 + 1/E[Z])``."""
    return math.log1p(1.0 / denominator_moments(cfg, variance=False).mu_z)


def robust_correction(mu, var):
    """Second-order term ``(var/2) (2 mu + 1) / (mu^2 (mu + 1)^2)``."""
    return 0.5 * var * (2.0 * mu + 1.0) / (mu * mu * (mu + 1.0) ** 2)


def ergodic_rate_robust(cfg):
    """Second-order expansion of ``E[ln(1 + 1/Z)]`` about ``mu_Z``."""
    m = denominator_moments(cfg)
    return math.log1p(1.0 / m.mu_z) + robust_correction(m.mu_z, m.sigma2_z)


def ergodic_rate_asymptotic(c, p_t, sigma2=1.0):
    """Large-system rate ``ln(1 + c P_t/(P_t + sigma^2))`` for a fixed ratio ``c = L/K``."""
    if not c > 0:
        raise DomainError(f"c must be positive, got {c!r}")
    if not p_t > 0 or not sigma2 > 0:
        raise DomainError("p_t and sigma2 must be positive")
    frac = 1.0 if math.isinf(p_t) else p_t / (p_t + sigma2)
    return math.log1p(c * frac)


def rates_from_components(g, x, cfg):
    """Per-draw ``ln(1 + SINR)`` from sampled ``(g, X)``."""
    return np.log1p(1.0 / (cfg.noise_ratio / g + x))


def ergodic_rate_mc(cfg, mc, method="direct"):
    """Sample mean of ``ln(1 + SINR)`` and its standard error."""
    g, x = simulate_components(cfg.L, cfg.K, mc, method)
    return mean_and_se(rates_from_components(g, x, cfg))


def ergodic_rate_mc_sweep(cfg, p_t_values, mc, method="direct"):
    """Monte Carlo rate at several powers from one set of channel draws."""
    g, x = simulate_components(cfg.L, cfg.K, mc, method)
    return [mean_and_se(rates_from_components(g, x, cfg.with_power(p))) for p in p_t_values]
