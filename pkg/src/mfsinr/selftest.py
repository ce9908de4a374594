"""Release checks: special-function identities, known inversions, Monte Carlo agreement."""
from dataclasses import dataclass
import math

import numpy as np
from scipy import integrate, stats

from .charfn import SystemConfig
from .errors import BudgetExceededError, InversionError
from .inversion import QuadratureSpec, fourier_pdf, gil_pelaez_cdf
from .montecarlo import (McSpec, dkw_halfwidth, empirical_cdf, ks_pvalue, ks_statistic,
                         raw_interference_samples, simulate_sinr, two_sample_ks, two_sample_pvalue)
from .sinr_dist import sinr_cdf_beta_approx, sinr_cdf_exact
from .special_fn import (bessel_k_int, lower_incomplete_gamma_int, regularized_upper_gamma_int)


@dataclass
class Check:
    name: str
    passed: bool
    detail: str


def bessel_k_integral(nu, z):
    """``K_nu(z) = int_0^inf exp(-z cosh t) cosh(nu t) dt`` for ``Re z > 0`` by quadrature."""
    def part(fn):
        return integrate.quad(lambda t: fn(np.exp(-z * math.cosh(t)) * math.cosh(nu * t)),
                              0.0, 40.0, epsabs=1e-15, epsrel=1e-13, limit=400)[0]
    return complex(part(np.real), part(np.imag))


def check_special_functions():
    worst_comp = 0.0
    for n in range(1, 12):
        for x in (0.1, 1.0, 5.0, 20.0):
            lower = lower_incomplete_gamma_int(n, x).real / math.factorial(n - 1)
            worst_comp = max(worst_comp, abs(lower + regularized_upper_gamma_int(n, x) - 1.0))
    worst_rec = 0.0
    for n in range(1, 12):
        for z in (0.5 + 0.5j, 3.0 - 2.0j, 10.0 + 1.0j):
            lhs = lower_incomplete_gamma_int(n + 1, z)
            rhs = n * lower_incomplete_gamma_int(n, z) - z ** n * np.exp(-z)
            worst_rec = max(worst_rec, abs(lhs - rhs) / max(1.0, abs(lhs)))
    worst_k = 0.0
    for n in range(1, 10):
        for z in (0.3 + 0.1j, 2.0 - 1.0j, 12.0 + 5.0j, 40.0 + 30.0j):
            lhs = bessel_k_int(n + 1, z)
            rhs = bessel_k_int(n - 1, z) + (2.0 * n / z) * bessel_k_int(n, z)
            worst_k = max(worst_k, abs(lhs - rhs) / abs(lhs))
    worst_int = 0.0
    for nu in (0, 1):
        for z in (1.0 + 0.0j, 1.0 + 1.0j):
            ref = bessel_k_integral(nu, z)
            worst_int = max(worst_int, abs(bessel_k_int(nu, z) - ref) / abs(ref))
    ok = worst_comp <= 1e-9 and worst_rec <= 1e-9 and worst_k <= 1e-10 and worst_int <= 1e-10
    return Check("special functions", bool(ok),
                 f"gamma complement {worst_comp:.1e}, gamma recurrence {worst_rec:.1e}, "
                 f"K recurrence {worst_k:.1e}, K vs integral {worst_int:.1e}")


def check_known_inversions():
    worst = 0.0
    for n in range(1, 9):
        cf = lambda t, n=n: (1.0 - 1j * np.asarray(t)) ** (-n)
        for z in np.linspace(stats.gamma.ppf(0.005, n), stats.gamma.ppf(0.995, n), 7):
            worst = max(worst, abs(gil_pelaez_cdf(z, cf).value - stats.gamma.cdf(z, n)),
                        abs(fourier_pdf(z, cf).value - stats.gamma.pdf(z, n)))
    return Check("known CF inversions", bool(worst <= 1e-7), f"max abs error {worst:.1e}")


def check_ks(seed):
    x = raw_interference_samples(8, McSpec(100_000, seed))
    d = ks_statistic(x, lambda v: 1.0 - (1.0 - v) ** 7)
    p1 = ks_pvalue(d, x.size)
    cfg = SystemConfig(8, 4, 10.0)
    a = simulate_sinr(cfg, McSpec(100_000, seed), "direct")
    b = simulate_sinr(cfg, McSpec(100_000, seed + 1), "decomposed")
    p2 = two_sample_pvalue(two_sample_ks(a, b), a.size, b.size)
    return Check("KS witnesses", bool(p1 > 1e-3 and p2 > 1e-3),
                 f"interference term p={p1:.3f}, direct vs decomposed p={p2:.3f}")


def check_dkw(samples, seed, branch="principal"):
    cfg = SystemConfig(8, 4, 10.0)
    sinr = simulate_sinr(cfg, McSpec(samples, seed), "direct")
    grid = np.quantile(sinr, np.linspace(0.02, 0.98, 20))
    emp = empirical_cdf(sinr, grid).values
    band = dkw_halfwidth(samples, 0.01)
    try:
        exact = np.array([sinr_cdf_exact(g, cfg, branch=branch) for g in grid])
    except (InversionError, BudgetExceededError, ArithmeticError, ValueError) as exc:
        return Check("exact CDF vs Monte Carlo (DKW 99%)", False, f"inversion failed: {exc}")
    dev = float(np.max(np.abs(exact - emp))) if np.all(np.isfinite(exact)) else math.inf
    return Check("exact CDF vs Monte Carlo (DKW 99%)", bool(dev <= band), f"max deviation {dev:.2e}, band {band:.2e}")


def check_beta_consistency():
    cfg = SystemConfig(8, 4, 10.0)
    gap = abs(sinr_cdf_beta_approx(0.8, cfg) - sinr_cdf_exact(0.8, cfg))
    return Check("Beta approximation vs exact", bool(gap <= 5e-3), f"gap at gamma=0.8: {gap:.1e}")


def check_budget():
    try:
        v = sinr_cdf_exact(0.8, SystemConfig(8, 4, 10.0), QuadratureSpec(max_panels=5))
    except BudgetExceededError as exc:
        return Check("budget exhaustion reported", True, str(exc))
    return Check("budget exhaustion reported", False, f"returned {v!r} instead of raising")


def run_selftest(samples=10_000_000, seed=2024, branch="principal"):
    """Run every check; returns the list of :class:`Check` results."""
    return [
        check_special_functions(),
        check_known_inversions(),
        check_ks(seed),
        check_dkw(samples, seed, branch),
        check_beta_consistency(),
        check_budget(),
    ]
