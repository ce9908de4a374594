"""Tabulated experiments: outage sweeps, limit-law convergence and ergodic rates.

Each function returns a :class:`Table`; the CLI writes tables as CSV with a
metadata header.  Monte Carlo columns reuse one set of channel draws across
all transmit powers of a sweep.
"""
from dataclasses import dataclass, field
import math

import numpy as np

from .charfn import SystemConfig
from .errors import BudgetExceededError, InversionError
from .montecarlo import empirical_cdf, simulate_components, sinr_from_components
from .rate import (ergodic_rate_asymptotic, ergodic_rate_jensen, ergodic_rate_robust,
                   mean_and_se, rates_from_components)
from .sinr_dist import (exact_cdf_result, exact_pdf_result, massive_limit_cdf,
                        scaled_interference_limit_cdf, scaled_inverse_sinr_cdf,
                        sinr_cdf_beta_approx, sinr_cdf_high_snr_beta)

FIG1_PT_DB = np.linspace(-10.0, 30.0, 41)
FIG2_LEFT_PT = (1.0, 10.0, 100.0, 1000.0)
FIG2_LEFT_X = np.linspace(0.02, 1.0, 50)
FIG2_RIGHT_L = (16, 64, 256)
FIG2_RIGHT_X = np.linspace(0.02, 2.0, 50)
FIG3_PT_DB = np.linspace(-10.0, 30.0, 41)

NUMERICAL_FAILURES = (BudgetExceededError, InversionError)


@dataclass
class Table:
    """Named columns over a shared first column, plus metadata."""

    columns: list
    data: np.ndarray
    meta: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def column(self, name):
        return self.data[:, self.columns.index(name)]


def db_to_linear(db):
    return 10.0 ** (np.asarray(db, dtype=float) / 10.0)


def _guarded(fn, failures, label):
    """Evaluate ``fn()``; numerical failures become NaN and are logged."""
    try:
        return fn()
    except NUMERICAL_FAILURES as exc:
        failures.append(f"{label}: {type(exc).__name__}: {exc}")
        return math.nan


def _value_and_error(fn, failures, label):
    try:
        r = fn()
    except NUMERICAL_FAILURES as exc:
        failures.append(f"{label}: {type(exc).__name__}: {exc}")
        return math.nan, math.nan
    return r.value, r.error


def distribution_table(cfg, grid, kind="cdf", methods=("exact",), mc=None, quad=None,
                       mc_method="direct"):
    """SINR CDF or PDF on ``grid`` by each requested method."""
    grid = np.asarray(grid, dtype=float)
    failures = []
    cols = ["gamma"]
    data = [grid]
    sinr = None
    for m in methods:
        if m == "exact":
            fn = exact_cdf_result if kind == "cdf" else exact_pdf_result
            pairs = np.array([_value_and_error(lambda g=g: fn(g, cfg, quad), failures, f"exact at gamma={g!r}")
                              for g in grid]).reshape(-1, 2)
            cols += ["exact", "exact_err"]
            data += [pairs[:, 0], pairs[:, 1]]
        elif m == "monte_carlo":
            if mc is None:
                raise ValueError("monte_carlo needs an McSpec")
            if sinr is None:
                g, x = simulate_components(cfg.L, cfg.K, mc, mc_method)
                sinr = sinr_from_components(g, x, cfg)
            if kind == "cdf":
                vals = empirical_cdf(sinr, grid).values
            else:
                vals = _histogram_density(sinr, grid)
            cols.append("monte_carlo")
            data.append(vals)
        elif kind == "cdf" and m in ("beta_approx", "high_snr", "massive_limit"):
            if m == "beta_approx":
                vals = [_guarded(lambda g=g: sinr_cdf_beta_approx(g, cfg, quad), failures, f"beta_approx at {g!r}")
                        for g in grid]
            elif m == "high_snr":
                vals = [sinr_cdf_high_snr_beta(g, cfg.L, cfg.K) for g in grid]
            else:
                vals = [massive_limit_cdf(g / cfg.L, cfg.K, cfg.p_t, cfg.sigma2) for g in grid]
            cols.append(m)
            data.append(np.array(vals, dtype=float))
        else:
            raise ValueError(f"method {m!r} is not available for a {kind}")
    return Table(cols, np.column_stack(data), failures=failures)


def _histogram_density(samples, grid, width=None):
    """Density estimate at each grid point from a centred bin of relative width 1%."""
    s = np.sort(samples)
    out = np.empty(len(grid))
    for i, g in enumerate(grid):
        w = 0.01 * g if width is None else width
        lo, hi = np.searchsorted(s, [g - 0.5 * w, g + 0.5 * w])
        out[i] = (hi - lo) / (s.size * w)
    return out


def outage_table(cfg, gamma_th, p_t_values, methods=("exact", "beta_approx", "monte_carlo"),
                 mc=None, quad=None, mc_method="direct"):
    """Outage probability at threshold ``gamma_th`` across transmit powers."""
    p_t_values = np.asarray(p_t_values, dtype=float)
    failures = []
    cols, data = ["pt"], [p_t_values]
    comps = None
    for m in methods:
        if m == "exact":
            pairs = np.array([_value_and_error(lambda p=p: exact_cdf_result(gamma_th, cfg.with_power(p), quad),
                                               failures, f"exact at pt={p!r}") for p in p_t_values])
            cols += ["exact", "exact_err"]
            data += [pairs[:, 0], pairs[:, 1]]
        elif m == "beta_approx":
            cols.append("beta_approx")
            data.append(np.array([_guarded(lambda p=p: sinr_cdf_beta_approx(gamma_th, cfg.with_power(p), quad),
                                           failures, f"beta_approx at pt={p!r}") for p in p_t_values]))
        elif m == "high_snr":
            cols.append("high_snr")
            data.append(np.full(len(p_t_values), sinr_cdf_high_snr_beta(gamma_th, cfg.L, cfg.K)))
        elif m == "monte_carlo":
            if comps is None:
                comps = simulate_components(cfg.L, cfg.K, mc, mc_method)
            g, x = comps
            cols.append("monte_carlo")
            data.append(np.array([np.mean(sinr_from_components(g, x, cfg.with_power(p)) <= gamma_th)
                                  for p in p_t_values]))
        else:
            raise ValueError(f"method {m!r} is not available for outage")
    return Table(cols, np.column_stack(data), failures=failures)


def rate_table(cfg, p_t_values, methods=("monte_carlo", "robust", "jensen", "asymptotic"),
               mc=None, mc_method="direct"):
    """Ergodic rate estimates across transmit powers."""
    p_t_values = np.asarray(p_t_values, dtype=float)
    cols, data = ["pt"], [p_t_values]
    for m in methods:
        if m == "monte_carlo":
            g, x = simulate_components(cfg.L, cfg.K, mc, mc_method)
            stats = [mean_and_se(rates_from_components(g, x, cfg.with_power(p))) for p in p_t_values]
            cols += ["monte_carlo", "monte_carlo_se"]
            data += [np.array([s[0] for s in stats]), np.array([s[1] for s in stats])]
        elif m == "robust":
            cols.append("robust")
            data.append(np.array([ergodic_rate_robust(cfg.with_power(p)) for p in p_t_values]))
        elif m == "jensen":
            cols.append("jensen")
            data.append(np.array([ergodic_rate_jensen(cfg.with_power(p)) for p in p_t_values]))
        elif m == "asymptotic":
            cols.append("asymptotic")
            data.append(np.array([ergodic_rate_asymptotic(cfg.L / cfg.K, p, cfg.sigma2) for p in p_t_values]))
        else:
            raise ValueError(f"method {m!r} is not available for rates")
    return Table(cols, np.column_stack(data))


def _suffix(table, tag):
    return [c if i == 0 else f"{c}_{tag}" for i, c in enumerate(table.columns)]


def _merge(tables, tags):
    cols = list(tables[0].columns[:1])
    blocks = [tables[0].data[:, :1]]
    failures = []
    for t, tag in zip(tables, tags):
        cols += _suffix(t, tag)[1:]
        blocks.append(t.data[:, 1:])
        failures += t.failures
    return Table(cols, np.hstack(blocks), failures=failures)


def fig1(L_values=(4, 8), K=4, sigma2=1.0, gamma_th=0.8, p_t_values=None, mc=None,
         methods=("exact", "beta_approx", "monte_carlo"), quad=None, mc_method="direct"):
    """Outage versus transmit power for several antenna counts."""
    p_t_values = db_to_linear(FIG1_PT_DB) if p_t_values is None else p_t_values
    tables = [outage_table(SystemConfig(L, K, 1.0, sigma2), gamma_th, p_t_values, methods, mc, quad, mc_method)
              for L in L_values]
    return _merge(tables, [f"L{L}" for L in L_values])


def fig2_left(L=8, K=4, sigma2=1.0, p_t_values=FIG2_LEFT_PT, x=FIG2_LEFT_X, mc=None,
              methods=("exact", "limit"), quad=None, mc_method="direct"):
    """CDF of ``1/((K-1) SINR)`` for several powers, plus its high-SNR limit."""
    x = np.asarray(x, dtype=float)
    failures = []
    cols, data = ["x"], [x]
    comps = simulate_components(L, K, mc, mc_method) if "monte_carlo" in methods else None
    for p in p_t_values:
        cfg = SystemConfig(L, K, p, sigma2)
        if "exact" in methods:
            cols.append(f"exact_pt{p:g}")
            data.append(np.array([_guarded(lambda v=v: scaled_inverse_sinr_cdf(v, cfg, quad), failures,
                                           f"pt={p:g} x={v!r}") for v in x]))
        if "monte_carlo" in methods:
            g, xs = comps
            z = (cfg.noise_ratio / g + xs) / (K - 1)
            cols.append(f"monte_carlo_pt{p:g}")
            data.append(empirical_cdf(z, x).values)
    if "limit" in methods:
        cols.append("limit")
        data.append(np.array([_guarded(lambda v=v: scaled_interference_limit_cdf(v, L, K, quad), failures,
                                       f"limit x={v!r}") for v in x]))
    return Table(cols, np.column_stack(data), failures=failures)


def fig2_right(L_values=FIG2_RIGHT_L, K=4, p_t=10.0, sigma2=1.0, x=FIG2_RIGHT_X, mc=None,
               methods=("monte_carlo", "limit"), quad=None, mc_method="decomposed"):
    """CDF of ``SINR/L`` for several antenna counts, plus the massive-MIMO limit."""
    x = np.asarray(x, dtype=float)
    failures = []
    cols, data = ["x"], [x]
    for L in L_values:
        cfg = SystemConfig(L, K, p_t, sigma2)
        if "monte_carlo" in methods:
            g, xs = simulate_components(L, K, mc, mc_method)
            cols.append(f"monte_carlo_L{L}")
            data.append(empirical_cdf(sinr_from_components(g, xs, cfg) / L, x).values)
        if "exact" in methods:
            cols.append(f"exact_L{L}")
            data.append(np.array([_guarded(lambda v=v: exact_cdf_result(L * v, cfg, quad).value, failures,
                                           f"L={L} x={v!r}") for v in x]))
    if "limit" in methods:
        cols.append("limit")
        data.append(np.array([massive_limit_cdf(v, K, p_t, sigma2) for v in x]))
    return Table(cols, np.column_stack(data), failures=failures)


def fig3(L_values=(8, 12), K=6, sigma2=1.0, p_t_values=None, mc=None,
         methods=("monte_carlo", "robust", "jensen", "asymptotic"), mc_method="direct"):
    """Ergodic rate versus transmit power."""
    p_t_values = db_to_linear(FIG3_PT_DB) if p_t_values is None else p_t_values
    tables = [rate_table(SystemConfig(L, K, 1.0, sigma2), p_t_values, methods, mc, mc_method) for L in L_values]
    return _merge(tables, [f"L{L}" for L in L_values])


def sup_distance(a, b):
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))
