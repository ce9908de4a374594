"""Characteristic-function inversion over the half line.

``gil_pelaez_cdf`` and ``fourier_pdf`` integrate ``Im{e^{-jtz} CF(t)}/t`` and
``Re{e^{-jtz} CF(t)}`` over ``[t_min, inf)`` panel by panel.  Panels tile the
half-periods ``pi/z`` of the oscillating kernel, each integrated with a
21-point Gauss-Kronrod rule (bisected where the rule's error estimate is too
large).  Integration stops either when the integrand envelope has been
negligible for several consecutive panels or, for slowly decaying CFs, when
Wynn's epsilon algorithm applied to the half-period partial sums has settled.
"""
from dataclasses import dataclass
import math
from typing import Callable, NamedTuple, Optional

import numpy as np

from .errors import BudgetExceededError, DomainError, InversionError

_XGK = np.array([
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0,
])
_WGK = np.array([
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
_WG = np.array([
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])

# full 21-point rule on [-1, 1]; Gauss nodes are the odd-indexed Kronrod nodes
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KW = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GW = np.zeros(21)
_GW[1:10:2] = _WG
_GW[11:20:2] = _WG[::-1]

_RULES = {"gk21": (_NODES, _KW, _GW)}

_TRUNCATION_RUN = 5
_WYNN_WINDOW = 16
_MAX_BISECT = 12
_EPS = np.finfo(float).eps
_ROUNDOFF = 200.0 * _EPS


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and budget for one inversion."""

    abs_tol: float = 1e-9
    rel_tol: float = 1e-7
    max_panels: int = 200_000
    panel_rule: str = "gk21"
    truncation_tol: float = 1e-12
    t_min: float = 1e-10
    max_width: float = 1.0

    def __post_init__(self):
        for name in ("abs_tol", "rel_tol", "truncation_tol", "t_min", "max_width"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")
        if self.max_panels < 1:
            raise DomainError("max_panels must be at least 1")
        if self.panel_rule not in _RULES:
            raise DomainError(f"unknown panel rule {self.panel_rule!r}")


@dataclass(frozen=True)
class CfHandle:
    """A characteristic function plus optional hints for the integrator.

    ``bandwidth`` bounds the frequencies the CF itself oscillates at (for a
    variable supported on ``[0, b]`` it is ``b``); panels are kept narrower
    than half of that period.  ``mean`` is informational.
    """

    fn: Callable
    bandwidth: float = 0.0
    mean: Optional[float] = None

    def __call__(self, t):
        return self.fn(t)


class InversionResult(NamedTuple):
    value: float
    error: float
    panels: int
    t_max: float
    extrapolated: bool
    clamped: bool


def _as_handle(cf):
    return cf if isinstance(cf, CfHandle) else CfHandle(cf)


def _panel_rule(integrand, a, h, rule):
    """Kronrod estimate and QUADPACK-style error for panels ``[a, a + h]``."""
    nodes, kw, gw = rule
    half = 0.5 * h
    t = (a + half)[:, None] + half[:, None] * nodes[None, :]
    f, env = integrand(t)
    kron = (f @ kw) * half
    gauss = (f @ gw) * half
    mean = kron / (2.0 * half)
    resasc = (np.abs(f - mean[:, None]) @ kw) * half
    resabs = (np.abs(f) @ kw) * half
    diff = np.abs(kron - gauss)
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = resasc * np.minimum(1.0, (200.0 * diff / resasc) ** 1.5)
    raw = np.where(resasc > 0, scaled, diff)
    err = np.maximum(raw, 50.0 * _EPS * resabs)
    return kron, err, env.max(axis=1) * h, resabs, raw


def _refine(integrand, a, h, rule, tol):
    """Integrate panels, bisecting any whose error exceeds ``tol`` per unit width.

    Errors at the roundoff floor of the panel (a few hundred ulps of ``int |f|``)
    are accepted, since bisection cannot improve on them.
    """
    val, err, env, resabs, raw = _panel_rule(integrand, a, h, rule)
    used = len(a)
    threshold = np.maximum(tol * h, _ROUNDOFF * resabs)
    # how far inside its threshold the worst panel is, roundoff floor excluded
    slack = float(np.max(raw / threshold))
    fail = np.nonzero(err > threshold)[0]
    owner, sub_a, sub_h = fail, a[fail], h[fail]
    piece_v, piece_e = val[fail], err[fail]
    for _ in range(_MAX_BISECT):
        if not owner.size:
            break
        # each failing piece is swapped for its two halves
        np.subtract.at(val, owner, piece_v)
        np.subtract.at(err, owner, piece_e)
        sub_h = 0.5 * sub_h
        owner = np.concatenate([owner, owner])
        sub_a = np.concatenate([sub_a, sub_a + sub_h])
        sub_h = np.concatenate([sub_h, sub_h])
        piece_v, piece_e, _, piece_abs, _ = _panel_rule(integrand, sub_a, sub_h, rule)
        used += len(sub_a)
        np.add.at(val, owner, piece_v)
        np.add.at(err, owner, piece_e)
        bad = piece_e > np.maximum(tol * sub_h, _ROUNDOFF * piece_abs)
        owner, sub_a, sub_h = owner[bad], sub_a[bad], sub_h[bad]
        piece_v, piece_e = piece_v[bad], piece_e[bad]
    return val, err, env, used, slack


def wynn_epsilon(seq):
    """Wynn's epsilon extrapolation of a sequence of partial sums.

    Returns the estimate from the deepest even column of the epsilon table.
    """
    prev = [0.0] * (len(seq) + 1)
    cur = [float(s) for s in seq]
    best = cur[-1]
    for k in range(1, len(seq)):
        nxt = []
        for i in range(len(cur) - 1):
            d = cur[i + 1] - cur[i]
            if d == 0.0:
                return cur[i + 1] if k % 2 == 1 else best
            nxt.append(prev[i + 1] + 1.0 / d)
        prev, cur = cur, nxt
        if k % 2 == 0:
            best = cur[-1]
        if len(cur) < 2:
            break
    return best


def _extrapolate(hp_sums):
    window = hp_sums[-_WYNN_WINDOW:]
    est = wynn_epsilon(window)
    e1 = wynn_epsilon(window[:-1])
    e2 = wynn_epsilon(window[:-2])
    return est, abs(est - e1) + abs(est - e2)


def _first_run_end(small, run):
    """Index where ``_TRUNCATION_RUN`` consecutive small panels complete, and the trailing run."""
    if not small.any():
        return None, 0
    # run length ending at each index, seeded with the run carried in
    idx = np.arange(len(small))
    last_big = np.maximum.accumulate(np.where(small, -1, idx))
    lengths = np.where(last_big < 0, idx + 1 + run, idx - last_big)
    lengths = np.where(small, lengths, 0)
    hit = np.nonzero(lengths >= _TRUNCATION_RUN)[0]
    return (int(hit[0]) if hit.size else None), int(lengths[-1])


def _oscillatory_integral(integrand, z, bandwidth, quad):
    """Integrate ``integrand`` over ``[t_min, inf)``.

    Returns ``(value, error, panels, t_end, extrapolated)``.  Panel widths are
    ``P / 2**level`` with ``P = pi / z``; a chunk never straddles a half-period
    boundary unless it covers whole half-periods, so coarsening keeps panels
    aligned.
    """
    rule = _RULES[quad.panel_rule]
    period = math.pi / z
    cap = quad.max_width
    if bandwidth > 0:
        cap = min(cap, math.pi / bandwidth)
    level = min(40, max(0, math.ceil(math.log2(period / cap) - 1e-12))) if period > cap else 0
    panel_tol = 1e-2 * quad.abs_tol

    t0 = quad.t_min
    # [0, t_min]: the integrand is smooth there, a midpoint rule suffices
    parts = [float(integrand(np.array([[0.5 * t0]]))[0][0, 0]) * t0]
    total = parts[0]
    err_total = 0.0
    panels = 0
    run = 0
    hp_done = 0
    offset = 0
    hp_sums = []
    last_est = None
    target = 256
    while True:
        per_hp = 2 ** level
        h = period / per_hp
        if per_hp <= target and offset == 0:
            n = (target // per_hp) * per_hp
        else:
            # end on a multiple of ``target`` so later coarsening stays aligned
            n = min(target - offset % target, per_hp - offset)
        # never schedule more than one panel past the budget
        n = min(n, quad.max_panels - panels + 1)
        start = t0 + (hp_done + offset / per_hp) * period
        a = start + h * np.arange(n)
        val, err, env, used, slack = _refine(integrand, a, np.full(n, h), rule, panel_tol)
        panels += used
        if panels > quad.max_panels:
            raise BudgetExceededError(
                f"inversion used {panels} panels (limit {quad.max_panels}) up to "
                f"t={a[-1] + h:.4g} without converging")

        stop, run = _first_run_end(env < quad.truncation_tol, run)
        if stop is not None:
            err_total += float(err[: stop + 1].sum())
            value = math.fsum(parts + val[: stop + 1].tolist())
            return value, err_total, panels, float(a[stop] + h), False

        running = total + np.cumsum(val)
        ends = np.nonzero((offset + np.arange(1, n + 1)) % per_hp == 0)[0]
        hp_sums.extend(running[ends].tolist())
        parts.extend(val.tolist())
        total = math.fsum(parts)
        err_total += float(err.sum())
        hp_done += (offset + n) // per_hp
        offset = (offset + n) % per_hp

        if len(hp_sums) >= 8 and ends.size:
            est, est_err = _extrapolate(hp_sums)
            tol = 0.1 * max(quad.abs_tol, quad.rel_tol * abs(est))
            if est_err < tol and last_est is not None and abs(est - last_est) < tol:
                return est, err_total + est_err, panels, t0 + hp_done * period, True
            last_est = est

        # width adaptation: refine after bisections, coarsen when comfortably accurate
        if used > n:
            level = min(level + 1, 60)
            offset *= 2
        elif level > 0 and slack < 1e-3:
            drop = min(level, max(1, int(-math.log10(max(slack, 1e-300)) // 2)), 8)
            while drop and offset % (2 ** drop):
                drop -= 1
            level -= drop
            offset //= 2 ** drop
        target = min(target * 2, 4096)


def gil_pelaez_cdf(z, cf, quad=None):
    """CDF at ``z > 0`` from a characteristic function.

    ``F(z) = 1/2 - (1/pi) int_0^inf Im{e^{-jtz} CF(t)}/t dt``.  The value is
    clipped to ``[0, 1]`` when it overshoots by no more than
    ``max(abs_tol, estimated error)``; larger excursions raise.
    """
    quad = quad or QuadratureSpec()
    if not z > 0:
        raise DomainError(f"gil_pelaez_cdf needs z > 0, got {z!r}")
    handle = _as_handle(cf)

    def integrand(t):
        c = handle(t.ravel()).reshape(t.shape)
        env = np.abs(c) / t
        return np.imag(np.exp(-1j * t * z) * c) / t, env

    integral, err, panels, t_end, extrap = _oscillatory_integral(integrand, z, handle.bandwidth, quad)
    raw = 0.5 - integral / math.pi
    err = err / math.pi
    return _clamp(raw, err, quad, upper=1.0, panels=panels, t_end=t_end, extrap=extrap)


def fourier_pdf(z, cf, quad=None):
    """Density at ``z > 0``: ``(1/pi) int_0^inf Re{e^{-jtz} CF(t)} dt``."""
    quad = quad or QuadratureSpec()
    if not z > 0:
        raise DomainError(f"fourier_pdf needs z > 0, got {z!r}")
    handle = _as_handle(cf)

    def integrand(t):
        c = handle(t.ravel()).reshape(t.shape)
        return np.real(np.exp(-1j * t * z) * c), np.abs(c)

    integral, err, panels, t_end, extrap = _oscillatory_integral(integrand, z, handle.bandwidth, quad)
    raw = integral / math.pi
    err = err / math.pi
    return _clamp(raw, err, quad, upper=math.inf, panels=panels, t_end=t_end, extrap=extrap)


def _clamp(raw, err, quad, upper, panels, t_end, extrap):
    if not math.isfinite(raw):
        raise InversionError(f"inversion produced a non-finite value ({raw!r})")
    slack = max(quad.abs_tol, err)
    if raw < -slack or raw > upper + slack:
        raise InversionError(f"inverted value {raw!r} lies outside [0, {upper}] beyond tolerance {slack:.3g}")
    value = min(max(raw, 0.0), upper)
    return InversionResult(value, err, panels, t_end, extrap, value != raw)
