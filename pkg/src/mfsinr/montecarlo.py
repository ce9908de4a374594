"""Monte Carlo oracle for the matched-filter SINR.

Samples are produced in fixed blocks of ``BLOCK`` draws.  Block ``b`` of a
run with seed ``s`` draws from its own PCG64 stream seeded by
``SeedSequence(s, spawn_key=(tag, b))``, so the output depends only on
``(seed, n_samples)``; ``shards`` only sets how many worker threads share the
blocks.

Samplers return the two ingredients of ``1/SINR = a/g + X``: the desired
channel gain ``g = ||h_k||^2`` and the interference sum ``X``.  The SINR at
any transmit power follows from them, so sweeps over ``P_t`` reuse one set of
channel draws.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import math

import numpy as np
from scipy import stats

from .charfn import SystemConfig
from .errors import DomainError
from .sinr_dist import DistributionCurve

BLOCK = 1 << 16
# complex entries generated per sub-batch in the direct sampler
_DIRECT_BUDGET = 1 << 21

_TAGS = {"direct": 1, "decomposed": 2, "interference": 3, "coupling": 4}


@dataclass(frozen=True)
class McSpec:
    """Sample count, 64-bit seed and number of worker threads."""

    n_samples: int
    seed: int = 0
    shards: int = 1

    def __post_init__(self):
        if int(self.n_samples) != self.n_samples or self.n_samples < 1:
            raise DomainError(f"n_samples must be a positive integer, got {self.n_samples!r}")
        if int(self.shards) != self.shards or self.shards < 1:
            raise DomainError(f"shards must be a positive integer, got {self.shards!r}")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise DomainError("seed must fit in 64 unsigned bits")


def block_stream(seed, tag, block):
    """Generator for one block; streams for distinct ``(tag, block)`` never overlap."""
    ss = np.random.SeedSequence(int(seed), spawn_key=(_TAGS.get(tag, tag), int(block)))
    return np.random.Generator(np.random.PCG64(ss))


def _run_blocks(mc, tag, fn):
    """Apply ``fn(stream, size)`` to every block and concatenate in block order."""
    n_blocks = -(-mc.n_samples // BLOCK)
    sizes = [BLOCK] * (n_blocks - 1) + [mc.n_samples - BLOCK * (n_blocks - 1)]

    def job(b):
        return fn(block_stream(mc.seed, tag, b), sizes[b])

    if mc.shards == 1 or n_blocks == 1:
        parts = [job(b) for b in range(n_blocks)]
    else:
        with ThreadPoolExecutor(max_workers=mc.shards) as pool:
            parts = list(pool.map(job, range(n_blocks)))
    if isinstance(parts[0], tuple):
        return tuple(np.concatenate(p) for p in zip(*parts))
    return np.concatenate(parts)


def sample_channel(cfg, stream, size=None):
    """i.i.d. standard complex Gaussian ``L x K`` channel(s), unit variance per entry."""
    shape = (cfg.L, cfg.K) if size is None else (size, cfg.L, cfg.K)
    re = stream.standard_normal(shape)
    im = stream.standard_normal(shape)
    return (re + 1j * im) * math.sqrt(0.5)


def interference_terms(H, k=0):
    """``X_i = |u_k^T h_i^*|^2 / ||h_i||^2`` for every ``i != k``, with ``u_k = h_k/||h_k||``.

    ``H`` has shape ``(..., L, K)``; the result has shape ``(..., K-1)``.
    """
    H = np.asarray(H)
    hk = H[..., :, k]
    others = np.delete(H, k, axis=-1)
    gk = np.einsum("...l,...l->...", hk.real, hk.real) + np.einsum("...l,...l->...", hk.imag, hk.imag)
    gi = (others.real ** 2 + others.imag ** 2).sum(axis=-2)
    if np.any(gk == 0) or np.any(gi == 0):
        raise DomainError("zero-norm channel column")
    # h_k^T h_i^* for every i
    cross = np.einsum("...l,...li->...i", hk, others.conj())
    return (cross.real ** 2 + cross.imag ** 2) / (gi * gk[..., None])


def sinr_direct(H, k, cfg):
    """SINR of user ``k`` (0-based) under matched-filter precoding for channel(s) ``H``.

    ``(P_t/K) ||h_k||^2 / (sigma^2 + (P_t/K) sum_{i != k} |h_k^T h_i^*|^2 / ||h_i||^2)``,
    evaluated as ``1/(a/||h_k||^2 + sum_i X_i)`` with ``a = K sigma^2 / P_t``.
    """
    H = np.asarray(H)
    if not 0 <= k < cfg.K or H.shape[-2:] != (cfg.L, cfg.K):
        raise DomainError("channel shape or user index inconsistent with cfg")
    hk = H[..., :, k]
    g = (hk.real ** 2 + hk.imag ** 2).sum(axis=-1)
    if np.any(g == 0):
        raise DomainError("zero-norm channel column")
    x = interference_terms(H, k).sum(axis=-1) if cfg.K > 1 else 0.0
    with np.errstate(divide="ignore"):
        return 1.0 / (cfg.noise_ratio / g + x)


def _direct_block(L, K):
    rows = max(1, _DIRECT_BUDGET // (L * K))

    def fn(stream, size):
        g = np.empty(size)
        x = np.zeros(size)
        for lo in range(0, size, rows):
            m = min(rows, size - lo)
            # unscaled real and imaginary parts, user-major; X_i is scale free
            re = stream.standard_normal((m, K, L))
            im = stream.standard_normal((m, K, L))
            gk = np.einsum("ml,ml->m", re[:, 0], re[:, 0]) + np.einsum("ml,ml->m", im[:, 0], im[:, 0])
            g[lo:lo + m] = 0.5 * gk
            if K > 1:
                o_re, o_im = re[:, 1:], im[:, 1:]
                k_re, k_im = re[:, 0, :, None], im[:, 0, :, None]
                # h_k^T h_i^* = sum_l (k_re + j k_im)(o_re - j o_im)
                c_re = (o_re @ k_re + o_im @ k_im)[..., 0]
                c_im = (o_re @ k_im - o_im @ k_re)[..., 0]
                gi = np.einsum("mil,mil->mi", o_re, o_re) + np.einsum("mil,mil->mi", o_im, o_im)
                x[lo:lo + m] = ((c_re * c_re + c_im * c_im) / gi).sum(axis=1) / gk
        return g, x

    return fn


def _decomposed_block(L, K):
    def fn(stream, size):
        g = stream.gamma(L, size=size)
        if K == 1:
            return g, np.zeros(size)
        u = stream.random((size, K - 1))
        # inverse CDF of Beta(1, L-1) at 1 - u: 1 - (1-u)^(1/(L-1)) without cancellation
        x = -np.expm1(np.log1p(-u) / (L - 1))
        return g, x.sum(axis=1)

    return fn


def simulate_components(L, K, mc, method="direct"):
    """Draw ``(g, X)`` for ``mc.n_samples`` channels; ``1/SINR = a/g + X``.

    ``method="direct"`` builds full Rayleigh channel matrices;
    ``"decomposed"`` samples ``g ~ Gamma(L, 1)`` and ``X_i ~ Beta(1, L-1)``
    independently.
    """
    if method == "direct":
        fn = _direct_block(L, K)
    elif method == "decomposed":
        fn = _decomposed_block(L, K)
    else:
        raise DomainError(f"unknown sampling method {method!r}")
    return _run_blocks(mc, method, fn)


def sinr_from_components(g, x, cfg):
    """SINR samples ``1/(a/g + X)`` at the transmit power of ``cfg``."""
    denom = cfg.noise_ratio / g + x
    with np.errstate(divide="ignore"):
        return 1.0 / denom


def sample_decomposed(cfg, stream, size=None):
    """SINR via ``1/(Y + sum X_i)`` with independent ``Y`` and ``X_i``.

    ``Y = K sigma^2 / (P_t G)``, ``G ~ Gamma(L, 1)``; ``X_i = 1 - U^{1/(L-1)}``.
    """
    n = 1 if size is None else size
    g, x = _decomposed_block(cfg.L, cfg.K)(stream, n)
    s = sinr_from_components(g, x, cfg)
    return float(s[0]) if size is None else s


def simulate_sinr(cfg, mc, method="direct"):
    """SINR samples for ``cfg``."""
    g, x = simulate_components(cfg.L, cfg.K, mc, method)
    return sinr_from_components(g, x, cfg)


def raw_interference_samples(L, mc):
    """``X_i`` computed from raw two-user channels (one interferer per draw)."""
    def fn(stream, size):
        H = sample_channel(SystemConfig(L, 2, 1.0), stream, size)
        return interference_terms(H, 0)[:, 0]

    return _run_blocks(mc, "interference", fn)


def coupling_probability(L, eps, mc):
    """Empirical ``Pr{|E - L X_i| <= eps}`` with ``E ~ Exp(1)`` drawn independently of ``X_i``."""
    def fn(stream, size):
        u = stream.random(size)
        x = -np.expm1(np.log1p(-u) / (L - 1))
        e = stream.standard_exponential(size)
        return (np.abs(e - L * x) <= eps).astype(float)

    hits = _run_blocks(mc, "coupling", fn)
    return float(hits.mean())


def mean_and_se(values):
    """Sample mean and its standard error, with compensated summation."""
    v = np.asarray(values, dtype=float).ravel()
    n = v.size
    if n < 2:
        raise DomainError("need at least two samples")
    mean = math.fsum(v) / n
    var = math.fsum((v - mean) ** 2) / (n - 1)
    return mean, math.sqrt(var / n)


def empirical_cdf(samples, grid, cfg=None):
    """Right-continuous empirical CDF of ``samples`` evaluated on ``grid``."""
    s = np.sort(np.asarray(samples, dtype=float).ravel())
    if s.size == 0:
        raise DomainError("empirical_cdf needs at least one sample")
    grid = np.asarray(grid, dtype=float)
    values = np.searchsorted(s, grid, side="right") / s.size
    return DistributionCurve(grid, values, "cdf", "monte_carlo", cfg)


def ks_statistic(samples, cdf):
    """One-sample Kolmogorov-Smirnov distance ``sup |F_n - F|``; ``cdf`` is vectorised."""
    s = np.sort(np.asarray(samples, dtype=float).ravel())
    n = s.size
    if n == 0:
        raise DomainError("ks_statistic needs at least one sample")
    f = np.asarray(cdf(s), dtype=float)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))


def ks_pvalue(d, n):
    """Two-sided p-value of a one-sample KS distance (exact distribution)."""
    return float(stats.kstwo.sf(d, n))


def two_sample_ks(a, b):
    """Two-sample KS distance ``sup |F_a - F_b|`` over the pooled sample."""
    a = np.sort(np.asarray(a, dtype=float).ravel())
    b = np.sort(np.asarray(b, dtype=float).ravel())
    if a.size == 0 or b.size == 0:
        raise DomainError("two_sample_ks needs non-empty samples")
    pooled = np.concatenate([a, b])
    fa = np.searchsorted(a, pooled, side="right") / a.size
    fb = np.searchsorted(b, pooled, side="right") / b.size
    return float(np.max(np.abs(fa - fb)))


def two_sample_pvalue(d, n, m):
    """Asymptotic two-sided p-value of a two-sample KS distance."""
    en = math.sqrt(n * m / (n + m))
    return float(stats.kstwobign.sf(d * en))


def dkw_halfwidth(n, alpha=0.01):
    """Half-width ``sqrt(ln(2/alpha) / (2n))`` of the DKW confidence band."""
    if n < 1 or not 0 < alpha < 1:
        raise DomainError("need n >= 1 and 0 < alpha < 1")
    return math.sqrt(math.log(2.0 / alpha) / (2.0 * n))
