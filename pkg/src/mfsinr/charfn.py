"""Characteristic functions of the SINR denominator ``Z = Y + sum_i X_i``.

``1/SINR_k = Z`` with ``Y ~ Inv-Gamma(L, K sigma^2 / P_t)`` (scaled noise) and
``K - 1`` independent interference terms ``X_i ~ Beta(1, L - 1)``.

Every CF is evaluated as a product of factors bounded by one in magnitude;
the grouped closed form, with its large powers of ``jt``, overflows double
precision long before the product does.
"""
from dataclasses import dataclass
import math

import numpy as np

from .errors import DomainError
from .special_fn import MAX_TERMS, k01_scaled, bessel_k_int

# Re(w) beyond which the noise CF is below exp(-0.29 * 700) and is returned as 0
_NOISE_CUTOFF = 700.0


@dataclass(frozen=True)
class SystemConfig:
    """Antenna count ``L``, user count ``K``, transmit power and noise power.

    ``p_t = math.inf`` is accepted and means the noise-free limit.
    """

    L: int
    K: int
    p_t: float
    sigma2: float = 1.0

    def __post_init__(self):
        if int(self.L) != self.L or self.L < 2:
            raise DomainError(f"L must be an integer >= 2, got {self.L!r}")
        if int(self.K) != self.K or self.K < 1:
            raise DomainError(f"K must be an integer >= 1, got {self.K!r}")
        if not self.p_t > 0:
            raise DomainError(f"p_t must be positive, got {self.p_t!r}")
        if not (self.sigma2 > 0 and math.isfinite(self.sigma2)):
            raise DomainError(f"sigma2 must be finite and positive, got {self.sigma2!r}")
        object.__setattr__(self, "L", int(self.L))
        object.__setattr__(self, "K", int(self.K))
        object.__setattr__(self, "p_t", float(self.p_t))
        object.__setattr__(self, "sigma2", float(self.sigma2))

    @property
    def noise_ratio(self):
        """``a = K sigma^2 / P_t``, the scale of the inverse-gamma noise term."""
        return self.K * self.sigma2 / self.p_t

    def with_power(self, p_t):
        return SystemConfig(self.L, self.K, p_t, self.sigma2)


def _hermitian(fn, t):
    """Evaluate ``fn`` on ``|t|`` and conjugate where ``t < 0``; ``t = 0`` gives 1."""
    ta = np.asarray(t, dtype=float)
    scalar = ta.ndim == 0
    ta = np.atleast_1d(ta)
    out = np.ones(ta.shape, dtype=complex)
    nz = ta != 0
    if nz.any():
        vals = fn(np.abs(ta[nz]))
        out[nz] = np.where(ta[nz] < 0, np.conj(vals), vals)
    return out.reshape(()).item() if scalar else out


def _interference_single_pos(t, L):
    out = np.empty(t.shape, dtype=complex)
    n = L - 1
    small = t < n
    if small.any():
        # moment series: sum_k (jt)^k E[X^k]/k!, E[X^k]/k! = (L-1)!/(L-1+k)!
        jt = 1j * t[small]
        term = np.ones_like(jt)
        total = np.ones_like(jt)
        for k in range(1, MAX_TERMS):
            term = term * jt / (n + k)
            total = total + term
            if np.all(np.abs(term) < 1e-17):
                break
        out[small] = total
    big = ~small
    if big.any():
        tb = t[big]
        u = 1.0 / (1j * tb)
        # (L-1)! (jt)^(1-L) e^(jt) - (L-1)/(jt) * sum_k (L-2)!/(L-2-k)! (jt)^-k
        poly = np.ones_like(u)
        for k in range(1, L - 1):
            poly = 1.0 + (k * u) * poly
        head = np.exp(math.lgamma(L) + 1j * tb + (1 - L) * np.log(1j * tb))
        out[big] = head - n * u * poly
    return out


def cf_interference_single(t, L):
    """CF of one interference term ``X_i ~ Beta(1, L - 1)``.

    Equal to ``(L-1) e^{jt} (jt)^{1-L} Upsilon(L-1, jt)``.  For ``|t| < L - 1``
    the moment series is summed instead; above that the closed form is
    expanded so no intermediate exceeds order one.
    """
    if int(L) != L or L < 2:
        raise DomainError(f"L must be an integer >= 2, got {L!r}")
    return _hermitian(lambda s: _interference_single_pos(s, int(L)), t)


def cf_interference_sum(t, cfg):
    """CF of ``X = sum_{i != k} X_i``: the single-term CF to the power ``K - 1``."""
    single = cf_interference_single(t, cfg.L)
    return single ** (cfg.K - 1)


def _noise_pos(t, L, a):
    w = np.sqrt(-4j * a * t)
    out = np.zeros(t.shape, dtype=complex)
    keep = w.real < _NOISE_CUTOFF
    if not keep.any():
        return out
    w = w[keep]
    k0e, k1e = k01_scaled(w)
    # v_n = 2 (w/2)^n K_n(w) / Gamma(n) is the Inv-Gamma(n, a) CF; it obeys
    # v_{n+1} = v_n + w^2/(4 n (n-1)) v_{n-1}, run here as a ratio recurrence.
    ratio = 1.0 + 0.5 * w * k0e / k1e
    prod = ratio.copy()
    quarter_w2 = 0.25 * w * w
    for n in range(2, L):
        ratio = 1.0 + quarter_w2 / (n * (n - 1)) / ratio
        prod = prod * ratio
    v1 = w * k1e * np.exp(-w)
    out[keep] = v1 * prod
    return out


def _noise_flipped(t, L, a):
    """Noise CF with the non-principal square root; a deliberate fault for negative controls."""
    w = -np.sqrt(-4j * a * t)
    with np.errstate(all="ignore"):
        power = np.exp(0.5 * L * np.log(-1j * a * t))
        return 2.0 / math.gamma(L) * power * bessel_k_int(L, w)


def cf_noise_term(t, cfg, branch="principal"):
    """CF of ``Y ~ Inv-Gamma(L, K sigma^2 / P_t)``.

    Equal to ``(2/Gamma(L)) (-j a t)^{L/2} K_L(sqrt(-4 j a t))`` with
    ``a = K sigma^2 / P_t``.  ``branch="flipped"`` takes the other square
    root and is only meant for checking that validation detects it.
    """
    a = cfg.noise_ratio
    if a == 0:
        return _hermitian(lambda s: np.ones(s.shape, dtype=complex), t)
    if branch == "principal":
        return _hermitian(lambda s: _noise_pos(s, cfg.L, a), t)
    if branch == "flipped":
        return _hermitian(lambda s: _noise_flipped(s, cfg.L, a), t)
    raise ValueError(f"unknown branch {branch!r}")


def cf_denominator(t, cfg, branch="principal"):
    """CF of ``Z = Y + X``, the product of the noise and interference CFs."""
    return cf_noise_term(t, cfg, branch) * cf_interference_sum(t, cfg)


def cf_scaled_interference(t, cfg):
    """CF of ``X' = X / (K - 1)``, the limiting law of ``1/((K-1) SINR)``."""
    if cfg.K < 2:
        raise DomainError("X' needs at least one interferer (K >= 2)")
    return cf_interference_sum(np.asarray(t, dtype=float) / (cfg.K - 1), cfg)
