"""
High-SNR and massive-MIMO limits
================================

Two limits of the SINR law.  As the transmit power grows,
``1/((K-1) SINR)`` converges to the scaled interference sum, whose CDF is
again obtained by CF inversion.  As the antenna count grows with K fixed,
``SINR/L`` converges to ``1/(a + G)`` with ``G ~ Gamma(K-1, 1)``.
"""
import numpy as np

from mfsinr import experiments as ex
from mfsinr.charfn import SystemConfig
from mfsinr.montecarlo import McSpec, coupling_probability, empirical_cdf, simulate_sinr
from mfsinr.sinr_dist import (massive_limit_cdf, nonconvergence_probability_bound, scaled_interference_limit_cdf,
                              scaled_inverse_sinr_cdf)

###############################################################################
# High SNR: the sup distance shrinks by a factor ~10 per decade of power
x = np.linspace(0.02, 1.0, 40)
limit = np.array([scaled_interference_limit_cdf(v, 8, 4) for v in x])
for p_t in (1.0, 10.0, 100.0, 1e3, 1e4):
    cfg = SystemConfig(8, 4, p_t)
    gap = ex.sup_distance([scaled_inverse_sinr_cdf(v, cfg) for v in x], limit)
    print(f"P_t={p_t:8g}: sup |F - F_limit| = {gap:.2e}")

###############################################################################
# Massive MIMO: simulated SINR/L against the limit law (K = 4, P_t = 10)
xs = np.linspace(0.01, 2.0, 100)
lim = np.array([massive_limit_cdf(v, 4, 10.0) for v in xs])
for L in (16, 64, 256):
    s = simulate_sinr(SystemConfig(L, 4, 10.0), McSpec(200_000, seed=2), "decomposed") / L
    print(f"L={L:4d}: sup |F_n - F_limit| = {ex.sup_distance(empirical_cdf(s, xs).values, lim):.3e}")

###############################################################################
# L X_i is close to Exp(1) in law, but it is not close to any particular
# Exp(1) variable: the probability of landing within eps of an independent
# copy stays small, and is bounded by e^eps - e^-eps
print(f"\ncoupling probability {coupling_probability(10_000, 0.1, McSpec(200_000, seed=3)):.4f}"
      f" <= bound {nonconvergence_probability_bound(0.1):.6f}")
