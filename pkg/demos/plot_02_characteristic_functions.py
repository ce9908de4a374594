"""
Characteristic function of the SINR denominator
===============================================

The reciprocal SINR splits into an inverse-gamma noise term and K-1
independent Beta(1, L-1) interference terms, so its characteristic function
is a product.  We tabulate the factors and verify two sanity properties:
the modulus stays below one and the slope at the origin gives the mean.
"""
import numpy as np

from mfsinr.charfn import SystemConfig, cf_denominator, cf_interference_sum, cf_noise_term

cfg = SystemConfig(L=8, K=4, p_t=10.0)
t = np.array([0.0, 0.5, 2.0, 10.0, 50.0, 250.0])

###############################################################################
# The noise factor decays quickly, the interference factor only like t^(-(K-1))
print(f"{'t':>8} {'|noise|':>12} {'|interference|':>15} {'|Z|':>12}")
for ti, a, b, c in zip(t, cf_noise_term(t, cfg), cf_interference_sum(t, cfg), cf_denominator(t, cfg)):
    print(f"{ti:8.1f} {abs(a):12.3e} {abs(b):15.3e} {abs(c):12.3e}")

###############################################################################
# E[Z] = a/(L-1) + (K-1)/L, from the imaginary slope at t = 0
h = 1e-6
slope = (cf_denominator(h, cfg) - cf_denominator(-h, cfg)).imag / (2 * h)
print(f"\nslope {slope:.8f}  vs  mean {cfg.noise_ratio / (cfg.L - 1) + (cfg.K - 1) / cfg.L:.8f}")

###############################################################################
# Conjugate symmetry CF(-t) = conj(CF(t)) is built in
print("Hermitian:", np.allclose(cf_denominator(-t, cfg), np.conj(cf_denominator(t, cfg))))
