"""
Ergodic rate estimators
=======================

``E[ln(1 + SINR)]`` by simulation, by the Jensen lower bound
``ln(1 + 1/E[Z])``, by a second-order expansion around ``E[Z]`` that uses
the variance of ``Z``, and by the large-system limit that keeps ``c = L/K``
fixed.
"""
import numpy as np

from mfsinr import experiments as ex
from mfsinr.montecarlo import McSpec

###############################################################################
# L = 8, K = 6 over -10..30 dB; the same channel draws serve every power
powers_db = np.linspace(-10, 30, 9)
t = ex.fig3((8,), K=6, p_t_values=ex.db_to_linear(powers_db), mc=McSpec(500_000, seed=4))
print(f"{'P_t dB':>7} {'simulated':>10} {'+-':>8} {'robust':>8} {'jensen':>8} {'asympt':>8}")
for db, row in zip(powers_db, t.data):
    print(f"{db:7.1f} {row[1]:10.4f} {row[2]:8.1e} {row[3]:8.4f} {row[4]:8.4f} {row[5]:8.4f}")

###############################################################################
# At low power the Jensen gap tends to 1/L in relative terms, which is why
# it sits visibly below the simulation there; the second-order estimate
# stays within a few thousandths of a nat once the power reaches 10 dB.
mc, robust, jensen = t.column("monte_carlo_L8"), t.column("robust_L8"), t.column("jensen_L8")
hi = powers_db >= 10
print(f"\nmax |robust - simulated| above 10 dB: {np.max(np.abs(robust - mc)[hi]):.4f}")
print(f"max |jensen - simulated| above 10 dB: {np.max(np.abs(jensen - mc)[hi]):.4f}")
