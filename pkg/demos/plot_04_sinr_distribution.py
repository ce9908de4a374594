"""
Exact SINR distribution and the Beta approximation
==================================================

Outage probability of one user under matched-filter precoding, computed by
CF inversion, by the Beta moment-matching approximation and by simulating
Rayleigh channels.  The sweep mirrors an outage-versus-power plot for two
antenna counts.
"""
import numpy as np

from mfsinr import experiments as ex
from mfsinr.charfn import SystemConfig
from mfsinr.montecarlo import McSpec
from mfsinr.sinr_dist import beta_approx_params, sinr_cdf_exact, sinr_pdf_exact

###############################################################################
# One operating point
cfg = SystemConfig(L=8, K=4, p_t=10.0)
print(f"outage at 0.8: {sinr_cdf_exact(0.8, cfg):.6f}, density {sinr_pdf_exact(0.8, cfg):.6f}")
p = beta_approx_params(8, 4)
print(f"Beta surrogate shapes: alpha={p.alpha}, beta={p.beta}")

###############################################################################
# Outage versus transmit power for L = 4 and 8 (K = 4, threshold 0.8)
powers_db = np.linspace(-10, 30, 9)
table = ex.fig1((4, 8), K=4, gamma_th=0.8, p_t_values=ex.db_to_linear(powers_db), mc=McSpec(200_000, seed=1))
print(f"\n{'P_t dB':>7} " + " ".join(f"{c:>16}" for c in table.columns[1:] if not c.startswith("exact_err")))
keep = [i for i, c in enumerate(table.columns) if i and not c.startswith("exact_err")]
for db, row in zip(powers_db, table.data):
    print(f"{db:7.1f} " + " ".join(f"{row[i]:16.3e}" for i in keep))

###############################################################################
# Optional figure
try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None
if plt is not None:
    fig, ax = plt.subplots()
    for L in (4, 8):
        ax.semilogy(powers_db, table.column(f"exact_L{L}"), "-", label=f"exact L={L}")
        ax.semilogy(powers_db, table.column(f"beta_approx_L{L}"), "--", label=f"Beta L={L}")
        ax.semilogy(powers_db, table.column(f"monte_carlo_L{L}"), "o", label=f"simulated L={L}")
    ax.set_xlabel("transmit power [dB]")
    ax.set_ylabel("outage probability")
    ax.legend()
    fig.savefig("outage_vs_power.png", dpi=120)
    print("\nwrote outage_vs_power.png")
