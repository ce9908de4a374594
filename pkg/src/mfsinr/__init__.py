"""Exact and approximate SINR statistics for matched-filter precoding over Rayleigh fading."""
from .charfn import SystemConfig, cf_denominator, cf_interference_single, cf_interference_sum, cf_noise_term
from .errors import AccuracyError, BudgetExceededError, DomainError, InversionError
from .inversion import CfHandle, QuadratureSpec, fourier_pdf, gil_pelaez_cdf
from .montecarlo import McSpec
from .rate import (denominator_moments, ergodic_rate_asymptotic, ergodic_rate_jensen,
                   ergodic_rate_mc, ergodic_rate_robust)
from .sinr_dist import (beta_approx_params, massive_limit_cdf, nonconvergence_probability_bound,
                        outage_probability, scaled_inverse_sinr_cdf, sinr_cdf_beta_approx,
                        sinr_cdf_exact, sinr_cdf_high_snr_beta, sinr_pdf_exact)

__version__ = "0.1.0"
