"""
Special functions with integer order
====================================

The SINR characteristic functions are built from three special functions:
the lower incomplete gamma function with complex argument, the modified
Bessel function of the second kind with complex argument, and the finite
sum form of the regularized upper incomplete gamma function.  Here we check
them against identities and an integral representation.
"""
import math

import numpy as np

from mfsinr.selftest import bessel_k_integral
from mfsinr.special_fn import bessel_k_int, lower_incomplete_gamma_int, regularized_upper_gamma_int

###############################################################################
# Incomplete gamma: lower and upper parts add up to Gamma(n)
for n in (1, 3, 8):
    x = 2.5
    lower = lower_incomplete_gamma_int(n, x).real / math.factorial(n - 1)
    print(f"n={n}: P(n, x) + Q(n, x) - 1 = {lower + regularized_upper_gamma_int(n, x) - 1:+.1e}")

###############################################################################
# The recurrence Upsilon(n+1, z) = n Upsilon(n, z) - z^n e^{-z} holds for complex z
z = 3.0 - 4.0j
n = 5
lhs = lower_incomplete_gamma_int(n + 1, z)
rhs = n * lower_incomplete_gamma_int(n, z) - z ** n * np.exp(-z)
print(f"recurrence residual at z={z}: {abs(lhs - rhs):.1e}")

###############################################################################
# K_0 and K_1 against the integral int_0^inf exp(-z cosh t) cosh(nu t) dt
for nu in (0, 1):
    for z in (1.0, 1.0 + 1.0j, 30.0 - 10.0j):
        got, ref = bessel_k_int(nu, z), bessel_k_integral(nu, z)
        print(f"K_{nu}({z}) = {complex(got):.12g}   relative gap {abs(got - ref) / abs(ref):.1e}")

###############################################################################
# Higher orders come from the upward recurrence, which is stable for K
z = 0.7 + 2.0j
print("K_n(0.7+2j), n = 0..6:", np.round([complex(bessel_k_int(k, z)) for k in range(7)], 6))
