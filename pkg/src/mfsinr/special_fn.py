"""Special functions with integer parameters.

Everything here accepts numpy arrays for the continuous argument and returns
an array of matching shape (a Python scalar for scalar input).  Complex powers,
logarithms and square roots use the principal branch, ``arg`` in ``(-pi, pi]``.
"""
import math

import numpy as np

from .errors import AccuracyError, DomainError

MAX_TERMS = 500
EULER_GAMMA = 0.57721566490153286061

# |z| thresholds for the K0/K1 evaluation regions
BESSEL_SERIES_RADIUS = 2.0
BESSEL_ASYMPTOTIC_RADIUS = 25.0

_EPS = np.finfo(float).eps


def _scalar_out(value, scalar):
    return value.reshape(())[()] if scalar else value


def _check_int(name, value, minimum):
    if isinstance(value, bool) or int(value) != value or value < minimum:
        raise DomainError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)


def ln_gamma(x):
    """Natural log of the gamma function for ``x > 0``."""
    if not x > 0 or not math.isfinite(x):
        raise DomainError(f"ln_gamma needs a finite positive argument, got {x!r}")
    return math.lgamma(x)


def ln_beta(a, b):
    """``ln B(a, b) = ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)``."""
    return ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)


def regularized_upper_gamma_int(n, x):
    """Regularized upper incomplete gamma ``Q(n, x)`` for integer ``n >= 1``.

    Uses the finite sum ``exp(-x) * sum_{k<n} x**k / k!``, with every term
    formed in log space so neither ``exp(-x)`` nor ``x**k`` can overflow.
    """
    n = _check_int("n", n, 1)
    xa = np.asarray(x, dtype=float)
    scalar = xa.ndim == 0
    xa = np.atleast_1d(xa)
    if np.any(~np.isfinite(xa)) or np.any(xa < 0):
        raise DomainError("regularized_upper_gamma_int needs finite x >= 0")
    out = np.ones_like(xa)
    pos = xa > 0
    if np.any(pos):
        xp = xa[pos][:, None]
        k = np.arange(n, dtype=float)[None, :]
        log_terms = k * np.log(xp) - xp - _lgamma_array(k + 1.0)
        out[pos] = np.minimum(np.exp(log_terms).sum(axis=1), 1.0)
    return _scalar_out(out, scalar)


def _lgamma_array(v):
    return np.vectorize(math.lgamma, otypes=[float])(v)


def _ascending_lower_gamma(n, z):
    """``Upsilon(n, z)`` from the series ``z^n e^-z sum_m z^m / (n (n+1) ... (n+m))``."""
    total = np.ones_like(z)
    comp = np.zeros_like(z)
    term = np.ones_like(z)
    active = np.ones(z.shape, dtype=bool)
    for m in range(1, MAX_TERMS):
        term = term * z / (n + m)
        # Kahan update, frozen once converged
        y = np.where(active, term - comp, 0.0)
        t = total + y
        comp = np.where(active, (t - total) - y, comp)
        total = t
        active &= np.abs(term) > _EPS * np.abs(total) * 0.1
        if not active.any():
            break
    else:
        raise AccuracyError(f"lower incomplete gamma series did not converge for n={n}")
    with np.errstate(divide="ignore", invalid="ignore"):
        logpre = n * np.log(z) - z - math.log(n)
    out = np.exp(logpre) * total
    return np.where(z == 0, 0.0, out)


def _complement_lower_gamma(n, z):
    """``Upsilon(n, z) = (n-1)! (1 - e^-z sum_{m<n} z^m/m!)`` for ``|z|`` not small."""
    m = np.arange(n, dtype=float)
    logz = np.log(z)[..., None]
    log_terms = -z[..., None] + m * logz + math.lgamma(n) - _lgamma_array(m + 1.0)
    upper = np.exp(log_terms).sum(axis=-1)
    return math.gamma(n) - upper if n < 171 else np.exp(math.lgamma(n)) - upper


def lower_incomplete_gamma_int(n, z):
    """Lower incomplete gamma ``Upsilon(n, z)`` for integer ``n >= 1`` and complex ``z``.

    ``|z| < n`` uses the ascending series (no cancellation there); larger
    ``|z|`` uses the finite complement form.
    """
    n = _check_int("n", n, 1)
    za = np.asarray(z, dtype=complex)
    scalar = za.ndim == 0
    za = np.atleast_1d(za)
    if not np.all(np.isfinite(za)):
        raise DomainError("lower_incomplete_gamma_int needs a finite argument")
    out = np.empty_like(za)
    small = np.abs(za) < n
    if small.any():
        out[small] = _ascending_lower_gamma(n, za[small])
    if (~small).any():
        out[~small] = _complement_lower_gamma(n, za[~small])
    return _scalar_out(out, scalar)


def _k01_series(z):
    """K0, K1 from the small-argument power/log series."""
    q = z * z / 4.0
    log_half = np.log(z / 2.0)
    i0 = np.ones_like(z)
    s0 = np.zeros_like(z)
    i1 = np.ones_like(z)
    s1 = np.full_like(z, 1.0 - 2.0 * EULER_GAMMA)  # psi(1) + psi(2)
    term0 = np.ones_like(z)
    term1 = np.ones_like(z)
    harm = 0.0
    for k in range(1, MAX_TERMS):
        term0 = term0 * q / (k * k)
        term1 = term1 * q / (k * (k + 1))
        harm += 1.0 / k
        harm_next = harm + 1.0 / (k + 1)
        i0 = i0 + term0
        s0 = s0 + term0 * harm
        i1 = i1 + term1
        s1 = s1 + term1 * (harm + harm_next - 2.0 * EULER_GAMMA)
        if np.all(np.abs(term0) * max(harm, 1.0) <= _EPS * 1e-2 * np.abs(i0)):
            break
    else:
        raise AccuracyError("K0/K1 power series did not converge")
    k0 = -(log_half + EULER_GAMMA) * i0 + s0
    k1 = 1.0 / z + log_half * (z / 2.0) * i1 - (z / 4.0) * s1
    return k0, k1


def _k01_steed_scaled(z):
    """``e^z K0(z)``, ``e^z K1(z)`` by Steed's method for the second continued fraction.

    Valid for ``Re z > 0`` and ``|z|`` away from the origin.
    """
    b = 2.0 * (1.0 + z)
    d = 1.0 / b
    h = d.copy()
    delh = d.copy()
    q1 = np.zeros_like(z)
    q2 = np.ones_like(z)
    a1 = 0.25
    q = np.full_like(z, a1)
    c = np.full_like(z, a1)
    a = -a1
    s = 1.0 + q * delh
    done = np.zeros(z.shape, dtype=bool)
    for i in range(2, MAX_TERMS):
        a -= 2 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        q = q + c * qnew
        b = b + 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h = h + np.where(done, 0.0, delh)
        dels = q * delh
        s = s + np.where(done, 0.0, dels)
        done |= np.abs(dels) < _EPS * np.abs(s)
        if done.all():
            break
    else:
        raise AccuracyError("K0/K1 continued fraction did not converge")
    h = a1 * h
    k0 = np.sqrt(np.pi / (2.0 * z)) / s
    k1 = k0 * (z + 0.5 - h) / z
    return k0, k1


def _k_asymptotic_scaled(nu, z):
    """``e^z K_nu(z)`` from the large-argument Hankel expansion."""
    mu = 4.0 * nu * nu
    term = np.ones_like(z)
    total = np.ones_like(z)
    prev = np.full(z.shape, np.inf)
    active = np.ones(z.shape, dtype=bool)
    for k in range(1, MAX_TERMS):
        term = term * (mu - (2 * k - 1) ** 2) / (k * 8.0 * z)
        mag = np.abs(term)
        # stop at the smallest term of the divergent expansion
        active &= (mag < prev) & (mag > _EPS * 1e-2 * np.abs(total))
        total = total + np.where(active, term, 0.0)
        prev = mag
        if not active.any():
            break
    return np.sqrt(np.pi / (2.0 * z)) * total


def k01_scaled(z):
    """``(e^z K0(z), e^z K1(z))`` for complex ``z`` with ``Re z >= 0``, ``z != 0``."""
    z = np.asarray(z, dtype=complex)
    k0 = np.empty_like(z)
    k1 = np.empty_like(z)
    r = np.abs(z)
    small = r <= BESSEL_SERIES_RADIUS
    large = r > BESSEL_ASYMPTOTIC_RADIUS
    mid = ~(small | large)
    if small.any():
        zs = z[small]
        a, b = _k01_series(zs)
        k0[small], k1[small] = a * np.exp(zs), b * np.exp(zs)
    if mid.any():
        k0[mid], k1[mid] = _k01_steed_scaled(z[mid])
    if large.any():
        k0[large] = _k_asymptotic_scaled(0, z[large])
        k1[large] = _k_asymptotic_scaled(1, z[large])
    return k0, k1


def _bessel_i_series(nu, z):
    q = z * z / 4.0
    term = np.exp(nu * np.log(z / 2.0) - math.lgamma(nu + 1))
    total = term.copy()
    for k in range(1, MAX_TERMS):
        term = term * q / (k * (k + nu))
        total = total + term
        if np.all(np.abs(term) <= _EPS * 1e-2 * np.abs(total)):
            return total
    raise AccuracyError("modified Bessel I series did not converge")


def _k01(z):
    """Unscaled K0, K1 anywhere in ``|arg z| < pi``."""
    k0 = np.empty_like(z)
    k1 = np.empty_like(z)
    right = z.real >= 0
    r = np.abs(z)
    if right.any():
        a, b = k01_scaled(z[right])
        e = np.exp(-z[right])
        k0[right], k1[right] = a * e, b * e
    left = ~right
    series = left & (r <= BESSEL_SERIES_RADIUS)
    asym = left & (r > BESSEL_ASYMPTOTIC_RADIUS)
    cont = left & ~series & ~asym
    if series.any():
        k0[series], k1[series] = _k01_series(z[series])
    if asym.any():
        za = z[asym]
        e = np.exp(-za)
        k0[asym] = _k_asymptotic_scaled(0, za) * e
        k1[asym] = _k_asymptotic_scaled(1, za) * e
    if cont.any():
        # K_nu(y e^{+-i pi}) = (-1)^nu K_nu(y) -+ i pi I_nu(y), with y = -z
        zc = z[cont]
        y = -zc
        sign = np.where(zc.imag > 0, 1.0, -1.0)
        a, b = k01_scaled(y)
        ey = np.exp(-y)
        k0[cont] = a * ey - sign * 1j * np.pi * _bessel_i_series(0, y)
        k1[cont] = -b * ey - sign * 1j * np.pi * _bessel_i_series(1, y)
    return k0, k1


def bessel_k_int(nu, z):
    """Modified Bessel function of the second kind ``K_nu(z)``, integer ``nu >= 0``.

    K0 and K1 come from a power/log series (``|z| <= 2``), Steed's continued
    fraction (``2 < |z| <= 25``) or the Hankel asymptotic expansion
    (``|z| > 25``); higher orders follow from the upward recurrence
    ``K_{n+1} = K_{n-1} + (2n/z) K_n``, which is stable for K.

    Raises
    ------
    DomainError
        If ``z == 0`` or ``z`` lies on the branch cut ``|arg z| = pi``.
    """
    nu = _check_int("nu", nu, 0)
    za = np.asarray(z, dtype=complex)
    scalar = za.ndim == 0
    za = np.atleast_1d(za)
    if np.any(za == 0) or not np.all(np.isfinite(za)):
        raise DomainError("bessel_k_int needs finite nonzero z")
    if np.any((za.real < 0) & (za.imag == 0)):
        raise DomainError("bessel_k_int is undefined on the branch cut arg z = pi")
    k0, k1 = _k01(za)
    if nu == 0:
        return _scalar_out(k0, scalar)
    prev, cur = k0, k1
    for n in range(1, nu):
        prev, cur = cur, prev + (2.0 * n / za) * cur
    return _scalar_out(cur, scalar)


def regularized_incomplete_beta(x, a, b):
    """Regularized incomplete beta ``I_x(a, b)``.

    Lentz's continued fraction, applied directly when
    ``x < (a + 1)/(a + b + 2)`` and through ``I_x(a,b) = 1 - I_{1-x}(b,a)``
    otherwise.
    """
    if not (a > 0 and b > 0 and math.isfinite(a) and math.isfinite(b)):
        raise DomainError(f"shape parameters must be positive, got a={a!r}, b={b!r}")
    xa = np.asarray(x, dtype=float)
    if xa.ndim:
        return np.array([regularized_incomplete_beta(float(v), a, b) for v in xa.ravel()]).reshape(xa.shape)
    x = float(xa)
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x must lie in [0, 1], got {x!r}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    if x < (a + 1.0) / (a + b + 2.0):
        return _beta_front(x, a, b) * _betacf(x, a, b) / a
    return 1.0 - _beta_front(1.0 - x, b, a) * _betacf(1.0 - x, b, a) / b


def _beta_front(x, a, b):
    return math.exp(a * math.log(x) + b * math.log1p(-x) - ln_beta(a, b))


def _betacf(x, a, b):
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    d = 1.0 / (d if abs(d) > tiny else tiny)
    h = d
    for m in range(1, MAX_TERMS + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = 1.0 / (d if abs(d) > tiny else tiny)
        c = 1.0 + aa / c
        c = c if abs(c) > tiny else tiny
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = 1.0 / (d if abs(d) > tiny else tiny)
        c = 1.0 + aa / c
        c = c if abs(c) > tiny else tiny
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            return h
    raise AccuracyError(f"incomplete beta continued fraction did not converge (x={x}, a={a}, b={b})")
