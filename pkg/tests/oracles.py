"""Independent referees for the test suite.

These deliberately avoid the library's own summation and continuation code:
a naive arbitrary-precision partial summation (small arguments only), direct
quadrature of integral representations, and the Pfaff-transformed series.
They live in the test tree on purpose; nothing in the package imports them.
"""
import math

import mpmath
import numpy as np
from scipy.integrate import quad


def mp_pfq(numerator, denominator, z, dps=220, max_terms=20000):
    """Naive high-precision partial summation of a pFq series."""
    with mpmath.workdps(dps):
        nums = [mpmath.mpf(a) for a in numerator]
        dens = [mpmath.mpf(b) for b in denominator]
        zz = mpmath.mpf(z)
        term = mpmath.mpf(1)
        total = mpmath.mpf(1)
        for j in range(max_terms):
            factor = zz / (j + 1)
            for a in nums:
                factor *= a + j
            for b in dens:
                factor /= b + j
            term *= factor
            total += term
            if abs(term) < mpmath.mpf(10) ** (-dps + 10) * abs(total) and j > 5:
                break
        return float(total)


def exp_integral_psi11():
    """Psi(1, 1; 1) = e E_1(1) as the quadrature int_0^inf e^-t/(1+t) dt."""
    val, _ = quad(lambda t: math.exp(-t) / (1 + t), 0, np.inf, limit=400)
    return val


def psi_cut_integral(a: float, b: float, x: float) -> complex:
    """Psi(a, b; x e^{i pi}) from the Laplace representation continued along
    the rotated ray t = s e^{-3 i pi / 4} (upper-side approach); needs a > 0."""
    rot = np.exp(-1j * 3 * np.pi / 4)
    z = x * np.exp(1j * np.pi)

    def integrand(s, part):
        t = s * rot
        val = np.exp(-z * t) * t ** (a - 1.0) * (1.0 + t) ** (b - a - 1.0) * rot
        return val.real if part == 0 else val.imag

    re, _ = quad(lambda s: integrand(s, 0), 0, np.inf, limit=400)
    im, _ = quad(lambda s: integrand(s, 1), 0, np.inf, limit=400)
    return complex(re, im) / math.gamma(a)


def pfaff_2f1(a: float, b: float, c: float, z: float, dps=220) -> float:
    """2F1 at z < 0 via the z/(z-1) transformation summed in high precision."""
    with mpmath.workdps(dps):
        aa, bb, cc = mpmath.mpf(a), mpmath.mpf(b), mpmath.mpf(c)
        zz = mpmath.mpf(z)
        w = zz / (zz - 1)
        term = mpmath.mpf(1)
        total = mpmath.mpf(1)
        for j in range(20000):
            term *= (aa + j) * (cc - bb + j) / ((cc + j) * (j + 1)) * w
            total += term
            if abs(term) < mpmath.mpf(10) ** (-dps + 10) * abs(total) and j > 5:
                break
        return float((1 - zz) ** (-aa) * total)
