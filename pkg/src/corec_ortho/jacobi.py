"""Co-recursive associated Jacobi (CAJ) family on the shifted interval [0, 1].

All numerics run in the shifted variable: R_n(x) = P_n(2x - 1) with x in
[0, 1]; the [-1, 1] polynomials are exposed only through that wrapper.  The
family R_n(x; alpha, beta, c, mu) satisfies the level-shifted Jacobi
recurrence with the first monic member displaced by mu/2 (mu in the original
variable), seeded by R_0 = 1 and the level -1 value

    D = -(2c+a+b)(2c+a+b+1) mu / (2 (c+a)(c+b)).

As in the Laguerre module the engine carries the displacement through an
equivalent exact seed, so c+a = 0 and c+b = 0 need no special casing.

Routes: recurrence, explicit finite double sum (5F4-type inner sum with the
mu-dependence carried exactly), and the hypergeometric combination of the two
2F1 solutions together with its parameter-symmetry image.  The spectral
density (normalized numerically, since the closed forms fix it only up to a
constant), both printed forms of the Stieltjes transform, the closed-form
generating function, the Laguerre scaling limit, and the nine parameter
presets complete the module.
"""
from __future__ import annotations

import math
import threading
import warnings
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import (
    BranchSelection,
    ConstraintViolation,
    DegenerateParameters,
    DenominatorVanishes,
    InvalidParams,
    LevelDenominatorVanishes,
    OutOfValidityDomain,
)
from .hypergeom import (
    EPS_LADDER,
    _richardson_limit,
    gauss_2f1_continued,
    gauss_2f1_cut,
    hyp,
    pfq,
    pochhammer,
)
from .recurrence import ThreeTermRecurrence, eval_sequence

_INT_TOL = 1e-9


def _near_int(v) -> bool:
    return abs(float(v) - round(float(v))) <= _INT_TOL


@dataclass(frozen=True)
class CAJParams:
    """Parameter bundle (alpha, beta, c, mu) for the CAJ family."""

    alpha: object
    beta: object
    c: object
    mu: object

    @property
    def total(self):
        """2c + alpha + beta, the combination every denominator is built from."""
        return 2 * self.c + self.alpha + self.beta

    def delta_validity(self) -> bool:
        """alpha != 0 and 2c + alpha + beta != 0 (independence of the two
        hypergeometric solutions)."""
        return abs(float(self.alpha)) > 1e-12 and abs(float(self.total)) > 1e-12

    def measure_validity(self) -> bool:
        """Sufficient positivity conditions: c >= 0, c > -beta, alpha > -1,
        mu >= -2c(c+beta) / ((2c+a+b)(2c+a+b+1))."""
        a, b, c, mu = (float(self.alpha), float(self.beta),
                       float(self.c), float(self.mu))
        m = 2 * c + a + b
        bound = -2 * c * (c + b) / (m * (m + 1))
        return c >= 0 and c > -b and a > -1 and mu >= bound - 1e-12

    @property
    def seed_d(self):
        """Level -1 seed D = -(2c+a+b)(2c+a+b+1) mu / (2(c+a)(c+b))."""
        m = self.total
        return -m * (m + 1) * self.mu / (2 * (self.c + self.alpha) * (self.c + self.beta))

    @property
    def big_f(self):
        """F = c [D(c+beta) - c - alpha - beta] / [D(c+beta) + c]."""
        d = self.seed_d
        return self.c * (d * (self.c + self.beta) - self.c - self.alpha - self.beta) \
            / (d * (self.c + self.beta) + self.c)

    @property
    def big_g(self):
        """G = 2c(c+b)(2c+a+b) / (2c(c+b) + mu (2c+a+b)(2c+a+b+1))."""
        m = self.total
        return 2 * self.c * (self.c + self.beta) * m / (
            2 * self.c * (self.c + self.beta) + self.mu * m * (m + 1))


class CAJPreset(Enum):
    CORECURSIVE = "corecursive"                  # c = 0
    T_PRIME_CORECURSIVE = "tprime-corecursive"   # c = -alpha-beta
    NEG_BETA = "neg-beta"                        # c = -beta
    NEG_ALPHA = "neg-alpha"                      # c = -alpha
    ASSOCIATED = "associated"                    # mu = 0
    ZERO_RELATED = "zero-related"                # mu = 2c(c+a)/((2c+a+b)(2c+a+b+1))
    ZERO_RELATED_DUAL = "zero-related-dual"      # mu = 2(c+b)(c+a+b)/(...)
    NEW_CASE = "new-case"                        # mu = -2c(c+b)/(...)
    NEW_CASE_DUAL = "new-case-dual"              # mu = -2(c+a)(c+a+b)/(...)


def t_prime(p: CAJParams) -> CAJParams:
    """Parameter symmetry (c, a, b) -> (c+a+b, -a, -b); an involution that
    leaves the recurrence coefficients invariant."""
    return CAJParams(-p.alpha, -p.beta, p.c + p.alpha + p.beta, p.mu)


def t_double_prime(p: CAJParams) -> CAJParams:
    """(c, a, b) -> (c+a+b, -b, -a): the reflection-composed variant."""
    return CAJParams(-p.beta, -p.alpha, p.c + p.alpha + p.beta, p.mu)


# --------------------------------------------------------------------------
# recurrence route
# --------------------------------------------------------------------------

def caj_recurrence(p: CAJParams, normalized: bool = True) -> ThreeTermRecurrence:
    """Three-term recurrence in the shifted variable.

    Monic data (n >= 1):

        beta(n)  = 1/2 - (a^2 - b^2) / (2 (2n+m)(2n+m+2)),
        gamma(n) = (n+c)(n+c+a)(n+c+b)(n+c+a+b)
                   / ((2n+m-1)(2n+m)^2 (2n+m+1)),

    with m = 2c+a+b.  The first step is seeded with gamma(0) = 1 and
    p_{-1} = -mu/2, which realizes the mu displacement of the first monic
    member for every parameter value.  normalized=True attaches the scale
    (m+1)_{2n} / ((c+1)_n (c+a+b+1)_n) restoring the conventional values.
    """
    a, b, c, mu = p.alpha, p.beta, p.c, p.mu
    m = 2 * c + a + b

    def _check(level_val, what, k):
        if level_val == 0:
            raise LevelDenominatorVanishes(f"{what} vanishes at level {k}")
        return level_val

    def beta(k):
        diff = a * a - b * b
        if diff == 0:
            # removable: the recurrence center is exactly 1/2 at all levels
            half = Fraction(1, 2) if isinstance(c, (int, Fraction)) else 0.5
            return half + 0 * c
        lo = _check(2 * k + m, "2n+2c+alpha+beta", k)
        hi = _check(2 * k + m + 2, "2n+2c+alpha+beta+2", k)
        return ((hi * lo - diff) / (2 * lo * hi)) + 0 * c

    def gamma(k):
        if k == 0:
            return 1 + 0 * c
        lo = _check(2 * k + m, "2n+2c+alpha+beta", k)
        num = (k + c) * (k + c + a) * (k + c + b) * (k + c + a + b)
        den = (2 * k + m - 1) * lo * lo * (2 * k + m + 1)
        return num / _check(den, "recurrence denominator", k)

    scale = None
    if normalized:
        def scale(n):
            den = pochhammer(c + 1, n) * pochhammer(c + a + b + 1, n)
            if den == 0:
                raise LevelDenominatorVanishes(
                    f"(c+1)_n (c+a+b+1)_n vanishes at n = {n}")
            return pochhammer(m + 1, 2 * n) / den

    half = Fraction(1, 2) if isinstance(mu, (int, Fraction)) else 0.5
    return ThreeTermRecurrence(beta=beta, gamma=gamma, p_minus_one=-mu * half,
                               p_zero=1 + 0 * c, scale=scale)


def _eval_recurrence(p: CAJParams, n: int, x):
    return eval_sequence(caj_recurrence(p), n, x)[n]


# --------------------------------------------------------------------------
# explicit finite-sum route
# --------------------------------------------------------------------------

def caj_explicit(p: CAJParams, n: int, x):
    """Explicit double sum

        R_n = (-1)^n (m+1)_n (c+b+1)_n / (n! (c+a+b+1)_n)
              * sum_k (-n)_k (n+m+1)_k / ((c+1)_k (c+b+1)_k) S_k x^k

    with the terminating inner sum

        S_k = sum_j (k-n)_j (n+k+m+1)_j / ((c+k+1)_j (c+b+k+1)_j (m+1)_j j!)
              * [ (c)_j (c+b)_j
                  + j (c+1)_{j-1} (c+b+1)_{j-1} (2c(c+b) + mu m(m+1)) / (2m) ],

    the bracket being the exact polynomial form of the (G+1)_j/(G)_j factor;
    mu -> 0 recovers the level-shifted family with no limit handling.
    Requires m = 2c+a+b != 0.  Exact for rational inputs.
    """
    a, b, c, mu = p.alpha, p.beta, p.c, p.mu
    m = 2 * c + a + b
    if m == 0:
        raise InvalidParams("explicit form needs 2c + alpha + beta != 0")
    for k in range(1, n + 1):
        if (c + k) == 0 or (c + b + k) == 0 or (c + a + b + k) == 0 or (m + k) == 0:
            raise InvalidParams(
                "explicit-form Pochhammer pole; parameters outside the "
                "evaluation domain of the finite sum")
    shift_load = (2 * c * (c + b) + mu * m * (m + 1)) / (2 * m)
    one = (x * 0) + 1
    total = x * 0
    xk = one
    for k in range(n + 1):
        inner = one
        term = one
        for j in range(1, n - k + 1):
            term = term * (k - n + j - 1) * (n + k + m + j) / (
                (c + k + j) * (c + b + k + j) * (m + j) * j)
            bracket = (pochhammer(c, j) * pochhammer(c + b, j)
                       + j * shift_load * pochhammer(c + 1, j - 1) * pochhammer(c + b + 1, j - 1))
            inner = inner + term * bracket
        coef = (pochhammer(-n, k) * pochhammer(n + m + 1, k)
                / (pochhammer(c + 1, k) * pochhammer(c + b + 1, k)))
        total = total + coef * inner * xk
        xk = xk * x
    fact = Fraction(math.factorial(n)) if isinstance(c, (int, Fraction)) \
        else float(math.factorial(n))
    pref = (-1) ** n * pochhammer(m + 1, n) * pochhammer(c + b + 1, n) / (
        fact * pochhammer(c + a + b + 1, n))
    return pref * total


# --------------------------------------------------------------------------
# hypergeometric combination route
# --------------------------------------------------------------------------

def caj_hyp(p: CAJParams, n: int, x, tol: float = 1e-14):
    """Combination of the two Gauss-hypergeometric solutions and its
    parameter-symmetry image (the (1 + T') grouping), in the x-argument
    form: each term is a 2F1 in x carrying the level index times a bracket of
    two level-free 2F1 factors, one weighted by the co-recursion shift.
    Needs x in (0, 1) for the series and noninteger alpha, beta; integer
    cases run the perturbation ladder.

    The x-argument series lose accuracy approaching x = 1, where the
    equivalent (1-x)-argument grouping converges fastest; evaluation is
    dispatched to whichever half-interval conditions the series well.
    """
    if x > 0.75:
        return caj_hyp_grouped(p, n, x, tol=tol)
    a, b = float(p.alpha), float(p.beta)
    if _near_int(b) or _near_int(a):
        def at(eps):
            q = CAJParams(a + (eps if _near_int(a) else 0.0),
                          b + (eps if _near_int(b) else 0.0),
                          float(p.c), float(p.mu))
            return _caj_hyp_core(q, n, x, tol)
        vals = [at(eps) for eps in EPS_LADDER]
        return _richardson_limit(vals, DegenerateParameters,
                                 f"caj_hyp(alpha={a}, beta={b})")
    return _caj_hyp_core(p, n, x, tol)


def _caj_hyp_core(p: CAJParams, n: int, x, tol):
    return _caj_hyp_term(p, n, x, tol) + _caj_hyp_term(t_prime(p), n, x, tol)


def _caj_hyp_term(p: CAJParams, n: int, x, tol):
    a, b, c, mu = (float(p.alpha), float(p.beta), float(p.c), float(p.mu))
    m = 2 * c + a + b
    g1 = float(pfq(hyp([-n - c - a - b, n + c + 1], [1 - b], x), tol=tol))
    g2 = float(pfq(hyp([-c, c + a + b + 1], [1 + b], x), tol=tol))
    g3 = float(pfq(hyp([1 - c, c + a + b], [1 + b], x), tol=tol))
    ratio = pochhammer(c + a + 1, n) / pochhammer(c + a + b + 1, n)
    bracket = (m + 1) * mu / (2 * b) * g2 - c * (c + a) / (b * m) * g3
    return (-1) ** n * ratio * g1 * bracket


def caj_hyp_grouped(p: CAJParams, n: int, x, tol: float = 1e-14):
    """Equivalent hypergeometric route in the (1-x)-argument grouping, with
    every coefficient pole at c + alpha = 0, c + beta = 0 and mu = 0
    cancelled symbolically.  Converges for x in (0, 2); shares only the
    alpha != 0 and 2c+alpha+beta != 0 restrictions with the recurrence."""
    a = float(p.alpha)
    if _near_int(a):
        def at(eps):
            q = CAJParams(a + eps, float(p.beta), float(p.c), float(p.mu))
            return _caj_grouped_term(q, n, x, tol) + _caj_grouped_term(t_prime(q), n, x, tol)
        vals = [at(eps) for eps in EPS_LADDER]
        return _richardson_limit(vals, DegenerateParameters,
                                 f"caj_hyp_grouped(alpha={a})")
    return _caj_grouped_term(p, n, x, tol) + _caj_grouped_term(t_prime(p), n, x, tol)


def _caj_grouped_term(p: CAJParams, n: int, x, tol):
    a, b, c, mu = (float(p.alpha), float(p.beta), float(p.c), float(p.mu))
    m = 2 * c + a + b
    u = 1.0 - x
    w1 = (c + a) * (c + a + b) + m * (m + 1) * mu / 2
    w2 = (c + a + b) * (c * (c + a) - m * (m + 1) * mu / 2)
    g_main = float(pfq(hyp([-c - a - b, c], [1 - a], u), tol=tol))
    g_aux = float(pfq(hyp([1 - c - a - b, c + 1], [2 - a], u), tol=tol))
    g_level = float(pfq(hyp([-n - c, n + c + a + b + 1], [1 + a], u), tol=tol))
    ratio = pochhammer(c + a + 1, n) / pochhammer(c + 1, n)
    return ratio * g_level * (w1 * g_main + w2 * u / (1 - a) * g_aux) / (a * m)


# --------------------------------------------------------------------------
# spectral measure
# --------------------------------------------------------------------------

_norm_cache: dict = {}
_norm_lock = threading.Lock()


def density_domain(p: CAJParams):
    """Quadrature domain carrying the density's true endpoint exponents.

    The cut modulus in the denominator grows like x^{-2c} near 0 and, for
    negative alpha, like (1-x)^{alpha} near 1; net effect: the density
    behaves as x^beta at the left endpoint and (1-x)^{|alpha|} at the right.
    """
    from .measure import QuadratureDomain
    a, b = float(p.alpha), float(p.beta)
    return QuadratureDomain.unit_interval(b, abs(a))


def _density_unnormalized(p: CAJParams, x: float) -> float:
    # boundary values of the transform's two Gauss factors on the cut,
    # evaluated at t = 1/x from the upper side; only the modulus matters
    a, b, c, mu = (float(p.alpha), float(p.beta), float(p.c), float(p.mu))
    m = 2 * c + a + b
    t = 1.0 / x
    f0 = gauss_2f1_cut(c, c + b, m, t, side="above")
    f1 = gauss_2f1_cut(c + 1, c + b + 1, m + 2, t, side="above")
    denom = f0 + mu / (2 * x) * f1
    if abs(denom) <= 1e-13 * (abs(f0) + abs(mu / (2 * x) * f1) + 1e-300):
        raise DenominatorVanishes(f"density denominator vanishes at x = {x}")
    return (1 - x) ** a * x ** (b + 2 * c) / abs(denom) ** 2


def _density_mass(p: CAJParams) -> float:
    key = (float(p.alpha), float(p.beta), float(p.c), float(p.mu))
    got = _norm_cache.get(key)
    if got is not None:
        return got
    from .measure import QuadratureDomain, integrate
    mass = integrate(lambda x: _density_unnormalized(p, x), density_domain(p),
                     tol=1e-10)
    with _norm_lock:
        _norm_cache.setdefault(key, mass)
    return _norm_cache[key]


def caj_density(p: CAJParams, x: float, validate: bool = True) -> float:
    """Absolutely continuous part of the spectral measure on (0, 1),

        phi'(x) = (1-x)^a x^{b+2c}
                  | F(c, c+b; m; -1/x) + mu/(2x) F(c+1, c+b+1; m+2; -1/x) |^-2
                  / Z,

    with m = 2c+a+b and Z the numerically computed total mass (cached per
    parameter bundle) so the density integrates to one.

    validate=False downgrades the positivity-domain failure to a warning;
    the sufficient conditions are not necessary and callers may knowingly
    explore beyond them.
    """
    if not p.measure_validity():
        if validate:
            raise OutOfValidityDomain(
                f"measure conditions c >= 0, c > -beta, alpha > -1, "
                f"mu >= lower bound violated for {p}")
        warnings.warn(f"evaluating density outside the sufficient positivity "
                      f"conditions for {p}", stacklevel=2)
    if not 0 < x < 1:
        raise ValueError("density is supported on (0, 1)")
    return _density_unnormalized(p, x) / _density_mass(p)


def caj_stieltjes(p: CAJParams, pt: float, form: str = "composed") -> float:
    """Stieltjes transform sigma(pt) = int_0^1 dphi(x) / (x + pt) in closed
    form, for pt outside [-1, 0] (off the support reflected through the
    x + pt kernel).

    form="composed" uses the base transform pushed through the co-recursion
    fraction sigma / (1 - mu sigma / 2); form="compact" uses the equivalent
    single-ratio form with the auxiliary parameter G.  Both are exact
    rearrangements of one another; the pair is kept as a cross-check.
    """
    a, b, c, mu = (float(p.alpha), float(p.beta), float(p.c), float(p.mu))
    m = 2 * c + a + b
    if -1 <= pt <= 0:
        raise ValueError("pt in [-1, 0] sits on the singular set of the kernel")
    z = -1.0 / pt
    f1 = gauss_2f1_continued(c + 1, c + b + 1, m + 2, z)
    if form == "composed":
        f0 = gauss_2f1_continued(c, c + b, m, z)
        sigma0 = f1 / (pt * f0)
        denom = 1.0 - mu * sigma0 / 2.0
        if abs(denom) < 1e-13:
            raise DenominatorVanishes("co-recursion fraction vanishes")
        return sigma0 / denom
    if form == "compact":
        f0m1 = gauss_2f1_continued(c, c + b, m + 1, z)
        coef = (2 * c * (c + b) + mu * m * (m + 1)) / (2 * m * (m + 1))
        denom = f0m1 + z * coef * f1
        if abs(denom) < 1e-300:
            raise DenominatorVanishes("compact-form denominator vanishes")
        return f1 / (pt * denom)
    raise ValueError(f"unknown form {form!r}")


def caj_norm(p: CAJParams, n: int) -> float:
    """Orthogonality norm int R_n^2 dphi against the unit-mass measure,
    computed as scale(n)^2 prod_{k=1..n} gamma(k) of the monic recurrence.
    This value is derived from the recurrence, not a printed closed form."""
    a, b, c = float(p.alpha), float(p.beta), float(p.c)
    m = 2 * c + a + b
    prod = 1.0
    for k in range(1, n + 1):
        num = (k + c) * (k + c + a) * (k + c + b) * (k + c + a + b)
        den = (2 * k + m - 1) * (2 * k + m) ** 2 * (2 * k + m + 1)
        prod *= num / den
    sc = float(pochhammer(m + 1, 2 * n)) / (
        float(pochhammer(c + 1, n)) * float(pochhammer(c + a + b + 1, n)))
    return sc * sc * prod


# --------------------------------------------------------------------------
# generating function
# --------------------------------------------------------------------------

def caj_generating(p: CAJParams, x: float, w: float, tol: float = 1e-14) -> float:
    """Weighted generating function

        G(x, w) = sum_n (c+1)_n (c+a+b+1)_n / (n! (2c+a+b+2)_n) w^n R_n(x),

    evaluated from its closed form: the square-root pair

        Z1 = (1 - sqrt((1+w)^2 - 4wx)) / w,   Z2 = (1 + sqrt(...)) / w,

    a 3F2-type factor in 1-x carrying the co-recursion, and two Gauss factors
    at (1-Z1)/2 and 2/(1+Z2), under the same (1 + T') grouping as the
    polynomials.  Use |w| <= 0.3; BranchSelection signals the principal
    square root leaving the convergence region.
    """
    if w == 0:
        return 1.0
    disc = (1 + w) ** 2 - 4 * w * x
    if disc <= 0:
        raise BranchSelection("square-root discriminant not positive")
    s = math.sqrt(disc)
    z2 = (1 + s) / w
    q_big = 2.0 / (1 + z2)
    if abs(q_big) >= 1:
        raise BranchSelection("argument 2/(1+Z2) leaves the unit disk")
    z1 = (1 - s) / w
    arg_small = (1 - z1) / 2

    a = float(p.alpha)
    if _near_int(a):
        def at(eps):
            q = CAJParams(a + eps, float(p.beta), float(p.c), float(p.mu))
            return _caj_generating_core(q, x, w, arg_small, q_big, z2, tol)
        vals = [at(eps) for eps in EPS_LADDER]
        return _richardson_limit(vals, DegenerateParameters,
                                 f"caj_generating(alpha={a})")
    return _caj_generating_core(p, x, w, arg_small, q_big, z2, tol)


def _caj_generating_core(p, x, w, arg_small, q_big, z2, tol):
    return (_caj_generating_term(p, x, w, arg_small, q_big, z2, tol)
            + _caj_generating_term(t_prime(p), x, w, arg_small, q_big, z2, tol))


def _caj_generating_term(p: CAJParams, x, w, arg_small, q_big, z2, tol):
    # combination coefficient of the level-carrying solution, written with
    # the c+a, c+b and mu poles cancelled (same object as in the grouped
    # polynomial route); the power factor's exponent c+a+b+1 is local to the
    # term, it maps to c+1 under the parameter symmetry
    a, b, c, mu = (float(p.alpha), float(p.beta), float(p.c), float(p.mu))
    m = 2 * c + a + b
    u = 1 - x
    w1 = (c + a) * (c + a + b) + m * (m + 1) * mu / 2
    w2 = (c + a + b) * (c * (c + a) - m * (m + 1) * mu / 2)
    g_main = float(pfq(hyp([-c - a - b, c], [1 - a], u), tol=tol))
    g_aux = float(pfq(hyp([1 - c - a - b, c + 1], [2 - a], u), tol=tol))
    acomb = (w1 * g_main + w2 * u / (1 - a) * g_aux) / (a * m)
    power = (2.0 / (w * (z2 + 1))) ** (c + a + b + 1)
    g_small = float(pfq(hyp([-c, c + a + b + 1], [1 + a], arg_small), tol=tol))
    g_big = float(pfq(hyp([c + a + 1, c + a + b + 1], [m + 2], q_big), tol=tol))
    return acomb * power * g_small * g_big


def caj_generating_series(p: CAJParams, x: float, w: float, n_terms: int = 50) -> float:
    """Partial sum of the weighted generating series; the closed form's
    independent check."""
    a, b, c = float(p.alpha), float(p.beta), float(p.c)
    vals = eval_sequence(caj_recurrence(p), n_terms, x)
    total = 0.0
    coef = 1.0
    for n in range(n_terms + 1):
        if n > 0:
            coef *= (c + n) * (c + a + b + n) * w / (n * (2 * c + a + b + 1 + n))
        total += coef * vals[n]
    return total


# --------------------------------------------------------------------------
# Laguerre scaling limit
# --------------------------------------------------------------------------

def laguerre_limit(p, n: int, x: float, beta_large: float) -> float:
    """Evaluate the family at beta = beta_large under the scaling
    xat -> 1 - x/beta (shifted variable), mu -> -2 mu / beta; converges to
    the co-recursive associated Laguerre value L_n(x; alpha, c, mu) at first
    order in 1/beta.  p carries (alpha, c, mu) of the Laguerre target.

    The displacement scales with a minus sign: the two families' first-degree
    shifts are stated at opposite normalizations (the (-1)^n in the Laguerre
    scale flips the sign of the value-level displacement at odd degrees), as
    the n = 1 members show directly.
    """
    if beta_large < 1e3:
        raise ValueError("scaling limit intended for beta_large >= 1e3")
    q = CAJParams(float(p.alpha), beta_large, float(p.c),
                  -2 * float(p.mu) / beta_large)
    x_shift = 1.0 - float(x) / beta_large
    return _eval_recurrence(q, n, x_shift)


# --------------------------------------------------------------------------
# presets
# --------------------------------------------------------------------------

def _f43(nums, dens):
    return float(pfq(hyp(nums, dens, 1.0), max_terms=40000))


def _corecursive_eval(a: float, b: float, mu: float):
    """Explicit c = 0 form: Jacobi sum with the mu bracket attached."""
    def evaluator(n, x):
        total = 0.0
        for k in range(n + 1):
            if k < n:
                inner = _f43([k - n + 1, n + k + a + b + 2, b + 1, 1],
                             [k + 2, b + k + 2, a + b + 2])
                bracket = 1.0 + mu * (k - n) * (n + k + a + b + 1) / (
                    2 * (k + 1) * (b + k + 1)) * inner
            else:
                bracket = 1.0
            total += (pochhammer(-n, k) * pochhammer(n + a + b + 1, k)
                      / (math.factorial(k) * pochhammer(b + 1, k))) * bracket * x ** k
        return (-1) ** n * pochhammer(b + 1, n) / math.factorial(n) * total
    return evaluator


def caj_preset(kind: CAJPreset, *, alpha=None, beta=None, c=None, mu=None):
    """Resolve a preset constraint and return (params, evaluator) with the
    simplified explicit form printed for that case."""
    def need(**kw):
        for name, v in kw.items():
            if v is None:
                raise ConstraintViolation(f"preset {kind.value} needs {name}")

    def check_fixed(name, supplied, resolved):
        if supplied is not None and abs(float(supplied) - float(resolved)) > 1e-12:
            raise ConstraintViolation(
                f"preset {kind.value} fixes {name} = {resolved}, got {supplied}")

    if kind is CAJPreset.CORECURSIVE:
        need(alpha=alpha, beta=beta, mu=mu)
        check_fixed("c", c, 0)
        params = CAJParams(alpha, beta, 0, mu)
        evaluator = _corecursive_eval(float(alpha), float(beta), float(mu))

    elif kind is CAJPreset.T_PRIME_CORECURSIVE:
        need(alpha=alpha, beta=beta, mu=mu)
        check_fixed("c", c, -alpha - beta)
        params = CAJParams(alpha, beta, -alpha - beta, mu)
        evaluator = _corecursive_eval(-float(alpha), -float(beta), float(mu))

    elif kind is CAJPreset.NEG_BETA:
        need(alpha=alpha, beta=beta, mu=mu)
        check_fixed("c", c, -beta)
        params = CAJParams(alpha, beta, -beta, mu)
        a, b, m = float(alpha), float(beta), float(mu)

        def evaluator(n, x):
            total = 0.0
            for k in range(n + 1):
                if k < n:
                    inner = _f43([k - n + 1, n + k + a - b + 2, 1 - b, 1],
                                 [k + 2, 2 - b + k, a - b + 2])
                    bracket = 1.0 + m * (k - n) * (n + k + a - b + 1) / (
                        2 * (k + 1) * (1 - b + k)) * inner
                else:
                    bracket = 1.0
                total += (pochhammer(-n, k) * pochhammer(n + a - b + 1, k)
                          / (math.factorial(k) * pochhammer(1 - b, k))) * bracket * x ** k
            return (-1) ** n * pochhammer(a - b + 1, n) / pochhammer(a + 1, n) * total

    elif kind is CAJPreset.NEG_ALPHA:
        need(alpha=alpha, beta=beta, mu=mu)
        check_fixed("c", c, -alpha)
        params = CAJParams(alpha, beta, -alpha, mu)
        a, b = float(alpha), float(beta)
        base = _corecursive_eval(-a, b, float(mu))

        def evaluator(n, x):
            pref = math.factorial(n) * pochhammer(b - a + 1, n) / (
                pochhammer(1 - a, n) * pochhammer(1 + b, n))
            return pref * base(n, x)

    elif kind is CAJPreset.ASSOCIATED:
        need(alpha=alpha, beta=beta, c=c)
        check_fixed("mu", mu, 0)
        params = CAJParams(alpha, beta, c, 0)
        a, b, cc = float(alpha), float(beta), float(c)
        m = 2 * cc + a + b

        def evaluator(n, x):
            total = 0.0
            for k in range(n + 1):
                inner = _f43([k - n, n + k + m + 1, cc, cc + b],
                             [cc + k + 1, cc + b + k + 1, m])
                total += (pochhammer(-n, k) * pochhammer(n + m + 1, k)
                          / (pochhammer(cc + 1, k) * pochhammer(cc + b + 1, k))) * inner * x ** k
            return ((-1) ** n * pochhammer(m + 1, n) * pochhammer(cc + b + 1, n)
                    / (math.factorial(n) * pochhammer(cc + a + b + 1, n))) * total

    elif kind in (CAJPreset.ZERO_RELATED, CAJPreset.ZERO_RELATED_DUAL,
                  CAJPreset.NEW_CASE, CAJPreset.NEW_CASE_DUAL):
        need(alpha=alpha, beta=beta, c=c)
        # resolve the constraint in the arithmetic of the inputs, so exact
        # rationals stay exact
        m_exact = 2 * c + alpha + beta
        fixed = {
            CAJPreset.ZERO_RELATED: 2 * c * (c + alpha) / (m_exact * (m_exact + 1)),
            CAJPreset.ZERO_RELATED_DUAL:
                2 * (c + beta) * (c + alpha + beta) / (m_exact * (m_exact + 1)),
            CAJPreset.NEW_CASE: -2 * c * (c + beta) / (m_exact * (m_exact + 1)),
            CAJPreset.NEW_CASE_DUAL:
                -2 * (c + alpha) * (c + alpha + beta) / (m_exact * (m_exact + 1)),
        }[kind]
        check_fixed("mu", mu, fixed)
        params = CAJParams(alpha, beta, c, fixed)
        a, b, cc = float(alpha), float(beta), float(c)
        m = 2 * cc + a + b
        shift = {CAJPreset.ZERO_RELATED: (0, 1), CAJPreset.NEW_CASE: (0, 0),
                 CAJPreset.ZERO_RELATED_DUAL: (0, 1), CAJPreset.NEW_CASE_DUAL: (0, 0)}[kind]
        dual = kind in (CAJPreset.ZERO_RELATED_DUAL, CAJPreset.NEW_CASE_DUAL)
        if not dual:
            lower = (cc, cc + b)
            uppers = (cc, cc + b + shift[1])
        else:
            lower = (cc + a + b, cc + a)
            uppers = (cc + a + b, cc + a + shift[1])

        def evaluator(n, x, lower=lower, uppers=uppers, dual=dual):
            p1, p2 = lower
            total = 0.0
            for k in range(n + 1):
                inner = _f43([k - n, n + k + m + 1, uppers[0], uppers[1]],
                             [p1 + k + 1, p2 + k + 1, m + 1])
                total += (pochhammer(-n, k) * pochhammer(n + m + 1, k)
                          / (pochhammer(p1 + 1, k) * pochhammer(p2 + 1, k))) * inner * x ** k
            norm = pochhammer(cc + a + b + 1, n) if not dual else pochhammer(cc + 1, n)
            pref = ((-1) ** n * pochhammer(m + 1, n) * pochhammer(p2 + 1, n)
                    / (math.factorial(n) * norm))
            return pref * total

    else:
        raise ConstraintViolation(f"unknown preset {kind}")

    return params, evaluator


def preset_density_unnormalized(kind: CAJPreset, p: CAJParams, x: float) -> float:
    """The simplified density forms printed for the presets that have one
    (co-recursive, zero-related and its dual image, new case and its dual),
    up to overall normalization."""
    a, b, c, mu = (float(p.alpha), float(p.beta), float(p.c), float(p.mu))
    m = 2 * c + a + b
    t = 1.0 / x
    if kind is CAJPreset.CORECURSIVE:
        core = 1.0 + mu / (2 * x) * gauss_2f1_cut(1, b + 1, a + b + 2, t)
        return (1 - x) ** a * x ** b / abs(core) ** 2
    if kind is CAJPreset.ZERO_RELATED:
        core = gauss_2f1_cut(c, c + b + 1, m + 1, t)
        return (1 - x) ** a * x ** (b + 2 * c) / abs(core) ** 2
    if kind is CAJPreset.ZERO_RELATED_DUAL:
        core = gauss_2f1_cut(c + 1, c + b, m + 1, t)
        return (1 - x) ** a * x ** (b + 2 * c) / abs(core) ** 2
    if kind is CAJPreset.NEW_CASE:
        core = gauss_2f1_cut(c, c + b, m + 1, t)
        return (1 - x) ** a * x ** (b + 2 * c) / abs(core) ** 2
    if kind is CAJPreset.NEW_CASE_DUAL:
        core = gauss_2f1_cut(c + 1, c + b + 1, m + 1, t)
        return (1 - x) ** (a - 2) * x ** (b + 2 * c + 2) / abs(core) ** 2
    raise ConstraintViolation(f"no printed density form for preset {kind}")
