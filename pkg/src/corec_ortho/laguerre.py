"""Co-recursive associated Laguerre (CAL) family.

The family L_n(x; alpha, c, mu) is obtained from the Laguerre recurrence by
shifting the level by c (association) and shifting the first-degree monic
polynomial by mu (co-recursion).  Normalization convention:

    L_0 = 1,
    L_1 = -(x + mu - 2c - alpha - 1) / (c + 1),

the monic sequence being bold_L_n = (-1)^n (c+1)_n L_n.  The level -1 seed
carries the co-recursion shift; the value at level 0 is 1 (only that seed is
consistent with L_1 above and with every explicit formula in the module).

Three independent evaluation routes are provided: the recurrence, the explicit
finite double sum (a terminating 4F3-type inner sum whose mu-dependence is
carried exactly, so the mu -> 0 and c -> 0 limits cost nothing), and the
hypergeometric combination built from the two confluent solutions u_n, v_n of
the recurrence.  Cross-route agreement is the family's main correctness check.

The spectral density, its Stieltjes transform, the Riccati residual of the
transform, the integral form of the generating function, and the five special
parameter presets complete the module.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from scipy.integrate import quad

from .errors import (
    AlphaDegenerate,
    ConstraintViolation,
    DenominatorVanishes,
    InvalidParams,
    NonIntegrableEndpoint,
    OutOfValidityDomain,
)
from .hypergeom import (
    EPS_LADDER,
    _richardson_limit,
    hyp,
    pfq,
    pochhammer,
    tricomi_psi,
)
from .recurrence import ThreeTermRecurrence, eval_sequence

_INT_TOL = 1e-9


def _near_int(v) -> bool:
    return abs(float(v) - round(float(v))) <= _INT_TOL


@dataclass(frozen=True)
class CALParams:
    """Parameter bundle (alpha, c, mu) for the CAL family."""

    alpha: object
    c: object
    mu: object

    def positivity_domain(self) -> bool:
        """(n + c)(n + alpha + c) > 0 for every level n >= 1."""
        a, c = float(self.alpha), float(self.c)
        horizon = max(1, math.ceil(-c), math.ceil(-a - c)) + 1
        return all((n + c) * (n + a + c) > 0 for n in range(1, horizon + 1))

    def measure_validity(self) -> bool:
        """Sufficient conditions for a positive orthogonality measure with no
        point masses: mu <= c, c >= 0, alpha + c > -1."""
        a, c, mu = float(self.alpha), float(self.c), float(self.mu)
        return mu <= c + 1e-12 and c >= 0 and a + c > -1

    @property
    def big_g(self):
        """c (c + alpha) / mu, the auxiliary parameter of the explicit form."""
        if self.mu == 0:
            raise ZeroDivisionError("G is infinite at mu = 0")
        return self.c * (self.c + self.alpha) / self.mu


class CALPreset(Enum):
    CORECURSIVE = "corecursive"        # c = 0
    NEG_ALPHA = "neg-alpha"            # c = -alpha
    ASSOCIATED = "associated"          # mu = 0
    ZERO_RELATED = "zero-related"      # mu = c
    DUAL = "dual"                      # mu = c + alpha


# --------------------------------------------------------------------------
# recurrence route
# --------------------------------------------------------------------------

def cal_recurrence(p: CALParams, normalized: bool = True) -> ThreeTermRecurrence:
    """Three-term recurrence of the family.

    Monic data: beta(n) = 2n + 2c + alpha + 1, gamma(n) = (n+c)(n+c+alpha)
    for n >= 1.  The first step is seeded with gamma(0) = 1 and p_{-1} = -mu,
    which reproduces the monic first-degree member x + mu - 2c - alpha - 1 for
    every parameter value, including c + alpha = 0 and c = 0 where the
    conventional mu/(c+alpha) seed degenerates.

    normalized=True attaches the output scale (-1)^n / (c+1)_n; pass False for
    the monic sequence.
    """
    a, c, mu = p.alpha, p.c, p.mu
    if normalized and _near_int(c) and round(float(c)) <= -1:
        raise InvalidParams("normalization (c+1)_n hits zero for c a negative integer")

    def beta(k):
        return 2 * k + 2 * c + a + 1

    def gamma(k):
        if k == 0:
            return 1 + 0 * c  # in the arithmetic of the parameters
        return (k + c) * (k + c + a)

    scale = None
    if normalized:
        def scale(n):
            return (-1) ** n / pochhammer(c + 1, n) if isinstance(c, (int, Fraction)) \
                else (-1.0) ** n / pochhammer(float(c) + 1.0, n)

    return ThreeTermRecurrence(beta=beta, gamma=gamma,
                               p_minus_one=-mu, p_zero=1 + 0 * mu, scale=scale)


def _eval_recurrence(p: CALParams, n: int, x):
    return eval_sequence(cal_recurrence(p), n, x)[n]


# --------------------------------------------------------------------------
# explicit finite-sum route
# --------------------------------------------------------------------------

def cal_explicit(p: CALParams, n: int, x):
    """Explicit double sum

        L_n = (c+a+1)_n / n! * sum_k (-n)_k / ((c+1)_k (c+a+1)_k) * S_k * x^k,

    with S_k the terminating inner sum over j of

        (k-n)_j / ((c+k+1)_j (c+a+k+1)_j j!) *
            [ (c)_j (c+a)_j + j mu (c+1)_{j-1} (c+a+1)_{j-1} ].

    The bracket is the exact polynomial form of the usual (G+1)_j / (G)_j
    factor with G = c(c+a)/mu, so mu = 0 and c = 0 or c+a = 0 need no limit
    handling at all.  Rational inputs give an exact rational value.
    """
    a, c, mu = p.alpha, p.c, p.mu
    for k in range(1, n + 1):
        if c + k == 0 or c + a + k == 0:
            raise InvalidParams(
                "explicit form has a (c+1)_k or (c+alpha+1)_k pole; "
                "the parameters sit outside the evaluation domain")
    one = (x * 0) + 1
    total = x * 0
    xk = one
    for k in range(n + 1):
        inner_total = one
        term = one
        for j in range(1, n - k + 1):
            term = term * (k - n + (j - 1)) / (
                (c + k + j) * (c + a + k + j) * j)
            bracket = (pochhammer(c, j) * pochhammer(c + a, j)
                       + j * mu * pochhammer(c + 1, j - 1) * pochhammer(c + a + 1, j - 1))
            inner_total = inner_total + term * bracket
        coef = pochhammer(-n, k) / (pochhammer(c + 1, k) * pochhammer(c + a + 1, k))
        total = total + coef * inner_total * xk
        xk = xk * x
    norm = pochhammer(c + a + 1, n) / math.factorial(n) if not isinstance(c, Fraction) \
        else pochhammer(c + a + 1, n) / Fraction(math.factorial(n))
    return norm * total


# --------------------------------------------------------------------------
# hypergeometric combination route
# --------------------------------------------------------------------------

def _shifted_kummer_sum(b, d, e, x, tol=1e-14):
    """sum_j (b)_j (e + j) / ((d)_j j!) x^j, the combination
    e * 2F2(b, e+1; d, e; x) evaluated without the 1/e pole."""
    term = 1.0
    total = e * 1.0
    small = 0
    for j in range(1, 10000):
        term *= (b + j - 1) * x / ((d + j - 1) * j)
        piece = term * (e + j)
        total += piece
        if abs(piece) <= tol * max(abs(total), 1e-300):
            small += 1
            if small >= 2:
                return total
        else:
            small = 0
    return total


def cal_hyp(p: CALParams, n: int, x, tol: float = 1e-14):
    """Hypergeometric combination route A u_n + B v_n built from the two
    confluent solutions of the recurrence,

        u_n = (c+a+1)_n / (c+1)_n 1F1(-n-c; 1+a; x),
        v_n = 1F1(-n-c-a; 1-a; x),

    grouped into the pair of 2F2 * 1F1 products exchanged by the parameter
    symmetry (c, a) -> (c+a, -a).  Valid directly for noninteger alpha;
    integer alpha runs the perturbation ladder and raises AlphaDegenerate if
    the extrapolants disagree.
    """
    a = float(p.alpha)
    if _near_int(a):
        vals = [_cal_hyp_core(CALParams(a + eps, p.c, p.mu), n, x, tol)
                for eps in EPS_LADDER]
        return _richardson_limit(vals, AlphaDegenerate, f"cal_hyp(alpha={a})")
    return _cal_hyp_core(p, n, x, tol)


def _cal_hyp_core(p: CALParams, n: int, x, tol):
    a, c, mu = float(p.alpha), float(p.c), float(p.mu)
    x = float(x)
    s_plus = _shifted_kummer_sum(-c, 1 + a, mu - c, x, tol)
    f_plus = float(pfq(hyp([-n - c - a], [1 - a], x), tol=tol))
    s_minus = _shifted_kummer_sum(-c - a, 1 - a, mu - c - a, x, tol)
    f_minus = float(pfq(hyp([-n - c], [1 + a], x), tol=tol))
    ratio = pochhammer(c + a + 1, n) / pochhammer(c + 1, n)
    return math.exp(-x) / a * (s_plus * f_plus - ratio * s_minus * f_minus)


# --------------------------------------------------------------------------
# spectral measure
# --------------------------------------------------------------------------

def _psi_pair_on_cut(p: CALParams, x: float):
    a, c, mu = float(p.alpha), float(p.c), float(p.mu)
    t0 = tricomi_psi(c, -a, -x, side="above")
    t1 = tricomi_psi(c + 1, 1 - a, -x, side="above")
    return t0 + (c - mu) * t1, t0, t1


def cal_density(p: CALParams, x: float) -> float:
    """Absolutely continuous part of the spectral measure on (0, oo):

        phi'(x) = x^a e^{-x} / (Gamma(c+1) Gamma(c+a+1)
                   |Psi(c, -a; x e^{i pi}) + (c-mu) Psi(c+1, 1-a; x e^{i pi})|^2).

    The normalization constant is the closed form above; integrating the
    density over the half line gives total mass 1 (checked by quadrature in
    the test suite rather than trusted).
    """
    if not p.measure_validity():
        raise OutOfValidityDomain(
            f"measure requires mu <= c, c >= 0, alpha + c > -1; got {p}")
    if x <= 0:
        raise ValueError("density is supported on x > 0")
    a, c, mu = float(p.alpha), float(p.c), float(p.mu)
    denom, t0, t1 = _psi_pair_on_cut(p, x)
    scale = abs(t0) + abs(c - mu) * abs(t1)
    if abs(denom) <= 1e-13 * max(scale, 1e-300):
        raise DenominatorVanishes(f"density denominator vanishes at x = {x}")
    pref = 1.0 / (math.gamma(c + 1) * math.gamma(c + a + 1))
    return pref * x ** a * math.exp(-x) / abs(denom) ** 2


def cal_stieltjes(p: CALParams, pt: float) -> float:
    """Stieltjes transform s(pt) = int_0^oo dphi(x) / (x + pt) in closed form,

        s(p) = Psi(c+1, 1-a; p) / (Psi(c, -a; p) + (c-mu) Psi(c+1, 1-a; p)),

    for pt off the spectrum (any pt > 0)."""
    if not p.measure_validity():
        raise OutOfValidityDomain(f"measure validity required, got {p}")
    if pt <= 0:
        raise ValueError("closed form evaluated for pt > 0")
    a, c, mu = float(p.alpha), float(p.c), float(p.mu)
    t0 = tricomi_psi(c, -a, pt)
    t1 = tricomi_psi(c + 1, 1 - a, pt)
    denom = t0 + (c - mu) * t1
    if abs(denom) <= 1e-14 * (abs(t0) + abs(c - mu) * abs(t1) + 1e-300):
        raise DenominatorVanishes(f"Stieltjes denominator vanishes at pt = {pt}")
    val = t1 / denom
    return val.real if isinstance(val, complex) else float(val)


def riccati_residual(p: CALParams, pt: float) -> float:
    """Residual of the Riccati equation satisfied by the Stieltjes transform,

        p s' = [mu p - (c-mu)(a+c-mu)] s^2 + [p + a + 2(c-mu)] s - 1,

    with s' from a five-point central stencil of step 1e-4 * max(1, pt)."""
    a, c, mu = float(p.alpha), float(p.c), float(p.mu)
    h = 1e-4 * max(1.0, pt)
    s = cal_stieltjes(p, pt)
    sp = (-cal_stieltjes(p, pt + 2 * h) + 8 * cal_stieltjes(p, pt + h)
          - 8 * cal_stieltjes(p, pt - h) + cal_stieltjes(p, pt - 2 * h)) / (12 * h)
    rhs = (mu * pt - (c - mu) * (a + c - mu)) * s * s \
        + (pt + a + 2 * (c - mu)) * s - 1.0
    return abs(pt * sp - rhs)


# --------------------------------------------------------------------------
# generating function
# --------------------------------------------------------------------------

def cal_generating(p: CALParams, x: float, w: float) -> float:
    """Generating function F(x, w) = sum_n w^n L_n(x), computed from its
    integral solution

        F = w^{-c} (1-w)^{-a-1} e^{-x/(1-w)}
            int_0^w u^{c-1} (1-u)^{a-1} (c - mu u) e^{x/(1-u)} du,

    for c > 0 and 0 <= w < 1.  The u^{c-1} endpoint is removed by the exact
    substitution u = s^{1/c}.  F(x, 0) = 1 by normalization.
    """
    a, c, mu = float(p.alpha), float(p.c), float(p.mu)
    if w == 0:
        return 1.0
    if not 0 < w < 1:
        raise ValueError("generating function evaluated for w in [0, 1)")
    if c <= 0:
        raise NonIntegrableEndpoint("the integral form needs c > 0")

    def integrand(s):
        u = s ** (1.0 / c)
        return (1 - u) ** (a - 1) * (c - mu * u) * math.exp(x / (1 - u))

    val, _err = quad(integrand, 0.0, w ** c, limit=200, epsabs=1e-12, epsrel=1e-12)
    val /= c
    return w ** (-c) * (1 - w) ** (-a - 1) * math.exp(-x / (1 - w)) * val


def generating_ode_residual(p: CALParams, x: float, w: float) -> float:
    """Residual of the first-order generating-function equation

        w (1-w)^2 dF/dw + [(1-w)(c - (c+a+1) w) + x w] F - (c - mu w),

    with dF/dw from a five-point stencil."""
    a, c, mu = float(p.alpha), float(p.c), float(p.mu)
    h = 1e-4 * max(w, 0.05)
    f = cal_generating(p, x, w)
    fw = (-cal_generating(p, x, w + 2 * h) + 8 * cal_generating(p, x, w + h)
          - 8 * cal_generating(p, x, w - h) + cal_generating(p, x, w - 2 * h)) / (12 * h)
    lhs = w * (1 - w) ** 2 * fw + ((1 - w) * (c - (c + a + 1) * w) + x * w) * f
    return abs(lhs - (c - mu * w))


def cal_norm(p: CALParams, n: int):
    """Orthogonality norm int L_n^2 dphi = (c+a+1)_n / (c+1)_n."""
    return pochhammer(p.c + p.alpha + 1, n) / pochhammer(p.c + 1, n)


# --------------------------------------------------------------------------
# presets
# --------------------------------------------------------------------------

def _f32(nums, dens):
    return float(pfq(hyp(nums, dens, 1.0)))


def cal_preset(kind: CALPreset, *, alpha=None, c=None, mu=None):
    """Resolve a preset constraint and return (params, evaluator).

    The evaluator is the simplified explicit form of the corresponding special
    case (a single 3F2-type inner factor instead of the general bracket).
    Supplying a free parameter that contradicts the constraint raises
    ConstraintViolation.
    """
    def need(**kw):
        for name, v in kw.items():
            if v is None:
                raise ConstraintViolation(f"preset {kind.value} needs {name}")

    def check_fixed(name, supplied, resolved):
        if supplied is not None and abs(float(supplied) - float(resolved)) > 1e-12:
            raise ConstraintViolation(
                f"preset {kind.value} fixes {name} = {resolved}, got {supplied}")

    if kind is CALPreset.CORECURSIVE:
        need(alpha=alpha, mu=mu)
        check_fixed("c", c, 0)
        params = CALParams(alpha, 0, mu)

        def evaluator(n, x, a=float(alpha), m=float(mu)):
            total = 0.0
            for k in range(n + 1):
                if k < n:
                    bracket = 1.0 + m * (k - n) / ((1 + k) * (1 + a + k)) * _f32(
                        [1 + k - n, 1 + a, 1], [k + a + 2, k + 2])
                else:
                    bracket = 1.0
                total += pochhammer(-n, k) / (math.factorial(k) * pochhammer(1 + a, k)) \
                    * bracket * x ** k
            return pochhammer(a + 1, n) / math.factorial(n) * total

    elif kind is CALPreset.NEG_ALPHA:
        need(alpha=alpha, mu=mu)
        check_fixed("c", c, -alpha)
        params = CALParams(alpha, -alpha, mu)

        def evaluator(n, x, a=float(alpha), m=float(mu)):
            total = 0.0
            for k in range(n + 1):
                if k < n:
                    bracket = 1.0 + m * (k - n) / ((1 + k) * (1 - a + k)) * _f32(
                        [1 + k - n, 1 - a, 1], [k - a + 2, k + 2])
                else:
                    bracket = 1.0
                total += pochhammer(-n, k) / (math.factorial(k) * pochhammer(1 - a, k)) \
                    * bracket * x ** k
            return total

    elif kind is CALPreset.ASSOCIATED:
        need(alpha=alpha, c=c)
        check_fixed("mu", mu, 0)
        params = CALParams(alpha, c, 0)
        evaluator = _preset_f32_evaluator(float(alpha), float(c), shift_c=0, shift_ca=0)

    elif kind is CALPreset.ZERO_RELATED:
        need(alpha=alpha, c=c)
        check_fixed("mu", mu, c)
        params = CALParams(alpha, c, c)
        evaluator = _preset_f32_evaluator(float(alpha), float(c), shift_c=0, shift_ca=1)

    elif kind is CALPreset.DUAL:
        need(alpha=alpha, c=c)
        check_fixed("mu", mu, c + alpha)
        params = CALParams(alpha, c, c + alpha)
        evaluator = _preset_f32_evaluator(float(alpha), float(c), shift_c=1, shift_ca=0)

    else:
        raise ConstraintViolation(f"unknown preset {kind}")

    return params, evaluator


def _preset_f32_evaluator(a: float, c: float, shift_c: int, shift_ca: int):
    """Explicit form with inner 3F2(k-n, c+shift_c, c+a+shift_ca; c+k+1,
    c+a+k+1; 1), shared by the associated, zero-related and dual cases."""
    def evaluator(n, x):
        total = 0.0
        for k in range(n + 1):
            inner = _f32([k - n, c + shift_c, c + a + shift_ca],
                         [c + k + 1, c + a + k + 1])
            total += pochhammer(-n, k) / (pochhammer(c + 1, k) * pochhammer(c + a + 1, k)) \
                * inner * x ** k
        return pochhammer(c + a + 1, n) / math.factorial(n) * total
    return evaluator
