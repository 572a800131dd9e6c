"""Three-term recurrence engine and exact rational polynomial arithmetic.

A recurrence is stored through the coefficient maps of its monic steps,

    p_{k+1}(x) = (x - beta(k)) p_k(x) - gamma(k) p_{k-1}(x),      k >= 0,

together with explicit seeds p_{-1}, p_0 (nonzero p_{-1} seeds are how the
co-recursive families carry their first-level shift) and an optional output
normalization ``scale``: when present, the sequence returned to the caller is
scale(n) * p_n.  This reproduces the conventional non-monic normalizations of
the classical families exactly while keeping the level-shift (association) and
first-coefficient-shift (co-recursion) modifications trivial to express.

Coefficient maps may be callables of the (possibly non-integer) level or plain
mappings; exact rational data flows through unchanged, so the same recurrence
object feeds both floating-point evaluation and exact coefficient extraction.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from numbers import Rational
from typing import Callable

from .errors import CoefficientUnavailable, GammaVanishes


def _as_map(obj) -> Callable:
    if callable(obj):
        return obj

    def lookup(level):
        try:
            return obj[level]
        except KeyError as exc:
            raise CoefficientUnavailable(
                f"recurrence coefficient undefined at level {level}") from exc

    return lookup


# --------------------------------------------------------------------------
# exact polynomials
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class RationalPoly:
    """Univariate polynomial with exact rational coefficients.

    coefficients[i] is the coefficient of x**i; no trailing zeros are kept, and
    the zero polynomial is the empty tuple (degree -1).
    """

    coefficients: tuple

    @staticmethod
    def from_coeffs(coeffs) -> "RationalPoly":
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        return RationalPoly(tuple(cs))

    @staticmethod
    def constant(value) -> "RationalPoly":
        return RationalPoly.from_coeffs([value])

    @staticmethod
    def x() -> "RationalPoly":
        return RationalPoly.from_coeffs([0, 1])

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n = max(len(self.coefficients), len(other.coefficients))
        a = list(self.coefficients) + [Fraction(0)] * (n - len(self.coefficients))
        for i, c in enumerate(other.coefficients):
            a[i] += c
        return RationalPoly.from_coeffs(a)

    __radd__ = __add__

    def __neg__(self):
        return RationalPoly(tuple(-c for c in self.coefficients))

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return RationalPoly(())
        out = [Fraction(0)] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            if a == 0:
                continue
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        return RationalPoly.from_coeffs(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, RationalPoly):
            raise TypeError("polynomial / polynomial division is not supported")
        return self * (Fraction(1) / Fraction(other))

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers")
        result = RationalPoly.constant(1)
        for _ in range(n):
            result = result * self
        return result

    def derivative(self, order: int = 1) -> "RationalPoly":
        cs = list(self.coefficients)
        for _ in range(order):
            cs = [i * c for i, c in enumerate(cs)][1:]
        return RationalPoly.from_coeffs(cs)

    def __call__(self, x):
        result = x * 0
        for c in reversed(self.coefficients):
            result = result * x + (c if not isinstance(x, float) else float(c))
        return result

    def compose_affine(self, a, b) -> "RationalPoly":
        """p(a*x + b) expanded exactly."""
        arg = RationalPoly.from_coeffs([b, a])
        result = RationalPoly(())
        power = RationalPoly.constant(1)
        for c in self.coefficients:
            result = result + power * c
            power = power * arg
        return result

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.coefficients):
            if c == 0:
                continue
            parts.append(f"({c})*x^{i}" if i else f"({c})")
        return " + ".join(parts)


def _coerce(value):
    if isinstance(value, RationalPoly):
        return value
    if isinstance(value, (int, Fraction)):
        return RationalPoly.constant(value)
    return NotImplemented


# --------------------------------------------------------------------------
# recurrences
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ThreeTermRecurrence:
    """Monic-step recurrence data plus seeds and optional output scale."""

    beta: Callable
    gamma: Callable
    p_minus_one: object = 0
    p_zero: object = 1
    scale: Callable | None = None

    def __post_init__(self):
        object.__setattr__(self, "beta", _as_map(self.beta))
        object.__setattr__(self, "gamma", _as_map(self.gamma))
        if self.scale is not None and not callable(self.scale):
            raise TypeError("scale must be a callable of the level")


def _gamma_at(rec: ThreeTermRecurrence, k):
    g = rec.gamma(k)
    if k >= 1 and g == 0:
        raise GammaVanishes(f"gamma({k}) = 0")
    return g


def eval_sequence(rec: ThreeTermRecurrence, n_max: int, x) -> list:
    """Values p_0(x) .. p_{n_max}(x) by forward recurrence."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    prev = rec.p_minus_one
    cur = rec.p_zero
    raw = [cur]
    for k in range(n_max):
        nxt = (x - rec.beta(k)) * cur - _gamma_at(rec, k) * prev
        prev, cur = cur, nxt
        raw.append(cur)
    if rec.scale is None:
        return raw
    out = []
    for n, v in enumerate(raw):
        s = rec.scale(n)
        out.append(float(s) * v if isinstance(v, float) else s * v)
    return out


def exact_coeffs(rec: ThreeTermRecurrence, n: int) -> list[RationalPoly]:
    """Exact coefficient vectors of p_0 .. p_n.

    Every coefficient, seed and scale value reached must be rational; floats
    are rejected so the exact path cannot silently degrade.
    """
    def rat(v, what):
        if isinstance(v, Rational):
            return Fraction(v)
        raise TypeError(f"exact_coeffs needs rational data, got {what} = {v!r}")

    prev = RationalPoly.constant(rat(rec.p_minus_one, "p_minus_one"))
    cur = RationalPoly.constant(rat(rec.p_zero, "p_zero"))
    xpoly = RationalPoly.x()
    raw = [cur]
    for k in range(n):
        b = rat(rec.beta(k), f"beta({k})")
        g = rat(_gamma_at(rec, k), f"gamma({k})")
        nxt = (xpoly - b) * cur - g * prev
        prev, cur = cur, nxt
        raw.append(cur)
    if rec.scale is None:
        return raw
    return [p * rat(rec.scale(m), f"scale({m})") for m, p in enumerate(raw)]


def associate(rec: ThreeTermRecurrence, c) -> ThreeTermRecurrence:
    """Shift the level argument of both coefficient maps by c."""
    beta, gamma = rec.beta, rec.gamma
    return replace(rec,
                   beta=lambda k, _b=beta: _b(k + c),
                   gamma=lambda k, _g=gamma: _g(k + c))


def corecurse(rec: ThreeTermRecurrence, mu) -> ThreeTermRecurrence:
    """Add mu to beta(0) only; every other coefficient is untouched."""
    beta = rec.beta
    return replace(rec,
                   beta=lambda k, _b=beta: _b(k) + mu if k == 0 else _b(k))
