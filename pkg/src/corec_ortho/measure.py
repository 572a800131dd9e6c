"""Adaptive quadrature against the spectral densities, Gram matrices, and
Stieltjes-by-quadrature cross checks.

The integrators are generic: densities come in as black-box callables and the
domain object declares the endpoint behaviour.  Integrable endpoint
singularities are removed by exact power substitutions; the half line is cut
at a moving tail point where the bound x^p e^{-x} falls below a hundredth of
the tolerance.  No Gauss rules are generated from recurrence coefficients;
keeping the quadrature family-agnostic is what lets it referee the closed
forms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import NonIntegrableEndpoint, ToleranceNotReached


@dataclass(frozen=True)
class QuadratureDomain:
    """Integration domain plus endpoint exponents.

    kind "unit_interval": support (0, 1); endpoint_exponents are the
    integrable singularity strengths at 0 and 1 (both must exceed -1).

    kind "half_line": support (0, oo); the first exponent is the singularity
    strength at 0, the second is the polynomial growth power governing the
    x^p e^{-x} tail bound.
    """

    kind: str
    endpoint_exponents: tuple

    def __post_init__(self):
        if self.kind not in ("unit_interval", "half_line"):
            raise ValueError(f"unknown domain kind {self.kind!r}")
        if self.endpoint_exponents[0] <= -1:
            raise NonIntegrableEndpoint(
                f"left endpoint exponent {self.endpoint_exponents[0]} <= -1")
        if self.kind == "unit_interval" and self.endpoint_exponents[1] <= -1:
            raise NonIntegrableEndpoint(
                f"right endpoint exponent {self.endpoint_exponents[1]} <= -1")

    @staticmethod
    def unit_interval(e0: float, e1: float) -> "QuadratureDomain":
        return QuadratureDomain("unit_interval", (float(e0), float(e1)))

    @staticmethod
    def half_line(e0: float, tail_power: float) -> "QuadratureDomain":
        return QuadratureDomain("half_line", (float(e0), float(tail_power)))


def _tail_cut(power: float, bound: float) -> float:
    """Smallest convenient T with T^power e^{-T} < bound."""
    t = 30.0
    for _ in range(60):
        t_new = -math.log(bound) + max(power, 0.0) * math.log(max(t, 2.0))
        t_new = max(t_new, 10.0)
        if abs(t_new - t) < 1e-6:
            break
        t = t_new
    return min(t + 5.0, 800.0)


def _quad_piece(f, lo, hi, epsabs):
    val, err = quad(f, lo, hi, limit=300, epsabs=epsabs, epsrel=1e-11)
    return val, err


def integrate(f, dom: QuadratureDomain, tol: float = 1e-8) -> float:
    """Adaptive integral of f over the domain with error estimate <= tol.

    Endpoint singularities x^e are removed by substituting x = t^(1/(1+e))
    (and mirrored at the right endpoint of the unit interval); the half-line
    tail beyond the moving cut point is dropped, its bound being budgeted
    inside tol.  Raises ToleranceNotReached when the combined QUADPACK error
    estimates exceed tol.
    """
    e0, e1 = dom.endpoint_exponents
    budget = tol / 4.0
    pieces = []

    def left_sub(stop: float):
        # int_0^stop f = int_0^(stop^q) f(t^(1/q)) / q * t^(1/q - 1) dt,
        # with q = 1 + e0 cancelling the x^{e0} singularity exactly
        q = 1.0 + e0
        if abs(e0) < 1e-12:
            return (f, 0.0, stop)
        p = 1.0 / q

        def g(t):
            x = t ** p
            return f(x) * p * t ** (p - 1.0)

        return (g, 0.0, stop ** q)

    if dom.kind == "unit_interval":
        pieces.append(left_sub(0.5))
        q1 = 1.0 + e1
        if abs(e1) < 1e-12:
            pieces.append((f, 0.5, 1.0))
        else:
            p1 = 1.0 / q1

            def g1(t):
                x = 1.0 - t ** p1
                return f(x) * p1 * t ** (p1 - 1.0)

            pieces.append((g1, 0.0, 0.5 ** q1))
    else:
        cut = _tail_cut(e1, tol / 100.0)
        pieces.append(left_sub(1.0))
        pieces.append((f, 1.0, min(40.0, cut)))
        if cut > 40.0:
            pieces.append((f, 40.0, cut))

    total = 0.0
    err_total = tol / 100.0 if dom.kind == "half_line" else 0.0
    for g, lo, hi in pieces:
        val, err = _quad_piece(g, lo, hi, budget)
        total += val
        err_total += err
    if err_total > tol:
        raise ToleranceNotReached(
            f"error estimate {err_total:.3e} exceeds tolerance {tol:.3e}")
    return total


def gram_matrix(evaluator, density, dom: QuadratureDomain, n_size: int,
                tol: float = 1e-8) -> np.ndarray:
    """Matrix of int p_i p_j dphi for i, j < n_size, by quadrature.

    evaluator(n, x) returns the n-th family member at x; density is the
    normalized spectral density.  On the half line the integrand grows by a
    factor x^(i+j) over the bare density, so the tail bound is raised
    accordingly entry by entry.
    """
    out = np.zeros((n_size, n_size))
    for i in range(n_size):
        for j in range(i + 1):
            dom_ij = dom
            if dom.kind == "half_line":
                dom_ij = QuadratureDomain.half_line(
                    dom.endpoint_exponents[0],
                    dom.endpoint_exponents[1] + i + j)
            val = integrate(lambda x: evaluator(i, x) * evaluator(j, x) * density(x),
                            dom_ij, tol=tol)
            out[i, j] = out[j, i] = val
    return out


def stieltjes_by_quadrature(density, dom: QuadratureDomain, pt: float,
                            tol: float = 1e-8) -> float:
    """int dphi(x) / (x + pt) by quadrature; the closed forms' referee."""
    return integrate(lambda x: density(x) / (x + pt), dom, tol=tol)
