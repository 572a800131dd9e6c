"""Exact-rational construction of the fourth-order (and factored 2+2)
differential operators annihilating the polynomial families, plus residual
verification.

The coefficient tables live in ode_tables.json as arithmetic expressions over
the family parameters, the degree n, and the variable x.  They are parsed
with a restricted expression evaluator into RationalPoly objects; every
derivative taken here is a formal coefficient shift, never a numeric stencil.
The transcription validator is the residual suite: apply the operator to the
exact family member (built independently from the recurrence) and demand the
identically zero polynomial.
"""
from __future__ import annotations

import ast
import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from .errors import InvalidParams, UnsupportedFamily, UnsupportedKind
from .hypergeom import hyp, pfq, pfq_derivative
from .jacobi import CAJParams, caj_recurrence
from .laguerre import CALParams, cal_recurrence
from .recurrence import RationalPoly, exact_coeffs

FAMILIES = (
    "cal_general",
    "laguerre_associated",
    "laguerre_zero_related",
    "laguerre_dual",
    "jacobi_associated",
    "jacobi_zero_related",
    "jacobi_zero_related_dual",
    "jacobi_new_case",
    "jacobi_new_case_dual",
)

FACTORED_KINDS = ("corecursive_laguerre", "corecursive_jacobi")


@dataclass(frozen=True)
class OdeCoefficients:
    """Five exact polynomial coefficients c4 .. c0 of a fourth-order operator,
    tagged with the family, degree and parameter bundle that built them."""

    c4: RationalPoly
    c3: RationalPoly
    c2: RationalPoly
    c1: RationalPoly
    c0: RationalPoly
    family: str = ""
    n: int = 0
    params: tuple = ()

    def as_tuple(self):
        return (self.c4, self.c3, self.c2, self.c1, self.c0)


@dataclass(frozen=True)
class FactoredOde:
    """outer o inner composition of two second-order operators."""

    outer: tuple
    inner: tuple
    kind: str = ""
    n: int = 0
    params: tuple = ()


# --------------------------------------------------------------------------
# restricted expression evaluation
# --------------------------------------------------------------------------

def _eval_node(node, env):
    if isinstance(node, ast.Expression):
        return _eval_node(node.body, env)
    if isinstance(node, ast.Constant):
        if isinstance(node.value, int):
            return Fraction(node.value)
        raise ValueError(f"only integer literals allowed, got {node.value!r}")
    if isinstance(node, ast.Name):
        try:
            return env[node.id]
        except KeyError as exc:
            raise ValueError(f"unknown symbol {node.id!r}") from exc
    if isinstance(node, ast.UnaryOp):
        val = _eval_node(node.operand, env)
        if isinstance(node.op, ast.USub):
            return -val
        if isinstance(node.op, ast.UAdd):
            return val
        raise ValueError("unsupported unary operator")
    if isinstance(node, ast.BinOp):
        left = _eval_node(node.left, env)
        right = _eval_node(node.right, env)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            if isinstance(right, RationalPoly):
                raise ValueError("division by a polynomial is not allowed")
            return left / right
        if isinstance(node.op, ast.Pow):
            if not isinstance(right, Fraction) or right.denominator != 1 or right < 0:
                raise ValueError("exponent must be a nonnegative integer")
            return left ** int(right)
        raise ValueError("unsupported binary operator")
    raise ValueError(f"unsupported syntax element {type(node).__name__}")


def eval_table_expr(expr: str, env: dict):
    """Evaluate one table expression over Fractions and RationalPolys."""
    return _eval_node(ast.parse(expr, mode="eval"), env)


_tables_cache: dict = {}


def load_tables(path: str | None = None) -> dict:
    """Load (and cache) the coefficient tables; path overrides the packaged
    resource, which is how the negative-control tests inject corrupted
    tables."""
    key = path or "<packaged>"
    if key not in _tables_cache:
        if path is None:
            text = resources.files("corec_ortho").joinpath("ode_tables.json").read_text()
        else:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        _tables_cache[key] = json.loads(text)
    return _tables_cache[key]


def _build_env(entry: dict, params: dict, n: int) -> dict:
    env = {"x": RationalPoly.x(), "n": Fraction(n)}
    for name in entry["parameters"]:
        if name not in params:
            raise InvalidParams(f"family needs parameter {name!r}")
        env[name] = Fraction(params[name])
    for name, expr in entry.get("atoms", {}).items():
        env[name] = eval_table_expr(expr, env)
    return env


def _as_poly(value) -> RationalPoly:
    if isinstance(value, RationalPoly):
        return value
    return RationalPoly.constant(value)


def build_ode(family: str, params: dict, n: int,
              tables_path: str | None = None) -> OdeCoefficients:
    """Exact coefficients of the family's fourth-order operator at degree n.

    params maps parameter names to exact rationals; any family constraint
    (for example the first-shift value of the zero-related case) is already
    built into the table and must not be passed.
    """
    tables = load_tables(tables_path)
    try:
        entry = tables["families"][family]
    except KeyError as exc:
        raise UnsupportedFamily(f"unknown family {family!r}") from exc
    env = _build_env(entry, params, n)
    cs = {key: _as_poly(eval_table_expr(expr, env))
          for key, expr in entry["coefficients"].items()}
    return OdeCoefficients(cs["c4"], cs["c3"], cs["c2"], cs["c1"], cs["c0"],
                           family=family, n=n,
                           params=tuple(sorted((k, Fraction(v)) for k, v in params.items())))


def build_factored(kind: str, params: dict, n: int,
                   tables_path: str | None = None) -> FactoredOde:
    """Exact second-order pair (outer, inner) of a factored operator."""
    tables = load_tables(tables_path)
    try:
        entry = tables["factored"][kind]
    except KeyError as exc:
        raise UnsupportedKind(f"unknown factored kind {kind!r}") from exc
    env = _build_env(entry, params, n)
    outer = tuple(_as_poly(eval_table_expr(entry["outer"][k], env))
                  for k in ("q2", "q1", "q0"))
    inner = tuple(_as_poly(eval_table_expr(entry["inner"][k], env))
                  for k in ("r2", "r1", "r0"))
    return FactoredOde(outer, inner, kind=kind, n=n,
                       params=tuple(sorted((k, Fraction(v)) for k, v in params.items())))


# --------------------------------------------------------------------------
# application
# --------------------------------------------------------------------------

def apply_ode(ode: OdeCoefficients, poly: RationalPoly) -> RationalPoly:
    """c4 p'''' + c3 p''' + c2 p'' + c1 p' + c0 p in exact arithmetic."""
    total = RationalPoly(())
    for order, coeff in zip((4, 3, 2, 1, 0), ode.as_tuple()):
        total = total + coeff * poly.derivative(order)
    return total


def apply_second_order(op: tuple, poly: RationalPoly) -> RationalPoly:
    q2, q1, q0 = op
    return q2 * poly.derivative(2) + q1 * poly.derivative(1) + q0 * poly


def apply_factored(fode: FactoredOde, poly: RationalPoly) -> RationalPoly:
    return apply_second_order(fode.outer, apply_second_order(fode.inner, poly))


def family_member(family: str, params: dict, n: int) -> RationalPoly:
    """Exact polynomial the family's operator annihilates (monic
    normalization; ODE residuals are normalization-free), built from the
    recurrence route."""
    if family in ("cal_general", "laguerre_associated",
                  "laguerre_zero_related", "laguerre_dual"):
        alpha = Fraction(params["alpha"])
        c = Fraction(params["c"])
        if family == "cal_general":
            mu = Fraction(params["mu"])
        elif family == "laguerre_associated":
            mu = Fraction(0)
        elif family == "laguerre_zero_related":
            mu = c
        else:
            mu = c + alpha
        rec = cal_recurrence(CALParams(alpha, c, mu), normalized=False)
        return exact_coeffs(rec, n)[n]
    if family in ("jacobi_associated", "jacobi_zero_related",
                  "jacobi_zero_related_dual", "jacobi_new_case",
                  "jacobi_new_case_dual"):
        alpha = Fraction(params["alpha"])
        beta = Fraction(params["beta"])
        c = Fraction(params["c"])
        m = 2 * c + alpha + beta
        mu = {
            "jacobi_associated": Fraction(0),
            "jacobi_zero_related": 2 * c * (c + alpha) / (m * (m + 1)),
            "jacobi_zero_related_dual": 2 * (c + beta) * (c + alpha + beta) / (m * (m + 1)),
            "jacobi_new_case": -2 * c * (c + beta) / (m * (m + 1)),
            "jacobi_new_case_dual": -2 * (c + alpha) * (c + alpha + beta) / (m * (m + 1)),
        }[family]
        rec = caj_recurrence(CAJParams(alpha, beta, c, mu), normalized=False)
        return exact_coeffs(rec, n)[n]
    raise UnsupportedFamily(f"unknown family {family!r}")


def factored_member(kind: str, params: dict, n: int) -> RationalPoly:
    """Exact polynomial annihilated by a factored operator.

    The co-recursive Jacobi factorization lives in the original [-1, 1]
    variable, so the shifted-recurrence member is recomposed through
    x -> (1+x)/2.
    """
    if kind == "corecursive_laguerre":
        rec = cal_recurrence(CALParams(Fraction(params["alpha"]), Fraction(0),
                                       Fraction(params["mu"])), normalized=False)
        return exact_coeffs(rec, n)[n]
    if kind == "corecursive_jacobi":
        rec = caj_recurrence(CAJParams(Fraction(params["alpha"]),
                                       Fraction(params["beta"]), Fraction(0),
                                       Fraction(params["mu"])), normalized=False)
        shifted = exact_coeffs(rec, n)[n]
        return shifted.compose_affine(Fraction(1, 2), Fraction(1, 2))
    raise UnsupportedKind(f"unknown factored kind {kind!r}")


def residual_is_zero(family: str, params: dict, n: int,
                     tables_path: str | None = None) -> bool:
    """The module's headline check: the operator annihilates the exact
    member polynomial."""
    ode = build_ode(family, params, n, tables_path=tables_path)
    member = family_member(family, params, n)
    return apply_ode(ode, member).is_zero()


# --------------------------------------------------------------------------
# second-order hypergeometric equation checks
# --------------------------------------------------------------------------

HYP_ODE2_KINDS = ("confluent_laguerre", "twof2_shifted", "gauss_jacobi",
                  "threef2_shifted")


def hyp_ode2_residual(kind: str, params: dict, x_grid) -> float:
    """Max absolute residual of the printed second-order equations over the
    grid, all derivatives taken by exact series term shifts."""
    import math

    worst = 0.0
    for x in x_grid:
        x = float(x)
        if kind == "confluent_laguerre":
            a, c, n = (float(params["alpha"]), float(params["c"]), int(params["n"]))
            nums, dens = [-n - c - a], [1 - a]
            f = float(pfq(hyp(nums, dens, x)))
            f1 = pfq_derivative(nums, dens, x, 1)
            f2 = pfq_derivative(nums, dens, x, 2)
            e = math.exp(-x)
            y, y1, y2 = e * f, e * (f1 - f), e * (f2 - 2 * f1 + f)
            res = x * y2 + (1 - a + x) * y1 + (1 + n + c) * y
        elif kind == "twof2_shifted":
            b, d, ee = float(params["b"]), float(params["d"]), float(params["e"])
            nums, dens = [b, ee + 1], [d, ee]
            y = float(pfq(hyp(nums, dens, x)))
            y1 = pfq_derivative(nums, dens, x, 1)
            y2 = pfq_derivative(nums, dens, x, 2)
            res = (x * ((b - ee) * x + ee * (d - ee - 1)) * y2
                   - ((b - ee) * x ** 2 + (ee * (2 * d - ee - 2) + b * (1 - d)) * x
                      - ee * d * (d - ee - 1)) * y1
                   - b * ((b - ee) * x + (ee + 1) * (d - ee - 1)) * y)
        elif kind == "gauss_jacobi":
            a, b, c, n = (float(params["alpha"]), float(params["beta"]),
                          float(params["c"]), int(params["n"]))
            nums, dens = [-n - c, n + c + a + b + 1], [1 + a]
            u = 1.0 - x
            y = float(pfq(hyp(nums, dens, u)))
            y1 = -pfq_derivative(nums, dens, u, 1)
            y2 = pfq_derivative(nums, dens, u, 2)
            res = (x * (1 - x) * y2 + (1 + b - (a + b + 2) * x) * y1
                   + (n + c) * (n + c + a + b + 1) * y)
        elif kind == "threef2_shifted":
            a, b, d, ee = (float(params["a"]), float(params["b"]),
                           float(params["d"]), float(params["e"]))
            nums, dens = [a, b, ee + 1], [d, ee]
            y = float(pfq(hyp(nums, dens, x)))
            y1 = pfq_derivative(nums, dens, x, 1)
            y2 = pfq_derivative(nums, dens, x, 2)
            res = (x * (x - 1) * ((a - ee) * (b - ee) * x + ee * (d - ee - 1)) * y2
                   + ((a - ee) * (b - ee) * (a + b + 1) * x ** 2
                      + (ee * (a + b + 1) * (2 * d - ee - 2) - d * (a * b + ee * ee) + a * b) * x
                      + d * ee * (ee - d + 1)) * y1
                   + a * b * ((a - ee) * (b - ee) * x + (ee + 1) * (d - ee - 1)) * y)
        else:
            raise UnsupportedKind(f"unknown second-order check {kind!r}")
        worst = max(worst, abs(res))
    return worst


def _terminating_poly(nums, dens, var_is_one_minus_x: bool = False) -> RationalPoly:
    """Exact polynomial of a terminating series, optionally recomposed from
    the 1-x argument back to x."""
    m = None
    for a in nums:
        a = Fraction(a)
        if a <= 0 and a.denominator == 1:
            m = int(-a) if m is None else min(m, int(-a))
    if m is None:
        raise ValueError("series does not terminate")
    coeffs = []
    term = Fraction(1)
    for j in range(m + 1):
        coeffs.append(term)
        if j < m:
            factor = Fraction(1, j + 1)
            for a in nums:
                factor *= Fraction(a) + j
            for d in dens:
                factor /= Fraction(d) + j
            term *= factor
    poly = RationalPoly.from_coeffs(coeffs)
    if var_is_one_minus_x:
        poly = poly.compose_affine(Fraction(-1), Fraction(1))
    return poly


def hyp_ode2_exact_residual(kind: str, params: dict) -> RationalPoly:
    """Exact residual polynomial for terminating instances of the
    second-order checks, in rational arithmetic."""
    x = RationalPoly.x()
    if kind == "gauss_jacobi":
        a, b, c, n = (Fraction(params["alpha"]), Fraction(params["beta"]),
                      Fraction(params["c"]), int(params["n"]))
        y = _terminating_poly([-n - c, n + c + a + b + 1], [1 + a],
                              var_is_one_minus_x=True)
        return (x * (1 - x) * y.derivative(2)
                + ((1 + b) - (a + b + 2) * x) * y.derivative(1)
                + (n + c) * (n + c + a + b + 1) * y)
    if kind == "twof2_shifted":
        b, d, ee = Fraction(params["b"]), Fraction(params["d"]), Fraction(params["e"])
        y = _terminating_poly([b, ee + 1], [d, ee])
        return (x * ((b - ee) * x + ee * (d - ee - 1)) * y.derivative(2)
                - ((b - ee) * x ** 2 + (ee * (2 * d - ee - 2) + b * (1 - d)) * x
                   - ee * d * (d - ee - 1)) * y.derivative(1)
                - b * ((b - ee) * x + (ee + 1) * (d - ee - 1)) * y)
    raise UnsupportedKind(f"no exact terminating form for {kind!r}")
