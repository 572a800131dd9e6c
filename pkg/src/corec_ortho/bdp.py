"""Birth-death processes with the Laguerre/Jacobi rate families, including
killing at state 0, solved two independent ways: the spectral integral
against the matching polynomial family's measure, and a seeded
continuous-time Markov chain simulator.

Rate tables
-----------
Laguerre: lambda_n = n + alpha + c + 1, mu_n = n + c (n >= 1),
mu_0 = c - mu.  Jacobi: the rational rates

    lambda_n = 2 (n+c+a+b+1)(n+c+b+1) / ((2n+2c+a+b+1)(2n+2c+a+b+2)),
    mu_n     = 2 (n+c)(n+c+a)         / ((2n+2c+a+b)(2n+2c+a+b+1)),

with mu_0 = 2c(c+a)/((2c+a+b)(2c+a+b+1)) - mu.  mu_0 = 0 is the honest
(probability-conserving) process; positive mu_0 feeds an absorbing cemetery.

The spectral route: p_mn(t) = pi_n int e^{-xt} Q_m(x) Q_n(x) dphi(x) with
pi_n the potential coefficients and dphi the normalized spectral measure of
the polynomial family at the matching (c, mu).  The proportionality constant
is fixed by the standard potential-coefficient weighting and is validated
against simulation, not asserted.  For the Jacobi rates the spectral
variable is twice the shifted one (the rates are bounded by 1, putting the
spectrum in [0, 2]).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParams, InvalidTrialCount, NegativeRate, OutOfValidityDomain
from .jacobi import CAJParams, caj_density, density_domain
from .laguerre import CALParams, cal_density
from .measure import QuadratureDomain, integrate


@dataclass(frozen=True)
class BDRates:
    """Birth/death/killing rate tables plus potential coefficients."""

    family: str
    params: object

    def birth(self, n: int) -> float:
        if self.family == "laguerre":
            p = self.params
            return n + float(p.alpha) + float(p.c) + 1.0
        p = self.params
        a, b, c = float(p.alpha), float(p.beta), float(p.c)
        m = 2 * c + a + b
        return 2 * (n + c + a + b + 1) * (n + c + b + 1) / ((2 * n + m + 1) * (2 * n + m + 2))

    def death(self, n: int) -> float:
        """Death rate for n >= 1."""
        if n < 1:
            raise InvalidParams("death rate defined for n >= 1; state 0 kills at kill0")
        if self.family == "laguerre":
            return n + float(self.params.c)
        p = self.params
        a, b, c = float(p.alpha), float(p.beta), float(p.c)
        m = 2 * c + a + b
        return 2 * (n + c) * (n + c + a) / ((2 * n + m) * (2 * n + m + 1))

    @property
    def kill0(self) -> float:
        if self.family == "laguerre":
            return float(self.params.c) - float(self.params.mu)
        p = self.params
        a, b, c = float(p.alpha), float(p.beta), float(p.c)
        m = 2 * c + a + b
        return 2 * c * (c + a) / (m * (m + 1)) - float(p.mu)

    def potential(self, n: int) -> float:
        """pi_n = prod_{k<n} lambda_k / mu_{k+1}; pi_0 = 1."""
        out = 1.0
        for k in range(n):
            out *= self.birth(k) / self.death(k + 1)
        return out


def make_rates(family: str, params) -> BDRates:
    """Rate tables for the named family; validates positivity of the birth
    and death rates (the killing rate may be negative, in which case only the
    spectral route is available)."""
    if family not in ("laguerre", "jacobi"):
        raise InvalidParams(f"unknown rate family {family!r}")
    if family == "laguerre" and not isinstance(params, CALParams):
        raise InvalidParams("laguerre rates need CALParams")
    if family == "jacobi" and not isinstance(params, CAJParams):
        raise InvalidParams("jacobi rates need CAJParams")
    rates = BDRates(family, params)
    for n in range(0, 50):
        if rates.birth(n) <= 0:
            raise NegativeRate(f"birth rate not positive at level {n}")
        if n >= 1 and rates.death(n) <= 0:
            raise NegativeRate(f"death rate not positive at level {n}")
    return rates


def bd_polynomials(rates: BDRates, n_max: int, x: float) -> list:
    """Karlin-McGregor polynomials: Q_0 = 1 and

        -x Q_n = lambda_n Q_{n+1} + mu_n Q_{n-1} - (lambda_n + mu_n) Q_n,

    with mu_0 the killing rate at n = 0.  Each Q_n is a level-dependent
    constant times the matching family member, the constant carrying no x
    dependence (the bridge invariant tested in the suite).
    """
    vals = [1.0]
    prev = 0.0
    for n in range(n_max):
        lam = rates.birth(n)
        mu_n = rates.kill0 if n == 0 else rates.death(n)
        cur = vals[-1]
        nxt = ((lam + mu_n - x) * cur - mu_n * prev) / lam
        prev = cur
        vals.append(nxt)
    return vals


@dataclass(frozen=True)
class TransientResult:
    probability: float
    method: str
    stderr: float | None = None


def _spectral_setup(rates: BDRates):
    p = rates.params
    if rates.family == "laguerre":
        if not p.measure_validity():
            raise OutOfValidityDomain(f"spectral route needs measure validity, got {p}")
        a, c = float(p.alpha), float(p.c)
        dom = QuadratureDomain.half_line(a, a + 2 * c)
        density = lambda x: cal_density(p, x)  # noqa: E731
        spectral_x = lambda y: y  # noqa: E731
        return dom, density, spectral_x
    if not p.measure_validity():
        raise OutOfValidityDomain(f"spectral route needs measure validity, got {p}")
    dom = density_domain(p)
    density = lambda y: caj_density(p, y)  # noqa: E731
    spectral_x = lambda y: 2.0 * y  # noqa: E731
    return dom, density, spectral_x


def km_transition(rates: BDRates, m: int, n: int, t: float,
                  tol: float = 1e-8) -> TransientResult:
    """Transient probability p_mn(t) by the spectral integral
    pi_n int e^{-xt} Q_m(x) Q_n(x) dphi(x)."""
    if t < 0:
        raise ValueError("t must be >= 0")
    dom, density, spectral_x = _spectral_setup(rates)
    if dom.kind == "half_line":
        # the polynomial factor raises the integrand's tail growth
        dom = QuadratureDomain.half_line(dom.endpoint_exponents[0],
                                         dom.endpoint_exponents[1] + m + n)
    order = max(m, n)
    pi_n = rates.potential(n)

    def integrand(y):
        x = spectral_x(y)
        q = bd_polynomials(rates, order, x)
        return math.exp(-x * t) * q[m] * q[n] * density(y)

    val = pi_n * integrate(integrand, dom, tol=tol)
    return TransientResult(val, "spectral")


def mc_distribution(rates: BDRates, m: int, t: float, trials: int, seed: int,
                    n_cap: int = 400):
    """Empirical state distribution at time t from `trials` simulated paths
    started at state m.

    Returns (probabilities over states 0..n_cap-1, cemetery fraction).
    Randomness comes from a counter-based generator keyed by the seed; each
    trial consumes its own row of the pregenerated blocks, so results are
    bitwise independent of evaluation order.
    """
    if not isinstance(trials, int) or trials <= 0:
        raise InvalidTrialCount(f"trials must be a positive integer, got {trials}")
    kill0 = rates.kill0
    if kill0 < 0:
        raise NegativeRate("negative killing rate is not a simulable process")
    probs = np.zeros(n_cap)
    if t == 0:
        probs[m] = 1.0
        return probs, 0.0

    lam = np.array([rates.birth(k) for k in range(n_cap)])
    mu = np.array([kill0] + [rates.death(k) for k in range(1, n_cap)])

    rng = np.random.Generator(np.random.Philox(key=seed))
    state = np.full(trials, m, dtype=np.int64)
    clock = np.zeros(trials)
    parked = np.zeros(trials, dtype=bool)  # cemetery
    frozen = np.zeros(trials, dtype=bool)  # reached time t in a live state

    block_cols = 32
    uni = rng.random((trials, 2, block_cols))
    col = 0
    while True:
        active = ~(parked | frozen)
        if not active.any():
            break
        if col == block_cols:
            uni = rng.random((trials, 2, block_cols))
            col = 0
        u_wait = uni[:, 0, col]
        u_branch = uni[:, 1, col]
        col += 1
        total = lam[state] + mu[state]
        wait = -np.log(np.maximum(u_wait, 1e-300)) / total
        clock = np.where(active, clock + wait, clock)
        newly_frozen = active & (clock >= t)
        frozen |= newly_frozen
        jumping = active & ~newly_frozen
        if jumping.any():
            up = u_branch < lam[state] / total
            dn = jumping & ~up
            state = np.where(jumping & up, state + 1, state)
            parked |= dn & (state == 0)
            state = np.where(dn & (state > 0), state - 1, state)
            if (state >= n_cap - 1).any():
                raise InvalidParams("simulation exceeded the state cap")
    live = ~parked
    counts = np.bincount(state[live], minlength=n_cap)
    probs = counts / trials
    return probs, float(parked.sum()) / trials


def mc_transition(rates: BDRates, m: int, n: int, t: float, trials: int,
                  seed: int) -> TransientResult:
    """Monte Carlo estimate of p_mn(t) with the binomial standard error."""
    probs, _cem = mc_distribution(rates, m, t, trials, seed)
    p_hat = float(probs[n])
    stderr = math.sqrt(max(p_hat * (1 - p_hat), 1e-12) / trials)
    return TransientResult(p_hat, "monte_carlo", stderr)
