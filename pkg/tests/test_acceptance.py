"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines as they
complete.  Tolerances are pinned here and nowhere else.
"""
import math
import time
from fractions import Fraction as F

import numpy as np
import pytest

from corec_ortho import bdp as bdp_mod
from corec_ortho import jacobi as jac
from corec_ortho import laguerre as lag
from corec_ortho import measure as meas
from corec_ortho import ode4
from corec_ortho.hypergeom import hyp, pfq
from corec_ortho.recurrence import RationalPoly, eval_sequence, exact_coeffs


def report(tag, ok, detail):
    line = f"{tag}: {'PASS' if ok else 'FAIL'} ({detail})"
    print(line)
    assert ok, line


def test_criterion_01_cross_route_agreement():
    t0 = time.time()
    rng = np.random.default_rng(101)
    worst_l = 0.0
    count = 0
    while count < 50:
        alpha = rng.uniform(-0.8, 1.5)
        c = rng.uniform(0.0, 2.5)
        mu = rng.uniform(-1.0, 1.0) * min(1.0, c + 0.2)
        p = lag.CALParams(alpha, c, mu)
        if not p.positivity_domain() or alpha + c <= -1:
            continue
        count += 1
        n = int(rng.integers(1, 13))
        x = rng.uniform(0.05, 10.0)
        seq = eval_sequence(lag.cal_recurrence(p), n, x)
        scale = max(max(abs(v) for v in seq), 1e-12)
        worst_l = max(worst_l,
                      abs(seq[n] - lag.cal_explicit(p, n, x)) / scale,
                      abs(seq[n] - lag.cal_hyp(p, n, x)) / scale)
    worst_j = 0.0
    count = 0
    while count < 50:
        alpha = rng.uniform(-0.5, 1.2)
        beta = rng.uniform(-0.3, 1.2)
        c = rng.uniform(0.05, 2.0)
        if abs(alpha) < 0.05 or abs(2 * c + alpha + beta) < 0.1 or c + beta <= 0.05:
            continue
        m = 2 * c + alpha + beta
        mu = rng.uniform(-2 * c * (c + beta) / (m * (m + 1)), 0.5)
        p = jac.CAJParams(alpha, beta, c, mu)
        count += 1
        n = int(rng.integers(1, 11))
        x = rng.uniform(0.05, 0.95)
        seq = eval_sequence(jac.caj_recurrence(p), n, x)
        scale = max(max(abs(v) for v in seq), 1e-12)
        worst_j = max(worst_j,
                      abs(seq[n] - jac.caj_explicit(p, n, x)) / scale,
                      abs(seq[n] - jac.caj_hyp(p, n, x)) / scale)
    dt = time.time() - t0
    ok = worst_l <= 1e-9 and worst_j <= 1e-8 and dt < 30
    report("ACCEPT-01 cross-route agreement", ok,
           f"worst laguerre {worst_l:.2e} <= 1e-9, jacobi {worst_j:.2e} <= 1e-8, "
           f"{dt:.1f}s < 30s")


LAGUERRE_ODE_DRAWS = [
    {"alpha": F(1, 3), "c": F(1, 2)},
    {"alpha": F(2, 5), "c": F(6, 5)},
    {"alpha": F(-1, 4), "c": F(3, 2)},
]
JACOBI_ODE_DRAWS = [
    {"alpha": F(3, 10), "beta": F(3, 5), "c": F(4, 5)},
    {"alpha": F(2, 5), "beta": F(1, 5), "c": F(7, 5)},
    {"alpha": F(-1, 4), "beta": F(1, 2), "c": F(3, 2)},
]


def test_criterion_02_exact_ode_residuals():
    t0 = time.time()
    failures = []
    for family in ode4.FAMILIES:
        if family == "cal_general":
            draws = [dict(d, mu=m) for d, m in
                     zip(LAGUERRE_ODE_DRAWS, (F(1, 5), F(3, 10), F(1, 7)))]
        elif family.startswith("laguerre"):
            draws = LAGUERRE_ODE_DRAWS
        else:
            draws = JACOBI_ODE_DRAWS
        for params in draws:
            for n in range(0, 9):
                if not ode4.residual_is_zero(family, params, n):
                    failures.append((family, params, n))
    factored_draws = {
        "corecursive_laguerre": [{"alpha": F(1, 3), "mu": F(1, 5)},
                                 {"alpha": F(2, 5), "mu": F(-1, 4)},
                                 {"alpha": F(-1, 4), "mu": F(2, 7)}],
        "corecursive_jacobi": [{"alpha": F(3, 10), "beta": F(3, 5), "mu": F(1, 10)},
                               {"alpha": F(2, 5), "beta": F(1, 5), "mu": F(-1, 7)},
                               {"alpha": F(-1, 4), "beta": F(1, 2), "mu": F(2, 9)}],
    }
    for kind, draws in factored_draws.items():
        for params in draws:
            for n in range(0, 9):
                fode = ode4.build_factored(kind, params, n)
                member = ode4.factored_member(kind, params, n)
                if not ode4.apply_factored(fode, member).is_zero():
                    failures.append((kind, params, n))
    dt = time.time() - t0
    ok = not failures and dt < 120
    report("ACCEPT-02 exact operator residuals", ok,
           f"{len(failures)} nonzero residuals across 11 operator families, "
           f"{dt:.1f}s < 120s")


def test_criterion_03_hahn_coefficients_verbatim():
    x = RationalPoly.x()
    ok = True
    for n in (0, 1, 3, 6):
        ode = ode4.build_ode("laguerre_associated",
                             {"alpha": F(1, 3), "c": F(1, 2)}, n)
        ok &= ode.c4 == x ** 2
        ok &= ode.c3 == 5 * x
        ok &= ode.c0 == RationalPoly.constant(n * (n + 2))
    for n in (0, 2, 5):
        params = {"alpha": F(3, 10), "beta": F(3, 5), "c": F(4, 5)}
        ode = ode4.build_ode("jacobi_associated", params, n)
        cc = 2 * F(4, 5) + F(3, 10) + F(3, 5)
        a_atom = (cc + n + 1) * (cc + n - 1)
        ok &= ode.c4 == (x * (x - 1)) ** 2
        ok &= ode.c3 == 5 * x * (x - 1) * (2 * x - 1)
        ok &= ode.c0 == RationalPoly.constant(n * (n + 2) * a_atom)
    report("ACCEPT-03 reference coefficients verbatim", ok,
           "structural equality of c4, c3, c0 against the data file")


def test_criterion_04_measure_audits():
    t0 = time.time()
    worst_norm = 0.0
    worst_off = 0.0
    worst_diag = 0.0
    for (alpha, c, mu) in ((0.5, 1.0, 0.5), (1.0, 2.0, 0.5)):
        p = lag.CALParams(alpha, c, mu)
        dom = meas.QuadratureDomain.half_line(alpha, alpha + 2 * c)
        mass = meas.integrate(lambda x: lag.cal_density(p, x), dom, tol=1e-7)
        worst_norm = max(worst_norm, abs(mass - 1.0))
        rec = lag.cal_recurrence(p)

        def evaluator(n, xx, rec=rec):
            return eval_sequence(rec, n, xx)[n]

        gram = meas.gram_matrix(evaluator, lambda x: lag.cal_density(p, x),
                                dom, 6, tol=1e-7)
        for i in range(6):
            for j in range(6):
                if i == j:
                    worst_diag = max(worst_diag,
                                     abs(gram[i, i] - float(lag.cal_norm(p, i))))
                else:
                    worst_off = max(worst_off, abs(gram[i, j]))
    dt = time.time() - t0
    ok = worst_norm <= 1e-6 and worst_off <= 1e-6 and worst_diag <= 1e-6 and dt < 60
    report("ACCEPT-04 measure audits", ok,
           f"normalization {worst_norm:.2e}, off-diag {worst_off:.2e}, "
           f"diagonal {worst_diag:.2e}, all <= 1e-6, {dt:.1f}s < 60s")


def test_criterion_05_stieltjes():
    pl = lag.CALParams(0.5, 1.0, 0.5)
    dom_l = meas.QuadratureDomain.half_line(0.5, 2.5)
    pj = jac.CAJParams(0.3, 0.6, 0.8, 0.05)
    dom_j = jac.density_domain(pj)
    worst_q = 0.0
    worst_forms = 0.0
    worst_ric = 0.0
    for pt in (0.5, 2.0, 10.0):
        closed = lag.cal_stieltjes(pl, pt)
        by_quad = meas.stieltjes_by_quadrature(
            lambda x: lag.cal_density(pl, x), dom_l, pt, tol=1e-8)
        worst_q = max(worst_q, abs(closed - by_quad))
        composed = jac.caj_stieltjes(pj, pt, form="composed")
        compact = jac.caj_stieltjes(pj, pt, form="compact")
        worst_forms = max(worst_forms, abs(composed - compact))
        by_quad_j = meas.stieltjes_by_quadrature(
            lambda x: jac.caj_density(pj, x), dom_j, pt, tol=1e-8)
        worst_q = max(worst_q, abs(composed - by_quad_j))
    for pt in (0.5, 1.0, 5.0):
        worst_ric = max(worst_ric, lag.riccati_residual(pl, pt))
    ok = worst_q <= 1e-6 and worst_ric <= 1e-6 and worst_forms <= 1e-10
    report("ACCEPT-05 Stieltjes transforms", ok,
           f"closed-vs-quadrature {worst_q:.2e} <= 1e-6, Riccati "
           f"{worst_ric:.2e} <= 1e-6, two printed forms {worst_forms:.2e} <= 1e-10")


def test_criterion_06_generating_functions():
    pl = lag.CALParams(0.5, 1.0, 0.5)
    worst = 0.0
    for w in (0.15, 0.3):
        closed = lag.cal_generating(pl, 1.0, w)
        vals = eval_sequence(lag.cal_recurrence(pl), 60, 1.0)
        series = sum(w ** n * vals[n] for n in range(61))
        worst = max(worst, abs(closed - series))
    pj = jac.CAJParams(0.3, 0.6, 0.8, 0.05)
    for w in (0.2, 0.3):
        closed = jac.caj_generating(pj, 0.4, w)
        series = jac.caj_generating_series(pj, 0.4, w, 55)
        worst = max(worst, abs(closed - series))
    exact_one = lag.cal_generating(pl, 1.0, 0.0) == 1.0 \
        and jac.caj_generating(pj, 0.4, 0.0) == 1.0
    stencil = lag.generating_ode_residual(pl, 1.0, 0.3)
    ok = worst <= 1e-7 and exact_one and stencil <= 1e-6
    report("ACCEPT-06 generating functions", ok,
           f"closed-vs-series {worst:.2e} <= 1e-7, F(x,0)=1 {exact_one}, "
           f"stencil residual {stencil:.2e} <= 1e-6")


def test_criterion_07_symmetries():
    # exact invariance of monic sequences and operator coefficients
    p = lag.CALParams(F(2, 5), F(6, 5), F(3, 10))
    q = lag.CALParams(-p.alpha, p.c + p.alpha, p.mu)
    monic_ok = exact_coeffs(lag.cal_recurrence(p, normalized=False), 8) == \
        exact_coeffs(lag.cal_recurrence(q, normalized=False), 8)
    ode_ok = ode4.build_ode(
        "cal_general", {"alpha": F(2, 5), "c": F(6, 5), "mu": F(3, 10)}, 5
    ).as_tuple() == ode4.build_ode(
        "cal_general", {"alpha": -F(2, 5), "c": F(6, 5) + F(2, 5), "mu": F(3, 10)}, 5
    ).as_tuple()
    pj = jac.CAJParams(F(3, 10), F(3, 5), F(4, 5), F(1, 10))
    r1, r2 = jac.caj_recurrence(pj), jac.caj_recurrence(jac.t_prime(pj))
    rec_ok = all(r1.beta(k) == r2.beta(k) and r1.gamma(k) == r2.gamma(k)
                 for k in range(9))
    pjf = jac.CAJParams(0.3, 0.6, 0.8, 0.0)
    pp1 = abs(eval_sequence(jac.caj_recurrence(pjf), 4, 0.37)[4]
              - eval_sequence(jac.caj_recurrence(jac.t_prime(pjf)), 4, 0.37)[4])
    refl = jac.CAJParams(0.6, 0.3, 0.8, 0.0)
    pp2 = abs(eval_sequence(jac.caj_recurrence(pjf), 4, 0.37)[4]
              - eval_sequence(jac.caj_recurrence(refl), 4, 1 - 0.37)[4])
    # zero-related members break the symmetry at the monic level
    zr = lag.CALParams(F(1, 2), F(1), F(1))
    zr_img = lag.CALParams(-F(1, 2), F(3, 2), F(3, 2))
    broken = exact_coeffs(lag.cal_recurrence(zr, normalized=False), 3)[3] != \
        exact_coeffs(lag.cal_recurrence(zr_img, normalized=False), 3)[3]
    ok = monic_ok and ode_ok and rec_ok and pp1 <= 1e-12 and pp2 <= 1e-12 and broken
    report("ACCEPT-07 symmetries", ok,
           f"monic exact {monic_ok}, operator exact {ode_ok}, recurrence exact "
           f"{rec_ok}, identities {max(pp1, pp2):.2e} <= 1e-12, breaking {broken}")


def test_criterion_08_limits():
    # displacement -> 0 and level-shift -> 0 reductions
    worst = 0.0
    p_small_mu = lag.CALParams(0.4, 1.1, 1e-12)
    p_zero_mu = lag.CALParams(0.4, 1.1, 0.0)
    for n in (2, 4):
        a = eval_sequence(lag.cal_recurrence(p_small_mu), n, 2.0)[n]
        b = eval_sequence(lag.cal_recurrence(p_zero_mu), n, 2.0)[n]
        worst = max(worst, abs(a - b) / max(abs(b), 1e-12))
    pj_small_c, _ = jac.caj_preset(jac.CAJPreset.ZERO_RELATED,
                                   alpha=0.3, beta=0.6, c=1e-10)
    pj_classical = jac.CAJParams(0.3, 0.6, 0.0, 0.0)
    for n in (2, 4):
        a = eval_sequence(jac.caj_recurrence(pj_small_c), n, 0.4)[n]
        b = eval_sequence(jac.caj_recurrence(pj_classical), n, 0.4)[n]
        worst = max(worst, abs(a - b) / max(abs(b), 1e-12))
    pl = lag.CALParams(0.5, 1.0, 0.25)
    target = eval_sequence(lag.cal_recurrence(pl), 3, 2.0)[3]
    gap1 = abs(jac.laguerre_limit(pl, 3, 2.0, 1e4) - target) / abs(target)
    gap2 = abs(jac.laguerre_limit(pl, 3, 2.0, 2e4) - target) / abs(target)
    halving = 0.8 <= (gap1 / gap2) / 2.0 <= 1.2
    from corec_ortho.hypergeom import pochhammer
    a_, b_, mu_ = 0.7, 0.2, 0.1
    pneg, _ = jac.caj_preset(jac.CAJPreset.NEG_BETA, alpha=a_, beta=b_, mu=mu_)
    pcor, _ = jac.caj_preset(jac.CAJPreset.CORECURSIVE, alpha=a_, beta=-b_, mu=mu_)
    worst_pref = 0.0
    for n in (1, 3):
        pref = math.factorial(n) * pochhammer(a_ - b_ + 1, n) / (
            pochhammer(a_ + 1, n) * pochhammer(1 - b_, n))
        lhs = eval_sequence(jac.caj_recurrence(pneg), n, 0.4)[n]
        rhs = pref * eval_sequence(jac.caj_recurrence(pcor), n, 0.4)[n]
        worst_pref = max(worst_pref, abs(lhs - rhs))
    ok = worst <= 1e-8 and gap1 <= 1e-2 and halving and worst_pref <= 1e-10
    report("ACCEPT-08 limits", ok,
           f"reductions {worst:.2e} <= 1e-8, scaling gap {gap1:.2e} <= 1e-2 "
           f"halving {halving}, reflected-shift identity {worst_pref:.2e} <= 1e-10")


def test_criterion_09_birth_death():
    t0 = time.time()
    presets = [
        ("laguerre", lag.CALParams(0.5, 1.0, 0.0)),       # level shift only
        ("laguerre", lag.CALParams(0.5, 1.0, 1.0)),       # honest
        ("laguerre", lag.CALParams(0.5, 0.0, -0.3)),      # plain co-recursive
        ("laguerre", lag.CALParams(-0.4, 1.2, 0.8)),      # dual, killing 0.4
        ("jacobi", jac.CAJParams(0.3, 0.6, 0.8, 0.0)),
        ("jacobi", jac.caj_preset(jac.CAJPreset.ZERO_RELATED,
                                  alpha=0.3, beta=0.6, c=0.8)[0]),
        ("jacobi", jac.caj_preset(jac.CAJPreset.NEW_CASE,
                                  alpha=0.3, beta=0.6, c=0.8)[0]),
    ]
    worst_sigma = 0.0
    for family, params in presets:
        rates = bdp_mod.make_rates(family, params)
        assert rates.kill0 >= -1e-12
        for t in (0.1, 0.5):
            for m in (0, 1, 2):
                dist, _cem = bdp_mod.mc_distribution(rates, m, t, 100000, 4242)
                for n in (0, 1, 2):
                    km = bdp_mod.km_transition(rates, m, n, t, tol=1e-7).probability
                    p_hat = float(dist[n])
                    stderr = math.sqrt(max(p_hat * (1 - p_hat), 1e-12) / 100000)
                    worst_sigma = max(worst_sigma, abs(km - p_hat) / (4 * stderr))
    honest = bdp_mod.make_rates("laguerre", lag.CALParams(0.5, 1.0, 1.0))
    deficit = abs(1.0 - sum(
        bdp_mod.km_transition(honest, 0, n, 0.5, tol=1e-8).probability
        for n in range(41)))
    ident = max(abs(bdp_mod.km_transition(honest, m, n, 0.0, tol=1e-8).probability
                    - (1.0 if m == n else 0.0))
                for m in (0, 1, 2) for n in (0, 1, 2))
    dt = time.time() - t0
    ok = worst_sigma <= 1.0 and deficit <= 1e-4 and ident <= 1e-6 and dt < 180
    report("ACCEPT-09 birth-death", ok,
           f"spectral-vs-simulated worst {worst_sigma:.2f} of 4 sigma, honest "
           f"deficit {deficit:.2e} <= 1e-4, t=0 identity {ident:.2e} <= 1e-6, "
           f"{dt:.0f}s < 180s")


def test_criterion_10_hypergeometric_identities():
    rng = np.random.default_rng(55)
    worst_k1 = 0.0
    for _ in range(100):
        a = rng.uniform(-5, 5)
        c = rng.uniform(0.1, 5)
        x = rng.uniform(-10, 10)
        lhs = pfq(hyp([a], [c], x), dps=40)
        rhs = math.exp(x) * pfq(hyp([c - a], [c], -x), dps=40)
        worst_k1 = max(worst_k1, abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-290))
    worst_k2 = 0.0
    done = 0
    while done < 100:
        a = rng.uniform(-3, 3)
        c = rng.uniform(0.5, 4)
        e = rng.uniform(0.3, 3)
        x = rng.uniform(-5, 5)
        if abs(e - a) < 0.1:
            continue
        ee = e * (c - a - 1) / (e - a)
        if ee < 0.05:
            continue
        done += 1
        lhs = pfq(hyp([a, e + 1], [c, e], x), dps=40)
        rhs = math.exp(x) * pfq(hyp([c - a - 1, ee + 1], [c, ee], -x), dps=40)
        worst_k2 = max(worst_k2, abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-290))
    grid = (0.5, 1.0, 2.0)
    res = max(
        ode4.hyp_ode2_residual("confluent_laguerre",
                               {"alpha": 0.4, "c": 0.7, "n": 3}, grid),
        ode4.hyp_ode2_residual("twof2_shifted",
                               {"b": -2.0, "d": 2.5, "e": 1.5}, grid),
        ode4.hyp_ode2_residual("gauss_jacobi",
                               {"alpha": 0.3, "beta": 0.6, "c": 0.8, "n": 3},
                               (0.2, 0.5, 0.8)),
        ode4.hyp_ode2_residual("threef2_shifted",
                               {"a": -3.0, "b": 0.7, "d": 2.2, "e": 1.4},
                               (0.2, 0.4, 0.6)))
    ok = worst_k1 <= 1e-12 and worst_k2 <= 1e-12 and res <= 1e-10
    report("ACCEPT-10 hypergeometric identities", ok,
           f"reflection {worst_k1:.2e} and generalized {worst_k2:.2e} <= 1e-12, "
           f"second-order residuals {res:.2e} <= 1e-10")
