import math
from fractions import Fraction

import numpy as np
import pytest
import scipy.special as sp

from corec_ortho.errors import ConstraintViolation, OutOfValidityDomain
from corec_ortho.jacobi import (
    CAJParams,
    CAJPreset,
    caj_density,
    caj_explicit,
    caj_generating,
    caj_generating_series,
    caj_hyp,
    caj_hyp_grouped,
    caj_norm,
    caj_preset,
    caj_recurrence,
    caj_stieltjes,
    density_domain,
    laguerre_limit,
    preset_density_unnormalized,
    t_double_prime,
    t_prime,
)
from corec_ortho.laguerre import CALParams, cal_recurrence
from corec_ortho.measure import gram_matrix, stieltjes_by_quadrature
from corec_ortho.recurrence import eval_sequence, exact_coeffs

P_STD = CAJParams(0.3, 0.6, 0.8, 0.05)


def ev(params, n, x):
    return eval_sequence(caj_recurrence(params), n, x)[n]


def test_shifted_legendre_member():
    p = CAJParams(0.0, 0.0, 0.0, 0.0)
    assert ev(p, 1, 1.0) == pytest.approx(1.0)  # 2x - 1 at x = 1


def test_first_degree_display():
    a, b, c = 0.3, 0.6, 0.8
    x = 0.2
    m = 2 * c + a + b
    want = (m + 1) * (m + 2) / (2 * (c + 1) * (c + a + b + 1)) * (
        (2 * x - 1) + (a * a - b * b) / (m * (m + 2)))
    assert ev(CAJParams(a, b, c, 0.0), 1, x) == pytest.approx(want, rel=1e-13)


def test_reflection_symmetry():
    # mu = 0: R_n^{a,b}(x) = (-1)^n R_n^{b,a}(1-x); with displacement the
    # reflected family carries the negated displacement
    p0 = CAJParams(0.3, 0.6, 0.8, 0.0)
    r0 = CAJParams(0.6, 0.3, 0.8, 0.0)
    assert ev(p0, 4, 0.37) == pytest.approx(ev(r0, 4, 1 - 0.37), abs=1e-12)
    pm = CAJParams(0.3, 0.6, 0.8, 0.1)
    rm = CAJParams(0.6, 0.3, 0.8, -0.1)
    assert ev(pm, 4, 0.37) == pytest.approx(ev(rm, 4, 1 - 0.37), abs=1e-12)
    assert ev(pm, 3, 0.37) == pytest.approx(-ev(rm, 3, 1 - 0.37), abs=1e-12)


def test_parameter_symmetry_identity():
    # p^{-a,-b}(x, c+a+b) = p^{a,b}(x, c), for any displacement
    for mu in (0.0, 0.1):
        p = CAJParams(0.3, 0.6, 0.8, mu)
        q = t_prime(p)
        assert ev(p, 4, 0.37) == pytest.approx(ev(q, 4, 0.37), abs=1e-12)


def test_t_prime_involution_and_t_double_prime():
    p = CAJParams(Fraction(3, 10), Fraction(3, 5), Fraction(4, 5), Fraction(1, 10))
    assert t_prime(t_prime(p)) == p
    q = t_double_prime(p)
    assert (q.alpha, q.beta, q.c) == (-p.beta, -p.alpha, p.c + p.alpha + p.beta)


def test_recurrence_coefficients_invariant_exactly():
    p = CAJParams(Fraction(3, 10), Fraction(3, 5), Fraction(4, 5), Fraction(1, 10))
    r1 = caj_recurrence(p)
    r2 = caj_recurrence(t_prime(p))
    for k in range(8):
        assert r1.beta(k) == r2.beta(k)
        assert r1.gamma(k) == r2.gamma(k)


def test_three_route_agreement_random_draws():
    rng = np.random.default_rng(23)
    worst = 0.0
    for _ in range(50):
        alpha = rng.uniform(-0.5, 1.2)
        beta = rng.uniform(-0.3, 1.2)
        c = rng.uniform(0.05, 2.0)
        if abs(alpha) < 0.05 or abs(2 * c + alpha + beta) < 0.1 or c + beta <= 0.05:
            continue
        m = 2 * c + alpha + beta
        lo = -2 * c * (c + beta) / (m * (m + 1))
        mu = rng.uniform(lo, 0.5)
        p = CAJParams(alpha, beta, c, mu)
        n = int(rng.integers(1, 11))
        x = rng.uniform(0.05, 0.95)
        seq = eval_sequence(caj_recurrence(p), n, x)
        scale = max(max(abs(v) for v in seq), 1e-12)
        worst = max(worst,
                    abs(seq[n] - caj_explicit(p, n, x)) / scale,
                    abs(seq[n] - caj_hyp(p, n, x)) / scale,
                    abs(seq[n] - caj_hyp_grouped(p, n, x)) / scale)
    assert worst < 1e-8


def test_explicit_trivial_and_corecursive_reduction():
    assert caj_explicit(P_STD, 0, 0.4) == pytest.approx(1.0)
    # c = 0 reduces onto the double-sum form of the plain co-recursive family
    pc, evaluator = caj_preset(CAJPreset.CORECURSIVE, alpha=0.3, beta=0.6, mu=0.1)
    for x in np.linspace(0.05, 0.95, 10):
        assert caj_explicit(pc, 4, float(x)) == pytest.approx(
            evaluator(4, float(x)), rel=1e-9, abs=1e-12)


def test_explicit_equals_recurrence_in_exact_arithmetic():
    p = CAJParams(Fraction(2, 7), Fraction(4, 9), Fraction(9, 8), Fraction(1, 11))
    polys = exact_coeffs(caj_recurrence(p), 6)
    for n in (2, 4, 6):
        for x in (Fraction(1, 3), Fraction(7, 10)):
            assert caj_explicit(p, n, x) == polys[n](x)


def test_hyp_structural_symmetry():
    # the two summands of the grouped route swap under the parameter symmetry
    from corec_ortho.jacobi import _caj_hyp_term
    p = CAJParams(0.37, 0.59, 0.8, 0.05)
    t1 = _caj_hyp_term(p, 5, 0.5, 1e-14)
    t2 = _caj_hyp_term(t_prime(p), 5, 0.5, 1e-14)
    assert caj_hyp(p, 5, 0.5) == pytest.approx(t1 + t2, rel=1e-13)


def test_density_classical_weight():
    p = CAJParams(0.3, 0.6, 0.0, 0.0)
    for x in (0.2, 0.5, 0.8):
        want = (1 - x) ** 0.3 * x ** 0.6 / sp.beta(1.6, 1.3)
        assert caj_density(p, x) == pytest.approx(want, rel=1e-9)


def test_density_validity_override():
    bad = CAJParams(0.3, 0.6, 0.8, -5.0)
    with pytest.raises(OutOfValidityDomain):
        caj_density(bad, 0.5)
    with pytest.warns(UserWarning):
        caj_density(bad, 0.5, validate=False)


def test_gram_matrix_orthogonality():
    p = P_STD
    rec = caj_recurrence(p)

    def evaluator(n, x):
        return eval_sequence(rec, n, x)[n]

    gram = gram_matrix(evaluator, lambda x: caj_density(p, x),
                       density_domain(p), 5, tol=1e-8)
    off = max(abs(gram[i, j]) for i in range(5) for j in range(5) if i != j)
    assert off <= 1e-6
    for i in range(5):
        assert gram[i, i] == pytest.approx(caj_norm(p, i), rel=1e-6)


def test_zero_related_density_matches_printed_form():
    params, _ = caj_preset(CAJPreset.ZERO_RELATED, alpha=0.3, beta=0.6, c=0.8)
    vals = [caj_density(params, x) for x in (0.2, 0.5, 0.8)]
    raw = [preset_density_unnormalized(CAJPreset.ZERO_RELATED, params, x)
           for x in (0.2, 0.5, 0.8)]
    ratios = [v / r for v, r in zip(vals, raw)]
    assert max(ratios) - min(ratios) < 1e-9 * max(ratios)


def test_new_case_dual_density_exponents():
    # this preset's displacement sits below the sufficient positivity bound,
    # which is exactly what the override flag is for
    params, _ = caj_preset(CAJPreset.NEW_CASE_DUAL, alpha=0.3, beta=0.6, c=0.8)
    with pytest.warns(UserWarning):
        vals = [caj_density(params, x, validate=False) for x in (0.2, 0.5, 0.8)]
    raw = [preset_density_unnormalized(CAJPreset.NEW_CASE_DUAL, params, x)
           for x in (0.2, 0.5, 0.8)]
    ratios = [v / r for v, r in zip(vals, raw)]
    assert max(ratios) - min(ratios) < 1e-9 * max(ratios)


def test_stieltjes_two_forms_and_quadrature():
    for pt in (0.5, 2.0, 10.0):
        composed = caj_stieltjes(P_STD, pt, form="composed")
        compact = caj_stieltjes(P_STD, pt, form="compact")
        assert abs(composed - compact) <= 1e-10 * abs(composed)
        by_quad = stieltjes_by_quadrature(lambda x: caj_density(P_STD, x),
                                          density_domain(P_STD), pt, tol=1e-8)
        assert composed == pytest.approx(by_quad, abs=1e-6)


def test_stieltjes_level_shifted_form():
    # mu = 0 base: the single-ratio classical form
    from corec_ortho.hypergeom import gauss_2f1_continued
    p0 = CAJParams(0.3, 0.6, 0.8, 0.0)
    a, b, c = 0.3, 0.6, 0.8
    m = 2 * c + a + b
    pt = 3.0
    f1 = gauss_2f1_continued(c + 1, c + b + 1, m + 2, -1 / pt)
    f0 = gauss_2f1_continued(c, c + b, m, -1 / pt)
    assert caj_stieltjes(p0, pt) == pytest.approx(f1 / (pt * f0), rel=1e-12)


def test_stieltjes_tail_mass():
    assert 1e6 * caj_stieltjes(P_STD, 1e6) == pytest.approx(1.0, abs=1e-4)


def test_generating_function_closed_vs_series():
    for (a, b, c, mu) in ((0.3, 0.6, 0.8, 0.05), (0.3, 0.6, 0.0, 0.1),
                          (0.37, 0.59, 0.8, 0.0)):
        p = CAJParams(a, b, c, mu)
        for w in (0.2, 0.3):
            closed = caj_generating(p, 0.4, w)
            series = caj_generating_series(p, 0.4, w, 50)
            assert closed == pytest.approx(series, abs=1e-7)
    assert caj_generating(P_STD, 0.4, 0.0) == 1.0
    assert caj_generating(P_STD, 0.4, 1e-5) == pytest.approx(1.0, abs=1e-3)


def test_generating_branch_guard():
    from corec_ortho.errors import BranchSelection
    with pytest.raises(BranchSelection):
        caj_generating(P_STD, 1.2, 0.9)  # discriminant goes negative


def test_laguerre_scaling_limit():
    pl = CALParams(0.5, 1.0, 0.25)
    target = eval_sequence(cal_recurrence(pl), 3, 2.0)[3]
    gap1 = abs(laguerre_limit(pl, 3, 2.0, 1e4) - target) / abs(target)
    gap2 = abs(laguerre_limit(pl, 3, 2.0, 2e4) - target) / abs(target)
    assert gap1 <= 1e-2
    assert 0.8 * gap1 / 2 <= gap2 <= 1.2 * gap1 / 2
    assert laguerre_limit(pl, 0, 2.0, 1e4) == pytest.approx(1.0)


@pytest.mark.parametrize("kind", [
    CAJPreset.CORECURSIVE, CAJPreset.T_PRIME_CORECURSIVE, CAJPreset.NEG_BETA,
    CAJPreset.NEG_ALPHA, CAJPreset.ASSOCIATED, CAJPreset.ZERO_RELATED,
    CAJPreset.ZERO_RELATED_DUAL, CAJPreset.NEW_CASE, CAJPreset.NEW_CASE_DUAL])
def test_presets_match_recurrence(kind):
    kwargs = dict(alpha=0.3, beta=0.6)
    if kind in (CAJPreset.CORECURSIVE, CAJPreset.T_PRIME_CORECURSIVE,
                CAJPreset.NEG_BETA, CAJPreset.NEG_ALPHA):
        kwargs["mu"] = 0.1
    else:
        kwargs["c"] = 0.8
    if kind is CAJPreset.NEG_BETA:
        kwargs.update(alpha=0.7, beta=0.2)
    params, evaluator = caj_preset(kind, **kwargs)
    for n in (1, 3, 4):
        assert evaluator(n, 0.4) == pytest.approx(ev(params, n, 0.4),
                                                  rel=1e-9, abs=1e-12)


def test_neg_beta_prefactor_identity():
    # level shift c = -beta relates to the plain co-recursive family with the
    # reflected beta through an explicit Pochhammer prefactor
    from corec_ortho.hypergeom import pochhammer
    a, b, mu = 0.7, 0.2, 0.1
    pneg, _ = caj_preset(CAJPreset.NEG_BETA, alpha=a, beta=b, mu=mu)
    pcor, _ = caj_preset(CAJPreset.CORECURSIVE, alpha=a, beta=-b, mu=mu)
    for n in (1, 3):
        pref = math.factorial(n) * pochhammer(a - b + 1, n) / (
            pochhammer(a + 1, n) * pochhammer(1 - b, n))
        assert ev(pneg, n, 0.4) == pytest.approx(pref * ev(pcor, n, 0.4),
                                                 rel=1e-10)


def test_zero_related_c_to_zero_is_classical():
    params, _ = caj_preset(CAJPreset.ZERO_RELATED, alpha=0.3, beta=0.6, c=1e-7)
    classical = CAJParams(0.3, 0.6, 0.0, 0.0)
    for n in (2, 4):
        assert ev(params, n, 0.4) == pytest.approx(ev(classical, n, 0.4), rel=1e-5)


def test_zero_related_dual_c_to_zero_limit():
    # the dual case at c -> 0 lands on the plain co-recursive family with
    # displacement 2 beta / (alpha + beta + 1)
    a, b = 0.3, 0.6
    params, _ = caj_preset(CAJPreset.ZERO_RELATED_DUAL, alpha=a, beta=b, c=1e-7)
    target = CAJParams(a, b, 0.0, 2 * b / (a + b + 1))
    for n in (2, 4):
        assert ev(params, n, 0.4) == pytest.approx(ev(target, n, 0.4), rel=1e-5)


def test_new_case_dual_is_parameter_image_of_new_case():
    pnc, _ = caj_preset(CAJPreset.NEW_CASE, alpha=-0.3, beta=-0.6, c=1.7)
    pncd, _ = caj_preset(CAJPreset.NEW_CASE_DUAL, alpha=0.3, beta=0.6, c=0.8)
    # the dual's constraint equals the base constraint at the transformed
    # parameters, and the polynomial families coincide
    assert float(pnc.mu) == pytest.approx(float(pncd.mu), rel=1e-12)
    for n in (2, 3):
        assert ev(pncd, n, 0.4) == pytest.approx(ev(pnc, n, 0.4), rel=1e-11)


def test_zero_related_breaks_parameter_symmetry():
    mk = lambda a, b, c: caj_preset(  # noqa: E731
        CAJPreset.ZERO_RELATED, alpha=a, beta=b, c=c)[0]
    base = mk(Fraction(3, 10), Fraction(3, 5), Fraction(4, 5))
    image_params = t_prime(base)
    image = mk(image_params.alpha, image_params.beta, image_params.c)
    mb = exact_coeffs(caj_recurrence(base, normalized=False), 3)
    mi = exact_coeffs(caj_recurrence(image, normalized=False), 3)
    assert mb[3] != mi[3]


def test_preset_constraint_violation():
    with pytest.raises(ConstraintViolation):
        caj_preset(CAJPreset.ZERO_RELATED, alpha=0.3, beta=0.6, c=0.8, mu=0.4)
