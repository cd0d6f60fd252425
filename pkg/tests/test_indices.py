import math

import pytest

from capwave.dispersion import Params, solve_kappa
from capwave.errors import DegenerateDenominator, SigmaTildeResonance
from capwave.indices import (alpha_one, beta_of_kappa, chi_value, e_star,
                             index_bundle, limit_polynomial, nls_coefficients,
                             rescaled_index, w1, w1_pp0, w1_prime0)


def region_one_grid(n):
    pts = []
    for i in range(n):
        a = 0.1 + 0.85 * i / (n - 1)
        for j in range(n):
            b = 0.2 * (20.0 / 0.2) ** (j / (n - 1))
            pts.append(Params(a, b))
    return pts


def mp_bundle(alpha, beta):
    """40-digit reference values computed independently with mpmath."""
    from mpmath import mp, mpf, sinh, cosh, tanh, sqrt, findroot, diff

    mp.dps = 40
    a, b = mpf(repr(alpha)), mpf(repr(beta))
    D = lambda k: (a + b * k * k) * sinh(k) - k * cosh(k)
    kap = findroot(D, mpf(2))
    es = (1 + 2 * kap / sinh(2 * kap)) / 2 + b * kap * tanh(kap)
    w1f = lambda xi: sqrt(kap * (1 + xi) * tanh(kap * (1 + xi))
                          * (a + b * kap**2 * (1 + xi) ** 2))
    w1pp = diff(w1f, 0, 2)
    ck = -1 - kap * (cosh(2 * kap) + 2) / D(2 * kap)
    chit = ((9 * a * b + 16) * kap - 12 * a * b * kap * cosh(2 * kap)
            + 3 * a * b * kap * cosh(4 * kap)
            - 8 * a * (2 * ck - 1) * sinh(2 * kap)
            - 4 * a * (ck + 2) * sinh(4 * kap))
    dk = 32 * a * (2 * b * kap * (cosh(2 * kap) - 1) + 2 * kap - sinh(2 * kap))
    k2 = kap**3 * chit / dk
    sig = tanh(kap)
    T = b * kap**2 / a
    chi = (((1 - sig**2) * (9 - sig**2) + T * (3 - sig**2) * (7 - sig**2))
           / (sig**2 - T * (3 - sig**2))
           + 8 * sig**2 - 2 * (1 - sig**2) ** 2 * (1 + T)
           - 3 * sig**2 * T / (1 + T))
    head = a * kap**2 * sinh(2 * kap) / (2 * (es**2 - a)) \
        * (1 + kap * es / (a * sinh(2 * kap))) ** 2
    C = head - 2 * k2 * (es - 1)
    chi1 = 1 + es / 2 * (1 - sig**2) * (1 + T)
    mu1 = es**2 / a - 1
    nu = sqrt(a / (16 * kap)) * (8 * chi1**2 / (a * (1 + T) * mu1) + chi)
    lam = w1pp / (2 * sqrt(a * kap))
    return dict(kappa=float(kap), e_star=float(es), w1pp=float(w1pp),
                k2=float(k2), chi=float(chi), C=float(C), nu=float(nu),
                lambda_nls=float(lam))


@pytest.mark.parametrize("alpha,beta", [(0.9, 0.2), (0.5, 1.0), (0.3, 0.6)])
def test_bundle_against_forty_digit_oracle(alpha, beta):
    ref = mp_bundle(alpha, beta)
    b = index_bundle(Params(alpha, beta))
    for key in ref:
        assert getattr(b, key) == pytest.approx(ref[key], rel=1e-12), key


def test_w1_at_zero_is_kappa():
    params = Params(0.9, 0.2)
    kap = solve_kappa(params).single_root
    assert w1(0.0, kap, params) == pytest.approx(kap, rel=1e-13)


def test_w1_derivatives_match_finite_differences():
    params = Params(0.9, 0.2)
    kap = solve_kappa(params).single_root
    h = 1e-6
    fd1 = (w1(h, kap, params) - w1(-h, kap, params)) / (2.0 * h)
    assert fd1 / kap == pytest.approx(e_star(kap, params), rel=1e-6)
    assert w1_prime0(kap, params) == pytest.approx(kap * e_star(kap, params), rel=1e-12)
    fd2 = (w1(h, kap, params) - 2.0 * kap + w1(-h, kap, params)) / h**2
    assert w1_pp0(kap, params) == pytest.approx(fd2, rel=1e-4)
    assert w1_pp0(kap, params) > 0.0


def test_estar_exceeds_one_in_region_one():
    for params in region_one_grid(6):
        kap = solve_kappa(params).single_root
        assert e_star(kap, params) > 1.0
        assert w1_pp0(kap, params) > 0.0


def test_k2_positive_on_region_one_grid():
    for params in region_one_grid(20):
        b = index_bundle(params)
        assert b.k2 > 0.0, (params.alpha, params.beta)


def test_index_dual_forms_agree():
    for params in region_one_grid(10):
        b = index_bundle(params)
        assert abs(b.C - b.C_rewrite) <= 1e-10 * abs(b.C)


def test_composite_k2_chi_identity():
    # -2 kappa k2/(c dk/dc) = kappa^3 cosh^2(kappa) chi / 8
    for params in region_one_grid(8):
        b = index_bundle(params)
        lhs = -2.0 * b.kappa * b.k2 / b.c_dc_kappa
        rhs = b.kappa**3 * math.cosh(b.kappa) ** 2 * b.chi / 8.0
        assert lhs == pytest.approx(rhs, rel=1e-10)


def test_c_dc_kappa_matches_wave_speed_rescale_fd():
    # kappa(s) from (alpha/s^2, beta/s^2); c d kappa/dc = d kappa/ds at s=1
    for alpha, beta in ((0.9, 0.2), (0.5, 1.0)):
        params = Params(alpha, beta)
        b = index_bundle(params)
        h = 1e-5
        kp = solve_kappa(Params(alpha / (1 + h) ** 2, beta / (1 + h) ** 2)).single_root
        km = solve_kappa(Params(alpha / (1 - h) ** 2, beta / (1 - h) ** 2)).single_root
        fd = (kp - km) / (2.0 * h)
        assert b.c_dc_kappa == pytest.approx(fd, rel=1e-4)


def test_schrodinger_identities():
    params = Params(0.9, 0.2)
    b = index_bundle(params)
    lam, nu = nls_coefficients(params)
    assert (lam, nu) == (b.lambda_nls, b.nu)
    k = b.kappa
    assert b.C == pytest.approx(math.sqrt(k**7 / (4.0 * params.alpha))
                                * math.cosh(k) ** 2 * b.nu, rel=1e-10)
    assert b.C_tilde == pytest.approx(k**4 * math.cosh(k) ** 2 * lam * nu, rel=1e-10)
    assert b.chi_tilde == pytest.approx(
        -4.0 * params.alpha * math.sinh(2.0 * k) * math.cosh(k) ** 2 * b.chi, rel=1e-10)
    assert lam > 0.0  # w1''(0) > 0 in region I


def test_rescaled_limit_polynomial():
    for a in (0.2, 0.5, 0.8):
        assert rescaled_index(a, 1e-4) == pytest.approx(limit_polynomial(a), abs=1e-3)
    assert limit_polynomial(alpha_one()) == pytest.approx(0.0, abs=1e-12)
    assert alpha_one() == pytest.approx(0.47383, abs=5e-6)


def test_rescaled_sign_matches_index_sign():
    for i in range(30):
        a = 0.12 + 0.85 * i / 29
        for j in range(30):
            k = 0.05 * (8.0 / 0.05) ** (j / 29)
            try:
                ch = rescaled_index(a, k)
            except SigmaTildeResonance:
                continue
            params = Params(a, beta_of_kappa(a, k))
            b = index_bundle(params, kappa=k)
            if abs(ch) > 1e-12:
                assert math.copysign(1.0, ch) == math.copysign(1.0, b.C)


def test_rescaled_two_sign_changes_between_merge_and_alpha_one():
    a = 0.42
    ks = [1e-3 * (10.0 / 1e-3) ** (i / 9999) for i in range(10000)]
    vals = [rescaled_index(a, k) for k in ks]
    changes = sum(1 for i in range(9999)
                  if (vals[i] < 0) != (vals[i + 1] < 0))
    assert changes == 2


def test_rescaled_finite_on_region_one_grid():
    for i in range(12):
        a = 0.1 + 0.9 * i / 11
        for j in range(12):
            k = 0.05 * (9.0 / 0.05) ** (j / 11)
            val = rescaled_index(min(a, 1.0), k)
            assert math.isfinite(val)


def test_degenerate_denominator_guard():
    # walk the e*^2 = alpha locus at fixed kappa by varying T~
    kap = 2.0

    def gap(T):
        a = kap / (math.tanh(kap) * (1.0 + T))
        params = Params(a, T * a / kap**2)
        return e_star(kap, params) ** 2 - a

    lo, hi = 0.01, 1.5
    assert gap(lo) < 0.0 < gap(hi)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if gap(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    T = 0.5 * (lo + hi)
    a = kap / (math.tanh(kap) * (1.0 + T))
    with pytest.raises(DegenerateDenominator):
        index_bundle(Params(a, T * a / kap**2), kappa=kap)


def test_sigma_tilde_resonance_guard():
    kap = 2.0
    s2 = math.tanh(kap) ** 2
    T = s2 / (3.0 - s2)
    a = kap / (math.tanh(kap) * (1.0 + T))
    with pytest.raises(SigmaTildeResonance):
        chi_value(kap, Params(a, T * a / kap**2))
