import math

import numpy as np
import pytest

from capwave.bloch import (Crossing, SpectralPoint, find_crossings, krein_signature,
                           lambda_branch, mode_ceiling, omega_weight, sigma_curves,
                           sigma_minus_critical_point)
from capwave.dispersion import Params, solve_kappa
from capwave.errors import CeilingTooLarge, UndefinedAtOrigin

P1 = Params(0.9, 0.2)
KAP1 = solve_kappa(P1).single_root


def test_origin_quadruple_vanishes():
    assert lambda_branch(0, "+", 0.0, KAP1, P1) == 0.0
    assert lambda_branch(0, "-", 0.0, KAP1, P1) == 0.0
    assert abs(lambda_branch(1, "-", 0.0, KAP1, P1)) < 1e-12
    assert abs(lambda_branch(-1, "+", 0.0, KAP1, P1)) < 1e-12


def test_lambda_against_forty_digit_reimplementation():
    from mpmath import mp, mpf, sqrt, tanh

    mp.dps = 40
    j, xi = 2, 0.25
    k = mpf(repr(KAP1)) * (j + mpf("0.25"))
    w = sqrt(k * tanh(k) * (mpf("0.9") + mpf("0.2") * k * k))
    ref = float(k + w)
    assert lambda_branch(j, "+", xi, KAP1, P1) == pytest.approx(ref, rel=1e-15)


def test_sigma_curve_symmetry_and_zeros():
    for k in (0.3, 1.1, 2.9, 7.0):
        sp, sm = sigma_curves(k, P1)
        spm, smm = sigma_curves(-k, P1)
        assert sp == pytest.approx(-smm, rel=1e-14)
        assert sm == pytest.approx(-spm, rel=1e-14)
        assert sp > 0.0
    assert sigma_curves(0.0, P1)[1] == 0.0
    assert abs(sigma_curves(KAP1, P1)[1]) < 1e-12
    # sigma_minus >= 0 exactly on [0, kappa]
    for k in np.linspace(1e-3, KAP1 - 1e-3, 50):
        assert sigma_curves(k, P1)[1] >= 0.0
    for k in list(np.linspace(KAP1 + 1e-3, 5.0, 20)) + [-0.5, -2.0]:
        assert sigma_curves(k, P1)[1] < 0.0


def test_sigma_minus_single_interior_maximum():
    kc = sigma_minus_critical_point(P1, KAP1)
    assert 0.0 < kc < KAP1
    h = 1e-5
    d_left = sigma_curves(kc, P1)[1] - sigma_curves(kc - h, P1)[1]
    d_right = sigma_curves(kc + h, P1)[1] - sigma_curves(kc, P1)[1]
    assert d_left > 0.0 > d_right


def test_branch_ordering_and_reflection_symmetry():
    for j in (-3, -1, 0, 2):
        for xi in (-0.4, -0.1, 0.2, 0.5):
            up = lambda_branch(j, "+", xi, KAP1, P1)
            dn = lambda_branch(j, "-", xi, KAP1, P1)
            assert up >= dn
            if j + xi != 0.0:
                assert up > dn
            mirror = lambda_branch(-j, "-", -xi, KAP1, P1)
            assert mirror == pytest.approx(-up, rel=1e-13, abs=1e-13)


def crossing_scan_oracle(params, kappa, sigma_max, j_max=6, n=4000):
    """Independent dense-grid collision scan used to vet find_crossings."""
    hits = []
    xi = np.linspace(-0.5 + 1.0 / n, 0.5, n)
    branches = [(j, b) for j in range(-j_max, j_max + 1) for b in ("+", "-")]
    vals = {}
    for j, b in branches:
        k = kappa * (j + xi)
        w = np.sqrt(np.maximum(k * np.tanh(k) * (params.alpha + params.beta * k * k), 0.0))
        vals[(j, b)] = k + w if b == "+" else k - w
    for i1 in range(len(branches)):
        for i2 in range(i1 + 1, len(branches)):
            (ja, ba), (jb, bb) = branches[i1], branches[i2]
            if ja == jb:
                continue
            d = vals[(ja, ba)] - vals[(jb, bb)]
            sign_flip = np.nonzero(np.signbit(d[:-1]) != np.signbit(d[1:]))[0]
            for idx in sign_flip:
                lo, hi = xi[idx], xi[idx + 1]
                for _ in range(60):
                    mid = 0.5 * (lo + hi)
                    k1, k2 = kappa * (ja + mid), kappa * (jb + mid)
                    w1 = math.sqrt(max(k1 * math.tanh(k1) * (params.alpha + params.beta * k1 * k1), 0.0))
                    w2 = math.sqrt(max(k2 * math.tanh(k2) * (params.alpha + params.beta * k2 * k2), 0.0))
                    v1 = k1 + w1 if ba == "+" else k1 - w1
                    v2 = k2 + w2 if bb == "+" else k2 - w2
                    flo = (vals[(ja, ba)][idx] - vals[(jb, bb)][idx])
                    if ((v1 - v2) < 0.0) == (flo < 0.0):
                        lo = mid
                    else:
                        hi = mid
                mid = 0.5 * (lo + hi)
                k1 = kappa * (ja + mid)
                w1 = math.sqrt(max(k1 * math.tanh(k1) * (params.alpha + params.beta * k1 * k1), 0.0))
                sig = k1 + w1 if ba == "+" else k1 - w1
                if abs(sig) <= sigma_max and (abs(sig) > 1e-6 or abs(mid) > 1e-6):
                    hits.append((round(mid, 8), round(sig, 8)))
    dedup = set()
    for x, s in hits:
        if s < 0 or (s == 0 and x < 0):
            x, s = -x, -s
        dedup.add((round(x, 6), round(s, 6)))
    return sorted(dedup)


def test_find_crossings_region_one_against_oracle():
    crossings = find_crossings(P1, KAP1, 10.0)
    origin = [c for c in crossings if c.is_origin]
    assert len(origin) == 1 and origin[0].multiplicity == 4
    nonzero = [c for c in crossings if not c.is_origin]
    oracle = crossing_scan_oracle(P1, KAP1, 10.0)
    got = sorted((round(c.xi_ell, 6), round(c.sigma_ell, 6)) for c in nonzero)
    assert got == oracle
    for c in nonzero:
        # paper structure: same branch (+,+), j >= 0 > j', separation >= 2
        assert c.branches == ("+", "+")
        assert c.j >= 0 > c.j_prime
        assert c.j - c.j_prime >= 2
        assert c.signatures_equal is True
        v1 = lambda_branch(c.j, c.branches[0], c.xi_ell, KAP1, P1)
        v2 = lambda_branch(c.j_prime, c.branches[1], c.xi_ell, KAP1, P1)
        assert abs(v1 - v2) < 1e-10
        if c.j == 0:
            assert c.xi_ell > 0.0


def test_no_mixed_crossings_in_regions_one_and_three():
    for params in (P1, Params(1.0, 0.2)):
        kap = solve_kappa(params).single_root
        crossings = find_crossings(params, kap, 20.0)
        assert all(c.signatures_equal for c in crossings if not c.is_origin)


def test_region_two_mixed_crossing_reported_opposite():
    params = Params(1.5, 0.147)
    region = solve_kappa(params)
    assert region.tag == "II"
    crossings = find_crossings(params, region.roots[1], 8.0)
    mixed = [c for c in crossings if c.signatures_equal is False]
    assert mixed, "expected an opposite-signature crossing at the larger root"
    assert any(abs(c.j - c.j_prime) == 1 for c in mixed)


def test_krein_signature_convention():
    pt_plus = SpectralPoint(j=2, branch="+", xi=0.25,
                            value=lambda_branch(2, "+", 0.25, KAP1, P1))
    pt_plus2 = SpectralPoint(j=-3, branch="+", xi=-0.1,
                             value=lambda_branch(-3, "+", -0.1, KAP1, P1))
    pt_minus = SpectralPoint(j=1, branch="-", xi=0.2,
                             value=lambda_branch(1, "-", 0.2, KAP1, P1))
    assert krein_signature(pt_plus) == krein_signature(pt_plus2) == +1
    assert krein_signature(pt_minus) == -1
    with pytest.raises(UndefinedAtOrigin):
        krein_signature(SpectralPoint(j=0, branch="+", xi=0.0, value=0.0))


def test_omega_weight_at_first_modes():
    # dual normalizer at modes +-1, xi = 0 equals coth(kappa)
    ref = 1.0 / math.tanh(KAP1)
    assert omega_weight(1, 0.0, KAP1, P1) == pytest.approx(ref, rel=1e-13)
    assert omega_weight(-1, 0.0, KAP1, P1) == pytest.approx(ref, rel=1e-13)
    with pytest.raises(UndefinedAtOrigin):
        omega_weight(0, 0.0, KAP1, P1)


def test_mode_ceiling_and_too_large():
    j_max = mode_ceiling(P1, KAP1, 10.0)
    assert j_max >= 3
    with pytest.raises(CeilingTooLarge):
        find_crossings(P1, KAP1, 10.0, j_max=max(1, j_max - 2))
