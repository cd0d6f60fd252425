import math

import pytest

from capwave.dispersion import (Params, dispersion_value, dispersion_value_scaled,
                                dkappa_dbeta, solve_kappa)
from capwave.errors import DoubleRootBoundary, NoPositiveRoot


def bisect_root(f, lo, hi, tol=1e-13):
    """Plain interval-halving oracle, independent of the library's solver."""
    flo = f(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if (fm < 0.0) == (flo < 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_dispersion_at_zero_vanishes():
    for params in (Params(0.9, 0.2), Params(1.5, 0.0), Params(0.3, 2.0)):
        assert dispersion_value(0.0, params) == 0.0


def test_dispersion_odd_symmetry():
    params = Params(0.7, 0.35)
    for k in (0.3, 1.7, 4.2, 9.5):
        assert dispersion_value(-k, params) == pytest.approx(
            -dispersion_value(k, params), rel=1e-14)


def test_root_matches_bisection_oracle():
    params = Params(0.9, 0.2)
    oracle = bisect_root(lambda k: dispersion_value_scaled(k, params), 1e-6, 50.0,
                         tol=1e-13)
    region = solve_kappa(params)
    assert region.tag == "I"
    assert region.single_root == pytest.approx(oracle, abs=1e-10)
    # residual scaled by the growth of sinh
    kap = region.single_root
    assert abs(dispersion_value(kap, params)) < 1e-10 * max(1.0, math.sinh(kap))


def test_small_k_sign_follows_taylor_oracle():
    # for alpha = 1 the cubic term (beta - 1/3) k^3 controls the sign near 0
    for beta in (0.2, 0.4):
        params = Params(1.0, beta)
        taylor = (beta - 1.0 / 3.0) * 0.01**3
        assert math.copysign(1.0, dispersion_value(0.01, params)) == math.copysign(1.0, taylor)


def test_region_one_unique_root_by_scan():
    params = Params(0.9, 0.2)
    ks = [1e-6 * (50.0 / 1e-6) ** (i / 9999) for i in range(10000)]
    vals = [dispersion_value_scaled(k, params) for k in ks]
    brackets = sum(1 for i in range(9999) if (vals[i] < 0) != (vals[i + 1] < 0))
    assert brackets == 1


def test_region_three_root_small_and_shrinks():
    region = solve_kappa(Params(1.0, 0.333))
    assert region.tag == "III"
    assert region.single_root <= 0.2
    k_roots = [solve_kappa(Params(1.0, b)).single_root for b in (0.30, 0.32, 0.333)]
    assert k_roots[0] > k_roots[1] > k_roots[2]


def test_region_two_roots_by_scan_oracle():
    params = Params(1.5, 0.05)
    ks = [1e-6 * (50.0 / 1e-6) ** (i / 9999) for i in range(10000)]
    vals = [dispersion_value_scaled(k, params) for k in ks]
    brackets = sum(1 for i in range(9999) if (vals[i] < 0) != (vals[i + 1] < 0))
    assert brackets in (0, 2)
    region = solve_kappa(params)
    assert region.tag == "II"
    assert len(region.roots) == brackets == 2


def test_no_root_reports_none():
    region = solve_kappa(Params(1.0, 0.34))
    assert region.tag == "None"
    assert region.roots == ()
    with pytest.raises(NoPositiveRoot):
        dkappa_dbeta(Params(1.0, 0.34))


def test_double_root_boundary_detected():
    # bisect the root-count transition in beta at alpha = 1.2
    alpha = 1.2
    lo, hi = 0.18, 0.30   # two roots at lo, none at hi
    assert solve_kappa(Params(alpha, lo)).tag == "II"
    assert solve_kappa(Params(alpha, hi)).tag == "None"
    hit = False
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        try:
            region = solve_kappa(Params(alpha, mid))
        except DoubleRootBoundary:
            hit = True
            break
        if region.tag == "II":
            lo = mid
        else:
            hi = mid
    assert hit, "boundary curve never triggered the double-root detector"


def test_dkappa_dbeta_negative_and_matches_fd():
    for alpha, beta in ((0.9, 0.2), (0.5, 1.0)):
        params = Params(alpha, beta)
        val = dkappa_dbeta(params)
        assert val < 0.0
        h = 1e-6
        fd = (solve_kappa(Params(alpha, beta + h)).single_root
              - solve_kappa(Params(alpha, beta - h)).single_root) / (2.0 * h)
        assert val == pytest.approx(fd, rel=1e-6)


def test_dkappa_dbeta_fd_grid():
    # closed form vs centered difference across a region-I grid
    h = 1e-6
    for i in range(10):
        alpha = 0.1 + 0.85 * i / 9
        for j in range(10):
            beta = 0.2 * 10.0 ** (j / 9)
            params = Params(alpha, beta)
            val = dkappa_dbeta(params)
            fd = (solve_kappa(Params(alpha, beta + h)).single_root
                  - solve_kappa(Params(alpha, beta - h)).single_root) / (2.0 * h)
            assert val == pytest.approx(fd, rel=1e-5)


def test_dispersion_residual_invariant_over_regions():
    for alpha, beta in ((0.2, 0.5), (0.95, 3.0), (1.0, 0.2), (1.5, 0.05)):
        region = solve_kappa(Params(alpha, beta))
        for kap in region.roots:
            resid = abs(dispersion_value(kap, Params(alpha, beta)))
            assert resid < 1e-10 * max(1.0, math.sinh(kap))


def test_invalid_params_rejected():
    with pytest.raises(ValueError):
        Params(0.0, 0.1)
    with pytest.raises(ValueError):
        Params(0.5, -0.1)
