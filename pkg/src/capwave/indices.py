"""Closed-form stability indices for small-amplitude periodic waves.

Everything here is a scalar function of (alpha, beta) through the wave number
kappa solving the dispersion relation alpha + beta*kappa^2 = kappa/tanh(kappa).
The central quantity is the index C whose sign decides spectral stability in
regions I/III, together with its rescaled variant C_hat(alpha, kappa), the
modulational index C~ = w1''(0)*C, and the equivalent focusing/defocusing
product lambda*nu of the cubic Schrodinger reduction.

Two independent closed forms of C are evaluated and cross-checked:

  (i)  C = alpha*k^2*sh(2k)/(2(e*^2-alpha)) * (1 + k e*/(alpha sh 2k))^2
           - 2*k*k2 / (c dk/dc),
  (ii) C = alpha*k^2*sh(2k)/(2(e*^2-alpha)) * (1 + k e*/(alpha sh 2k))^2
           + k^3 ch^2(k) chi / 8,

with k2 the quadratic wave-number correction of the Stokes expansion and chi
a rational function of sigma = tanh(kappa) and T~ = beta*kappa^2/alpha.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .dispersion import Params, solve_kappa
from .errors import DegenerateDenominator, NoPositiveRoot, SigmaTildeResonance

__all__ = [
    "IndexBundle",
    "e_star",
    "w1",
    "w1_prime0",
    "w1_pp0",
    "k2_coefficient",
    "chi_value",
    "chi_tilde_value",
    "index_bundle",
    "rescaled_index",
    "nls_coefficients",
    "beta_of_kappa",
    "limit_polynomial",
    "alpha_one",
    "find_alpha0",
]

RESONANCE_TOL = 1e-10


def _sech(x: float) -> float:
    # overflow-safe 1/cosh
    ax = abs(x)
    if ax > 700.0:
        return 2.0 * math.exp(-ax) / (1.0 + math.exp(-2.0 * ax))
    return 1.0 / math.cosh(x)


def e_star(kappa: float, params: Params) -> float:
    """e* = (1 + 2k/sinh 2k)/2 + beta*k*tanh(k); exceeds 1 in regions I/III."""
    return 0.5 * (1.0 + 2.0 * kappa / math.sinh(2.0 * kappa)) + params.beta * kappa * math.tanh(kappa)


def w1(xi: float, kappa: float, params: Params) -> float:
    """Bloch branch weight sqrt(k(1+xi) tanh(k(1+xi)) (alpha + beta k^2 (1+xi)^2))."""
    u = kappa * (1.0 + xi)
    return math.sqrt(u * math.tanh(u) * (params.alpha + params.beta * u * u))


def _w1_sq_derivs(kappa: float, params: Params):
    """(f, f', f'') of f(u) = k*u*tanh(k*u) * (alpha + beta*k^2*u^2) at u = 1."""
    a, b = params.alpha, params.beta
    k = kappa
    t = math.tanh(k)
    s2 = _sech(k) ** 2
    g = k * t
    gp = k * t + k * k * s2
    gpp = 2.0 * k * k * s2 - 2.0 * k**3 * s2 * t
    h = a + b * k * k
    hp = 2.0 * b * k * k
    hpp = 2.0 * b * k * k
    f = g * h
    fp = gp * h + g * hp
    fpp = gpp * h + 2.0 * gp * hp + g * hpp
    return f, fp, fpp


def w1_prime0(kappa: float, params: Params) -> float:
    """w1'(0); equals kappa * e_star."""
    f, fp, _ = _w1_sq_derivs(kappa, params)
    return fp / (2.0 * math.sqrt(f))


def w1_pp0(kappa: float, params: Params) -> float:
    """w1''(0); positive whenever alpha <= 1."""
    f, fp, fpp = _w1_sq_derivs(kappa, params)
    return fpp / (2.0 * math.sqrt(f)) - fp * fp / (4.0 * f**1.5)


def _c_of_kappa(kappa: float, params: Params) -> float:
    """Second-harmonic interaction coefficient c(kappa).

    Uses the cosh-normalized dispersion value in the denominator so large
    kappa stays finite: c = -1 - k(1 + 2 sech 2k) / ((alpha+4 beta k^2) tanh 2k - 2k).
    """
    a, b = params.alpha, params.beta
    k2x = 2.0 * kappa
    denom = (a + b * k2x * k2x) * math.tanh(k2x) - k2x
    return -1.0 - kappa * (1.0 + 2.0 * _sech(k2x)) / denom


def _chi_tilde_raw(kappa: float, params: Params, ck: float) -> float:
    a, b = params.alpha, params.beta
    k = kappa
    return (
        (9.0 * a * b + 16.0) * k
        - 12.0 * a * b * k * math.cosh(2.0 * k)
        + 3.0 * a * b * k * math.cosh(4.0 * k)
        - 8.0 * a * (2.0 * ck - 1.0) * math.sinh(2.0 * k)
        - 4.0 * a * (ck + 2.0) * math.sinh(4.0 * k)
    )


def chi_tilde_value(kappa: float, params: Params) -> float:
    """Trig-polynomial numerator of the k2 coefficient."""
    return _chi_tilde_raw(kappa, params, _c_of_kappa(kappa, params))


def k2_coefficient(kappa: float, params: Params) -> float:
    """Quadratic correction k2 of the wave number expansion k_eps = k + eps^2 k2."""
    a, b = params.alpha, params.beta
    ck = _c_of_kappa(kappa, params)
    d = 32.0 * a * (2.0 * b * kappa * (math.cosh(2.0 * kappa) - 1.0) + 2.0 * kappa - math.sinh(2.0 * kappa))
    return kappa**3 * _chi_tilde_raw(kappa, params, ck) / d


def chi_value(kappa: float, params: Params) -> float:
    """Rational index component chi(sigma, T~) with sigma = tanh k, T~ = beta k^2/alpha."""
    sig = math.tanh(kappa)
    s2 = sig * sig
    T = params.beta * kappa * kappa / params.alpha
    denom = s2 - T * (3.0 - s2)
    if abs(denom) < RESONANCE_TOL * max(1.0, s2, abs(T * (3.0 - s2))):
        raise SigmaTildeResonance(
            f"sigma^2 - T~(3 - sigma^2) vanishes at kappa={kappa:.12g}"
        )
    return (
        ((1.0 - s2) * (9.0 - s2) + T * (3.0 - s2) * (7.0 - s2)) / denom
        + 8.0 * s2
        - 2.0 * (1.0 - s2) ** 2 * (1.0 + T)
        - 3.0 * s2 * T / (1.0 + T)
    )


@dataclass(frozen=True)
class IndexBundle:
    """All closed-form index quantities at one parameter point (single root)."""

    kappa: float
    sigma: float          # tanh(kappa)
    T_tilde: float        # beta*kappa^2/alpha
    e_star: float
    w1pp: float           # w1''(0)
    k2: float
    chi: float
    C: float              # Theorem-form index (cross-checked against rewrite)
    C_tilde: float        # w1''(0) * C
    nu: float             # Schrodinger nonlinearity coefficient
    lambda_nls: float     # Schrodinger dispersion coefficient
    c_dc_kappa: float     # kappa/(e*-1)
    chi_tilde: float      # diagnostic
    chi1: float           # diagnostic
    mu1: float            # diagnostic
    C_rewrite: float      # diagnostic: chi-form of C


def _select_kappa(params: Params, root: int | None) -> float:
    region = solve_kappa(params)
    if region.tag == "None":
        raise NoPositiveRoot(
            f"no positive dispersion root at alpha={params.alpha}, beta={params.beta}"
        )
    if region.tag == "II":
        if root not in (1, 2):
            raise NoPositiveRoot(
                "region II has two roots; select root=1 or root=2"
            )
        return region.roots[root - 1]
    return region.single_root


def index_bundle(params: Params, root: int | None = None, kappa: float | None = None) -> IndexBundle:
    """Evaluate every index quantity at (alpha, beta).

    In region II a root must be selected (root=1 or 2, or an explicit kappa).
    The index C is computed through its two independent closed forms and the
    caller can compare bundle.C with bundle.C_rewrite; they agree to 1e-10
    relative wherever both are defined.
    """
    a = params.alpha
    if kappa is None:
        kappa = _select_kappa(params, root)

    es = e_star(kappa, params)
    if abs(es * es - a) < RESONANCE_TOL * max(1.0, es * es):
        raise DegenerateDenominator(
            f"e*^2 = alpha resonance at alpha={a:.12g}, kappa={kappa:.12g}"
        )

    sig = math.tanh(kappa)
    T = params.beta * kappa * kappa / a
    sh2k = math.sinh(2.0 * kappa)
    ch2 = math.cosh(kappa) ** 2

    w1pp = w1_pp0(kappa, params)
    k2 = k2_coefficient(kappa, params)
    chi = chi_value(kappa, params)
    chit = chi_tilde_value(kappa, params)
    cdck = kappa / (es - 1.0)
    chi1 = 1.0 + kappa * es / (a * sh2k)

    head = a * kappa * kappa * sh2k / (2.0 * (es * es - a)) * chi1 * chi1
    C = head - 2.0 * kappa * k2 / cdck
    C_rewrite = head + kappa**3 * ch2 * chi / 8.0

    mu1 = es * es / a - 1.0
    nu = math.sqrt(a / (16.0 * kappa)) * (8.0 * chi1 * chi1 / (a * (1.0 + T) * mu1) + chi)
    lam = w1pp / (2.0 * math.sqrt(a * kappa))

    return IndexBundle(
        kappa=kappa, sigma=sig, T_tilde=T, e_star=es, w1pp=w1pp, k2=k2,
        chi=chi, C=C, C_tilde=w1pp * C, nu=nu, lambda_nls=lam,
        c_dc_kappa=cdck, chi_tilde=chit, chi1=chi1, mu1=mu1,
        C_rewrite=C_rewrite,
    )


def beta_of_kappa(alpha: float, kappa: float) -> float:
    """Invert the dispersion relation for beta at fixed alpha and kappa."""
    return (kappa / math.tanh(kappa) - alpha) / (kappa * kappa)


def rescaled_index(alpha: float, kappa: float) -> float:
    """C_hat(alpha, kappa) = 8 alpha (tanh k / k) (1 + k e*/(alpha sh 2k))^2 + (e*^2 - alpha) chi.

    Shares the sign of C(alpha, beta(alpha, kappa)) on regions I/III and is
    regular across the e*^2 = alpha locus by construction.  Its limit as
    kappa -> 0+ is the polynomial -4 alpha^2 + 23 alpha - 10.
    """
    beta = beta_of_kappa(alpha, kappa)
    if beta <= 0.0:
        raise ValueError(f"kappa={kappa} incompatible with alpha={alpha} (beta<=0)")
    params = Params(alpha, beta)
    es = e_star(kappa, params)
    chi = chi_value(kappa, params)
    chi1 = 1.0 + kappa * es / (alpha * math.sinh(2.0 * kappa))
    return 8.0 * alpha * math.tanh(kappa) / kappa * chi1 * chi1 + (es * es - alpha) * chi


def nls_coefficients(params: Params, root: int | None = None) -> tuple:
    """(lambda, nu) of the cubic Schrodinger reduction; focusing iff lambda*nu < 0."""
    bundle = index_bundle(params, root=root)
    return bundle.lambda_nls, bundle.nu


def limit_polynomial(alpha: float) -> float:
    """kappa -> 0 limit of the rescaled index."""
    return -4.0 * alpha * alpha + 23.0 * alpha - 10.0


def alpha_one() -> float:
    """Positive root below 1 of the limit polynomial: (23 - 3 sqrt(41))/8."""
    return (23.0 - 3.0 * math.sqrt(41.0)) / 8.0


def _max_rescaled_over_kappa(alpha: float, k_lo: float = 1e-3, k_hi: float = 10.0, n: int = 400):
    """Maximize C_hat(alpha, .) over kappa: coarse log scan + golden refinement."""
    span = math.log(k_hi / k_lo)
    grid = [k_lo * math.exp(span * i / (n - 1)) for i in range(n)]
    vals = []
    for k in grid:
        try:
            vals.append(rescaled_index(alpha, k))
        except (SigmaTildeResonance, ValueError):
            vals.append(-math.inf)
    i = max(range(n), key=lambda j: vals[j])
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, n - 1)]
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - invphi * (hi - lo)
    x2 = lo + invphi * (hi - lo)
    f1 = rescaled_index(alpha, x1)
    f2 = rescaled_index(alpha, x2)
    for _ in range(60):
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + invphi * (hi - lo)
            f2 = rescaled_index(alpha, x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - invphi * (hi - lo)
            f1 = rescaled_index(alpha, x1)
    k_best = 0.5 * (lo + hi)
    return rescaled_index(alpha, k_best), k_best


def find_alpha0(a_lo: float = 0.30, a_hi: float | None = None, tol: float = 1e-6) -> tuple:
    """Locate the alpha where the two kappa-roots of C_hat(alpha, .) merge.

    Below the merge point the rescaled index is negative for every kappa;
    above it a positive hump opens up.  Bisect on the sign of the hump height.
    Returns (alpha0, kappa_at_merge).
    """
    if a_hi is None:
        a_hi = alpha_one() - 1e-4
    g_lo, _ = _max_rescaled_over_kappa(a_lo)
    g_hi, _ = _max_rescaled_over_kappa(a_hi)
    if not (g_lo < 0.0 < g_hi):
        raise ValueError(
            f"alpha0 bracket invalid: C_hat max is {g_lo:.3g} at {a_lo}, {g_hi:.3g} at {a_hi}"
        )
    k_merge = math.nan
    while a_hi - a_lo > tol:
        mid = 0.5 * (a_lo + a_hi)
        g_mid, k_mid = _max_rescaled_over_kappa(mid)
        if g_mid < 0.0:
            a_lo = mid
        else:
            a_hi, k_merge = mid, k_mid
    return 0.5 * (a_lo + a_hi), k_merge
