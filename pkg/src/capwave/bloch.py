"""Unperturbed Bloch spectral curves, their crossings and Krein signatures.

At zero amplitude the Bloch operator at Floquet exponent xi is diagonalized
by Fourier modes, with purely imaginary eigenvalues i*lambda_j^pm(xi),

    lambda_j^pm(xi) = kappa(j+xi) +/- w_j(xi),
    w_j(xi) = sqrt( kappa(j+xi) tanh(kappa(j+xi)) (alpha + beta kappa^2 (j+xi)^2) ),

equivalently lambda_j^pm(xi) = sigma_pm(kappa(j+xi)) with
sigma_pm(k) = k +/- sqrt(k tanh(k)(alpha + beta k^2)).  Collisions of two
branches ("crossings") are the only places unstable spectrum can bifurcate
from at small amplitude.  Each purely imaginary eigenvalue carries a Krein
signature determined by its branch label; crossings of equal signature cannot
leave the imaginary axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .dispersion import Params
from .errors import CeilingTooLarge, UndefinedAtOrigin

__all__ = [
    "SpectralPoint",
    "Crossing",
    "lambda_branch",
    "sigma_curves",
    "omega_weight",
    "krein_signature",
    "find_crossings",
    "mode_ceiling",
    "sigma_minus_critical_point",
]

XI_SCAN_POINTS = 10_000
BISECT_TOL = 1e-12
MERGE_TOL = 1e-6
J_MAX_CAP = 64


@dataclass(frozen=True)
class SpectralPoint:
    """One eigenvalue i*value of the zero-amplitude Bloch operator."""

    j: int
    branch: str          # '+' or '-'
    xi: float
    value: float


@dataclass(frozen=True)
class Crossing:
    """A collision of two Bloch branches at (xi_ell, i*sigma_ell)."""

    xi_ell: float
    sigma_ell: float
    j: int
    j_prime: int
    branches: tuple      # (branch of j, branch of j_prime)
    multiplicity: int
    signatures_equal: bool | None   # None for the origin crossing

    @property
    def is_origin(self) -> bool:
        return self.multiplicity == 4 and self.sigma_ell == 0.0


def _w_of_k(k: float, params: Params) -> float:
    """sqrt(k tanh(k) (alpha + beta k^2)); even and nonnegative."""
    prod = k * math.tanh(k) * (params.alpha + params.beta * k * k)
    return math.sqrt(prod) if prod > 0.0 else 0.0


def sigma_curves(k: float, params: Params) -> tuple:
    """(sigma_plus(k), sigma_minus(k)); satisfies sigma_plus(k) = -sigma_minus(-k)."""
    w = _w_of_k(k, params)
    return k + w, k - w


def _sigma_branch(k: float, branch: str, params: Params) -> float:
    w = _w_of_k(k, params)
    return k + w if branch == "+" else k - w


def lambda_branch(j: int, branch: str, xi: float, kappa: float, params: Params) -> float:
    """Imaginary part of the Bloch eigenvalue on branch (j, +/-) at xi."""
    return _sigma_branch(kappa * (j + xi), branch, params)


def omega_weight(j: int, xi: float, kappa: float, params: Params) -> float:
    """Dual-basis normalizer omega_j(xi) > 0 entering the symplectic pairing.

    The pairing of the branch-(j,+) eigenvector with itself is
    -4*pi*i*omega_j(xi); the '-' branch flips the sign.
    """
    u = kappa * (j + xi)
    if u == 0.0:
        raise UndefinedAtOrigin("omega is undefined at j + xi = 0")
    return math.sqrt((params.alpha + params.beta * u * u) / (u * math.tanh(u)))


def krein_signature(point: SpectralPoint) -> int:
    """Krein signature of a nonzero Bloch eigenvalue: +1 on '+', -1 on '-'.

    Operationalizes the sign of the symplectic self-pairing of the
    eigenvector under the positive normalizer omega_j(xi).
    """
    if point.j == 0 and point.xi == 0.0:
        raise UndefinedAtOrigin("Krein signature undefined at (j, xi) = (0, 0)")
    return +1 if point.branch == "+" else -1


def sigma_minus_critical_point(params: Params, kappa: float) -> float:
    """The unique maximizer kappa_c of sigma_minus on (0, kappa)."""
    f = lambda k: _sigma_minus_deriv(k, params)
    lo, hi = 1e-9 * kappa, kappa * (1.0 - 1e-12)
    flo = f(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if (fm < 0.0) == (flo < 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _sigma_minus_deriv(k: float, params: Params, h: float = 1e-7) -> float:
    sp1 = sigma_curves(k + h, params)[1]
    sm1 = sigma_curves(k - h, params)[1]
    return (sp1 - sm1) / (2.0 * h)


def _interval_min_abs_sigma(branch: str, k_lo: float, k_hi: float, params: Params,
                            kappa: float, kappa_c: float) -> float:
    """Exact min of |sigma_branch| over [k_lo, k_hi].

    sigma_minus has zeros at {0, kappa}, a single critical point kappa_c, and
    is monotone elsewhere; sigma_plus mirrors it under k -> -k.  The minimum
    of the absolute value is attained at an endpoint, an interior zero, or an
    interior critical point.
    """
    if branch == "+":
        # sigma_plus(k) = -sigma_minus(-k): reflect the interval
        return _interval_min_abs_sigma("-", -k_hi, -k_lo, params, kappa, kappa_c)
    cands = [k_lo, k_hi]
    for z in (0.0, kappa, kappa_c):
        if k_lo < z < k_hi:
            cands.append(z)
    return min(abs(sigma_curves(k, params)[1]) for k in cands)


def mode_ceiling(params: Params, kappa: float, sigma_max: float) -> int:
    """Smallest J such that |lambda_j^pm(xi)| > sigma_max for all |j| > J, xi.

    Uses the one-critical-point structure of the sigma curves to bound the
    minimum of |sigma| exactly on each mode interval.
    """
    kappa_c = sigma_minus_critical_point(params, kappa)
    j = 0
    while True:
        j += 1
        clear = True
        for jj in (j, -j):
            k_lo, k_hi = kappa * (jj - 0.5), kappa * (jj + 0.5)
            for branch in ("+", "-"):
                if _interval_min_abs_sigma(branch, k_lo, k_hi, params, kappa, kappa_c) <= sigma_max:
                    clear = False
        if clear:
            # monotone growth of w beyond this point keeps all larger |j| clear
            return j - 1
        if j > J_MAX_CAP:
            raise CeilingTooLarge(
                f"sigma_max={sigma_max} needs more than {J_MAX_CAP} modes"
            )


def _bisect_crossing(f, lo: float, hi: float) -> float:
    flo = f(lo)
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if hi - lo < BISECT_TOL:
            return mid
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm < 0.0) == (flo < 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def find_crossings(params: Params, kappa: float, sigma_max: float,
                   j_max: int | None = None) -> list:
    """All spectral crossings with |sigma_ell| <= sigma_max, origin included.

    Scans every ordered pair of branches (j,b), (j',b') over a dense xi grid
    in (-1/2, 1/2], bisects each sign change of the branch difference to
    1e-12 in xi, deduplicates under (xi, sigma) -> (-xi, -sigma), and merges
    coincident collisions (closer than 1e-6 in (xi, sigma)) with summed
    multiplicity.  The returned representative of each nonzero crossing has
    sigma_ell > 0, or xi_ell > 0 when sigma_ell = 0.
    """
    if j_max is None:
        j_max = mode_ceiling(params, kappa, sigma_max)
    elif mode_ceiling(params, kappa, sigma_max) > j_max:
        raise CeilingTooLarge(
            f"sigma_max={sigma_max} requires more modes than j_max={j_max}"
        )

    import numpy as np

    modes = [(j, b) for j in range(-j_max, j_max + 1) for b in ("+", "-")]
    xi_grid = np.array([-0.5 + (i + 1) / XI_SCAN_POINTS for i in range(XI_SCAN_POINTS)])

    # tabulate every branch value over the grid once
    table = {}
    for j, b in modes:
        k = kappa * (j + xi_grid)
        prod = k * np.tanh(k) * (params.alpha + params.beta * k * k)
        w = np.sqrt(np.maximum(prod, 0.0))
        table[(j, b)] = k + w if b == "+" else k - w

    found = []
    for ia in range(len(modes)):
        ja, ba = modes[ia]
        for ib in range(ia + 1, len(modes)):
            jb, bb = modes[ib]
            if ja == jb:
                continue  # same-mode branch collision only happens at the origin
            diff = table[(ja, ba)] - table[(jb, bb)]
            flips = np.nonzero(np.signbit(diff[:-1]) != np.signbit(diff[1:]))[0]
            if flips.size == 0:
                continue

            def f(xi, ja=ja, ba=ba, jb=jb, bb=bb):
                return (_sigma_branch(kappa * (ja + xi), ba, params)
                        - _sigma_branch(kappa * (jb + xi), bb, params))

            for i in flips:
                xi_c = _bisect_crossing(f, xi_grid[i], xi_grid[i + 1])
                sigma = _sigma_branch(kappa * (ja + xi_c), ba, params)
                if abs(sigma) > sigma_max:
                    continue
                if abs(sigma) < MERGE_TOL and abs(xi_c) < MERGE_TOL:
                    continue  # origin quadruple handled separately
                found.append((xi_c, sigma, ja, ba, jb, bb))

    # canonical representative under (xi, sigma) <-> (-xi, -sigma)
    canon = []
    for xi_c, sigma, ja, ba, jb, bb in found:
        if sigma < 0.0 or (sigma == 0.0 and xi_c < 0.0):
            xi_c, sigma = -xi_c, -sigma
            ja, jb = -ja, -jb
            ba = "+" if ba == "-" else "-"
            bb = "+" if bb == "-" else "-"
        if ja < jb:
            ja, ba, jb, bb = jb, bb, ja, ba
        canon.append((xi_c, sigma, ja, ba, jb, bb))

    # merge coincident collisions, multiplicity 2 per colliding pair
    merged = []
    for xi_c, sigma, ja, ba, jb, bb in sorted(set(
        (round(x, 14), round(s, 14), ja, ba, jb, bb) for x, s, ja, ba, jb, bb in canon
    )):
        placed = False
        for m in merged:
            if abs(m["xi"] - xi_c) < MERGE_TOL and abs(m["sigma"] - sigma) < MERGE_TOL:
                if (ja, ba, jb, bb) not in m["pairs"]:
                    m["pairs"].append((ja, ba, jb, bb))
                placed = True
                break
        if not placed:
            merged.append({"xi": xi_c, "sigma": sigma, "pairs": [(ja, ba, jb, bb)]})

    out = [Crossing(xi_ell=0.0, sigma_ell=0.0, j=0, j_prime=0,
                    branches=("+", "-"), multiplicity=4, signatures_equal=None)]
    for m in merged:
        ja, ba, jb, bb = m["pairs"][0]
        out.append(Crossing(
            xi_ell=m["xi"], sigma_ell=m["sigma"], j=ja, j_prime=jb,
            branches=(ba, bb), multiplicity=2 * len(m["pairs"]),
            signatures_equal=(ba == bb),
        ))
    out.sort(key=lambda c: (abs(c.sigma_ell), c.xi_ell, c.j, c.j_prime))
    return out
