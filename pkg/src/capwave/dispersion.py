"""Linear dispersion relation for capillary-gravity waves on finite depth.

The dispersion function is

    D(k) = (alpha + beta*k^2)*sinh(k) - k*cosh(k),

with alpha = gh/c^2 (inverse square Froude number) and beta = T/(h c^2)
(Weber number).  Positive simple roots of D are the admissible wave numbers
of small-amplitude periodic waves.  The parameter plane splits into

    I   : alpha in (0,1), beta > 0          -- exactly one positive root,
    III : alpha = 1, beta in (0,1/3)        -- exactly one positive root,
    II  : alpha > 1, two distinct positive roots (below the boundary curve).

For large k the hyperbolic terms overflow double precision, so root finding
works with the cosh-normalized form D(k)/cosh(k) = (alpha+beta*k^2)*tanh(k) - k,
which has the same roots and stays bounded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DoubleRootBoundary

__all__ = [
    "Params",
    "RegionTag",
    "dispersion_value",
    "dispersion_value_scaled",
    "solve_kappa",
    "dkappa_dbeta",
]

# Scan parameters for root bracketing (log-spaced grid, see solve_kappa).
K_MIN = 1e-6
K_MAX = 50.0
N_SCAN = 10_000

# Double-root detection tolerances on the cosh-normalized dispersion function.
DOUBLE_ROOT_TOL = 1e-9
DOUBLE_ROOT_DERIV_TOL = 1e-6


@dataclass(frozen=True)
class Params:
    """Dimensionless parameter pair (alpha, beta).

    alpha : gh/c^2, must be positive.
    beta  : T/(h c^2), must be nonnegative (all stability routines need > 0).
    """

    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > 0.0):
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if not (self.beta >= 0.0):
            raise ValueError(f"beta must be nonnegative, got {self.beta}")


@dataclass(frozen=True)
class RegionTag:
    """Classification of (alpha, beta) by its positive dispersion roots.

    tag is one of 'I', 'II', 'III', 'None'; roots holds the ordered positive
    simple roots (one for I/III, two for II, empty for None).
    """

    tag: str
    roots: tuple = field(default_factory=tuple)

    @property
    def single_root(self) -> float:
        if len(self.roots) != 1:
            raise ValueError(f"region {self.tag} has {len(self.roots)} roots")
        return self.roots[0]


def dispersion_value(k: float, params: Params) -> float:
    """D(k) = (alpha + beta k^2) sinh(k) - k cosh(k); odd in k."""
    return (params.alpha + params.beta * k * k) * math.sinh(k) - k * math.cosh(k)


def dispersion_value_scaled(k: float, params: Params) -> float:
    """D(k)/cosh(k); same roots as D but bounded for large |k|.

    Below |k| = 0.02 the direct form loses the leading digits to
    cancellation (alpha*tanh(k) ~ k), so the series
    (alpha-1)k + (beta - alpha/3)k^3 + ... is used there; its remainder is
    O(k^9), far below the achievable accuracy of the direct form.
    """
    a, b = params.alpha, params.beta
    if abs(k) < 0.02:
        k2 = k * k
        return k * ((a - 1.0) + k2 * ((b - a / 3.0) + k2 * (
            (2.0 * a / 15.0 - b / 3.0) + k2 * (2.0 * b / 15.0 - 17.0 * a / 315.0))))
    return (a + b * k * k) * math.tanh(k) - k


def _dispersion_scaled_deriv(k: float, params: Params) -> float:
    """d/dk of the cosh-normalized dispersion function."""
    t = math.tanh(k)
    return 2.0 * params.beta * k * t + (params.alpha + params.beta * k * k) * (1.0 - t * t) - 1.0


def _bisect_root(f, lo: float, hi: float, iters: int = 80) -> float:
    flo = f(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if fmid == 0.0:
            return mid
        if (flo < 0.0) == (fmid < 0.0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _scan_grid(k_max: float):
    span = math.log(k_max / K_MIN)
    return [K_MIN * math.exp(span * i / (N_SCAN - 1)) for i in range(N_SCAN)]


def solve_kappa(params: Params, k_max: float | None = None) -> RegionTag:
    """Find all positive simple dispersion roots and classify the region.

    Brackets sign changes of D(k)/cosh(k) on a log-spaced grid over
    (K_MIN, k_max], refines each by bisection, then applies one Newton polish.
    Raises DoubleRootBoundary when a critical point of the scaled dispersion
    function sits within tolerance of zero (parameters on the two-root
    boundary curve).  A 'None' tag is reported when the scan finds no root or
    the root count does not match any region definition.
    """
    a, b = params.alpha, params.beta
    if k_max is None:
        k_max = K_MAX
        if a > 1.0 and 0.0 < b < (K_MAX - a) / K_MAX**2:
            # the outer region-II root sits near k ~ 1/beta; widen the scan
            k_max = max(K_MAX, 1.5 / b + 20.0)

    f = lambda k: dispersion_value_scaled(k, params)
    fp = lambda k: _dispersion_scaled_deriv(k, params)

    grid = _scan_grid(k_max)
    vals = [f(k) for k in grid]

    roots = []
    for i in range(len(grid) - 1):
        if vals[i] == 0.0:
            roots.append(grid[i])
        elif (vals[i] < 0.0) != (vals[i + 1] < 0.0):
            r = _bisect_root(f, grid[i], grid[i + 1])
            d = fp(r)
            if d != 0.0:
                r_new = r - f(r) / d
                if grid[i] <= r_new <= grid[i + 1]:
                    r = r_new
            roots.append(r)

    # Double-root detection: critical points of the scaled dispersion function
    # where the function value itself is tiny flag the region-II boundary.
    for i in range(len(grid) - 1):
        d0, d1 = fp(grid[i]), fp(grid[i + 1])
        if (d0 < 0.0) != (d1 < 0.0):
            kc = _bisect_root(fp, grid[i], grid[i + 1], iters=60)
            if abs(f(kc)) < DOUBLE_ROOT_TOL and abs(fp(kc)) < DOUBLE_ROOT_DERIV_TOL:
                raise DoubleRootBoundary(
                    f"double dispersion root near k={kc:.12g} for "
                    f"alpha={a:.12g}, beta={b:.12g}"
                )

    deduped = []
    for r in sorted(roots):
        if not deduped or r - deduped[-1] > 1e-9 * (1.0 + r):
            deduped.append(r)
    roots = tuple(deduped)
    if len(roots) == 1 and 0.0 < a < 1.0 and b > 0.0:
        tag = "I"
    elif len(roots) == 1 and a == 1.0 and 0.0 < b < 1.0 / 3.0:
        tag = "III"
    elif len(roots) == 2 and a > 1.0:
        tag = "II"
    else:
        tag = "None"
    return RegionTag(tag=tag, roots=roots)


def dkappa_dbeta(params: Params) -> float:
    """Closed form of the beta-derivative of the wave number in regions I/III.

    Equal to -kappa^2 tanh(kappa) / (2 (e* - 1)), which is negative there.
    """
    from .indices import e_star  # local import avoids a module cycle

    region = solve_kappa(params)
    if region.tag not in ("I", "III"):
        from .errors import NoPositiveRoot

        raise NoPositiveRoot(
            f"dkappa_dbeta needs region I or III, got {region.tag} "
            f"at alpha={params.alpha}, beta={params.beta}"
        )
    kappa = region.single_root
    es = e_star(kappa, params)
    return -kappa * kappa * math.tanh(kappa) / (2.0 * (es - 1.0))
