"""Second-order Stokes expansion of the periodic wave and its kernel vectors.

Profiles are stored as short cosine/sine coefficient arrays (the surface
elevation is even, the surface potential odd):

    zeta_eps(x) = eps*sinh(k)*cos x
                  + eps^2*( (k/4)(1+c(k)) sinh(2k) cos 2x - k^2/(4 alpha) ),
    phi_eps(x)  = eps*cosh(k)*sin x
                  + eps^2*( (k/4)(c(k) cosh(2k) + 2 sinh^2 k) sin 2x ),
    k_eps       = kappa + eps^2 k2,

dropping O(eps^3).  The generalized kernel of the zero-Floquet linearized
operator is spanned (through the same order) by four explicit trigonometric
pairs; their leading terms are produced here as residual test vectors for the
assembled operator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dispersion import Params
from .errors import SurfaceTouchdown
from .indices import k2_coefficient, _c_of_kappa

__all__ = ["TrigPoly", "TrigPair", "ProfileExpansion", "KernelBasis",
           "profile_expansion", "kernel_basis", "EPS_CEILING"]

EPS_CEILING = 0.1


class TrigPoly:
    """Real trigonometric polynomial c0 + sum c_m cos(mx) + sum s_m sin(mx).

    cos_coeffs[m] multiplies cos(mx) (m=0 is the mean), sin_coeffs[m]
    multiplies sin(mx) (entry 0 unused, kept for aligned indexing).
    """

    def __init__(self, cos_coeffs=(), sin_coeffs=()):
        self.cos = np.asarray(cos_coeffs, dtype=float)
        self.sin = np.asarray(sin_coeffs, dtype=float)
        if self.cos.size == 0:
            self.cos = np.zeros(1)
        if self.sin.size == 0:
            self.sin = np.zeros(1)

    @property
    def degree(self) -> int:
        return max(self.cos.size, self.sin.size) - 1

    def is_even(self, tol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.sin) <= tol))

    def is_odd(self, tol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.cos) <= tol))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x) + self.cos[0]
        for m in range(1, self.cos.size):
            out = out + self.cos[m] * np.cos(m * x)
        for m in range(1, self.sin.size):
            out = out + self.sin[m] * np.sin(m * x)
        return out

    def derivative(self) -> "TrigPoly":
        n = self.degree
        dc = np.zeros(n + 1)
        ds = np.zeros(n + 1)
        for m in range(1, n + 1):
            if m < self.sin.size:
                dc[m] = m * self.sin[m]
            if m < self.cos.size:
                ds[m] = -m * self.cos[m]
        return TrigPoly(dc, ds)

    def to_complex(self, n_modes: int) -> np.ndarray:
        """Complex Fourier coefficients on modes -n_modes..n_modes."""
        out = np.zeros(2 * n_modes + 1, dtype=complex)
        c = n_modes  # index of mode 0
        out[c] = self.cos[0]
        for m in range(1, min(self.cos.size, n_modes + 1)):
            out[c + m] += 0.5 * self.cos[m]
            out[c - m] += 0.5 * self.cos[m]
        for m in range(1, min(self.sin.size, n_modes + 1)):
            out[c + m] += -0.5j * self.sin[m]
            out[c - m] += +0.5j * self.sin[m]
        return out


@dataclass(frozen=True)
class TrigPair:
    """A two-component field (surface elevation part, potential part)."""

    top: TrigPoly
    bottom: TrigPoly

    def parity_signature(self, tol: float = 0.0) -> str:
        """'(even,odd)' or '(odd,even)' when the pair is parity pure."""
        if self.top.is_even(tol) and self.bottom.is_odd(tol):
            return "(even,odd)"
        if self.top.is_odd(tol) and self.bottom.is_even(tol):
            return "(odd,even)"
        return "mixed"


@dataclass(frozen=True)
class ProfileExpansion:
    """Second-order Stokes wave data at amplitude eps."""

    kappa: float
    k2: float
    eps: float
    zeta: TrigPoly        # even; modes 0..2, eps factors included
    phi: TrigPoly         # odd; modes 1..2, eps factors included
    k_eps: float          # kappa + eps^2 k2

    @property
    def zeta_coeffs(self) -> np.ndarray:
        return self.zeta.cos.copy()

    @property
    def phi_coeffs(self) -> np.ndarray:
        return self.phi.sin.copy()

    def zeta_first_order(self) -> TrigPoly:
        """The eps*zeta_1 part alone (the pure mode-1 content)."""
        c = np.zeros(2)
        if self.zeta.cos.size > 1:
            c[1] = self.zeta.cos[1]
        return TrigPoly(c, ())


@dataclass(frozen=True)
class KernelBasis:
    """Truncated generalized-kernel vectors of the zero-Floquet operator.

    q1, q3 carry their stated first-order corrections; q2 likewise (its
    second-order coefficients are parity-known only); q4 is the first-order
    pair.  lambda0 = kappa^2/(alpha sinh 2 kappa).
    """

    q1: TrigPair
    q2: TrigPair
    q3: TrigPair
    q4: TrigPair
    lambda0: float
    eps: float


def profile_expansion(params: Params, kappa: float, eps: float) -> ProfileExpansion:
    """Build the second-order profile at amplitude eps (|eps| <= 0.1).

    Raises SurfaceTouchdown if the truncated surface reaches the bottom.
    """
    if abs(eps) > EPS_CEILING:
        raise ValueError(f"|eps| = {abs(eps)} exceeds the expansion ceiling {EPS_CEILING}")
    a = params.alpha
    k2 = k2_coefficient(kappa, params)
    ck = _c_of_kappa(kappa, params)

    zc = np.zeros(3)
    zc[1] = eps * math.sinh(kappa)
    zc[0] = -eps * eps * kappa * kappa / (4.0 * a)
    zc[2] = eps * eps * 0.25 * kappa * (1.0 + ck) * math.sinh(2.0 * kappa)
    zeta = TrigPoly(zc, ())

    ps = np.zeros(3)
    ps[1] = eps * math.cosh(kappa)
    ps[2] = eps * eps * 0.25 * kappa * (ck * math.cosh(2.0 * kappa) + 2.0 * math.sinh(kappa) ** 2)
    phi = TrigPoly((), ps)

    x = np.linspace(0.0, 2.0 * math.pi, 721)
    if np.min(1.0 + zeta(x)) <= 0.0:
        raise SurfaceTouchdown(
            f"1 + zeta reaches zero at eps={eps}, kappa={kappa:.6g}"
        )

    return ProfileExpansion(kappa=kappa, k2=k2, eps=eps, zeta=zeta, phi=phi,
                            k_eps=kappa + eps * eps * k2)


def kernel_basis(profile: ProfileExpansion, params: Params) -> KernelBasis:
    """Truncated kernel vectors q1..q4 built from the profile coefficients."""
    a = params.alpha
    k = profile.kappa
    eps = profile.eps
    sh, ch = math.sinh(k), math.cosh(k)
    lam0 = k * k / (a * math.sinh(2.0 * k))

    # second-order profile coefficients with the eps^2 factor stripped
    ck = _c_of_kappa(k, params)
    z2_cos2 = 0.25 * k * (1.0 + ck) * math.sinh(2.0 * k)
    z2_mean = -k * k / (4.0 * a)
    p2_sin2 = 0.25 * k * (ck * math.cosh(2.0 * k) + 2.0 * sh * sh)

    # q1 = (-sh sin x, ch cos x) + eps (dz2/dx, dphi2/dx - k sh sin(x) dz1/dx)
    #   dz2/dx = -2 z2 sin 2x;  dphi2/dx = 2 p2 cos 2x
    #   -k sh sin(x) * dz1/dx = k sh^2 sin^2 x = (k sh^2/2)(1 - cos 2x)
    q1_top = TrigPoly((), (0.0, -sh, eps * (-2.0 * z2_cos2)))
    q1_bot = TrigPoly(
        (eps * 0.5 * k * sh * sh, ch, eps * (2.0 * p2_sin2 - 0.5 * k * sh * sh)), ())

    # q2 = (sh cos x, ch sin x) + eps (2 zeta2, 2 phi2 - k sh sin(x) zeta1)
    #   -k sh sin(x) zeta1 = -k sh^2 sin x cos x = -(k sh^2/2) sin 2x
    q2_top = TrigPoly((eps * 2.0 * z2_mean, sh, eps * 2.0 * z2_cos2), ())
    q2_bot = TrigPoly((), (0.0, ch, eps * (2.0 * p2_sin2 - 0.5 * k * sh * sh)))

    # q3 = (0, 1) + eps lambda0 (-sh sin x, ch cos x)
    q3_top = TrigPoly((), (0.0, -eps * lam0 * sh))
    q3_bot = TrigPoly((1.0, eps * lam0 * ch), ())

    # q4 = (1/alpha, 0) + eps (k/2alpha)(ch cos x, -sh sin x)
    q4_top = TrigPoly((1.0 / a, eps * 0.5 * k * ch / a), ())
    q4_bot = TrigPoly((), (0.0, -eps * 0.5 * k * sh / a))

    return KernelBasis(
        q1=TrigPair(q1_top, q1_bot),
        q2=TrigPair(q2_top, q2_bot),
        q3=TrigPair(q3_top, q3_bot),
        q4=TrigPair(q4_top, q4_bot),
        lambda0=lam0,
        eps=eps,
    )
