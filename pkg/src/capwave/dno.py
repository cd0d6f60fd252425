"""Dirichlet-Neumann operator of the flattened fluid strip, as a dense matrix.

For a 2pi-periodic surface profile zeta(x) with 1 + zeta > 0, the operator
maps surface Dirichlet data phi to the (rescaled) normal derivative of the
potential Psi solving

    (kappa^2 (d_x + i xi)^2 + d_z^2) Psi = 0   in 0 < z < 1 + zeta,
    Psi = phi on z = 1 + zeta,   d_z Psi = 0 on z = 0,

with the surface extraction  G phi = (d_z - kappa^2 zeta_x (d_x + i xi)) Psi
evaluated on the surface.  The vertical coordinate is flattened by
z~ = z/(1+zeta); in the strip coordinates the problem becomes the
variable-coefficient equation

    kappa^2 [ Dx^2 F - 2 z~ a Dx dF - a^2 z~^2 ... ]  (see _assemble_full)

with a = zeta_x/(1+zeta), discretized by Fourier modes in x and Chebyshev
collocation in z~.  The extracted matrix acts on Fourier coefficients of
modes -N..N; the solve itself runs on a padded band so truncation noise
stays out of the returned block.  At zeta = 0 the system decouples per mode
and reduces to independent two-point boundary value problems.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SolverSingular, SurfaceTouchdown

__all__ = ["DNMatrix", "dn_matrix", "dn_first_order", "dn_xi_derivative",
           "chebyshev_lobatto", "flat_dn_diagonal", "suggest_nz", "DEFAULT_PAD"]

DEFAULT_PAD = 6
_GRID = 512  # sampling grid for coefficient functions (profiles have degree <= 2)


@dataclass(frozen=True)
class DNMatrix:
    """Truncated Dirichlet-Neumann matrix on Fourier modes -N..N.

    matrix is Hermitian-symmetrized; asymmetry records the max-norm of the
    discarded skew part (a discretization diagnostic).  matrix_band is the
    same operator on the padded solve band -band..band.
    """

    N: int
    xi: float
    kappa: float
    matrix: np.ndarray
    band: int
    matrix_band: np.ndarray
    asymmetry: float
    nz: int


def chebyshev_lobatto(nz: int):
    """Nodes z_0=0 < ... < z_{nz-1}=1 and the d/dz collocation matrix."""
    n = nz - 1
    # standard Chebyshev points on [-1,1], then map x -> z = (x+1)/2 ascending
    theta = np.pi * np.arange(nz) / n
    x = -np.cos(theta)                      # ascending from -1 to 1
    c = np.ones(nz)
    c[0] = c[-1] = 2.0
    c = c * (-1.0) ** np.arange(nz)
    X = np.tile(x, (nz, 1)).T
    dX = X - X.T + np.eye(nz)
    D = np.outer(c, 1.0 / c) / dX
    D -= np.diag(D.sum(axis=1))
    z = (x + 1.0) / 2.0
    return z, 2.0 * D


def flat_dn_diagonal(xi: float, kappa: float, N: int) -> np.ndarray:
    """Closed-form diagonal kappa|j+xi| tanh(kappa|j+xi|) of the flat operator."""
    j = np.arange(-N, N + 1, dtype=float)
    u = kappa * (j + xi)
    return u * np.tanh(u)


def suggest_nz(kappa: float, N: int, target: float = 1e-10) -> int:
    """Vertical resolution adequate for mode |j| = N at horizontal scale kappa.

    The vertical profiles behave like cosh(kappa(N+1/2) z); their Chebyshev
    coefficients decay like Bessel I_n at argument a = kappa(N+1/2)/2, so the
    smallest nz with (e a / 2 nz)^nz below target is returned (floor 32,
    rounded up to a multiple of 8).
    """
    a = 0.5 * kappa * (N + 0.5)
    nz = 32
    while nz < 4096:
        t = math.e * a / (2.0 * nz)
        if t < 1.0 and nz * math.log(t) < math.log(target):
            break
        nz += 8
    return nz


def _zeta_poly_from_cos(zeta_coeffs) -> "np.ndarray":
    c = np.asarray(zeta_coeffs, dtype=float)
    return c


def _sample_series_cos(c: np.ndarray, x: np.ndarray) -> np.ndarray:
    out = np.full_like(x, c[0] if c.size else 0.0)
    for m in range(1, c.size):
        out += c[m] * np.cos(m * x)
    return out


def _fft_coeffs(values: np.ndarray, band: int) -> np.ndarray:
    """Complex Fourier coefficients on modes -band..band from grid samples."""
    fh = np.fft.fft(values) / values.size
    out = np.empty(2 * band + 1, dtype=complex)
    for m in range(-band, band + 1):
        out[m + band] = fh[m % values.size]
    return out


def _conv_matrix(coeffs: np.ndarray, band_out: int) -> np.ndarray:
    """Toeplitz multiplication matrix T[j,j'] = f_(j-j') on modes -band..band."""
    half = (coeffs.size - 1) // 2
    T = np.zeros((2 * band_out + 1, 2 * band_out + 1), dtype=complex)
    for j in range(-band_out, band_out + 1):
        for jp in range(-band_out, band_out + 1):
            m = j - jp
            if -half <= m <= half:
                T[j + band_out, jp + band_out] = coeffs[m + half]
    return T


def _coefficient_fields(zeta_cos: np.ndarray, kappa: float, band: int):
    """Fourier data of the flattened-problem coefficient functions."""
    x = 2.0 * np.pi * np.arange(_GRID) / _GRID
    zeta = _sample_series_cos(zeta_cos, x)
    dz = np.zeros_like(x)
    d2z = np.zeros_like(x)
    for m in range(1, zeta_cos.size):
        dz += -m * zeta_cos[m] * np.sin(m * x)
        d2z += -m * m * zeta_cos[m] * np.cos(m * x)
    r = 1.0 + zeta
    if np.min(r) <= 0.0:
        raise SurfaceTouchdown(f"min(1+zeta) = {np.min(r):.6g} <= 0")
    a = dz / r
    fields = {
        "a": a,
        "a2": a * a,
        "c2": 2.0 * a * a - d2z / r,
        "rm2": 1.0 / (r * r),
        "b1": (1.0 + kappa**2 * dz * dz) / r,
        "dzeta": dz,
    }
    return {k: _fft_coeffs(v, 2 * band) for k, v in fields.items()}


def _assemble_full(zeta_cos: np.ndarray, xi: float, kappa: float,
                   band: int, nz: int):
    """Dense collocation matrix of the flattened elliptic problem.

    Unknown layout: U[j, m] = Fourier mode j of Phi at vertical node z_m,
    flattened row-major.  Interior rows carry the PDE

        kappa^2 [ Dx^2 F - 2 z a Dx F_z + a^2 z^2 F_zz + (2a^2 - zeta''/r) z F_z ]
        + (1/r^2) F_zz = 0,

    the top row the Dirichlet condition, the bottom row F_z = 0.
    """
    z, Dz = chebyshev_lobatto(nz)
    Dz2 = Dz @ Dz
    nm = 2 * band + 1
    coef = _coefficient_fields(zeta_cos, kappa, band)

    Ca = _conv_matrix(coef["a"], band)
    Ca2 = _conv_matrix(coef["a2"], band)
    Cc2 = _conv_matrix(coef["c2"], band)
    Crm2 = _conv_matrix(coef["rm2"], band)

    jj = np.arange(-band, band + 1, dtype=float)
    dxi = 1j * (jj + xi)

    ZD = z[:, None] * Dz
    Z2D2 = (z * z)[:, None] * Dz2

    big = np.zeros((nm, nz, nm, nz), dtype=complex)
    idx = np.arange(nm)
    # kappa^2 Dx^2: mode-diagonal, z-identity
    big[idx, :, idx, :] += (kappa**2 * dxi**2)[:, None, None] * np.eye(nz)
    # -2 kappa^2 z a Dx F_z : conv(a) acting after Dx on the source mode
    big += np.einsum("ab,cd->acbd", -2.0 * kappa**2 * (Ca * dxi[None, :]), ZD)
    # + kappa^2 a^2 z^2 F_zz
    big += np.einsum("ab,cd->acbd", kappa**2 * Ca2, Z2D2)
    # + kappa^2 (2a^2 - zeta''/r) z F_z
    big += np.einsum("ab,cd->acbd", kappa**2 * Cc2, ZD)
    # + (1/r^2) F_zz
    big += np.einsum("ab,cd->acbd", Crm2, Dz2)

    # boundary rows
    for j in range(nm):
        big[j, nz - 1, :, :] = 0.0
        big[j, nz - 1, j, nz - 1] = 1.0
        big[j, 0, :, :] = 0.0
        big[j, 0, j, :] = Dz[0, :]

    A = big.reshape(nm * nz, nm * nz)
    return A, z, Dz, coef


def _extract_boundary(U: np.ndarray, boundary_data: np.ndarray, xi: float,
                      kappa: float, band: int, Dz: np.ndarray, coef) -> np.ndarray:
    """Apply the surface extraction to solved columns U.

    U has shape (nm*nz, ncols); boundary_data the Dirichlet coefficients
    (nm, ncols).  Returns G applied to each column, shape (nm, ncols).
    """
    nm = 2 * band + 1
    nz = Dz.shape[0]
    ncols = U.shape[1]
    Uu = U.reshape(nm, nz, ncols)
    w = np.einsum("m,jmc->jc", Dz[-1, :], Uu)   # F_z at the surface, per mode

    Cb1 = _conv_matrix(coef["b1"], band)
    Cdz = _conv_matrix(coef["dzeta"], band)
    jj = np.arange(-band, band + 1, dtype=float)
    dxi = 1j * (jj + xi)

    out = Cb1 @ w
    out -= kappa**2 * (Cdz @ (dxi[:, None] * boundary_data))
    return out


def _solve_flat(xi: float, kappa: float, band: int, nz: int) -> np.ndarray:
    """Per-mode decoupled solve for the flat surface (zeta = 0)."""
    z, Dz = chebyshev_lobatto(nz)
    Dz2 = Dz @ Dz
    nm = 2 * band + 1
    jj = np.arange(-band, band + 1, dtype=float)
    g = np.zeros(nm)
    for i, j in enumerate(jj):
        sig2 = (kappa * (j + xi)) ** 2
        A = Dz2 - sig2 * np.eye(nz)
        A[0, :] = Dz[0, :]
        A[-1, :] = 0.0
        A[-1, -1] = 1.0
        rhs = np.zeros(nz)
        rhs[-1] = 1.0
        try:
            f = np.linalg.solve(A, rhs)
        except np.linalg.LinAlgError as exc:
            raise SolverSingular(f"flat vertical solve singular at mode {j}") from exc
        g[i] = Dz[-1, :] @ f
    return np.diag(g).astype(complex)


def dn_matrix(zeta_coeffs, xi: float, kappa: float, N: int, Nz: int,
              pad: int = DEFAULT_PAD) -> DNMatrix:
    """Dirichlet-Neumann matrix for the cosine-series profile zeta_coeffs.

    zeta_coeffs[m] multiplies cos(m x).  kappa is the horizontal scaling of
    the strip (the wave number of the underlying wave), xi the Floquet shift,
    N the output mode truncation, Nz >= 16 the vertical collocation size.
    The elliptic solve runs on the padded band -(N+pad)..(N+pad).
    """
    if Nz < 16:
        raise ValueError(f"Nz must be at least 16, got {Nz}")
    zeta_cos = _zeta_poly_from_cos(zeta_coeffs)
    band = N + pad

    if np.max(np.abs(zeta_cos)) == 0.0:
        G_full = _solve_flat(xi, kappa, band, Nz)
    else:
        A, z, Dz, coef = _assemble_full(zeta_cos, xi, kappa, band, Nz)
        nm = 2 * band + 1
        rhs = np.zeros((nm * Nz, nm), dtype=complex)
        bdata = np.eye(nm, dtype=complex)
        for c in range(nm):
            rhs[c * Nz + (Nz - 1), c] = 1.0
        # row equilibration tames the Chebyshev D^2 row growth (~Nz^4)
        scale = np.max(np.abs(A), axis=1)
        scale[scale == 0.0] = 1.0
        try:
            U = np.linalg.solve(A / scale[:, None], rhs / scale[:, None])
        except np.linalg.LinAlgError as exc:
            raise SolverSingular("flattened collocation system is singular") from exc
        G_full = _extract_boundary(U, bdata, xi, kappa, band, Dz, coef)

    sl = slice(pad, pad + 2 * N + 1)
    block = G_full[sl, sl]
    asym = float(np.max(np.abs(block - block.conj().T)))
    G_full = 0.5 * (G_full + G_full.conj().T)
    return DNMatrix(N=N, xi=xi, kappa=kappa, matrix=G_full[sl, sl].copy(),
                    band=band, matrix_band=G_full, asymmetry=asym, nz=Nz)


def dn_apply(dn: DNMatrix, phi_band: np.ndarray) -> np.ndarray:
    """Apply the padded-band operator to complex coefficients on -band..band."""
    return dn.matrix_band @ phi_band


def dn_first_order(zeta1_coeffs, xi: float, kappa: float, N: int) -> np.ndarray:
    """Analytic first-order surface variation of the DN operator.

    For G(eps*zeta1) = G0 + eps*G1 + O(eps^2),

        G1 = -G0 C G0 - kappa (d_x + i xi) ( zeta1 kappa (d_x + i xi) . ),

    with C the multiplication matrix of zeta1 and G0 the flat diagonal.
    Used as the expansion oracle for dn_matrix.
    """
    c = np.asarray(zeta1_coeffs, dtype=float)
    band = c.size - 1
    coeffs = np.zeros(2 * band + 1, dtype=complex)
    coeffs[band] = c[0]
    for m in range(1, c.size):
        coeffs[band + m] += 0.5 * c[m]
        coeffs[band - m] += 0.5 * c[m]
    C = _conv_matrix(coeffs, N)
    G0 = np.diag(flat_dn_diagonal(xi, kappa, N)).astype(complex)
    jj = np.arange(-N, N + 1, dtype=float)
    dxi = np.diag(1j * (jj + xi))
    return -G0 @ C @ G0 - kappa**2 * (dxi @ C @ dxi)


def dn_xi_derivative(kappa: float, N: int) -> np.ndarray:
    """Flat-surface Floquet derivative (1/(i kappa)) dG/dxi at xi = 0.

    Diagonal with entries -i (tanh(kappa j) + kappa j sech^2(kappa j)).
    """
    j = np.arange(-N, N + 1, dtype=float)
    u = kappa * j
    sech2 = 1.0 / np.cosh(u) ** 2
    return np.diag(-1j * (np.tanh(u) + u * sech2))
