"""Truncated Fourier matrix of the linearized Bloch operator and its probes.

The operator at amplitude eps and Floquet exponent xi acts on pairs
(elevation, good-unknown potential) of 2pi-periodic functions:

    L = [ k_e (d_x + i xi)(d_e .)      G_xi[zeta_e]            ]
        [ P_xi[zeta_e] - w_e           k_e d_e (d_x + i xi)    ]

with coefficient functions built from the wave profile,

    Z_e = (G0[zeta_e] phi_e + k_e^2 zeta_e' phi_e') / (1 + (k_e zeta_e')^2),
    v_e = k_e (phi_e' - Z_e zeta_e'),    d_e = 1 - v_e,
    w_e = alpha - d_e k_e Z_e',
    P_xi = beta k_e (d_x + i xi) [ (1 + (k_e zeta_e')^2)^{-3/2} k_e (d_x + i xi) . ],

where the curvature factor is expanded to second order in eps (matching the
profile truncation).  The matrix factors exactly as L = J A with A Hermitian
(Hamiltonian structure), so the spectrum is symmetric about the imaginary
axis; instabilities can only appear where eigenvalues collide.

Eigenvalue windows: near the origin and near each spectral crossing the
window radius is one third of the gap between the predicted colliding values
and the rest of the zero-amplitude spectrum at the probed xi (at xi = 0 this
reduces to roughly 0.3 times the smallest nonzero eigenvalue magnitude).  A
window capturing an unexpected eigenvalue count raises WindowOverlap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bloch import Crossing, sigma_curves
from .dispersion import Params, solve_kappa
from .dno import DEFAULT_PAD, dn_matrix, suggest_nz
from .errors import ConvergenceFailure, NoPositiveRoot, WindowOverlap
from .indices import e_star, index_bundle, w1
from .profiles import KernelBasis, ProfileExpansion, TrigPair, TrigPoly, profile_expansion

__all__ = [
    "OperatorMatrix", "SpectrumSlice", "OriginReport", "CrossingReport",
    "OperatorCoefficients", "operator_coefficients", "assemble",
    "eigenvalues", "kernel_residuals", "representation_check",
    "RepresentationReport", "spectrum_near_origin", "crossing_probe",
    "crossing_growth_rate", "truncation_drift", "reversibility_defect",
]

_GRID = 512


@dataclass(frozen=True)
class OperatorCoefficients:
    """Fourier data of the multiplier functions entering the operator."""

    k_eps: float
    d_hat: np.ndarray      # 1 - v_e
    w_hat: np.ndarray      # alpha - d_e k_e Z_e'
    Z_hat: np.ndarray
    v_hat: np.ndarray
    F_hat: np.ndarray      # curvature factor, second order in eps
    dn0_band: np.ndarray   # DN matrix at xi = 0 on the padded band
    band: int
    N: int
    Nz: int
    pad: int


@dataclass(frozen=True)
class OperatorMatrix:
    """Assembled Bloch operator L = J A on modes -N..N (block 2x2)."""

    eps: float
    xi: float
    N: int
    L: np.ndarray
    A: np.ndarray
    coeffs: OperatorCoefficients
    kappa: float
    dn_asymmetry: float


@dataclass(frozen=True)
class SpectrumSlice:
    """Full eigenvalue sets along a Floquet grid at fixed amplitude."""

    xi_grid: tuple
    eigenvalues: tuple     # tuple of complex arrays, 2(2N+1) each
    eps: float


@dataclass(frozen=True)
class OriginReport:
    """Near-origin window content and stability verdict."""

    verdict: str
    max_re: float
    floor: float
    window_eigs: tuple     # per-xi arrays of the four captured eigenvalues
    extent_xi: float       # largest |xi| with Re above floor (0 when stable)
    extent_predicted: float
    C_tilde: float


@dataclass(frozen=True)
class CrossingReport:
    """Window eigenvalues of one crossing probe."""

    crossing: Crossing
    eps: float
    xi_probed: tuple
    window_eigs: tuple
    max_abs_re: float
    floor: float
    signatures_equal: bool | None


def _fft_coeffs(values: np.ndarray, band: int) -> np.ndarray:
    fh = np.fft.fft(values) / values.size
    out = np.empty(2 * band + 1, dtype=complex)
    for m in range(-band, band + 1):
        out[m + band] = fh[m % values.size]
    return out


def _conv_matrix(coeffs: np.ndarray, band_out: int) -> np.ndarray:
    half = (coeffs.size - 1) // 2
    T = np.zeros((2 * band_out + 1, 2 * band_out + 1), dtype=complex)
    for j in range(-band_out, band_out + 1):
        for jp in range(-band_out, band_out + 1):
            m = j - jp
            if -half <= m <= half:
                T[j + band_out, jp + band_out] = coeffs[m + half]
    return T


def _eval_band(coeffs: np.ndarray, x: np.ndarray) -> np.ndarray:
    band = (coeffs.size - 1) // 2
    out = np.zeros_like(x, dtype=complex)
    for m in range(-band, band + 1):
        out += coeffs[m + band] * np.exp(1j * m * x)
    return out


def operator_coefficients(profile: ProfileExpansion, params: Params, N: int,
                          Nz: int | None = None, pad: int = DEFAULT_PAD) -> OperatorCoefficients:
    """Precompute the multiplier functions shared by every xi of a sweep."""
    ke = profile.k_eps
    if Nz is None:
        Nz = suggest_nz(ke, N)
    dn0 = dn_matrix(profile.zeta.cos, 0.0, ke, N, Nz, pad)
    band = dn0.band

    phi_band = profile.phi.to_complex(band)
    Gphi = dn0.matrix_band @ phi_band

    x = 2.0 * np.pi * np.arange(_GRID) / _GRID
    Gphi_x = _eval_band(Gphi, x).real
    dzeta = profile.zeta.derivative()(x)
    dphi = profile.phi.derivative()(x)

    kz2 = (ke * dzeta) ** 2
    Z = (Gphi_x + ke * ke * dzeta * dphi) / (1.0 + kz2)
    v = ke * (dphi - Z * dzeta)
    d = 1.0 - v

    Z_hat = _fft_coeffs(Z.astype(complex), band)
    m = np.arange(-band, band + 1)
    dZ_hat = 1j * m * Z_hat
    dZ_x = _eval_band(dZ_hat, x).real
    w = params.alpha - d * ke * dZ_x

    dz1 = profile.zeta_first_order().derivative()(x)
    F = 1.0 - 1.5 * (ke * dz1) ** 2

    return OperatorCoefficients(
        k_eps=ke,
        d_hat=_fft_coeffs(d.astype(complex), band),
        w_hat=_fft_coeffs(w.astype(complex), band),
        Z_hat=Z_hat,
        v_hat=_fft_coeffs(v.astype(complex), band),
        F_hat=_fft_coeffs(F.astype(complex), band),
        dn0_band=dn0.matrix_band,
        band=band, N=N, Nz=Nz, pad=pad,
    )


def assemble(profile: ProfileExpansion, params: Params, xi: float, N: int,
             Nz: int | None = None, pad: int = DEFAULT_PAD,
             coeffs: OperatorCoefficients | None = None) -> OperatorMatrix:
    """Build L = J A at one (eps, xi) point.

    The Hermitian factor A is formed first (with the DN block symmetrized)
    and L is produced exactly as J A, so the Hamiltonian structure holds to
    machine precision by construction.
    """
    if N < 8:
        raise ValueError(f"N must be at least 8, got {N}")
    if coeffs is None:
        coeffs = operator_coefficients(profile, params, N, Nz, pad)
    ke = coeffs.k_eps
    if xi == 0.0:
        G_band = coeffs.dn0_band
        asym = 0.0
    else:
        dn = dn_matrix(profile.zeta.cos, xi, ke, N, coeffs.Nz, coeffs.pad)
        G_band = dn.matrix_band
        asym = dn.asymmetry
    sl = slice(coeffs.pad, coeffs.pad + 2 * N + 1)
    G = G_band[sl, sl]

    Md = _conv_matrix(coeffs.d_hat, N)
    Mw = _conv_matrix(coeffs.w_hat, N)
    MF = _conv_matrix(coeffs.F_hat, N)
    jj = np.arange(-N, N + 1, dtype=float)
    Dxi = np.diag(1j * ke * (jj + xi))

    P = params.beta * (Dxi @ MF @ Dxi)
    A11 = -P + Mw
    A12 = -Md @ Dxi
    A21 = Dxi @ Md
    A22 = G

    A = np.block([[A11, A12], [A21, A22]])
    A = 0.5 * (A + A.conj().T)
    n = 2 * N + 1
    L = np.block([[A[n:, :n], A[n:, n:]], [-A[:n, :n], -A[:n, n:]]])

    return OperatorMatrix(eps=profile.eps, xi=xi, N=N, L=L, A=A,
                          coeffs=coeffs, kappa=profile.kappa, dn_asymmetry=asym)


def eigenvalues(op: OperatorMatrix) -> np.ndarray:
    """All 2(2N+1) eigenvalues, sorted by imaginary then real part."""
    try:
        vals = np.linalg.eigvals(op.L)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure("dense eigensolve did not converge") from exc
    order = np.lexsort((vals.real, vals.imag))
    return vals[order]


def _pair_to_vector(pair: TrigPair, N: int) -> np.ndarray:
    return np.concatenate([pair.top.to_complex(N), pair.bottom.to_complex(N)])


def _l2(v: np.ndarray) -> float:
    return float(math.sqrt(2.0 * math.pi) * np.linalg.norm(v))


def kernel_residuals(op: OperatorMatrix, basis: KernelBasis,
                     profile: ProfileExpansion, params: Params) -> dict:
    """Norms of the generalized-kernel relations at xi = 0.

    Returns ||L q1||, ||L q3||, ||L q2 - s q1|| and ||L q4 + q3|| with
    s = eps k_e (d k_e/d eps) / (c dk/dc) evaluated on the truncated
    expansion (d k_e/d eps = 2 eps k2).
    """
    if op.xi != 0.0:
        raise ValueError("kernel residuals are defined at xi = 0")
    N = op.N
    q1 = _pair_to_vector(basis.q1, N)
    q2 = _pair_to_vector(basis.q2, N)
    q3 = _pair_to_vector(basis.q3, N)
    q4 = _pair_to_vector(basis.q4, N)
    es = e_star(profile.kappa, params)
    s = profile.eps * profile.k_eps * (2.0 * profile.eps * profile.k2) * (es - 1.0) / profile.kappa
    return {
        "q1": _l2(op.L @ q1),
        "q2": _l2(op.L @ q2 - s * q1),
        "q3": _l2(op.L @ q3),
        "q4": _l2(op.L @ q4 + q3),
    }


@dataclass(frozen=True)
class RepresentationReport:
    """Computed vs closed-form 4x4 representation matrix at eps = 0."""

    xi: float
    computed: np.ndarray
    expected: np.ndarray
    max_error: float
    duality_defect: float


def _omega(j: int, xi: float, kappa: float, params: Params) -> float:
    u = kappa * (j + xi)
    return math.sqrt((params.alpha + params.beta * u * u) / (u * math.tanh(u)))


def representation_check(params: Params, kappa: float, xi: float,
                         N: int = 16, Nz: int | None = None) -> RepresentationReport:
    """Project the eps = 0 operator on the four near-zero modes.

    The basis is the explicit Fourier one (modes 0 and +-1 with the
    omega-weighted normalization); the projected 4x4 matrix is compared
    entrywise with its closed forms

        d11 = d22 = (i/2)(2 k xi + w1(-xi) - w1(xi)),
        d12 = -d21 = (2 k - w1(xi) - w1(-xi))/2,
        d33 = d44 = i k xi,  d34 = -(1 + beta k^2 xi^2/alpha),
        d43 = alpha k xi tanh(k xi),

    with vanishing 2x2 off-diagonal blocks.
    """
    profile = profile_expansion(params, kappa, 0.0)
    op = assemble(profile, params, xi, N, Nz)
    n = 2 * N + 1

    sh, ch = math.sinh(kappa), math.cosh(kappa)
    om_p = _omega(1, xi, kappa, params)
    om_m = _omega(-1, xi, kappa, params)
    om0 = 1.0 / math.tanh(kappa)

    def mode_vec(j: int, top: complex, bottom: complex) -> np.ndarray:
        v = np.zeros(2 * n, dtype=complex)
        v[N + j] = top
        v[n + N + j] = bottom
        return v

    p_plus = sh * math.sqrt(om0 / om_p) * mode_vec(1, 1j, om_p)
    p_minus = sh * math.sqrt(om0 / om_m) * mode_vec(-1, -1j, om_m)
    q1 = 0.5 * (p_plus + p_minus)
    q2 = 0.5j * (p_minus - p_plus)
    q3 = mode_vec(0, 0.0, 1.0)
    q4 = mode_vec(0, 1.0 / params.alpha, 0.0)

    def Jv(v: np.ndarray) -> np.ndarray:
        return np.concatenate([v[n:], -v[:n]])

    a11 = -1.0 / (math.pi * math.sinh(2.0 * kappa))
    a32 = -params.alpha / (2.0 * math.pi)
    duals = [a11 * Jv(q2), -a11 * Jv(q1), a32 * Jv(q4), -a32 * Jv(q3)]
    qs = [q1, q2, q3, q4]

    inner = lambda u, v: 2.0 * math.pi * np.vdot(u, v)
    gram = np.array([[inner(duals[i], qs[j]) for j in range(4)] for i in range(4)])
    duality_defect = float(np.max(np.abs(gram - np.eye(4))))

    D = np.array([[inner(duals[i], op.L @ qs[j]) for j in range(4)] for i in range(4)])

    w1p = w1(xi, kappa, params)
    w1m = w1(-xi, kappa, params)
    d11 = 0.5j * (2.0 * kappa * xi + w1m - w1p)
    d12 = 0.5 * (2.0 * kappa - w1p - w1m)
    expected = np.array([
        [d11, d12, 0.0, 0.0],
        [-d12, d11, 0.0, 0.0],
        [0.0, 0.0, 1j * kappa * xi, -(1.0 + params.beta * kappa**2 * xi**2 / params.alpha)],
        [0.0, 0.0, params.alpha * kappa * xi * math.tanh(kappa * xi), 1j * kappa * xi],
    ], dtype=complex)

    return RepresentationReport(
        xi=xi, computed=D, expected=expected,
        max_error=float(np.max(np.abs(D - expected))),
        duality_defect=duality_defect,
    )


def _flat_spectrum(params: Params, kappa: float, xi: float, N: int) -> np.ndarray:
    jj = np.arange(-N, N + 1, dtype=float)
    k = kappa * (jj + xi)
    w = np.sqrt(np.maximum(k * np.tanh(k) * (params.alpha + params.beta * k * k), 0.0))
    return np.concatenate([k + w, k - w])


def _origin_family(params: Params, kappa: float, xi: float) -> np.ndarray:
    s0p, s0m = sigma_curves(kappa * xi, params)
    s1m = sigma_curves(kappa * (1 + xi), params)[1]
    sm1p = sigma_curves(kappa * (-1 + xi), params)[0]
    return np.array([s0p, s0m, s1m, sm1p])


def _window_capture(eigs: np.ndarray, centers: np.ndarray, radius: float) -> np.ndarray:
    dist = np.min(np.abs(eigs[:, None] - 1j * centers[None, :]), axis=1)
    return eigs[dist < radius]


def _rest_spectrum(params: Params, kappa: float, xi: float, N: int,
                   family: np.ndarray) -> np.ndarray:
    """Zero-amplitude eigenvalues at xi excluding the tracked family."""
    flat = _flat_spectrum(params, kappa, xi, N)
    dist = np.min(np.abs(flat[:, None] - family[None, :]), axis=1)
    return flat[dist > 1e-9 * (1.0 + np.abs(flat))]


def _family_window_radius(family: np.ndarray, rest: np.ndarray) -> float:
    if rest.size == 0:
        return 1.0
    sep = np.min(np.abs(family[:, None] - rest[None, :]))
    return sep / 3.0


def _origin_window_task(task):
    """One xi point of the near-origin sweep (top level for pool pickling)."""
    profile, params, xi, N, coeffs, kappa = task
    op = assemble(profile, params, xi, N, coeffs=coeffs)
    eigs = eigenvalues(op)
    family = _origin_family(params, kappa, xi)
    rest = _rest_spectrum(params, kappa, xi, N, family)
    radius = _family_window_radius(family, rest)
    captured = _window_capture(eigs, family, radius)
    if captured.size != 4:
        raise WindowOverlap(
            f"origin window captured {captured.size} eigenvalues at xi={xi}"
        )
    return eigs, captured


def spectrum_near_origin(params: Params, eps: float, xi_grid, N: int = 16,
                         Nz: int | None = None, root: int | None = None,
                         floor: float | None = None,
                         with_drift_floor: bool = False, jobs: int = 1):
    """Eigenvalues near the origin along a Floquet grid, with verdict.

    Captures the four eigenvalues continuing the zero-amplitude origin family
    at every xi of the grid (WindowOverlap if the count differs), flags
    UNSTABLE when a real part exceeds the floor, and reports the xi-extent of
    the unstable bubble together with its predicted size
    sqrt(-2C/w1''(0)) * eps.  xi = 0 itself is a defective (Jordan) point of
    the exact operator and is best kept off the grid.
    """
    region = solve_kappa(params)
    if region.tag == "None":
        raise NoPositiveRoot(f"no wave at alpha={params.alpha}, beta={params.beta}")
    kappa = region.roots[root - 1] if region.tag == "II" else region.single_root

    profile = profile_for(params, kappa, eps)
    coeffs = operator_coefficients(profile, params, N, Nz)

    from .parallel import map_ordered

    tasks = [(profile, params, xi, N, coeffs, kappa) for xi in xi_grid]
    results = map_ordered(_origin_window_task, tasks, jobs)
    all_eigs = [r[0] for r in results]
    window_eigs = tuple(r[1] for r in results)
    max_re = max(float(np.max(np.abs(w.real))) for w in window_eigs)

    if floor is None:
        if with_drift_floor:
            i_worst = int(np.argmax([np.max(np.abs(w.real)) for w in window_eigs]))
            drift = truncation_drift(profile, params, xi_grid[i_worst], N,
                                     centers=_origin_family(params, kappa, xi_grid[i_worst]),
                                     rest_modes=N)
            floor = max(10.0 * drift, 1e-10)
        else:
            floor = 1e-7

    bundle = index_bundle(params, kappa=kappa)
    pred = math.sqrt(max(0.0, -2.0 * bundle.C / bundle.w1pp)) * abs(eps) if bundle.w1pp != 0.0 else 0.0

    extent = 0.0
    for xi, w in zip(xi_grid, window_eigs):
        if np.max(np.abs(w.real)) > floor:
            extent = max(extent, abs(xi))
    verdict = "UNSTABLE" if max_re > floor else "STABLE"

    slice_ = SpectrumSlice(xi_grid=tuple(xi_grid),
                           eigenvalues=tuple(all_eigs), eps=eps)
    report = OriginReport(verdict=verdict, max_re=max_re, floor=floor,
                          window_eigs=window_eigs, extent_xi=extent,
                          extent_predicted=pred, C_tilde=bundle.C_tilde)
    return slice_, report


def profile_for(params: Params, kappa: float, eps: float) -> ProfileExpansion:
    return profile_expansion(params, kappa, eps)


def truncation_drift(profile: ProfileExpansion, params: Params, xi: float,
                     N: int, centers: np.ndarray, rest_modes: int,
                     dN: int = 8) -> float:
    """Window-eigenvalue movement when the truncation grows from N to N+dN."""
    kappa = profile.kappa
    rest = _rest_spectrum(params, kappa, xi, rest_modes, centers)
    radius = _family_window_radius(centers, rest)

    def window(n_modes: int) -> np.ndarray:
        nz = suggest_nz(profile.k_eps, n_modes)
        op = assemble(profile, params, xi, n_modes, Nz=nz)
        return _window_capture(eigenvalues(op), centers, radius)

    w1_, w2_ = window(N), window(N + dN)
    if w1_.size != w2_.size or w1_.size == 0:
        return float("inf")
    d = np.abs(w1_[:, None] - w2_[None, :])
    return float(max(np.max(np.min(d, axis=0)), np.max(np.min(d, axis=1))))


def crossing_probe(params: Params, crossing: Crossing, eps: float,
                   N: int | None = None, Nz: int | None = None,
                   xi_offsets=(-0.5, 0.0, 0.5), offset_scale: float | None = None,
                   root: int | None = None, kappa: float | None = None,
                   floor: float | None = None) -> CrossingReport:
    """Eigenvalues inside the window of one nonzero crossing, near xi_ell.

    Probes xi = xi_ell + t*offset_scale for t in xi_offsets (offset_scale
    defaults to |eps|/4) and captures the two eigenvalues continuing the
    colliding pair.  Raises WindowOverlap when the captured count is wrong.
    """
    if crossing.is_origin:
        raise ValueError("use spectrum_near_origin for the origin crossing")
    if kappa is None:
        region = solve_kappa(params)
        if region.tag == "None":
            raise NoPositiveRoot("no wave at these parameters")
        kappa = region.roots[root - 1] if region.tag == "II" else region.single_root
    min_N = abs(crossing.j) + abs(crossing.j_prime) + 6
    if N is None:
        N = max(12, min_N)
    if N < min_N:
        raise ValueError(f"N={N} below the required {min_N} for this crossing")

    profile = profile_for(params, kappa, eps)
    coeffs = operator_coefficients(profile, params, N, Nz)
    if offset_scale is None:
        offset_scale = abs(eps) / 4.0

    expect = crossing.multiplicity
    xi_list = [crossing.xi_ell + t * offset_scale for t in xi_offsets]
    window_eigs = []
    for xi in xi_list:
        op = assemble(profile, params, xi, N, coeffs=coeffs)
        eigs = eigenvalues(op)
        b1, b2 = crossing.branches
        s1 = sigma_curves(kappa * (crossing.j + xi), params)[0 if b1 == "+" else 1]
        s2 = sigma_curves(kappa * (crossing.j_prime + xi), params)[0 if b2 == "+" else 1]
        pair = np.array([s1, s2])
        rest = _rest_spectrum(params, kappa, xi, N, pair)
        radius = _family_window_radius(pair, rest)
        captured = _window_capture(eigs, pair, radius)
        if captured.size != expect:
            raise WindowOverlap(
                f"crossing window captured {captured.size} eigenvalues "
                f"(expected {expect}) at xi={xi:.6g}"
            )
        window_eigs.append(captured)

    max_abs_re = max(float(np.max(np.abs(w.real))) for w in window_eigs)
    if floor is None:
        floor = 1e-7
    return CrossingReport(crossing=crossing, eps=eps, xi_probed=tuple(xi_list),
                          window_eigs=tuple(window_eigs), max_abs_re=max_abs_re,
                          floor=floor, signatures_equal=crossing.signatures_equal)


def _crossing_pair(params: Params, kappa: float, crossing: Crossing, xi: float,
                   profile, coeffs, n_use: int):
    """The two window eigenvalues continuing the colliding pair at xi."""
    op = assemble(profile, params, xi, n_use, coeffs=coeffs)
    eigs = eigenvalues(op)
    b1, b2 = crossing.branches
    s1 = sigma_curves(kappa * (crossing.j + xi), params)[0 if b1 == "+" else 1]
    s2 = sigma_curves(kappa * (crossing.j_prime + xi), params)[0 if b2 == "+" else 1]
    pair = np.array([s1, s2])
    rest = _rest_spectrum(params, kappa, xi, n_use, pair)
    radius = _family_window_radius(pair, rest)
    captured = _window_capture(eigs, pair, radius)
    if captured.size != 2:
        raise WindowOverlap(
            f"crossing window captured {captured.size} eigenvalues at xi={xi:.6g}"
        )
    return captured


def crossing_growth_rate(params: Params, crossing: Crossing, eps_list,
                         kappa: float, N: int | None = None,
                         Nz: int | None = None, bracket_width: float | None = None):
    """Fitted eps-scaling exponent of the unstable growth at a mixed crossing.

    The unstable bubble is located per amplitude by minimizing the smooth
    pair discriminant D2(xi) = -(lambda_a - lambda_b)^2, which is positive
    where the colliding pair stays imaginary and dips negative inside the
    bubble; golden-section finds its vertex even when the bubble is far
    narrower than any a-priori grid.  Returns (exponent, rates), the growth
    rate at the bubble center per amplitude, and the slope of log(rate)
    against log(eps).
    """
    min_N = abs(crossing.j) + abs(crossing.j_prime) + 6
    n_use = N if N is not None else max(12, min_N)
    rates = []
    for eps in eps_list:
        profile = profile_for(params, kappa, eps)
        coeffs = operator_coefficients(profile, params, n_use, Nz)

        def d2(xi):
            try:
                pair = _crossing_pair(params, kappa, crossing, xi,
                                      profile, coeffs, n_use)
            except WindowOverlap:
                return math.inf
            return float(-((pair[0] - pair[1]) ** 2).real)

        width = bracket_width if bracket_width is not None else max(30.0 * eps, 0.01)
        lo, hi = crossing.xi_ell - width, crossing.xi_ell + width
        invphi = (math.sqrt(5.0) - 1.0) / 2.0
        x1 = hi - invphi * (hi - lo)
        x2 = lo + invphi * (hi - lo)
        f1, f2 = d2(x1), d2(x2)
        for _ in range(40):
            if f1 < f2:
                hi, x2, f2 = x2, x1, f1
                x1 = hi - invphi * (hi - lo)
                f1 = d2(x1)
            else:
                lo, x1, f1 = x1, x2, f2
                x2 = lo + invphi * (hi - lo)
                f2 = d2(x2)
            if hi - lo < 1e-12:
                break
        best = min(f1, f2)
        rates.append(0.5 * math.sqrt(-best) if best < 0.0 else 0.0)
    logs = np.log(np.asarray(eps_list))
    logr = np.log(np.maximum(rates, 1e-300))
    slope = float(np.polyfit(logs, logr, 1)[0])
    return slope, rates


def reversibility_defect(op: OperatorMatrix) -> float:
    """Max-norm of L S + S conj(L) with S = diag(I, -I).

    The reversibility map (reflect x, conjugate, flip the second component)
    acts on Fourier coefficients as v -> S conj(v); anticommutation with L is
    equivalent to L S + S conj(L) = 0.
    """
    n = op.N * 2 + 1
    S = np.diag(np.concatenate([np.ones(n), -np.ones(n)]))
    return float(np.max(np.abs(op.L @ S + S @ op.L.conj())))
