"""Stability-diagram curves and their CSV/SVG emission.

Figure 1 lives in the (T~, kappa) plane with T~ = beta*kappa^2/alpha; a point
of that plane fixes the parameters through the dispersion identity
alpha = kappa/(tanh(kappa)(1+T~)), beta = T~*alpha/kappa^2.  Five curve
families are traced by per-column root finding in T~ at fixed kappa:

    C0_left / C0_right : zero set of the stability index (via its rescaled,
                         denominator-free form), ordered by T~ per column
    w1pp0              : w1''(0) = 0
    chi_pole           : sigma^2 - T~(3 - sigma^2) = 0 (explicit)
    estar_sqrt_alpha   : e* = sqrt(alpha)
    alpha_one          : alpha = 1 (explicit: T~ = kappa/tanh(kappa) - 1)

Figure 2 gives beta_0(alpha) and beta_1(alpha) where the index vanishes,
obtained from the kappa-roots of the rescaled index mapped through
beta(alpha, kappa).  Figure 3 samples the two collision curves
sigma_+/-(k) at fixed parameters with crossing markers.

Residuals stored per point are scaled: the implicit equation value divided
by the magnitude of its largest constituent term, so they stay meaningful
where the raw equations carry huge hyperbolic factors.

CSV schema: header ``curve,x,y,residual``, one row per point, UTF-8, LF
endings, 17 significant digits.  SVG output is a minimal polyline rendering.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .bloch import find_crossings, sigma_curves, sigma_minus_critical_point
from .dispersion import Params, solve_kappa
from .errors import SigmaTildeResonance
from .indices import (alpha_one, beta_of_kappa, chi_value, e_star, find_alpha0,
                      index_bundle, rescaled_index, w1_pp0)

__all__ = [
    "CurveSample", "figure1_curves", "figure2_curves", "figure3_curves",
    "curves_to_csv", "curves_to_svg", "FIGURE_WINDOW_T", "FIGURE_WINDOW_K",
]

FIGURE_WINDOW_T = (1e-3, 2.0)
FIGURE_WINDOW_K = (1e-3, 10.0)


@dataclass
class CurveSample:
    """One traced curve: named, ordered points with per-point residuals."""

    name: str
    points: list = field(default_factory=list)   # (x, y) pairs
    residuals: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    @property
    def empty(self) -> bool:
        return not self.points

    def add(self, x: float, y: float, residual: float):
        self.points.append((x, y))
        self.residuals.append(residual)


def _alpha_of(T: float, kappa: float) -> float:
    return kappa / (math.tanh(kappa) * (1.0 + T))


def _params_of(T: float, kappa: float) -> Params:
    a = _alpha_of(T, kappa)
    return Params(a, T * a / (kappa * kappa))


def _rescaled_scaled(T: float, kappa: float):
    """(value, scale) of the rescaled index at a (T~, kappa) point."""
    a = _alpha_of(T, kappa)
    params = Params(a, T * a / (kappa * kappa))
    es = e_star(kappa, params)
    chi = chi_value(kappa, params)
    chi1 = 1.0 + kappa * es / (a * math.sinh(2.0 * kappa))
    head = 8.0 * a * math.tanh(kappa) / kappa * chi1 * chi1
    tail = (es * es - a) * chi
    return head + tail, max(abs(head), abs(tail), 1.0)


def _chi_pole_T(kappa: float) -> float:
    s2 = math.tanh(kappa) ** 2
    return s2 / (3.0 - s2)


def _bisect(f, lo, hi, iters=80):
    flo = f(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm < 0.0) == (flo < 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _column_roots(f, lo, hi, n, exclude=()):
    """Roots of f over [lo, hi] on an n-point grid, skipping poles."""
    xs = [lo + (hi - lo) * i / (n - 1) for i in range(n)]
    vals = []
    for x in xs:
        try:
            vals.append(f(x))
        except (SigmaTildeResonance, ZeroDivisionError, ValueError):
            vals.append(math.nan)
    roots = []
    for i in range(n - 1):
        v0, v1 = vals[i], vals[i + 1]
        if math.isnan(v0) or math.isnan(v1):
            continue
        if (v0 < 0.0) != (v1 < 0.0):
            if any(xs[i] <= p <= xs[i + 1] for p in exclude):
                continue
            roots.append(_bisect(f, xs[i], xs[i + 1]))
    return roots


def figure1_curves(t_window=FIGURE_WINDOW_T, k_window=FIGURE_WINDOW_K,
                   n_cols: int = 120, n_scan: int = 600) -> list:
    """The five stability-diagram families in the (T~, kappa) plane."""
    t_lo, t_hi = t_window
    k_lo, k_hi = k_window
    kappas = [k_lo + (k_hi - k_lo) * i / (n_cols - 1) for i in range(n_cols)]

    c_left = CurveSample("C0_left", metadata={"equation": "C(alpha,beta) = 0"})
    c_right = CurveSample("C0_right", metadata={"equation": "C(alpha,beta) = 0"})
    cyan = CurveSample("w1pp0", metadata={"equation": "w1''(0) = 0"})
    purple = CurveSample("chi_pole", metadata={"equation": "sigma^2 - T~(3-sigma^2) = 0"})
    blue = CurveSample("estar_sqrt_alpha", metadata={"equation": "e* = sqrt(alpha)"})
    green = CurveSample("alpha_one", metadata={"equation": "alpha = 1"})

    for kap in kappas:
        pole = _chi_pole_T(kap)

        f_c = lambda T: _rescaled_scaled(T, kap)[0]
        roots = _column_roots(f_c, t_lo, t_hi, n_scan, exclude=(pole,))
        if roots:
            def resid(T):
                v, s = _rescaled_scaled(T, kap)
                return abs(v) / s
            if len(roots) >= 2:
                c_left.add(roots[0], kap, resid(roots[0]))
                c_right.add(roots[-1], kap, resid(roots[-1]))
            else:
                r = roots[0]
                # a single root continues the right branch (the left one
                # only exists where a second sign change opens up)
                c_right.add(r, kap, resid(r))

        f_w = lambda T: w1_pp0(kap, _params_of(T, kap))
        for r in _column_roots(f_w, t_lo, t_hi, n_scan):
            scale = max(abs(w1_pp0(kap, _params_of(t_hi, kap))), 1.0)
            cyan.add(r, kap, abs(f_w(r)) / scale)

        if t_lo <= pole <= t_hi:
            s2 = math.tanh(kap) ** 2
            purple.add(pole, kap, abs(s2 - pole * (3.0 - s2)) / max(s2, 1.0))

        f_b = lambda T: e_star(kap, _params_of(T, kap)) - math.sqrt(_alpha_of(T, kap))
        for r in _column_roots(f_b, t_lo, t_hi, n_scan):
            blue.add(r, kap, abs(f_b(r)) / max(abs(e_star(kap, _params_of(r, kap))), 1.0))

        Tg = kap / math.tanh(kap) - 1.0
        if t_lo <= Tg <= t_hi:
            green.add(Tg, kap, abs(_alpha_of(Tg, kap) - 1.0))

    curves = [c_left, c_right, cyan, purple, blue, green]
    for c in curves:
        if c.empty:
            c.metadata["empty_curve"] = "no sign change inside the window"
    return curves


def figure2_curves(alpha_grid=None, kappa_ceiling: float = 30.0,
                   n_scan: int = 1200) -> tuple:
    """beta_0(alpha) and beta_1(alpha) along the index zero set.

    beta_1 exists only between the merge point alpha_0 and alpha_1 (where it
    diverges); beta_0 continues to alpha = 1.
    """
    if alpha_grid is None:
        a0, _ = find_alpha0(tol=1e-4)
        alpha_grid = [a0 + 0.004 + (1.0 - a0 - 0.004) * i / 79 for i in range(80)]
    beta0 = CurveSample("beta0", metadata={"equation": "C(alpha, beta) = 0"})
    beta1 = CurveSample("beta1", metadata={"equation": "C(alpha, beta) = 0"})

    for a in alpha_grid:
        f = lambda k: rescaled_index(a, k)
        roots = _column_roots(f, 1e-3, kappa_ceiling, n_scan)
        if not roots:
            continue

        def resid(k):
            T = beta_of_kappa(a, k) * k * k / a
            v, s = _rescaled_scaled(T, k)
            return abs(v) / s
        k0 = roots[-1]   # largest kappa root -> smallest beta
        beta0.add(a, beta_of_kappa(a, k0), resid(k0))
        if len(roots) >= 2 and a < alpha_one():
            k1 = roots[0]
            beta1.add(a, beta_of_kappa(a, k1), resid(k1))

    for c in (beta0, beta1):
        if c.empty:
            c.metadata["empty_curve"] = "no roots inside the window"
    return beta0, beta1


def figure3_curves(params: Params, k_window=(-5.0, 5.0), n: int = 801,
                   sigma_max: float | None = None) -> tuple:
    """sigma_+ and sigma_- over the window, with crossing markers.

    Returns (sigma_plus, sigma_minus, crossings) curve samples; the third
    holds the (k, sigma) collision points of every crossing below sigma_max
    (both colliding wave numbers per crossing).
    """
    region = solve_kappa(params)
    kappa = region.roots[-1] if region.roots else None
    lo, hi = k_window
    plus = CurveSample("sigma_plus", metadata={"equation": "sigma_+(k)"})
    minus = CurveSample("sigma_minus", metadata={"equation": "sigma_-(k)"})
    for i in range(n):
        k = lo + (hi - lo) * i / (n - 1)
        sp, sm = sigma_curves(k, params)
        plus.add(k, sp, 0.0)
        minus.add(k, sm, 0.0)

    markers = CurveSample("crossings", metadata={"equation": "branch collisions"})
    if kappa is not None:
        if sigma_max is None:
            sigma_max = max(abs(p[1]) for p in plus.points + minus.points)
        for c in find_crossings(params, kappa, sigma_max):
            if c.is_origin:
                markers.add(0.0, 0.0, 0.0)
                continue
            for j in (c.j, c.j_prime):
                k = kappa * (j + c.xi_ell)
                if lo <= k <= hi:
                    markers.add(k, c.sigma_ell, 0.0)
        kc = sigma_minus_critical_point(params, kappa)
        minus.metadata["sigma_minus_max_at"] = kc
        minus.metadata["nonneg_exactly_on"] = (0.0, kappa)
        signs = []
        for k_probe, label in ((-1.0, "k<0"), (0.5 * kappa, "0<k<kappa"),
                               (kappa + 1.0, "k>kappa")):
            sp, sm = sigma_curves(k_probe, params)
            signs.append((label, "+" if sp > 0 else "-", "+" if sm > 0 else "-"))
        minus.metadata["sign_pattern"] = signs
    return plus, minus, markers


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def curves_to_csv(curves) -> str:
    """Serialize curves into the ``curve,x,y,residual`` CSV contract."""
    lines = ["curve,x,y,residual"]
    for c in curves:
        for (x, y), r in zip(c.points, c.residuals):
            lines.append(f"{c.name},{_fmt(x)},{_fmt(y)},{_fmt(r)}")
    return "\n".join(lines) + "\n"


_SVG_COLORS = {
    "C0_left": "#000000", "C0_right": "#000000", "w1pp0": "#00b7c3",
    "chi_pole": "#8b00c3", "estar_sqrt_alpha": "#0044cc", "alpha_one": "#00a000",
    "beta0": "#0044cc", "beta1": "#cc0000",
    "sigma_plus": "#0044cc", "sigma_minus": "#cc0000", "crossings": "#000000",
}
_FALLBACK_COLORS = ("#444444", "#888888", "#bb6600", "#006666")


def curves_to_svg(curves, width: int = 800, height: int = 600,
                  title: str = "") -> str:
    """Minimal static rendering: polylines, axes, tick labels, legend."""
    pts = [p for c in curves for p in c.points]
    if not pts:
        return ('<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d">'
                '<text x="20" y="30">empty figure</text></svg>' % (width, height))
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0
    ml, mr, mt, mb = 70, 20, 40, 50

    def px(x):
        return ml + (x - x0) / (x1 - x0) * (width - ml - mr)

    def py(y):
        return height - mb - (y - y0) / (y1 - y0) * (height - mt - mb)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
           f'<rect width="{width}" height="{height}" fill="white"/>']
    if title:
        out.append(f'<text x="{ml}" y="24" font-size="16">{title}</text>')
    out.append(f'<line x1="{ml}" y1="{height-mb}" x2="{width-mr}" y2="{height-mb}" stroke="black"/>')
    out.append(f'<line x1="{ml}" y1="{mt}" x2="{ml}" y2="{height-mb}" stroke="black"/>')
    for i in range(5):
        xv = x0 + (x1 - x0) * i / 4
        yv = y0 + (y1 - y0) * i / 4
        out.append(f'<text x="{px(xv):.1f}" y="{height-mb+18}" font-size="11" '
                   f'text-anchor="middle">{xv:.3g}</text>')
        out.append(f'<text x="{ml-8}" y="{py(yv):.1f}" font-size="11" '
                   f'text-anchor="end">{yv:.3g}</text>')
    legend_y = mt + 4
    for i, c in enumerate(curves):
        color = _SVG_COLORS.get(c.name, _FALLBACK_COLORS[i % len(_FALLBACK_COLORS)])
        if c.name == "crossings":
            for (x, y) in c.points:
                out.append(f'<circle cx="{px(x):.2f}" cy="{py(y):.2f}" r="4" '
                           f'fill="none" stroke="{color}"/>')
        elif c.points:
            path = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in c.points)
            out.append(f'<polyline points="{path}" fill="none" stroke="{color}" '
                       f'stroke-width="1.5"/>')
        out.append(f'<rect x="{width-mr-150}" y="{legend_y}" width="12" height="12" '
                   f'fill="{color}"/>')
        out.append(f'<text x="{width-mr-132}" y="{legend_y+10}" font-size="11">{c.name}</text>')
        legend_y += 16
    out.append("</svg>")
    return "\n".join(out) + "\n"
