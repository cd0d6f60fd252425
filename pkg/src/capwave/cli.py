"""Command-line front end.

Subcommands:
    kappa      wave number(s) and parameter region for one (alpha, beta)
    index      full index bundle and the stability verdict
    crossings  table of spectral crossings with Krein signatures
    spectrum   near-origin eigenvalues over a Floquet grid (CSV)
    probe      eigenvalues inside one crossing window
    diagram    regenerate a stability-diagram figure (CSV + SVG)
    verify     run the acceptance suite

Numeric flags may also come from a flat JSON config file (--config); explicit
flags win over the file, the file over built-in defaults.  Commands that
write into an output directory echo the effective configuration there as
config.json.  Exit codes: 0 success, 1 verification failure, 2 bad usage,
3 domain errors (no root, resonances, window overlaps).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import __version__
from .dispersion import Params, solve_kappa
from .errors import CapwaveError, DegenerateDenominator, SigmaTildeResonance

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3


def _fmt(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _json_default(v):
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    if hasattr(v, "tolist"):
        return v.tolist()
    return str(v)


def _emit(payload: dict, fmt: str):
    if fmt == "json":
        print(json.dumps(payload, default=_json_default, sort_keys=True))
    else:
        for key, val in payload.items():
            if isinstance(val, (list, tuple)):
                print(f"{key}:")
                for row in val:
                    print("  " + (" ".join(_fmt(x) for x in row)
                                  if isinstance(row, (list, tuple)) else _fmt(row)))
            else:
                print(f"{key} = {_fmt(val)}")


def _fail_domain(exc: CapwaveError, fmt: str) -> int:
    msg = {"error": type(exc).__name__, "message": str(exc)}
    if fmt == "json":
        print(json.dumps(msg, sort_keys=True), file=sys.stderr)
    else:
        print(f"error ({type(exc).__name__}): {exc}", file=sys.stderr)
    return EXIT_DOMAIN


def _default_jobs() -> int:
    from .parallel import default_jobs

    return default_jobs()


def _load_config(path):
    if not path:
        return {}
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise SystemExit("config file must hold a flat JSON object")
    return data


def _resolve(args, config, name, default):
    val = getattr(args, name, None)
    if val is not None:
        return val
    if name in config:
        return type(default)(config[name]) if default is not None else config[name]
    return default


def _echo_config(outdir: str, effective: dict):
    os.makedirs(outdir, exist_ok=True)
    with open(os.path.join(outdir, "config.json"), "w", encoding="utf-8") as fh:
        json.dump(effective, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")


def _params_from(args, config) -> Params:
    alpha = _resolve(args, config, "alpha", None)
    beta = _resolve(args, config, "beta", None)
    if alpha is None or beta is None:
        raise SystemExit("--alpha and --beta are required")
    return Params(float(alpha), float(beta))


def _cmd_kappa(args, config) -> int:
    fmt = args.format
    params = _params_from(args, config)
    try:
        region = solve_kappa(params)
    except CapwaveError as exc:
        return _fail_domain(exc, fmt)
    _emit({"alpha": params.alpha, "beta": params.beta,
           "region": region.tag, "roots": list(region.roots)}, fmt)
    return EXIT_OK


def _cmd_index(args, config) -> int:
    from .indices import index_bundle

    fmt = args.format
    params = _params_from(args, config)
    root = _resolve(args, config, "root", None)
    try:
        region = solve_kappa(params)
        bundle = index_bundle(params, root=int(root) if root else None)
    except (DegenerateDenominator, SigmaTildeResonance) as exc:
        payload = {"alpha": params.alpha, "beta": params.beta,
                   "verdict": "UNDETERMINED", "reason": str(exc)}
        _emit(payload, fmt)
        return EXIT_OK
    except CapwaveError as exc:
        return _fail_domain(exc, fmt)
    if bundle.C > 0.0:
        verdict = "STABLE"
    elif bundle.C < 0.0:
        verdict = "UNSTABLE"
    else:
        verdict = "UNDETERMINED"
    payload = {"alpha": params.alpha, "beta": params.beta, "region": region.tag,
               "kappa": bundle.kappa, "sigma": bundle.sigma, "T_tilde": bundle.T_tilde,
               "e_star": bundle.e_star, "w1pp": bundle.w1pp, "k2": bundle.k2,
               "chi": bundle.chi, "C": bundle.C, "C_tilde": bundle.C_tilde,
               "nu": bundle.nu, "lambda_nls": bundle.lambda_nls,
               "c_dc_kappa": bundle.c_dc_kappa, "verdict": verdict}
    _emit(payload, fmt)
    return EXIT_OK


def _cmd_crossings(args, config) -> int:
    from .bloch import find_crossings

    fmt = args.format
    params = _params_from(args, config)
    sigma_max = float(_resolve(args, config, "sigma_max", 10.0))
    root = int(_resolve(args, config, "root", 0) or 0)
    try:
        region = solve_kappa(params)
        if not region.roots:
            raise CapwaveError(f"no wave at alpha={params.alpha}, beta={params.beta}")
        kappa = region.roots[root - 1] if (region.tag == "II" and root) else region.roots[-1]
        crossings = find_crossings(params, kappa, sigma_max)
    except CapwaveError as exc:
        return _fail_domain(exc, fmt)
    rows = []
    for c in crossings:
        sig = "n/a" if c.signatures_equal is None else ("equal" if c.signatures_equal else "opposite")
        rows.append({"xi": c.xi_ell, "sigma": c.sigma_ell, "j": c.j,
                     "j_prime": c.j_prime, "branches": "".join(c.branches),
                     "multiplicity": c.multiplicity, "signatures": sig})
    if fmt == "json":
        print(json.dumps({"kappa": kappa, "crossings": rows},
                         default=_json_default, sort_keys=True))
    else:
        print(f"kappa = {_fmt(kappa)}")
        print("xi            sigma         j   j'  br  mult  signatures")
        for r in rows:
            print(f"{r['xi']:+.10f} {r['sigma']:+.10f} {r['j']:3d} {r['j_prime']:3d} "
                  f"{r['branches']:>3} {r['multiplicity']:4d}  {r['signatures']}")
    return EXIT_OK


def _cmd_spectrum(args, config) -> int:
    from .linop import spectrum_near_origin

    fmt = args.format
    params = _params_from(args, config)
    eps = float(_resolve(args, config, "eps", 0.02))
    n_modes = int(_resolve(args, config, "N", 16))
    nz = _resolve(args, config, "Nz", None)
    xi_max = float(_resolve(args, config, "xi_max", 0.05))
    n_xi = int(_resolve(args, config, "n_xi", 8))
    root = _resolve(args, config, "root", None)
    outdir = _resolve(args, config, "out", None)

    # symmetric grid avoiding the defective xi = 0 point
    xi_grid = [xi_max * (2.0 * i / (n_xi - 1) - 1.0) for i in range(n_xi)]
    xi_grid = [x if abs(x) > 1e-12 else xi_max / n_xi for x in xi_grid]
    try:
        _, report = spectrum_near_origin(params, eps, xi_grid, N=n_modes,
                                         Nz=int(nz) if nz else None,
                                         root=int(root) if root else None,
                                         jobs=args.jobs)
    except CapwaveError as exc:
        return _fail_domain(exc, fmt)

    lines = ["xi,re,im"]
    for xi, eigs in zip(xi_grid, report.window_eigs):
        order = sorted(range(len(eigs)), key=lambda i: (eigs[i].imag, eigs[i].real))
        for i in order:
            lines.append(f"{_fmt(xi)},{_fmt(eigs[i].real)},{_fmt(eigs[i].imag)}")
    csv = "\n".join(lines) + "\n"
    summary = {"verdict": report.verdict, "max_re": report.max_re,
               "floor": report.floor, "extent_xi": report.extent_xi,
               "extent_predicted": report.extent_predicted,
               "C_tilde": report.C_tilde}
    if outdir:
        effective = {"command": "spectrum", "alpha": params.alpha, "beta": params.beta,
                     "eps": eps, "N": n_modes, "Nz": nz, "xi_max": xi_max,
                     "n_xi": n_xi, "root": root, "out": outdir}
        _echo_config(outdir, effective)
        with open(os.path.join(outdir, "spectrum.csv"), "w", encoding="utf-8",
                  newline="\n") as fh:
            fh.write(csv)
        _emit(summary, fmt)
    elif fmt == "json":
        summary["csv"] = csv
        _emit(summary, fmt)
    else:
        sys.stdout.write(csv)
        _emit(summary, fmt)
    return EXIT_OK


def _probe_task(task):
    from .linop import crossing_probe

    return crossing_probe(**task)


def _cmd_probe(args, config) -> int:
    from .bloch import find_crossings
    from .linop import crossing_probe

    fmt = args.format
    params = _params_from(args, config)
    eps = float(_resolve(args, config, "eps", 0.004))
    sigma_max = float(_resolve(args, config, "sigma_max", 10.0))
    root = _resolve(args, config, "root", None)
    n_modes = _resolve(args, config, "N", None)
    nz = _resolve(args, config, "Nz", None)
    jsel = _resolve(args, config, "j", None)
    jpsel = _resolve(args, config, "jp", None)
    try:
        region = solve_kappa(params)
        if not region.roots:
            raise CapwaveError(f"no wave at alpha={params.alpha}, beta={params.beta}")
        kappa = region.roots[int(root) - 1] if (region.tag == "II" and root) else region.roots[-1]
        crossings = [c for c in find_crossings(params, kappa, sigma_max)
                     if not c.is_origin]
        if jsel is not None and jpsel is not None:
            crossings = [c for c in crossings
                         if c.j == int(jsel) and c.j_prime == int(jpsel)]
        if not crossings:
            raise CapwaveError("no matching crossing below the ceiling")
        from .parallel import map_ordered

        tasks = [{"params": params, "crossing": c, "eps": eps, "kappa": kappa,
                  "N": int(n_modes) if n_modes else None,
                  "Nz": int(nz) if nz else None} for c in crossings]
        reports = map_ordered(_probe_task, tasks, args.jobs)
    except CapwaveError as exc:
        return _fail_domain(exc, fmt)
    rows = []
    for rep in reports:
        c = rep.crossing
        rows.append({"j": c.j, "j_prime": c.j_prime, "branches": "".join(c.branches),
                     "xi": c.xi_ell, "sigma": c.sigma_ell,
                     "signatures_equal": c.signatures_equal,
                     "max_abs_re": rep.max_abs_re, "floor": rep.floor,
                     "window_eigs": [list(map(complex, w)) for w in rep.window_eigs]})
    if fmt == "json":
        print(json.dumps({"kappa": kappa, "eps": eps, "probes": rows},
                         default=_json_default, sort_keys=True))
    else:
        for r in rows:
            print(f"crossing (j={r['j']},{r['branches'][0]}) (j'={r['j_prime']},"
                  f"{r['branches'][1]}) xi={_fmt(r['xi'])} sigma={_fmt(r['sigma'])} "
                  f"signatures_equal={r['signatures_equal']} "
                  f"max|Re|={_fmt(r['max_abs_re'])}")
    return EXIT_OK


def _cmd_diagram(args, config) -> int:
    from .diagrams import (curves_to_csv, curves_to_svg, figure1_curves,
                           figure2_curves, figure3_curves)

    fmt = args.format
    outdir = _resolve(args, config, "out", ".")
    which = args.figure
    try:
        if which == "figure1":
            curves = figure1_curves()
        elif which == "figure2":
            curves = list(figure2_curves())
        else:
            alpha = float(_resolve(args, config, "alpha", 0.9))
            beta = float(_resolve(args, config, "beta", 0.2))
            curves = list(figure3_curves(Params(alpha, beta)))
    except CapwaveError as exc:
        return _fail_domain(exc, fmt)
    effective = {"command": "diagram", "figure": which, "out": outdir}
    for key in ("alpha", "beta"):
        val = _resolve(args, config, key, None)
        if val is not None:
            effective[key] = float(val)
    _echo_config(outdir, effective)
    csv_path = os.path.join(outdir, f"{which}.csv")
    with open(csv_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(curves_to_csv(curves))
    with open(os.path.join(outdir, f"{which}.svg"), "w", encoding="utf-8",
              newline="\n") as fh:
        fh.write(curves_to_svg(curves, title=which))
    _emit({"written": [csv_path, os.path.join(outdir, f"{which}.svg")],
           "curves": [(c.name, len(c.points)) for c in curves]}, fmt)
    return EXIT_OK


def _cmd_verify(args, config) -> int:
    from .acceptance import run_acceptance

    criteria = None
    if args.criteria:
        criteria = [int(tok) for tok in args.criteria.split(",")]
    results = run_acceptance(criteria=criteria, verbose=True)
    ok = all(r.passed for r in results)
    return EXIT_OK if ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="capwave",
        description="Spectral stability of small-amplitude periodic "
                    "capillary-gravity water waves.")
    ap.add_argument("--version", action="version", version=f"capwave {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--alpha", type=float, help="inverse square Froude number")
        p.add_argument("--beta", type=float, help="Weber number")
        p.add_argument("--config", help="flat JSON config file (flags win)")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--jobs", type=int, default=None,
                       help="worker pool size (default: CAPWAVE_JOBS or CPU count)")

    p = sub.add_parser("kappa", help="dispersion roots and region")
    common(p)

    p = sub.add_parser("index", help="stability indices and verdict")
    common(p)
    p.add_argument("--root", type=int, choices=(1, 2), help="region II root")

    p = sub.add_parser("crossings", help="spectral crossings and signatures")
    common(p)
    p.add_argument("--sigma-max", dest="sigma_max", type=float)
    p.add_argument("--root", type=int, choices=(1, 2))

    p = sub.add_parser("spectrum", help="near-origin eigenvalues over a xi grid")
    common(p)
    p.add_argument("--eps", type=float)
    p.add_argument("--N", type=int)
    p.add_argument("--Nz", type=int)
    p.add_argument("--xi-max", dest="xi_max", type=float)
    p.add_argument("--n-xi", dest="n_xi", type=int)
    p.add_argument("--root", type=int, choices=(1, 2))
    p.add_argument("--out", help="output directory for spectrum.csv")

    p = sub.add_parser("probe", help="crossing-window eigenvalue report")
    common(p)
    p.add_argument("--eps", type=float)
    p.add_argument("--sigma-max", dest="sigma_max", type=float)
    p.add_argument("--j", type=int)
    p.add_argument("--jp", type=int)
    p.add_argument("--N", type=int)
    p.add_argument("--Nz", type=int)
    p.add_argument("--root", type=int, choices=(1, 2))

    p = sub.add_parser("diagram", help="regenerate a stability diagram")
    p.add_argument("figure", choices=("figure1", "figure2", "figure3"))
    common(p)
    p.add_argument("--out")

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--criteria", help="comma-separated criterion numbers")
    p.add_argument("--format", choices=("text", "json"), default="text")
    return ap


_DISPATCH = {
    "kappa": _cmd_kappa,
    "index": _cmd_index,
    "crossings": _cmd_crossings,
    "spectrum": _cmd_spectrum,
    "probe": _cmd_probe,
    "diagram": _cmd_diagram,
}


def run(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "verify":
        return _cmd_verify(args, {})
    config = _load_config(getattr(args, "config", None))
    if getattr(args, "jobs", None) is None:
        args.jobs = int(config.get("jobs", _default_jobs()))
    try:
        return _DISPATCH[args.command](args, config)
    except CapwaveError as exc:
        return _fail_domain(exc, args.format)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
