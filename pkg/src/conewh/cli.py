"""Batch front end: load cone/experiment specs, run the analysis pipelines,
emit deterministic JSON reports and CSV rows.

    conewh <command> --in <spec> --out <dir> [--seed K] [--tol key=val]

Commands: lattice, strata, spectrum, trivialize, index1d, hierarchy2d,
pklimit.  <spec> is a JSON file path or the name of a packaged preset.
Exit codes: 0 success, 1 domain error (category on stderr), 2 I/O or usage.
"""

import argparse
import os
import sys
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from . import __version__
from .cones import face_lattice, is_pointed, is_solid
from .errors import ConfigError, DomainError
from .exact import as_float, rvec
from .io import (
    cone_report_object,
    dumps_report,
    face_object,
    load_json,
    read_cone_spec,
    vector_strings,
    write_csv,
)
from .limits import hausdorff_distance, pk_converged, sample_cone
from .presets import cone_preset, resolve_symbol
from .strata import ray_limit, spectrum_poset, strata
from .trivialization import (
    build_trivialization,
    lipschitz_bound,
    triv_apply,
    triv_det,
    triv_det_formula,
    triv_sample_source,
    triv_target_margin,
)
from .convex import PolyhedralConeBody
from .wiener_hopf import classical_index, hierarchy_fredholm

COMMANDS = ("lattice", "strata", "spectrum", "trivialize", "index1d",
            "hierarchy2d", "pklimit")
SAMPLING_COMMANDS = ("trivialize",)


@dataclass
class RunConfig:
    command: str
    input: str
    outdir: str
    seed: int = None
    tolerances: dict = field(default_factory=dict)


def _parse_tolerances(pairs):
    tols = {}
    for item in pairs or []:
        if "=" not in item:
            raise ConfigError(f"--tol expects key=val, got '{item}'")
        key, val = item.split("=", 1)
        tols[key] = float(val)
    return tols


def _resolve_input(name, kind):
    """A literal path, or a packaged preset spec under presets/<kind>/."""
    if os.path.exists(name):
        return load_json(name)
    base = os.path.basename(name)
    if not base.endswith(".json"):
        base += ".json"
    ref = resources.files("conewh").joinpath("presets", kind, base)
    if ref.is_file():
        import json

        return json.loads(ref.read_text())
    raise FileNotFoundError(f"no such spec file or preset: {name}")


def _load_cone(config):
    obj = _resolve_input(config.input, "cones")
    return read_cone_spec(obj)


def _report_header(config):
    return {
        "toolkit": "conewh",
        "version": __version__,
        "config": {
            "command": config.command,
            "input": config.input,
            "seed": config.seed,
            "tolerances": dict(sorted(config.tolerances.items())),
        },
    }


def _write_report(config, name, obj):
    path = os.path.join(config.outdir, f"{name}_{config.command}.json")
    with open(path, "w") as fh:
        fh.write(dumps_report(obj))
    return path


# -- commands ----------------------------------------------------------------


def _cmd_lattice(config):
    name, cone = _load_cone(config)
    lat = face_lattice(cone)
    report = _report_header(config)
    report.update({
        "name": name,
        "cone": cone_report_object(cone),
        "face_count": len(lat.faces),
        "faces": [face_object(f) for f in lat.faces],
        "covering": [list(p) for p in lat.order],
        "dims": list(lat.dims),
    })
    if is_pointed(cone) and is_solid(cone):
        report["solvable_length"] = strata(cone).length
    _write_report(config, name, report)
    return 0


def _cmd_strata(config):
    name, cone = _load_cone(config)
    st = strata(cone)
    report = _report_header(config)
    report.update({
        "name": name,
        "dims": list(st.dims),
        "solvable_length": st.length,
        "levels_finite": True,
        "level_sizes": [len(level) for level in st.levels],
        "levels": [[face_object(f) for f in level] for level in st.levels],
    })
    _write_report(config, name, report)
    return 0


def _cmd_spectrum(config):
    name, cone = _load_cone(config)
    sp = spectrum_poset(cone)
    st = strata(cone)
    report = _report_header(config)
    levels = []
    for bundle in sp.levels:
        levels.append({
            "level": bundle.level,
            "rank": bundle.rank,
            "fibers": [{
                "face": face_object(f),
                "basis": [vector_strings(b) for b in basis],
            } for f, basis in bundle.fibers],
        })
    incid = []
    for ip in sp.incidences:
        incid.append({
            "level": ip.level,
            "pairs": [[face_object(e), face_object(f)] for e, f in ip.pairs],
            "xi": list(ip.xi),
            "eta": list(ip.eta),
            "uncovered": [face_object(f) for f in ip.uncovered],
        })
    report.update({
        "name": name,
        "solvable_length": st.length,
        "levels_finite": sp.levels_finite,
        "dense_level": sp.dense_level,
        "dag_edges": [list(e) for e in sp.dag_edges],
        "levels": levels,
        "incidences": incid,
    })
    _write_report(config, name, report)
    return 0


def _cmd_trivialize(config):
    spec = _resolve_input(config.input, "experiments")
    name = spec.get("name", "trivialize")
    cone = cone_preset(spec["cone"]) if isinstance(spec.get("cone"), str) \
        else read_cone_spec(spec["cone"])[1]
    angle = float(spec.get("angle_deg", 5.0))
    samples = int(spec.get("samples", 500))
    rng = np.random.default_rng(config.seed)
    xi0 = np.asarray([float(v) for v in spec["xi0"]]) if "xi0" in spec else None

    body = PolyhedralConeBody.from_exact(cone)
    rotated = body.rotated(np.deg2rad(angle))
    triv = build_trivialization(cone, rotated, xi0=xi0)
    src = triv_sample_source(triv, rng, samples)
    out = triv_apply(triv, src)
    margins = triv_target_margin(triv, out)
    det_errs, dets = [], []
    for x in src[: min(samples, 200)]:
        f = triv_det_formula(triv, x)
        det_errs.append(abs(triv_det(triv, x) - f) / abs(f))
        dets.append(f)
    pairs_a = rng.uniform(-3, 3, (2000, cone.ambient_dim))
    pairs_b = pairs_a + rng.normal(0, 0.5, pairs_a.shape)
    num = np.linalg.norm(triv_apply(triv, pairs_a) - triv_apply(triv, pairs_b), axis=1)
    den = np.linalg.norm(pairs_a - pairs_b, axis=1)
    bound = np.sqrt(2) * max(lipschitz_bound(triv.r, triv.R), 1.0)

    report = _report_header(config)
    report.update({
        "name": name,
        "angle_deg": angle,
        "r": triv.r,
        "R": triv.R,
        "lipschitz_bound": lipschitz_bound(triv.r, triv.R),
        "membership_margin_min": float(margins.min()),
        "det_formula_range": [float(min(dets)), float(max(dets))],
        "det_max_rel_err": float(max(det_errs)),
        "empirical_lipschitz": float((num / den).max()),
        "empirical_lipschitz_bound": float(bound),
        "samples": samples,
    })
    _write_report(config, name, report)
    return 0


def _cmd_index1d(config):
    spec = _resolve_input(config.input, "experiments")
    name = spec.get("name", "index1d")
    h, T = float(spec["h"]), float(spec["T"])
    truncations = tuple(int(n) for n in spec["N"])
    symbol = resolve_symbol(spec["symbol"], h, T)
    report_obj = classical_index(symbol, truncations=truncations)

    rows = []
    for N in truncations:
        rows.append({
            "experiment": name,
            "N": N,
            "sigma_min": repr(report_obj.diagnostics["sigma_min"][N]),
            "dim_ker": report_obj.diagnostics.get("dim_ker", ""),
            "dim_coker": report_obj.diagnostics.get("dim_coker", ""),
            "index": "" if report_obj.numerical_index is None else report_obj.numerical_index,
            "winding": "" if report_obj.winding is None else report_obj.winding,
            "verdict": report_obj.verdict,
        })
    write_csv(os.path.join(config.outdir, f"{name}_index1d.csv"), rows)

    report = _report_header(config)
    report.update({
        "name": name,
        "symbol_nonvanishing": report_obj.symbol_nonvanishing,
        "symbol_min": report_obj.symbol_min,
        "winding": report_obj.winding,
        "index": report_obj.index,
        "numerical_index": report_obj.numerical_index,
        "sigma_min": {str(k): v for k, v in report_obj.diagnostics["sigma_min"].items()},
        "verdict": report_obj.verdict,
    })
    _write_report(config, name, report)
    return 0


def _cmd_hierarchy2d(config):
    spec = _resolve_input(config.input, "experiments")
    name = spec.get("name", "hierarchy2d")
    h, T = float(spec["h"]), float(spec["T"])
    truncations = tuple(int(n) for n in spec["N"])
    symbol = resolve_symbol(spec["symbol"], h, T)
    kwargs = {}
    if "margin_tol" in config.tolerances:
        kwargs["margin_tol"] = config.tolerances["margin_tol"]
    if "y_values" in spec:
        kwargs["y_values"] = [float(y) for y in spec["y_values"]]
    rep = hierarchy_fredholm(symbol, truncations=truncations, **kwargs)

    rows = []
    for fr in rep.face_reports:
        for r in fr["rows"]:
            for N, smin in r["sigma_min"].items():
                rows.append({
                    "experiment": f"{name}:face-{fr['face']}@y={r['y']}",
                    "N": N,
                    "sigma_min": repr(smin),
                    "verdict": "ok" if fr["ok"] else "failing-face",
                })
    write_csv(os.path.join(config.outdir, f"{name}_hierarchy2d.csv"), rows)

    report = _report_header(config)
    report.update({
        "name": name,
        "symbol_nonvanishing": rep.symbol_nonvanishing,
        "symbol_min": rep.symbol_min,
        "l1_norm": rep.diagnostics["l1_norm"],
        "neumann_margin": rep.diagnostics["neumann_margin"],
        "failing_faces": rep.diagnostics["failing_faces"],
        "faces": [{
            "face": fr["face"],
            "margin": fr["margin"],
            "stable": fr["stable"],
            "ok": fr["ok"],
            "margin_at_infinity": fr["margin_at_infinity"],
            "decreasing_at": fr["decreasing_at"],
        } for fr in rep.face_reports],
        "verdict": rep.verdict,
    })
    _write_report(config, name, report)
    return 0


def _cmd_pklimit(config):
    spec = _resolve_input(config.input, "experiments")
    name = spec.get("name", "pklimit")
    cone = cone_preset(spec["cone"]) if isinstance(spec.get("cone"), str) \
        else read_cone_spec(spec["cone"])[1]
    direction = rvec(spec["direction"])
    scales = [float(s) for s in spec.get("scales", [2, 4, 8, 16, 32, 64])]
    eps = config.tolerances.get("eps", float(spec.get("eps", 0.5)))
    window = float(spec.get("window", 4.0))
    step = float(spec.get("step", eps / 2))
    bounds = (-window, window)

    xf = as_float(direction)
    seq = [sample_cone(cone, bounds, step, shift=s * xf, tag=f"scale-{s}")
           for s in scales]
    converged, lo, hi, dist = pk_converged(seq, eps, bounds=bounds, step=step)
    limit_cone = ray_limit(cone, direction)
    exact = sample_cone(limit_cone, bounds, step, tag="exact-limit")
    report = _report_header(config)
    report.update({
        "name": name,
        "direction": vector_strings(direction),
        "eps": eps,
        "converged": bool(converged),
        "liminf_size": len(lo),
        "limsup_size": len(hi),
        "liminf_limsup_hausdorff": dist,
        "hausdorff_liminf_vs_exact": hausdorff_distance(lo, exact),
        "exact_limit": cone_report_object(limit_cone),
    })
    _write_report(config, name, report)
    return 0


_DISPATCH = {
    "lattice": _cmd_lattice,
    "strata": _cmd_strata,
    "spectrum": _cmd_spectrum,
    "trivialize": _cmd_trivialize,
    "index1d": _cmd_index1d,
    "hierarchy2d": _cmd_hierarchy2d,
    "pklimit": _cmd_pklimit,
}


def run(config: RunConfig) -> int:
    """Execute one command; deterministic outputs for a fixed (inputs, seed)."""
    try:
        if config.command not in COMMANDS:
            raise ConfigError(f"unknown command '{config.command}'")
        if config.command in SAMPLING_COMMANDS and config.seed is None:
            raise ConfigError(f"--seed is required for '{config.command}'")
        os.makedirs(config.outdir, exist_ok=True)
        return _DISPATCH[config.command](config)
    except DomainError as exc:
        print(f"error [{exc.category}]: {exc}", file=sys.stderr)
        return 1
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="conewh",
        description="cone lattice / strata / trivialization / Wiener-Hopf index pipelines")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--in", dest="input", required=True,
                        help="spec file path or packaged preset name")
    parser.add_argument("--out", dest="outdir", required=True)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--tol", action="append", default=[],
                        metavar="KEY=VAL", help="tolerance overrides")
    args = parser.parse_args(argv)
    try:
        tols = _parse_tolerances(args.tol)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    config = RunConfig(args.command, args.input, args.outdir, args.seed, tols)
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
