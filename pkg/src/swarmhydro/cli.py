"""Command-line front end: config parsing, presets, runs, artifact files.

Configs are flat JSON objects with one level of nesting for sections
(model / ic / grid / integrator).  Every run writes its artifacts
atomically (write to a temp file, then rename) and deterministically:
repeated runs with the same config and seed produce byte-identical files,
which is why the summary's wall_time field is emitted as null.

Exit codes: 0 completed, 2 blow-up detected, 1 error.
"""
from __future__ import annotations

import argparse
import copy
import json
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from .hydro import (HydroModel, InitProfile, LagrangianState, build_grid,
                    deta_dx, density_tolerant, init_profiles, simulate_hydro,
                    TERM_BLOW_UP, _TS_COLUMNS)
from .integrators import IntegratorConfig
from .kernels import CommunicationKernel, PotentialSpec
from .particle import (ParticleModel, generate_two_group_ic,
                       generate_uniform_ic, simulate_particles)
from .presets import PRESETS, preset_config
from . import steady as steady_mod
from . import thresholds as th

__all__ = ["ParseError", "ValidationError", "ExperimentConfig",
           "parse_config", "serialize_config", "main"]


class ParseError(ValueError):
    """The config text is not well-formed (syntax, duplicate keys)."""


class ValidationError(ValueError):
    """The config parsed but contains an unknown or inconsistent key."""


# ----------------------------------------------------------------------
# config schema
# ----------------------------------------------------------------------

_HYDRO_MODEL = {"alignment": "cs", "beta": 0.5, "constant_psi": False,
                "potential": None, "k": 0.0, "alpha": 0.0, "a": 0.0,
                "b": 0.0, "eps": 0.0, "pressure_eps": 0.0}
_PARTICLE_MODEL = {"alignment": "cs", "beta": 0.5, "constant_psi": False,
                   "potential": None, "k": 0.0, "alpha": 0.0, "a": 0.0,
                   "b": 0.0, "eps": 0.0, "first_order": False}
_THRESHOLD_MODEL = {"beta": 0.5, "constant_psi": False, "k": 0.0,
                    "psi_M": 1.0}
_HYDRO_IC = {"shape": "cosine", "halfwidth": 0.75, "mass": 1.0,
             "velocity_shape": "sine", "c": 0.0, "offset": 0.0, "floor": 0.0}
_PARTICLE_IC = {"layout": "uniform", "n": 50, "n_small": 5,
                "position_box": [[-10.0, 10.0], [-10.0, 10.0]],
                "velocity_box": [[-5.0, 5.0], [-4.3, 5.7]],
                "mean_velocity": [0.0, 0.7]}
_GRID = {"n": 200, "interval": [-0.75, 0.75]}
_INTEGRATOR = {"method": "rk45", "dt": 0.01, "rtol": 1e-8, "atol": 1e-10,
               "dt_init": 1e-3, "dt_min": 1e-12, "dt_max": None,
               "output_stride": 0.05}

_THRESHOLD_FAMILIES = ("euler_alignment", "euler_poisson", "constant_psi",
                       "damped_newtonian", "bound_newtonian", "bound_log")
_STEADY_PROFILES = ("indicator", "parabola", "semicircle")


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    label: str = ""
    seed: int = 7
    t_end: float = 10.0
    model: dict = field(default_factory=dict)
    ic: dict = field(default_factory=dict)
    grid: dict = field(default_factory=dict)
    integrator: dict = field(default_factory=dict)
    snapshot_times: tuple = ()
    family: Optional[str] = None          # threshold kinds
    profile: Optional[str] = None         # steady kind
    run_dir: Optional[str] = None
    center: float = 0.0
    n_residual: int = 800
    support_fraction: float = 0.9


def _no_duplicates(pairs):
    seen = {}
    for key, value in pairs:
        if key in seen:
            raise ParseError(f"duplicate key {key!r}")
        seen[key] = value
    return seen


def _section(obj: dict, name: str, defaults: dict) -> dict:
    raw = obj.get(name, {})
    if not isinstance(raw, dict):
        raise ValidationError(f"section {name!r} must be an object")
    out = copy.deepcopy(defaults)
    for key, value in raw.items():
        if key not in defaults:
            raise ValidationError(f"unknown key {name}.{key}")
        out[key] = value
    return out


def _scalar(obj: dict, key: str, default, types) -> Any:
    value = obj.get(key, default)
    if value is not None and not isinstance(value, types):
        raise ValidationError(f"key {key!r} has the wrong type")
    return value


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate a JSON config (or a {"preset": name} reference)."""
    try:
        obj = json.loads(text, object_pairs_hook=_no_duplicates)
    except ParseError:
        raise
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise ParseError("top level must be a JSON object")
    return validate_config(obj)


def validate_config(obj: dict) -> ExperimentConfig:
    obj = copy.deepcopy(obj)
    if "preset" in obj:
        name = obj.pop("preset")
        try:
            base = preset_config(name)
        except KeyError as exc:
            raise ValidationError(exc.args[0]) from exc
        for key, value in obj.items():
            if isinstance(value, dict) and isinstance(base.get(key), dict):
                base[key].update(value)
            else:
                base[key] = value
        obj = base

    kind = obj.get("kind")
    if kind not in ("particle", "hydro", "threshold", "steady"):
        raise ValidationError(f"unknown or missing kind {kind!r}")

    allowed = {"kind", "label", "seed", "t_end"}
    if kind == "hydro":
        allowed |= {"model", "ic", "grid", "integrator", "snapshot_times"}
    elif kind == "particle":
        allowed |= {"model", "ic", "integrator"}
    elif kind == "threshold":
        allowed |= {"family", "model", "ic", "grid"}
    else:
        allowed |= {"profile", "run_dir", "center", "n_residual",
                    "support_fraction"}
    for key in obj:
        if key not in allowed:
            raise ValidationError(f"unknown key {key}")

    label = _scalar(obj, "label", "", str)
    seed = int(_scalar(obj, "seed", 7, (int,)))
    t_end = float(_scalar(obj, "t_end", 10.0, (int, float)))

    if kind == "hydro":
        model = _section(obj, "model", _HYDRO_MODEL)
        ic = _section(obj, "ic", _HYDRO_IC)
        grid = _section(obj, "grid", _GRID)
        integ = _section(obj, "integrator", _INTEGRATOR)
        snaps = tuple(float(t) for t in obj.get("snapshot_times", ()))
        _check_potential(model)
        return ExperimentConfig(kind, label, seed, t_end, model, ic, grid,
                                integ, snaps)
    if kind == "particle":
        model = _section(obj, "model", _PARTICLE_MODEL)
        ic = _section(obj, "ic", _PARTICLE_IC)
        integ = _section(obj, "integrator", _INTEGRATOR)
        _check_potential(model)
        return ExperimentConfig(kind, label, seed, t_end, model, ic, {}, integ)
    if kind == "threshold":
        family = obj.get("family")
        if family not in _THRESHOLD_FAMILIES:
            raise ValidationError(f"unknown threshold family {family!r}")
        model = _section(obj, "model", _THRESHOLD_MODEL)
        ic = _section(obj, "ic", _HYDRO_IC)
        grid = _section(obj, "grid", _GRID)
        return ExperimentConfig(kind, label, seed, t_end, model, ic, grid,
                                family=family)
    profile = obj.get("profile")
    if profile not in _STEADY_PROFILES:
        raise ValidationError(f"unknown steady profile {profile!r}")
    return ExperimentConfig(
        kind, label, seed, t_end, profile=profile,
        run_dir=_scalar(obj, "run_dir", None, str),
        center=float(_scalar(obj, "center", 0.0, (int, float))),
        n_residual=int(_scalar(obj, "n_residual", 800, (int,))),
        support_fraction=float(_scalar(obj, "support_fraction", 0.9,
                                       (int, float))))


def _check_potential(model: dict) -> None:
    kind = model.get("potential")
    if kind is None:
        return
    if kind not in ("quadratic", "newtonian", "power_law", "log_quadratic",
                    "gauss_quadratic"):
        raise ValidationError(f"unknown potential {kind!r}")
    if kind == "quadratic" and not model["alpha"] > 0.0:
        raise ValidationError("key alpha must be positive for a quadratic potential")
    if kind == "gauss_quadratic" and not model["eps"] > 0.0:
        raise ValidationError("key eps must be positive for a mollified potential")


def serialize_config(cfg: ExperimentConfig) -> str:
    """Canonical JSON for a validated config; parse(serialize(c)) == c."""
    out: dict[str, Any] = {"kind": cfg.kind, "label": cfg.label,
                           "seed": cfg.seed, "t_end": cfg.t_end}
    if cfg.kind in ("hydro", "particle", "threshold"):
        if cfg.kind == "threshold":
            out["family"] = cfg.family
        out["model"] = cfg.model
        out["ic"] = cfg.ic
        if cfg.kind != "particle":
            out["grid"] = cfg.grid
        if cfg.kind != "threshold":
            out["integrator"] = cfg.integrator
        if cfg.kind == "hydro":
            out["snapshot_times"] = list(cfg.snapshot_times)
    else:
        out.update({"profile": cfg.profile, "run_dir": cfg.run_dir,
                    "center": cfg.center, "n_residual": cfg.n_residual,
                    "support_fraction": cfg.support_fraction})
    return json.dumps(out, indent=2) + "\n"


# ----------------------------------------------------------------------
# builders
# ----------------------------------------------------------------------

def _kernel_from(model: dict) -> CommunicationKernel:
    return CommunicationKernel(beta=float(model.get("beta", 0.5)),
                               constant_mode=bool(model.get("constant_psi", False)))


def _potential_from(model: dict) -> Optional[PotentialSpec]:
    kind = model.get("potential")
    if kind is None:
        return None
    mapped = "newtonian" if kind == "newtonian" else kind
    return PotentialSpec(kind=mapped, k=float(model["k"]),
                         alpha=float(model["alpha"]), a=float(model["a"]),
                         b=float(model["b"]), eps=float(model["eps"]))


def _integrator_from(integ: dict) -> IntegratorConfig:
    dt_max = integ.get("dt_max")
    return IntegratorConfig(method=integ["method"], dt=float(integ["dt"]),
                            rtol=float(integ["rtol"]), atol=float(integ["atol"]),
                            dt_init=float(integ["dt_init"]),
                            dt_min=float(integ["dt_min"]),
                            dt_max=math.inf if dt_max is None else float(dt_max),
                            output_stride=float(integ["output_stride"]))


def _hydro_initial(cfg: ExperimentConfig):
    grid, dx = build_grid(int(cfg.grid["n"]), tuple(cfg.grid["interval"]))
    ic = cfg.ic
    prof = InitProfile(shape=ic["shape"], halfwidth=float(ic["halfwidth"]),
                       mass=float(ic["mass"]),
                       velocity_shape=ic["velocity_shape"], c=float(ic["c"]),
                       offset=float(ic["offset"]), floor=float(ic["floor"]))
    rho0, v0 = init_profiles(prof, grid, dx)
    return LagrangianState(0.0, grid.copy(), v0, rho0, dx), grid, dx


def _build_hydro(cfg: ExperimentConfig):
    state0, _, _ = _hydro_initial(cfg)
    model = HydroModel(alignment=cfg.model["alignment"],
                       kernel=_kernel_from(cfg.model),
                       potential=_potential_from(cfg.model),
                       pressure_eps=float(cfg.model["pressure_eps"]))
    return model, state0


def _build_particle(cfg: ExperimentConfig):
    ic = cfg.ic
    if ic["layout"] == "uniform":
        state = generate_uniform_ic(int(ic["n"]), ic["position_box"],
                                    ic["velocity_box"], ic["mean_velocity"],
                                    seed=cfg.seed)
    elif ic["layout"] == "two_group":
        state = generate_two_group_ic(seed=cfg.seed, n_large=int(ic["n"]),
                                      n_small=int(ic["n_small"]))
    else:
        raise ValidationError(f"unknown particle layout {ic['layout']!r}")
    model = ParticleModel(alignment=cfg.model["alignment"],
                          kernel=_kernel_from(cfg.model),
                          potential=_potential_from(cfg.model),
                          first_order=bool(cfg.model["first_order"]))
    return model, state


# ----------------------------------------------------------------------
# artifact emission
# ----------------------------------------------------------------------

def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    return str(value)


def _atomic_write(path: str, text: str) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _write_csv(path: str, header, rows) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    _atomic_write(path, "\n".join(lines) + "\n")


def _sanitize(obj):
    """JSON-safe: numpy scalars to python, non-finite floats to null."""
    if isinstance(obj, dict):
        return {k: _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_sanitize(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    return obj


def _write_json(path: str, obj) -> None:
    _atomic_write(path, json.dumps(_sanitize(obj), indent=2) + "\n")


def _print_json(obj) -> None:
    print(json.dumps(_sanitize(obj), indent=2))


def _snapshot_rows(state: LagrangianState):
    h, _ = density_tolerant(state)
    for i in range(state.n):
        yield (i, state.eta[i], state.v[i], h[i])


def run_hydro(cfg: ExperimentConfig, out_dir: str) -> int:
    model, state0 = _build_hydro(cfg)
    summary = simulate_hydro(model, state0, cfg.t_end,
                             integrator_cfg=_integrator_from(cfg.integrator),
                             snapshot_times=cfg.snapshot_times)
    os.makedirs(out_dir, exist_ok=True)

    doc = summary.to_json_dict()
    doc["wall_time"] = None           # keep artifacts byte-reproducible
    _write_json(os.path.join(out_dir, "summary.json"), doc)
    _atomic_write(os.path.join(out_dir, "config.json"), serialize_config(cfg))

    ts = summary.timeseries
    _write_csv(os.path.join(out_dir, "timeseries.csv"), _TS_COLUMNS,
               zip(*(ts[c] for c in _TS_COLUMNS)))
    for wanted, snap in zip(cfg.snapshot_times, summary.snapshots):
        name = f"snapshot_t{wanted:g}.csv"
        _write_csv(os.path.join(out_dir, name),
                   ("node_index", "eta", "v", "h"), _snapshot_rows(snap))
    _write_csv(os.path.join(out_dir, "snapshot_final.csv"),
               ("node_index", "eta", "v", "h"),
               _snapshot_rows(summary.final_state))

    _print_json(doc)
    return 2 if summary.termination == TERM_BLOW_UP else 0


def run_particle(cfg: ExperimentConfig, out_dir: str) -> int:
    model, state0 = _build_particle(cfg)
    run = simulate_particles(model, state0, cfg.t_end,
                             integrator_cfg=_integrator_from(cfg.integrator))
    os.makedirs(out_dir, exist_ok=True)

    n, d = state0.n, state0.d
    xcols = [f"x{i}_{a}" for i in range(n) for a in range(d)]
    vcols = [f"v{i}_{a}" for i in range(n) for a in range(d)]
    rows = []
    for k in range(len(run.times)):
        row = [run.times[k], *run.xs[k].ravel()]
        if run.vs is not None:
            row.extend(run.vs[k].ravel())
        rows.append(row)
    header = ["t", *xcols] + (vcols if run.vs is not None else [])
    _write_csv(os.path.join(out_dir, "trajectory.csv"), header, rows)

    mev = [f"mean_v_{a}" for a in range(d)]
    _write_csv(os.path.join(out_dir, "diagnostics.csv"),
               ["t", "Rx", "Rv", *mev],
               ((run.times[k], run.Rx[k], run.Rv[k], *run.mean_velocity[k])
                for k in range(len(run.times))))

    doc = {"model": run.model, "params": run.params,
           "termination": "ReachedEnd", "blow_up_interval": None,
           "wall_time": None}
    _write_json(os.path.join(out_dir, "summary.json"), doc)
    _atomic_write(os.path.join(out_dir, "config.json"), serialize_config(cfg))
    _print_json(doc)
    return 0


def _threshold_inputs(cfg: ExperimentConfig):
    state0, grid, dx = _hydro_initial(
        ExperimentConfig("hydro", model={}, ic=cfg.ic, grid=cfg.grid,
                         integrator=dict(_INTEGRATOR)))
    rho0 = state0.rho0
    du0 = deta_dx(state0.v, dx)
    return rho0, state0.v, du0, grid, dx


def run_threshold_classify(cfg: ExperimentConfig, out_dir: str) -> int:
    rho0, v0, du0, grid, dx = _threshold_inputs(cfg)
    kernel = _kernel_from(cfg.model)
    k = float(cfg.model["k"])
    m0 = float(dx * rho0.sum())

    curves: dict[str, Any] = {"x": grid, "rho0": rho0, "du0": du0}
    if cfg.family == "euler_alignment":
        verdict = th.classify_euler_alignment(rho0, du0, kernel, grid)
        curves["psi_conv"] = th.psi_conv(kernel, rho0, grid)
    elif cfg.family == "euler_poisson":
        psi_m = float(cfg.model["psi_M"])
        verdict = th.classify_euler_poisson(rho0, du0, kernel, grid, k, psi_m)
        curves["psi_conv"] = th.psi_conv(kernel, rho0, grid)
        if k < 0.0:
            curves["sigma_minus"] = th.sigma_minus(k, rho0)
            curves["sigma_plus"] = np.array(
                [th.sigma_plus(k, r, psi_m) for r in rho0])
    elif cfg.family == "constant_psi":
        verdict = th.classify_constant_psi(rho0, du0, grid, k)
        curves["sigma_plus"] = np.array(
            [th.sigma_plus(k, r, 1.0) for r in rho0])
    elif cfg.family == "damped_newtonian":
        verdict = th.classify_damped_newtonian(rho0, du0, grid, m0)
    else:
        raise ValidationError(
            f"family {cfg.family!r} is a bound, use 'threshold bound'")

    doc = {"region": verdict.region, "witness_x": verdict.witness_x,
           "margin": verdict.margin,
           "params": {"family": cfg.family, "n": int(cfg.grid["n"]),
                      "mass": m0, "k": k, "beta": float(cfg.model["beta"]),
                      "constant_psi": bool(cfg.model["constant_psi"]),
                      "c": float(cfg.ic["c"])}}
    os.makedirs(out_dir, exist_ok=True)
    _write_json(os.path.join(out_dir, "verdict.json"), doc)
    _write_json(os.path.join(out_dir, "curves.json"), curves)
    _print_json(doc)
    return 0


def run_threshold_bound(cfg: ExperimentConfig, out_dir: str) -> int:
    rho0, v0, du0, grid, dx = _threshold_inputs(cfg)
    m0 = float(dx * rho0.sum())
    if cfg.family == "bound_newtonian":
        bound = th.blowup_time_bound_newtonian(rho0, du0, grid)
    elif cfg.family == "bound_log":
        bound = th.blowup_time_bound_log(rho0, du0, grid, m0)
    else:
        raise ValidationError(
            f"family {cfg.family!r} is a classifier, use 'threshold classify'")
    doc = {"finite": bound.finite, "bound": bound.bound,
           "witness_set_size": bound.witness_count,
           "proof_variant_bound": bound.proof_variant_bound}
    os.makedirs(out_dir, exist_ok=True)
    _write_json(os.path.join(out_dir, "bound.json"), doc)
    _print_json(doc)
    return 0


def _read_csv_columns(path: str) -> dict[str, np.ndarray]:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return {name: data[:, i] for i, name in enumerate(header)}


def run_steady_compare(cfg: ExperimentConfig, out_dir: str) -> int:
    if not cfg.run_dir:
        raise ValidationError("steady compare needs run_dir")
    with open(os.path.join(cfg.run_dir, "summary.json"), encoding="utf-8") as fh:
        summary = json.load(fh)
    snap = _read_csv_columns(os.path.join(cfg.run_dir, "snapshot_final.csv"))
    m0 = float(summary["params"]["mass_total"])

    if cfg.profile == "indicator":
        profile = steady_mod.indicator_steady(m0, cfg.center, 0.0)
    elif cfg.profile == "parabola":
        profile = steady_mod.parabola_steady(m0)
    else:
        profile = steady_mod.semicircle_steady(m0)

    l1 = steady_mod.l1_distance(snap["h"], snap["eta"], profile)
    linf = steady_mod.linf_velocity(snap["v"])

    pot_doc = summary["model"].get("potential")
    eps = float(summary["model"].get("pressure_eps", 0.0) or 0.0)
    residual = None
    if eps > 0.0:
        pot = PotentialSpec(kind="gauss_quadratic", eps=eps)
    elif pot_doc:
        pot = PotentialSpec(kind=pot_doc["kind"],
                            k=float(pot_doc.get("k", 0.0)),
                            alpha=float(pot_doc.get("alpha", 0.0)),
                            a=float(pot_doc.get("a", 0.0)),
                            b=float(pot_doc.get("b", 0.0)),
                            eps=float(pot_doc.get("eps", 0.0)))
    else:
        pot = None
    if pot is not None:
        xr, _ = build_grid(cfg.n_residual, profile.support)
        residual = steady_mod.force_residual(profile(xr), xr, pot,
                                             cfg.support_fraction)

    doc = {"l1": l1, "linf": linf, "residual": residual}
    os.makedirs(out_dir, exist_ok=True)
    _write_json(os.path.join(out_dir, "steady_compare.json"), doc)
    _print_json(doc)
    return 0


# ----------------------------------------------------------------------
# entry point
# ----------------------------------------------------------------------

def _load_config(args) -> ExperimentConfig:
    if getattr(args, "config", None) and getattr(args, "preset", None):
        raise ValidationError("give either --config or --preset, not both")
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as fh:
            obj = json.loads(fh.read(), object_pairs_hook=_no_duplicates)
        if not isinstance(obj, dict):
            raise ParseError("top level must be a JSON object")
    elif getattr(args, "preset", None):
        obj = {"preset": args.preset}
    else:
        raise ValidationError("a config is required (--config or --preset)")
    return validate_config(_apply_overrides(obj, args))


def _apply_overrides(obj: dict, args) -> dict:
    if getattr(args, "seed", None) is not None:
        obj["seed"] = args.seed
    if getattr(args, "t_end", None) is not None:
        obj["t_end"] = args.t_end
    if getattr(args, "n", None) is not None:
        kind = obj.get("kind") or PRESETS.get(obj.get("preset", ""), {}).get("kind")
        if kind == "particle":
            obj.setdefault("ic", {})["n"] = args.n
        else:
            obj.setdefault("grid", {})["n"] = args.n
    return obj


def _threshold_from_hydro(cfg: ExperimentConfig, family: Optional[str],
                          action: str) -> ExperimentConfig:
    """Reuse a hydro config's initial data for the analytic classifiers."""
    model = cfg.model
    pot = model.get("potential")
    alignment = model.get("alignment")
    if family is None:
        if action == "bound":
            if alignment == "damping" and pot == "newtonian":
                family = "bound_newtonian"
            elif pot == "log_quadratic":
                family = "bound_log"
        else:
            if model.get("constant_psi"):
                family = "constant_psi"
            elif alignment == "damping" and pot == "newtonian":
                family = "damped_newtonian"
            elif pot == "newtonian" and not model.get("alpha"):
                family = "euler_poisson"
            elif pot is None and alignment in ("cs", "mt"):
                family = "euler_alignment"
        if family is None:
            raise ValidationError(
                "no analytic result applies to this model; pass --family")
    tmodel = dict(_THRESHOLD_MODEL)
    tmodel["beta"] = float(model.get("beta", 0.5))
    tmodel["constant_psi"] = bool(model.get("constant_psi", False))
    tmodel["k"] = float(model.get("k", 0.0)) if pot == "newtonian" else 0.0
    return ExperimentConfig("threshold", cfg.label, cfg.seed, cfg.t_end,
                            tmodel, cfg.ic, cfg.grid, family=family)


def _out_dir(args, fallback: str) -> str:
    if getattr(args, "out", None):
        return args.out
    env = os.environ.get("SWARMHYDRO_OUT")
    if env:
        return os.path.join(env, fallback)
    return os.path.join("runs", fallback)


def _run_name(args) -> str:
    if getattr(args, "preset", None):
        return args.preset
    if getattr(args, "config", None):
        stem = os.path.splitext(os.path.basename(args.config))[0]
        return stem or "run"
    return "run"


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", metavar="PATH")
    p.add_argument("--preset", metavar="NAME")
    p.add_argument("--out", metavar="DIR")
    p.add_argument("--seed", type=int, metavar="N")
    p.add_argument("--n", type=int, metavar="N")
    p.add_argument("--t-end", dest="t_end", type=float, metavar="T")


def _sweep_one(name: str, t_end: Optional[float], base: str) -> tuple[str, str, int]:
    cfg = validate_config({"preset": name} if t_end is None
                          else {"preset": name, "t_end": t_end})
    out = os.path.join(base, name)
    import io
    from contextlib import redirect_stdout
    sink = io.StringIO()
    with redirect_stdout(sink):
        if cfg.kind == "hydro":
            code = run_hydro(cfg, out)
        elif cfg.kind == "particle":
            code = run_particle(cfg, out)
        else:
            raise ValidationError(f"preset {name} is not runnable in a sweep")
    term = "BlowUpDetected" if code == 2 else "ReachedEnd"
    return name, term, code


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="swarmhydro",
        description="Flocking particle systems and 1D alignment hydrodynamics")
    sub = parser.add_subparsers(dest="command", required=True)

    for group, actions in (("particle", ["run"]), ("hydro", ["run"]),
                           ("threshold", ["classify", "bound"]),
                           ("steady", ["compare"])):
        g = sub.add_parser(group)
        gs = g.add_subparsers(dest="action", required=True)
        for act in actions:
            p = gs.add_parser(act)
            _add_common(p)
            if group == "threshold":
                p.add_argument("--family", choices=_THRESHOLD_FAMILIES)

    g = sub.add_parser("preset")
    gs = g.add_subparsers(dest="action", required=True)
    gs.add_parser("list")

    sw = sub.add_parser("sweep")
    sw.add_argument("names", nargs="*", metavar="PRESET")
    sw.add_argument("--all", action="store_true")
    sw.add_argument("--jobs", type=int, default=1)
    sw.add_argument("--out", metavar="DIR")
    sw.add_argument("--t-end", dest="t_end", type=float, metavar="T")

    args = parser.parse_args(argv)

    try:
        if args.command == "preset":
            for name, conf in PRESETS.items():
                print(f"{name:<18} {conf['kind']:<9} {conf.get('label', '')}")
            return 0

        if args.command == "sweep":
            names = list(PRESETS) if args.all else args.names
            if not names:
                raise ValidationError("sweep needs preset names or --all")
            for name in names:
                if name not in PRESETS:
                    raise ValidationError(f"unknown preset {name!r}")
            base = args.out or os.environ.get("SWARMHYDRO_OUT") or "runs"
            results = []
            if args.jobs > 1:
                import concurrent.futures as cf
                with cf.ProcessPoolExecutor(max_workers=args.jobs) as pool:
                    futs = [pool.submit(_sweep_one, n, args.t_end, base)
                            for n in names]
                    results = [f.result() for f in futs]
            else:
                results = [_sweep_one(n, args.t_end, base) for n in names]
            for name, term, code in results:
                print(f"{name:<18} {term:<16} exit={code}")
            _write_json(os.path.join(base, "sweep_summary.json"),
                        {name: {"termination": term, "exit_code": code}
                         for name, term, code in results})
            return 0

        cfg = _load_config(args)
        out = _out_dir(args, _run_name(args))
        if args.command == "particle":
            if cfg.kind != "particle":
                raise ValidationError(f"config kind {cfg.kind!r} is not particle")
            return run_particle(cfg, out)
        if args.command == "hydro":
            if cfg.kind != "hydro":
                raise ValidationError(f"config kind {cfg.kind!r} is not hydro")
            return run_hydro(cfg, out)
        if args.command == "threshold":
            if cfg.kind == "hydro":
                cfg = _threshold_from_hydro(cfg, args.family, args.action)
            elif cfg.kind != "threshold":
                raise ValidationError(f"config kind {cfg.kind!r} is not threshold")
            if args.action == "classify":
                return run_threshold_classify(cfg, out)
            return run_threshold_bound(cfg, out)
        if args.command == "steady":
            if cfg.kind != "steady":
                raise ValidationError(f"config kind {cfg.kind!r} is not steady")
            return run_steady_compare(cfg, out)
        raise ValidationError(f"unknown command {args.command!r}")
    except Exception as exc:                      # surfaced as JSON on stderr
        err = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(err), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
