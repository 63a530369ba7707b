"""Canned experiment configurations.

Each preset is a plain config dict in the same schema ``parse_config``
accepts, named after the figure-style experiment it reproduces.  The 2.x
family covers particle runs, the 3.x family the 1D Lagrangian hydro runs.
"""
from __future__ import annotations

from typing import Any

__all__ = ["PRESETS", "preset_config", "preset_names"]

_RK45 = {"method": "rk45", "rtol": 1e-8, "atol": 1e-10, "dt_init": 1e-3,
         "dt_min": 1e-12, "output_stride": 0.05}

_PARTICLE_BOXES = {
    "layout": "uniform",
    "n": 50,
    "position_box": [[-10.0, 10.0], [-10.0, 10.0]],
    "velocity_box": [[-5.0, 5.0], [-4.3, 5.7]],
    "mean_velocity": [0.0, 0.7],
}

_GRID_DEFAULT = {"n": 200, "interval": [-0.75, 0.75]}

_PRESSURE_EPS = 10.0 ** -4.1


def _particle(beta: float, t_end: float, stride: float,
              alignment: str = "cs", ic: dict | None = None,
              potential: dict | None = None, label: str = "") -> dict:
    model: dict[str, Any] = {"alignment": alignment, "beta": beta}
    if potential:
        model.update(potential)
    return {
        "kind": "particle",
        "label": label,
        "model": model,
        "ic": dict(ic or _PARTICLE_BOXES),
        "integrator": {**_RK45, "output_stride": stride},
        "seed": 7,
        "t_end": t_end,
    }


def _hydro(label: str, model: dict, ic: dict, t_end: float,
           grid: dict | None = None) -> dict:
    return {
        "kind": "hydro",
        "label": label,
        "model": model,
        "ic": ic,
        "grid": dict(grid or _GRID_DEFAULT),
        "integrator": dict(_RK45),
        "seed": 7,
        "t_end": t_end,
    }


def _cosine(mass: float, c: float, velocity_shape: str = "sine",
            halfwidth: float = 0.75, offset: float = 0.0,
            floor: float = 0.0) -> dict:
    return {"shape": "cosine", "halfwidth": halfwidth, "mass": mass,
            "velocity_shape": velocity_shape, "c": c, "offset": offset,
            "floor": floor}


_TWO_GROUP_IC = {"layout": "two_group", "n": 50, "n_small": 5,
                 "mean_velocity": [0.0, 0.7]}

PRESETS: dict[str, dict] = {
    # --- particle experiments ---------------------------------------------
    "fig-2.1-beta0.8": _particle(
        0.8, 250.0, 0.5,
        label="2D alignment, slowly decaying communication: unconditional flock"),
    "fig-2.2-beta1.05": _particle(
        1.05, 250000.0, 500.0,
        label="2D alignment, beta=1.05: diameters satisfy the flocking condition"),
    "fig-2.2-beta1.2": _particle(
        1.2, 250000.0, 500.0,
        label="2D alignment, beta=1.2: flocking condition violated"),
    "fig-2.3-cs": _particle(
        0.5, 20.0, 0.05, ic=_TWO_GROUP_IC,
        label="two distant groups, global averaging: slow velocity-diameter decay"),
    "fig-2.3-mt": _particle(
        0.5, 20.0, 0.05, alignment="mt", ic=_TWO_GROUP_IC,
        label="two distant groups, local averaging: fast velocity-diameter decay"),
    "fig-2.4-cs": _particle(
        0.5, 50.0, 0.1, ic=_TWO_GROUP_IC,
        label="two-group snapshots under global averaging"),
    "fig-2.4-mt": _particle(
        0.5, 50.0, 0.1, alignment="mt", ic=_TWO_GROUP_IC,
        label="two-group snapshots under local averaging"),
    "fig-2.5-confined": _particle(
        0.5, 20.0, 0.05,
        potential={"potential": "newtonian", "k": -1.0, "alpha": 1.0},
        label="alignment with confined repulsion: flock settles into a disc"),
    # --- hydro: pure alignment --------------------------------------------
    "fig-3.2-c0.2": _hydro(
        "alignment hydro, subcritical c=0.2: global flocking",
        {"alignment": "cs", "beta": 0.5}, _cosine(1.0, 0.2), 20.0),
    "fig-3.2-c0.4": _hydro(
        "alignment hydro, subcritical c=0.4: global flocking",
        {"alignment": "cs", "beta": 0.5}, _cosine(1.0, 0.4), 20.0),
    "fig-3.3-c0.5": _hydro(
        "alignment hydro, supercritical c=0.5: finite-time gradient blow-up",
        {"alignment": "cs", "beta": 0.5}, _cosine(1.0, 0.5), 20.0),
    # --- hydro: two-group global vs local averaging -----------------------
    "fig-3.4-cs": _hydro(
        "two-bump density, global averaging",
        {"alignment": "cs", "beta": 0.5},
        {"shape": "two_group", "mass": 1.0, "velocity_shape": "two_group",
         "c": 0.1},
        20.0, grid={"n": 200, "interval": [-1.0, 6.5]}),
    "fig-3.4-mt": _hydro(
        "two-bump density, local averaging",
        {"alignment": "mt", "beta": 0.5},
        {"shape": "two_group", "mass": 1.0, "velocity_shape": "two_group",
         "c": 0.1},
        20.0, grid={"n": 200, "interval": [-1.0, 6.5]}),
    # --- hydro: alignment + 1D Newtonian coupling -------------------------
    "fig-3.5-k0.5-c0.4": _hydro(
        "attractive Newtonian coupling: unconditional blow-up",
        {"alignment": "cs", "beta": 0.5,
         "potential": "newtonian", "k": 0.5, "alpha": 0.0},
        _cosine(1.0, 0.4), 10.0),
    "fig-3.7-c0.95": _hydro(
        "repulsive Newtonian coupling, subcritical c=0.95",
        {"alignment": "cs", "beta": 0.5,
         "potential": "newtonian", "k": -0.5, "alpha": 0.0},
        _cosine(1.0, 0.95), 10.0),
    "fig-3.8-c1.08": _hydro(
        "repulsive Newtonian coupling, gap-region c=1.08: blow-up observed",
        {"alignment": "cs", "beta": 0.5,
         "potential": "newtonian", "k": -0.5, "alpha": 0.0},
        _cosine(1.0, 1.08), 10.0),
    "fig-3.9-c1.2": _hydro(
        "repulsive Newtonian coupling, supercritical c=1.2",
        {"alignment": "cs", "beta": 0.5,
         "potential": "newtonian", "k": -0.5, "alpha": 0.0},
        _cosine(1.0, 1.2), 10.0),
    # --- hydro: damping + confined Newtonian repulsion --------------------
    "fig-3.10-c0.9": _hydro(
        "damped confined repulsion, subcritical: settles on a unit plateau",
        {"alignment": "damping",
         "potential": "newtonian", "k": -0.5, "alpha": 1.0},
        _cosine(0.2, 0.9, velocity_shape="linear", halfwidth=0.85), 30.0),
    "fig-3.10-c1.1": _hydro(
        "damped confined repulsion, supercritical: boundary-node collapse",
        {"alignment": "damping",
         "potential": "newtonian", "k": -0.5, "alpha": 1.0},
        _cosine(0.2, 1.1, velocity_shape="linear", halfwidth=0.85), 30.0),
    "fig-3.12-c0.2": _hydro(
        "nonlocal alignment with confined repulsion, mass 1, c=0.2",
        {"alignment": "cs", "beta": 0.5,
         "potential": "newtonian", "k": -0.5, "alpha": 1.0},
        _cosine(1.0, 0.2, velocity_shape="linear", halfwidth=0.85), 30.0),
    "fig-3.12-c0.5": _hydro(
        "nonlocal alignment with confined repulsion, mass 1, c=0.5: blow-up",
        {"alignment": "cs", "beta": 0.5,
         "potential": "newtonian", "k": -0.5, "alpha": 1.0},
        _cosine(1.0, 0.5, velocity_shape="linear", halfwidth=0.85), 30.0),
    # --- hydro: damping + logarithmic repulsion ---------------------------
    "fig-3.13-c0.3": _hydro(
        "damped log repulsion, mild slope: semicircle limit",
        {"alignment": "damping", "potential": "log_quadratic"},
        _cosine(0.2, 0.3, velocity_shape="linear"), 30.0),
    "fig-3.13-c1.0": _hydro(
        "damped log repulsion, steep slope: finite-time collapse",
        {"alignment": "damping", "potential": "log_quadratic"},
        _cosine(0.2, 1.0, velocity_shape="linear"), 30.0),
    # --- hydro: quadratic confinement + mollified pressure ----------------
    "fig-3.14-damped": _hydro(
        "damped pressure model: parabolic steady profile",
        {"alignment": "damping", "potential": "quadratic", "alpha": 1.0,
         "pressure_eps": _PRESSURE_EPS},
        _cosine(1.0, 0.2, floor=0.05), 20.0),
    "fig-3.14-cs": _hydro(
        "alignment pressure model with net momentum: traveling parabola",
        {"alignment": "cs", "beta": 0.5, "potential": "quadratic",
         "alpha": 1.0, "pressure_eps": _PRESSURE_EPS},
        _cosine(1.0, 0.2, floor=0.05, offset=0.1), 20.0),
}


def preset_names() -> list[str]:
    return list(PRESETS)


def preset_config(name: str) -> dict:
    """Deep copy of the named preset's config dict."""
    if name not in PRESETS:
        raise KeyError(f"unknown preset {name!r}")
    import copy

    return copy.deepcopy(PRESETS[name])
