"""Scenario-driven command line: binds the models to the observables.

Scenario files are flat key=value text (or the JSON equivalent); every
run writes one CSV table per requested observable with a '#'-prefixed
metadata block.  Outputs are deterministic for a fixed seed: re-running
a scenario reproduces the data section byte for byte.

Exit codes: 0 success, 2 configuration error, 3 model/runtime error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .errors import ConfigError, DecolabError, NoFringeError
from .fock_core import (
    DensityMatrix,
    FockSpace,
    annihilation,
    cat_density,
    coherent_state,
    default_dim,
)
from .gravity_exact import GravityBathParams, evolve_density, steady_state
from .langevin_sde import SdeParams, run_ensemble, theta_for_occupation
from .lindblad_qed import (
    QedParams,
    build_single_photon,
    build_two_photon,
    evolve,
    free_rotation,
    stable_dt,
)
from .phase_space import (
    PhaseSpaceGrid,
    fringe_visibility,
    negativity_volume,
    position_density,
    wigner,
)
from .scenarios import BUILTINS, list_scenarios

DEFAULT_SEED = 20260810

MODELS = ("gravity", "qed_lindblad", "qed_sde", "qed_single_photon")
OBSERVABLES = ("wigner", "pdensity", "visibility", "negativity", "moments")

COMMON_KEYS = {
    "name",
    "model",
    "alpha",
    "alpha1",
    "alpha2",
    "observables",
    "times",
    "t_max",
    "stride",
    "dim",
    "grid_points",
    "grid_points_p",
    "grid_range",
    "xgrid_points",
    "xgrid_range",
    "out",
    "seed",
}
MODEL_KEYS = {
    "gravity": {
        "coupling_over_pi",
        "cutoff",
        "beta",
        "include_kerr_phase",
        "include_freq_shift",
        "form",
    },
    "qed_lindblad": {"gamma", "nbar", "omega", "dt", "rotating_frame"},
    "qed_single_photon": {"gamma", "nbar", "omega", "dt", "rotating_frame"},
    "qed_sde": {
        "gamma",
        "nbar",
        "theta",
        "omega",
        "dt",
        "n_traj",
        "variant",
        "scheme",
        "nonrwa_mode",
    },
}
MODEL_OBSERVABLES = {
    "gravity": {"wigner", "pdensity", "visibility", "negativity", "moments"},
    "qed_lindblad": {"wigner", "pdensity", "visibility", "negativity", "moments"},
    "qed_single_photon": {"wigner", "pdensity", "visibility", "negativity", "moments"},
    "qed_sde": {"moments"},
}


@dataclass
class Scenario:
    name: str
    model: str
    params: dict
    observables: tuple
    alpha: complex | None = None
    alpha1: complex | None = None
    alpha2: complex | None = None
    times: tuple = ()
    t_max: float | None = None
    stride: float | None = None
    dim: int | None = None
    grid_points: int | None = None
    grid_points_p: int | None = None
    grid_range: float | None = None
    xgrid_points: int | None = None
    xgrid_range: float | None = None
    out: str = "."
    seed: int = DEFAULT_SEED

    def alpha_max(self) -> float:
        vals = [abs(a) for a in (self.alpha, self.alpha1, self.alpha2) if a is not None]
        if not vals:
            raise ConfigError("scenario defines no initial amplitude")
        return max(vals)

    def canonical(self) -> dict:
        d = {
            "name": self.name,
            "model": self.model,
            "observables": list(self.observables),
            "seed": self.seed,
        }
        for key in ("alpha", "alpha1", "alpha2"):
            v = getattr(self, key)
            if v is not None:
                d[key] = [v.real, v.imag]
        if self.times:
            d["times"] = ["inf" if math.isinf(t) else t for t in self.times]
        for key in ("t_max", "stride", "dim", "grid_points", "grid_points_p",
                    "grid_range", "xgrid_points", "xgrid_range"):
            v = getattr(self, key)
            if v is not None:
                d[key] = v
        d["params"] = {k: self.params[k] for k in sorted(self.params)}
        return d

    def digest(self) -> str:
        blob = json.dumps(self.canonical(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:12]


# --- parsing -----------------------------------------------------------------


def _parse_scalar(text: str):
    s = text.strip()
    if s.endswith("pi"):
        head = s[:-2].strip()
        try:
            return (float(head) if head else 1.0) * math.pi
        except ValueError:
            pass
    if s in ("inf", "Infinity", "+inf"):
        return math.inf
    try:
        return json.loads(s)
    except json.JSONDecodeError:
        return s


def _parse_value(text: str):
    s = text.strip()
    if "," in s:
        return [_parse_scalar(p) for p in s.split(",") if p.strip()]
    return _parse_scalar(s)


def parse_flat(text: str) -> dict:
    """Flat `key = value` lines; '#' and ';' lines are comments."""
    raw = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if not s or s.startswith("#") or s.startswith(";"):
            continue
        if "=" not in s:
            raise ConfigError(f"line {lineno}: expected key = value, got {s!r}")
        key, _, value = s.partition("=")
        key = key.strip()
        if key in raw:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        raw[key] = _parse_value(value)
    return raw


def load_scenario_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read scenario file {path}: {exc}") from exc
    if path.endswith(".json"):
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError(f"{path}: top level must be an object")
        return raw
    return parse_flat(text)


def _as_complex(value, key: str) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, list) and len(value) == 2:
        return complex(value[0], value[1])
    raise ConfigError(f"{key} must be a number or [re, im] pair, got {value!r}")


def _as_times(value) -> tuple:
    items = value if isinstance(value, list) else [value]
    out = []
    for v in items:
        if isinstance(v, str):
            v = _parse_scalar(v)
        if not isinstance(v, (int, float)):
            raise ConfigError(f"times entries must be numbers, got {v!r}")
        if not math.isinf(v) and v < 0:
            raise ConfigError("times must be nonnegative")
        out.append(float(v))
    return tuple(out)


def validate_scenario(raw: dict) -> Scenario:
    raw = dict(raw)
    model = raw.get("model")
    if model is None:
        raise ConfigError("scenario is missing required key 'model'")
    if model not in MODELS:
        raise ConfigError(f"unknown model {model!r}; expected one of {MODELS}")
    allowed = COMMON_KEYS | MODEL_KEYS[model]
    for key in raw:
        if key not in allowed:
            raise ConfigError(f"unknown key {key!r} for model {model!r}")

    obs = raw.get("observables", [])
    if isinstance(obs, str):
        obs = [obs]
    if not obs:
        raise ConfigError("scenario requests no observables")
    for o in obs:
        if o not in OBSERVABLES:
            raise ConfigError(f"unknown observable {o!r}; expected one of {OBSERVABLES}")
        if o not in MODEL_OBSERVABLES[model]:
            raise ConfigError(f"observable {o!r} is not available for model {model!r}")

    alpha = raw.get("alpha")
    alpha1 = raw.get("alpha1")
    alpha2 = raw.get("alpha2")
    if (alpha1 is None) != (alpha2 is None):
        raise ConfigError("alpha1 and alpha2 must be given together")
    if alpha is None and alpha1 is None:
        raise ConfigError("scenario needs either alpha (coherent) or alpha1+alpha2 (cat)")
    if alpha is not None and alpha1 is not None:
        raise ConfigError("give either alpha or alpha1+alpha2, not both")
    if model == "qed_sde" and alpha is None:
        raise ConfigError("qed_sde takes a single classical amplitude alpha")

    times = _as_times(raw["times"]) if "times" in raw else ()
    t_max = raw.get("t_max")
    stride = raw.get("stride")
    if (t_max is None) != (stride is None):
        raise ConfigError("t_max and stride must be given together")
    if not times and t_max is None:
        raise ConfigError("scenario needs a time spec: times or t_max+stride")
    if times and t_max is not None:
        raise ConfigError("give either times or t_max+stride, not both")

    params = {k: raw[k] for k in MODEL_KEYS[model] if k in raw}
    name = raw.get("name", "scenario")

    def _opt(key, kind):
        v = raw.get(key)
        if v is None:
            return None
        try:
            return kind(v)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad value for {key}: {v!r}") from exc

    return Scenario(
        name=str(name),
        model=model,
        params=params,
        observables=tuple(obs),
        alpha=_as_complex(alpha, "alpha") if alpha is not None else None,
        alpha1=_as_complex(alpha1, "alpha1") if alpha1 is not None else None,
        alpha2=_as_complex(alpha2, "alpha2") if alpha2 is not None else None,
        times=times,
        t_max=float(t_max) if t_max is not None else None,
        stride=float(stride) if stride is not None else None,
        dim=_opt("dim", int),
        grid_points=_opt("grid_points", int),
        grid_points_p=_opt("grid_points_p", int),
        grid_range=_opt("grid_range", float),
        xgrid_points=_opt("xgrid_points", int),
        xgrid_range=_opt("xgrid_range", float),
        out=str(raw.get("out", ".")),
        seed=_opt("seed", int) if raw.get("seed") is not None else DEFAULT_SEED,
    )


# --- output ------------------------------------------------------------------


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    v = float(value)
    if math.isinf(v):
        return "inf"
    if not math.isfinite(v):
        raise DecolabError("non-finite value in result table")
    return f"{v:.12g}"


def write_table(path, scenario: Scenario, header, rows, extra_meta=None):
    lines = [
        f"# decolab-version: {__version__}",
        f"# scenario: {scenario.name}",
        f"# model: {scenario.model}",
        f"# seed: {scenario.seed}",
        f"# hash: {scenario.digest()}",
    ]
    for key in sorted(scenario.params):
        lines.append(f"# {key}: {scenario.params[key]}")
    for key, value in (extra_meta or {}).items():
        lines.append(f"# {key}: {value}")
    lines.append(",".join(header))
    for row in rows:
        if len(row) != len(header):
            raise DecolabError("row width does not match header")
        lines.append(",".join(_fmt(v) for v in row))
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def _tau_tag(tau: float) -> str:
    if math.isinf(tau):
        return "inf"
    return f"{tau:.6g}".replace(".", "p").replace("-", "m")


# --- model runners -----------------------------------------------------------


def _support_half_range(sc: Scenario, space_dim: int) -> float:
    half = math.sqrt(2.0) * sc.alpha_max() + 4.0
    if sc.model in ("qed_lindblad", "qed_single_photon"):
        # a thermal bath pumps population toward the truncation radius
        half = max(half, math.sqrt(2.0 * space_dim + 1.0) + 2.0)
    return half


def _phase_grid(sc: Scenario, space_dim: int) -> PhaseSpaceGrid:
    if sc.grid_points is not None or sc.grid_range is not None:
        nx = sc.grid_points or 201
        npts = sc.grid_points_p or nx
        half = sc.grid_range or _support_half_range(sc, space_dim)
        return PhaseSpaceGrid(-half, half, -half, half, nx, npts)
    half = _support_half_range(sc, space_dim)
    a = max(abs(sc.alpha_max()), 1.0)
    wavelength = 2.0 * math.pi / (2.0 * math.sqrt(2.0) * a)
    points = max(101, 2 * math.ceil(half / (wavelength / 8.0)) + 1)
    return PhaseSpaceGrid.square(half, points)


def _xgrid(sc: Scenario, space_dim: int) -> np.ndarray:
    half = sc.xgrid_range or _support_half_range(sc, space_dim)
    if sc.xgrid_points is not None:
        points = sc.xgrid_points
    else:
        spacing = _expected_fringe_spacing(sc)
        step = (spacing / 16.0) if spacing else 0.05
        points = 2 * math.ceil(half / step) + 1
    return np.linspace(-half, half, points)


def _expected_fringe_spacing(sc: Scenario):
    if sc.alpha1 is None or sc.alpha2 is None:
        return None
    sep = abs(sc.alpha1 - sc.alpha2)
    if sep < 1e-12:
        return None
    return 2.0 * math.pi / (math.sqrt(2.0) * sep)


def _initial_state(sc: Scenario, space: FockSpace) -> DensityMatrix:
    if sc.alpha is not None:
        vec = coherent_state(sc.alpha, space)
        return DensityMatrix(space, np.outer(vec, vec.conj()))
    return cat_density(sc.alpha1, sc.alpha2, space)


def _moment_rows(times, states, space: FockSpace, omega_shift: float = 0.0):
    a = annihilation(space).matrix
    n_diag = np.arange(space.dim)
    rows = []
    for tau, state in zip(times, states):
        mean_a = complex(np.trace(a @ state.matrix))
        if omega_shift:
            mean_a *= np.exp(-1j * omega_shift * tau)
        mean_n = float(np.sum(n_diag * state.matrix.diagonal().real))
        rows.append((tau, mean_a.real, mean_a.imag, mean_n, 0.0))
    return rows


def _visibility_rows(times, states, xgrid, spacing):
    rows = []
    for tau, state in zip(times, states):
        dens = position_density(state, xgrid)
        try:
            reading = fringe_visibility(dens, expected_spacing=spacing)
            rows.append((tau, reading.nu, reading.spacing, "ok"))
        except NoFringeError:
            rows.append((tau, None, None, "no_fringe"))
    return rows


def _emit_state_observables(sc: Scenario, times, states, paths, omega_shift=0.0):
    """Write the requested state-derived tables for (times, states)."""
    outdir = sc.out
    space_dim = states[0].space.dim
    if "wigner" in sc.observables or "negativity" in sc.observables:
        grid = _phase_grid(sc, space_dim)
        fields = [(tau, wigner(state, grid)) for tau, state in zip(times, states)]
        if "wigner" in sc.observables:
            xs, ps = grid.xs(), grid.ps()
            for tau, fld in fields:
                rows = []
                for i, x in enumerate(xs):
                    col = fld.values[i]
                    rows.extend((x, p, w) for p, w in zip(ps, col))
                paths.append(
                    write_table(
                        os.path.join(outdir, f"{sc.name}__wigner__tau{_tau_tag(tau)}.csv"),
                        sc,
                        ("x", "p", "w"),
                        rows,
                        {"tau": _fmt(tau)},
                    )
                )
        if "negativity" in sc.observables:
            rows = [(tau, negativity_volume(fld)) for tau, fld in fields]
            paths.append(
                write_table(
                    os.path.join(outdir, f"{sc.name}__negativity.csv"),
                    sc,
                    ("tau", "negativity_volume"),
                    rows,
                )
            )
    if "pdensity" in sc.observables:
        xgrid = _xgrid(sc, space_dim)
        rows = []
        for tau, state in zip(times, states):
            dens = position_density(state, xgrid)
            rows.extend((tau, x, v) for x, v in zip(xgrid, dens.values))
        paths.append(
            write_table(
                os.path.join(outdir, f"{sc.name}__pdensity.csv"),
                sc,
                ("tau", "x", "p_of_x"),
                rows,
            )
        )
    if "visibility" in sc.observables:
        xgrid = _xgrid(sc, space_dim)
        rows = _visibility_rows(times, states, xgrid, _expected_fringe_spacing(sc))
        paths.append(
            write_table(
                os.path.join(outdir, f"{sc.name}__visibility.csv"),
                sc,
                ("tau", "nu", "fringe_spacing", "status"),
                rows,
            )
        )
    if "moments" in sc.observables:
        rows = _moment_rows(times, states, states[0].space, omega_shift)
        paths.append(
            write_table(
                os.path.join(outdir, f"{sc.name}__moments.csv"),
                sc,
                ("tau", "re_mean_a", "im_mean_a", "mean_n", "stderr_n"),
                rows,
            )
        )


def run_gravity(sc: Scenario) -> list:
    params = GravityBathParams(
        coupling_over_pi=sc.params.get("coupling_over_pi", 0.001),
        cutoff=sc.params.get("cutoff", 1.0e3),
        beta=sc.params.get("beta", 1.0),
        include_kerr_phase=bool(sc.params.get("include_kerr_phase", False)),
        include_freq_shift=bool(sc.params.get("include_freq_shift", False)),
    )
    form = sc.params.get("form", "exact_gamma")
    space = FockSpace(sc.dim or default_dim(sc.alpha_max()))
    rho0 = _initial_state(sc, space)
    times = sc.times or tuple(
        np.arange(0.0, sc.t_max + 0.5 * sc.stride, sc.stride)
    )
    states = [
        steady_state(rho0) if math.isinf(t) else evolve_density(rho0, t, params, form)
        for t in times
    ]
    paths: list = []
    _emit_state_observables(sc, times, states, paths)
    return paths


def _snapshot_base(times, stride):
    if stride is not None:
        return stride
    finite = sorted({t for t in times if t > 0})
    if not finite:
        return 1.0
    half_pi = 0.5 * math.pi
    if all(abs(t / half_pi - round(t / half_pi)) < 1e-9 for t in finite):
        return half_pi
    return finite[0]


def run_qed_master(sc: Scenario) -> list:
    gamma = sc.params.get("gamma")
    if gamma is None:
        raise ConfigError(f"model {sc.model!r} requires gamma")
    omega = float(sc.params.get("omega", 1.0))
    rotating = bool(sc.params.get("rotating_frame", False))
    qp = QedParams(gamma=float(gamma), nbar=float(sc.params.get("nbar", 0.0)),
                   omega=0.0 if rotating else omega)
    space = FockSpace(sc.dim or default_dim(sc.alpha_max()))
    build = build_single_photon if sc.model == "qed_single_photon" else build_two_photon
    liouvillian = build(space, qp)

    times = sc.times or tuple(np.arange(0.0, sc.t_max + 0.5 * sc.stride, sc.stride))
    t_final = max(times)
    dt = sc.params.get("dt")
    if dt is None:
        dt = stable_dt(liouvillian, base=_snapshot_base(times, sc.stride))
    result = evolve(
        _initial_state(sc, space),
        liouvillian,
        t_final,
        dt=float(dt),
        snapshot_times=list(times),
        check_eigenvalues=False,
    )
    states = result.states
    omega_shift = 0.0
    if rotating and omega != 0.0:
        states = [free_rotation(s, t, omega) for s, t in zip(states, times)]
        omega_shift = 0.0  # states already carry the lab-frame phases
    paths: list = []
    _emit_state_observables(sc, times, states, paths, omega_shift)
    return paths


def run_qed_sde(sc: Scenario) -> list:
    if sc.t_max is None:
        raise ConfigError("qed_sde needs t_max and stride")
    theta = sc.params.get("theta")
    if theta is None:
        nbar = sc.params.get("nbar")
        theta = 0.0 if nbar in (None, 0, 0.0) else theta_for_occupation(float(nbar))
    params = SdeParams(
        gamma=float(sc.params.get("gamma", 0.0)),
        theta=float(theta),
        dt=float(sc.params.get("dt", 5e-4)),
        n_traj=int(sc.params.get("n_traj", 1000)),
        seed=sc.seed,
        omega=float(sc.params.get("omega", 1.0)),
        scheme=sc.params.get("scheme", "euler"),
        nonrwa_mode=sc.params.get("nonrwa_mode", "substitute"),
    )
    variant = sc.params.get("variant", "rwa")
    ens = run_ensemble(sc.alpha, params, variant, t_max=sc.t_max, snap_stride=sc.stride)
    rows = [
        (t, ma.real, ma.imag, mn, se)
        for t, ma, mn, se in zip(ens.times, ens.mean_a, ens.mean_abs2, ens.stderr_abs2)
    ]
    return [
        write_table(
            os.path.join(sc.out, f"{sc.name}__moments.csv"),
            sc,
            ("tau", "re_mean_a", "im_mean_a", "mean_n", "stderr_n"),
            rows,
            {"variant": variant, "n_traj": ens.n_traj, "discarded": ens.n_discarded},
        )
    ]


RUNNERS = {
    "gravity": run_gravity,
    "qed_lindblad": run_qed_master,
    "qed_single_photon": run_qed_master,
    "qed_sde": run_qed_sde,
}


def run_scenario(sc: Scenario) -> list:
    return RUNNERS[sc.model](sc)


# --- command line ------------------------------------------------------------


def _apply_overrides(raw: dict, args) -> dict:
    raw = dict(raw)
    for item in args.override or ():
        if "=" not in item:
            raise ConfigError(f"--override expects key=value, got {item!r}")
        key, _, value = item.partition("=")
        raw[key.strip()] = _parse_value(value)
    if args.seed is not None:
        raw["seed"] = args.seed
    if args.dim is not None:
        raw["dim"] = args.dim
    if args.dt is not None:
        raw["dt"] = args.dt
    if args.grid is not None:
        nx, npts, half = args.grid
        raw["grid_points"] = int(nx)
        raw["grid_points_p"] = int(npts)
        raw["grid_range"] = float(half)
    if args.out is not None:
        raw["out"] = args.out
    return raw


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="decolab",
        description="desk-scale open-system decoherence scenarios",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    runp = sub.add_parser("run", help="run a scenario file or built-in name")
    runp.add_argument("scenario", help="path to a scenario file or a built-in name")
    runp.add_argument("--out", default=None, help="output directory")
    runp.add_argument("--seed", type=int, default=None)
    runp.add_argument("--dim", type=int, default=None, help="Fock cutoff override")
    runp.add_argument("--dt", type=float, default=None, help="integrator step override")
    runp.add_argument(
        "--grid",
        nargs=3,
        type=float,
        metavar=("NX", "NP", "RANGE"),
        default=None,
        help="phase-space grid: points per axis and half-range",
    )
    runp.add_argument(
        "--override",
        action="append",
        metavar="KEY=VALUE",
        help="override any scenario key (repeatable)",
    )
    sub.add_parser("list", help="list built-in scenarios")
    sub.add_parser("version", help="print version")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "list":
        print(list_scenarios())
        return 0
    if args.command == "version":
        print(__version__)
        return 0

    try:
        if args.scenario in BUILTINS:
            raws = [dict(d) for d in BUILTINS[args.scenario]]
        elif os.path.exists(args.scenario):
            raws = [load_scenario_file(args.scenario)]
        else:
            raise ConfigError(
                f"{args.scenario!r} is neither a file nor a built-in; "
                "see `decolab list`"
            )
        scenarios = [validate_scenario(_apply_overrides(raw, args)) for raw in raws]
    except ConfigError as exc:
        print(f"ConfigError: {exc}", file=sys.stderr)
        return 2

    worker_cap = os.environ.get("DECOLAB_THREADS")
    if worker_cap is not None:
        try:
            if int(worker_cap) < 1:
                print("ConfigError: DECOLAB_THREADS must be >= 1", file=sys.stderr)
                return 2
        except ValueError:
            print("ConfigError: DECOLAB_THREADS must be an integer", file=sys.stderr)
            return 2

    try:
        for sc in scenarios:
            for path in run_scenario(sc):
                print(path)
    except ConfigError as exc:
        print(f"ConfigError: {exc}", file=sys.stderr)
        return 2
    except (DecolabError, OverflowError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
