"""Built-in scenario presets mirroring the reference figure parameter sets."""

from __future__ import annotations

import math

PI = math.pi
OVERLAP = [PI * (k + 0.5) for k in range(5)]  # wavepacket-overlap instants


def _gravity_wigner(name, alpha2, times, grid_points, grid_range):
    return {
        "name": name,
        "model": "gravity",
        "alpha1": 3.0,
        "alpha2": alpha2,
        "coupling_over_pi": 0.001,
        "cutoff": 1.0e3,
        "beta": 1.0,
        "observables": ["wigner"],
        "times": times,
        "grid_points": grid_points,
        "grid_range": grid_range,
    }


def _fig3(name, alpha2, coupling, beta):
    return {
        "name": name,
        "model": "gravity",
        "alpha1": 3.0,
        "alpha2": alpha2,
        "coupling_over_pi": coupling,
        "cutoff": 1.0e3,
        "beta": beta,
        "observables": ["visibility"],
        "times": list(OVERLAP),
    }


def _fig8(name, qinv):
    return {
        "name": name,
        "model": "qed_lindblad",
        "alpha1": 3.0,
        "alpha2": -3.0,
        "gamma": qinv,
        "nbar": 5.0,
        "rotating_frame": True,
        "observables": ["visibility"],
        "times": [PI * (k + 0.5) for k in range(21)],
    }


BUILTINS: dict[str, list[dict]] = {
    "fig1": [
        _gravity_wigner("fig1_a3_m3", -3.0, [PI / 2, 4.5 * PI, math.inf], 421, 9.0),
        _gravity_wigner("fig1_a3_m5", -5.0, [PI / 2, 4.5 * PI, math.inf], 541, 11.5),
    ],
    "fig2": [
        _gravity_wigner("fig2_zoom_a3_m3", -3.0, [math.inf], 321, 6.0),
        _gravity_wigner("fig2_zoom_a3_m5", -5.0, [math.inf], 321, 8.0),
    ],
    "fig3a": [
        _fig3("fig3a_beta1", -5.0, 1e-4, 1.0),
        _fig3("fig3a_beta1o3", -5.0, 1e-4, 1.0 / 3.0),
        _fig3("fig3a_beta1o5", -5.0, 1e-4, 1.0 / 5.0),
    ],
    "fig3b": [
        _fig3("fig3b_c1em4", -5.0, 1e-4, 1.0),
        _fig3("fig3b_c3em4", -5.0, 3e-4, 1.0),
        _fig3("fig3b_c5em4", -5.0, 5e-4, 1.0),
    ],
    "fig3c": [
        _fig3("fig3c_a3", -3.0, 1e-4, 1.0),
        _fig3("fig3c_a4", -4.0, 1e-4, 1.0),
        _fig3("fig3c_a5", -5.0, 1e-4, 1.0),
    ],
    "fig4": [
        {
            "name": "fig4_rwa",
            "model": "qed_sde",
            "alpha": 4.0,
            "gamma": 0.003,
            "nbar": 3.0,
            "variant": "rwa",
            "scheme": "heun",
            "n_traj": 3000,
            "dt": 5e-4,
            "observables": ["moments"],
            "t_max": 200.0,
            "stride": 0.25,
        },
        {
            "name": "fig4_nonrwa",
            "model": "qed_sde",
            "alpha": 4.0,
            "gamma": 0.003,
            "nbar": 3.0,
            "variant": "nonrwa",
            "scheme": "heun",
            "n_traj": 3000,
            "dt": 5e-4,
            "observables": ["moments"],
            "t_max": 200.0,
            "stride": 0.25,
        },
        {
            "name": "fig4_quantum",
            "model": "qed_lindblad",
            "alpha": 4.0,
            "gamma": 0.003,
            "nbar": 3.0,
            "rotating_frame": True,
            "observables": ["moments"],
            "t_max": 200.0,
            "stride": 0.25,
        },
    ],
    "fig5a": [
        {
            "name": "fig5a_classical",
            "model": "qed_sde",
            "alpha": 4.0,
            "gamma": 0.003,
            "nbar": 3.0,
            "variant": "rwa",
            "scheme": "heun",
            "n_traj": 5000,
            "dt": 5e-4,
            "observables": ["moments"],
            "t_max": 200.0,
            "stride": 0.5,
        },
        {
            "name": "fig5a_quantum",
            "model": "qed_lindblad",
            "alpha": 4.0,
            "gamma": 0.003,
            "nbar": 3.0,
            "rotating_frame": True,
            "observables": ["moments"],
            "t_max": 200.0,
            "stride": 0.5,
        },
    ],
    "fig6": [
        {
            "name": "fig6_n3",
            "model": "qed_lindblad",
            "alpha1": 3.0,
            "alpha2": -3.0,
            "gamma": 0.001,
            "nbar": 3.0,
            "observables": ["wigner"],
            "times": [0.0, 1.5 * PI, 4.5 * PI],
            "grid_points": 421,
            "grid_range": 11.0,
        },
        {
            "name": "fig6_n5",
            "model": "qed_lindblad",
            "alpha1": 3.0,
            "alpha2": -3.0,
            "gamma": 0.001,
            "nbar": 5.0,
            "observables": ["wigner"],
            "times": [0.0, 1.5 * PI, 4.5 * PI],
            "grid_points": 421,
            "grid_range": 11.0,
        },
    ],
    "fig7": [
        {
            "name": "fig7",
            "model": "qed_lindblad",
            "alpha1": 5.0,
            "alpha2": -5.0,
            "gamma": 5e-4,
            "nbar": 3.0,
            "rotating_frame": True,
            "observables": ["pdensity"],
            "times": [PI * (k + 0.5) for k in (0, 6, 42, 190)],
        },
    ],
    "fig8": [
        _fig8("fig8_q1em3", 0.001),
        _fig8("fig8_q3em3", 0.003),
        _fig8("fig8_q5em3", 0.005),
    ],
}

DESCRIPTIONS = {
    "fig1": "dephasing Wigner snapshots: alpha1=3, alpha2=-3 and -5; beta=1, cutoff=1000, C/pi=0.001; tau=pi/2, 9pi/2, inf",
    "fig2": "zoomed steady-state Wigner: alpha1=3, alpha2=-3 and -5; beta=1, cutoff=1000, C/pi=0.001",
    "fig3a": "dephasing visibility vs tau: alpha1=3, alpha2=-5, C/pi=0.0001, beta=1, 1/3, 1/5",
    "fig3b": "dephasing visibility vs tau: alpha1=3, alpha2=-5, beta=1, C/pi=0.0001, 0.0003, 0.0005",
    "fig3c": "dephasing visibility vs tau: alpha1=3, alpha2=-3, -4, -5, C/pi=0.0001, beta=1",
    "fig4": "mean amplitude Re<a> vs tau: alpha=4, Qinv=0.003, n=3; classical rwa + nonrwa (3000 trajectories) and master equation",
    "fig5a": "mean number vs tau: alpha=4, Qinv=0.003, n=3; classical |a|^2 (5000 trajectories) + quantum <n>",
    "fig6": "two-photon Wigner snapshots: cat alpha=3, n=3 and n=5, Qinv=0.001; tau=0, 3pi/2, 9pi/2",
    "fig7": "two-photon interference snapshots P(x): Qinv=0.0005, alpha=5, n=3; tau=(k+1/2)pi for k=0, 6, 42, 190",
    "fig8": "two-photon visibility vs tau: alpha=3, n=5, Qinv=0.001, 0.003, 0.005",
}


def list_scenarios() -> str:
    lines = ["built-in scenarios:"]
    for name in sorted(BUILTINS):
        lines.append(f"  {name:7s} {DESCRIPTIONS[name]}")
    return "\n".join(lines)
