"""Exact dephasing of a coherent-state superposition.

The energy-coupled bath freezes the Fock populations and multiplies each
off-diagonal entry by a known decay factor, so a cat state spreads into
a crescent and finally a ring while interference fringes at the origin
fade. Writes Wigner snapshots and the visibility curve to PNG.

Run: python demos/dephasing_cat.py
"""

import math

import matplotlib.pyplot as plt
import numpy as np

import decolab as dl

ALPHA1, ALPHA2 = 3.0, -5.0
PARAMS = dl.GravityBathParams(coupling_over_pi=0.001, cutoff=1e3, beta=1.0)

space = dl.FockSpace(dl.default_dim(5.0))
rho0 = dl.cat_density(ALPHA1, ALPHA2, space)
grid = dl.PhaseSpaceGrid.square(11.5, 301)

fig, axes = plt.subplots(1, 3, figsize=(12, 4), constrained_layout=True)
for ax, tau in zip(axes, (0.5 * math.pi, 4.5 * math.pi, math.inf)):
    state = dl.steady_state(rho0) if math.isinf(tau) else dl.evolve_density(rho0, tau, PARAMS)
    field = dl.wigner(state, grid)
    lim = np.abs(field.values).max()
    ax.pcolormesh(grid.xs(), grid.ps(), field.values.T, cmap="RdBu_r", vmin=-lim, vmax=lim)
    label = "inf" if math.isinf(tau) else f"{tau / math.pi:.1f} pi"
    ax.set_title(f"tau = {label}")
    ax.set_xlabel("x")
    ax.set_ylabel("p")
    ax.set_aspect("equal")
fig.suptitle(f"Dephasing Wigner snapshots, alpha = ({ALPHA1:g}, {ALPHA2:g})")
fig.savefig("dephasing_wigner.png", dpi=150)
print("wrote dephasing_wigner.png")

# visibility at the wavepacket-overlap instants, three temperatures
spacing = 2 * math.pi / (math.sqrt(2) * abs(ALPHA1 - ALPHA2))
half = math.sqrt(2) * 5 + 4
xs = np.linspace(-half, half, 2 * math.ceil(half / (spacing / 16)) + 1)
taus = [math.pi * (k + 0.5) for k in range(8)]

plt.figure(figsize=(6, 4))
for beta in (1.0, 1 / 3, 1 / 5):
    p = dl.GravityBathParams(coupling_over_pi=1e-4, cutoff=1e3, beta=beta)
    nus = []
    for tau in taus:
        dens = dl.position_density(dl.evolve_density(rho0, tau, p), xs)
        nus.append(dl.visibility(dens, expected_spacing=spacing))
    plt.plot(taus, nus, "o-", label=f"beta = {beta:.2f}")
plt.xlabel("tau")
plt.ylabel("fringe visibility")
plt.ylim(0, 1)
plt.legend()
plt.tight_layout()
plt.savefig("dephasing_visibility.png", dpi=150)
print("wrote dephasing_visibility.png")
