"""Classical Langevin ensemble vs the quantum master equation.

Same velocity-coupled model, same parameters: the classical trajectories
(Stratonovich reading, Heun steps) relax to equipartition |a|^2 = theta,
while the quantum mean photon number settles slightly lower and gets
there faster.

Run: python demos/classical_vs_quantum.py
"""

import numpy as np
import matplotlib.pyplot as plt

import decolab as dl
from decolab.langevin_sde import SdeParams, run_ensemble, theta_for_occupation
from decolab.lindblad_qed import build_two_photon, evolve, stable_dt

ALPHA, GAMMA, NBAR = 4.0, 0.003, 3.0
T_MAX = 150.0

theta = theta_for_occupation(NBAR)
sde = SdeParams(gamma=GAMMA, theta=theta, dt=5e-4, n_traj=2000, seed=7, scheme="heun")
ens = run_ensemble(ALPHA, sde, "rwa", t_max=T_MAX, snap_stride=1.0)
print(f"classical |a|^2: {ens.mean_abs2[0]:.2f} -> {ens.mean_abs2[-1]:.2f} (theta = {theta:.2f})")

space = dl.FockSpace(55)
vec = dl.coherent_state(ALPHA, space)
rho0 = dl.DensityMatrix(space, np.outer(vec, vec.conj()))
L = build_two_photon(space, dl.QedParams(gamma=GAMMA, nbar=NBAR, omega=0.0))
snaps = [5.0 * k for k in range(int(T_MAX / 5) + 1)]
res = evolve(rho0, L, T_MAX, dt=stable_dt(L, base=5.0), snapshot_times=snaps,
             check_eigenvalues=False)
n_diag = np.arange(space.dim)
qn = [float(np.sum(n_diag * s.matrix.diagonal().real)) for s in res.states]
print(f"quantum <n>: {qn[0]:.2f} -> {qn[-1]:.2f}")

plt.figure(figsize=(6, 4))
plt.errorbar(ens.times[::4], ens.mean_abs2[::4], yerr=ens.stderr_abs2[::4],
             fmt=".", label="classical |a|^2 (2000 trajectories)")
plt.plot(snaps, qn, "k-", label="quantum <n>")
plt.axhline(theta, ls=":", c="gray", label="equipartition theta")
plt.xlabel("tau")
plt.ylabel("mean energy quanta")
plt.legend()
plt.tight_layout()
plt.savefig("classical_vs_quantum.png", dpi=150)
print("wrote classical_vs_quantum.png")
