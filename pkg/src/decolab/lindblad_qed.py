"""Markovian quantum dynamics of the velocity-coupled (QED-type) model.

The weak-coupling, rotating-wave endpoint is an oscillator whose energy
leaves in photon pairs:

    drho/dt = i w [rho, n] + g(nb+1) D[a^2] rho + g nb D[a^dag^2] rho,

with D[L]rho = L rho L^dag - (L^dag L rho + rho L^dag L)/2, damping
g = gamma/Omega = 1/Q and thermal occupation nb evaluated at twice the
oscillator frequency.  A single-photon (quantum Brownian) generator
with jumps a, a^dag is provided for contrast.  Time evolution is a
fixed-step classical RK4 on the stacked density matrix.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DomainError, StabilityError, StepError
from .fock_core import DensityMatrix, FockSpace, annihilation

DEFAULT_DT = 2.0e-3 * math.pi  # makes quarter-period snapshot times exact multiples
TRACE_DRIFT_LIMIT = 1e-6
NORM_SAFETY = 0.5


@dataclass(frozen=True)
class QedParams:
    """Damping gamma/Omega (= 1/Q), occupation n(2 Omega), rotation rate.

    omega = 1 in our units; omega = 0 selects the interaction picture
    (the free rotation can be reattached exactly with `free_rotation`).
    """

    gamma: float
    nbar: float = 0.0
    omega: float = 1.0

    def __post_init__(self):
        if self.gamma < 0:
            raise DomainError("gamma must be nonnegative")
        if self.nbar < 0:
            raise DomainError("nbar must be nonnegative")
        if self.gamma > 0.05:
            warnings.warn(
                f"gamma = {self.gamma} is large for the weak-coupling/RWA regime",
                stacklevel=2,
            )


def _single_diagonal(m: np.ndarray):
    """Return (offset, values) when m has a single nonzero diagonal."""
    dim = m.shape[0]
    hits = []
    for k in range(-dim + 1, dim):
        if np.any(np.diagonal(m, k) != 0):
            hits.append(k)
        if len(hits) > 1:
            return None
    if len(hits) != 1:
        return None
    k = hits[0]
    return k, np.diagonal(m, k).copy()


class Liouvillian:
    """Generator of a Lindblad master equation on a truncated Fock space.

    Holds the Hamiltonian diagonal (all Hamiltonians here commute with
    the number operator) and the jump operators with their rates.  The
    dense dim^2 x dim^2 superoperator acting on column-stacked density
    matrices is materialized on first access; `apply` uses the factored
    form, exploiting single-diagonal jumps, so stepping costs O(dim^2).
    """

    def __init__(self, space: FockSpace, h_diag: np.ndarray, jumps):
        self.space = space
        self.h_diag = np.asarray(h_diag, dtype=float)
        self.jumps = [(float(rate), np.asarray(op, dtype=complex)) for rate, op in jumps]
        n = self.h_diag
        self._phase = -1j * (n[:, None] - n[None, :])
        self._fast = []
        for rate, op in self.jumps:
            ldl = op.conj().T @ op
            ldl_diag = ldl.diagonal().real
            decay = -0.5 * (ldl_diag[:, None] + ldl_diag[None, :])
            self._fast.append((rate, _single_diagonal(op), op, decay))

    def apply(self, rho: np.ndarray) -> np.ndarray:
        out = self._phase * rho
        for rate, diag_form, op, decay in self._fast:
            out += rate * (decay * rho)
            if diag_form is not None:
                k, v = diag_form
                dim = rho.shape[0]
                sandwich = np.zeros_like(rho)
                if k >= 0:
                    # op[i, i+k] = v[i]:  (L rho L+)[i, j] = v_i v_j* rho[i+k, j+k]
                    m = dim - k
                    sandwich[:m, :m] = (
                        v[:, None] * rho[k:, k:] * v[None, :].conj()
                    )
                else:
                    kk = -k
                    m = dim - kk
                    sandwich[kk:, kk:] = (
                        v[:, None] * rho[:m, :m] * v[None, :].conj()
                    )
                out += rate * sandwich
            else:
                out += rate * (op @ rho @ op.conj().T)
        return out

    def one_norm_bound(self) -> float:
        """Superoperator 1-norm, computed from the factored structure.

        Exact when every jump has a single nonzero diagonal (each basis
        matrix E_ab then maps to one diagonal entry plus one shifted
        entry per jump, so column sums are available in closed form);
        otherwise a kron-norm upper bound.
        """
        n = self.h_diag
        if all(diag_form is not None for _, diag_form, _, _ in self._fast):
            dim = n.size
            cols = np.abs(
                -1j * (n[:, None] - n[None, :])
                + sum(rate * decay for rate, _, _, decay in self._fast)
            )
            for rate, (k, v), _, _ in self._fast:
                av = np.zeros(dim)
                if k >= 0:
                    av[k:] = np.abs(v)
                else:
                    av[: dim + k] = np.abs(v)
                cols = cols + rate * (av[:, None] * av[None, :])
            return float(cols.max())
        bound = float(np.max(np.abs(n - n[:, None])))
        for rate, op in self.jumps:
            col = np.abs(op).sum(axis=0).max()
            ldl = np.abs(op.conj().T @ op).sum(axis=0).max()
            bound += rate * (col * col + ldl)
        return bound

    @cached_property
    def superoperator(self) -> np.ndarray:
        """Dense matrix acting on column-stacked rho (vec(A rho B) = (B^T (x) A) vec rho)."""
        dim = self.space.dim
        eye = np.eye(dim)
        h = np.diag(self.h_diag).astype(complex)
        sup = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
        for rate, op in self.jumps:
            ldl = op.conj().T @ op
            sup += rate * (
                np.kron(op.conj(), op)
                - 0.5 * np.kron(eye, ldl)
                - 0.5 * np.kron(ldl.T, eye)
            )
        return sup


def build_two_photon(space: FockSpace, params: QedParams) -> Liouvillian:
    """Two-photon damping: jumps a^2 (emission) and a^dag^2 (absorption)."""
    a = annihilation(space).matrix
    a2 = a @ a
    return Liouvillian(
        space,
        params.omega * np.arange(space.dim),
        [(params.gamma * (params.nbar + 1.0), a2), (params.gamma * params.nbar, a2.conj().T)],
    )


def build_single_photon(space: FockSpace, params: QedParams) -> Liouvillian:
    """Quantum Brownian comparison model: jumps a and a^dag."""
    a = annihilation(space).matrix
    return Liouvillian(
        space,
        params.omega * np.arange(space.dim),
        [(params.gamma * (params.nbar + 1.0), a), (params.gamma * params.nbar, a.conj().T)],
    )


@dataclass
class EvolutionResult:
    """Snapshots of an RK4 integration plus integrity diagnostics."""

    times: np.ndarray
    states: list
    dt: float
    trace_drift: float
    herm_drift: float
    min_eigenvalue: float


def evolve(
    rho0: DensityMatrix,
    liouvillian: Liouvillian,
    t_final: float,
    dt: float = DEFAULT_DT,
    snapshot_times=None,
    check_eigenvalues: bool = True,
) -> EvolutionResult:
    """Fixed-step classical RK4 on the stacked density matrix.

    Snapshot times (default: t_final only) must be integer multiples of
    dt within 1e-9.  Snapshots are re-symmetrized; the Hermiticity
    deviation removed that way, the trace drift, and the minimum
    eigenvalue are reported, never corrected.  Raises StabilityError if
    the trace drifts by more than 1e-6.
    """
    if dt <= 0:
        raise DomainError("dt must be positive")
    bound = liouvillian.one_norm_bound()
    if dt * bound >= NORM_SAFETY:
        raise DomainError(
            f"dt * ||L||_1 = {dt * bound:.3f} >= {NORM_SAFETY}; reduce dt below "
            f"{NORM_SAFETY / bound:.2e}"
        )
    if snapshot_times is None:
        snapshot_times = [t_final]
    snap_steps = []
    for t in snapshot_times:
        if t < 0 or t > t_final + 1e-9:
            raise StepError(f"snapshot time {t} outside [0, {t_final}]")
        k = round(t / dt)
        if abs(t - k * dt) > 1e-9:
            raise StepError(f"snapshot time {t} is not a multiple of dt = {dt}")
        snap_steps.append(k)
    order = np.argsort(snap_steps)
    want = {}
    for i in order:
        want.setdefault(snap_steps[i], []).append(i)
    n_steps = round(t_final / dt)
    if abs(t_final - n_steps * dt) > 1e-9:
        raise StepError(f"t_final {t_final} is not a multiple of dt = {dt}")

    rho = rho0.matrix.astype(complex).copy()
    space = rho0.space
    states = [None] * len(snap_steps)
    times = np.asarray(snapshot_times, dtype=float)
    trace_drift = 0.0
    herm_drift = 0.0
    min_eig = np.inf

    def record(step, mat):
        nonlocal trace_drift, herm_drift, min_eig
        if step not in want:
            return
        herm = np.max(np.abs(mat - mat.conj().T))
        sym = 0.5 * (mat + mat.conj().T)
        drift = abs(sym.trace().real - 1.0)
        if drift > TRACE_DRIFT_LIMIT:
            raise StabilityError(
                f"trace drift {drift:.3e} at t = {step * dt:.6g} exceeds {TRACE_DRIFT_LIMIT}"
            )
        herm_drift = max(herm_drift, herm)
        trace_drift = max(trace_drift, drift)
        if check_eigenvalues:
            lo = float(np.linalg.eigvalsh(sym).min())
            min_eig = min(min_eig, lo)
        snap = DensityMatrix(space, sym, validate=False)
        for i in want[step]:
            states[i] = snap

    record(0, rho)
    apply = liouvillian.apply
    for step in range(1, n_steps + 1):
        k1 = apply(rho)
        k2 = apply(rho + (0.5 * dt) * k1)
        k3 = apply(rho + (0.5 * dt) * k2)
        k4 = apply(rho + dt * k3)
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        record(step, rho)

    return EvolutionResult(
        times=times,
        states=states,
        dt=dt,
        trace_drift=trace_drift,
        herm_drift=herm_drift,
        min_eigenvalue=float(min_eig),
    )


def stable_dt(liouvillian: Liouvillian, base: float, dt_start: float = DEFAULT_DT) -> float:
    """Largest dt = base/m (integer m) satisfying the step-size bound.

    `base` should be the coarsest time unit all snapshot times are
    integer multiples of, so snapshots land exactly on steps.
    """
    limit = min(dt_start, NORM_SAFETY / liouvillian.one_norm_bound() * 0.9)
    m = max(1, math.ceil(base / limit))
    return base / m


def free_rotation(rho: DensityMatrix, tau: float, omega: float = 1.0) -> DensityMatrix:
    """Exact free evolution exp(-i w n tau) rho exp(+i w n tau)."""
    n = np.arange(rho.space.dim)
    phases = np.exp(-1j * omega * tau * (n[:, None] - n[None, :]))
    return DensityMatrix(rho.space, rho.matrix * phases, validate=False)


# --- moments -----------------------------------------------------------------


def moment_series(result: EvolutionResult):
    """<a>, <n>, <a^dag a^2> for every snapshot, as arrays."""
    space = result.states[0].space
    a = annihilation(space).matrix
    n_diag = np.arange(space.dim, dtype=float)
    ada2 = a.conj().T @ a @ a
    mean_a = np.empty(len(result.states), dtype=complex)
    mean_n = np.empty(len(result.states))
    mean_ada2 = np.empty(len(result.states), dtype=complex)
    for i, state in enumerate(result.states):
        m = state.matrix
        mean_a[i] = np.trace(a @ m)
        mean_n[i] = float(np.sum(n_diag * m.diagonal().real))
        mean_ada2[i] = np.trace(ada2 @ m)
    return {"times": result.times, "a": mean_a, "n": mean_n, "ada2": mean_ada2}


def moment_residual(result: EvolutionResult, params: QedParams) -> float:
    """Defect of d<a>/dt = -i w <a> - g <a^dag a^2> + 2 g nb <a>.

    Centered differences of the uniformly sampled snapshot series
    against the analytic right-hand side; returns the max over interior
    samples, so it shrinks as dt^2 for a converged integration.
    """
    t = result.times
    if len(t) < 3:
        raise DomainError("need at least 3 uniformly spaced snapshots")
    steps = np.diff(t)
    if not np.allclose(steps, steps[0], rtol=0, atol=1e-9):
        raise DomainError("snapshot series is not uniformly sampled")
    m = moment_series(result)
    dt = steps[0]
    lhs = (m["a"][2:] - m["a"][:-2]) / (2.0 * dt)
    mid_a = m["a"][1:-1]
    rhs = (
        -1j * params.omega * mid_a
        - params.gamma * m["ada2"][1:-1]
        + 2.0 * params.gamma * params.nbar * mid_a
    )
    return float(np.max(np.abs(lhs - rhs)))
