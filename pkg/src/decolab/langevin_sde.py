"""Classical stochastic dynamics of the velocity-coupled model.

The rotating-wave Langevin equation is integrated as an Ito SDE with a
single real Wiener increment multiplying the conjugate amplitude,
exactly as the nonlinear equations are written:

    da = -i w a dt - g |a|^2 a dt - sqrt(2 g theta) a* dW,

with theta = k_B T / (hbar Omega).  The non-RWA variant keeps the
memory-like drift (i g / 2w) d/dt(a*^2 - a^2) a*, where the time
derivative is replaced either by its free-evolution value (`substitute`,
giving drift -g(a*^3 + a^2 a*)) or by a one-step finite difference
(`lag1`).  Trajectory k draws from a counter-based Philox stream keyed
by (seed, k), so ensembles are reproducible regardless of batching.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, StepError

try:  # compiled stepping kernel; the numpy path below is the reference
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

BLOWUP_LIMIT = 1.0e6


@dataclass(frozen=True)
class SdeParams:
    """Damping g = gamma/Omega, temperature theta = k_B T/(hbar Omega), step, ensemble size."""

    gamma: float
    theta: float
    dt: float
    n_traj: int = 1
    seed: int = 0
    omega: float = 1.0
    scheme: str = "euler"  # "euler" (Ito) or "heun" (Stratonovich)
    nonrwa_mode: str = "substitute"  # or "lag1"

    def __post_init__(self):
        if self.gamma < 0:
            raise DomainError("gamma must be nonnegative")
        if self.theta < 0:
            raise DomainError("theta must be nonnegative")
        if self.dt <= 0:
            raise DomainError("dt must be positive")
        if self.n_traj < 1:
            raise DomainError("n_traj must be at least 1")
        if self.scheme not in ("euler", "heun"):
            raise DomainError(f"unknown scheme {self.scheme!r}")
        if self.nonrwa_mode not in ("substitute", "lag1"):
            raise DomainError(f"unknown nonrwa_mode {self.nonrwa_mode!r}")


def theta_for_occupation(nbar: float) -> float:
    """Temperature matching a quantum run: theta = 2 / ln(1 + 1/nbar)."""
    if nbar <= 0:
        raise DomainError("nbar must be positive")
    return 2.0 / math.log1p(1.0 / nbar)


def _noise_amplitude(params: SdeParams) -> float:
    return math.sqrt(2.0 * params.gamma * params.theta)


def _drift_rwa(a, params: SdeParams):
    return (-1j * params.omega - params.gamma * (a.real**2 + a.imag**2)) * a


def _drift_nonrwa_substitute(a, params: SdeParams):
    ac = np.conj(a)
    return -1j * params.omega * a - params.gamma * (ac * ac * ac + a * a * ac)


def step_rwa(a: complex, dt: float, dW: float, params: SdeParams) -> complex:
    """One Euler-Maruyama update of the RWA equation."""
    if abs(a) > BLOWUP_LIMIT:
        raise OverflowError(f"|a| = {abs(a):.3e} exceeds blow-up guard")
    return a + _drift_rwa(a, params) * dt - _noise_amplitude(params) * np.conj(a) * dW


def step_nonrwa(
    a: complex,
    a_prev: complex,
    dt: float,
    dW: float,
    params: SdeParams,
    mode: str | None = None,
) -> complex:
    """One Euler-Maruyama update keeping the counter-rotating drift.

    mode "substitute" closes d/dt(a*^2 - a^2) with its free-evolution
    value 2 i w (a*^2 + a^2); "lag1" uses the finite difference against
    the previous amplitude a_prev.
    """
    if abs(a) > BLOWUP_LIMIT:
        raise OverflowError(f"|a| = {abs(a):.3e} exceeds blow-up guard")
    mode = mode or params.nonrwa_mode
    if mode == "substitute":
        drift = _drift_nonrwa_substitute(a, params)
        increment = drift * dt
    elif mode == "lag1":
        m_now = np.conj(a) ** 2 - a * a
        m_prev = np.conj(a_prev) ** 2 - a_prev * a_prev
        memory = (0.5j * params.gamma / params.omega) * (m_now - m_prev) * np.conj(a)
        increment = -1j * params.omega * a * dt + memory
    else:
        raise DomainError(f"unknown nonrwa mode {mode!r}")
    return a + increment - _noise_amplitude(params) * np.conj(a) * dW


@dataclass
class TrajectoryEnsemble:
    """Across-trajectory statistics on a uniform snapshot grid."""

    times: np.ndarray
    mean_a: np.ndarray
    mean_abs2: np.ndarray
    stderr_a: np.ndarray
    stderr_abs2: np.ndarray
    n_traj: int
    n_discarded: int = 0


def trajectory_rng(seed: int, k: int) -> np.random.Generator:
    """Independent stream for trajectory k, split statelessly from (seed, k)."""
    return np.random.Generator(np.random.Philox(key=np.array([seed, k], dtype=np.uint64)))


def _steps_numpy(a, m_prev, dw, dt, gamma, omega, amp, variant_code, heun):
    # variant_code: 0 rwa, 1 nonrwa substitute, 2 nonrwa lag1
    for j in range(dw.shape[0]):
        dwj = dw[j]
        if variant_code == 2:
            m_now = np.conj(a) ** 2 - a * a
            memory = (0.5j * gamma / omega) * (m_now - m_prev) * np.conj(a)
            a = a + (-1j * omega * a) * dt + memory - amp * np.conj(a) * dwj
            m_prev = m_now
            continue
        if variant_code == 0:
            f0 = (-1j * omega - gamma * (a.real**2 + a.imag**2)) * a
        else:
            ac = np.conj(a)
            f0 = -1j * omega * a - gamma * (ac * ac * ac + a * a * ac)
        g0 = -amp * np.conj(a)
        if heun:
            pred = a + f0 * dt + g0 * dwj
            if variant_code == 0:
                f1 = (-1j * omega - gamma * (pred.real**2 + pred.imag**2)) * pred
            else:
                pc = np.conj(pred)
                f1 = -1j * omega * pred - gamma * (pc * pc * pc + pred * pred * pc)
            a = a + 0.5 * (f0 + f1) * dt + 0.5 * (g0 - amp * np.conj(pred)) * dwj
        else:
            a = a + f0 * dt + g0 * dwj
    return a, m_prev


if HAVE_NUMBA:

    @njit(cache=True)
    def _steps_jit(a, m_prev, dw, dt, gamma, omega, amp, variant_code, heun):  # pragma: no cover
        steps, n = dw.shape
        for j in range(steps):
            for k in range(n):
                ak = a[k]
                dwk = dw[j, k]
                if variant_code == 2:
                    akc = np.conj(ak)
                    m_now = akc * akc - ak * ak
                    memory = (0.5j * gamma / omega) * (m_now - m_prev[k]) * akc
                    a[k] = ak + (-1j * omega * ak) * dt + memory - amp * akc * dwk
                    m_prev[k] = m_now
                    continue
                if variant_code == 0:
                    f0 = (-1j * omega - gamma * (ak.real * ak.real + ak.imag * ak.imag)) * ak
                else:
                    akc = np.conj(ak)
                    f0 = -1j * omega * ak - gamma * (akc * akc * akc + ak * ak * akc)
                g0 = -amp * np.conj(ak)
                if heun:
                    pred = ak + f0 * dt + g0 * dwk
                    if variant_code == 0:
                        f1 = (
                            -1j * omega - gamma * (pred.real * pred.real + pred.imag * pred.imag)
                        ) * pred
                    else:
                        pc = np.conj(pred)
                        f1 = -1j * omega * pred - gamma * (pc * pc * pc + pred * pred * pc)
                    a[k] = ak + 0.5 * (f0 + f1) * dt + 0.5 * (g0 - amp * np.conj(pred)) * dwk
                else:
                    a[k] = ak + f0 * dt + g0 * dwk
        return a, m_prev


def run_ensemble(
    alpha0: complex,
    params: SdeParams,
    variant: str = "rwa",
    t_max: float = 200.0,
    snap_stride: float = 0.25,
) -> TrajectoryEnsemble:
    """Integrate n_traj trajectories and reduce them in fixed order.

    Trajectories whose amplitude crosses the blow-up guard are dropped
    from the statistics (checked at snapshot times) and counted in
    n_discarded; healthy parameter regimes must report zero.
    """
    if variant not in ("rwa", "nonrwa"):
        raise DomainError(f"unknown variant {variant!r}")
    dt = params.dt
    n_steps = round(t_max / dt)
    if abs(t_max - n_steps * dt) > 1e-9:
        raise StepError(f"t_max {t_max} is not a multiple of dt = {dt}")
    snap_every = round(snap_stride / dt)
    if abs(snap_stride - snap_every * dt) > 1e-9 or snap_every < 1:
        raise StepError(f"snap_stride {snap_stride} is not a multiple of dt = {dt}")

    n_traj = params.n_traj
    amp = _noise_amplitude(params)
    use_noise = amp > 0.0
    heun = params.scheme == "heun"
    if variant == "rwa":
        variant_code = 0
    elif params.nonrwa_mode == "substitute":
        variant_code = 1
    else:
        variant_code = 2
    if variant_code == 2 and heun:
        raise DomainError("heun scheme is not defined for the lag1 memory closure")

    a = np.full(n_traj, complex(alpha0), dtype=complex)
    m_prev = np.conj(a) ** 2 - a * a  # lag1 memory term; zero difference at step 0
    alive = np.ones(n_traj, dtype=bool)

    n_snaps = n_steps // snap_every + 1
    times = np.arange(n_snaps) * snap_stride
    mean_a = np.empty(n_snaps, dtype=complex)
    mean_abs2 = np.empty(n_snaps)
    stderr_a = np.empty(n_snaps)
    stderr_abs2 = np.empty(n_snaps)

    gens = [trajectory_rng(params.seed, k) for k in range(n_traj)] if use_noise else None
    sqrt_dt = math.sqrt(dt)
    stepper = _steps_jit if HAVE_NUMBA else _steps_numpy

    def reduce_into(i):
        sel = a[alive]
        n = sel.size
        ma = sel.mean() if n else 0.0 + 0.0j
        abs2 = sel.real**2 + sel.imag**2
        mb = abs2.mean() if n else 0.0
        mean_a[i] = ma
        mean_abs2[i] = mb
        if n > 1:
            var_a = np.abs(sel - ma) ** 2
            stderr_a[i] = math.sqrt(var_a.sum() / (n - 1) / n)
            stderr_abs2[i] = math.sqrt(((abs2 - mb) ** 2).sum() / (n - 1) / n)
        else:
            stderr_a[i] = 0.0
            stderr_abs2[i] = 0.0

    reduce_into(0)
    sub = max(1, min(snap_every, 16_000_000 // n_traj))
    for snap_i in range(1, n_snaps):
        done = 0
        while done < snap_every:
            m = min(sub, snap_every - done)
            if use_noise:
                block = np.empty((n_traj, m))
                for k, g in enumerate(gens):
                    block[k] = g.standard_normal(m)
                dw = np.ascontiguousarray(block.T) * sqrt_dt
            else:
                dw = np.zeros((m, n_traj))
            a, m_prev = stepper(
                a, m_prev, dw, dt, params.gamma, params.omega, amp, variant_code, heun
            )
            done += m
        mag = np.abs(a)
        bad = alive & ~(mag <= BLOWUP_LIMIT)  # catches NaN too
        if bad.any():
            alive &= ~bad
            a = np.where(alive, a, 0.0)  # freeze; excluded from stats
        reduce_into(snap_i)

    return TrajectoryEnsemble(
        times=times,
        mean_a=mean_a,
        mean_abs2=mean_abs2,
        stderr_a=stderr_a,
        stderr_abs2=stderr_abs2,
        n_traj=n_traj,
        n_discarded=int(n_traj - alive.sum()),
    )
