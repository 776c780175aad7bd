"""Truncated Fock-space algebra: ladder operators, states, density matrices.

Everything is expressed in dimensionless oscillator units (hbar = 1, the
system frequency set to 1), so position means x*sqrt(M*Omega/hbar) and
momentum means p/sqrt(M*Omega*hbar).  All matrices are dense complex
numpy arrays of shape (dim, dim) for a chosen cutoff `dim`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, TruncationError

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-10
EIGENVALUE_SLACK = 1e-8


@dataclass(frozen=True)
class FockSpace:
    """Number-state basis |0>, ..., |dim-1| of a single oscillator mode."""

    dim: int

    def __post_init__(self):
        if self.dim < 2:
            raise DomainError(f"Fock space needs dim >= 2, got {self.dim}")


def default_dim(alpha_max: float) -> int:
    """Cutoff heuristic: Poisson mean + 6 sigma-ish + slack.

    ceil(|a|^2 + 6|a| + 10) keeps the coherent-state tail below ~1e-10
    for all amplitudes used here (e.g. alpha = 5 -> dim = 65).
    """
    a = abs(alpha_max)
    return math.ceil(a * a + 6.0 * a + 10.0)


@dataclass(frozen=True)
class Operator:
    """Dense operator on a truncated Fock space."""

    space: FockSpace
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (self.space.dim, self.space.dim):
            raise DomainError(
                f"operator shape {m.shape} does not match dim {self.space.dim}"
            )
        object.__setattr__(self, "matrix", m)

    def dagger(self) -> "Operator":
        return Operator(self.space, self.matrix.conj().T)

    def __matmul__(self, other: "Operator") -> "Operator":
        return Operator(self.space, self.matrix @ other.matrix)


@dataclass
class DensityMatrix:
    """Hermitian, unit-trace state in the Fock basis.

    Construction validates Hermiticity (1e-12), trace (1e-10) and
    positivity up to a small truncation slack (eigenvalues >= -1e-8).
    Pass validate=False for internally generated matrices whose
    diagnostics are tracked separately (e.g. integrator snapshots).
    """

    space: FockSpace
    matrix: np.ndarray
    validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (self.space.dim, self.space.dim):
            raise DomainError(
                f"density matrix shape {m.shape} does not match dim {self.space.dim}"
            )
        self.matrix = m
        if self.validate:
            herm = np.max(np.abs(m - m.conj().T))
            if herm > HERMITICITY_TOL:
                raise DomainError(f"not Hermitian: max deviation {herm:.3e}")
            tr = m.trace()
            if abs(tr - 1.0) > TRACE_TOL:
                raise DomainError(f"trace {tr} is not 1 within {TRACE_TOL}")
            lo = np.linalg.eigvalsh(0.5 * (m + m.conj().T)).min()
            if lo < -EIGENVALUE_SLACK:
                raise DomainError(f"negative eigenvalue {lo:.3e} below slack")

    def populations(self) -> np.ndarray:
        return self.matrix.diagonal().real.copy()

    def expectation(self, op: np.ndarray) -> complex:
        return complex(np.trace(op @ self.matrix))


# --- operators ---------------------------------------------------------------


def annihilation(space: FockSpace) -> Operator:
    """Ladder operator a with <n-1|a|n> = sqrt(n)."""
    return Operator(space, np.diag(np.sqrt(np.arange(1, space.dim)), k=1))


def creation(space: FockSpace) -> Operator:
    return annihilation(space).dagger()


def number_operator(space: FockSpace) -> Operator:
    return Operator(space, np.diag(np.arange(space.dim, dtype=float)))


def parity_operator(space: FockSpace) -> Operator:
    return Operator(space, np.diag((-1.0) ** np.arange(space.dim)))


def displacement(alpha: complex, space: FockSpace) -> Operator:
    """Displacement exp(alpha a^dag - alpha* a) in the truncated space.

    Exact only up to truncation; mainly useful as an independent oracle
    for coherent states and Wigner covariance checks.
    """
    from scipy.linalg import expm

    a = annihilation(space).matrix
    return Operator(space, expm(alpha * a.conj().T - np.conj(alpha) * a))


# --- states ------------------------------------------------------------------


def coherent_amplitudes(alpha: complex, space: FockSpace) -> np.ndarray:
    """Unnormalized coefficients c_n = e^{-|a|^2/2} a^n / sqrt(n!).

    Computed by the multiplicative recurrence c_{n+1} = c_n a/sqrt(n+1),
    which stays finite where factorials would overflow.
    """
    c = np.empty(space.dim, dtype=complex)
    c[0] = math.exp(-0.5 * abs(alpha) ** 2)
    for n in range(space.dim - 1):
        c[n + 1] = c[n] * alpha / math.sqrt(n + 1)
    return c


def truncation_deficit(alpha: complex, space: FockSpace) -> float:
    """Probability weight lost to truncation, 1 - sum_n |c_n|^2."""
    c = coherent_amplitudes(alpha, space)
    return float(max(0.0, 1.0 - np.vdot(c, c).real))


def coherent_state(alpha: complex, space: FockSpace) -> np.ndarray:
    """Truncated coherent state, renormalized to unit norm.

    Raises TruncationError when the retained weight falls below
    1 - 1e-6; warns when |alpha|^2 exceeds dim/2 (tail adequacy).
    """
    if abs(alpha) ** 2 > space.dim / 2.0:
        warnings.warn(
            f"|alpha|^2 = {abs(alpha)**2:.1f} exceeds dim/2 = {space.dim/2:.1f}; "
            "truncation may be inadequate",
            stacklevel=2,
        )
    c = coherent_amplitudes(alpha, space)
    norm2 = np.vdot(c, c).real
    if norm2 < 1.0 - 1e-6:
        raise TruncationError(
            f"coherent state |alpha|={abs(alpha):.3f} retains only "
            f"{norm2:.9f} of its weight at dim={space.dim}"
        )
    return c / math.sqrt(norm2)


def cat_density(alpha1: complex, alpha2: complex, space: FockSpace) -> DensityMatrix:
    """Normalized projector onto |alpha1> + |alpha2>.

    The normalization 1/(2 + 2 Re<alpha1|alpha2>) is evaluated with the
    truncated vectors so the trace is exactly 1 in the retained space.
    """
    psi = coherent_state(alpha1, space) + coherent_state(alpha2, space)
    norm2 = np.vdot(psi, psi).real
    rho = np.outer(psi, psi.conj()) / norm2
    return DensityMatrix(space, rho)


def thermal_occupation(beta_hw: float) -> float:
    """Bose occupation at twice the oscillator frequency.

    beta_hw means beta*hbar*Omega; the returned value is
    1/(exp(2*beta_hw) - 1).
    """
    if beta_hw <= 0:
        raise DomainError(f"beta*hbar*Omega must be positive, got {beta_hw}")
    # overflow-free form of 1/(e^{2x} - 1)
    e = math.exp(-2.0 * beta_hw)
    return e / (1.0 - e)


def beta_for_occupation(nbar: float) -> float:
    """Inverse of thermal_occupation: beta*hbar*Omega giving n(2 Omega) = nbar."""
    if nbar <= 0:
        raise DomainError(f"occupation must be positive, got {nbar}")
    return 0.5 * math.log1p(1.0 / nbar)


def parity_expectation(rho: DensityMatrix) -> float:
    """Sum_n (-1)^n rho_nn, in [-1, 1]."""
    signs = (-1.0) ** np.arange(rho.space.dim)
    return float(np.real(np.sum(signs * rho.matrix.diagonal())))
