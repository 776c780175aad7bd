"""Phase-space observables: Wigner function, position density, visibility.

Conventions (dimensionless units): W(x, p) is normalized so that
Int W dx dp = 1, which makes the vacuum W(x,p) = exp(-x^2-p^2)/pi.  It
is evaluated as the displaced-parity expectation

    W(x, p) = (1/pi) Tr[rho D(beta) Pi],   beta = sqrt(2)(x + i p),

expanded over the Fock matrix diagonals with normalized associated
Laguerre recurrences, which is exact in the truncated space, needs no
FFT conventions, and costs O(nx * np * dim^2).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import CoverageError, DomainError, NoFringeError
from .fock_core import DensityMatrix

BOUNDARY_FRACTION = 1e-6
NORMALIZATION_TOL = 1e-4


@dataclass(frozen=True)
class PhaseSpaceGrid:
    """Uniform rectangular grid in dimensionless (x, p)."""

    x_min: float
    x_max: float
    p_min: float
    p_max: float
    nx: int
    np: int

    def __post_init__(self):
        if self.nx < 2 or self.np < 2:
            raise DomainError("grid needs at least 2 points per axis")
        if self.x_max <= self.x_min or self.p_max <= self.p_min:
            raise DomainError("grid extents must be increasing")

    @classmethod
    def square(cls, half_range: float, points: int) -> "PhaseSpaceGrid":
        return cls(-half_range, half_range, -half_range, half_range, points, points)

    @classmethod
    def for_amplitude(cls, alpha_max: float, points_per_fringe: int = 8) -> "PhaseSpaceGrid":
        """Grid covering sqrt(2)|alpha| + 4 that resolves cat fringes.

        The finest interference oscillation of a two-component state of
        amplitude alpha has wavelength 2 pi / (2 sqrt(2) alpha).
        """
        a = max(abs(alpha_max), 1.0)
        half = math.sqrt(2.0) * a + 4.0
        wavelength = 2.0 * math.pi / (2.0 * math.sqrt(2.0) * a)
        step = wavelength / points_per_fringe
        points = max(101, 2 * math.ceil(half / step) + 1)
        return cls.square(half, points)

    def xs(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx)

    def ps(self) -> np.ndarray:
        return np.linspace(self.p_min, self.p_max, self.np)

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.nx - 1)

    @property
    def dp(self) -> float:
        return (self.p_max - self.p_min) / (self.np - 1)


@dataclass
class WignerField:
    """Sampled Wigner function; values[i, j] = W(x_i, p_j)."""

    grid: PhaseSpaceGrid
    values: np.ndarray

    def integral(self) -> float:
        return float(self.values.sum() * self.grid.dx * self.grid.dp)


@dataclass
class PositionDensity:
    """Sampled probability density P(x) on a uniform grid."""

    x: np.ndarray
    values: np.ndarray

    @property
    def dx(self) -> float:
        return float(self.x[1] - self.x[0])

    def integral(self) -> float:
        return float(self.values.sum() * self.dx)


def wigner(rho: DensityMatrix, grid: PhaseSpaceGrid) -> WignerField:
    """Evaluate W on the grid from the Fock-basis density matrix.

    Raises CoverageError when the state visibly leaks off the grid
    (boundary |W| above 1e-6 of the peak).
    """
    dim = rho.space.dim
    X, P = np.meshgrid(grid.xs(), grid.ps(), indexing="ij")
    beta = math.sqrt(2.0) * (X + 1j * P)
    babs = np.abs(beta)
    B = babs * babs
    with np.errstate(divide="ignore"):
        logb = np.log(babs)  # -inf at the origin; exp() maps it back to 0

    signs = (-1.0) ** np.arange(dim)
    acc = np.zeros_like(beta)
    scale = np.max(np.abs(rho.matrix))
    phase_d = np.ones_like(beta)
    phase = np.exp(1j * np.angle(beta))
    for d in range(dim):
        if d > 0:
            phase_d = phase_d * phase
        coefs = np.diagonal(rho.matrix, offset=d).copy()  # rho[n, n+d]
        if d > 0 and np.max(np.abs(coefs)) < 1e-18 * scale:
            continue
        coefs = coefs * signs[: dim - d]
        if d == 0:
            t_prev = np.exp(-0.5 * B).astype(complex)
        else:
            logmag = d * logb - 0.5 * B - 0.5 * gammaln(d + 1)
            t_prev = np.exp(logmag) * phase_d
        term = coefs[0] * t_prev
        t_pprev = None
        for n in range(1, dim - d):
            r1 = math.sqrt(n / (n + d))
            if n == 1:
                t_next = (d + 1.0 - B) * r1 * t_prev
            else:
                r2 = math.sqrt((n - 1) * n / ((n + d - 1) * (n + d)))
                t_next = (
                    (2.0 * n - 1.0 + d - B) * r1 * t_prev
                    - (n - 1.0 + d) * r2 * t_pprev
                ) / n
            term += coefs[n] * t_next
            t_pprev, t_prev = t_prev, t_next
        acc += term if d == 0 else 2.0 * term

    values = acc.real / math.pi

    peak = np.max(np.abs(values))
    edge = max(
        np.max(np.abs(values[0, :])),
        np.max(np.abs(values[-1, :])),
        np.max(np.abs(values[:, 0])),
        np.max(np.abs(values[:, -1])),
    )
    if edge > BOUNDARY_FRACTION * peak:
        raise CoverageError(
            f"boundary |W| = {edge:.3e} exceeds {BOUNDARY_FRACTION:g} of peak {peak:.3e}; "
            "enlarge the grid"
        )
    field = WignerField(grid, values)
    total = field.integral()
    if abs(total - 1.0) > NORMALIZATION_TOL:
        warnings.warn(
            f"Wigner integral {total:.6f} deviates from 1; grid may undersample fringes",
            stacklevel=2,
        )
    return field


def hermite_functions(xs: np.ndarray, n_max: int) -> np.ndarray:
    """Harmonic-oscillator eigenfunctions psi_0..psi_{n_max-1} on xs.

    Uses the normalized recurrence
    psi_{n+1} = x sqrt(2/(n+1)) psi_n - sqrt(n/(n+1)) psi_{n-1},
    which is overflow-free for any n.
    """
    xs = np.asarray(xs, dtype=float)
    psi = np.empty((n_max, xs.size))
    psi[0] = math.pi ** (-0.25) * np.exp(-0.5 * xs * xs)
    if n_max > 1:
        psi[1] = math.sqrt(2.0) * xs * psi[0]
    for n in range(1, n_max - 1):
        psi[n + 1] = xs * math.sqrt(2.0 / (n + 1)) * psi[n] - math.sqrt(
            n / (n + 1)
        ) * psi[n - 1]
    return psi


def position_density(rho: DensityMatrix, xgrid: np.ndarray) -> PositionDensity:
    """P(x) = sum_mn rho_mn psi_m(x) psi_n(x) on the given grid."""
    xgrid = np.asarray(xgrid, dtype=float)
    psi = hermite_functions(xgrid, rho.space.dim)
    values = np.einsum("mx,mn,nx->x", psi, rho.matrix, psi).real

    peak = values.max()
    edge = max(abs(values[0]), abs(values[-1]))
    if edge > BOUNDARY_FRACTION * peak:
        raise CoverageError(
            f"boundary P = {edge:.3e} exceeds {BOUNDARY_FRACTION:g} of peak {peak:.3e}"
        )
    dens = PositionDensity(xgrid, values)
    if abs(dens.integral() - 1.0) > 1e-6:
        warnings.warn(
            f"P integrates to {dens.integral():.8f}; grid may be too coarse",
            stacklevel=2,
        )
    return dens


def _refine_extremum(x: np.ndarray, y: np.ndarray, i: int) -> tuple[float, float]:
    # parabola through (i-1, i, i+1); returns (x*, y*) of the vertex
    if i == 0 or i == len(x) - 1:
        return float(x[i]), float(y[i])
    y0, y1, y2 = y[i - 1], y[i], y[i + 1]
    denom = y0 - 2.0 * y1 + y2
    if denom == 0.0:
        return float(x[i]), float(y[i])
    h = x[1] - x[0]
    shift = 0.5 * (y0 - y2) / denom
    return float(x[i] + shift * h), float(y1 - 0.25 * (y0 - y2) * shift)


@dataclass(frozen=True)
class FringeReading:
    """Central-fringe measurement of a position density."""

    nu: float
    x_max: float
    p_max: float
    x_min: float
    p_min: float
    spacing: float


def fringe_visibility(dens: PositionDensity, expected_spacing: float | None = None) -> FringeReading:
    """Contrast of the central fringe of P(x).

    P_max is the local maximum nearest x = 0 and P_min the first local
    minimum to its right; both are refined by a 3-point parabola so the
    reading is not limited to grid resolution (the minimum is clamped
    at 0 since P is a probability density).  Raises NoFringeError when
    no local minimum exists, or none within 3 expected fringe spacings
    when a spacing is supplied.
    """
    x, y = dens.x, dens.values
    interior = np.arange(1, len(x) - 1)
    is_max = (y[interior] >= y[interior - 1]) & (y[interior] >= y[interior + 1])
    max_idx = interior[is_max]
    if len(max_idx) == 0:
        raise NoFringeError("no interior local maximum in P(x)")
    i_max = int(max_idx[np.argmin(np.abs(x[max_idx]))])
    x_max, p_max = _refine_extremum(x, y, i_max)

    is_min = (y[interior] <= y[interior - 1]) & (y[interior] <= y[interior + 1])
    min_idx = interior[is_min & (interior > i_max)]
    if expected_spacing is not None:
        min_idx = min_idx[x[min_idx] <= x_max + 3.0 * expected_spacing]
    if len(min_idx) == 0:
        raise NoFringeError(
            "no local minimum to the right of the central maximum"
            + (f" within 3 spacings ({expected_spacing:g})" if expected_spacing else "")
        )
    i_min = int(min_idx[0])
    x_min, p_min = _refine_extremum(x, y, i_min)
    p_min = max(p_min, 0.0)

    nu = (p_max - p_min) / (p_max + p_min)
    return FringeReading(
        nu=float(nu),
        x_max=x_max,
        p_max=p_max,
        x_min=x_min,
        p_min=p_min,
        spacing=2.0 * (x_min - x_max),
    )


def visibility(dens: PositionDensity, expected_spacing: float | None = None) -> float:
    """(P_max - P_min) / (P_max + P_min) of the central fringe."""
    return fringe_visibility(dens, expected_spacing).nu


def negativity_volume(field: WignerField) -> float:
    """Integral of the negative part of W; zero for classical-like states."""
    neg = np.where(field.values < 0.0, -field.values, 0.0)
    return float(neg.sum() * field.grid.dx * field.grid.dp)


def wigner_marginal(field: WignerField) -> PositionDensity:
    """Integrate W over momentum; should reproduce position_density."""
    values = field.values.sum(axis=1) * field.grid.dp
    return PositionDensity(field.grid.xs(), values)
