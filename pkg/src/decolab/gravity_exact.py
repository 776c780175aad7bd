"""Exact reduced dynamics of the energy-coupled (gravity-type) bath model.

The oscillator couples to the bath through its own energy, so number
populations never move; each Fock outer product |n><n'| just picks up a
time-dependent complex exponent.  With an ohmic bath of exponential
cutoff w_c and inverse temperature beta (both in units of the system
frequency), the decay of the n != n' entries is

    rho_nn'(t) = rho_nn'(0) exp(-i(n-n')t + i phase - cp (n-n')^2 D(t)),

where cp is the dimensionless coupling C/pi and D(t) is available in
three closed forms of increasing approximation:

  exact_gamma   D = ln(1+t^2 wc^2)/2 + ln|Gamma ratio|  (all t, T)
  high_cutoff   Gamma ratio -> (beta/pi t) sinh(pi t/beta), beta*wc >> 1
  high_T        asymptote ln(beta wc/2pi) + pi t/beta, valid t >> beta

`decoherence_integral_oracle` evaluates the underlying bath integral by
adaptive quadrature and is kept strictly independent of the closed
forms so each can check the other.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import DomainError, QuadratureError
from .fock_core import DensityMatrix
from .special import log_gamma

FORMS = ("exact_gamma", "high_cutoff", "high_T")


@dataclass(frozen=True)
class GravityBathParams:
    """Bath parameters in dimensionless units.

    coupling_over_pi is C/pi for the redefined coupling C -> C Omega^2;
    cutoff is w_c/Omega; beta is beta*hbar*Omega.  The two phase flags
    re-enable the cutoff-linear frequency shift and the quadratic
    (Kerr-like) phase that are otherwise absorbed by renormalization;
    with both on, the full (n-n')(n+n'+1) phase term is applied.
    """

    coupling_over_pi: float = 0.001
    cutoff: float = 1.0e3
    beta: float = 1.0
    include_kerr_phase: bool = False
    include_freq_shift: bool = False

    def __post_init__(self):
        if self.coupling_over_pi <= 0:
            raise DomainError("coupling_over_pi must be positive")
        if self.cutoff <= 0:
            raise DomainError("cutoff must be positive")
        if self.beta <= 0:
            raise DomainError("beta must be positive")
        if self.cutoff < 10:
            warnings.warn(
                f"cutoff = {self.cutoff} is small; the model assumes w_c >> Omega",
                stacklevel=2,
            )


def _integrand(w: float, beta: float, cutoff: float, t: float) -> float:
    # coth(beta w/2) sin^2(w t/2) e^{-w/w_c} / w, with the removable
    # w -> 0 endpoint patched by its series value t^2/(2 beta).
    if w < 1e-12:
        return t * t / (2.0 * beta)
    x = 0.5 * beta * w
    if x > 350.0:
        coth = 1.0
    else:
        coth = 1.0 / math.tanh(x)
    s = math.sin(0.5 * w * t)
    return coth * s * s * math.exp(-w / cutoff) / w


def decoherence_integral_oracle(t: float, params: GravityBathParams) -> float:
    """Bath integral I(t) = Int_0^inf coth(bw/2) sin^2(wt/2) e^{-w/wc} dw/w.

    Adaptive quadrature to a relative tolerance of 1e-9.  The decay
    exponent function D(t) equals 2 I(t).
    """
    if t < 0:
        raise DomainError("t must be nonnegative")
    if t == 0.0:
        return 0.0
    beta, cutoff = params.beta, params.cutoff
    w_hi = 100.0 * cutoff  # exp(-100) kills the tail
    split = min(6.0 * math.pi / t, w_hi)

    val1, err1 = integrate.quad(
        _integrand, 0.0, split, args=(beta, cutoff, t),
        epsabs=1e-14, epsrel=1e-11, limit=400,
    )
    total, err = val1, err1
    if split < w_hi:
        # tail: sin^2 = (1 - cos)/2 with the cos part done by a
        # Fourier-weighted rule that tracks the oscillation.
        def smooth(w):
            x = 0.5 * beta * w
            coth = 1.0 if x > 350.0 else 1.0 / math.tanh(x)
            return coth * math.exp(-w / cutoff) / w

        val2, err2 = integrate.quad(
            smooth, split, np.inf, epsabs=1e-13, epsrel=1e-11, limit=400,
        )
        val3, err3 = integrate.quad(
            smooth, split, np.inf, weight="cos", wvar=t,
            epsabs=1e-12, limlst=200, limit=400,
        )
        total += 0.5 * (val2 - val3)
        err += 0.5 * (err2 + err3)

    if err > max(1e-9 * abs(total), 1e-12):
        raise QuadratureError(
            f"estimated error {err:.2e} exceeds 1e-9 relative at t={t}"
        )
    return total


def decay_function(t: float, params: GravityBathParams, form: str = "exact_gamma") -> float:
    """Closed-form decay exponent D(t); Re of the exponent is -cp (n-n')^2 D."""
    if t < 0:
        raise DomainError("t must be nonnegative")
    beta, cutoff = params.beta, params.cutoff
    if form == "exact_gamma":
        if t == 0.0:
            return 0.0
        u = 1.0 / (beta * cutoff)
        half_log = 0.5 * math.log1p((t * cutoff) ** 2)
        ratio = 2.0 * log_gamma(1.0 + u).real - 2.0 * log_gamma(
            complex(1.0 + u, t * cutoff * u)
        ).real
        return half_log + ratio
    if form == "high_cutoff":
        if beta * cutoff <= 1.0:
            raise DomainError(
                f"high_cutoff form needs beta*cutoff > 1, got {beta * cutoff}"
            )
        if t == 0.0:
            return 0.0
        x = math.pi * t / beta
        # ln(sinh(x)/x) evaluated without overflow for large x
        if x > 30.0:
            log_sinh_over_x = x - math.log(2.0 * x)
        else:
            log_sinh_over_x = math.log(math.sinh(x) / x)
        return 0.5 * math.log1p((t * cutoff) ** 2) + log_sinh_over_x
    if form == "high_T":
        # asymptote for t >> beta; carries the cutoff "burst" term even at t=0
        return math.log(beta * cutoff / (2.0 * math.pi)) + math.pi * t / beta
    raise DomainError(f"unknown form {form!r}; expected one of {FORMS}")


def decoherence_exponent(
    n: int,
    np_: int,
    t: float,
    params: GravityBathParams,
    form: str = "exact_gamma",
) -> complex:
    """Full exponent E with rho_nn'(t) = rho_nn'(0) exp(E).

    E = -i(n-n')t + optional phase terms - cp (n-n')^2 D(t); it vanishes
    identically on the diagonal and its real part is never positive.
    """
    if t < 0:
        raise DomainError("t must be nonnegative")
    d = n - np_
    if d == 0:
        return 0.0 + 0.0j
    cp = params.coupling_over_pi
    exponent = -1j * d * t - cp * d * d * decay_function(t, params, form)
    if params.include_kerr_phase or params.include_freq_shift:
        bracket = params.cutoff * t - math.atan(params.cutoff * t)
        weight = 0.0
        if params.include_kerr_phase:
            weight += n + np_
        if params.include_freq_shift:
            weight += 1.0
        exponent += 1j * cp * d * weight * bracket
    return exponent


def _exponent_matrix(dim: int, t: float, params: GravityBathParams, form: str) -> np.ndarray:
    n = np.arange(dim)
    d = n[:, None] - n[None, :]
    exponent = (-1j * t) * d - params.coupling_over_pi * d.astype(float) ** 2 * decay_function(
        t, params, form
    )
    if params.include_kerr_phase or params.include_freq_shift:
        bracket = params.cutoff * t - math.atan(params.cutoff * t)
        weight = np.zeros_like(d, dtype=float)
        if params.include_kerr_phase:
            weight += n[:, None] + n[None, :]
        if params.include_freq_shift:
            weight += 1.0
        exponent = exponent + 1j * params.coupling_over_pi * d * weight * bracket
    return exponent


def evolve_density(
    rho0: DensityMatrix,
    t: float,
    params: GravityBathParams,
    form: str = "exact_gamma",
) -> DensityMatrix:
    """Apply the elementwise propagator to every Fock matrix entry.

    Populations are untouched; Hermiticity is preserved because the
    exponent obeys E(n', n) = conj(E(n, n')).
    """
    expo = _exponent_matrix(rho0.space.dim, t, params, form)
    return DensityMatrix(rho0.space, rho0.matrix * np.exp(expo), validate=False)


def steady_state(rho0: DensityMatrix) -> DensityMatrix:
    """Infinite-time limit: the off-diagonal entries are erased."""
    return DensityMatrix(
        rho0.space, np.diag(rho0.matrix.diagonal()), validate=False
    )
