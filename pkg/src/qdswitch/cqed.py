"""Coupled dot-cavity optics.

Two-level emitter coupled to a single cavity mode: polariton
eigenfrequencies of the non-Hermitian 2x2 problem, weak-probe
reflectivity in the standard single-mode input-output form,
photoluminescence as polariton Lorentzians, coupling-regime
classification, and modulation-bandwidth figures of merit.

All frequencies, detunings, and rates are angular (rad/ns, i.e. angular
GHz) and measured from a common optical reference; bandwidth figures
come out in ordinary-frequency GHz.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .constants import SPEED_OF_LIGHT_NM_NS
from .errors import DomainError


@dataclass(frozen=True)
class CqedParams:
    """Coupled-system parameters, angular GHz.

    cavity_freq / dot_freq are offsets from the optical reference
    frequency.  dot_decay is the effective transverse decay of the dot
    transition (dephasing included), not the radiative rate.  amplitude
    and background collapse all setup optics into two numbers.
    """

    cavity_freq: float
    dot_freq: float
    coupling: float
    cavity_decay: float
    dot_decay: float
    amplitude: float = 1.0
    background: float = 0.0

    def __post_init__(self) -> None:
        if self.coupling < 0.0:
            raise DomainError("coupling must be >= 0")
        if not self.cavity_decay > 0.0:
            raise DomainError("cavity_decay must be > 0")
        if not self.dot_decay > 0.0:
            raise DomainError("dot_decay must be > 0")
        if not self.amplitude > 0.0:
            raise DomainError("amplitude must be > 0")
        if self.background < 0.0:
            raise DomainError("background must be >= 0")


@dataclass(frozen=True)
class OpticalFrame:
    """Reference optical frame: operating wavelength and loaded Q."""

    reference_wavelength_nm: float = 935.0
    quality_factor: float | None = None

    def __post_init__(self) -> None:
        if not self.reference_wavelength_nm > 0.0:
            raise DomainError("reference_wavelength must be > 0")
        if self.quality_factor is not None and not self.quality_factor > 0.0:
            raise DomainError("quality_factor must be > 0")


@dataclass(frozen=True)
class Spectrum:
    """Sampled spectrum: strictly increasing angular-GHz detuning grid
    with non-negative intensities."""

    detunings: np.ndarray
    intensities: np.ndarray

    def __post_init__(self) -> None:
        det = np.asarray(self.detunings, dtype=float)
        inten = np.asarray(self.intensities, dtype=float)
        if det.ndim != 1 or det.size == 0:
            raise DomainError("detuning grid must be a non-empty 1-D array")
        if inten.shape != det.shape:
            raise DomainError("intensities must match the detuning grid length")
        if det.size > 1 and not np.all(np.diff(det) > 0.0):
            raise DomainError("detuning grid must be strictly increasing")
        if not np.all(np.isfinite(det)) or not np.all(np.isfinite(inten)):
            raise DomainError("spectrum values must be finite")
        if np.any(inten < 0.0):
            raise DomainError("intensities must be non-negative")
        object.__setattr__(self, "detunings", det)
        object.__setattr__(self, "intensities", inten)

    def __len__(self) -> int:
        return int(self.detunings.size)


class CouplingRegime(enum.Enum):
    STRONG = "strong"
    ONSET = "onset"
    WEAK = "weak"


def kappa_from_q(frame: OpticalFrame) -> float:
    """Cavity field decay rate kappa = omega0 / (2 Q), angular GHz."""
    if frame.quality_factor is None:
        raise DomainError("quality_factor required to derive kappa")
    omega0 = 2.0 * math.pi * SPEED_OF_LIGHT_NM_NS / frame.reference_wavelength_nm
    return omega0 / (2.0 * frame.quality_factor)


def polariton_modes(params: CqedParams) -> tuple[complex, complex]:
    """Complex eigenfrequencies of [[w_c - i k, g], [g, w_d - i gam]].

    Returns the two hybrid modes ordered by real part (then imaginary
    part): real parts are the mode positions, -imag the half widths.
    """
    mean = 0.5 * (params.cavity_freq + params.dot_freq) \
        - 0.5j * (params.cavity_decay + params.dot_decay)
    half = 0.5 * (params.cavity_freq - params.dot_freq) \
        - 0.5j * (params.cavity_decay - params.dot_decay)
    root = cmath.sqrt(params.coupling ** 2 + half * half)
    lo, hi = sorted((mean - root, mean + root), key=lambda z: (z.real, z.imag))
    return lo, hi


def _reflectivity(params: CqedParams, omega):
    e = 1j * (params.dot_freq - omega) + params.dot_decay
    d = 1j * (params.cavity_freq - omega) + params.cavity_decay \
        + params.coupling ** 2 / e
    return params.background + params.amplitude * np.abs(params.cavity_decay / d) ** 2


def reflectivity_at(params: CqedParams, omega: float) -> float:
    """Probe intensity of the cavity transmission function at one frequency."""
    return float(_reflectivity(params, omega))


def _as_grid(detunings) -> np.ndarray:
    grid = np.asarray(detunings, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise DomainError("detuning grid must be a non-empty 1-D array")
    if grid.size > 1 and not np.all(np.diff(grid) > 0.0):
        raise DomainError("detuning grid must be strictly increasing")
    return grid


def reflectivity_spectrum(params: CqedParams, detunings) -> Spectrum:
    """Weak-probe reflectivity over a detuning grid.

    I(w) = b + A |kappa / (i(w_c - w) + kappa + g^2/(i(w_d - w) + gamma))|^2.
    With the dot far detuned this reduces to a Lorentzian of HWHM kappa
    centered on the cavity; on joint resonance the dip is (1 + C)^-2 of
    the bare-cavity peak, C = g^2/(kappa gamma).
    """
    grid = _as_grid(detunings)
    return Spectrum(grid, _reflectivity(params, grid))


def pl_spectrum(params: CqedParams, detunings) -> Spectrum:
    """Photoluminescence model: equal-weight unit-peak Lorentzians at the
    polariton positions with the polariton half widths."""
    grid = _as_grid(detunings)
    total = np.zeros_like(grid)
    for mode in polariton_modes(params):
        center, hwhm = mode.real, -mode.imag
        total += hwhm ** 2 / ((grid - center) ** 2 + hwhm ** 2)
    return Spectrum(grid, params.background + params.amplitude * total)


def coupling_regime(params: CqedParams, margin: float = 0.1) -> CouplingRegime:
    """Classify against g = (kappa + gamma)/2 with a +-margin onset band."""
    threshold = 0.5 * (params.cavity_decay + params.dot_decay)
    ratio = params.coupling / threshold
    if ratio > 1.0 + margin:
        return CouplingRegime.STRONG
    if ratio >= 1.0 - margin:
        return CouplingRegime.ONSET
    return CouplingRegime.WEAK


def weak_coupling_bandwidth(params: CqedParams) -> float:
    """Weak-regime modulation bandwidth g^2/(pi kappa), ordinary GHz."""
    return params.coupling ** 2 / (math.pi * params.cavity_decay)


def max_bandwidth(params: CqedParams) -> float:
    """Maximum modulation bandwidth in ordinary GHz.

    min(g/pi, kappa/pi) at or beyond the strong-coupling onset,
    g^2/(pi kappa) in the weak regime.
    """
    if coupling_regime(params) is CouplingRegime.WEAK:
        return weak_coupling_bandwidth(params)
    return min(params.coupling, params.cavity_decay) / math.pi


def cooperativity(params: CqedParams) -> float:
    """C = g^2 / (kappa gamma)."""
    return params.coupling ** 2 / (params.cavity_decay * params.dot_decay)


def vacuum_rabi_splitting(params: CqedParams) -> float:
    """Separation of the polariton real parts, ordinary GHz."""
    lo, hi = polariton_modes(params)
    return (hi.real - lo.real) / (2.0 * math.pi)


def g_of_voltage(anchors: Sequence[tuple[float, float]], v: float) -> float:
    """Piecewise-linear coupling versus bias from anchor points, clamped
    at both ends.  Needs at least two anchors with increasing voltage."""
    if len(anchors) < 2:
        raise DomainError("g_of_voltage needs at least two anchor points")
    volts = np.asarray([a[0] for a in anchors], dtype=float)
    gs = np.asarray([a[1] for a in anchors], dtype=float)
    if not np.all(np.diff(volts) > 0.0):
        raise DomainError("anchor voltages must be strictly increasing")
    return float(np.interp(v, volts, gs))
