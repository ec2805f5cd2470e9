"""Time-domain electro-optic switching.

A square-wave bias is low-pass filtered by a first-order RC line, the
filtered voltage modulates the dot detuning (and optionally the
coupling) quasi-statically, and the probe intensity follows the
instantaneous spectrum.  The quasi-static step is justified by the
timescale separation: drives of at most a few hundred MHz against
optical rates of tens of GHz.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .constants import JOULE_PER_FJ, VACUUM_PERMITTIVITY_F_UM
from .cqed import CqedParams
from .electrostatics import (
    DEFAULT_FIELD_SIGN,
    ElectrostaticParams,
    StarkCoefficients,
    voltage_to_detuning,
)
from .errors import AdiabaticityWarning, DegenerateTraceError, DomainError

# Adiabaticity guard: warn when drive frequency exceeds kappa/(2 pi)/10.
ADIABATIC_MARGIN = 10.0


@dataclass(frozen=True)
class DriveSpec:
    """Square-wave drive plus first-order line filtering.

    Voltages in V, frequencies in MHz.  duty is the high fraction of
    each period; transitions are aligned to sample boundaries, so
    duty * samples_per_cycle should be an integer (it is rounded to one).
    """

    v_low: float
    v_high: float
    frequency_mhz: float
    duty: float = 0.5
    rc_cutoff_mhz: float = 100.0
    cycles: int = 9
    samples_per_cycle: int = 256

    def __post_init__(self) -> None:
        if not 0.0 <= self.v_low <= self.v_high:
            raise DomainError("need v_high >= v_low >= 0")
        if not self.frequency_mhz > 0.0:
            raise DomainError("frequency must be > 0")
        if not 0.0 < self.duty < 1.0:
            raise DomainError("duty must be in (0, 1)")
        if not self.rc_cutoff_mhz > 0.0:
            raise DomainError("rc_cutoff must be > 0")
        if int(self.cycles) != self.cycles or self.cycles < 3:
            raise DomainError("cycles must be an integer >= 3")
        if int(self.samples_per_cycle) != self.samples_per_cycle or self.samples_per_cycle < 64:
            raise DomainError("samples_per_cycle must be an integer >= 64")

    @property
    def period_ns(self) -> float:
        return 1e3 / self.frequency_mhz

    @property
    def tau_ns(self) -> float:
        """RC time constant 1/(2 pi f_c)."""
        return 1e3 / (2.0 * math.pi * self.rc_cutoff_mhz)


@dataclass(frozen=True)
class TimeTrace:
    """Uniformly sampled non-negative trace: times in ns."""

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if t.ndim != 1 or t.size < 2 or v.shape != t.shape:
            raise DomainError("trace needs matching 1-D arrays with >= 2 samples")
        steps = np.diff(t)
        if not np.all(steps > 0.0):
            raise DomainError("times must be strictly increasing")
        if not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
            raise DomainError("times must be uniformly sampled")
        if np.any(v < 0.0):
            raise DomainError("trace values must be non-negative")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class EnergyBudget:
    """Stored-field energy inputs: volume in um^3, field in V/um."""

    active_volume_um3: float
    field_v_per_um: float
    relative_permittivity: float

    def __post_init__(self) -> None:
        if not (self.active_volume_um3 > 0.0 and self.field_v_per_um >= 0.0
                and self.relative_permittivity > 0.0):
            raise DomainError("energy budget needs volume > 0, permittivity > 0, field >= 0")


def drive_samples(drive: DriveSpec) -> tuple[np.ndarray, np.ndarray]:
    """Sampled ideal square wave over all cycles, high first.

    Transitions land exactly on sample boundaries so the integrator
    never straddles a discontinuity.
    """
    spc = int(drive.samples_per_cycle)
    n = int(drive.cycles) * spc
    high_samples = round(drive.duty * spc)
    high_samples = min(max(high_samples, 1), spc - 1)
    pos = np.arange(n) % spc
    values = np.where(pos < high_samples, drive.v_high, drive.v_low)
    times = np.arange(n) * (drive.period_ns / spc)
    return times, values.astype(float)


def rc_response(drive: DriveSpec, t_grid: np.ndarray | None = None) -> TimeTrace:
    """Line-filtered voltage: integrates tau dVf/dt = V(t) - Vf from
    Vf(0) = v_low with classical fixed-step RK4, step <= tau/20.

    The fundamental harmonic of the steady-state output is attenuated by
    |H(f)| = (1 + (f/f_c)^2)^(-1/2) relative to the ideal square wave.
    """
    if t_grid is None:
        times, u = drive_samples(drive)
    else:
        times = np.asarray(t_grid, dtype=float)
        if times.ndim != 1 or times.size < 2:
            raise DomainError("t_grid must be a 1-D array with >= 2 samples")
        if not np.allclose(np.diff(times), times[1] - times[0], rtol=1e-9, atol=0.0):
            raise DomainError("t_grid must be uniform")
        phase = (times / drive.period_ns) % 1.0
        u = np.where(phase < drive.duty, drive.v_high, drive.v_low)

    tau = drive.tau_ns
    dt = times[1] - times[0]
    substeps = max(1, math.ceil(dt / (tau / 20.0)))
    h = dt / substeps

    out = np.empty_like(u)
    y = drive.v_low
    out[0] = y
    # Input is held constant across each sample interval, so every RK4
    # substep sees a smooth (affine) right-hand side.
    for i in range(len(u) - 1):
        ui = u[i]
        for _ in range(substeps):
            k1 = (ui - y) / tau
            k2 = (ui - (y + 0.5 * h * k1)) / tau
            k3 = (ui - (y + 0.5 * h * k2)) / tau
            k4 = (ui - (y + h * k3)) / tau
            y = y + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
        out[i + 1] = y
    return TimeTrace(times, out)


def simulate_switching(
    drive: DriveSpec,
    elec: ElectrostaticParams,
    stark: StarkCoefficients,
    cqed: CqedParams,
    *,
    screening: float = 1.0,
    probe_freq: float | None = None,
    g_anchors: Sequence[tuple[float, float]] | None = None,
    field_sign: float = DEFAULT_FIELD_SIGN,
) -> TimeTrace:
    """Probe-intensity trace for a modulated bias, steady-state cycles only.

    The dot frequency follows w_d0 + detuning(Vf(t)); the coupling stays
    at cqed.coupling unless g_anchors supplies a bias dependence.  The
    probe sits at the zero-bias dot frequency unless probe_freq is
    given.  The first ceil(cycles/3) cycles are discarded as the RC
    transient.
    """
    drive_ghz = drive.frequency_mhz * 1e-3
    if drive_ghz > cqed.cavity_decay / (2.0 * math.pi) / ADIABATIC_MARGIN:
        warnings.warn(
            "drive frequency within a tenth of the cavity linewidth; "
            "quasi-static intensities are unreliable",
            AdiabaticityWarning,
            stacklevel=2,
        )

    line = rc_response(drive)
    omega_probe = cqed.dot_freq if probe_freq is None else probe_freq

    volts = line.values
    detune = np.array([
        voltage_to_detuning(elec, stark, v, screening=screening, field_sign=field_sign)
        for v in volts
    ])
    omega_d = cqed.dot_freq + detune
    if g_anchors is None:
        g = np.full_like(volts, cqed.coupling)
    else:
        if len(g_anchors) < 2:
            raise DomainError("g_anchors needs at least two points")
        av = np.asarray([a[0] for a in g_anchors], dtype=float)
        ag = np.asarray([a[1] for a in g_anchors], dtype=float)
        if not np.all(np.diff(av) > 0.0):
            raise DomainError("anchor voltages must be strictly increasing")
        g = np.interp(volts, av, ag)

    e = 1j * (omega_d - omega_probe) + cqed.dot_decay
    d = 1j * (cqed.cavity_freq - omega_probe) + cqed.cavity_decay + g * g / e
    intensity = cqed.background + cqed.amplitude * np.abs(cqed.cavity_decay / d) ** 2

    skip = math.ceil(drive.cycles / 3) * int(drive.samples_per_cycle)
    return TimeTrace(line.times[skip:], intensity[skip:])


def on_off_ratio(trace: TimeTrace) -> float:
    """max/min intensity over the retained window; needs a positive floor."""
    lo = float(np.min(trace.values))
    if lo <= 0.0:
        raise DegenerateTraceError("trace minimum must be > 0 for an on/off ratio")
    return float(np.max(trace.values)) / lo


def switching_energy(budget: EnergyBudget) -> float:
    """Field energy (1/2) eps0 eps_r F^2 V_a stored in the active volume, fJ."""
    joules = (0.5 * VACUUM_PERMITTIVITY_F_UM * budget.relative_permittivity
              * budget.field_v_per_um ** 2 * budget.active_volume_um3)
    return joules / JOULE_PER_FJ
