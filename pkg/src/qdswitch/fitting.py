"""Least-squares recovery of model parameters.

Three fits mirror how the device is characterized: the shift-versus-bias
curve (linear in the two Stark coefficients once the field map is
applied), spectral fits of the reflectivity model, and a two-parameter
contrast calibration that turns DC on/off ratios into an effective dot
linewidth and screening factor.

The nonlinear fits run a damped Gauss-Newton (Levenberg-Marquardt)
loop with multiplicative damping adaptation.  Positive rates are
log-parameterized internally so no iterate can leave the physical
domain.  Everything is deterministic for a given dataset and start.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .cqed import CqedParams, Spectrum, reflectivity_at
from .electrostatics import (
    DEFAULT_FIELD_SIGN,
    ElectrostaticParams,
    StarkCoefficients,
    field_at_cavity,
    stark_shift,
    voltage_to_detuning,
)
from .errors import DegenerateFitError, DomainError

MAX_ITERATIONS = 500
REL_RESIDUAL_TOL = 1e-9
GRADIENT_TOL = 1e-8

# CqedParams fields that must stay positive; fitted on a log scale.
_LOG_SCALE_PARAMS = frozenset({"coupling", "cavity_decay", "dot_decay", "amplitude"})
_CQED_FIELDS = ("cavity_freq", "dot_freq", "coupling", "cavity_decay",
                "dot_decay", "amplitude", "background")
_CQED_UNITS = {
    "cavity_freq": "angular GHz",
    "dot_freq": "angular GHz",
    "coupling": "angular GHz",
    "cavity_decay": "angular GHz",
    "dot_decay": "angular GHz",
    "amplitude": "dimensionless",
    "background": "dimensionless",
}


@dataclass(frozen=True)
class FitResult:
    """Outcome of one least-squares solve.

    parameters holds every model parameter (fitted and held) in natural
    units; covariance_diag gives per-parameter variance estimates for
    the free ones when the normal matrix is invertible.
    """

    parameters: dict[str, float]
    units: dict[str, str]
    residual_norm: float
    converged: bool
    iterations: int
    covariance_diag: dict[str, float] | None = None


@dataclass(frozen=True)
class ShiftDataset:
    """Measured (reverse bias, shift) samples with optional weights."""

    voltages: np.ndarray
    shifts_mev: np.ndarray
    weights: np.ndarray | None = None

    def __post_init__(self) -> None:
        v = np.asarray(self.voltages, dtype=float)
        s = np.asarray(self.shifts_mev, dtype=float)
        if v.ndim != 1 or v.size < 2 or s.shape != v.shape:
            raise DomainError("shift dataset needs matching 1-D arrays, >= 2 points")
        if np.unique(v).size != v.size:
            raise DomainError("shift dataset voltages must be distinct")
        w = self.weights
        if w is not None:
            w = np.asarray(w, dtype=float)
            if w.shape != v.shape or np.any(w <= 0.0):
                raise DomainError("weights must be positive and match the data")
        object.__setattr__(self, "voltages", v)
        object.__setattr__(self, "shifts_mev", s)
        object.__setattr__(self, "weights", w)


def _levenberg_marquardt(
    residual: Callable[[np.ndarray], np.ndarray],
    x0: np.ndarray,
    jacobian: Callable[[np.ndarray], np.ndarray] | None = None,
    *,
    max_iterations: int = MAX_ITERATIONS,
    rel_tol: float = REL_RESIDUAL_TOL,
    grad_tol: float = GRADIENT_TOL,
) -> tuple[np.ndarray, float, bool, int, np.ndarray]:
    """Damped Gauss-Newton minimization of |residual(x)|^2.

    Returns (x, residual_norm, converged, iterations, JtJ at x).
    Damping is adapted multiplicatively: shrink on accepted steps, grow
    on rejected ones.
    """
    jac = jacobian if jacobian is not None else _fd_jacobian(residual)
    x = np.asarray(x0, dtype=float).copy()
    r = residual(x)
    cost = float(r @ r)
    lam = 1e-3
    converged = False
    iterations = 0
    j = jac(x)

    for iterations in range(1, max_iterations + 1):
        g = j.T @ r
        if np.max(np.abs(g), initial=0.0) <= grad_tol:
            converged = True
            iterations -= 1
            break
        jtj = j.T @ j
        diag = np.diag(jtj).copy()
        diag[diag <= 0.0] = 1.0
        accepted = False
        for _ in range(40):
            try:
                step = np.linalg.solve(jtj + lam * np.diag(diag), -g)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            x_new = x + step
            r_new = residual(x_new)
            cost_new = float(r_new @ r_new)
            if np.isfinite(cost_new) and cost_new <= cost:
                accepted = True
                break
            lam *= 10.0
        if not accepted:
            break
        lam = max(lam * 0.3, 1e-14)
        drop = cost - cost_new
        x, r, cost = x_new, r_new, cost_new
        j = jac(x)
        if drop <= rel_tol * max(cost, 1e-300):
            converged = True
            break

    if not converged:
        # Final gradient check catches the start-at-optimum case.
        if np.max(np.abs(j.T @ r), initial=0.0) <= grad_tol:
            converged = True
    return x, math.sqrt(cost), converged, iterations, j.T @ j


def _fd_jacobian(residual: Callable[[np.ndarray], np.ndarray]):
    def jac(x: np.ndarray) -> np.ndarray:
        base = residual(x)
        out = np.empty((base.size, x.size))
        for k in range(x.size):
            h = 1e-6 * max(1.0, abs(x[k]))
            xp = x.copy()
            xm = x.copy()
            xp[k] += h
            xm[k] -= h
            out[:, k] = (residual(xp) - residual(xm)) / (2.0 * h)
        return out
    return jac


def _covariance_diag(jtj: np.ndarray, residual_norm: float, n_points: int) -> np.ndarray | None:
    dof = n_points - jtj.shape[0]
    if dof <= 0:
        return None
    try:
        cov = np.linalg.inv(jtj) * (residual_norm ** 2 / dof)
    except np.linalg.LinAlgError:
        return None
    return np.diag(cov).copy()


# ---------------------------------------------------------------------------
# Stark curve

def fit_stark_curve(
    data: ShiftDataset,
    elec: ElectrostaticParams,
    *,
    field_sign: float = DEFAULT_FIELD_SIGN,
) -> FitResult:
    """Recover the Stark coefficients from shift-versus-bias data.

    Given the bias-to-field map the model is linear in the two
    coefficients, so the normal equations are solved in closed form.
    Points below the depletion onset carry zero field and no
    information; if fewer than three informative points remain, or the
    design is rank deficient (all fields equal), the fit is degenerate.
    """
    fields = np.array([field_sign * field_at_cavity(elec, v) for v in data.voltages])
    nonzero = np.count_nonzero(fields)
    if nonzero < 3:
        raise DegenerateFitError(
            f"need >= 3 points above the depletion onset, found {nonzero}")
    design = np.column_stack([fields, -fields ** 2])
    y = data.shifts_mev
    if data.weights is not None:
        w = np.sqrt(data.weights)
        design = design * w[:, None]
        y = y * w
    jtj = design.T @ design
    det = jtj[0, 0] * jtj[1, 1] - jtj[0, 1] * jtj[1, 0]
    scale = jtj[0, 0] * jtj[1, 1]
    if not det > 1e-12 * max(scale, 1e-300):
        raise DegenerateFitError("rank-deficient design: fields carry no curvature")
    rhs = design.T @ y
    dipole = (jtj[1, 1] * rhs[0] - jtj[0, 1] * rhs[1]) / det
    polar = (-jtj[1, 0] * rhs[0] + jtj[0, 0] * rhs[1]) / det
    resid = y - design @ np.array([dipole, polar])
    residual_norm = float(np.linalg.norm(resid))
    cov = _covariance_diag(jtj, residual_norm, y.size)
    return FitResult(
        parameters={"dipole_mev_um_per_v": float(dipole),
                    "polarizability_mev_um2_per_v2": float(polar)},
        units={"dipole_mev_um_per_v": "meV um/V",
               "polarizability_mev_um2_per_v2": "meV um^2/V^2"},
        residual_norm=residual_norm,
        converged=True,
        iterations=1,
        covariance_diag=None if cov is None else {
            "dipole_mev_um_per_v": float(cov[0]),
            "polarizability_mev_um2_per_v2": float(cov[1]),
        },
    )


def stark_model(
    elec: ElectrostaticParams,
    coeffs: StarkCoefficients,
    voltages,
    *,
    field_sign: float = DEFAULT_FIELD_SIGN,
) -> np.ndarray:
    """Shift in meV at each bias, for building synthetic datasets."""
    return np.array([
        stark_shift(coeffs, field_sign * field_at_cavity(elec, v)) for v in voltages
    ])


# ---------------------------------------------------------------------------
# Spectrum fit

def _pack(params: CqedParams, free: Sequence[str]) -> np.ndarray:
    vals = []
    for name in free:
        value = getattr(params, name)
        if name in _LOG_SCALE_PARAMS:
            if not value > 0.0:
                raise DomainError(f"{name} must be > 0 to fit on a log scale")
            vals.append(math.log(value))
        else:
            vals.append(value)
    return np.array(vals)


def _unpack(params: CqedParams, free: Sequence[str], x: np.ndarray) -> CqedParams:
    updates = {}
    for name, value in zip(free, x):
        updates[name] = math.exp(value) if name in _LOG_SCALE_PARAMS else value
    return replace(params, **updates)


def reflectivity_model_jacobian(params: CqedParams, detunings, names: Sequence[str]) -> np.ndarray:
    """Analytic d I / d p of the reflectivity model, columns in natural units.

    With E = i(w_d - w) + gamma and D = i(w_c - w) + kappa + g^2/E the
    intensity is b + A kappa^2 / |D|^2, and each derivative reduces to
    Re(conj(D) dD/dp).
    """
    grid = np.asarray(detunings, dtype=float)
    e = 1j * (params.dot_freq - grid) + params.dot_decay
    d = 1j * (params.cavity_freq - grid) + params.cavity_decay + params.coupling ** 2 / e
    abs2 = np.abs(d) ** 2
    a, g, kappa = params.amplitude, params.coupling, params.cavity_decay
    front = -a * kappa ** 2 / abs2 ** 2

    cols = []
    for name in names:
        if name == "amplitude":
            cols.append(kappa ** 2 / abs2)
        elif name == "background":
            cols.append(np.ones_like(grid))
        elif name == "cavity_freq":
            cols.append(front * 2.0 * np.real(np.conj(d) * 1j))
        elif name == "dot_freq":
            cols.append(front * 2.0 * np.real(np.conj(d) * (-1j * g ** 2 / e ** 2)))
        elif name == "coupling":
            cols.append(front * 2.0 * np.real(np.conj(d) * (2.0 * g / e)))
        elif name == "dot_decay":
            cols.append(front * 2.0 * np.real(np.conj(d) * (-(g ** 2) / e ** 2)))
        elif name == "cavity_decay":
            cols.append(2.0 * a * kappa / abs2 + front * 2.0 * np.real(np.conj(d)))
        else:
            raise DomainError(f"unknown spectrum parameter '{name}'")
    return np.column_stack(cols)


def fit_spectrum(
    spectrum: Spectrum,
    initial: CqedParams,
    free: Sequence[str],
) -> FitResult:
    """Fit the reflectivity model to a measured spectrum.

    free names a subset of the CqedParams fields; the rest stay at their
    initial values.  Non-convergence is reported through the result
    flag, not raised.
    """
    names = list(dict.fromkeys(free))
    unknown = [n for n in names if n not in _CQED_FIELDS]
    if unknown:
        raise DomainError(f"unknown free parameter(s): {', '.join(unknown)}")
    if not names:
        raise DomainError("free parameter set must not be empty")
    if not np.all(np.isfinite(spectrum.intensities)):
        raise DomainError("spectrum intensities contain non-finite values")

    data = spectrum.intensities
    grid = spectrum.detunings

    def residual(x: np.ndarray) -> np.ndarray:
        p = _unpack(initial, names, x)
        e = 1j * (p.dot_freq - grid) + p.dot_decay
        d = 1j * (p.cavity_freq - grid) + p.cavity_decay + p.coupling ** 2 / e
        model = p.background + p.amplitude * np.abs(p.cavity_decay / d) ** 2
        return model - data

    def jacobian(x: np.ndarray) -> np.ndarray:
        p = _unpack(initial, names, x)
        j = reflectivity_model_jacobian(p, grid, names)
        # chain rule to the log-scaled coordinates
        for k, name in enumerate(names):
            if name in _LOG_SCALE_PARAMS:
                j[:, k] *= getattr(p, name)
        return j

    x0 = _pack(initial, names)
    x, residual_norm, converged, iterations, jtj = _levenberg_marquardt(
        residual, x0, jacobian)
    fitted = _unpack(initial, names, x)

    cov = _covariance_diag(jtj, residual_norm, len(spectrum))
    cov_out = None
    if cov is not None:
        cov_out = {}
        for k, name in enumerate(names):
            scale = getattr(fitted, name) if name in _LOG_SCALE_PARAMS else 1.0
            cov_out[name] = float(cov[k] * scale ** 2)

    return FitResult(
        parameters={name: float(getattr(fitted, name)) for name in _CQED_FIELDS},
        units=dict(_CQED_UNITS),
        residual_norm=residual_norm,
        converged=converged,
        iterations=iterations,
        covariance_diag=cov_out,
    )


# ---------------------------------------------------------------------------
# DC contrast calibration

def dot_decay_from_contrast(ratio: float, coupling: float, cavity_decay: float) -> float:
    """Invert one fully detuned on/off ratio into an effective dot decay.

    r = (1 + C)^2 with C = g^2/(kappa gamma) gives C = sqrt(r) - 1 and
    gamma = g^2 / (C kappa); r = 1 means no dip at all, i.e. infinite
    broadening.
    """
    if ratio < 1.0:
        raise DomainError(f"on/off ratio must be >= 1, got {ratio}")
    c = math.sqrt(ratio) - 1.0
    if c == 0.0:
        return math.inf
    return coupling ** 2 / (c * cavity_decay)


def dc_contrast(
    elec: ElectrostaticParams,
    stark: StarkCoefficients,
    cqed: CqedParams,
    v_on: float,
    *,
    screening: float = 1.0,
    v_off: float = 0.0,
    field_sign: float = DEFAULT_FIELD_SIGN,
) -> float:
    """Model on/off ratio between two bias levels with the probe at the
    zero-bias dot frequency."""
    probe = cqed.dot_freq

    def point(v: float) -> float:
        detune = voltage_to_detuning(elec, stark, v, screening=screening,
                                     field_sign=field_sign)
        return reflectivity_at(replace(cqed, dot_freq=cqed.dot_freq + detune), probe)

    return point(v_on) / point(v_off)


def fit_contrast(
    targets: Sequence[tuple[float, float]],
    elec: ElectrostaticParams,
    stark: StarkCoefficients,
    cqed: CqedParams,
    *,
    field_sign: float = DEFAULT_FIELD_SIGN,
) -> FitResult:
    """Calibrate (dot_decay, screening) against DC on/off ratio targets.

    targets are (reverse bias V, measured on/off ratio) pairs, ratios
    taken against the zero-bias state.  The coupling and cavity decay
    stay at their cqed values throughout.  The solver scans a coarse
    deterministic grid for a starting point, then refines with the
    damped Gauss-Newton loop in (log gamma, logit s) coordinates.
    """
    if len(targets) < 2:
        raise DomainError("contrast calibration needs at least two (V, ratio) targets")
    volts = np.asarray([t[0] for t in targets], dtype=float)
    ratios = np.asarray([t[1] for t in targets], dtype=float)
    if np.any(ratios < 1.0):
        raise DomainError("on/off ratios below 1 are infeasible")
    if np.any(volts < 0.0):
        raise DomainError("bias targets must be >= 0")

    def model(gamma: float, s: float) -> np.ndarray:
        p = replace(cqed, dot_decay=gamma)
        return np.array([
            dc_contrast(elec, stark, p, v, screening=s, field_sign=field_sign)
            for v in volts
        ])

    def residual(x: np.ndarray) -> np.ndarray:
        gamma = math.exp(x[0])
        s = 1.0 / (1.0 + math.exp(-x[1]))
        return model(gamma, s) - ratios

    # Coarse scan keeps the refinement out of the wrong basin.
    gamma_grid = cqed.cavity_decay * np.geomspace(0.02, 2.0, 24)
    s_grid = np.linspace(0.02, 0.9, 18)
    best = None
    for gamma in gamma_grid:
        for s in s_grid:
            err = model(gamma, s) - ratios
            cost = float(err @ err)
            if best is None or cost < best[0]:
                best = (cost, gamma, s)
    assert best is not None
    x0 = np.array([math.log(best[1]), math.log(best[2] / (1.0 - best[2]))])

    x, residual_norm, converged, iterations, jtj = _levenberg_marquardt(residual, x0)
    gamma = math.exp(x[0])
    s = 1.0 / (1.0 + math.exp(-x[1]))

    cov = _covariance_diag(jtj, residual_norm, ratios.size)
    cov_out = None
    if cov is not None:
        # back to natural units: dgamma/dx0 = gamma, ds/dx1 = s(1-s)
        cov_out = {"dot_decay": float(cov[0] * gamma ** 2),
                   "screening": float(cov[1] * (s * (1.0 - s)) ** 2)}

    return FitResult(
        parameters={"dot_decay": gamma, "screening": s},
        units={"dot_decay": "angular GHz", "screening": "dimensionless"},
        residual_norm=residual_norm,
        converged=converged,
        iterations=iterations,
        covariance_diag=cov_out,
    )
