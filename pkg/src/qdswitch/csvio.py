"""CSV emission and ingestion.

Files are UTF-8, comma separated, newline terminated, always with a
header row.  Floats are serialized with Python's shortest round-trip
representation, so emit-then-ingest recovers values exactly; output is
byte-identical across reruns of the same configuration.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .constants import SPEED_OF_LIGHT_NM_NS
from .cqed import Spectrum
from .errors import DomainError, IngestError
from .fitting import ShiftDataset

TWO_PI = 2.0 * np.pi

SPECTRUM_WAVELENGTH_HEADER = "wavelength_nm"
SPECTRUM_DETUNING_HEADER = "detuning_GHz"


def format_value(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_csv(path: Path | str, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    """Write rows under a mandatory header; returns the path."""
    if not header:
        raise DomainError("CSV header must not be empty")
    path = Path(path)
    lines = [",".join(header)]
    for row in rows:
        if len(row) != len(header):
            raise DomainError("CSV row width differs from header")
        lines.append(",".join(format_value(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def _read_rows(path: Path | str, expected_columns: int) -> tuple[list[str], list[list[float]]]:
    path = Path(path)
    if not path.is_file():
        raise IngestError(f"data file not found: {path}")
    text = path.read_text(encoding="utf-8")
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise IngestError(f"{path}: empty file")
    header = [h.strip() for h in lines[0].split(",")]
    if len(header) != expected_columns:
        raise IngestError(
            f"{path}: expected {expected_columns} columns, header has {len(header)}")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != expected_columns:
            raise IngestError(f"{path}:{lineno}: expected {expected_columns} values")
        try:
            rows.append([float(p) for p in parts])
        except ValueError as exc:
            raise IngestError(f"{path}:{lineno}: non-numeric value") from exc
    if not rows:
        raise IngestError(f"{path}: no data rows")
    return header, rows


def ingest_spectrum_csv(path: Path | str, reference_wavelength_nm: float = 935.0) -> Spectrum:
    """Read a two-column spectrum file into a sorted, deduplicated Spectrum.

    The first header name declares the mode: 'wavelength_nm' values are
    converted to detunings about the reference via dnu = -c dlambda /
    lambda0^2; 'detuning_GHz' values are ordinary GHz.  Duplicate grid
    points must agree in intensity, otherwise the file is rejected.
    """
    header, rows = _read_rows(path, 2)
    mode = header[0]
    if mode not in (SPECTRUM_WAVELENGTH_HEADER, SPECTRUM_DETUNING_HEADER):
        raise IngestError(
            f"{path}: first column must be '{SPECTRUM_WAVELENGTH_HEADER}' or "
            f"'{SPECTRUM_DETUNING_HEADER}', got '{mode}'")
    x = np.array([r[0] for r in rows])
    y = np.array([r[1] for r in rows])
    if np.any(y < 0.0):
        bad = int(np.argmax(y < 0.0)) + 2
        raise IngestError(f"{path}:{bad}: negative intensity")

    if mode == SPECTRUM_WAVELENGTH_HEADER:
        dlam = x - reference_wavelength_nm
        x = -SPEED_OF_LIGHT_NM_NS * dlam / reference_wavelength_nm ** 2  # ordinary GHz
    x = TWO_PI * x  # angular GHz

    order = np.argsort(x, kind="stable")
    x, y = x[order], y[order]
    keep_x, keep_y = [x[0]], [y[0]]
    for xi, yi in zip(x[1:], y[1:]):
        if xi == keep_x[-1] or abs(xi - keep_x[-1]) <= 1e-12 * max(abs(xi), 1.0):
            if abs(yi - keep_y[-1]) > 1e-9 * max(abs(yi), abs(keep_y[-1]), 1.0):
                raise IngestError(
                    f"{path}: conflicting intensities for duplicated grid point")
            continue
        keep_x.append(xi)
        keep_y.append(yi)
    try:
        return Spectrum(np.array(keep_x), np.array(keep_y))
    except DomainError as exc:
        raise IngestError(f"{path}: {exc}") from exc


def ingest_shift_csv(path: Path | str) -> ShiftDataset:
    """Read (voltage_V, shift_meV) rows into a ShiftDataset."""
    header, rows = _read_rows(path, 2)
    if header[0] != "voltage_V" or header[1] != "shift_meV":
        raise IngestError(f"{path}: expected header 'voltage_V,shift_meV'")
    try:
        return ShiftDataset(np.array([r[0] for r in rows]),
                            np.array([r[1] for r in rows]))
    except DomainError as exc:
        raise IngestError(f"{path}: {exc}") from exc
