"""File emission and experiment configuration.

CSV files carry a header row and full double precision (17 significant
digits) so downstream order-of-convergence checks lose nothing.  Images are
binary 16-bit PGM (P5), max-normalized, optionally log-compressed.  Configs
are flat ``key=value`` text and round-trip losslessly.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .errors import IOFailure


def _format_value(value) -> str:
    if isinstance(value, bool):
        raise TypeError("booleans have no CSV column format")
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "%.17g" % value
    return str(value)


def write_csv(path: str, header: list[str], rows) -> None:
    """Write rows of numbers under a header; floats keep 17 digits.

    Raises
    ------
    IOFailure
        On any filesystem error.
    """
    try:
        with open(path, "w", newline="\n") as handle:
            handle.write(",".join(header) + "\n")
            for row in rows:
                if len(row) != len(header):
                    raise ValueError(
                        f"row width {len(row)} does not match header width {len(header)}"
                    )
                handle.write(",".join(_format_value(v) for v in row) + "\n")
    except OSError as exc:
        raise IOFailure(f"cannot write CSV {path}: {exc}") from exc


_LOG_GAIN = 1e4


def write_pgm(matrix: np.ndarray, path: str, log_scale: bool = False) -> None:
    """Write a nonnegative 2D array as binary 16-bit PGM, max-normalized.

    Log scaling maps v to log(1 + v/v_max * 1e4)/log(1e4 + 1) before
    quantization, lifting faint structure without reordering intensities.

    Raises
    ------
    IOFailure
        On any filesystem error.
    """
    data = np.asarray(matrix, dtype=float)
    if data.ndim != 2:
        raise ValueError("PGM output needs a 2D array")
    if not np.all(np.isfinite(data)) or data.min() < 0:
        raise ValueError("PGM output needs finite nonnegative entries")
    peak = data.max()
    if peak > 0:
        scaled = data / peak
        if log_scale:
            scaled = np.log1p(scaled * _LOG_GAIN) / np.log1p(_LOG_GAIN)
        pixels = np.rint(scaled * 65535).astype(">u2")
    else:
        pixels = np.zeros(data.shape, dtype=">u2")
    height, width = data.shape
    try:
        with open(path, "wb") as handle:
            handle.write(f"P5\n{width} {height}\n65535\n".encode("ascii"))
            handle.write(pixels.tobytes())
    except OSError as exc:
        raise IOFailure(f"cannot write PGM {path}: {exc}") from exc


@dataclass
class ExperimentConfig:
    """Flat description of one CLI run; every field is a plain scalar."""

    command: str = ""
    n: int = 0
    x: int = 0
    y: int = 0
    coin: str = "hadamard"
    a: complex | None = None
    b: complex | None = None
    site: int = 0
    component: str = "R"
    cell_i: int = 0
    cell_j: int = 0
    direction: str = "E"
    t: int = 0
    t_max: int = 0
    stride: int = 1
    fractions: str = ""
    refine: bool = False
    orthogonalize: bool = False
    max_interior: int = 10
    dense_cap: int = 1600
    log_scale: bool = True
    output: str = ""
    image: str = ""


def _encode_field(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, complex):
        return repr(value)
    return str(value)


def _decode_field(text: str, field_type: str):
    if field_type == "int":
        return int(text)
    if field_type == "bool":
        if text not in ("true", "false"):
            raise ValueError(f"expected true/false, got {text!r}")
        return text == "true"
    if field_type == "complex | None":
        return complex(text) if text else None
    return text


def save_config(config: ExperimentConfig, path: str) -> None:
    """Write the config as one key=value line per field.

    Raises
    ------
    IOFailure
        On any filesystem error.
    """
    try:
        with open(path, "w", newline="\n") as handle:
            for field in dataclasses.fields(config):
                handle.write(f"{field.name}={_encode_field(getattr(config, field.name))}\n")
    except OSError as exc:
        raise IOFailure(f"cannot write config {path}: {exc}") from exc


def load_config(path: str) -> ExperimentConfig:
    """Parse a key=value config file; unknown keys are rejected.

    Raises
    ------
    IOFailure
        If the file cannot be read.
    ValueError
        On malformed lines, unknown keys, or unparseable values.
    """
    types = {f.name: f.type for f in dataclasses.fields(ExperimentConfig)}
    values = {}
    try:
        with open(path) as handle:
            lines = handle.read().splitlines()
    except OSError as exc:
        raise IOFailure(f"cannot read config {path}: {exc}") from exc
    for line in lines:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"malformed config line {line!r}")
        key, _, raw = line.partition("=")
        key = key.strip()
        if key not in types:
            raise ValueError(f"unknown config key {key!r}")
        values[key] = _decode_field(raw.strip(), types[key])
    return ExperimentConfig(**values)
