"""Heatmap export of value surfaces: CSV tables and plain PPM (P3) images."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import InvalidFormat
from .value_models import write_grid_csv

# black -> red -> yellow -> white
_RAMP_AT = np.array([0.0, 1 / 3, 2 / 3, 1.0])
_RAMP_RGB = np.array([[0, 0, 0], [255, 0, 0], [255, 255, 0], [255, 255, 255]], dtype=float)


def _values(surface) -> np.ndarray:
    values = np.asarray(getattr(surface, "values", surface), dtype=float)
    if values.ndim != 2:
        raise InvalidFormat("heatmap needs a 2-D table")
    if not np.all(np.isfinite(values)):
        raise InvalidFormat("surface has non-finite values")
    return values


def write_heatmap_csv(path, surface) -> None:
    """ny rows x nx columns, row 0 = minimum y, 6 significant digits."""
    write_grid_csv(path, _values(surface))


def color_map(values, vmax: float | None = None) -> np.ndarray:
    """Map values to uint8 RGB with a linear scale on [0, vmax]; vmax defaults
    to the largest value. Zero (and an all-zero table) maps to black."""
    values = _values(values)
    top = float(values.max()) if vmax is None else float(vmax)
    if top > 0:
        u = np.clip(values / top, 0.0, 1.0)
    else:
        u = np.zeros_like(values)
    rgb = np.stack([np.interp(u, _RAMP_AT, _RAMP_RGB[:, c]) for c in range(3)], axis=-1)
    return np.rint(rgb).astype(np.uint8)


def write_heatmap_ppm(path, surface, vmax: float | None = None) -> None:
    """ASCII P3 image, one pixel per cell. The top image row is the maximum-y
    row of the grid, so the picture reads like a pitch plot."""
    rgb = color_map(surface, vmax)[::-1]
    ny, nx, _ = rgb.shape
    lines = ["P3", f"{nx} {ny}", "255"]
    lines += [" ".join(str(int(c)) for c in row.ravel()) for row in rgb]
    Path(path).write_text("\n".join(lines) + "\n")


def read_ppm(path) -> np.ndarray:
    """Read a P3 image back as (rows, cols, 3) uint8, top row first."""
    tokens = []
    for line in Path(path).read_text().splitlines():
        tokens += line.split("#", 1)[0].split()
    if not tokens or tokens[0] != "P3":
        raise InvalidFormat(f"{path}: not a P3 image")
    nx, ny, _ = (int(t) for t in tokens[1:4])
    data = np.array(tokens[4:], dtype=int)
    if data.size != nx * ny * 3:
        raise InvalidFormat(f"{path}: pixel count does not match the header")
    return data.reshape(ny, nx, 3).astype(np.uint8)
