"""
Location weights: the pitch-wide field value model used by OBPV and the
distance-based score model used by the OBSO baseline.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.interpolate import RegularGridInterpolator
from scipy.special import expit

from .errors import InvalidArgument, InvalidFormat
from .geometry import GridSpec, PitchSpec


@dataclass(frozen=True)
class FieldValueParams:
    midpoint_x: float = -15.0
    scale_x: float = 30.0
    half_width: float = 34.0

    def __post_init__(self):
        if not (self.scale_x > 0 and self.half_width > 0):
            raise InvalidArgument("scale_x and half_width must be positive")


def weight_x(x, p: FieldValueParams = FieldValueParams()):
    """Longitudinal sigmoid, 0.5 at the midpoint and rising towards the opponent goal."""
    return expit((np.asarray(x, dtype=float) - p.midpoint_x) / p.scale_x)


def sigma_x(x, p: FieldValueParams = FieldValueParams()):
    """Lateral spread of the field value; widens as play approaches goal."""
    return p.half_width * (1.0 + weight_x(x, p))


def field_value_at(x, y, p: FieldValueParams = FieldValueParams()):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    sig = sigma_x(x, p)
    return np.exp(-y * y / (2.0 * sig * sig)) * weight_x(x, p)


def field_value_grid(grid: GridSpec, p: FieldValueParams = FieldValueParams()) -> np.ndarray:
    xx, yy = np.meshgrid(grid.x_centers, grid.y_centers)
    return field_value_at(xx, yy, p)


@dataclass(frozen=True)
class ScoreModel:
    """Scoring probability by location.

    variant 'analytic' uses exp(-d/gamma)**beta with d the distance to the
    opponent goal centre; variant 'grid' looks values up in a per-cell table
    (shape (ny, nx), row 0 at minimum y) with bilinear interpolation between
    cell centres.
    """

    variant: str = "analytic"
    beta: float = 1.0
    gamma: float = 15.0
    values: np.ndarray | None = None

    def __post_init__(self):
        if self.variant == "analytic":
            if not self.gamma > 0:
                raise InvalidArgument("score decay length gamma must be positive")
        elif self.variant == "grid":
            if self.values is None:
                raise InvalidArgument("grid score model needs a value table")
            v = np.asarray(self.values, dtype=float)
            if v.ndim != 2 or not np.all(np.isfinite(v)) or v.min() < 0 or v.max() > 1:
                raise InvalidFormat("score grid must be a 2-D table of values in [0, 1]")
            object.__setattr__(self, "values", v)
        else:
            raise InvalidArgument(f"unknown score model variant {self.variant!r}")

    @classmethod
    def from_csv(cls, path) -> "ScoreModel":
        return cls(variant="grid", values=read_grid_csv(path))


def score_at(r, model: ScoreModel = ScoreModel(), pitch: PitchSpec = PitchSpec(),
             grid: GridSpec | None = None):
    """Scoring probability at point(s) r, shape (..., 2)."""
    r = np.asarray(r, dtype=float)
    if model.variant == "analytic":
        d = np.hypot(r[..., 0] - pitch.half_length, r[..., 1])
        return np.exp(-d / model.gamma) ** model.beta

    grid = grid or GridSpec(pitch=pitch, nx=model.values.shape[1], ny=model.values.shape[0])
    if model.values.shape != grid.shape:
        raise InvalidFormat(f"score grid has shape {model.values.shape}, evaluation grid is {grid.shape}")
    xs, ys = grid.x_centers, grid.y_centers
    q = np.stack([np.clip(r[..., 1], ys[0], ys[-1]), np.clip(r[..., 0], xs[0], xs[-1])], axis=-1)
    interp = RegularGridInterpolator((ys, xs), model.values, method="linear")
    return interp(q)


def score_grid(grid: GridSpec, model: ScoreModel = ScoreModel()) -> np.ndarray:
    return np.asarray(score_at(grid.centers, model, grid.pitch, grid)).reshape(grid.shape)


def read_grid_csv(path) -> np.ndarray:
    """Read an ny x nx table of floats (row 0 = minimum y)."""
    rows = []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not c.strip() for c in row):
                continue
            try:
                rows.append([float(c) for c in row])
            except ValueError as exc:
                raise InvalidFormat(f"{path}:{lineno}: {exc}") from None
    if not rows or len({len(r) for r in rows}) != 1:
        raise InvalidFormat(f"{path}: expected a non-empty rectangular table")
    return np.array(rows)


def write_grid_csv(path, values) -> None:
    values = np.asarray(values, dtype=float)
    Path(path).write_text("".join(",".join(f"{v:.6g}" for v in row) + "\n" for row in values))
