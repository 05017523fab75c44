"""
Where does the next on-ball event happen?

Two models are provided:

* a fixed isotropic Gaussian around the ball (the OBSO transition model
  with the PPCF exponent set to zero), and
* a per-area kernel density estimate fitted to pass end points, with a
  doubled Silverman bandwidth (the OBPV transition kernel model).

Kernel densities are bivariate isotropic Gaussians sharing one bandwidth h:

    f(p) = 1 / (n h^2) * sum_i K((p - p_i) / h),   K(u) = exp(-|u|^2 / 2) / (2 pi)
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DegenerateData, DegenerateField, InsufficientData, InvalidArgument, InvalidFormat
from .geometry import AreaPartition, GridSpec, PitchSpec, area_of

KERNEL_MODEL_VERSION = 1
MIN_AREA_SAMPLES = 50


@dataclass(frozen=True)
class PassSample:
    """Pass start and end in attack-normalised coordinates."""

    start: tuple[float, float]
    end: tuple[float, float]

    def mirrored(self) -> "PassSample":
        return PassSample((self.start[0], -self.start[1]), (self.end[0], -self.end[1]))


@dataclass(frozen=True)
class GaussianTransitionParams:
    sigma: float = 14.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise InvalidArgument("sigma must be positive")


def silverman_bandwidth(samples) -> float:
    """Doubled Silverman rule: (3n/4)^(-1/5) * sqrt(var) * 2.

    `var` is the mean of the unbiased per-axis variances of the points.
    """
    pts = np.asarray(samples, dtype=float).reshape(-1, 2)
    n = len(pts)
    if n < 2:
        raise InsufficientData(f"bandwidth needs at least 2 samples, got {n}")
    var = 0.5 * (pts[:, 0].var(ddof=1) + pts[:, 1].var(ddof=1))
    if not var > 0:
        raise DegenerateData("samples have zero variance")
    return (0.75 * n) ** -0.2 * math.sqrt(var) * 2.0


@dataclass(frozen=True)
class AreaKernel:
    samples: np.ndarray
    h: float | None
    fitted: bool

    @property
    def n(self) -> int:
        return len(self.samples)

    def density(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        out = np.empty(len(pts))
        norm = 1.0 / (2.0 * math.pi * self.n * self.h ** 2)
        step = max(1, 2_000_000 // max(self.n, 1))
        for a in range(0, len(pts), step):
            q = pts[a:a + step]
            d2 = ((q[:, None, :] - self.samples[None, :, :]) ** 2).sum(-1)
            out[a:a + step] = np.exp(-0.5 * d2 / self.h ** 2).sum(axis=1) * norm
        return out

    def density_grid(self, grid: GridSpec) -> np.ndarray:
        # the Gaussian is separable, so the grid evaluation is one matrix product
        gx = np.exp(-0.5 * ((grid.x_centers[:, None] - self.samples[None, :, 0]) / self.h) ** 2)
        gy = np.exp(-0.5 * ((grid.y_centers[:, None] - self.samples[None, :, 1]) / self.h) ** 2)
        return (gy @ gx.T) / (2.0 * math.pi * self.n * self.h ** 2)


@dataclass
class KernelModel:
    """Per-area pass end-point densities.

    Areas with fewer than `min_samples` (post-mirroring) samples, or with
    degenerate samples, answer with the pooled kernel fitted on every pass.
    """

    areas: dict
    pooled: AreaKernel
    partition: AreaPartition = field(default_factory=AreaPartition)
    pitch: PitchSpec = field(default_factory=PitchSpec)
    min_samples: int = MIN_AREA_SAMPLES
    mirrored: bool = True
    _grid_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def kernel_for(self, area: int) -> AreaKernel:
        if not (isinstance(area, (int, np.integer)) and 1 <= area <= self.partition.n_areas):
            raise InvalidArgument(f"unknown area id {area!r}")
        k = self.areas.get(int(area))
        if k is None or not k.fitted:
            return self.pooled
        return k

    def counts(self) -> dict:
        """Post-mirroring sample count of every area (0 when empty)."""
        return {a: (self.areas[a].n if a in self.areas else 0)
                for a in range(1, self.partition.n_areas + 1)}

    def density_grid(self, area: int, grid: GridSpec) -> np.ndarray:
        key = (id(self.kernel_for(area)), grid)
        if key not in self._grid_cache:
            self._grid_cache[key] = self.kernel_for(area).density_grid(grid)
        return self._grid_cache[key]

    def to_json(self) -> dict:
        def enc(k: AreaKernel):
            return {"n": k.n, "h": k.h, "fitted": k.fitted, "samples": k.samples.tolist()}

        return {
            "kernel_model_version": KERNEL_MODEL_VERSION,
            "pitch": {"length": self.pitch.length, "width": self.pitch.width},
            "partition": {"columns": self.partition.columns, "rows": self.partition.rows},
            "min_samples": self.min_samples,
            "mirrored": self.mirrored,
            "areas": {str(a): enc(k) for a, k in sorted(self.areas.items())},
            "pooled": enc(self.pooled),
        }

    @classmethod
    def from_json(cls, doc: dict) -> "KernelModel":
        if doc.get("kernel_model_version") != KERNEL_MODEL_VERSION:
            raise InvalidFormat(f"unsupported kernel_model_version {doc.get('kernel_model_version')!r}")

        def dec(d):
            samples = np.asarray(d["samples"], dtype=float).reshape(-1, 2)
            if len(samples) != d["n"]:
                raise InvalidFormat("kernel sample count does not match n")
            return AreaKernel(samples=samples, h=d["h"], fitted=bool(d["fitted"]))

        try:
            return cls(
                areas={int(a): dec(d) for a, d in doc["areas"].items()},
                pooled=dec(doc["pooled"]),
                partition=AreaPartition(**doc.get("partition", {})),
                pitch=PitchSpec(**doc.get("pitch", {})),
                min_samples=int(doc["min_samples"]),
                mirrored=bool(doc["mirrored"]),
            )
        except (KeyError, TypeError) as exc:
            raise InvalidFormat(f"malformed kernel model: {exc}") from None

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json()))

    @classmethod
    def load(cls, path) -> "KernelModel":
        try:
            doc = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise InvalidFormat(f"{path}: {exc}") from None
        return cls.from_json(doc)


def _area_kernel(ends: np.ndarray, min_samples: int) -> AreaKernel:
    try:
        h = silverman_bandwidth(ends)
    except (InsufficientData, DegenerateData):
        return AreaKernel(samples=ends, h=None, fitted=False)
    return AreaKernel(samples=ends, h=h, fitted=len(ends) >= min_samples)


def fit_transition_kernel(passes, part: AreaPartition | None = None, mirror: bool = True,
                          pitch: PitchSpec | None = None,
                          min_samples: int = MIN_AREA_SAMPLES) -> KernelModel:
    part = part or AreaPartition()
    pitch = pitch or PitchSpec()
    passes = list(passes)
    if not passes:
        raise InsufficientData("no passes to fit")
    if mirror:
        passes = passes + [p.mirrored() for p in passes]

    starts = pitch.clamp(np.array([p.start for p in passes], dtype=float))
    ends = pitch.clamp(np.array([p.end for p in passes], dtype=float))
    areas = area_of(starts, part, pitch)

    per_area = {int(a): _area_kernel(ends[areas == a], min_samples) for a in np.unique(areas)}
    pooled = _area_kernel(ends, 0)
    if pooled.h is None:
        raise DegenerateData("pass end points have zero spread")
    return KernelModel(areas=per_area, pooled=pooled, partition=part, pitch=pitch,
                       min_samples=min_samples, mirrored=mirror)


def kde_at(model: KernelModel, area: int, p):
    """Kernel density of the given area's model at point(s) p, in 1/m^2."""
    out = model.kernel_for(area).density(p)
    return float(out[0]) if np.ndim(p) == 1 else out


def gaussian_transition_at(ball, r, p: GaussianTransitionParams = GaussianTransitionParams()):
    """Unnormalised Gaussian weight, 1 at the ball."""
    r = np.asarray(r, dtype=float)
    d2 = ((r - np.asarray(ball, dtype=float)) ** 2).sum(axis=-1)
    return np.exp(-d2 / (2.0 * p.sigma ** 2))


def transition_field(source, ball, grid: GridSpec, part: AreaPartition | None = None,
                     norm: str = "max") -> np.ndarray:
    """Per-cell transition weights, shape (ny, nx).

    `source` is a fitted KernelModel (density of the ball's area) or a
    GaussianTransitionParams. `norm` is 'max' (peak cell = 1) or 'sum'
    (cells sum to 1).
    """
    if norm not in ("max", "sum"):
        raise InvalidArgument(f"norm must be 'max' or 'sum', got {norm!r}")
    if isinstance(source, KernelModel):
        area = area_of(ball, part or source.partition, grid.pitch)
        raw = source.density_grid(area, grid)
    elif isinstance(source, GaussianTransitionParams):
        raw = gaussian_transition_at(ball, grid.centers, source).reshape(grid.shape)
    else:
        raise InvalidArgument(f"unsupported transition source {type(source).__name__}")

    scale = raw.max() if norm == "max" else raw.sum()
    if not scale > 0:
        raise DegenerateField("transition field is zero everywhere")
    return raw / scale
