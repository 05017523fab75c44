"""
OBSO and OBPV surfaces.

    OBSO_r = score(r) * PPCF_att(r) * T(r)
    OBPV_r = w_field(r) * PPCF_att(r) * TK(r)

T is the Gaussian transition model and TK the per-area kernel model by
default; both can be swapped through EvaluationConfig.transition_source.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgument
from .geometry import AreaPartition, GridSpec, Snapshot, normalize_attack_direction
from .ppcf import ControlParams, MotionParams, ppcf_cells, ppcf_field
from .transition import GaussianTransitionParams, KernelModel, transition_field
from .value_models import FieldValueParams, ScoreModel, field_value_grid, score_grid

OBSO = "OBSO"
OBPV = "OBPV"

_DEFAULT_SOURCE = {OBSO: "gaussian", OBPV: "kernel"}
_DEFAULT_NORM = {OBSO: "sum", OBPV: "max"}


@dataclass
class EvaluationConfig:
    """Everything needed to turn a snapshot into a surface.

    `transition_source` and `transition_norm` left as None pick the
    per-surface defaults: Gaussian + sum normalisation for OBSO, kernel +
    max normalisation for OBPV.
    """

    grid: GridSpec = field(default_factory=GridSpec)
    motion: MotionParams = field(default_factory=MotionParams)
    control: ControlParams = field(default_factory=ControlParams)
    field_value: FieldValueParams = field(default_factory=FieldValueParams)
    score: ScoreModel = field(default_factory=ScoreModel)
    gaussian: GaussianTransitionParams = field(default_factory=GaussianTransitionParams)
    kernel: KernelModel | None = None
    partition: AreaPartition = field(default_factory=AreaPartition)
    transition_source: str | None = None
    transition_norm: str | None = None
    scalar_mode: str = "grid_max"

    def __post_init__(self):
        if self.transition_source not in (None, "kernel", "gaussian"):
            raise InvalidArgument(f"unknown transition source {self.transition_source!r}")
        if self.transition_norm not in (None, "max", "sum"):
            raise InvalidArgument(f"unknown transition norm {self.transition_norm!r}")
        if self.scalar_mode not in ("grid_max", "player_max"):
            raise InvalidArgument(f"unknown scalar mode {self.scalar_mode!r}")

    def source_for(self, kind: str) -> str:
        return self.transition_source or _DEFAULT_SOURCE[kind]

    def norm_for(self, kind: str) -> str:
        return self.transition_norm or _DEFAULT_NORM[kind]


@dataclass(frozen=True)
class ValueSurface:
    grid: GridSpec
    values: np.ndarray
    kind: str
    timestamp: float
    transition_source: str = ""
    transition_norm: str = ""

    @property
    def max(self) -> float:
        return float(self.values.max())


def transition_weights(s: Snapshot, cfg: EvaluationConfig, kind: str) -> np.ndarray:
    source = cfg.source_for(kind)
    if source == "kernel":
        if cfg.kernel is None:
            raise InvalidArgument("kernel transition requested but no kernel model is loaded")
        model = cfg.kernel
    else:
        model = cfg.gaussian
    return transition_field(model, s.ball, cfg.grid, cfg.partition, cfg.norm_for(kind))


def _surface(s: Snapshot, cfg: EvaluationConfig, kind: str, weight: np.ndarray, pc=None) -> ValueSurface:
    s = normalize_attack_direction(s)
    if pc is None:
        pc = ppcf_field(s, cfg.grid, cfg.motion, cfg.control).attack
    values = weight * pc * transition_weights(s, cfg, kind)
    return ValueSurface(grid=cfg.grid, values=values, kind=kind, timestamp=s.timestamp,
                        transition_source=cfg.source_for(kind), transition_norm=cfg.norm_for(kind))


def obso_surface(s: Snapshot, cfg: EvaluationConfig, pc=None) -> ValueSurface:
    """OBSO per cell. `pc` may carry a precomputed attacking PPCF grid."""
    return _surface(s, cfg, OBSO, score_grid(cfg.grid, cfg.score), pc)


def obpv_surface(s: Snapshot, cfg: EvaluationConfig, pc=None) -> ValueSurface:
    return _surface(s, cfg, OBPV, field_value_grid(cfg.grid, cfg.field_value), pc)


def event_scalar(surface: ValueSurface, s: Snapshot, mode: str = "grid_max") -> float:
    """Reduce a surface to one number: the grid maximum, or the maximum over
    the cells occupied by attacking players."""
    if surface.timestamp != s.timestamp:
        raise InvalidArgument("surface and snapshot timestamps differ")
    if mode == "grid_max":
        return surface.max
    if mode != "player_max":
        raise InvalidArgument(f"unknown scalar mode {mode!r}")
    s = normalize_attack_direction(s)
    attackers = s.attackers
    if not attackers:
        raise InvalidArgument("player_max needs at least one attacking player")
    return max(float(surface.values[surface.grid.cell_of(p.position)]) for p in attackers)


def obso_total(surface: ValueSurface) -> float:
    if surface.kind != OBSO or surface.transition_norm != "sum":
        raise InvalidArgument("obso_total needs an OBSO surface with a sum-normalised transition")
    return float(surface.values.sum())


def surface_scalar(s: Snapshot, cfg: EvaluationConfig, kind: str = OBPV, mode: str | None = None,
                   chunk: int = 48) -> float:
    """event_scalar(surface(s), s, mode) without integrating every cell.

    PPCF is at most 1, so weight * transition bounds each cell. Cells are
    integrated in decreasing order of that bound until no remaining cell can
    beat the best value found; the result equals the full-surface scalar.
    """
    mode = mode or cfg.scalar_mode
    s = normalize_attack_direction(s)
    weight = score_grid(cfg.grid, cfg.score) if kind == OBSO else field_value_grid(cfg.grid, cfg.field_value)
    bound = (weight * transition_weights(s, cfg, kind)).ravel()
    centers = cfg.grid.centers

    if mode == "player_max":
        if not s.attackers:
            raise InvalidArgument("player_max needs at least one attacking player")
        cells = sorted({np.ravel_multi_index(cfg.grid.cell_of(p.position), cfg.grid.shape)
                        for p in s.attackers})
        att, _ = ppcf_cells(s, centers[cells], cfg.motion, cfg.control)
        return float((bound[cells] * att).max())
    if mode != "grid_max":
        raise InvalidArgument(f"unknown scalar mode {mode!r}")

    order = np.argsort(-bound, kind="stable")
    best = 0.0
    for a in range(0, len(order), chunk):
        idx = order[a:a + chunk]
        if bound[idx[0]] <= best:
            break
        att, _ = ppcf_cells(s, centers[idx], cfg.motion, cfg.control)
        best = max(best, float((bound[idx] * att).max()))
    return best
