"""Pitch-wide space evaluation (OBPV) and the OBSO baseline for soccer tracking data."""

from .evaluator import (EvaluationConfig, ValueSurface, event_scalar, obpv_surface, obso_surface,
                        obso_total, surface_scalar)
from .geometry import (AreaPartition, GridSpec, PitchSpec, PlayerState, Snapshot, area_of,
                       build_grid, normalize_attack_direction)
from .ppcf import ControlParams, MotionParams, PitchControlField, ppcf_at, ppcf_field
from .transition import (GaussianTransitionParams, KernelModel, PassSample, fit_transition_kernel,
                         kde_at, silverman_bandwidth, transition_field)
from .value_models import FieldValueParams, ScoreModel, field_value_at, score_at

__version__ = "0.1.0"
