from .sequences import (EventScorer, SequenceMetric, TeamProfile, counter_comparison,
                        read_covariates, transition_profiles)
from .stats import MannWhitneyResult, cohens_d, mann_whitney_u, spearman_rho

__all__ = [
    "EventScorer", "SequenceMetric", "TeamProfile", "counter_comparison", "read_covariates",
    "transition_profiles", "MannWhitneyResult", "cohens_d", "mann_whitney_u", "spearman_rho",
]
