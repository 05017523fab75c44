"""
Sequence-level OBPV metrics: counter-attack comparison and per-team
transition profiles.
"""

from __future__ import annotations

import csv
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from ..errors import InsufficientData, InvalidArgument, InvalidFormat
from ..evaluator import OBPV, EvaluationConfig, surface_scalar
from ..data.sync import snapshot_for_event
from .stats import cohens_d, mann_whitney_u, spearman_rho


@dataclass(frozen=True)
class SequenceMetric:
    sequence_id: object
    scalars: tuple
    max_value: float
    increase: float

    @classmethod
    def from_scalars(cls, sequence_id, scalars) -> "SequenceMetric":
        scalars = tuple(float(v) for v in scalars)
        return cls(sequence_id, scalars, max(scalars), scalars[-1] - scalars[0])


@dataclass
class TeamProfile:
    team_id: object
    positive_increase: float | None = None
    negative_increase: float | None = None
    n_positive: int = 0
    n_negative: int = 0
    covariate: float | None = None

    def to_json(self) -> dict:
        return {"team_id": self.team_id, "positive_increase": self.positive_increase,
                "negative_increase": self.negative_increase, "n_positive": self.n_positive,
                "n_negative": self.n_negative, "covariate": self.covariate}


@dataclass
class EventScorer:
    """Per-event OBPV (or OBSO) scalars for synchronised events, memoised.

    Events that failed synchronisation score None.
    """

    synced: list
    config: EvaluationConfig
    kind: str = OBPV
    _by_key: dict = field(init=False, repr=False)
    _cache: dict = field(init=False, repr=False, default_factory=dict)

    def __post_init__(self):
        self._by_key = {(str(s.event.match_id), str(s.event.event_id)): s for s in self.synced}

    def score(self, event) -> float | None:
        key = (str(event.match_id), str(event.event_id))
        if key not in self._cache:
            s = self._by_key.get(key)
            self._cache[key] = None if s is None else surface_scalar(
                snapshot_for_event(s, self.config.grid.pitch), self.config, self.kind)
        return self._cache[key]

    def sequence(self, sequence_id, events, require_all=False) -> SequenceMetric | None:
        vals = [self.score(e) for e in events]
        if require_all and any(v is None for v in vals):
            return None
        vals = [v for v in vals if v is not None]
        if not vals:
            return None
        return SequenceMetric.from_scalars(sequence_id, vals)


def counter_comparison(counters, scorer: EventScorer) -> dict:
    """Compare the maximum OBPV over the first three events of successful and
    failed counter-attacks."""
    groups = {"success": [], "fail": []}
    skipped = 0
    for c in counters:
        m = scorer.sequence(c.index, c.events[:3])
        if m is None:
            skipped += 1
            continue
        groups["success" if c.success else "fail"].append(m.max_value)
    if len(groups["success"]) < 2 or len(groups["fail"]) < 2:
        raise InsufficientData(
            f"need two counters per outcome, got {len(groups['success'])} successful "
            f"and {len(groups['fail'])} failed")

    test = mann_whitney_u(groups["success"], groups["fail"])
    d = cohens_d(groups["success"], groups["fail"])
    return {
        "groups": {k: {"n": len(v), "mean": float(np.mean(v)), "median": float(np.median(v))}
                   for k, v in groups.items()},
        "U": test.U,
        "p": test.p,
        "d": d,
        "method": test.method,
        "skipped_unsynchronised": skipped,
        "scalar_mode": scorer.config.scalar_mode,
        "transition_norm": scorer.config.norm_for(scorer.kind),
    }


def read_covariates(path) -> dict:
    """CSV with header `team_id,value`."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or {"team_id", "value"} - set(reader.fieldnames):
            raise InvalidFormat(f"{path}: expected header 'team_id,value'")
        try:
            return {row["team_id"]: float(row["value"]) for row in reader}
        except (TypeError, ValueError) as exc:
            raise InvalidFormat(f"{path}: {exc}") from None


def transition_profiles(transitions, scorer: EventScorer, covariates: dict | None = None,
                        exclude=()):
    """Mean first-to-third-event OBPV increase per team.

    Positive transitions count for the gaining team; negative ones count the
    OBPV the gaining side generated, against the losing team.

    Returns (profiles sorted by team id, correlations) where correlations maps
    'positive'/'negative' to the Spearman rho between team means and the
    covariate (None without covariates, or when fewer than 3 teams qualify).
    """
    increases = defaultdict(lambda: {"positive": [], "negative": []})
    for tr in transitions:
        m = scorer.sequence((tr.match_id, tr.index), tr.events, require_all=True)
        if m is None:
            continue
        increases[str(tr.perspective_team)][tr.kind].append(m.increase)

    excluded = {str(t) for t in exclude}
    profiles = []
    for team in sorted(increases):
        inc = increases[team]
        profiles.append(TeamProfile(
            team_id=team,
            positive_increase=float(np.mean(inc["positive"])) if inc["positive"] else None,
            negative_increase=float(np.mean(inc["negative"])) if inc["negative"] else None,
            n_positive=len(inc["positive"]),
            n_negative=len(inc["negative"]),
        ))

    correlations = {"positive": None, "negative": None}
    if covariates is not None:
        cov = {str(k): float(v) for k, v in covariates.items()}
        missing = sorted(p.team_id for p in profiles if p.team_id not in cov and p.team_id not in excluded)
        if missing:
            raise InvalidArgument(f"covariate table is missing teams: {', '.join(missing)}")
        for p in profiles:
            p.covariate = cov.get(p.team_id)
        for side in correlations:
            pairs = [(getattr(p, f"{side}_increase"), p.covariate) for p in profiles
                     if p.team_id not in excluded and getattr(p, f"{side}_increase") is not None]
            if len(pairs) >= 3:
                correlations[side] = spearman_rho([a for a, _ in pairs], [b for _, b in pairs])
    return profiles, correlations
