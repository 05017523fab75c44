from __future__ import annotations

from dataclasses import dataclass

EVENT_TYPES = frozenset({
    "pass", "shot", "carry", "duel", "clearance", "interception",
    "throw_in", "goal_kick", "free_kick", "kick_off", "other",
})
SET_PIECES = frozenset({"throw_in", "goal_kick", "free_kick", "kick_off"})
FROM_COUNTER = "From Counter"


@dataclass(frozen=True)
class EventRecord:
    """One on-ball event. `location` and `pass_end` are raw pitch coordinates;
    `direction` is +1 when the acting team attacks +x in this period, -1 otherwise."""

    event_id: object
    match_id: object
    type: str
    team_id: object
    player_id: object
    timestamp: float
    location: tuple[float, float]
    pass_end: tuple[float, float] | None = None
    play_pattern: str | None = None
    possession_id: int | None = None
    period: int = 1
    direction: int = 1

    @property
    def norm_location(self) -> tuple[float, float]:
        """Location seen from the acting team, attacking +x."""
        return (self.direction * self.location[0], self.direction * self.location[1])

    @property
    def norm_pass_end(self) -> tuple[float, float] | None:
        if self.pass_end is None:
            return None
        return (self.direction * self.pass_end[0], self.direction * self.pass_end[1])

    @property
    def is_set_piece(self) -> bool:
        return self.type in SET_PIECES


@dataclass(frozen=True)
class TrackedPlayer:
    player_id: object
    team_id: object
    position: tuple[float, float]
    velocity: tuple[float, float] = (0.0, 0.0)


@dataclass(frozen=True)
class TrackingFrame:
    frame_id: int
    timestamp: float
    ball: tuple[float, float]
    players: tuple[TrackedPlayer, ...]
    match_id: object = None


@dataclass(frozen=True)
class SyncedEvent:
    event: EventRecord
    frame: TrackingFrame
    sync_error: float


@dataclass(frozen=True)
class TransitionEvent:
    """Three consecutive events by the team that just won the ball.

    `kind` is 'positive' (seen from `gaining_team`) or 'negative' (seen from
    `losing_team`); `start_location` is expressed in the perspective team's
    attacking frame. `index` points at the first of the three events in the
    list handed to the detector.
    """

    kind: str
    events: tuple[EventRecord, EventRecord, EventRecord]
    start_location: tuple[float, float]
    gaining_team: object
    losing_team: object
    index: int
    match_id: object = None

    @property
    def perspective_team(self):
        return self.gaining_team if self.kind == "positive" else self.losing_team


@dataclass(frozen=True)
class CounterAttack:
    events: tuple[EventRecord, ...]
    success: bool
    origin: tuple[float, float]
    team_id: object
    index: int
    match_id: object = None
