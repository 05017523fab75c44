"""
Transition and counter-attack detection on event sequences.

A transition is a change of possession followed by three consecutive events
of the new team, none of them a set piece. Each one is reported twice: as a
positive transition for the gaining team and a negative one for the losing
team.
"""

from __future__ import annotations

import math

from ..errors import InvalidArgument
from ..geometry import PitchSpec
from .records import FROM_COUNTER, CounterAttack, TransitionEvent

YARDS_18 = 16.46  # 18 yd
MIN_DIRECTNESS = 0.75


def _same(a, b):
    return str(a) == str(b)


def detect_transitions(events) -> list[TransitionEvent]:
    events = list(events)
    out = []
    for k in range(len(events) - 3):
        before, e1, e2, e3 = events[k:k + 4]
        if not (_same(before.match_id, e1.match_id) and _same(e1.match_id, e3.match_id)
                and _same(e1.match_id, e2.match_id)):
            continue
        if _same(before.team_id, e1.team_id):
            continue
        if not (_same(e1.team_id, e2.team_id) and _same(e1.team_id, e3.team_id)):
            continue
        if e1.is_set_piece or e2.is_set_piece or e3.is_set_piece:
            continue
        trio = (e1, e2, e3)
        gain_loc = e1.norm_location
        out.append(TransitionEvent("positive", trio, gain_loc, e1.team_id, before.team_id,
                                   k + 1, e1.match_id))
        out.append(TransitionEvent("negative", trio, (-gain_loc[0], -gain_loc[1]),
                                   e1.team_id, before.team_id, k + 1, e1.match_id))
    return out


def filter_transitions_by_distance(transitions, radius: float = 35.0, reference: str | None = None,
                                   metric: str = "euclidean", pitch: PitchSpec = PitchSpec()):
    """Keep transitions that start within `radius` of a goal.

    By default positive transitions are measured from the gaining team's own
    goal and negative ones from the losing team's target goal. `reference`
    ('own_goal' or 'opp_goal') overrides that for both kinds, always relative
    to the perspective team. `metric` 'x_only' uses the distance along x.
    """
    if reference not in (None, "own_goal", "opp_goal"):
        raise InvalidArgument(f"unknown reference {reference!r}")
    if metric not in ("euclidean", "x_only"):
        raise InvalidArgument(f"unknown distance metric {metric!r}")
    kept = []
    for tr in transitions:
        ref = reference or ("own_goal" if tr.kind == "positive" else "opp_goal")
        gx = -pitch.half_length if ref == "own_goal" else pitch.half_length
        x, y = tr.start_location
        d = abs(x - gx) if metric == "x_only" else math.hypot(x - gx, y)
        if d <= radius:
            kept.append(tr)
    return kept


def possession_runs(events):
    """Maximal runs of consecutive same-team events within a match, as (start, stop) slices."""
    events = list(events)
    runs, start = [], 0
    for k in range(1, len(events) + 1):
        if (k == len(events) or not _same(events[k].team_id, events[start].team_id)
                or not _same(events[k].match_id, events[start].match_id)):
            runs.append((start, k))
            start = k
    return runs


def directness(locations) -> tuple[float, float]:
    """(goal-ward x gain, gain / travelled path length) over consecutive points."""
    path = sum(math.dist(a, b) for a, b in zip(locations, locations[1:]))
    gain = locations[-1][0] - locations[0][0]
    return gain, (gain / path if path > 0 else 0.0)


def detect_counters(events, mode: str = "label", pitch: PitchSpec = PitchSpec(),
                    final_third: str = "attacking") -> list[CounterAttack]:
    """Counter-attacks of at least three events.

    mode 'label': maximal same-team runs whose events all carry the
    'From Counter' play pattern.
    mode 'rule': possessions opened by an open-play transition (see
    detect_transitions) that start outside the team's final third
    (`final_third`='attacking'; 'defending' reads it as the own third),
    are at least 75% direct and gain at least 18 yards towards goal.
    """
    events = list(events)
    out = []
    if mode == "label":
        if events and all(e.play_pattern is None for e in events):
            raise InvalidArgument("label mode needs play_pattern annotations")
        start = 0
        for k in range(1, len(events) + 1):
            if k < len(events) and _run_continues(events[start], events[k - 1], events[k]):
                continue
            run = events[start:k]
            if len(run) >= 3 and run[0].play_pattern == FROM_COUNTER:
                out.append(_counter(run, start))
            start = k
        return out

    if mode != "rule":
        raise InvalidArgument(f"unknown counter mode {mode!r}")
    if final_third not in ("attacking", "defending"):
        raise InvalidArgument(f"unknown final_third reading {final_third!r}")
    third = pitch.length / 3.0
    starts = {tr.index for tr in detect_transitions(events) if tr.kind == "positive"}
    for a, b in possession_runs(events):
        if a not in starts:
            continue
        run = events[a:b]
        locs = [e.norm_location for e in run]
        x0 = locs[0][0]
        outside = x0 < pitch.half_length - third if final_third == "attacking" else x0 > -pitch.half_length + third
        gain, direct = directness(locs)
        if outside and direct >= MIN_DIRECTNESS and gain >= YARDS_18:
            out.append(_counter(run, a))
    return out


def _run_continues(first, prev, e):
    if not (_same(e.team_id, prev.team_id) and _same(e.match_id, prev.match_id)):
        return False
    if e.play_pattern != first.play_pattern:
        return False
    if first.possession_id is not None and e.possession_id is not None:
        return e.possession_id == first.possession_id
    return True


def _counter(run, index):
    return CounterAttack(events=tuple(run), success=run[-1].type == "shot",
                         origin=run[0].norm_location, team_id=run[0].team_id,
                         index=index, match_id=run[0].match_id)
