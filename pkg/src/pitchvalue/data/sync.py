"""Event/tracking synchronisation and snapshot construction."""

from __future__ import annotations

import math
from collections import defaultdict

import numpy as np

from ..geometry import ATTACKING, BOUNDS_SLACK, DEFENDING, MAX_SPEED, PitchSpec, PlayerState, Snapshot
from .records import EventRecord, SyncedEvent, TrackingFrame


def _by_match(frames):
    groups = defaultdict(list)
    for f in frames:
        groups[f.match_id].append(f)
    out = {}
    for m, fs in groups.items():
        fs.sort(key=lambda f: f.timestamp)
        ball = np.array([f.ball for f in fs], dtype=float).reshape(-1, 2)
        out[m] = (np.array([f.timestamp for f in fs]), ball, fs)
    return out


def synchronize(events, frames, dt_window: float = 0.5, max_dist: float = 5.0):
    """Attach each event to the frame within +-dt_window whose ball is closest
    to the event location. Events whose best frame is further than max_dist
    from the event (or that have no frame in the window) are excluded.

    Tracking frames without a match id are matched against every event.

    Returns (synced events, number excluded).
    """
    index = _by_match(frames)
    synced, excluded = [], 0
    for e in events:
        found = next((index[k] for k in (e.match_id, str(e.match_id), None) if k in index), None)
        if found is None:
            excluded += 1
            continue
        t, ball, fs = found
        lo = np.searchsorted(t, e.timestamp - dt_window, side="left")
        hi = np.searchsorted(t, e.timestamp + dt_window, side="right")
        if hi <= lo:
            excluded += 1
            continue
        d = np.hypot(ball[lo:hi, 0] - e.location[0], ball[lo:hi, 1] - e.location[1])
        k = int(np.argmin(d))
        if d[k] <= max_dist:
            synced.append(SyncedEvent(event=e, frame=fs[lo + k], sync_error=float(d[k])))
        else:
            excluded += 1
    return synced, excluded


def snapshot_from_frame(frame: TrackingFrame, attacking_team, direction: int = 1,
                        pitch: PitchSpec = PitchSpec(), timestamp: float | None = None) -> Snapshot:
    """Build a Snapshot with `attacking_team` in possession.

    Positions are clamped to the pitch plus a small slack and speeds are
    capped, since raw tracking routinely violates both.
    """
    lim = np.array([pitch.half_length + BOUNDS_SLACK, pitch.half_width + BOUNDS_SLACK])
    players = []
    for p in frame.players:
        pos = tuple(np.clip(p.position, -lim, lim))
        vx, vy = p.velocity
        speed = math.hypot(vx, vy)
        if speed > MAX_SPEED:
            vx, vy = vx * MAX_SPEED / speed, vy * MAX_SPEED / speed
        team = ATTACKING if str(p.team_id) == str(attacking_team) else DEFENDING
        players.append(PlayerState(p.player_id, team, pos, (vx, vy)))
    return Snapshot(
        timestamp=max(0.0, frame.timestamp if timestamp is None else timestamp),
        ball=frame.ball,
        players=tuple(players),
        attack_direction="+x" if direction >= 0 else "-x",
    )


def snapshot_for_event(synced: SyncedEvent, pitch: PitchSpec = PitchSpec()) -> Snapshot:
    """Snapshot of a synchronised event with the acting team attacking."""
    e: EventRecord = synced.event
    return snapshot_from_frame(synced.frame, e.team_id, e.direction, pitch)
