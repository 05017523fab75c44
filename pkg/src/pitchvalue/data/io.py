"""
JSON-lines readers and writers for event and tracking files.

Event files interleave header lines

    {"meta": {"match_id": ..., "period": k, "attack_direction": {team_id: "+x" | "-x"}}}

with one object per event. A header applies to the events that follow it.
Tracking lines look like

    {"frame": k, "t": s, "ball": [x, y], "players": [[player_id, team_id, x, y], ...]}

with an optional "match_id" key and optional trailing [vx, vy] per player.
"""

from __future__ import annotations

import json
import logging
from collections import defaultdict

import numpy as np

from ..errors import InvalidFormat
from ..transition import PassSample
from .records import EVENT_TYPES, EventRecord, TrackedPlayer, TrackingFrame

log = logging.getLogger(__name__)

MAX_MALFORMED_FRACTION = 0.10
# a tracking gap longer than this many nominal frame spacings splits velocity estimation
GAP_FACTOR = 3.0


class EventList(list):
    """List of EventRecord that also reports how many lines were skipped."""

    def __init__(self, items=(), malformed=0, lines=0):
        super().__init__(items)
        self.malformed = malformed
        self.lines = lines


def _point(a, b):
    return (float(a), float(b))


def _parse_event(obj, meta):
    required = ("event_id", "match_id", "type", "team_id", "player_id", "t", "x", "y")
    missing = [k for k in required if obj.get(k) is None]
    if missing:
        raise ValueError(f"missing {', '.join(missing)}")
    etype = str(obj["type"])
    if etype not in EVENT_TYPES:
        etype = "other"
    pass_end = None
    if obj.get("pass_end_x") is not None and obj.get("pass_end_y") is not None:
        pass_end = _point(obj["pass_end_x"], obj["pass_end_y"])
    if etype == "pass" and pass_end is None:
        raise ValueError("pass without end location")

    period = int(obj.get("period", meta.get("period", 1)))
    directions = meta.get("directions", {})
    if meta.get("match_id") is not None and str(meta["match_id"]) != str(obj["match_id"]):
        directions = {}
    direction = -1 if directions.get(str(obj["team_id"])) == "-x" else 1
    t = float(obj["t"])
    if not np.isfinite(t):
        raise ValueError("non-finite timestamp")
    possession = obj.get("possession_id")
    return EventRecord(
        event_id=obj["event_id"],
        match_id=obj["match_id"],
        type=etype,
        team_id=obj["team_id"],
        player_id=obj["player_id"],
        timestamp=t,
        location=_point(obj["x"], obj["y"]),
        pass_end=pass_end,
        play_pattern=obj.get("play_pattern"),
        possession_id=None if possession is None else int(possession),
        period=period,
        direction=direction,
    )


def load_events(path) -> EventList:
    """Read an events file; records come back ordered by match, period and time."""
    records, malformed, lines = [], 0, 0
    meta: dict = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            lines += 1
            try:
                obj = json.loads(line)
                if not isinstance(obj, dict):
                    raise ValueError("not an object")
                if "meta" in obj:
                    m = obj["meta"]
                    meta = {
                        "match_id": m.get("match_id"),
                        "period": int(m.get("period", 1)),
                        "directions": {str(k): v for k, v in (m.get("attack_direction") or {}).items()},
                    }
                    continue
                records.append(_parse_event(obj, meta))
            except (ValueError, TypeError, KeyError) as exc:
                malformed += 1
                log.warning("%s:%d: skipped malformed event (%s)", path, lineno, exc)

    if lines and malformed > MAX_MALFORMED_FRACTION * lines:
        raise InvalidFormat(f"{path}: {malformed} of {lines} lines are malformed")

    match_order = {}
    for r in records:
        match_order.setdefault(r.match_id, len(match_order))
    keyed = sorted(enumerate(records), key=lambda ir: (match_order[ir[1].match_id], ir[1].period,
                                                       ir[1].timestamp, ir[0]))
    return EventList((r for _, r in keyed), malformed=malformed, lines=lines)


def write_events(path, events, headers=()) -> None:
    """Write events (and leading meta headers per match/period) as JSON lines.

    `headers` is an iterable of (match_id, period, {team_id: '+x'|'-x'}); each
    header is written just before the first event of its match and period.
    """
    pending = {(str(m), p): d for m, p, d in headers}
    with open(path, "w") as fh:
        for e in events:
            key = (str(e.match_id), e.period)
            if key in pending:
                meta = {"match_id": e.match_id, "period": e.period,
                        "attack_direction": {str(k): v for k, v in pending.pop(key).items()}}
                fh.write(json.dumps({"meta": meta}) + "\n")
            obj = {"event_id": e.event_id, "match_id": e.match_id, "type": e.type,
                   "team_id": e.team_id, "player_id": e.player_id, "t": e.timestamp,
                   "x": e.location[0], "y": e.location[1]}
            if e.pass_end is not None:
                obj["pass_end_x"], obj["pass_end_y"] = e.pass_end
            if e.play_pattern is not None:
                obj["play_pattern"] = e.play_pattern
            if e.possession_id is not None:
                obj["possession_id"] = e.possession_id
            fh.write(json.dumps(obj) + "\n")


def _parse_frame(obj):
    ball = obj["ball"]
    players = []
    has_velocity = True
    for row in obj["players"]:
        if len(row) not in (4, 6):
            raise ValueError("player entries need 4 or 6 fields")
        vel = (float(row[4]), float(row[5])) if len(row) == 6 else (0.0, 0.0)
        has_velocity &= len(row) == 6
        players.append(TrackedPlayer(row[0], row[1], _point(row[2], row[3]), vel))
    frame = TrackingFrame(frame_id=int(obj["frame"]), timestamp=float(obj["t"]),
                          ball=_point(ball[0], ball[1]), players=tuple(players),
                          match_id=obj.get("match_id"))
    return frame, has_velocity


def derive_velocities(frames: list[TrackingFrame]) -> list[TrackingFrame]:
    """Fill player velocities of one match by central differences over +-1 frame.

    Frames are split into segments wherever the time step exceeds
    GAP_FACTOR times the median step; segment ends use one-sided differences
    and a player seen in a single frame of a segment gets zero velocity.
    """
    if len(frames) < 2:
        return [TrackingFrame(f.frame_id, f.timestamp, f.ball,
                              tuple(TrackedPlayer(p.player_id, p.team_id, p.position) for p in f.players),
                              f.match_id) for f in frames]
    t = np.array([f.timestamp for f in frames])
    steps = np.diff(t)
    nominal = np.median(steps[steps > 0]) if np.any(steps > 0) else 0.1
    segment = np.concatenate([[0], np.cumsum(steps > GAP_FACTOR * nominal)])

    lookup = [{p.player_id: p.position for p in f.players} for f in frames]
    out = []
    for k, f in enumerate(frames):
        prev_ok = k > 0 and segment[k - 1] == segment[k] and t[k - 1] < t[k]
        next_ok = k + 1 < len(frames) and segment[k + 1] == segment[k] and t[k + 1] > t[k]
        players = []
        for p in f.players:
            a = lookup[k - 1].get(p.player_id) if prev_ok else None
            b = lookup[k + 1].get(p.player_id) if next_ok else None
            if a is not None and b is not None:
                dt, lo, hi = t[k + 1] - t[k - 1], a, b
            elif b is not None:
                dt, lo, hi = t[k + 1] - t[k], p.position, b
            elif a is not None:
                dt, lo, hi = t[k] - t[k - 1], a, p.position
            else:
                dt = None
            vel = (0.0, 0.0) if dt is None else ((hi[0] - lo[0]) / dt, (hi[1] - lo[1]) / dt)
            players.append(TrackedPlayer(p.player_id, p.team_id, p.position, vel))
        out.append(TrackingFrame(f.frame_id, f.timestamp, f.ball, tuple(players), f.match_id))
    return out


def load_tracking(path) -> list[TrackingFrame]:
    """Read a tracking file; frames are sorted by match then time, velocities
    are derived where the file does not carry them."""
    by_match = defaultdict(list)
    has_velocity = defaultdict(lambda: True)
    malformed = lines = 0
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            lines += 1
            try:
                frame, vel = _parse_frame(json.loads(line))
            except (ValueError, TypeError, KeyError, IndexError) as exc:
                malformed += 1
                log.warning("%s:%d: skipped malformed frame (%s)", path, lineno, exc)
                continue
            by_match[frame.match_id].append(frame)
            has_velocity[frame.match_id] &= vel
    if lines and malformed > MAX_MALFORMED_FRACTION * lines:
        raise InvalidFormat(f"{path}: {malformed} of {lines} lines are malformed")

    out = []
    for match_id, frames in by_match.items():
        frames.sort(key=lambda f: (f.timestamp, f.frame_id))
        out.extend(frames if has_velocity[match_id] else derive_velocities(frames))
    return out


def write_tracking(path, frames, with_velocity=False) -> None:
    with open(path, "w") as fh:
        for f in frames:
            fh.write(frame_to_json(f, with_velocity) + "\n")


def frame_to_json(f: TrackingFrame, with_velocity=False) -> str:
    rows = []
    for p in f.players:
        row = [p.player_id, p.team_id, p.position[0], p.position[1]]
        if with_velocity:
            row += [p.velocity[0], p.velocity[1]]
        rows.append(row)
    obj = {"frame": f.frame_id, "t": f.timestamp, "ball": list(f.ball), "players": rows}
    if f.match_id is not None:
        obj["match_id"] = f.match_id
    return json.dumps(obj)


def passes_from_events(events) -> list[PassSample]:
    """Completed-pass samples in the passer's attacking frame (towards +x)."""
    return [PassSample(e.norm_location, e.norm_pass_end) for e in events
            if e.type == "pass" and e.pass_end is not None]
