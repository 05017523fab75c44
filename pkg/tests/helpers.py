"""Shared fixtures for the test suite: snapshot builders, a fitted kernel and
the hand-built detection log."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from pitchvalue import PassSample, PlayerState, Snapshot, fit_transition_kernel
from pitchvalue.data.records import EventRecord
from pitchvalue.data.synthetic import default_mixtures, sample_mixture
from pitchvalue.geometry import ATTACKING, DEFENDING, AreaPartition, PitchSpec

PITCH = PitchSpec()


def make_snapshot(att, dfd, ball=(0.0, 0.0), att_vel=None, def_vel=None, t=0.0, direction="+x"):
    att = np.asarray(att, dtype=float).reshape(-1, 2)
    dfd = np.asarray(dfd, dtype=float).reshape(-1, 2)
    av = np.zeros_like(att) if att_vel is None else np.asarray(att_vel, dtype=float).reshape(-1, 2)
    dv = np.zeros_like(dfd) if def_vel is None else np.asarray(def_vel, dtype=float).reshape(-1, 2)
    players = [PlayerState(f"a{i}", ATTACKING, p, v) for i, (p, v) in enumerate(zip(att, av))]
    players += [PlayerState(f"d{i}", DEFENDING, p, v) for i, (p, v) in enumerate(zip(dfd, dv))]
    return Snapshot(t, ball, players, direction)


def random_snapshot(rng, n_att=11, n_def=11, max_speed=7.0, direction="+x"):
    lim = np.array([PITCH.half_length, PITCH.half_width])

    def draw(n):
        pos = rng.uniform(-lim, lim, size=(n, 2))
        ang = rng.uniform(0, 2 * np.pi, n)
        spd = rng.uniform(0, max_speed, n)
        return pos, np.c_[spd * np.cos(ang), spd * np.sin(ang)]

    (pa, va), (pd, vd) = draw(n_att), draw(n_def)
    ball = rng.uniform(-lim, lim)
    return make_snapshot(pa, pd, ball, va, vd, t=float(rng.uniform(0, 5000)), direction=direction)


def deep_own_half_snapshot():
    """Attacking team building up around its own box against a mid block."""
    att = [(-50, 0), (-40, -20), (-42, -6), (-42, 6), (-40, 20),
           (-28, -12), (-30, 2), (-24, 14), (-10, -24), (-8, 0), (-10, 24)]
    dfd = [(50, 0), (14, -18), (12, -6), (12, 6), (14, 18),
           (-2, -14), (-4, 0), (-2, 14), (-18, -10), (-20, 2), (-16, 12)]
    return make_snapshot(att, dfd, ball=(-42.0, -6.0), t=12.0)


def sample_passes(n_per_area, seed=0, mixtures=None, pitch=PITCH, part=AreaPartition()):
    """n_per_area passes starting uniformly inside every area, ends drawn from
    that area's mixture."""
    rng = np.random.default_rng(seed)
    mixtures = mixtures or default_mixtures(pitch, part)
    col_w, row_w = pitch.length / part.columns, pitch.width / part.rows
    out = []
    for area in range(1, part.n_areas + 1):
        col, row = divmod(area - 1, part.rows)
        x0 = -pitch.half_length + col * col_w
        y0 = -pitch.half_width + row * row_w
        starts = np.c_[rng.uniform(x0 + 0.01, x0 + col_w - 0.01, n_per_area),
                       rng.uniform(y0 + 0.01, y0 + row_w - 0.01, n_per_area)]
        ends = sample_mixture(mixtures[str(area)], rng, n_per_area)
        ends = np.clip(ends, [-pitch.half_length, -pitch.half_width], [pitch.half_length, pitch.half_width])
        out += [PassSample(tuple(s), tuple(e)) for s, e in zip(starts, ends)]
    return out


@lru_cache(maxsize=None)
def fixture_kernel():
    return fit_transition_kernel(sample_passes(120, seed=11))


# ---------------------------------------------------------------------------
# 40-event detection log. Team A attacks +x, team B attacks -x; coordinates
# below are given in the acting team's frame and converted to raw on build.

_C, _R = "From Counter", "Regular Play"
DETECTION_LOG = [
    ("A", "kick_off", 0, 0, _R),
    ("A", "pass", -5, 0, _R),
    ("A", "pass", 5, 0, _R),
    ("B", "interception", -40, 0, _C),       # 3: counter, directness exactly 0.75
    ("B", "pass", -34, 8, _C),
    ("B", "pass", -28, 0, _C),
    ("B", "shot", -16, 0, _C),
    ("A", "goal_kick", -47, 0, _R),          # 7: set piece opens the run
    ("A", "pass", -30, 0, _R),
    ("A", "pass", -20, 0, _R),
    ("B", "interception", 20, 0, _R),        # 10: starts in the final third
    ("B", "carry", 30, 0, _R),
    ("B", "shot", 40, 0, _R),
    ("A", "goal_kick", -47, 0, _R),
    ("A", "pass", -30, 10, _R),
    ("B", "interception", -16.46, 0, _C),    # 15: gain exactly 18 yd
    ("B", "pass", -8, 0, _C),
    ("B", "pass", 0, 0, _C),
    ("A", "interception", -16.45, 0, _R),    # 18: gain just under 18 yd
    ("A", "pass", -8, 0, _R),
    ("A", "pass", 0, 0, _R),
    ("B", "duel", -40, 0, _C),               # 21: only two events
    ("B", "pass", -30, 0, _C),
    ("A", "interception", 10, 0, _R),        # 23: throw-in breaks the run
    ("A", "throw_in", 15, -34, _R),
    ("A", "pass", 20, 0, _R),
    ("B", "interception", -40, 0, _R),       # 26: directness just under 0.75
    ("B", "pass", -34, 8, _R),
    ("B", "pass", -28, 0, _R),
    ("B", "pass", -16.5, 0, _R),
    ("A", "interception", 0, 0, _R),         # 30: meanders
    ("A", "pass", 5, 5, _R),
    ("A", "pass", 0, 10, _R),
    ("A", "pass", 5, 0, _R),
    ("B", "free_kick", -10, 0, _R),          # 34: set piece
    ("B", "pass", -5, 0, _R),
    ("B", "pass", 0, 0, _R),
    ("A", "interception", -5, 0, _R),        # 37: too short
    ("A", "pass", 0, 0, _R),
    ("A", "shot", 5, 0, _R),
]
DETECTION_TRANSITIONS = [3, 10, 15, 18, 26, 30, 37]
DETECTION_RULE_COUNTERS = [3, 15]
DETECTION_LABEL_COUNTERS = [3, 15]


def build_log(rows=DETECTION_LOG, match_id="M1", direction={"A": 1, "B": -1}):
    events = []
    for i, (team, etype, x, y, pattern) in enumerate(rows):
        d = direction[team]
        end = (d * (x + 5.0), d * y) if etype == "pass" else None
        events.append(EventRecord(f"e{i:02d}", match_id, etype, team, f"{team}1", 2.0 * i,
                                  (d * x, d * y), end, pattern, None, 1, d))
    return events
