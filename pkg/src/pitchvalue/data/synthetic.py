"""
Seeded synthetic league: event file, tracking file and ground truth.

Every match is a chain of possessions simulated in the frame of the team
in possession (attacking +x) and written in raw pitch coordinates. Three
signals are planted and recorded in the ground truth:

* pass destinations in build-up play are drawn from per-area Gaussian
  mixtures (forward- and inward-biased);
* after regaining the ball deep, a team advances the ball faster the more
  aggressive it is;
* counter-attacks carry an "openness" that places the recovering defence
  further from the ball and raises the chance the counter ends in a shot.

Tracking is emitted at 10 fps in short windows (three frames) around every
event.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np
from scipy.special import expit

from ..errors import InvalidArgument
from ..geometry import AreaPartition, PitchSpec, area_of
from .io import write_events, write_tracking
from .records import FROM_COUNTER, EventRecord, TrackedPlayer, TrackingFrame

EVENTS_FILE = "events.jsonl"
TRACKING_FILE = "tracking.jsonl"
TRUTH_FILE = "ground_truth.json"

# (dx, dy) around the team anchor; first row is the goalkeeper (placed separately)
ATT_SHAPE = np.array([
    [0, 0],
    [-20, -24], [-22, -8], [-22, 8], [-20, 24],
    [-5, -14], [-8, 0], [-5, 14],
    [12, -20], [15, 0], [12, 20],
], dtype=float)
DEF_SHAPE = np.array([
    [0, 0],
    [18, -22], [20, -8], [20, 8], [18, 22],
    [5, -14], [3, 0], [5, 14],
    [-10, -12], [-12, 0], [-10, 12],
], dtype=float)
PUSHERS = slice(5, 11)  # midfielders and forwards

MAX_GEN_SPEED = 9.0


@dataclass
class GeneratorSpec:
    teams: int = 2
    matches: int = 1  # matches played by each team
    possessions_per_match: int = 36
    counter_rate: float = 0.35
    counter_effect: float = 1.0
    sync_failure_rate: float = 0.02
    aggressiveness: list | None = None
    mixtures: dict | None = None
    pitch_length: float = 105.0
    pitch_width: float = 68.0

    def __post_init__(self):
        if int(self.teams) != self.teams or self.teams < 2:
            raise InvalidArgument("need at least 2 teams")
        if int(self.matches) != self.matches or self.matches < 1:
            raise InvalidArgument("matches must be a positive integer")
        if self.possessions_per_match < 2:
            raise InvalidArgument("possessions_per_match must be at least 2")
        for name in ("counter_rate", "sync_failure_rate"):
            if not 0 <= getattr(self, name) <= 1:
                raise InvalidArgument(f"{name} must lie in [0, 1]")
        if self.aggressiveness is not None:
            a = np.asarray(self.aggressiveness, dtype=float)
            if a.shape != (self.teams,) or a.min() < 0 or a.max() > 1:
                raise InvalidArgument("aggressiveness needs one value in [0, 1] per team")
        if self.mixtures is not None:
            for area, comps in self.mixtures.items():
                if not 1 <= int(area) <= 18 or not comps:
                    raise InvalidArgument(f"bad mixture entry for area {area!r}")
                for c in comps:
                    if c["weight"] <= 0 or c["sd"] <= 0 or len(c["mean"]) != 2:
                        raise InvalidArgument(f"bad mixture component in area {area}")

    @classmethod
    def from_dict(cls, doc: dict) -> "GeneratorSpec":
        known = {f.name for f in fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise InvalidArgument(f"unknown generator keys: {', '.join(sorted(unknown))}")
        return cls(**doc)

    @property
    def pitch(self) -> PitchSpec:
        return PitchSpec(self.pitch_length, self.pitch_width)


def default_mixtures(pitch: PitchSpec = PitchSpec(), part: AreaPartition = AreaPartition()) -> dict:
    """Forward- and inward-biased pass destination mixtures for every area."""
    col_w = pitch.length / part.columns
    row_w = pitch.width / part.rows
    out = {}
    for area in range(1, part.n_areas + 1):
        col, row = divmod(area - 1, part.rows)
        cx = -pitch.half_length + (col + 0.5) * col_w
        cy = -pitch.half_width + (row + 0.5) * row_w
        fwd = [min(cx + 12.0, pitch.half_length - 8.0), 0.55 * cy]
        back = [max(cx - 10.0, -pitch.half_length + 8.0), 0.8 * cy]
        out[str(area)] = [
            {"weight": 0.65, "mean": fwd, "sd": 9.0},
            {"weight": 0.35, "mean": back, "sd": 7.0},
        ]
    return out


def sample_mixture(comps, rng, size=None):
    w = np.array([c["weight"] for c in comps], dtype=float)
    k = rng.choice(len(comps), p=w / w.sum(), size=size)
    means = np.array([c["mean"] for c in comps], dtype=float)
    sds = np.array([c["sd"] for c in comps], dtype=float)
    return means[k] + rng.normal(size=(2,) if size is None else (size, 2)) * (sds[k] if size is None else sds[k][:, None])


def round_robin(n_teams: int, rounds: int):
    """Pairings (home, away) per round by the circle method."""
    ids = list(range(n_teams)) + ([None] if n_teams % 2 else [])
    n = len(ids)
    out = []
    for r in range(rounds):
        pairs = []
        for i in range(n // 2):
            a, b = ids[i], ids[n - 1 - i]
            if a is not None and b is not None:
                pairs.append((a, b) if (r + i) % 2 == 0 else (b, a))
        out.append(pairs)
        ids = [ids[0], ids[-1]] + ids[1:-1]
    return out


@dataclass
class _Step:
    type: str
    ball: np.ndarray
    t: float
    att: np.ndarray
    dfd: np.ndarray


@dataclass
class _MatchSim:
    spec: GeneratorSpec
    match_id: str
    home: str
    away: str
    aggr: dict
    mixtures: dict
    rng: np.random.Generator
    events: list = field(default_factory=list)
    frames: list = field(default_factory=list)
    pass_counts: dict = field(default_factory=dict)
    counters: dict = field(default_factory=lambda: {"success": 0, "fail": 0})

    @property
    def pitch(self):
        return self.spec.pitch

    def direction(self, team, period):
        home_plus = period == 1
        return 1 if (team == self.home) == home_plus else -1

    def clamp(self, p, margin=1.0):
        lim = np.array([self.pitch.half_length - margin, self.pitch.half_width - margin])
        return np.clip(p, -lim, lim)

    # scenes are expressed in the frame of the team in possession
    def scene(self, ball, x_att, x_def, push=0.0, jitter=None):
        shift = 0.3 * ball[1]
        att = ATT_SHAPE + [x_att, shift]
        att[PUSHERS, 0] += push
        dfd = DEF_SHAPE + [x_def, shift]
        att[0] = [max(-50.0, x_att - 38.0), 0.0]
        dfd[0] = [50.0, 0.3 * shift]
        if jitter is not None:
            att[1:] += jitter[0]
            dfd[1:] += jitter[1]
        lim = np.array([self.pitch.half_length + 1.0, self.pitch.half_width + 1.0])
        att, dfd = np.clip(att, -lim, lim), np.clip(dfd, -lim, lim)
        # the ball carrier stands on the ball
        k = 1 + int(np.argmin(np.hypot(*(att[1:] - ball).T)))
        att[k] = ball + [-0.7, 0.0]
        return att, dfd

    def run(self):
        rng = self.rng
        n_poss = self.spec.possessions_per_match
        t = 1.0
        team = self.home
        start = ("kick_off", np.zeros(2))
        period = 1
        possession_id = 0
        for p in range(n_poss):
            if p == n_poss // 2:
                period, t = 2, t + 60.0
                team, start = self.away, ("kick_off", np.zeros(2))
            possession_id += 1
            steps, pattern, outcome, end = self.possession(team, start, t)
            self.emit(steps, team, period, possession_id, pattern)
            t = steps[-1].t
            other = self.home if team == self.away else self.away
            kind, loc = outcome
            if kind == "shot":
                start = ("goal_kick", np.array([-self.pitch.half_length + 5.5, 0.0]))
                t += rng.uniform(15, 30)
            elif kind == "out":
                side = np.sign(end[1]) or 1.0
                start = ("throw_in", np.array([-end[0], -side * (self.pitch.half_width - 0.1)]))
                t += rng.uniform(8, 15)
            else:
                start = ("regain", -end)
                t += rng.uniform(0.8, 1.5)
            team = other

    def possession(self, team, start, t0):
        rng = self.rng
        kind, loc = start
        aggr = self.aggr[team]
        ball = self.clamp(np.asarray(loc, dtype=float))
        steps = []
        t = t0
        jitter = (rng.normal(0, 2.0, (10, 2)), rng.normal(0, 2.0, (10, 2)))
        pattern = {"kick_off": "From Kick Off", "goal_kick": "From Goal Kick",
                   "throw_in": "From Throw In"}.get(kind, "Regular Play")

        deep = kind == "regain" and np.hypot(ball[0] + self.pitch.half_length, ball[1]) <= 35.0
        counter = (kind == "regain" and ball[0] < 0 and rng.random() < self.spec.counter_rate)
        if counter:
            pattern = FROM_COUNTER
            openness = rng.random()
            n = int(rng.integers(4, 6))
            x_def0 = ball[0] + 15.0 - 45.0 * openness
            for k in range(n):
                if k:
                    t += rng.uniform(1.0, 1.8)
                    step = np.array([10.0 + 10.0 * aggr + rng.normal(0, 1.5), rng.normal(0, 2.0)])
                    ball = self.clamp(ball + step)
                x_def = x_def0 + 3.0 * (t - t0)
                att, dfd = self.scene(ball, ball[0] + 10.0, x_def, push=4.0 * k, jitter=jitter)
                etype = "interception" if k == 0 else ("shot" if k == n - 1 else "pass")
                steps.append(_Step(etype, ball.copy(), t, att, dfd))
            success = rng.random() < expit(6.0 * self.spec.counter_effect * (openness - 0.5))
            if not success:
                steps[-1].type = "pass"
            self.counters["success" if success else "fail"] += 1
            if success:
                return steps, pattern, ("shot", ball), ball
            return steps, pattern, ("loss", ball), ball

        if kind == "regain":
            first_type = "interception" if rng.random() < 0.5 else "duel"
        else:
            first_type = kind
        k = 0
        while True:
            if k:
                t += rng.uniform(1.2, 2.5)
            if deep and k < 3:
                if k:
                    step = np.array([2.0 + 22.0 * aggr + rng.normal(0, 1.5), rng.normal(0, 3.0)])
                    ball = self.clamp(ball + step)
                x_def = ball[0] - 5.0 + 3.5 * (t - t0)
                att, dfd = self.scene(ball, ball[0] + 12.0, x_def, push=k * (3.0 + 6.0 * aggr), jitter=jitter)
            else:
                if k:
                    prev = steps[-1]
                    if prev.type == "pass" or prev.type in ("kick_off", "goal_kick", "throw_in"):
                        ball = self.clamp(self.pass_end_for(prev.ball))
                    else:
                        ball = self.clamp(ball + [rng.uniform(2, 6), rng.normal(0, 2)])
                att, dfd = self.scene(ball, np.clip(ball[0] + 2.0, -30, 30), np.clip(ball[0] + 5.0, -25, 28),
                                      jitter=jitter)
            etype = first_type if k == 0 else ("carry" if rng.random() < 0.15 else "pass")
            steps.append(_Step(etype, ball.copy(), t, att, dfd))
            k += 1
            if deep and k < 3:
                continue
            x = ball[0]
            u = rng.random()
            if k >= 10 or u < 0.06:
                steps[-1].type = "pass"
                return steps, pattern, ("out", ball), ball
            if x > 25 and u < 0.31:
                steps[-1].type = "shot"
                return steps, pattern, ("shot", ball), ball
            p_loss = 0.35 if x > 25 else (0.2 if x > 0 else 0.12)
            if u < 0.06 + p_loss:
                steps[-1].type = "pass"
                return steps, pattern, ("loss", ball), ball

    def pass_end_for(self, start):
        area = area_of(start, AreaPartition(), self.pitch)
        return sample_mixture(self.mixtures[str(area)], self.rng)

    def emit(self, steps, team, period, possession_id, pattern):
        rng = self.rng
        other = self.home if team == self.away else self.away
        d = self.direction(team, period)
        n = len(steps)
        # finite-difference velocities between keyframes, per player
        att_v, def_v = [], []
        for k in range(n):
            a, b = max(k - 1, 0), min(k + 1, n - 1)
            if a == b:
                att_v.append(np.zeros((11, 2)))
                def_v.append(np.zeros((11, 2)))
                continue
            dt = steps[b].t - steps[a].t
            for src, dst in ((lambda s: s.att, att_v), (lambda s: s.dfd, def_v)):
                v = (src(steps[b]) - src(steps[a])) / dt
                speed = np.hypot(v[:, 0], v[:, 1])[:, None]
                dst.append(np.where(speed > MAX_GEN_SPEED, v * MAX_GEN_SPEED / np.maximum(speed, 1e-9), v))

        for k, st in enumerate(steps):
            ev_id = f"{self.match_id}-{len(self.events):04d}"
            pass_end = None
            if st.type in ("pass", "kick_off", "goal_kick", "throw_in"):
                nxt = steps[k + 1].ball if k + 1 < n else st.ball + [rng.uniform(5, 15), rng.normal(0, 5)]
                pass_end = tuple(np.round(d * self.clamp(nxt, 0.0), 3))
                if st.type == "pass":
                    area = str(area_of(np.round(st.ball, 3), AreaPartition(), self.pitch))
                    self.pass_counts[area] = self.pass_counts.get(area, 0) + 1
            carrier = 1 + int(np.argmin(np.hypot(*(st.att[1:] - st.ball).T)))
            tf = round(st.t, 1)
            self.events.append(EventRecord(
                event_id=ev_id, match_id=self.match_id, type=st.type, team_id=team,
                player_id=f"{team}-{carrier + 1:02d}", timestamp=round(tf + rng.uniform(-0.04, 0.04), 3),
                location=tuple(np.round(d * st.ball, 3)), pass_end=pass_end, play_pattern=pattern,
                possession_id=possession_id, period=period, direction=d,
            ))
            u = rng.random()
            if u < self.spec.sync_failure_rate / 2:
                continue  # tracking dropout
            ball_noise = rng.normal(0, 0.3, 2)
            if u < self.spec.sync_failure_rate:
                ball_noise += [8.0, 0.0]  # tracking ball far from the event location
            for j in (-1, 0, 1):
                players = []
                for side, pos, vel in ((team, st.att, att_v[k]), (other, st.dfd, def_v[k])):
                    for i in range(11):
                        xy = d * (pos[i] + 0.1 * j * vel[i])
                        players.append(TrackedPlayer(f"{side}-{i + 1:02d}", side,
                                                     (round(xy[0], 3), round(xy[1], 3))))
                ball = d * (st.ball + ball_noise)
                self.frames.append(TrackingFrame(
                    frame_id=int(round(tf * 10)) + j, timestamp=round(tf + 0.1 * j, 1),
                    ball=(round(ball[0], 3), round(ball[1], 3)), players=tuple(players),
                    match_id=self.match_id,
                ))


def generate_synthetic(spec: GeneratorSpec | dict, seed: int, out_dir) -> dict:
    """Write events.jsonl, tracking.jsonl and ground_truth.json into out_dir.

    Returns the ground-truth document. Output is a pure function of (spec, seed).
    """
    if isinstance(spec, dict):
        spec = GeneratorSpec.from_dict(spec)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    master = np.random.default_rng([int(seed), 0])

    team_ids = [f"T{i + 1:02d}" for i in range(spec.teams)]
    if spec.aggressiveness is None:
        aggr_values = master.permutation(np.linspace(0.0, 1.0, spec.teams))
    else:
        aggr_values = np.asarray(spec.aggressiveness, dtype=float)
    aggr = {t: float(a) for t, a in zip(team_ids, aggr_values)}
    order = sorted(team_ids, key=lambda t: -aggr[t])
    mixtures = spec.mixtures or default_mixtures(spec.pitch)
    mixtures = {str(k): v for k, v in mixtures.items()}

    pass_counts: dict = {}
    counters = {"success": 0, "fail": 0}
    events, frames, headers = [], [], []
    match_no = 0
    for pairs in round_robin(spec.teams, spec.matches):
        for home, away in pairs:
            match_no += 1
            sim = _MatchSim(spec, f"M{match_no:03d}", team_ids[home], team_ids[away], aggr,
                            mixtures, np.random.default_rng([int(seed), match_no]))
            sim.run()
            events.extend(sim.events)
            frames.extend(sim.frames)
            for period in (1, 2):
                headers.append((sim.match_id, period, {t: "+x" if sim.direction(t, period) > 0 else "-x"
                                                       for t in (sim.home, sim.away)}))
            for a, c in sim.pass_counts.items():
                pass_counts[a] = pass_counts.get(a, 0) + c
            for k in counters:
                counters[k] += sim.counters[k]
    write_events(out / EVENTS_FILE, events, headers)
    write_tracking(out / TRACKING_FILE, frames)

    truth = {
        "seed": int(seed),
        "spec": asdict(spec),
        "n_matches": match_no,
        "mixtures": mixtures,
        "team_aggressiveness": aggr,
        "aggressiveness_rank": {t: i + 1 for i, t in enumerate(order)},
        "pass_counts": {a: pass_counts[a] for a in sorted(pass_counts, key=int)},
        "counters": counters,
    }
    (out / TRUTH_FILE).write_text(json.dumps(truth, indent=2, sort_keys=True) + "\n")
    return truth

