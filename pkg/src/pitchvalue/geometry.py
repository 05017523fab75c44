"""
Pitch coordinates, evaluation grid and the 18-area partition.

All coordinates are in metres with the origin at the centre spot. After
normalisation the team in possession attacks towards +x, so its own goal
sits at (-length/2, 0) and the opponent goal at (+length/2, 0).

Grids are stored row-major with shape (ny, nx): row 0 is the minimum y,
column 0 the minimum x.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np

from .errors import InvalidArgument

ATTACKING = "attacking"
DEFENDING = "defending"

MAX_SPEED = 13.0
BOUNDS_SLACK = 5.0


@dataclass(frozen=True)
class PitchSpec:
    length: float = 105.0
    width: float = 68.0

    def __post_init__(self):
        if not (self.length > 0 and self.width > 0):
            raise InvalidArgument(f"pitch dimensions must be positive, got {self.length}x{self.width}")

    @property
    def half_length(self) -> float:
        return self.length / 2.0

    @property
    def half_width(self) -> float:
        return self.width / 2.0

    @property
    def goal_own(self) -> np.ndarray:
        return np.array([-self.half_length, 0.0])

    @property
    def goal_opp(self) -> np.ndarray:
        return np.array([self.half_length, 0.0])

    def clamp(self, p):
        """Clamp point(s) onto the pitch rectangle."""
        p = np.asarray(p, dtype=float)
        lo = np.array([-self.half_length, -self.half_width])
        return np.clip(p, lo, -lo)


@dataclass(frozen=True)
class GridSpec:
    pitch: PitchSpec = field(default_factory=PitchSpec)
    nx: int = 50
    ny: int = 32

    @property
    def shape(self) -> tuple[int, int]:
        return (self.ny, self.nx)

    @property
    def size(self) -> int:
        return self.nx * self.ny

    @property
    def cell_size(self) -> tuple[float, float]:
        return (self.pitch.length / self.nx, self.pitch.width / self.ny)

    @cached_property
    def x_centers(self) -> np.ndarray:
        dx = self.pitch.length / self.nx
        # built from both ends so that x[i] == -x[nx-1-i] exactly
        i = np.arange(self.nx)
        return 0.5 * dx * (2 * i + 1 - self.nx)

    @cached_property
    def y_centers(self) -> np.ndarray:
        dy = self.pitch.width / self.ny
        j = np.arange(self.ny)
        return 0.5 * dy * (2 * j + 1 - self.ny)

    @cached_property
    def centers(self) -> np.ndarray:
        """Cell centres as an (ny*nx, 2) array in row-major order."""
        xx, yy = np.meshgrid(self.x_centers, self.y_centers)
        return np.column_stack([xx.ravel(), yy.ravel()])

    def cell_of(self, p) -> tuple[int, int]:
        """(row, col) of the cell containing p; out-of-bounds points are clamped."""
        x, y = self.pitch.clamp(p)
        dx, dy = self.cell_size
        col = min(int((x + self.pitch.half_length) // dx), self.nx - 1)
        row = min(int((y + self.pitch.half_width) // dy), self.ny - 1)
        return row, col


def build_grid(pitch: PitchSpec | None = None, nx: int = 50, ny: int = 32) -> GridSpec:
    if pitch is None:
        pitch = PitchSpec()
    if int(nx) != nx or int(ny) != ny or nx < 2 or ny < 2:
        raise InvalidArgument(f"grid needs nx >= 2 and ny >= 2, got nx={nx}, ny={ny}")
    return GridSpec(pitch=pitch, nx=int(nx), ny=int(ny))


@dataclass(frozen=True)
class PlayerState:
    player_id: object
    team: str
    position: tuple[float, float]
    velocity: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if self.team not in (ATTACKING, DEFENDING):
            raise InvalidArgument(f"team must be {ATTACKING!r} or {DEFENDING!r}, got {self.team!r}")
        object.__setattr__(self, "position", (float(self.position[0]), float(self.position[1])))
        object.__setattr__(self, "velocity", (float(self.velocity[0]), float(self.velocity[1])))
        if self.speed > MAX_SPEED + 1e-9:
            raise InvalidArgument(f"player {self.player_id!r} speed {self.speed:.2f} m/s exceeds {MAX_SPEED} m/s")

    @property
    def speed(self) -> float:
        return math.hypot(*self.velocity)


@dataclass(frozen=True)
class Snapshot:
    """One tracked instant: ball, players and the attacking direction ('+x' or '-x')."""

    timestamp: float
    ball: tuple[float, float]
    players: tuple[PlayerState, ...]
    attack_direction: str = "+x"
    ball_velocity: tuple[float, float] | None = None

    def __post_init__(self):
        if self.attack_direction not in ("+x", "-x"):
            raise InvalidArgument(f"attack_direction must be '+x' or '-x', got {self.attack_direction!r}")
        if self.timestamp < 0:
            raise InvalidArgument("timestamp must be non-negative")
        object.__setattr__(self, "players", tuple(self.players))
        object.__setattr__(self, "ball", (float(self.ball[0]), float(self.ball[1])))

    @property
    def attackers(self) -> list[PlayerState]:
        return [p for p in self.players if p.team == ATTACKING]

    @property
    def defenders(self) -> list[PlayerState]:
        return [p for p in self.players if p.team == DEFENDING]

    def arrays(self):
        """Positions (n, 2), velocities (n, 2) and an attacking mask (n,)."""
        pos = np.array([p.position for p in self.players], dtype=float).reshape(-1, 2)
        vel = np.array([p.velocity for p in self.players], dtype=float).reshape(-1, 2)
        att = np.array([p.team == ATTACKING for p in self.players], dtype=bool)
        return pos, vel, att


def _rotate(v):
    return (-v[0], -v[1])


def rotate_snapshot(s: Snapshot) -> Snapshot:
    """Rotate every position and velocity by 180 degrees about the centre spot
    and flip the attack direction."""
    players = tuple(replace(p, position=_rotate(p.position), velocity=_rotate(p.velocity))
                    for p in s.players)
    ball_v = None if s.ball_velocity is None else _rotate(s.ball_velocity)
    direction = "+x" if s.attack_direction == "-x" else "-x"
    return replace(s, ball=_rotate(s.ball), players=players,
                   attack_direction=direction, ball_velocity=ball_v)


def normalize_attack_direction(s: Snapshot) -> Snapshot:
    if s.attack_direction == "+x":
        return s
    return rotate_snapshot(s)


@dataclass(frozen=True)
class AreaPartition:
    """Six equal bands along x (own goal to opponent goal) times three equal
    bands along y. Area id = 3*col + row + 1, so ids run 1..18 and area 17
    is the central band of the final sixth."""

    columns: int = 6
    rows: int = 3

    @property
    def n_areas(self) -> int:
        return self.columns * self.rows

    def mirror(self, area: int) -> int:
        """Area id of the y-reflected area."""
        col, row = divmod(area - 1, self.rows)
        return self.rows * col + (self.rows - 1 - row) + 1


def _band(u, extent, n):
    # index of the band containing u on [0, extent]; an exact edge goes to the lower band
    k = np.ceil(np.asarray(u) / (extent / n)).astype(int) - 1
    return np.clip(k, 0, n - 1)


def area_of(p, part: AreaPartition | None = None, pitch: PitchSpec | None = None):
    """Area id (1..18) of point p. Accepts a single point or an (n, 2) array."""
    part = part or AreaPartition()
    pitch = pitch or PitchSpec()
    q = pitch.clamp(p)
    col = _band(q[..., 0] + pitch.half_length, pitch.length, part.columns)
    row = _band(q[..., 1] + pitch.half_width, pitch.width, part.rows)
    area = part.rows * col + row + 1
    if np.ndim(area) == 0:
        return int(area)
    return area
