"""
Run configuration: flat `section.key = value` files plus overrides.

Lines starting with '#' and blank lines are ignored. Every key has a fixed
type and default; unknown keys and unparsable values are rejected. The
environment variable PITCHVALUE_CONFIG may name a default config file.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .errors import InvalidArgument
from .evaluator import EvaluationConfig
from .geometry import PitchSpec, build_grid
from .ppcf import ControlParams, MotionParams
from .transition import GaussianTransitionParams, KernelModel
from .value_models import FieldValueParams, ScoreModel

ENV_VAR = "PITCHVALUE_CONFIG"
AUTO = "auto"


class ConfigError(InvalidArgument):
    """Bad config file, key or value."""


def _choice(*options):
    def parse(s):
        if s not in options:
            raise ValueError(f"expected one of {', '.join(options)}, got {s!r}")
        return s
    return parse


def _float_or_auto(s):
    return AUTO if s == AUTO else float(s)


# key -> (parser, default)
SCHEMA = {
    "pitch.length": (float, 105.0),
    "pitch.width": (float, 68.0),
    "grid.nx": (int, 50),
    "grid.ny": (int, 32),
    "ppcf.lambda": (float, 4.3),
    "ppcf.kappa": (float, 1.0),
    "ppcf.s": (float, 0.45),
    "ppcf.dt": (float, 0.04),
    "ppcf.tmax": (float, 10.0),
    "ppcf.converged": (float, 0.9999),
    "motion.vmax": (float, 5.0),
    "motion.accel": (float, 7.0),
    "field.midpoint_x": (float, -15.0),
    "field.scale_x": (float, 30.0),
    "field.half_width": (float, 34.0),
    "score.variant": (_choice("analytic", "grid"), "analytic"),
    "score.grid_path": (str, ""),
    "score.beta": (float, 1.0),
    "score.gamma": (float, 15.0),
    "transition.sigma": (float, 14.0),
    "transition.min_samples": (int, 50),
    "transition.radius": (float, 35.0),
    "transition.distance_metric": (_choice("euclidean", "x_only"), "euclidean"),
    "eval.transition_source": (_choice(AUTO, "kernel", "gaussian"), AUTO),
    "eval.transition_norm": (_choice(AUTO, "max", "sum"), AUTO),
    "eval.scalar_mode": (_choice("grid_max", "player_max"), "grid_max"),
    "sync.dt_window": (float, 0.5),
    "sync.max_dist": (float, 5.0),
    "counter.mode": (_choice("label", "rule"), "label"),
    "counter.final_third": (_choice("attacking", "defending"), "attacking"),
    "export.image_max": (_float_or_auto, AUTO),
}


def _coerce(key, raw: str, where: str):
    if key not in SCHEMA:
        raise ConfigError(f"{where}: unknown config key {key!r}")
    parser = SCHEMA[key][0]
    try:
        return parser(raw.strip())
    except ValueError as exc:
        raise ConfigError(f"{where}: bad value for {key}: {exc}") from None


def parse_config_text(text: str, source: str = "<config>") -> dict:
    out = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'section.key = value'")
        key, raw = (part.strip() for part in line.split("=", 1))
        out[key] = _coerce(key, raw, f"{source}:{lineno}")
    return out


@dataclass
class RunConfig:
    values: dict = field(default_factory=lambda: {k: d for k, (_, d) in SCHEMA.items()})
    source: str | None = None

    def __getitem__(self, key):
        return self.values[key]

    def set(self, key, value):
        """Set a key from a string (as on the command line) or an already typed value."""
        if isinstance(value, str):
            value = _coerce(key, value, "override")
        elif key not in SCHEMA:
            raise ConfigError(f"unknown config key {key!r}")
        self.values[key] = value

    def resolved(self) -> dict:
        return {k: self.values[k] for k in sorted(self.values)}

    def to_text(self) -> str:
        return "".join(f"{k} = {v}\n" for k, v in self.resolved().items())

    @property
    def pitch(self) -> PitchSpec:
        return PitchSpec(self["pitch.length"], self["pitch.width"])

    def validate(self) -> "RunConfig":
        """Check that every parameter group can be built; raise ConfigError if not."""
        v = self.values
        try:
            build_grid(self.pitch, v["grid.nx"], v["grid.ny"])
            MotionParams(v["motion.vmax"], v["motion.accel"])
            ControlParams(lam=v["ppcf.lambda"], kappa=v["ppcf.kappa"], s_uncertainty=v["ppcf.s"],
                          dT=v["ppcf.dt"], T_max=v["ppcf.tmax"], converged=v["ppcf.converged"])
            FieldValueParams(v["field.midpoint_x"], v["field.scale_x"], v["field.half_width"])
            GaussianTransitionParams(v["transition.sigma"])
            if v["score.variant"] == "analytic":
                ScoreModel("analytic", v["score.beta"], v["score.gamma"])
            elif not v["score.grid_path"]:
                raise InvalidArgument("score.variant = grid needs score.grid_path")
        except InvalidArgument as exc:
            raise ConfigError(str(exc)) from None
        for key in ("transition.min_samples", "transition.radius", "sync.dt_window", "sync.max_dist"):
            if not v[key] >= 0:
                raise ConfigError(f"{key} must be non-negative")
        return self

    def evaluation(self, kernel: KernelModel | None = None) -> EvaluationConfig:
        v = self.values
        pitch = self.pitch
        if v["score.variant"] == "grid":
            if not v["score.grid_path"]:
                raise ConfigError("score.variant = grid needs score.grid_path")
            score = ScoreModel.from_csv(v["score.grid_path"])
        else:
            score = ScoreModel("analytic", v["score.beta"], v["score.gamma"])
        return EvaluationConfig(
            grid=build_grid(pitch, v["grid.nx"], v["grid.ny"]),
            motion=MotionParams(v["motion.vmax"], v["motion.accel"]),
            control=ControlParams(lam=v["ppcf.lambda"], kappa=v["ppcf.kappa"], s_uncertainty=v["ppcf.s"],
                                  dT=v["ppcf.dt"], T_max=v["ppcf.tmax"], converged=v["ppcf.converged"]),
            field_value=FieldValueParams(v["field.midpoint_x"], v["field.scale_x"], v["field.half_width"]),
            score=score,
            gaussian=GaussianTransitionParams(v["transition.sigma"]),
            kernel=kernel,
            transition_source=None if v["eval.transition_source"] == AUTO else v["eval.transition_source"],
            transition_norm=None if v["eval.transition_norm"] == AUTO else v["eval.transition_norm"],
            scalar_mode=v["eval.scalar_mode"],
        )


def load_config(path=None, overrides=(), environ=None) -> RunConfig:
    """Defaults, then the config file (`path`, else $PITCHVALUE_CONFIG), then
    `key=value` overrides in order."""
    environ = os.environ if environ is None else environ
    cfg = RunConfig()
    path = path or environ.get(ENV_VAR) or None
    if path:
        try:
            with open(path) as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from None
        cfg.values.update(parse_config_text(text, str(path)))
        cfg.source = str(path)
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not key=value")
        key, raw = item.split("=", 1)
        cfg.set(key.strip(), raw)
    return cfg.validate()
