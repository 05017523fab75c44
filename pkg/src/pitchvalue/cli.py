"""
Command-line entry point.

    pitchvalue fit-kernel      --events E --out model.json [--no-mirror]
    pitchvalue eval-frame      --tracking T --frame ID [--model M] [--mode obpv|obso]
                               [--heatmap out.csv] [--image out.ppm] [--out report.json]
    pitchvalue detect          --events E [--radius R] [--metric euclidean|x_only] --out transitions.json
    pitchvalue analyze-counters --events E --tracking T --model M [--counter-mode label|rule] --out report.json
    pitchvalue team-profiles   --events E --tracking T --model M [--covariates C] [--exclude a,b] --out profiles.json
    pitchvalue synth           --spec spec.json --seed N --out DIR

Every subcommand accepts --config FILE and repeated --set key=value. Exit
status: 0 success, 1 usage or configuration error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .analytics.sequences import EventScorer, counter_comparison, read_covariates, transition_profiles
from .config import ConfigError, RunConfig, load_config
from .data.detection import detect_counters, detect_transitions, filter_transitions_by_distance
from .data.io import load_events, load_tracking, passes_from_events
from .data.sync import snapshot_from_frame, synchronize
from .data.synthetic import GeneratorSpec, generate_synthetic
from .errors import InvalidArgument, PitchValueError
from .evaluator import OBPV, event_scalar, obpv_surface, obso_surface
from .export import write_heatmap_csv, write_heatmap_ppm
from .transition import KernelModel, fit_transition_kernel

log = logging.getLogger("pitchvalue")

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n\n{self.format_help()}")


def _report(cfg: RunConfig, command: str, inputs: dict, body: dict) -> dict:
    return {
        "tool": "pitchvalue",
        "version": __version__,
        "command": command,
        "generated_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "config": cfg.resolved(),
        "inputs": inputs,
        **body,
    }


def _write_json(path, doc) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _load_model(path) -> KernelModel | None:
    return None if path is None else KernelModel.load(path)


def _synced(args, cfg, events):
    frames = load_tracking(args.tracking)
    return synchronize(events, frames, cfg["sync.dt_window"], cfg["sync.max_dist"])


# ---- subcommands ------------------------------------------------------------

def cmd_fit_kernel(args, cfg):
    events = load_events(args.events)
    model = fit_transition_kernel(passes_from_events(events), mirror=not args.no_mirror,
                                  pitch=cfg.pitch, min_samples=cfg["transition.min_samples"])
    doc = model.to_json()
    doc["report"] = _report(cfg, "fit-kernel", {"events": args.events},
                            {"n_passes": int(model.pooled.n), "malformed_lines": events.malformed,
                             "counts": {str(a): n for a, n in model.counts().items()}})
    _write_json(args.out, doc)


def _pick_frame(frames, frame_id, match):
    hits = [f for f in frames if f.frame_id == frame_id and (match is None or str(f.match_id) == match)]
    if not hits:
        raise InvalidArgument(f"frame {frame_id} not found" + (f" in match {match}" if match else ""))
    if len({str(f.match_id) for f in hits}) > 1:
        raise InvalidArgument(f"frame {frame_id} appears in several matches; pass --match")
    return hits[0]


def _ball_holder_team(frame):
    best = min(frame.players, key=lambda p: (p.position[0] - frame.ball[0]) ** 2
               + (p.position[1] - frame.ball[1]) ** 2)
    return best.team_id


def cmd_eval_frame(args, cfg):
    frames = load_tracking(args.tracking)
    frame = _pick_frame(frames, args.frame, args.match)
    team = args.attacking_team if args.attacking_team is not None else _ball_holder_team(frame)
    direction = 1 if args.direction == "+x" else -1
    snap = snapshot_from_frame(frame, team, direction, cfg.pitch)
    ecfg = cfg.evaluation(_load_model(args.model))
    surface = (obpv_surface if args.mode == "obpv" else obso_surface)(snap, ecfg)
    if args.heatmap:
        write_heatmap_csv(args.heatmap, surface)
    if args.image:
        vmax = None if cfg["export.image_max"] == "auto" else cfg["export.image_max"]
        write_heatmap_ppm(args.image, surface, vmax)
    body = {
        "kind": surface.kind,
        "frame": frame.frame_id,
        "match_id": frame.match_id,
        "attacking_team": team,
        "timestamp": surface.timestamp,
        "transition_source": surface.transition_source,
        "transition_norm": surface.transition_norm,
        "scalar_mode": ecfg.scalar_mode,
        "scalar": event_scalar(surface, snap, ecfg.scalar_mode),
        "max": surface.max,
        "total": float(surface.values.sum()),
        "shape": list(surface.values.shape),
    }
    _write_json(args.out, _report(cfg, "eval-frame", {"tracking": args.tracking, "model": args.model}, body))


def _transition_json(t):
    return {"kind": t.kind, "index": t.index, "match_id": t.match_id,
            "gaining_team": t.gaining_team, "losing_team": t.losing_team,
            "start_location": list(t.start_location), "event_ids": [e.event_id for e in t.events]}


def cmd_detect(args, cfg):
    events = load_events(args.events)
    radius = args.radius if args.radius is not None else cfg["transition.radius"]
    metric = args.metric or cfg["transition.distance_metric"]
    found = detect_transitions(events)
    kept = filter_transitions_by_distance(found, radius, metric=metric, pitch=cfg.pitch)
    body = {"n_events": len(events), "malformed_lines": events.malformed,
            "n_detected": len(found), "n_transitions": len(kept),
            "radius": radius, "metric": metric,
            "transitions": [_transition_json(t) for t in kept]}
    _write_json(args.out, _report(cfg, "detect", {"events": args.events}, body))


def _scorer(args, cfg, events):
    synced, excluded = _synced(args, cfg, events)
    return EventScorer(synced, cfg.evaluation(_load_model(args.model)), OBPV), excluded


def cmd_analyze_counters(args, cfg):
    events = load_events(args.events)
    mode = args.counter_mode or cfg["counter.mode"]
    counters = detect_counters(events, mode=mode, pitch=cfg.pitch, final_third=cfg["counter.final_third"])
    scorer, excluded = _scorer(args, cfg, events)
    body = counter_comparison(counters, scorer)
    body.update({"counter_mode": mode, "n_counters": len(counters), "sync_excluded_events": excluded})
    inputs = {"events": args.events, "tracking": args.tracking, "model": args.model}
    _write_json(args.out, _report(cfg, "analyze-counters", inputs, body))


def cmd_team_profiles(args, cfg):
    events = load_events(args.events)
    transitions = filter_transitions_by_distance(detect_transitions(events), cfg["transition.radius"],
                                                 metric=cfg["transition.distance_metric"], pitch=cfg.pitch)
    scorer, excluded = _scorer(args, cfg, events)
    covariates = read_covariates(args.covariates) if args.covariates else None
    exclude = [t for t in (args.exclude or "").split(",") if t]
    profiles, rho = transition_profiles(transitions, scorer, covariates, exclude)
    body = {"profiles": [p.to_json() for p in profiles], "spearman_rho": rho, "excluded_teams": exclude,
            "n_transitions": len(transitions), "sync_excluded_events": excluded,
            "scalar_mode": scorer.config.scalar_mode, "transition_norm": scorer.config.norm_for(OBPV)}
    inputs = {"events": args.events, "tracking": args.tracking, "model": args.model,
              "covariates": args.covariates}
    _write_json(args.out, _report(cfg, "team-profiles", inputs, body))


def cmd_synth(args, cfg):
    if args.spec:
        try:
            doc = json.loads(Path(args.spec).read_text())
        except json.JSONDecodeError as exc:
            raise UsageError(f"{args.spec}: {exc}") from None
    else:
        doc = {}
    doc.setdefault("pitch_length", cfg["pitch.length"])
    doc.setdefault("pitch_width", cfg["pitch.width"])
    try:
        spec = GeneratorSpec.from_dict(doc)
    except (PitchValueError, TypeError) as exc:
        raise UsageError(f"invalid generator spec: {exc}") from None
    truth = generate_synthetic(spec, args.seed, args.out)
    log.info("wrote %d matches to %s", truth["n_matches"], args.out)


# ---- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="config file (default: $PITCHVALUE_CONFIG)")
    common.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override one config key; repeatable")
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="pitchvalue", description="Pitch-wide space evaluation for soccer tracking data.")
    p.add_argument("--version", action="version", version=f"pitchvalue {__version__}")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)

    s = sub.add_parser("fit-kernel", parents=[common], help="fit the per-area pass transition kernel")
    s.add_argument("--events", required=True)
    s.add_argument("--no-mirror", action="store_true", help="do not add y-mirrored passes")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_fit_kernel)

    s = sub.add_parser("eval-frame", parents=[common], help="evaluate OBPV or OBSO on one tracking frame")
    s.add_argument("--tracking", required=True)
    s.add_argument("--frame", required=True, type=int)
    s.add_argument("--match", help="match id when frame ids repeat across matches")
    s.add_argument("--model", help="kernel model (needed for the kernel transition source)")
    s.add_argument("--mode", choices=("obpv", "obso"), default="obpv")
    s.add_argument("--attacking-team", help="team in possession (default: team of the player nearest the ball)")
    s.add_argument("--direction", choices=("+x", "-x"), default="+x", help="attacking direction of that team")
    s.add_argument("--heatmap", help="write the surface as CSV")
    s.add_argument("--image", help="write the surface as a P3 PPM image")
    s.add_argument("--out", help="report path (default: stdout)")
    s.set_defaults(func=cmd_eval_frame)

    s = sub.add_parser("detect", parents=[common], help="detect possession transitions")
    s.add_argument("--events", required=True)
    s.add_argument("--radius", type=float)
    s.add_argument("--metric", choices=("euclidean", "x_only"))
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_detect)

    s = sub.add_parser("analyze-counters", parents=[common], help="compare successful and failed counters")
    s.add_argument("--events", required=True)
    s.add_argument("--tracking", required=True)
    s.add_argument("--model", required=True)
    s.add_argument("--counter-mode", choices=("label", "rule"))
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_analyze_counters)

    s = sub.add_parser("team-profiles", parents=[common], help="per-team OBPV increase in transitions")
    s.add_argument("--events", required=True)
    s.add_argument("--tracking", required=True)
    s.add_argument("--model", required=True)
    s.add_argument("--covariates", help="CSV with header team_id,value")
    s.add_argument("--exclude", help="comma-separated team ids left out of the correlation")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_team_profiles)

    s = sub.add_parser("synth", parents=[common], help="generate a seeded synthetic league")
    s.add_argument("--spec", help="generator spec JSON (default: built-in spec)")
    s.add_argument("--seed", required=True, type=int)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_synth)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_help())
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        cfg = load_config(args.config, args.set)
        args.func(args, cfg)
    except SystemExit as exc:  # --help / --version
        return EXIT_OK if not exc.code else EXIT_USAGE
    except (UsageError, ConfigError) as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_USAGE
    except (PitchValueError, OSError, ValueError) as exc:
        sys.stderr.write(f"pitchvalue: error: {exc}\n")
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
