"""Command line entry point: ``socialfov process|synth|eval``.

Exit codes: 0 success, 1 unreadable or malformed input, 2 bad configuration.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import KEYS, Config, load_config
from .errors import ConfigError, InputError
from .evaluate import DEFAULT_TOLERANCE, evaluate, overlay_frames
from .fov import DEFAULT_FOV_DEG, FovConfig
from .formats import (
    read_ground_truth,
    read_recording,
    read_results,
    write_ground_truth,
    write_recording,
    write_results,
)
from .geometry import CameraIntrinsics
from .pipeline import Pipeline
from .synth import SyntheticScenario, TRAJECTORIES, generate

EXIT_OK, EXIT_INPUT, EXIT_CONFIG = 0, 1, 2

_CONFIG_HELP = "\n".join(f"  {key:<22} {desc} (default {default})" for key, (_, default, desc) in KEYS.items())


def _parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    p = argparse.ArgumentParser(prog="socialfov", description="Skeleton lifting, orientation and field-of-view tools.")
    sub = p.add_subparsers(dest="command", required=True, metavar="{process,synth,eval}")

    pp = sub.add_parser(
        "process",
        help="run the pipeline over a recording",
        description="Lift, orient, track, smooth and FOV-test every detection in a recording.",
        epilog="config keys (JSON, flat 'a.b' or nested):\n" + _CONFIG_HELP,
        formatter_class=type("F", (fmt, argparse.RawDescriptionHelpFormatter), {}),
    )
    pp.add_argument("--input", required=True, type=Path, help="recording directory (intrinsics.json, frames.jsonl, depth/)")
    pp.add_argument("--output", required=True, type=Path, help="results JSONL path")
    pp.add_argument("--config", type=Path, default=None, help="JSON config file; built-in defaults when omitted")
    pp.add_argument("--fov-deg", type=float, default=None,
                    help=f"horizontal field of view in degrees, overrides the config (config default {DEFAULT_FOV_DEG:g})")

    ps = sub.add_parser(
        "synth",
        help="generate a synthetic recording with ground truth",
        description="Render a scenario to a recording directory; ground truth goes to <out>/gt.",
        epilog="scenario keys: seed, duration, fps, trajectory, noise {pixel_sigma, depth_sigma_mm, dropout}, "
               "camera_height, intrinsics {fx, fy, cx, cy, width, height}. "
               f"Trajectories: {', '.join(TRAJECTORIES)}.",
        formatter_class=fmt,
    )
    ps.add_argument("--scenario", type=Path, default=None, help="scenario JSON; default scenario when omitted")
    ps.add_argument("--out", required=True, type=Path, help="output directory")

    pe = sub.add_parser(
        "eval",
        help="compare results against ground truth",
        description="Align results with ground truth by timestamp and report MPJPE, heading errors and FOV accuracy.",
        formatter_class=fmt,
    )
    pe.add_argument("--results", required=True, type=Path, help="results JSONL from 'process'")
    pe.add_argument("--gt", required=True, type=Path, help="ground truth directory (extrinsics.json, gt.jsonl)")
    pe.add_argument("--report", required=True, type=Path, help="report JSON path")
    pe.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE, help="timestamp match tolerance, seconds")
    pe.add_argument("--fov-deg", type=float, default=DEFAULT_FOV_DEG, help="field of view used for ground-truth FOV labels")
    pe.add_argument("--overlay", type=Path, default=None, help="optional JSON of gaze (red) and torso (green) arrows")
    return p


def cmd_process(args) -> int:
    cfg = load_config(args.config) if args.config else Config()
    if args.fov_deg is not None:
        cfg.fov_deg = args.fov_deg
        cfg.validate()
    rec = read_recording(args.input)
    pipe = Pipeline(rec.intrinsics, cfg)
    args.output.parent.mkdir(parents=True, exist_ok=True)
    write_results(pipe.run(rec), args.output)
    s = pipe.summary()
    print(f"frames {s['frames']}  results {s['results']}  tracks {s['tracks']}  valid gaze {s['valid_gaze_pct']:.1f}%")
    return EXIT_OK


def _load_scenario(path):
    if path is None:
        return SyntheticScenario(), None
    try:
        d = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"scenario file not found: {path}") from None
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: invalid JSON at line {e.lineno}: {e.msg}") from None
    if not isinstance(d, dict):
        raise ConfigError(f"{path}: scenario must be a JSON object")
    k = None
    if "intrinsics" in d:
        try:
            k = CameraIntrinsics.from_dict(d.pop("intrinsics"))
        except (TypeError, ValueError, KeyError) as e:
            raise ConfigError(f"{path}: bad intrinsics: {e}") from None
    try:
        return SyntheticScenario.from_dict(d), k
    except TypeError as e:
        raise ConfigError(f"{path}: {e}") from None


def cmd_synth(args) -> int:
    scenario, k = _load_scenario(args.scenario)
    rec, gt = generate(scenario, k)
    write_recording(rec, args.out)
    write_ground_truth(gt, args.out / "gt")
    print(f"wrote {len(rec)} frames ({scenario.trajectory}, seed {scenario.seed}) to {args.out}")
    return EXIT_OK


def cmd_eval(args) -> int:
    if args.tolerance < 0:
        raise ConfigError("--tolerance must be >= 0")
    try:
        fov_cfg = FovConfig.from_degrees(args.fov_deg)
    except ValueError as e:
        raise ConfigError(f"--fov-deg: {e}") from None
    results = read_results(args.results)
    gt = read_ground_truth(args.gt)
    rep = evaluate(results, gt, args.tolerance, fov_cfg)
    args.report.parent.mkdir(parents=True, exist_ok=True)
    args.report.write_text(json.dumps(rep.to_dict(), indent=2) + "\n", encoding="utf-8")
    if args.overlay is not None:
        args.overlay.write_text(json.dumps(overlay_frames(results)) + "\n", encoding="utf-8")
    print(rep.table())
    return EXIT_OK


COMMANDS = {"process": cmd_process, "synth": cmd_synth, "eval": cmd_eval}


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (InputError, OSError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as e:
        # geometry or parsing failures inside otherwise well-formed files
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
