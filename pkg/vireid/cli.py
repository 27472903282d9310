"""Command-line front-end.

Subcommands: synth, dist, rerank, eval, schedule, pipeline, sweep.
Every subcommand accepts ``--config FILE.json``; keys mirror the long flag
names (dashes or underscores). Flags given on the command line win over the
file, the file wins over built-in defaults.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from .core.benchmark import RERANK_PARAMS, SYNTH_PARAMS, RerankBenchmark
from .core.config import PipelineConfig, RerankConfig, ScheduleConfig, SynthConfig
from .core.constants import ExitCodes, ScheduleDefaults, SynthDefaults
from .core.curriculum import schedule_table
from .core.distance import euclidean_view, feature_distances
from .core.enums import RerankMode, RetrievalDirection, ScheduleStrategy
from .core.errors import ConfigError, InvalidInputError, VireidError
from .core.kreciprocal import kreciprocal_rerank
from .core.log import configure_logging, get_logger
from .core.metrics import ascii_table, evaluate, format_table
from .core.parallel import resolve_threads
from .core.pipeline import run_eval, write_reports
from .core.storage import dump_matrix, load_matrix, load_split, save_split
from .core.synth import generate
from .core.temporal import temporal_rerank

logger = get_logger(__name__)

_NOT_CONFIGURABLE = {"command", "handler", "config", "verbose", "file_actions"}


# --- Argument groups ------------------------------------------------------
def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="JSON file with option values")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug")


def _workers(parser: argparse.ArgumentParser, progress: bool = False) -> None:
    parser.add_argument("--threads", type=int, help="worker threads (default: $VIREID_THREADS or 1)")
    if progress:
        parser.add_argument("--progress", action="store_true", default=None, help="show progress bars")


def _finish(parser: argparse.ArgumentParser, handler) -> None:
    # config-file values go through the same type and choices checks as flags
    actions = {a.dest: a for a in parser._actions if a.option_strings}
    parser.set_defaults(handler=handler, file_actions=actions)


def _synth_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("synthetic data")
    group.add_argument("--seed", type=int)
    group.add_argument("--num-ids", type=int, help=f"identities (default {SynthDefaults.NUM_IDS})")
    group.add_argument("--cams-per-id", type=int, help=f"cameras per identity (default {SynthDefaults.CAMS_PER_ID})")
    group.add_argument("--frames", type=int, help=f"frames per tracklet (default {SynthDefaults.FRAMES_PER_TRACKLET})")
    group.add_argument("--dim", type=int, help=f"feature dimension (default {SynthDefaults.DIM})")
    group.add_argument("--latent-dim", type=int, help=f"identity subspace dimension (default {SynthDefaults.LATENT_DIM})")
    group.add_argument("--identity-spread", type=float)
    group.add_argument("--modality-offset", type=float)
    group.add_argument("--camera-offset", type=float)
    group.add_argument("--frame-noise", type=float)
    group.add_argument("--direction", choices=[d.value for d in RetrievalDirection])


def _rerank_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("re-ranking")
    group.add_argument("--preset", choices=["default", "large-gallery"])
    group.add_argument("--k1", type=int)
    group.add_argument("--k2", type=int)
    group.add_argument("--lambda1", type=float)
    group.add_argument("--lambda2", type=float)
    group.add_argument("--groups", type=int, help="temporal groups per tracklet (L)")
    group.add_argument("--plain", action="store_true", default=None,
                       help="use k-reciprocal sets without expansion")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vireid", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a seeded synthetic split")
    _common(p)
    _synth_options(p)
    p.add_argument("--out", type=Path, help="output directory")
    _finish(p, cmd_synth)

    p = sub.add_parser("dist", help="query x gallery feature distances")
    _common(p)
    p.add_argument("--input", type=Path, help="manifest file or split directory")
    p.add_argument("--out", type=Path, help="dump stem (writes STEM.bin and STEM.json)")
    p.add_argument("--unsquared", action="store_true", default=None, help="dump Euclidean, not squared, distances")
    _finish(p, cmd_dist)

    p = sub.add_parser("rerank", help="re-ranked distances")
    _common(p)
    _workers(p)
    _rerank_options(p)
    p.add_argument("--input", type=Path)
    p.add_argument("--mode", choices=[RerankMode.KRECIPROCAL.value, RerankMode.TEMPORAL.value])
    p.add_argument("--out", type=Path, help="dump stem")
    _finish(p, cmd_rerank)

    p = sub.add_parser("eval", help="CMC / mAP of a distance dump")
    _common(p)
    p.add_argument("--input", type=Path)
    p.add_argument("--distances", type=Path, help="dump stem; raw feature distances when omitted")
    p.add_argument("--mode", choices=[m.value for m in RerankMode],
                   help="mode that produced the dump, recorded in run.json (default: none without a dump)")
    p.add_argument("--exclude-same-camera", action="store_true", default=None)
    p.add_argument("--out", type=Path, help="report directory")
    _finish(p, cmd_eval)

    p = sub.add_parser("schedule", help="curriculum factor over epochs")
    _common(p)
    p.add_argument("--strategy", choices=[s.value for s in ScheduleStrategy])
    p.add_argument("--value", type=float, help="alpha (fixed), tau (exponential) or phi (cosine)")
    p.add_argument("--epochs", type=int)
    p.add_argument("--csv", action="store_true", default=None)
    p.add_argument("--plot", type=Path, help="PNG path")
    _finish(p, cmd_schedule)

    p = sub.add_parser("pipeline", help="load or synthesise, re-rank and evaluate")
    _common(p)
    _workers(p)
    _synth_options(p)
    _rerank_options(p)
    p.add_argument("--input", type=Path, help="manifest; synthetic data when omitted")
    p.add_argument("--mode", choices=[m.value for m in RerankMode])
    p.add_argument("--both-directions", action="store_true", default=None)
    p.add_argument("--exclude-same-camera", action="store_true", default=None)
    p.add_argument("--out", type=Path, help="report directory")
    p.add_argument("--dump-distances", action="store_true", default=None)
    p.add_argument("--plot", action="store_true", default=None, help="write cmc.png")
    _finish(p, cmd_pipeline)

    p = sub.add_parser("sweep", help="seeded synthetic parameter sweeps")
    _common(p)
    _workers(p, progress=True)
    _synth_options(p)
    _rerank_options(p)
    p.add_argument("--param", choices=sorted(RERANK_PARAMS + SYNTH_PARAMS))
    p.add_argument("--values", help="comma-separated values")
    p.add_argument("--seeds", type=int, help="number of seeds, starting at 1")
    p.add_argument("--mode", choices=[m.value for m in RerankMode])
    p.add_argument("--directional", action="store_true", default=None,
                   help="compare raw, k-reciprocal and temporal ranking per seed")
    _finish(p, cmd_sweep)
    return parser


# --- Option resolution ----------------------------------------------------
def _from_file(action: argparse.Action, value: Any, source: Path) -> Any:
    """Apply a flag's type and choices to the value a config file gives it."""
    flag = action.option_strings[-1]
    if action.nargs == 0:
        if not isinstance(value, bool):
            raise ConfigError(f"{flag} in {source} must be true or false, got {value!r}")
        return value
    if action.type is None:
        if not isinstance(value, str):
            raise ConfigError(f"{flag} in {source} must be a string, got {value!r}")
        converted = value
    else:
        if isinstance(value, bool) or not isinstance(value, (str, int, float)):
            raise ConfigError(f"{flag} in {source} has an invalid value {value!r}")
        if action.type is int and isinstance(value, float) and not value.is_integer():
            raise ConfigError(f"{flag} in {source} must be an integer, got {value!r}")
        if action.type is Path and not isinstance(value, str):
            raise ConfigError(f"{flag} in {source} must be a path string, got {value!r}")
        try:
            converted = action.type(value)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{flag} in {source}: cannot read {value!r} as {action.type.__name__}") from exc
    if action.choices is not None and converted not in action.choices:
        raise ConfigError(f"{flag} in {source} must be one of {sorted(action.choices)}, got {value!r}")
    return converted


def _apply_config_file(args: argparse.Namespace) -> None:
    if args.config is None:
        return
    try:
        payload = json.loads(Path(args.config).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config file {args.config}: {exc}") from exc
    if not isinstance(payload, dict):
        raise ConfigError("config file must hold a JSON object")
    known = set(vars(args)) - _NOT_CONFIGURABLE
    for key, value in payload.items():
        dest = key.replace("-", "_")
        if dest not in known:
            raise ConfigError(f"unknown option {key!r} in {args.config} for '{args.command}'")
        if getattr(args, dest) is None:
            setattr(args, dest, _from_file(args.file_actions[dest], value, args.config))


def _opt(value: Any, default: Any) -> Any:
    return default if value is None else value


def _require(args: argparse.Namespace, name: str) -> Any:
    value = getattr(args, name)
    if value is None:
        raise ConfigError(f"--{name.replace('_', '-')} is required for '{args.command}'")
    return value


def _synth_config(args: argparse.Namespace) -> SynthConfig:
    d = SynthDefaults
    return SynthConfig(
        seed=_opt(args.seed, 0),
        num_ids=_opt(args.num_ids, d.NUM_IDS),
        cams_per_id=_opt(args.cams_per_id, d.CAMS_PER_ID),
        frames_per_tracklet=_opt(args.frames, d.FRAMES_PER_TRACKLET),
        dim=_opt(args.dim, d.DIM),
        latent_dim=_opt(args.latent_dim, d.LATENT_DIM),
        identity_spread=_opt(args.identity_spread, d.IDENTITY_SPREAD),
        modality_offset_scale=_opt(args.modality_offset, d.MODALITY_OFFSET_SCALE),
        camera_offset_scale=_opt(args.camera_offset, d.CAMERA_OFFSET_SCALE),
        frame_noise=_opt(args.frame_noise, d.FRAME_NOISE),
        direction=_opt(args.direction, RetrievalDirection.VISIBLE_TO_INFRARED.value),
    )


def _rerank_config(args: argparse.Namespace) -> RerankConfig:
    base = RerankConfig.preset(_opt(args.preset, "default"))
    changes: Dict[str, Any] = {}
    for dest, field_name in (("k1", "k1"), ("k2", "k2"), ("lambda1", "lambda1"),
                             ("lambda2", "lambda2"), ("groups", "num_groups")):
        if getattr(args, dest) is not None:
            changes[field_name] = getattr(args, dest)
    if args.plain:
        changes["expanded"] = False
    return base.replace(**changes)


# --- Handlers -------------------------------------------------------------
def cmd_synth(args: argparse.Namespace) -> int:
    out = _require(args, "out")
    split = generate(_synth_config(args))
    print(save_split(split, out))
    return ExitCodes.OK


def cmd_dist(args: argparse.Namespace) -> int:
    split = load_split(_require(args, "input"))
    dist = feature_distances(split)
    if args.unsquared:
        dist = euclidean_view(dist)
    bin_path, _ = dump_matrix(dist, _require(args, "out"))
    print(f"{dist.shape[0]}x{dist.shape[1]} {dist.kind} distances -> {bin_path}")
    return ExitCodes.OK


def cmd_rerank(args: argparse.Namespace) -> int:
    split = load_split(_require(args, "input"))
    config = _rerank_config(args)
    threads = resolve_threads(args.threads)
    if RerankMode(_opt(args.mode, RerankMode.TEMPORAL.value)) is RerankMode.KRECIPROCAL:
        dist = kreciprocal_rerank(split, config, threads=threads)
    else:
        dist = temporal_rerank(split, config, threads=threads)
    bin_path, _ = dump_matrix(dist, _require(args, "out"))
    print(f"{dist.shape[0]}x{dist.shape[1]} {dist.kind} distances -> {bin_path}")
    return ExitCodes.OK


def cmd_eval(args: argparse.Namespace) -> int:
    split = load_split(_require(args, "input"))
    if args.distances is None:
        dist = feature_distances(split)
    else:
        dist = load_matrix(args.distances)
        if dist.row_ids != split.query_ids or dist.col_ids != split.gallery_ids:
            raise InvalidInputError("distance dump ids do not match the split's query and gallery order",
                                    stage="evaluate")
    mode = _opt(args.mode, RerankMode.NONE.value if dist.kind == "feature" else dist.kind)
    report = evaluate(dist, split, bool(args.exclude_same_camera), mode=mode)
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        write_reports([report], args.out)
    print(format_table([report]))
    return ExitCodes.OK


def cmd_schedule(args: argparse.Namespace) -> int:
    strategy = ScheduleStrategy(_opt(args.strategy, ScheduleStrategy.COSINE.value))
    if args.value is None and strategy is not ScheduleStrategy.COSINE:
        raise ConfigError(f"--value is required for the {strategy.value} schedule", stage="schedule")
    config = ScheduleConfig(strategy, _opt(args.value, ScheduleDefaults.COSINE_PHI))
    rows = schedule_table(config, _opt(args.epochs, ScheduleDefaults.EPOCHS))
    if args.csv:
        print("epoch,E,alpha")
        for epoch, e, a in rows:
            print(f"{epoch},{e:.6f},{a:.6f}")
    else:
        print(config.label)
        print(ascii_table(["epoch", "E", "alpha"], [[str(ep), f"{e:.4f}", f"{a:.6f}"] for ep, e, a in rows]))
    if args.plot is not None:
        from .plots import plot_schedule
        plot_schedule([config], args.plot)
    return ExitCodes.OK


def cmd_pipeline(args: argparse.Namespace) -> int:
    config = PipelineConfig(
        input_path=args.input,
        synth=None if args.input is not None else _synth_config(args),
        mode=_opt(args.mode, RerankMode.TEMPORAL.value),
        rerank=_rerank_config(args),
        both_directions=bool(args.both_directions),
        exclude_same_camera=bool(args.exclude_same_camera),
        output_dir=args.out,
        dump_distances=bool(args.dump_distances),
        plot=bool(args.plot),
        threads=resolve_threads(args.threads),
    )
    print(format_table(run_eval(config)))
    return ExitCodes.OK


def _parse_values(raw: str) -> List[float]:
    try:
        return [float(v) for v in raw.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"--values must be comma-separated numbers, got {raw!r}") from None


def cmd_sweep(args: argparse.Namespace) -> int:
    bench = RerankBenchmark(
        synth=_synth_config(args),
        rerank=_rerank_config(args),
        threads=resolve_threads(args.threads),
        progress=bool(args.progress),
    )
    seeds = range(1, _opt(args.seeds, 10 if args.directional else 3) + 1)
    if args.directional:
        summary = bench.directional_check(seeds)
        rows = [[str(o.seed), f"{100 * o.raw_map:.2f}", f"{100 * o.kreciprocal_map:.2f}",
                 f"{100 * o.temporal_map:.2f}", "yes" if o.ordered else "no"] for o in summary.outcomes]
        print(ascii_table(["seed", "raw mAP", "kr mAP", "temporal mAP", "ordered"], rows))
        print(f"ordered on {summary.num_ordered} of {len(summary.outcomes)} seeds; "
              f"mean gain {100 * summary.mean_gain:.2f} mAP points")
        return ExitCodes.OK
    param = _require(args, "param")
    points = bench.parameter_sweep(param, _parse_values(_require(args, "values")), seeds,
                                   mode=_opt(args.mode, RerankMode.TEMPORAL.value))
    rows = [[f"{p.value:g}", f"{100 * p.mean_rank1:.2f}", f"{100 * p.mean_map:.2f}"] for p in points]
    print(ascii_table([param, "Rank1", "mAP"], rows))
    return ExitCodes.OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        _apply_config_file(args)
        return args.handler(args)
    except VireidError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except Exception as exc:  # noqa: BLE001
        logger.debug("unexpected failure", exc_info=True)
        print(f"error: [internal] {type(exc).__name__}: {exc}", file=sys.stderr)
        return ExitCodes.INTERNAL_ERROR


if __name__ == "__main__":
    sys.exit(main())
