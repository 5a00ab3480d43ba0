"""CLI entry point for kakamatch."""

import argparse
import sys
from pathlib import Path
from typing import List, NoReturn, Optional

from rich.markup import escape

from kakamatch import __version__
from kakamatch.commands import (
    cmd_compare_matchers,
    cmd_evaluate,
    cmd_features,
    cmd_match,
    cmd_rank,
    cmd_select_frames,
    cmd_synth,
    cmd_visualize,
    console,
)
from kakamatch.config import PipelineConfig, load_config
from kakamatch.evaluation.synthetic import REFERENCE_SIZE
from kakamatch.logger import get_logger, setup_logging
from kakamatch.matching.matchers import STRATEGIES
from kakamatch.segmentation.frames import PROBE_THRESHOLD
from kakamatch.utils.exceptions import KakaMatchError

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class UsageErrorParser(argparse.ArgumentParser):
    """ArgumentParser that exits with status 1 on usage errors."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = UsageErrorParser(
        prog="kakamatch",
        description="Feature-based individual identification: localise, extract, match, rank, evaluate",
        formatter_class=argparse.RawDescriptionHelpFormatter
    )
    parser.add_argument('--version', action='version', version=f"%(prog)s {__version__}")
    parser.add_argument('--config', type=Path, help='YAML config file (default: $KAKAMATCH_CONFIG, then config/default.yaml)')
    parser.add_argument('--seed', type=int, help='Global seed')
    parser.add_argument('--threads', type=int, help='Worker processes')
    parser.add_argument('--force', action='store_true', help='Recompute outputs that already exist')
    parser.add_argument('--set', dest='overrides', action='append', default=[], metavar='KEY=VALUE',
                        help='Override a config value, e.g. --set ransac.iters=2000 (repeatable)')
    parser.add_argument('--log-level', help='Logging level (DEBUG, INFO, WARNING, ERROR)')

    subparsers = parser.add_subparsers(dest='command', help='Command to run')

    # select-frames command
    frames_parser = subparsers.add_parser('select-frames', help='Keep frames with the subject over the probe point')
    frames_parser.add_argument('in_dir', type=Path, help='Directory of decoded frames')
    frames_parser.add_argument('-o', '--out', type=Path, required=True, help='Manifest file to write')
    frames_parser.add_argument('--threshold', type=int, default=PROBE_THRESHOLD, help=f'Probe threshold (default: {PROBE_THRESHOLD})')

    # features command
    features_parser = subparsers.add_parser('features', help='Extract (masked) SIFT features for a corpus')
    features_parser.add_argument('in_dir', type=Path, help='Directory of PGM/PPM images')
    features_parser.add_argument('-o', '--out', type=Path, required=True, help='Feature directory')
    features_parser.add_argument('--background', type=Path, help='Corpus-level background image')
    features_parser.add_argument('--backgrounds-dir', type=Path, help='Per-clip backgrounds (default: <in_dir>/backgrounds)')

    # match command
    match_parser = subparsers.add_parser('match', help='Match two feature files')
    match_parser.add_argument('feat_a', type=Path, help='Query feature file')
    match_parser.add_argument('feat_b', type=Path, help='Gallery feature file')
    match_parser.add_argument('-o', '--out', type=Path, help='Report JSON (default: stdout)')
    match_parser.add_argument('--strategy', choices=STRATEGIES, help='Preliminary matcher')

    # compare-matchers command
    compare_parser = subparsers.add_parser('compare-matchers', help='Compare NN, MNN and NNDR on one pair')
    compare_parser.add_argument('feat_a', type=Path, help='Query feature file')
    compare_parser.add_argument('feat_b', type=Path, help='Gallery feature file')
    compare_parser.add_argument('-o', '--out', type=Path, help='Comparison JSON (default: stdout)')

    # rank command
    rank_parser = subparsers.add_parser('rank', help='Rank the gallery for one query image')
    rank_parser.add_argument('query', help='Query image id')
    rank_parser.add_argument('--features', type=Path, required=True, help='Feature directory')
    rank_parser.add_argument('-o', '--out', type=Path, help='Ranking JSON (default: stdout)')
    rank_parser.add_argument('--csv', type=Path, help='Also write the ranking as CSV')
    rank_parser.add_argument('--top', type=int, help='Keep only the first N results')
    rank_parser.add_argument('--strategy', choices=STRATEGIES, help='Preliminary matcher')
    rank_parser.add_argument('--criterion', choices=('similarity', 'matches', 'mean_distance'), help='Ranking criterion')

    # evaluate command
    evaluate_parser = subparsers.add_parser('evaluate', help='Top-X accuracy over the labelled images')
    evaluate_parser.add_argument('--features', type=Path, required=True, help='Feature directory')
    evaluate_parser.add_argument('--labels', type=Path, help='filename,label CSV (default: labels.csv beside the features)')
    evaluate_parser.add_argument('-x', dest='xs', type=int, nargs='+', default=[1, 2, 3], help='Values of X (default: 1 2 3)')
    evaluate_parser.add_argument('-o', '--out', type=Path, help='Evaluation JSON (default: stdout)')
    evaluate_parser.add_argument('--text', type=Path, help='Also write the tables as plain text')
    evaluate_parser.add_argument('--strategy', choices=STRATEGIES, help='Preliminary matcher')
    evaluate_parser.add_argument('--criterion', choices=('similarity', 'matches', 'mean_distance'), help='Ranking criterion')

    # synth command
    synth_parser = subparsers.add_parser('synth', help='Generate a labelled synthetic corpus')
    synth_parser.add_argument('out_dir', type=Path, nargs='?', help='Output directory (default: <output.base_dir>/synth)')
    synth_parser.add_argument('--individuals', type=int, default=10, help='Number of individuals (default: 10)')
    synth_parser.add_argument('--views', type=int, default=12, help='Views per individual (default: 12)')
    synth_parser.add_argument('--size', type=int, default=REFERENCE_SIZE, help=f'Image side in pixels (default: {REFERENCE_SIZE})')

    # visualize command
    visualize_parser = subparsers.add_parser('visualize', help='Draw a match report over both images')
    visualize_parser.add_argument('image_a', type=Path, help='Query image')
    visualize_parser.add_argument('image_b', type=Path, help='Gallery image')
    visualize_parser.add_argument('report', type=Path, help='Report JSON from the match command')
    visualize_parser.add_argument('-o', '--out', type=Path, required=True, help='Output PPM')

    return parser


def resolve_config(args: argparse.Namespace) -> PipelineConfig:
    """Merge file, environment, ``--set`` and flag values; flags win."""
    flags = {
        "seed": args.seed,
        "threads": args.threads,
        "logging.level": args.log_level,
        "match.strategy": getattr(args, "strategy", None),
        "rank.criterion": getattr(args, "criterion", None),
    }
    return load_config(args.config, args.overrides, **flags)


def run_command(args: argparse.Namespace, cfg: PipelineConfig) -> int:
    """Dispatch one parsed command; returns the exit status."""
    if args.command == 'select-frames':
        cmd_select_frames(args.in_dir, args.out, threshold=args.threshold)
    elif args.command == 'features':
        summary = cmd_features(
            args.in_dir,
            args.out,
            cfg,
            background=args.background,
            backgrounds_dir=args.backgrounds_dir,
            force=args.force,
            threads=cfg.threads,
        )
        if summary.failed:
            return EXIT_DATA
    elif args.command == 'match':
        cmd_match(args.feat_a, args.feat_b, cfg, out_path=args.out)
    elif args.command == 'compare-matchers':
        cmd_compare_matchers(args.feat_a, args.feat_b, cfg, out_path=args.out)
    elif args.command == 'rank':
        cmd_rank(
            args.query,
            args.features,
            cfg,
            out_path=args.out,
            csv_path=args.csv,
            top=args.top,
            threads=cfg.threads,
        )
    elif args.command == 'evaluate':
        cmd_evaluate(
            args.features,
            cfg,
            labels=args.labels,
            xs=args.xs,
            out_path=args.out,
            text_path=args.text,
            threads=cfg.threads,
        )
    elif args.command == 'synth':
        out_dir = args.out_dir if args.out_dir is not None else cfg.output_dir("synth")
        cmd_synth(out_dir, args.individuals, args.views, cfg.seed, size=args.size)
    elif args.command == 'visualize':
        cmd_visualize(args.image_a, args.image_b, args.report, args.out)
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """
    kakamatch command-line interface.

    Returns:
        0 on success, 1 on usage errors, 2 on data, configuration or I/O errors
    """
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command is None:
        console.print("[red]Error: A command is required[/red]")
        parser.print_help(sys.stderr)
        return EXIT_USAGE

    try:
        cfg = resolve_config(args)
        setup_logging(cfg.logging)
        logger.debug(f"Running {args.command} with seed {cfg.seed}, {cfg.threads} thread(s)")
        return run_command(args, cfg)
    except (KakaMatchError, OSError) as e:
        console.print(f"[red]Error: {escape(str(e))}[/red]")
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
