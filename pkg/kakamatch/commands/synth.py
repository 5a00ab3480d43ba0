"""Synthetic benchmark command."""

from pathlib import Path

from kakamatch.evaluation.synthetic import REFERENCE_SIZE, generate_synthetic_benchmark
from kakamatch.similarity.dataset import DatasetIndex

from .utils import console, get_display_path


def cmd_synth(
    out_dir: Path,
    n_individuals: int,
    views: int,
    seed: int,
    size: int = REFERENCE_SIZE,
) -> DatasetIndex:
    """Write a labelled synthetic corpus under ``out_dir``."""
    console.print(f"\n[bold blue]Generating synthetic corpus[/bold blue]: {n_individuals} x {views} views")
    index = generate_synthetic_benchmark(n_individuals, views, seed, Path(out_dir), size=size)
    console.print(f"[green]✓[/green] {len(index)} images in {get_display_path(Path(out_dir) / 'images')}")
    console.print(f"  Background: {get_display_path(Path(out_dir) / 'background.pgm')}")
    console.print(f"  Labels: {get_display_path(Path(out_dir) / 'labels.csv')}")
    return index
