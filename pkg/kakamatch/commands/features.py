"""Feature extraction command."""

from pathlib import Path
from typing import Optional

from rich.progress import Progress, SpinnerColumn, TextColumn

from kakamatch.config import PipelineConfig
from kakamatch.features.cache import CorpusSummary, extract_corpus
from kakamatch.utils.naming import list_images

from .utils import console, get_display_path, require_dir, require_file

BACKGROUNDS_DIRNAME = "backgrounds"


def cmd_features(
    in_dir: Path,
    out_dir: Path,
    cfg: PipelineConfig,
    background: Optional[Path] = None,
    backgrounds_dir: Optional[Path] = None,
    force: bool = False,
    threads: Optional[int] = None,
) -> CorpusSummary:
    """
    Write one SIFTv1 file per image in ``in_dir``.

    Images are masked with the localisation mask when a background is
    available: a per-clip ``backgrounds/<clip>.pgm`` first, then the
    corpus-level ``background``. Existing feature files are kept unless
    ``force`` is set.

    Args:
        in_dir: Directory of PGM/PPM images
        out_dir: Feature directory
        cfg: Pipeline configuration
        background: Corpus-level background image
        backgrounds_dir: Per-clip backgrounds (defaults to ``<in_dir>/backgrounds``)
        force: Re-extract existing files
        threads: Worker processes

    Returns:
        CorpusSummary of the run
    """
    in_dir = require_dir(in_dir, "Image directory")
    if background is not None:
        background = require_file(background, "Background image")
    if backgrounds_dir is None and (in_dir / BACKGROUNDS_DIRNAME).is_dir():
        backgrounds_dir = in_dir / BACKGROUNDS_DIRNAME
    elif backgrounds_dir is not None:
        backgrounds_dir = require_dir(backgrounds_dir, "Backgrounds directory")

    images = list_images(in_dir)
    console.print(f"\n[bold blue]Extracting features[/bold blue] for {len(images)} images")
    console.print("─" * 50)
    console.print(f"  Masking: {'on' if background or backgrounds_dir else 'off'}")
    console.print(f"  Output: {get_display_path(out_dir)}")

    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        console=console
    ) as progress:
        progress.add_task(description="Extracting SIFT features...", total=None)
        summary = extract_corpus(
            images,
            Path(out_dir),
            cfg,
            background=background,
            backgrounds_dir=backgrounds_dir,
            force=force,
            threads=threads,
        )

    console.print(
        f"[green]✓[/green] {summary.written} written, {summary.skipped} skipped"
    )
    for outcome in summary.failed:
        console.print(f"[red]✗[/red] {outcome.image_id}: {outcome.error}")
    return summary
