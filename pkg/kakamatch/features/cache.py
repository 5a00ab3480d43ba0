"""
Feature cache: extract every corpus image once and keep the result on disk.

Images are processed in parallel with a process pool; results are merged in
image-id order so logs and summaries never depend on scheduling.
"""

from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from kakamatch.config import PipelineConfig
from kakamatch.features.extractor import FeatureSet, extract
from kakamatch.features.featureio import FEATURE_SUFFIX, write_features
from kakamatch.imaging.image import Image, crop
from kakamatch.imaging.pnm import read_pnm
from kakamatch.logger import get_logger
from kakamatch.segmentation.localisation import build_localisation_mask
from kakamatch.utils.exceptions import KakaMatchError
from kakamatch.utils.naming import clip_id

logger = get_logger(__name__)


@dataclass
class ExtractionTask:
    """One image to extract, with the background used for its mask."""
    image_id: str
    image_path: Path
    feature_path: Path
    background_path: Optional[Path] = None


@dataclass
class ExtractionOutcome:
    """Result of a single extraction task."""
    image_id: str
    feature_path: str
    written: bool
    n_features: int = 0
    error: Optional[str] = None


@dataclass
class CorpusSummary:
    """Counts for one extract_corpus run."""
    written: int = 0
    skipped: int = 0
    failed: List[ExtractionOutcome] = field(default_factory=list)
    outcomes: List[ExtractionOutcome] = field(default_factory=list)


def preprocess(image: Image, cfg: PipelineConfig) -> Image:
    """Apply the configured crop, if any."""
    if cfg.preprocess.crop is not None:
        return crop(image, cfg.preprocess.crop)
    return image


def extract_image_features(
    image: Image,
    cfg: PipelineConfig,
    background: Optional[Image] = None,
    image_id: str = "",
) -> FeatureSet:
    """
    Extract one image's features, masked when a background is given.

    Both images go through the configured crop first.
    """
    image = preprocess(image, cfg)
    mask = None
    if background is not None:
        mask = build_localisation_mask(image, preprocess(background, cfg), cfg, image_id=image_id)
    return extract(image, mask=mask, cfg=cfg, image_id=image_id)


def process_single_image(task: ExtractionTask, cfg: PipelineConfig) -> ExtractionOutcome:
    """
    Extract and write one feature file.

    Runs in worker processes; failures come back as outcomes instead of
    exceptions.
    """
    try:
        image = read_pnm(task.image_path)
        background = read_pnm(task.background_path) if task.background_path else None
        features = extract_image_features(image, cfg, background, image_id=task.image_id)
        write_features(task.feature_path, features)
    except (KakaMatchError, OSError) as e:
        return ExtractionOutcome(task.image_id, str(task.feature_path), written=False, error=str(e))
    return ExtractionOutcome(task.image_id, str(task.feature_path), written=True, n_features=len(features))


def plan_tasks(
    image_paths: Sequence[Path],
    out_dir: Path,
    background: Optional[Path] = None,
    backgrounds_dir: Optional[Path] = None,
) -> List[ExtractionTask]:
    """
    One task per image; a per-clip ``<backgrounds_dir>/<clip>.pgm`` wins over
    the corpus-level ``background``.
    """
    tasks = []
    for path in sorted(Path(p) for p in image_paths):
        image_id = path.stem
        chosen = background
        if backgrounds_dir is not None:
            per_clip = Path(backgrounds_dir) / f"{clip_id(image_id)}.pgm"
            if per_clip.exists():
                chosen = per_clip
        tasks.append(ExtractionTask(
            image_id=image_id,
            image_path=path,
            feature_path=Path(out_dir) / f"{image_id}{FEATURE_SUFFIX}",
            background_path=chosen,
        ))
    return tasks


def extract_corpus(
    image_paths: Sequence[Path],
    out_dir: Path,
    cfg: PipelineConfig,
    background: Optional[Path] = None,
    backgrounds_dir: Optional[Path] = None,
    force: bool = False,
    threads: Optional[int] = None,
) -> CorpusSummary:
    """
    Write a SIFTv1 file for every image that does not have one yet.

    Args:
        image_paths: Images to process
        out_dir: Feature directory
        cfg: Pipeline configuration
        background: Corpus-level background image
        backgrounds_dir: Directory of per-clip backgrounds
        force: Re-extract even when the feature file exists
        threads: Worker processes (defaults to cfg.threads; 1 runs inline)

    Returns:
        CorpusSummary with written/skipped counts and failures
    """
    threads = threads or cfg.threads
    summary = CorpusSummary()
    pending: List[ExtractionTask] = []
    for task in plan_tasks(image_paths, out_dir, background, backgrounds_dir):
        if task.feature_path.exists() and not force:
            summary.skipped += 1
            logger.debug(f"Skipping {task.image_id}: {task.feature_path.name} exists")
        else:
            pending.append(task)

    results: Dict[str, ExtractionOutcome] = {}
    if threads <= 1 or len(pending) <= 1:
        for task in pending:
            results[task.image_id] = process_single_image(task, cfg)
    else:
        logger.info(f"Extracting {len(pending)} images with {threads} workers...")
        with ProcessPoolExecutor(max_workers=threads) as executor:
            futures = {executor.submit(process_single_image, task, cfg): task for task in pending}
            for future in as_completed(futures):
                task = futures[future]
                try:
                    results[task.image_id] = future.result()
                except Exception as e:
                    results[task.image_id] = ExtractionOutcome(
                        task.image_id, str(task.feature_path), written=False, error=str(e)
                    )

    for image_id in sorted(results):
        outcome = results[image_id]
        summary.outcomes.append(outcome)
        if outcome.written:
            summary.written += 1
            logger.debug(f"{image_id}: {outcome.n_features} features")
        else:
            summary.failed.append(outcome)
            logger.warning(f"Failed to extract {image_id}: {outcome.error}")

    logger.info(
        f"Feature cache: {summary.written} written, {summary.skipped} skipped, {len(summary.failed)} failed"
    )
    return summary
