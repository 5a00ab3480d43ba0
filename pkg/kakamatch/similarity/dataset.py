"""Dataset index: image ids, clips, labels and cached feature files."""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterator, List, Mapping, Optional

import pandas as pd

from kakamatch.features.extractor import FeatureSet
from kakamatch.features.featureio import FEATURE_SUFFIX, read_features
from kakamatch.logger import get_logger
from kakamatch.utils.exceptions import DatasetError
from kakamatch.utils.naming import clip_id

logger = get_logger(__name__)

LABEL_COLUMNS = ("filename", "label")


@dataclass(frozen=True)
class IndexEntry:
    """One corpus image."""
    image_id: str
    clip_id: str
    label: Optional[str] = None
    feature_path: Optional[Path] = None
    image_path: Optional[Path] = None


@dataclass
class DatasetIndex:
    """Ordered collection of entries with unique image ids."""
    entries: List[IndexEntry] = field(default_factory=list)

    def __post_init__(self):
        self._by_id: Dict[str, IndexEntry] = {}
        for entry in self.entries:
            if entry.image_id in self._by_id:
                raise DatasetError(f"Duplicate image id {entry.image_id!r}")
            self._by_id[entry.image_id] = entry

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[IndexEntry]:
        return iter(self.entries)

    def __contains__(self, image_id: str) -> bool:
        return image_id in self._by_id

    def get(self, image_id: str) -> IndexEntry:
        """
        Look up an entry.

        Raises:
            DatasetError: If the id is unknown
        """
        try:
            return self._by_id[image_id]
        except KeyError:
            raise DatasetError(f"Unknown image id {image_id!r}")

    @property
    def ids(self) -> List[str]:
        return [e.image_id for e in self.entries]

    def labelled(self) -> List[IndexEntry]:
        return [e for e in self.entries if e.label is not None]

    @property
    def labels(self) -> List[str]:
        return sorted({e.label for e in self.entries if e.label is not None})

    @property
    def clips(self) -> List[str]:
        return sorted({e.clip_id for e in self.entries})

    def load_features(self, image_ids: Optional[List[str]] = None) -> Dict[str, FeatureSet]:
        """
        Read cached features for the given ids (all entries by default).

        Raises:
            DatasetError: If an entry has no feature file on disk
        """
        loaded = {}
        for image_id in image_ids if image_ids is not None else self.ids:
            entry = self.get(image_id)
            if entry.feature_path is None or not Path(entry.feature_path).exists():
                raise DatasetError(f"No feature file for {image_id!r}; run the features command first")
            loaded[image_id] = read_features(entry.feature_path, image_id)
        return loaded


def read_labels(labels_csv: Path) -> Dict[str, str]:
    """
    Read a ``filename,label`` table into {image id: label}.

    File extensions are stripped so ``a_1.pgm`` and ``a_1`` name the same
    image. Blank labels are skipped.

    Raises:
        DatasetError: On missing columns or a filename listed twice
    """
    try:
        frame = pd.read_csv(labels_csv, dtype=str, keep_default_na=False)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise DatasetError(f"Cannot parse labels file {labels_csv}: {e}")

    missing = [c for c in LABEL_COLUMNS if c not in frame.columns]
    if missing:
        raise DatasetError(f"Labels file {labels_csv} lacks column(s): {', '.join(missing)}")

    frame["image_id"] = frame["filename"].str.strip().map(lambda name: Path(name).stem)
    frame["label"] = frame["label"].str.strip()
    duplicated = frame.loc[frame["image_id"].duplicated(), "image_id"].tolist()
    if duplicated:
        raise DatasetError(f"Labels file {labels_csv} lists {duplicated[0]!r} more than once")

    frame = frame[frame["label"] != ""]
    return dict(zip(frame["image_id"], frame["label"]))


def write_labels(path: Path, labels: Mapping[str, str]) -> None:
    """Write a ``filename,label`` table sorted by filename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(sorted(labels.items()), columns=list(LABEL_COLUMNS))
    frame.to_csv(path, index=False, lineterminator="\n")


def build_index(
    features_dir: Path,
    labels_csv: Optional[Path] = None,
    images_dir: Optional[Path] = None,
) -> DatasetIndex:
    """
    Index every ``*.sift`` file in ``features_dir``.

    The image id is the file stem and the clip id everything before its last
    underscore. Labels whose filename has no feature file are logged and
    ignored.

    Raises:
        DatasetError: If the directory is missing or the labels are invalid
    """
    features_dir = Path(features_dir)
    if not features_dir.is_dir():
        raise DatasetError(f"Feature directory does not exist: {features_dir}")

    labels = read_labels(labels_csv) if labels_csv is not None else {}
    entries = []
    for path in sorted(features_dir.glob(f"*{FEATURE_SUFFIX}")):
        image_id = path.stem
        image_path = None
        if images_dir is not None:
            for suffix in (".pgm", ".ppm"):
                candidate = Path(images_dir) / f"{image_id}{suffix}"
                if candidate.exists():
                    image_path = candidate
                    break
        entries.append(IndexEntry(
            image_id=image_id,
            clip_id=clip_id(image_id),
            label=labels.get(image_id),
            feature_path=path,
            image_path=image_path,
        ))

    known = {e.image_id for e in entries}
    unknown = sorted(set(labels) - known)
    if unknown:
        logger.warning(f"Ignoring {len(unknown)} label(s) without feature files, e.g. {unknown[0]!r}")

    logger.info(f"Indexed {len(entries)} images in {len({e.clip_id for e in entries})} clips")
    return DatasetIndex(entries)
