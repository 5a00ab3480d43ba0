"""SIFTv1 feature files: a count header followed by one JSON record per feature."""

import json
from pathlib import Path
from typing import List, Optional

import numpy as np

from kakamatch.features.descriptors import DESCRIPTOR_SIZE
from kakamatch.features.extractor import FeatureSet
from kakamatch.features.keypoints import Keypoint
from kakamatch.utils.exceptions import FeatureFileError

MAGIC = "SIFTv1"
FEATURE_SUFFIX = ".sift"


def _sig9(value: float) -> float:
    return float(f"{float(value):.9g}")


def encode_features(features: FeatureSet) -> str:
    """
    Serialize a FeatureSet.

    Each record is ``{"kp": [x, y, sigma, orientation, response], "d": [...],
    "scale": [octave, interval]}`` with reals rounded to 9 significant digits.
    """
    lines = [f"{MAGIC} {len(features)}"]
    for kp, descriptor in features:
        record = {
            "kp": [_sig9(kp.x), _sig9(kp.y), _sig9(kp.sigma), _sig9(kp.orientation), _sig9(kp.response)],
            "d": [_sig9(v) for v in descriptor],
            "scale": [int(kp.octave), _sig9(kp.interval)],
        }
        lines.append(json.dumps(record, separators=(",", ":")))
    return "\n".join(lines) + "\n"


def decode_features(text: str, image_id: str = "") -> FeatureSet:
    """
    Parse a SIFTv1 document.

    Records without a ``scale`` entry load with octave 0 and interval 0.

    Raises:
        FeatureFileError: On a bad header, a malformed record or a count
            mismatch
    """
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise FeatureFileError("Empty feature file")
    header = lines[0].split()
    if len(header) != 2 or header[0] != MAGIC:
        raise FeatureFileError(f"Bad feature file header: {lines[0]!r}")
    try:
        count = int(header[1])
    except ValueError:
        raise FeatureFileError(f"Bad feature count in header: {header[1]!r}")

    records = lines[1:]
    if len(records) != count:
        raise FeatureFileError(f"Header announces {count} features, found {len(records)}")

    keypoints: List[Keypoint] = []
    descriptors = np.zeros((count, DESCRIPTOR_SIZE))
    for i, line in enumerate(records):
        try:
            record = json.loads(line)
            x, y, sigma, orientation, response = (float(v) for v in record["kp"])
            values = [float(v) for v in record["d"]]
            octave, interval = record.get("scale", [0, 0.0])
        except (ValueError, KeyError, TypeError) as e:
            raise FeatureFileError(f"Malformed feature record {i + 1}: {e}")
        if len(values) != DESCRIPTOR_SIZE:
            raise FeatureFileError(f"Feature record {i + 1} has {len(values)} descriptor values")
        keypoints.append(Keypoint(
            x=x, y=y, octave=int(octave), interval=float(interval),
            sigma=sigma, orientation=orientation, response=response,
        ))
        descriptors[i] = values

    return FeatureSet(keypoints=keypoints, descriptors=descriptors, image_id=image_id)


def write_features(path: Path, features: FeatureSet) -> None:
    """Write a feature file, creating parent directories."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(encode_features(features), encoding="utf-8")


def read_features(path: Path, image_id: Optional[str] = None) -> FeatureSet:
    """
    Load a feature file; the image id defaults to the file stem.

    Raises:
        FeatureFileError: If the file is malformed
        OSError: If the file cannot be read
    """
    path = Path(path)
    return decode_features(path.read_text(encoding="utf-8"), image_id if image_id is not None else path.stem)
