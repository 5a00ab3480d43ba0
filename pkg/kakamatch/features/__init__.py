"""SIFT feature extraction and the on-disk feature cache."""

from kakamatch.features.scale_space import DoGPyramid, ScaleSpace, build_dog, build_scale_space
from kakamatch.features.keypoints import Keypoint, assign_orientations, detect_extrema, refine_keypoints
from kakamatch.features.descriptors import compute_descriptor
from kakamatch.features.extractor import FeatureSet, extract
from kakamatch.features.featureio import read_features, write_features
from kakamatch.features.cache import extract_corpus, extract_image_features

__all__ = [
    'DoGPyramid',
    'ScaleSpace',
    'build_dog',
    'build_scale_space',
    'Keypoint',
    'assign_orientations',
    'detect_extrema',
    'refine_keypoints',
    'compute_descriptor',
    'FeatureSet',
    'extract',
    'read_features',
    'write_features',
    'extract_corpus',
    'extract_image_features',
]
