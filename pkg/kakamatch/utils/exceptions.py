"""Custom exceptions for the kakamatch package."""


class KakaMatchError(Exception):
    """Base exception for all kakamatch errors."""
    pass


class ConfigurationError(KakaMatchError):
    """Raised when configuration is invalid or missing."""
    pass


class ArgumentError(KakaMatchError, ValueError):
    """Raised when an operation receives an argument outside its domain."""
    pass


class ImageDecodeError(KakaMatchError):
    """Raised when a PNM byte stream cannot be decoded."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


class DatasetError(KakaMatchError):
    """Raised for unknown image ids, missing feature files or bad label tables."""
    pass


class FeatureFileError(DatasetError):
    """Raised when a feature file is malformed."""
    pass


class DescriptorWindowError(KakaMatchError):
    """Raised when a keypoint's descriptor window cannot be sampled."""
    pass


class FitError(KakaMatchError):
    """Raised when a homography cannot be fitted to a degenerate configuration."""
    pass


class MatchingError(KakaMatchError):
    """Base class for match-set failures that make a pair unscorable."""
    pass


class InsufficientMatchesError(MatchingError):
    """Raised when fewer than four matches reach RANSAC."""
    pass


class NoConsensusError(MatchingError):
    """Raised when RANSAC finds no consensus of at least four matches."""
    pass


class UndefinedScoreError(KakaMatchError):
    """Raised when a similarity score is requested for an empty match set."""
    pass
