"""kakamatch: unsupervised feature-based identification of individual birds."""

__version__ = "0.1.0"
