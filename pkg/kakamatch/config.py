"""Configuration management for kakamatch."""

import os
from pathlib import Path
from typing import Any, Dict, Iterable, Literal, Optional, Tuple

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from kakamatch.utils.exceptions import ConfigurationError


# Load environment variables from .env file if it exists
load_dotenv()

CONFIG_ENV_VAR = "KAKAMATCH_CONFIG"


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class KMeansConfig(_Section):
    """k-means segmentation configuration."""
    seed: Optional[int] = Field(default=None, ge=0, description="Overrides the global seed for k-means stages")
    max_iters: int = Field(default=100, ge=1)
    tol: float = Field(default=1e-4, gt=0)


class MaskConfig(_Section):
    """Localisation mask configuration."""
    min_blob_frac: float = Field(default=0.02, ge=0, le=1)
    blur: int = Field(default=9, ge=1)
    keypoint_threshold: float = Field(default=0.75, ge=0, le=1)
    bg_policy: Literal["brighter-is-background", "border-majority"] = Field(default="brighter-is-background")

    @field_validator("blur")
    @classmethod
    def _blur_is_odd(cls, value: int) -> int:
        if value % 2 == 0:
            raise ValueError("mask.blur must be odd")
        return value


class SiftConfig(_Section):
    """SIFT detector/descriptor configuration."""
    sigma: float = Field(default=1.6, gt=0)
    intervals: int = Field(default=3, ge=1)
    n_octaves: Optional[int] = Field(default=None, ge=1, description="None selects the octave count automatically")
    min_size: int = Field(default=16, ge=16)
    assumed_blur: float = Field(default=0.5, ge=0)
    contrast_thresh: float = Field(default=0.03, ge=0)
    edge_ratio: float = Field(default=10.0, gt=1)
    upsample: bool = Field(default=False)


class MatchConfig(_Section):
    """Preliminary matching configuration."""
    strategy: Literal["nn", "mnn", "nndr"] = Field(default="mnn")
    ratio: float = Field(default=0.8, gt=0, le=1)


class RansacConfig(_Section):
    """RANSAC mismatch removal configuration."""
    iters: int = Field(default=1000, ge=1)
    inlier_px: float = Field(default=3.0, gt=0)


class RankConfig(_Section):
    """Gallery ranking configuration."""
    criterion: Literal["similarity", "matches", "mean_distance"] = Field(default="similarity")


class PreprocessConfig(_Section):
    """Image preprocessing configuration."""
    crop: Optional[Tuple[int, int, int, int]] = Field(default=None, description="x, y, width, height")


class OutputConfig(_Section):
    """Output configuration."""
    base_dir: str = Field(default="./output")


class LoggingConfig(_Section):
    """Logging configuration."""
    level: str = Field(default="INFO")
    format: str = Field(default="%(asctime)s - %(name)s - %(levelname)s - %(message)s")
    file_enabled: bool = Field(default=False)
    file_path: str = Field(default="./output/kakamatch.log")


class PipelineConfig(_Section):
    """Main configuration model."""
    seed: int = Field(default=0, ge=0)
    threads: int = Field(default=1, ge=1)
    kmeans: KMeansConfig = Field(default_factory=KMeansConfig)
    mask: MaskConfig = Field(default_factory=MaskConfig)
    sift: SiftConfig = Field(default_factory=SiftConfig)
    match: MatchConfig = Field(default_factory=MatchConfig)
    ransac: RansacConfig = Field(default_factory=RansacConfig)
    rank: RankConfig = Field(default_factory=RankConfig)
    preprocess: PreprocessConfig = Field(default_factory=PreprocessConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)
    logging: LoggingConfig = Field(default_factory=LoggingConfig)

    @property
    def kmeans_seed(self) -> int:
        """Seed used by the k-means stages."""
        return self.kmeans.seed if self.kmeans.seed is not None else self.seed

    def output_dir(self, subdir: Optional[str] = None) -> Path:
        """Output base directory, or a named subdirectory of it."""
        base = Path(self.output.base_dir)
        return base / subdir if subdir else base

    def to_yaml(self) -> str:
        """Serialize to YAML accepted by ConfigManager."""
        return yaml.safe_dump(self.model_dump(mode="json"), sort_keys=False)


def parse_override(item: str) -> Tuple[str, Any]:
    """
    Parse a flat ``section.key=value`` override.

    Values are parsed as YAML scalars, so ``3``, ``1e-4``, ``true`` and
    ``null`` get their natural types.

    Raises:
        ConfigurationError: If the item has no ``=`` or an empty key
    """
    key, sep, raw = item.partition("=")
    key = key.strip()
    if not sep or not key:
        raise ConfigurationError(f"Override must look like key=value: {item!r}")
    try:
        value = yaml.safe_load(raw) if raw.strip() else None
    except yaml.YAMLError as e:
        raise ConfigurationError(f"Cannot parse value for {key}: {e}")
    return key, value


def _set_dotted(config_dict: Dict[str, Any], key: str, value: Any) -> None:
    parts = key.split(".")
    node = config_dict
    for part in parts[:-1]:
        child = node.setdefault(part, {})
        if not isinstance(child, dict):
            raise ConfigurationError(f"Cannot set {key}: {part} is not a section")
        node = child
    node[parts[-1]] = value


class ConfigManager:
    """Configuration manager with support for YAML files, environment variables and flag overrides."""

    def __init__(
        self,
        config_path: Optional[Path] = None,
        overrides: Optional[Dict[str, Any]] = None
    ):
        """
        Initialize configuration manager.

        Args:
            config_path: Optional path to YAML configuration file.
                        Falls back to $KAKAMATCH_CONFIG, then config/default.yaml
            overrides: Dotted-key overrides applied last (flags win)
        """
        if config_path is None:
            env_path = os.environ.get(CONFIG_ENV_VAR)
            if env_path:
                config_path = Path(env_path)
            else:
                local_config = Path(__file__).parent.parent / "config" / "default.yaml"
                if local_config.exists():
                    config_path = local_config
        elif not config_path.exists():
            raise ConfigurationError(f"Config file not found: {config_path}")

        self.config_path = config_path
        self.overrides = dict(overrides or {})
        self._config: Optional[PipelineConfig] = None
        self._load_config()

    def _load_config(self) -> None:
        """Load configuration from file, environment variables and overrides."""
        config_dict: Dict[str, Any] = {}

        if self.config_path and self.config_path.exists():
            try:
                with open(self.config_path) as f:
                    config_dict = yaml.safe_load(f) or {}
            except (OSError, yaml.YAMLError) as e:
                raise ConfigurationError(f"Failed to load config file {self.config_path}: {e}")
            if not isinstance(config_dict, dict):
                raise ConfigurationError(f"Config file {self.config_path} must contain a mapping")

        config_dict = self._apply_env_overrides(config_dict)

        for key, value in self.overrides.items():
            _set_dotted(config_dict, key, value)

        try:
            self._config = PipelineConfig(**config_dict)
        except ValidationError as e:
            raise ConfigurationError(f"Invalid configuration: {e}")

    def _apply_env_overrides(self, config_dict: Dict[str, Any]) -> Dict[str, Any]:
        """Apply environment variable overrides to configuration."""
        if "KAKAMATCH_LOG_LEVEL" in os.environ:
            config_dict.setdefault("logging", {})["level"] = os.environ["KAKAMATCH_LOG_LEVEL"]

        if "KAKAMATCH_OUTPUT_DIR" in os.environ:
            config_dict.setdefault("output", {})["base_dir"] = os.environ["KAKAMATCH_OUTPUT_DIR"]

        if "KAKAMATCH_SEED" in os.environ:
            config_dict["seed"] = os.environ["KAKAMATCH_SEED"]

        return config_dict

    @property
    def config(self) -> PipelineConfig:
        """Get the configuration object."""
        if self._config is None:
            raise ConfigurationError("Configuration not loaded")
        return self._config


def load_config(
    config_path: Optional[Path] = None,
    overrides: Iterable[str] = (),
    **flag_values: Any
) -> PipelineConfig:
    """
    Build a PipelineConfig from file, environment, ``--set`` items and flags.

    Flag values that are None are ignored so unset CLI flags never clobber
    the file.
    """
    merged: Dict[str, Any] = {}
    for item in overrides:
        key, value = parse_override(item)
        merged[key] = value
    for key, value in flag_values.items():
        if value is not None:
            merged[key] = value
    return ConfigManager(config_path, merged).config
