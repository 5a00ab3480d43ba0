"""Tests for configuration loading, overrides, logging setup and seed derivation."""

import logging
from pathlib import Path

import pytest
from rich.logging import RichHandler

from kakamatch.config import CONFIG_ENV_VAR, ConfigManager, LoggingConfig, PipelineConfig, load_config, parse_override
from kakamatch.logger import get_logger, setup_logging
from kakamatch.utils.exceptions import ConfigurationError
from kakamatch.utils.seeding import derive_seed

DEFAULT_YAML = Path(__file__).parent.parent / "config" / "default.yaml"


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in (CONFIG_ENV_VAR, "KAKAMATCH_LOG_LEVEL", "KAKAMATCH_OUTPUT_DIR", "KAKAMATCH_SEED"):
        monkeypatch.delenv(name, raising=False)


class TestDefaults:
    def test_values(self):
        cfg = PipelineConfig()
        assert (cfg.seed, cfg.threads) == (0, 1)
        assert (cfg.match.strategy, cfg.match.ratio) == ("mnn", 0.8)
        assert (cfg.ransac.iters, cfg.ransac.inlier_px) == (1000, 3.0)
        assert (cfg.mask.min_blob_frac, cfg.mask.blur, cfg.mask.keypoint_threshold) == (0.02, 9, 0.75)
        assert cfg.rank.criterion == "similarity"
        assert cfg.sift.n_octaves is None

    def test_shipped_file_matches_defaults(self):
        assert ConfigManager(DEFAULT_YAML).config == PipelineConfig()

    def test_kmeans_seed_follows_global_seed(self):
        assert PipelineConfig(seed=4).kmeans_seed == 4
        assert PipelineConfig(seed=4, kmeans={"seed": 11}).kmeans_seed == 11

    def test_output_dir(self):
        cfg = PipelineConfig(output={"base_dir": "out"})
        assert cfg.output_dir() == Path("out")
        assert cfg.output_dir("synth") == Path("out") / "synth"


class TestConfigManager:
    def test_yaml_round_trip(self, tmp_path):
        cfg = PipelineConfig(
            seed=3,
            match={"strategy": "nndr", "ratio": 0.7},
            preprocess={"crop": (1, 2, 30, 40)},
            rank={"criterion": "matches"},
        )
        path = tmp_path / "config.yaml"
        path.write_text(cfg.to_yaml())
        assert ConfigManager(path).config == cfg

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError):
            ConfigManager(tmp_path / "missing.yaml")

    def test_file_must_hold_a_mapping(self, tmp_path):
        path = tmp_path / "config.yaml"
        path.write_text("- 1\n- 2\n")
        with pytest.raises(ConfigurationError):
            ConfigManager(path)

    def test_env_var_selects_file(self, tmp_path, monkeypatch):
        path = tmp_path / "config.yaml"
        path.write_text("seed: 21\n")
        monkeypatch.setenv(CONFIG_ENV_VAR, str(path))
        assert ConfigManager().config.seed == 21

    def test_env_overrides(self, monkeypatch):
        monkeypatch.setenv("KAKAMATCH_SEED", "7")
        monkeypatch.setenv("KAKAMATCH_LOG_LEVEL", "DEBUG")
        monkeypatch.setenv("KAKAMATCH_OUTPUT_DIR", "/tmp/kaka")
        cfg = ConfigManager(DEFAULT_YAML).config
        assert cfg.seed == 7
        assert cfg.logging.level == "DEBUG"
        assert cfg.output.base_dir == "/tmp/kaka"


class TestOverrides:
    @pytest.mark.parametrize("item, expected", [
        ("ransac.iters=2000", ("ransac.iters", 2000)),
        ("match.ratio=0.75", ("match.ratio", 0.75)),
        ("sift.upsample=true", ("sift.upsample", True)),
        ("preprocess.crop=null", ("preprocess.crop", None)),
        ("match.strategy=nndr", ("match.strategy", "nndr")),
    ])
    def test_parse(self, item, expected):
        assert parse_override(item) == expected

    @pytest.mark.parametrize("item", ["ransac.iters", "=3"])
    def test_malformed(self, item):
        with pytest.raises(ConfigurationError):
            parse_override(item)

    def test_set_items_apply(self):
        cfg = load_config(DEFAULT_YAML, ["ransac.inlier_px=2.5", "mask.blur=5"])
        assert cfg.ransac.inlier_px == 2.5
        assert cfg.mask.blur == 5

    def test_flags_win(self, monkeypatch):
        monkeypatch.setenv("KAKAMATCH_SEED", "7")
        cfg = load_config(DEFAULT_YAML, ["seed=8"], seed=9, threads=None)
        assert cfg.seed == 9
        assert cfg.threads == 1

    def test_dotted_flag(self):
        assert load_config(DEFAULT_YAML, **{"match.strategy": "nn"}).match.strategy == "nn"

    @pytest.mark.parametrize("item", ["ransac.iterations=5", "mask.blur=8", "match.strategy=knn", "threads=0"])
    def test_invalid_values(self, item):
        with pytest.raises(ConfigurationError):
            load_config(DEFAULT_YAML, [item])

    def test_scalar_is_not_a_section(self):
        with pytest.raises(ConfigurationError):
            load_config(DEFAULT_YAML, ["seed.value=1"])


class TestSeedDerivation:
    def test_deterministic(self):
        assert derive_seed(0, "ransac", "a", "b") == derive_seed(0, "ransac", "a", "b")

    def test_depends_on_every_part(self):
        base = derive_seed(0, "ransac", "a", "b")
        assert derive_seed(1, "ransac", "a", "b") != base
        assert derive_seed(0, "ransac", "b", "a") != base
        assert derive_seed(0, "kmeans", "a", "b") != base

    def test_range(self):
        for seed in (0, 1, 2 ** 62):
            assert 0 <= derive_seed(seed, "x") < 2 ** 63


@pytest.fixture
def restore_root_logger():
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield root
    for handler in root.handlers:
        if handler not in handlers:
            handler.close()
    root.handlers[:] = handlers
    root.setLevel(level)


class TestLogging:
    def test_console_only_by_default(self, restore_root_logger):
        setup_logging(LoggingConfig(level="debug"))
        assert restore_root_logger.level == logging.DEBUG
        assert [type(h) for h in restore_root_logger.handlers] == [RichHandler]

    def test_file_handler_uses_configured_format(self, restore_root_logger, tmp_path):
        log_file = tmp_path / "logs" / "run.log"
        setup_logging(LoggingConfig(file_enabled=True, file_path=str(log_file), format="%(levelname)s|%(message)s"))
        get_logger("kakamatch.test").warning("written")
        for handler in restore_root_logger.handlers:
            handler.flush()
        assert log_file.read_text().splitlines() == ["WARNING|written"]

    def test_unknown_level_falls_back_to_info(self, restore_root_logger):
        setup_logging(LoggingConfig(level="chatty"))
        assert restore_root_logger.level == logging.INFO
