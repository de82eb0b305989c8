"""Configuration objects of the pipeline, serializable to YAML and JSON.

Every stage reads its parameters from one of the dataclasses below. They are grouped in an
:py:class:`ExperimentConfig` that :py:func:`load_config` and :py:func:`save_config` read and write.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Optional

import yaml
from yamlable import YamlAble, yaml_info


class _Section(YamlAble):
    """Shared dict conversion of the configuration sections."""

    def to_dict(self) -> dict:
        """Return the section as a plain dictionary."""
        return asdict(self)  # type: ignore[call-overload]

    @classmethod
    def from_dict(cls, values: dict | None) -> Any:
        """Build the section from a dictionary, rejecting unknown keys."""
        values = dict(values or {})
        known = {f.name for f in fields(cls)}  # type: ignore[arg-type]
        unknown = set(values) - known
        if unknown:
            raise ValueError(f"Unknown {cls.__name__} keys: {sorted(unknown)}")
        return cls(**values)

    def __to_yaml_dict__(self) -> dict:  # noqa: D105
        return self.to_dict()

    @classmethod
    def __from_yaml_dict__(cls, dct: dict, yaml_tag: str) -> Any:  # noqa: D105
        return cls.from_dict(dct)


@yaml_info(yaml_tag_ns="liveproof")
@dataclass
class MotionConfig(_Section):
    """Parameters of the frame based and accelerometer based motion extraction."""

    fps: float = 30.0
    stride: int = 5
    subpixel: bool = True
    hann: bool = False
    alpha: float = 0.8
    stillness_threshold: float = 0.1
    stillness_window: float = 0.25
    unit_scale: float = 100.0
    "Multiplier from integrated metres to motion units (centimetres)."

    def __post_init__(self):
        """Check the ranges."""
        if self.stride < 1:
            raise ValueError(f"stride must be >= 1, got {self.stride}")
        if not 0 < self.alpha < 1:
            raise ValueError(f"alpha must be in (0, 1), got {self.alpha}")


@yaml_info(yaml_tag_ns="liveproof")
@dataclass
class FeatureConfig(_Section):
    """Parameters of the chunk descriptor."""

    rate_hz: float = 10.0
    overlap_fraction: float = 0.05
    penalty: float = 2.0

    def __post_init__(self):
        """Check the ranges."""
        if self.rate_hz <= 0:
            raise ValueError(f"rate_hz must be positive, got {self.rate_hz}")


@yaml_info(yaml_tag_ns="liveproof")
@dataclass
class ChunkConfig(_Section):
    """Parameters of the chunking strategies."""

    length: float = 6.0
    strategy: str = "segment"
    k: Optional[int] = None
    keep_remainder: bool = False
    retries: int = 100

    def __post_init__(self):
        """Check the strategy name."""
        if self.strategy not in ("sequential", "segment", "randomized"):
            raise ValueError(f"Unknown chunking strategy {self.strategy!r}")
        if self.length <= 0:
            raise ValueError(f"length must be positive, got {self.length}")


@yaml_info(yaml_tag_ns="liveproof")
@dataclass
class AttackConfig(_Section):
    """Parameters of the attack generators."""

    p: float = 0.1
    c_range: list = field(default_factory=lambda: [1.0, 2.0])
    i_choices: list = field(default_factory=lambda: [2, 3])
    clusters: int = 6
    cluster_retries: int = 10
    snippet_s: float = 0.5
    snippet_points: int = 10
    pfa_fraction: float = 0.1
    sandwich_window_s: float = 0.5
    sandwich_lag_range: list = field(default_factory=lambda: [0.2, 0.5])
    sandwich_noise: float = 0.3
    stitch_count: int = 3


@yaml_info(yaml_tag_ns="liveproof")
@dataclass
class SynthConfig(_Section):
    """Parameters of the synthetic genuine sample generator."""

    jitter_band_hz: list = field(default_factory=lambda: [0.5, 2.5])
    jitter_amplitude: float = 1.0
    "Standard deviation of the hand shake displacement, in centimetres."
    pan_rate: float = 8.0
    "Camera pan speed of the scanning categories, in centimetres per second."
    follow_rate: float = 6.0
    gait_frequency_hz: float = 1.8
    gait_amplitude: float = 1.5
    close_gain: float = 0.8
    far_gain: float = 0.55
    video_noise: float = 0.05
    accel_noise: float = 0.02
    inertia_tau: float = 0.15
    tilt_deg: float = 5.0
    accel_rate_hz: float = 16.67
    fps: float = 30.0
    stride: int = 5


@yaml_info(yaml_tag_ns="liveproof")
@dataclass
class ModelConfig(_Section):
    """Parameters of the chunk and sample classifiers."""

    kind: str = "random_forest"
    n_trees: int = 100
    max_depth: Optional[int] = None
    min_leaf: int = 2
    class_weights: Optional[dict] = None
    n_jobs: int = 1

    def __post_init__(self):
        """Check the model kind."""
        if self.kind not in ("tree", "random_forest", "bagging"):
            raise ValueError(f"Unknown model kind {self.kind!r}")


@yaml_info(yaml_tag_ns="liveproof")
@dataclass
class FusionConfig(_Section):
    """Thresholds of the sample level decision."""

    vote_thresholds: list = field(default_factory=lambda: [0.1, 0.3, 0.5, 0.7])
    prob_thresholds: list = field(default_factory=lambda: [0.6, 0.7, 0.8])
    max_labels: int = 32


_SECTIONS = {
    "motion": MotionConfig,
    "features": FeatureConfig,
    "chunking": ChunkConfig,
    "attacks": AttackConfig,
    "synth": SynthConfig,
    "model": ModelConfig,
    "fusion": FusionConfig,
}


@yaml_info(yaml_tag_ns="liveproof")
@dataclass
class ExperimentConfig(_Section):
    """The whole configuration of a run."""

    seed: int = 0
    folds: int = 10
    motion: MotionConfig = field(default_factory=MotionConfig)
    features: FeatureConfig = field(default_factory=FeatureConfig)
    chunking: ChunkConfig = field(default_factory=ChunkConfig)
    attacks: AttackConfig = field(default_factory=AttackConfig)
    synth: SynthConfig = field(default_factory=SynthConfig)
    model: ModelConfig = field(default_factory=ModelConfig)
    fusion: FusionConfig = field(default_factory=FusionConfig)

    @classmethod
    def from_dict(cls, values: dict | None) -> ExperimentConfig:
        """Build the configuration from nested dictionaries."""
        values = dict(values or {})
        unknown = set(values) - {"seed", "folds", *_SECTIONS}
        if unknown:
            raise ValueError(f"Unknown configuration keys: {sorted(unknown)}")
        sections = {k: c.from_dict(values.get(k)) for k, c in _SECTIONS.items()}
        return cls(seed=int(values.get("seed", 0)), folds=int(values.get("folds", 10)), **sections)


def load_config(path: str | Path | None = None) -> ExperimentConfig:
    """Load a configuration file, ``.json`` or ``.yml``/``.yaml``.

    Parameters:
        path: The file to read. The default configuration is returned when ``None``.

    Returns:
        The configuration, missing keys taking their default value.
    """
    if path is None:
        return ExperimentConfig()
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"No such configuration file: {path}")
    text = path.read_text()
    if path.suffix == ".json":
        return ExperimentConfig.from_dict(json.loads(text))
    if path.suffix in (".yml", ".yaml"):
        if text.lstrip().startswith("!yamlable"):
            return ExperimentConfig.loads_yaml(text)
        return ExperimentConfig.from_dict(yaml.safe_load(text))
    raise ValueError(f"Unsupported configuration format {path.suffix!r}, use .json or .yml")


def save_config(config: ExperimentConfig, path: str | Path) -> Path:
    """Write a configuration in the format given by the file extension."""
    path = Path(path)
    if path.suffix == ".json":
        path.write_text(json.dumps(config.to_dict(), indent=2))
    elif path.suffix in (".yml", ".yaml"):
        path.write_text(config.dumps_yaml(default_flow_style=False))
    else:
        raise ValueError(f"Unsupported configuration format {path.suffix!r}, use .json or .yml")
    return path
