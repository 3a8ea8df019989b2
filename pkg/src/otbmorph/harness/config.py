"""Experiment configuration: defaults, validation, JSON round-trip."""

import dataclasses
import json
from dataclasses import dataclass

from ..errors import ConfigError
from ..keyselect import STRATEGIES

DEFAULT_MASTER_SEED = 20260814
DEFAULT_TARGET_FMRS = (1e-5, 1e-4, 1e-3, 1e-2)

MODES = ("synthetic", "ingested")
START_MODES = ("running", "fresh")
KEY_ANCHORS = ("reference", "probe")


@dataclass(frozen=True)
class ExperimentConfig:
    """Full description of one verification-and-attack experiment."""

    mode: str = "synthetic"
    dim: int = 64
    param_dim: int = 32
    identity_count: int = 50
    samples_per_identity: int = 88
    performance_split: int = 28
    attack_split: int = 60
    strategies: tuple = STRATEGIES
    target_fmrs: tuple = DEFAULT_TARGET_FMRS
    attack_budget: int = 30
    # Perturbation scale tuned to the synthetic parameter scales below: large
    # enough that hill climbing visibly converges against the unprotected
    # baseline within the 30-attempt budget.
    attack_sigma: float = 0.3
    attack_start_mode: str = "running"
    alpha: float = 0.5
    master_seed: int = DEFAULT_MASTER_SEED
    pool_size: int = 500
    center_scale: float = 0.18
    within_class_scale: float = 0.06
    extractor_bias_scale: float = 0.5
    extractor_noise: float = 0.0
    key_anchor: str = "reference"
    inputs: dict | None = None
    output_dir: str = "out"
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "strategies", tuple(self.strategies))
        object.__setattr__(self, "target_fmrs", tuple(float(f) for f in self.target_fmrs))

    @property
    def attack_reference_count(self) -> int:
        return self.attack_split // 2

    @property
    def attack_probe_count(self) -> int:
        return self.attack_split - self.attack_split // 2

    def validate(self):
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.dim < 2:
            raise ConfigError(f"dim must be >= 2, got {self.dim}")
        if self.param_dim < 1:
            raise ConfigError(f"param_dim must be >= 1, got {self.param_dim}")
        if self.identity_count < 2:
            raise ConfigError(
                f"identity_count must be >= 2, got {self.identity_count}"
            )
        if self.performance_split < 2 or self.performance_split % 2:
            raise ConfigError(
                f"performance_split must be even and >= 2, got {self.performance_split}"
            )
        if self.attack_split < 2:
            raise ConfigError(f"attack_split must be >= 2, got {self.attack_split}")
        if self.performance_split + self.attack_split > self.samples_per_identity:
            raise ConfigError(
                f"splits need {self.performance_split + self.attack_split} samples "
                f"but samples_per_identity is {self.samples_per_identity}"
            )
        seen = set()
        for s in self.strategies:
            if s not in STRATEGIES:
                raise ConfigError(
                    f"unknown strategy {s!r}, expected one of {STRATEGIES}"
                )
            if s in seen:
                raise ConfigError(f"strategy {s!r} listed twice")
            seen.add(s)
        if not self.target_fmrs:
            raise ConfigError("target_fmrs must not be empty")
        for f in self.target_fmrs:
            if not 0.0 < f <= 1.0:
                raise ConfigError(f"target fmr {f} outside (0, 1]")
        if len(set(self.target_fmrs)) != len(self.target_fmrs):
            raise ConfigError("target_fmrs contains duplicates")
        if self.attack_budget < 1:
            raise ConfigError(f"attack_budget must be >= 1, got {self.attack_budget}")
        if not self.attack_sigma >= 0.0:
            raise ConfigError(f"attack_sigma must be >= 0, got {self.attack_sigma}")
        if self.attack_start_mode not in START_MODES:
            raise ConfigError(
                f"attack_start_mode must be one of {START_MODES}, "
                f"got {self.attack_start_mode!r}"
            )
        if self.attack_start_mode == "fresh" and self.attack_probe_count < self.attack_budget:
            raise ConfigError(
                f"fresh start mode needs attack_probe_count >= budget "
                f"({self.attack_probe_count} < {self.attack_budget})"
            )
        if not 0.0 <= self.alpha <= 1.0:
            raise ConfigError(f"alpha must lie in [0, 1], got {self.alpha}")
        if not 0 <= self.master_seed < 2**64:
            raise ConfigError(f"master_seed must be a uint64, got {self.master_seed}")
        if self.pool_size < 1:
            raise ConfigError(f"pool_size must be >= 1, got {self.pool_size}")
        for name in ("center_scale", "within_class_scale", "extractor_bias_scale"):
            if not getattr(self, name) >= 0.0:
                raise ConfigError(f"{name} must be >= 0, got {getattr(self, name)}")
        if not self.extractor_noise >= 0.0:
            raise ConfigError(f"extractor_noise must be >= 0, got {self.extractor_noise}")
        if self.extractor_noise > 0.0 and self.workers != 1:
            raise ConfigError(
                "extractor_noise > 0 draws from a shared generator and is only "
                "deterministic with workers = 1"
            )
        if self.key_anchor not in KEY_ANCHORS:
            raise ConfigError(
                f"key_anchor must be one of {KEY_ANCHORS}, got {self.key_anchor!r}"
            )
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        if self.mode == "ingested":
            if not self.inputs:
                raise ConfigError("ingested mode requires an 'inputs' mapping")
            for key in ("embeddings", "pool"):
                if key not in self.inputs:
                    raise ConfigError(f"ingested mode requires inputs[{key!r}]")
        return self

    def to_dict(self) -> dict:
        out = dataclasses.asdict(self)
        out["strategies"] = list(self.strategies)
        out["target_fmrs"] = list(self.target_fmrs)
        return out

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**raw)

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        with open(path, "r", encoding="utf-8") as fh:
            try:
                raw = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError(f"{path}: config must be a JSON object")
        return cls.from_dict(raw)

    def replace(self, **changes) -> "ExperimentConfig":
        return dataclasses.replace(self, **changes)
