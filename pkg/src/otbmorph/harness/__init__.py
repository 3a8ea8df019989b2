"""Experiment harness: config, synthetic data, asset files, orchestration."""

from .config import DEFAULT_MASTER_SEED, DEFAULT_TARGET_FMRS, ExperimentConfig
from .experiment import RunResult, SystemResult, run_experiment
from .seeding import derive_seed
from .synthetic import Identity, Population, SyntheticExtractor, generate_population
from .assets import LookupExtractor, load_assets, write_population_assets

__all__ = [
    "DEFAULT_MASTER_SEED",
    "DEFAULT_TARGET_FMRS",
    "ExperimentConfig",
    "Identity",
    "LookupExtractor",
    "Population",
    "RunResult",
    "SyntheticExtractor",
    "SystemResult",
    "derive_seed",
    "generate_population",
    "load_assets",
    "run_experiment",
    "write_population_assets",
]
