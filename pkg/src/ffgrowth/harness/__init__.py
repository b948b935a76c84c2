"""Seeded set families, experiment configs, runners and output writers."""

from .config import DEFAULT_BUDGETS, EXPERIMENTS, ConfigError, ExperimentConfig
from .experiments import ExponentFit, TrialResult, run_experiment, verify_suite
from .families import FAMILIES, FamilyError, generate_set
from .rng import SplitMix64, derive_seed

__all__ = [
    "DEFAULT_BUDGETS", "EXPERIMENTS", "ConfigError", "ExperimentConfig",
    "ExponentFit", "TrialResult", "run_experiment", "verify_suite",
    "FAMILIES", "FamilyError", "generate_set", "SplitMix64", "derive_seed",
]
