"""Batch experiment harness: configuration, scheme dispatch, reports and CLI."""

from .config import ExperimentConfig, load_config, parse_config
from .convergence import ConvergenceFit, InsufficientPoints, convergence_table
from .runner import RunResult, run_experiment
from .schemes import REGISTRY, get_scheme

__all__ = ["ExperimentConfig", "load_config", "parse_config", "ConvergenceFit", "InsufficientPoints",
           "convergence_table", "RunResult", "run_experiment", "REGISTRY", "get_scheme"]
