"""Experiment harness: configs, Monte Carlo runs, output formats and the CLI."""
from .config import (
    ExperimentConfig,
    ProblemSpec,
    SolverSpec,
    format_config,
    load_config,
    parse_config,
    parse_solvers,
)
from .experiment import ExperimentResult, aggregate, align_on_flops, make_instance, run_experiment, run_trial
from .formats import emit_csv, emit_json, load_json, read_instance, write_instance, write_outputs
from .presets import PRESETS, complexity_curves, preset_config
