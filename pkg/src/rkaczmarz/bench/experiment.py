"""
Monte Carlo experiment runner.

Trial ``t`` owns the stream ``derive_stream(seed, t)``.  Inside a trial the
instance, every solver and every row subsample draw from separate keyed
substreams, so a trial's outcome depends only on ``(config, t)`` and trials
can run in any order or in parallel.  Fixed (non-resampled) instances come
from the unkeyed master stream, which no trial uses.

Aggregation treats each trace as a right-continuous step function of the
checkpoint index: a trial that has stopped keeps its last error.  For
``mean_sq_error`` the ``mean_error`` column is the mean of squared errors;
for ``median_error`` it is the mean of errors.  ``median_error`` is always
the median of errors.  ``trials_contributing`` counts trials that were
still running at the checkpoint.
"""
from __future__ import annotations

import math
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .. import __version__
from ..matcore import condition_numbers
from ..problems import (
    clustered_spectrum_system,
    gaussian_system,
    jittered_nodes,
    random_coefficients,
    subsample_rows,
    tightness_system,
    trig_system,
    uniform_sorted_nodes,
)
from ..randsrc import RngStream, derive_stream
from ..solvers import SolverOptions, cgls, kaczmarz_cyclic, kaczmarz_randomized, kaczmarz_relaxed
from .config import ExperimentConfig

__all__ = ["ExperimentResult", "aggregate", "align_on_flops", "make_instance", "run_experiment", "run_trial"]

_INSTANCE_KEY = 0
_SOLVER_KEY = 1
_SUBSAMPLE_KEY = 1000


def make_instance(problem, rng: RngStream):
    """Draw one :class:`~rkaczmarz.solvers.LinearSystem` of the configured family."""
    if problem.family == "gaussian":
        return gaussian_system(problem.m, problem.n, rng)
    if problem.family == "tightness":
        return tightness_system(problem.n, problem.m, problem.kappa).system
    if problem.family == "clustered":
        return clustered_spectrum_system(problem.n, problem.sigma_small, rng)
    if problem.nodes == "jittered":
        shift = (problem.max_gap - 1.0 / problem.m) / 2.0
        nodes = jittered_nodes(problem.m, max(shift, 0.0), rng)
    else:
        nodes = uniform_sorted_nodes(problem.m, rng)
    return trig_system(problem.r, nodes, random_coefficients(problem.r, rng)).system


def _x0(problem, n):
    if problem.x0 == "e1":
        x0 = np.zeros(n, dtype=complex)
        x0[0] = 1.0
        return x0
    return None


def _solve(spec, system, opts, trial_rng, j):
    if spec.kind == "cyclic":
        return kaczmarz_cyclic(system, opts)
    if spec.kind == "uniform":
        return kaczmarz_randomized(system, opts, "uniform")
    if spec.kind == "weighted":
        return kaczmarz_randomized(system, opts, "squared_norm")
    if spec.kind == "relaxed":
        return kaczmarz_relaxed(system, opts)
    if spec.submatrix is not None:
        system = subsample_rows(system, spec.submatrix, trial_rng.substream(_SUBSAMPLE_KEY + j))
    return cgls(system, opts)


def run_trial(config: ExperimentConfig, t: int, instance=None) -> dict:
    """Run every configured solver on trial ``t``'s instance.

    Returns a mapping ``label -> summary`` where the summary holds the
    trace as ``(k, error, flops)`` triples, or a ``failed`` message.
    """
    rng = derive_stream(config.master_seed, t)
    if instance is None:
        instance = make_instance(config.problem, rng.substream(_INSTANCE_KEY))
    out = {}
    for j, spec in enumerate(config.solvers):
        seed = np.random.SeedSequence(config.master_seed, spawn_key=(t, _SOLVER_KEY, j))
        opts = SolverOptions(
            x0=_x0(config.problem, instance.n),
            max_projections=config.max_projections,
            max_iterations=config.max_iterations,
            target_error=config.epsilon,
            trace_stride=config.trace_stride,
            relaxation=spec.relaxation,
            seed=seed,
        )
        try:
            tr = _solve(spec, instance, opts, rng, j)
        except Exception as exc:  # a failing trial must not abort the experiment
            out[spec.label] = {"failed": f"{type(exc).__name__}: {exc}", "trace": []}
            continue
        last = tr.records[-1]
        out[spec.label] = {
            "failed": None,
            "terminated_by": tr.terminated_by,
            "iterations_to_eps": last.k if tr.converged else None,
            "flops_to_eps": last.flops if tr.converged else None,
            "final_error": last.error,
            "trace": [(r.k, r.error, r.flops) for r in tr.records],
        }
    return out


@dataclass
class ExperimentResult:
    """Aggregated outcome of :func:`run_experiment`.

    ``solvers`` maps a solver label to its checkpoint rows, each a dict with
    keys ``checkpoint_k``, ``flops``, ``mean_error``, ``median_error`` and
    ``trials_contributing``.  ``trials`` holds one summary per (trial,
    solver); ``summary`` the per-solver means over trials that reached the
    target; ``environment`` the seed, dimensions and condition numbers of a
    representative instance.
    """

    name: str
    aggregation: str
    config: dict
    solvers: dict = field(default_factory=dict)
    trials: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    environment: dict = field(default_factory=dict)
    schema_version: int = 1

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "name": self.name,
            "aggregation": self.aggregation,
            "config": self.config,
            "environment": self.environment,
            "summary": self.summary,
            "solvers": self.solvers,
            "trials": self.trials,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentResult":
        return cls(
            name=d["name"],
            aggregation=d["aggregation"],
            config=d["config"],
            solvers=d["solvers"],
            trials=d["trials"],
            summary=d["summary"],
            environment=d["environment"],
            schema_version=d["schema_version"],
        )


def aggregate(traces, aggregation="mean_sq_error") -> list:
    """Combine per-trial traces of one solver into checkpoint rows.

    ``traces`` is a list of ``(k, error, flops)`` triple lists, each starting
    at ``k = 0``.  Trial order does not matter beyond the final floating
    point summation order, which is fixed by the list order.
    """
    if not traces:
        return []
    ks = sorted({rec[0] for tr in traces for rec in tr})
    cols = []
    for tr in traces:
        k_arr = np.array([rec[0] for rec in tr])
        e_arr = np.array([np.nan if rec[1] is None else rec[1] for rec in tr])
        f_arr = np.array([rec[2] for rec in tr], dtype=float)
        last = k_arr[-1]
        per_step = f_arr[-1] / last if last > 0 else 0.0
        pos = np.searchsorted(k_arr, ks, side="right") - 1
        cols.append((e_arr[pos], np.array(ks) * per_step, np.array(ks) <= last))
    err = np.array([c[0] for c in cols])
    flops = np.array([c[1] for c in cols])
    alive = np.array([c[2] for c in cols])
    if aggregation == "mean_sq_error":
        mean_err = np.mean(err**2, axis=0)
    else:
        mean_err = np.mean(err, axis=0)
    med_err = np.median(err, axis=0)
    mean_flops = np.mean(flops, axis=0)
    return [
        {
            "checkpoint_k": int(k),
            "flops": float(mean_flops[i]),
            "mean_error": float(mean_err[i]),
            "median_error": float(med_err[i]),
            "trials_contributing": int(alive[:, i].sum()),
        }
        for i, k in enumerate(ks)
    ]


def align_on_flops(result: ExperimentResult, flops_grid, column="mean_error") -> dict:
    """Evaluate every solver's aggregated curve on a common flop grid.

    Curves are right-continuous step functions of flops; grid points
    before a solver's first checkpoint get its initial value.
    """
    grid = np.asarray(flops_grid, dtype=float)
    out = {}
    for label, rows in result.solvers.items():
        f = np.array([r["flops"] for r in rows])
        v = np.array([r[column] for r in rows])
        pos = np.clip(np.searchsorted(f, grid, side="right") - 1, 0, len(rows) - 1)
        out[label] = v[pos]
    return out


def _summary(label, outcomes):
    reached = [o for o in outcomes if not o["failed"] and o["iterations_to_eps"] is not None]
    failed = sum(1 for o in outcomes if o["failed"])

    def mean(key):
        return math.fsum(o[key] for o in reached) / len(reached) if reached else None

    return {
        "trials": len(outcomes),
        "reached": len(reached),
        "failed": failed,
        "mean_iterations_to_eps": mean("iterations_to_eps"),
        "mean_flops_to_eps": mean("flops_to_eps"),
    }


def _environment(config, instance):
    env = {
        "package_version": __version__,
        "seed": config.master_seed,
        "trials": config.trials,
        "family": config.problem.family,
        "m": instance.m,
        "n": instance.n,
        "epsilon": config.epsilon,
    }
    try:
        rep = condition_numbers(instance.A)
        env.update(k=rep.k, kappa=rep.kappa)
    except Exception as exc:
        env.update(k=None, kappa=None, condition_error=str(exc))
    return env


def _trial_worker(args):
    config, t, instance = args
    try:
        return t, run_trial(config, t, instance)
    except Exception:
        return t, {s.label: {"failed": traceback.format_exc(limit=1), "trace": []} for s in config.solvers}


def run_experiment(config: ExperimentConfig, *, workers: int = 1, trial_order=None) -> ExperimentResult:
    """Run all trials and aggregate them.

    Output is a deterministic function of ``config``: neither ``workers``
    nor ``trial_order`` (a permutation of ``range(trials)``) changes it.
    """
    fixed = None
    if not config.problem.resample:
        fixed = make_instance(config.problem, RngStream(config.master_seed))
    order = list(range(config.trials)) if trial_order is None else list(trial_order)
    if sorted(order) != list(range(config.trials)):
        raise ValueError("trial_order must be a permutation of range(trials)")
    jobs = [(config, t, fixed) for t in order]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            done = dict(pool.map(_trial_worker, jobs))
    else:
        done = dict(map(_trial_worker, jobs))

    representative = fixed if fixed is not None else make_instance(
        config.problem, derive_stream(config.master_seed, 0).substream(_INSTANCE_KEY)
    )
    result = ExperimentResult(
        name=config.name,
        aggregation=config.aggregation,
        # the output location is not part of the experiment
        config={k: v for k, v in config.to_dict().items() if k != "out_dir"},
        environment=_environment(config, representative),
    )
    for spec in config.solvers:
        outcomes = [done[t][spec.label] for t in range(config.trials)]
        ok = [o["trace"] for o in outcomes if not o["failed"]]
        result.solvers[spec.label] = aggregate(ok, config.aggregation)
        result.summary[spec.label] = _summary(spec.label, outcomes)
        for t, o in enumerate(outcomes):
            result.trials.append({
                "trial": t,
                "solver": spec.label,
                "failed": o["failed"],
                "terminated_by": o.get("terminated_by"),
                "iterations_to_eps": o.get("iterations_to_eps"),
                "flops_to_eps": o.get("flops_to_eps"),
                "final_error": o.get("final_error"),
            })
    result.environment["failures"] = sum(s["failed"] for s in result.summary.values())
    return result
