"""Ready-made experiments: trig sampling, Gaussian solver comparisons and relaxation."""
from __future__ import annotations

import math

import numpy as np

from ..theory import cgls_complexity, rk_complexity
from .config import ExperimentConfig, ProblemSpec, parse_solvers

__all__ = ["PRESETS", "complexity_curves", "preset_config"]

PRESETS = ("fig1", "fig2", "fig3", "fig4", "relax")


def preset_config(name: str, *, seed=None, trials=None, out_dir=None, epsilon=None) -> ExperimentConfig:
    """Monte Carlo configuration for ``fig1``, ``fig3``, ``fig4`` or ``relax``.

    ``fig2`` is an analytic curve table; see :func:`complexity_curves`.
    """
    if name == "fig1":
        cfg = ExperimentConfig(
            name="fig1",
            problem=ProblemSpec("trig", m=700, r=50),
            solvers=parse_solvers("cyclic, uniform, weighted"),
            trials=10,
            epsilon=1e-6,
        )
    elif name == "fig3":
        cfg = ExperimentConfig(
            name="fig3",
            problem=ProblemSpec("gaussian", m=300, n=100),
            solvers=parse_solvers("weighted, cgls, cgls(submatrix=272)"),
            trials=100,
            epsilon=1e-14,
        )
    elif name == "fig4":
        cfg = ExperimentConfig(
            name="fig4",
            problem=ProblemSpec("gaussian", m=500, n=100),
            solvers=parse_solvers("weighted, cgls, cgls(submatrix=272)"),
            trials=100,
            epsilon=1e-14,
        )
    elif name == "relax":
        cfg = ExperimentConfig(
            name="relax",
            problem=ProblemSpec("gaussian", m=300, n=100),
            solvers=parse_solvers("weighted, relaxed"),
            trials=20,
            epsilon=1e-14,
        )
    else:
        raise ValueError(f"unknown preset {name!r}; expected one of {PRESETS}")
    return cfg.with_overrides(master_seed=seed, trials=trials, out_dir=out_dir, epsilon=epsilon)


def complexity_curves(eps: float = 1e-14, points: int = 200, lo: float = 0.01, hi: float = 0.99):
    """Rows ``(y, rk, cgls)`` of both complexity estimates divided by ``n**2 log(1/eps)``."""
    scale = math.log(1.0 / eps)
    return [
        (float(y), rk_complexity(1, y, eps).flops / scale, cgls_complexity(1, y, eps).flops / scale)
        for y in np.linspace(lo, hi, points)
    ]
