"""
Experiment configuration and its plain-text file format.

A config file holds one ``key = value`` pair per line; ``#`` starts a
comment and blank lines are ignored.  Keys:

=================  ==========================================================
``name``           experiment name, used for output file names (required)
``family``         ``gaussian`` | ``trig`` | ``tightness`` | ``clustered``
``m``, ``n``       rows and columns (``gaussian``, ``tightness``)
``r``              polynomial degree (``trig``; ``n = 2r + 1``)
``nodes``          ``uniform`` (default) or ``jittered`` (``trig``)
``max_gap``        torus-gap cap for jittered nodes (``trig``)
``kappa``          scaled condition number (``tightness``)
``n`` + ``sigma_small``  square clustered-spectrum matrix (``clustered``)
``resample``       ``true`` draws a fresh instance per trial; defaults to
                   ``true`` except for ``trig``
``x0``             ``zero`` (default) or ``e1``
``solvers``        comma-separated list, see below (required)
``trials``         number of Monte Carlo trials (default 1)
``seed``           master seed (default 0)
``epsilon``        target error (default 1e-6)
``aggregation``    ``mean_sq_error`` (default) or ``median_error``
``max_projections``  Kaczmarz budget (default 1000000)
``max_iterations``   CGLS budget (default ``20 n``)
``trace_stride``   checkpoint spacing (default ``m`` for Kaczmarz, 1 for CGLS)
``out_dir``        output directory (default ``results``)
=================  ==========================================================

Solver entries are ``cyclic``, ``uniform``, ``weighted``, ``relaxed`` or
``cgls``, optionally followed by options in parentheses, e.g.
``relaxed(lambda=1.25)``, ``cgls(submatrix=272)`` or
``weighted(label=rk)``.
"""
from __future__ import annotations

import re
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Optional

from ..errors import InputError

__all__ = [
    "ExperimentConfig",
    "ProblemSpec",
    "SolverSpec",
    "SOLVER_KINDS",
    "format_config",
    "load_config",
    "parse_config",
    "parse_solvers",
]

SOLVER_KINDS = ("cyclic", "uniform", "weighted", "relaxed", "cgls")
FAMILIES = ("gaussian", "trig", "tightness", "clustered")
AGGREGATIONS = ("mean_sq_error", "median_error")


@dataclass(frozen=True)
class SolverSpec:
    kind: str
    relaxation: Optional[float] = None
    submatrix: Optional[int] = None
    label: Optional[str] = None

    def __post_init__(self):
        if self.kind not in SOLVER_KINDS:
            raise InputError(f"unknown solver kind {self.kind!r}; expected one of {SOLVER_KINDS}")
        if self.relaxation is not None:
            if self.kind != "relaxed":
                raise InputError(f"solver {self.kind!r} takes no lambda; use 'relaxed'")
            if not 0 < self.relaxation < 2:
                raise InputError(f"lambda must lie in (0, 2), got {self.relaxation}")
        if self.submatrix is not None and self.kind != "cgls":
            raise InputError("only cgls accepts submatrix=")
        if self.label is None:
            label = self.kind
            if self.submatrix is not None:
                label += f"-submatrix{self.submatrix}"
            if self.relaxation is not None:
                label += f"-lambda{self.relaxation:g}"
            object.__setattr__(self, "label", label)

    def __str__(self):
        opts = []
        if self.relaxation is not None:
            opts.append(f"lambda={self.relaxation!r}")
        if self.submatrix is not None:
            opts.append(f"submatrix={self.submatrix}")
        default = SolverSpec(self.kind, self.relaxation, self.submatrix).label
        if self.label != default:
            opts.append(f"label={self.label}")
        return self.kind + (f"({', '.join(opts)})" if opts else "")


@dataclass(frozen=True)
class ProblemSpec:
    family: str
    m: Optional[int] = None
    n: Optional[int] = None
    r: Optional[int] = None
    kappa: Optional[float] = None
    sigma_small: Optional[float] = None
    nodes: str = "uniform"
    max_gap: Optional[float] = None
    resample: Optional[bool] = None
    x0: str = "zero"

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InputError(f"unknown problem family {self.family!r}; expected one of {FAMILIES}")
        need = {
            "gaussian": ("m", "n"),
            "trig": ("m", "r"),
            "tightness": ("m", "n", "kappa"),
            "clustered": ("n", "sigma_small"),
        }[self.family]
        missing = [k for k in need if getattr(self, k) is None]
        if missing:
            raise InputError(f"family {self.family!r} needs {', '.join(missing)}")
        if self.x0 not in ("zero", "e1"):
            raise InputError(f"x0 must be 'zero' or 'e1', got {self.x0!r}")
        if self.nodes not in ("uniform", "jittered"):
            raise InputError(f"nodes must be 'uniform' or 'jittered', got {self.nodes!r}")
        if self.nodes == "jittered" and self.max_gap is None:
            raise InputError("jittered nodes need max_gap")
        if self.resample is None:
            object.__setattr__(self, "resample", self.family != "trig")

    @property
    def columns(self) -> int:
        return 2 * self.r + 1 if self.family == "trig" else self.n

    @property
    def rows(self) -> int:
        return self.n if self.family == "clustered" else self.m


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    problem: ProblemSpec
    solvers: tuple
    trials: int = 1
    master_seed: int = 0
    epsilon: float = 1e-6
    aggregation: str = "mean_sq_error"
    max_projections: int = 1_000_000
    max_iterations: Optional[int] = None
    trace_stride: Optional[int] = None
    out_dir: str = "results"

    def __post_init__(self):
        if not self.name or not re.fullmatch(r"[A-Za-z0-9_.-]+", self.name):
            raise InputError(f"name must be a non-empty file-name-safe token, got {self.name!r}")
        if self.trials < 1:
            raise InputError("trials must be at least 1")
        if not self.solvers:
            raise InputError("at least one solver is required")
        labels = [s.label for s in self.solvers]
        if len(set(labels)) != len(labels):
            raise InputError(f"solver labels must be unique, got {labels}")
        if not 0 <= self.master_seed < 2**64:
            raise InputError("seed must be a 64-bit unsigned integer")
        if not self.epsilon > 0:
            raise InputError("epsilon must be positive")
        if self.aggregation not in AGGREGATIONS:
            raise InputError(f"aggregation must be one of {AGGREGATIONS}")
        object.__setattr__(self, "solvers", tuple(self.solvers))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["solvers"] = [str(s) for s in self.solvers]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        d = dict(d)
        d["problem"] = ProblemSpec(**d["problem"])
        d["solvers"] = parse_solvers(", ".join(d["solvers"]))
        return cls(**d)

    def with_overrides(self, **kwargs) -> "ExperimentConfig":
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})


_SOLVER_RE = re.compile(r"\s*([a-z]+)\s*(?:\(([^)]*)\))?\s*(?:,|$)")


def parse_solvers(text: str) -> tuple:
    specs = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        mt = _SOLVER_RE.match(text, pos)
        if not mt or mt.end() == pos:
            raise InputError(f"cannot parse solver list at {text[pos:]!r}")
        kind, opts = mt.group(1), mt.group(2)
        kwargs = {}
        for item in filter(None, (o.strip() for o in (opts or "").split(","))):
            key, sep, val = item.partition("=")
            key, val = key.strip(), val.strip()
            if not sep:
                raise InputError(f"solver option {item!r} is not key=value")
            if key == "lambda":
                kwargs["relaxation"] = float(val)
            elif key == "submatrix":
                kwargs["submatrix"] = int(val)
            elif key == "label":
                kwargs["label"] = val
            else:
                raise InputError(f"unknown solver option {key!r}")
        specs.append(SolverSpec(kind, **kwargs))
        pos = mt.end()
    return tuple(specs)


def _bool(text):
    low = text.lower()
    if low in ("true", "yes", "1"):
        return True
    if low in ("false", "no", "0"):
        return False
    raise InputError(f"expected a boolean, got {text!r}")


_PROBLEM_KEYS = {
    "family": str, "m": int, "n": int, "r": int, "kappa": float, "sigma_small": float,
    "nodes": str, "max_gap": float, "resample": _bool, "x0": str,
}
_TOP_KEYS = {
    "name": str, "trials": int, "seed": int, "epsilon": float, "aggregation": str,
    "max_projections": int, "max_iterations": int, "trace_stride": int, "out_dir": str,
}


def parse_config(text: str, source: str = "<string>") -> ExperimentConfig:
    problem, top, solvers = {}, {}, None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if not sep or not key:
            raise InputError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        try:
            if key == "solvers":
                solvers = parse_solvers(val)
            elif key in _PROBLEM_KEYS:
                problem[key] = _PROBLEM_KEYS[key](val)
            elif key in _TOP_KEYS:
                top["master_seed" if key == "seed" else key] = _TOP_KEYS[key](val)
            else:
                raise InputError(f"unknown key {key!r}")
        except (ValueError, InputError) as exc:
            raise InputError(f"{source}:{lineno}: {exc}") from None
    if "name" not in top:
        raise InputError(f"{source}: missing required key 'name'")
    if solvers is None:
        raise InputError(f"{source}: missing required key 'solvers'")
    if "family" not in problem:
        raise InputError(f"{source}: missing required key 'family'")
    return ExperimentConfig(problem=ProblemSpec(**problem), solvers=solvers, **top)


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc.strerror}") from exc
    return parse_config(text, str(path))


def format_config(config: ExperimentConfig) -> str:
    """Inverse of :func:`parse_config`."""
    lines = [f"name = {config.name}"]
    for f in fields(ProblemSpec):
        val = getattr(config.problem, f.name)
        if val is not None:
            lines.append(f"{f.name} = {str(val).lower() if isinstance(val, bool) else val!r}".replace("'", ""))
    lines.append("solvers = " + ", ".join(str(s) for s in config.solvers))
    for key in _TOP_KEYS:
        if key == "name":
            continue
        val = getattr(config, "master_seed" if key == "seed" else key)
        if val is not None:
            lines.append(f"{key} = {val!r}".replace("'", ""))
    return "\n".join(lines) + "\n"
