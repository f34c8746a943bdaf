"""Command-line entry point: ``rkaczmarz {run,preset,cond,predict,instance}``."""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from ..errors import KaczmarzError
from ..matcore import condition_numbers
from ..randsrc import RngStream
from ..theory import expected_iterations, theorem1_bound, theorem2_lower_bound
from .config import ProblemSpec, load_config
from .experiment import make_instance, run_experiment
from .formats import emit_complexity_csv, read_instance, write_instance, write_outputs
from .presets import PRESETS, complexity_curves, preset_config


def _parser():
    p = argparse.ArgumentParser(
        prog="rkaczmarz",
        description="Randomized Kaczmarz experiments, condition numbers and convergence predictions.",
    )
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    run = sub.add_parser("run", help="run the experiment described by a config file")
    run.add_argument("config", help="key = value config file")
    run.add_argument("--out", help="output directory (overrides out_dir in the file)")
    run.add_argument("--workers", type=int, default=1, help="parallel trial processes (default 1)")

    pre = sub.add_parser("preset", help="run a built-in experiment")
    pre.add_argument("name", choices=PRESETS)
    pre.add_argument("--seed", type=int, help="master seed (default 0)")
    pre.add_argument("--trials", type=int, help="number of trials (preset default otherwise)")
    pre.add_argument("--eps", type=float, help="target error (preset default otherwise)")
    pre.add_argument("--out", default="results", help="output directory (default: results)")
    pre.add_argument("--workers", type=int, default=1, help="parallel trial processes (default 1)")

    cond = sub.add_parser("cond", help="print condition numbers of an instance file")
    cond.add_argument("instance", help="instance file")

    pred = sub.add_parser("predict", help="print iteration counts and error bounds for a given kappa")
    pred.add_argument("--kappa", type=float, required=True, help="scaled condition number (> 1)")
    pred.add_argument("--eps", type=float, required=True, help="accuracy in (0, 1)")
    pred.add_argument("--e0-sq", type=float, default=1.0, help="initial squared error (default 1)")
    pred.add_argument("--steps", type=int, help="projection count for the bounds (default: ceil of exact count)")

    inst = sub.add_parser("instance", help="write a generated instance file")
    inst.add_argument("family", choices=("gaussian", "trig", "tightness", "clustered"))
    inst.add_argument("--m", type=int)
    inst.add_argument("--n", type=int)
    inst.add_argument("--r", type=int)
    inst.add_argument("--kappa", type=float)
    inst.add_argument("--sigma-small", type=float)
    inst.add_argument("--seed", type=int, default=0)
    inst.add_argument("--out", required=True, help="path of the instance file")
    return p


def _cmd_run(args):
    cfg = load_config(args.config).with_overrides(out_dir=args.out)
    result = run_experiment(cfg, workers=args.workers)
    for path in write_outputs(result, cfg.out_dir).values():
        print(path)


def _cmd_preset(args):
    if args.name == "fig2":
        eps = args.eps if args.eps is not None else 1e-14
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        path = out / "fig2.csv"
        emit_complexity_csv(complexity_curves(eps), path)
        (out / "fig2.meta.txt").write_text(
            f"epsilon: {eps!r}\npoints: 200\nnormalization: n**2 * log(1/epsilon)\n"
        )
        print(path)
        return
    cfg = preset_config(args.name, seed=args.seed, trials=args.trials, out_dir=args.out, epsilon=args.eps)
    result = run_experiment(cfg, workers=args.workers)
    for path in write_outputs(result, cfg.out_dir).values():
        print(path)


def _cmd_cond(args):
    print(condition_numbers(read_instance(args.instance).A))


def _cmd_predict(args):
    exact, approx = expected_iterations(args.kappa, args.eps)
    steps = args.steps if args.steps is not None else math.ceil(exact)
    print(f"expected projections (exact)  = {exact:.17g}")
    print(f"expected projections (approx) = {approx:.17g}")
    print(f"steps                         = {steps}")
    print(f"upper bound E||x_k - x||^2    = {theorem1_bound(args.kappa, steps, args.e0_sq):.17g}")
    print(f"lower bound E||x_k - x||^2    = {theorem2_lower_bound(args.kappa, steps, args.e0_sq):.17g}")


def _cmd_instance(args):
    spec = ProblemSpec(
        args.family, m=args.m, n=args.n, r=args.r, kappa=args.kappa, sigma_small=args.sigma_small
    )
    write_instance(make_instance(spec, RngStream(args.seed)), args.out)
    print(args.out)


_COMMANDS = {
    "run": _cmd_run,
    "preset": _cmd_preset,
    "cond": _cmd_cond,
    "predict": _cmd_predict,
    "instance": _cmd_instance,
}


def cli_main(argv=None) -> int:
    """Run the CLI and return its exit code (2 for usage errors)."""
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _COMMANDS[args.command](args)
    except (KaczmarzError, OSError) as exc:
        print(f"rkaczmarz {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
