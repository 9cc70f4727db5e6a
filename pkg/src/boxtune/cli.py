"""Command-line front door: tune, serve, folds.

Exit codes: 0 success, 2 malformed flags (unknown solver, bad space
spec, bad grouping, unavailable port), 3 objective failure that
exhausts the budget. The tune report is the ResultMsg payload, one
schema across CLI and wire.
"""

from __future__ import annotations

import argparse
import json
import shlex
import subprocess
import sys
from typing import Callable, Sequence

from .api import run_optimization
from .core import OptimizationResult
from .crossval import GroupingSpec, generate_folds
from .errors import BoxtuneError, BudgetExhaustedWithNoSuccess
from .protocol import ResultMsg
from .server import TuningServer
from .solvers import SolverConfig
from .space import ParamVector, SearchSpace, make_space
from .testfunctions import BUILTIN_NAMES, make_test_function


class FlagError(Exception):
    """Invalid flag combination or value; maps to exit code 2."""


def _parse_param_flags(specs: Sequence[str]) -> SearchSpace:
    bounds: dict[str, tuple[float, float]] = {}
    for spec in specs:
        parts = spec.split(":")
        if len(parts) != 3 or not parts[0]:
            raise FlagError(f"bad --param {spec!r}; expected name:lower:upper")
        name = parts[0]
        if name in bounds:
            raise FlagError(f"duplicate --param name {name!r}")
        try:
            bounds[name] = (float(parts[1]), float(parts[2]))
        except ValueError:
            raise FlagError(f"bad --param {spec!r}; bounds must be numbers") from None
    if not bounds:
        raise FlagError("exec objectives need at least one --param name:lower:upper")
    return make_space(bounds)


def _make_exec_objective(command: str) -> Callable[[ParamVector], float]:
    argv = shlex.split(command)
    if not argv:
        raise FlagError("exec objective command is empty")

    def objective(p: ParamVector) -> float:
        line = json.dumps(p.as_dict(), sort_keys=True, separators=(",", ":"))
        proc = subprocess.run(
            argv, input=line + "\n", capture_output=True, text=True
        )
        if proc.returncode != 0:
            detail = proc.stderr.strip() or "no diagnostic output"
            raise RuntimeError(f"evaluator exited {proc.returncode}: {detail}")
        lines = proc.stdout.splitlines()
        if not lines:
            raise RuntimeError("evaluator printed no output line")
        value = json.loads(lines[0])
        if isinstance(value, dict):
            raise RuntimeError(str(value.get("error", "evaluator reported an error")))
        return float(value)

    return objective


def cmd_tune(args: argparse.Namespace) -> int:
    kind, _, rest = args.objective.partition(":")
    if kind == "builtin":
        if not rest:
            raise FlagError("builtin objective needs a name, e.g. builtin:sphere")
        if rest not in BUILTIN_NAMES:
            raise FlagError(
                f"unknown builtin {rest!r}; known: {list(BUILTIN_NAMES)}"
            )
        if args.param:
            raise FlagError("builtin objectives use their canonical box; drop --param")
        function = make_test_function(rest, args.dims)
        objective, space = function, function.space
    elif kind == "exec":
        if not rest:
            raise FlagError("exec objective needs a command, e.g. exec:'python eval.py'")
        objective = _make_exec_objective(rest)
        space = _parse_param_flags(args.param)
    else:
        raise FlagError(
            f"objective must be builtin:<name> or exec:<command>, got {args.objective!r}"
        )

    config = SolverConfig(args.solver)
    result: OptimizationResult = run_optimization(
        config,
        space,
        args.direction,
        args.budget,
        seed=args.seed,
        objective=objective,
    )
    report = ResultMsg(
        result.best_params.as_dict(),
        result.best_score,
        result.num_evals,
        result.wall_time,
    ).to_payload()
    text = json.dumps(report, sort_keys=True, indent=2)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    try:
        server = TuningServer(args.host, args.port, args.timeout)
    except OSError as exc:
        print(f"error: cannot bind {args.host}:{args.port}: {exc}", file=sys.stderr)
        return 2
    try:
        print(f"PORT {server.port}", flush=True)
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.shutdown()
    return 0


def _parse_group_flags(specs: Sequence[str], what: str) -> tuple[frozenset[int], ...]:
    groups = []
    for spec in specs:
        try:
            members = frozenset(int(part) for part in spec.split(",") if part.strip())
        except ValueError:
            raise FlagError(f"bad --{what} {spec!r}; expected comma-separated indices") from None
        if not members:
            raise FlagError(f"bad --{what} {spec!r}; group is empty")
        groups.append(members)
    return tuple(groups)


def cmd_folds(args: argparse.Namespace) -> int:
    grouping = GroupingSpec(
        strata=_parse_group_flags(args.strata, "strata"),
        clusters=_parse_group_flags(args.clusters, "clusters"),
    )
    plan = generate_folds(args.n, args.k, args.r, grouping, args.seed)
    print(json.dumps(plan.to_json(), sort_keys=True, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boxtune", description="Budgeted black-box hyperparameter search."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    tune = sub.add_parser("tune", help="run one tuning job")
    tune.add_argument(
        "--objective",
        required=True,
        help="builtin:<sphere|rosenbrock|branin> or exec:<command>",
    )
    tune.add_argument("--solver", default="pso", help="solver name (default pso)")
    tune.add_argument("--budget", type=int, default=100, help="max evaluations")
    tune.add_argument("--seed", type=int, default=0)
    tune.add_argument(
        "--direction", choices=("maximize", "minimize"), default="minimize"
    )
    tune.add_argument("--dims", type=int, default=2, help="builtin dimension count")
    tune.add_argument(
        "--param",
        action="append",
        default=[],
        metavar="NAME:LOWER:UPPER",
        help="one search dimension (repeatable; exec objectives only)",
    )
    tune.add_argument("--output", help="write the JSON report here instead of stdout")
    tune.set_defaults(func=cmd_tune)

    serve = sub.add_parser("serve", help="start the protocol server")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=0, help="0 picks an ephemeral port")
    serve.add_argument(
        "--timeout", type=float, default=300.0, help="seconds to wait for EvalReply"
    )
    serve.set_defaults(func=cmd_serve)

    folds = sub.add_parser("folds", help="emit a cross-validation fold plan")
    folds.add_argument("--n", type=int, required=True, help="number of instances")
    folds.add_argument("--k", type=int, required=True, help="number of folds")
    folds.add_argument("--r", type=int, default=1, help="number of iterations")
    folds.add_argument(
        "--strata",
        action="append",
        default=[],
        metavar="I,J,...",
        help="stratum to spread across folds (repeatable)",
    )
    folds.add_argument(
        "--clusters",
        action="append",
        default=[],
        metavar="I,J,...",
        help="cluster to keep in one fold (repeatable)",
    )
    folds.add_argument("--seed", type=int, default=0)
    folds.set_defaults(func=cmd_folds)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FlagError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BudgetExhaustedWithNoSuccess as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except BoxtuneError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
