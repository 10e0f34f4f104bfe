"""Command-line front end.

    digraphsearch solve --spec FILE [--mode M] [--goal G] [--oracle] [--stats-out FILE]
    digraphsearch experiment grid --n N --kind K --count C --mode M --seed S
    digraphsearch experiment subdirect --k K --n N --count C --seed S

Exit status: 0 on success, 1 when the oracle disagrees, 2 on a bad spec.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import experiments as ex
from .oracle import ORACLE_MAX_DEGREE, oracle
from .perm import Permutation
from .problem import GOALS, MODES, ProblemSpec, SpecError
from .search import SearchStats, search_all, search_group, search_single


def _fmt(p: Permutation | None) -> str | None:
    return None if p is None else str(p)


def run(spec: ProblemSpec, with_oracle: bool = False) -> tuple[dict, SearchStats]:
    """Solve a spec and build its JSON report."""
    if with_oracle and spec.degree > ORACLE_MAX_DEGREE:
        raise SpecError(f"oracle needs degree <= {ORACLE_MAX_DEGREE}")
    problem = spec.problem()
    t0 = time.perf_counter()
    solutions: list[Permutation]
    if spec.goal == "all":
        found, stats = search_all(problem)
        result: dict = {"count": len(found), "elements": [str(p) for p in found]}
        solutions = found
    elif spec.goal == "single":
        one, stats = search_single(problem)
        result = {"element": _fmt(one)}
        solutions = [] if one is None else [one]
    else:
        grp, stats = search_group(problem)
        if grp.empty:
            result = {"empty": True, "representative": None, "base": [], "generators": [], "order": 0}
        else:
            result = {
                "empty": False,
                "representative": str(grp.representative),
                "base": [b + 1 for b in grp.bsgs.base],
                "generators": [str(g) for g in grp.bsgs.strong_generators],
                "order": grp.order(),
            }
        solutions = grp.elements() if with_oracle else []
    ms = (time.perf_counter() - t0) * 1000
    report = {
        "degree": spec.degree,
        "goal": spec.goal,
        "mode": spec.mode,
        "seed": spec.seed,
        "result": result,
        "nodes": stats.nodes,
        "stats": stats.as_dict(),
        "ms": round(ms, 3),
    }
    if with_oracle:
        truth = oracle(spec.degree, spec.constraints)
        if spec.goal == "single":
            agrees = (not truth) if not solutions else (solutions[0] in set(truth))
        else:
            agrees = sorted(solutions) == truth
        report["oracle"] = {"count": len(truth), "agrees": agrees}
    return report, stats


def verify_report(spec: ProblemSpec, report: dict) -> bool:
    """Re-check every permutation listed in a report against the spec's predicates."""
    problem = spec.problem()
    n = spec.degree
    res = report["result"]
    if spec.goal == "all":
        listed = res["elements"]
    elif spec.goal == "single":
        listed = [] if res["element"] is None else [res["element"]]
    else:
        if res["empty"]:
            return True
        rep = Permutation.parse(n, res["representative"])
        if not problem.accepts(rep):
            return False
        return all(problem.accepts(Permutation.parse(n, g) * rep) for g in res["generators"])
    return all(problem.accepts(Permutation.parse(n, s)) for s in listed)


def _solve(args: argparse.Namespace) -> int:
    try:
        obj = json.loads(Path(args.spec).read_text())
        if args.mode:
            obj["mode"] = args.mode
        if args.goal:
            obj["goal"] = args.goal
        spec = ProblemSpec.from_json(obj)
        report, stats = run(spec, args.oracle)
    except (SpecError, json.JSONDecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(json.dumps(report, indent=2))
    if args.stats_out:
        Path(args.stats_out).write_text(json.dumps({"seed": spec.seed, "mode": spec.mode, **stats.as_dict()}, indent=2))
    if args.oracle and not report["oracle"]["agrees"]:
        return 1
    return 0


def _grid_row(job: tuple) -> ex.Row:
    n, kind, mode, seed, i = job
    return ex.run_grid_instance(n, kind, mode, ex.instance_seed(seed, i)).row


def _subdirect_rows(job: tuple) -> list[ex.Row]:
    k, n, seed, i, modes = job
    return ex.subdirect_experiments(k, n, 1, seed, modes, offset=i)


def _map(fn, jobs: list, workers: int) -> list:
    if workers <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs))


def _emit(rows: list[ex.Row], out: str | None) -> None:
    text = ex.rows_to_csv(rows)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _experiment(args: argparse.Namespace) -> int:
    try:
        if args.which == "grid":
            if args.kind not in ex.GRID_KINDS:
                raise ex.ExperimentError(f"unknown grid problem kind {args.kind!r}")
            if args.kind == "iii" and args.n % 2:
                raise ex.ExperimentError("problem iii needs even n")
            modes = MODES if args.mode == "all" else [args.mode]
            jobs = [(args.n, args.kind, m, args.seed, i) for m in modes for i in range(args.count)]
            rows = _map(_grid_row, jobs, args.jobs)
        else:
            modes = tuple(MODES if args.mode == "all" else [args.mode])
            jobs = [(args.k, args.n, args.seed, i, modes) for i in range(args.count)]
            rows = [r for chunk in _map(_subdirect_rows, jobs, args.jobs) for r in chunk]
    except ex.ExperimentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(rows, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="digraphsearch", description="Backtrack search with digraph stacks.")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve a JSON problem spec")
    s.add_argument("--spec", required=True)
    s.add_argument("--mode", choices=MODES)
    s.add_argument("--goal", choices=GOALS)
    s.add_argument("--oracle", action="store_true", help="cross-check against brute force")
    s.add_argument("--stats-out")
    s.set_defaults(func=_solve)

    e = sub.add_parser("experiment", help="run an experiment suite, CSV to stdout")
    esub = e.add_subparsers(dest="which", required=True)
    g = esub.add_parser("grid")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--kind", required=True, choices=ex.GRID_KINDS)
    g.add_argument("--count", type=int, default=50)
    g.add_argument("--mode", default="strong", choices=MODES + ("all",))
    g.add_argument("--seed", type=int, default=0)
    d = esub.add_parser("subdirect")
    d.add_argument("--k", type=int, required=True)
    d.add_argument("--n", type=int, required=True)
    d.add_argument("--count", type=int, default=50)
    d.add_argument("--mode", default="all", choices=MODES + ("all",))
    d.add_argument("--seed", type=int, default=0)
    for p in (g, d):
        p.add_argument("--jobs", type=int, default=1, help="worker processes")
        p.add_argument("--out", help="write CSV here instead of stdout")
    e.set_defaults(func=_experiment)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
