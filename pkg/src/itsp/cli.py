"""Command line interface: ``solve``, ``check-maximal``, ``enumerate-maximal``,
``oracle`` and ``gen``.

Exit codes: 0 success, 1 infeasible (or oracle disagreement), 2 input error,
3 numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import lpuu, oracle, tsp
from .instances import dump_document, generate_instance, parse_instance
from .model import DEFAULT_X_MAX, InstanceError, LpuuInstance, Tour, UtspInstance, validate_instance
from .simplex import NumericFailure

EXIT_OK, EXIT_INFEASIBLE, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3
CSV_COLUMNS = ("instance_id", "criterion", "variant", "solution", "value", "v_star", "set_size", "seed")


class InputError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    input: str
    command: str = "solve"
    criterion: str = "all"
    method: str = "held_karp"
    maximal_variant: str = "both"
    penalty: Optional[float] = None
    seed: int = 0
    samples: int = 10_000
    format: str = "human"
    x_max: float = DEFAULT_X_MAX
    tour: Optional[str] = None
    x: Optional[str] = None
    grid_points: int = 11

    def check(self, inst):
        if inst.kind == "dist" and self.samples < 100:
            raise InputError("--samples must be at least 100 for distribution instances")
        if self.criterion == "expected" and inst.kind != "dist":
            raise InputError("criterion 'expected' requires a distribution instance")


@dataclass
class RunResult:
    report: dict
    exit_code: int = EXIT_OK
    message: str = ""
    rows: list = field(default_factory=list)


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(round(v, 12))
    return str(v)


def _vec(x) -> list[float]:
    return [float(v) for v in np.asarray(x).reshape(-1)]


def _tour_labels(t: Tour) -> list[int]:
    return list(t.labels)


# ------------------------------------------------------------------- UTSP


def _utsp_results(inst: UtspInstance, cfg: RunConfig) -> list[dict]:
    out = []
    if inst.kind == "dist":
        tour, length = tsp.expected_optimal_tour(inst, cfg.method)
        # maximin and maximal coincide; the penalty cancels from the argmin
        for crit in ("maximin", "maximal", "expected") if cfg.criterion == "all" else (cfg.criterion,):
            out.append(
                dict(criterion=crit, variant="expected", solution=_tour_labels(tour),
                     value=length, v_star=None, set_size=1, penalty_sensitive=False)
            )
        return out
    if cfg.criterion in ("maximin", "all"):
        tour, v_star = tsp.maximin_tour(inst, cfg.method)
        out.append(dict(criterion="maximin", variant="worst-case", solution=_tour_labels(tour),
                        value=v_star, v_star=v_star, set_size=1))
    if cfg.criterion in ("maximal", "all"):
        tour, v_star = tsp.maximin_tour(inst, cfg.method)
        hyp = tsp.maximal_tours_hypograph(inst, v_star)
        if cfg.maximal_variant in ("hypograph", "both"):
            out.append(dict(criterion="maximal", variant="hypograph",
                            solution=[_tour_labels(t) for t in hyp], value=None,
                            v_star=v_star, set_size=len(hyp)))
        if cfg.maximal_variant in ("edge", "both"):
            edge = tsp.maximal_tours_edge_level(inst, hyp)
            out.append(dict(criterion="maximal", variant="edge",
                            solution=[_tour_labels(t) for t in edge], value=None,
                            v_star=v_star, set_size=len(edge)))
    return out


# ------------------------------------------------------------------- LPUU


def _lpuu_prob_choice(inst: LpuuInstance, cfg: RunConfig, extra=()):
    cands = lpuu.default_candidates(inst, cfg.grid_points) + [np.asarray(x, float) for x in extra]
    choice = lpuu.maximin_probabilistic(inst, cands, cfg.samples, cfg.seed)
    harsher = lpuu.maximin_probabilistic(inst.with_penalty(10.0 * inst.penalty), cands, cfg.samples, cfg.seed)
    sensitive = not np.array_equal(choice.x, harsher.x)
    return choice, sensitive, cands


def _lpuu_results(inst: LpuuInstance, cfg: RunConfig) -> tuple[list[dict], int, str]:
    out = []
    if inst.kind == "dist":
        choice, sensitive, cands = _lpuu_prob_choice(inst, cfg)
        crits = ("maximin", "maximal", "expected") if cfg.criterion == "all" else (cfg.criterion,)
        for crit in crits:
            out.append(dict(criterion=crit, variant="probabilistic", solution=_vec(choice.x),
                            value=choice.value, v_star=None, set_size=1,
                            score=choice.score, feasibility_probability=choice.probability,
                            candidates=len(cands), penalty_sensitive=sensitive))
        return out, EXIT_OK, ""

    res = lpuu.maximin_interval(inst)
    status = res.outcome.status
    v_star = res.outcome.value
    code, msg = EXIT_OK, ""
    if cfg.criterion in ("maximin", "all"):
        if status == "infeasible":
            code, msg = EXIT_INFEASIBLE, "inner feasibility space empty"
        out.append(dict(criterion="maximin", variant="inner", status=status,
                        solution=_vec(res.outcome.x) if res.outcome.optimal else None,
                        value=v_star, v_star=v_star, set_size=1 if res.outcome.optimal else 0))
    if cfg.criterion in ("maximal", "all"):
        outer = lpuu.outer_polyhedron(inst)
        if status == "infeasible":
            desc = {"all_nonnegative": True}
        elif status == "unbounded":
            desc = {"empty": True}
        else:
            obj = inst.objective()
            desc = {"A": outer.A.tolist(), "b": outer.b.tolist(),
                    "objective": obj.tolist(), "objective_floor": float(obj @ res.outcome.x)}
        out.append(dict(criterion="maximal", variant="outer", status=status, solution=desc,
                        value=None, v_star=v_star, set_size=None,
                        degenerate_inner_empty=status == "infeasible"))
    return out, code, msg


# --------------------------------------------------------------- commands


def _load(path: Path, cfg: RunConfig):
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    inst = parse_instance(text, x_max=cfg.x_max)
    if cfg.penalty is not None:
        if not isinstance(inst, LpuuInstance):
            raise InputError("--penalty applies to LPUU instances only")
        inst = validate_instance(inst.with_penalty(cfg.penalty), x_max=cfg.x_max)
    cfg.check(inst)
    return inst


def _instance_id(inst, path: Path) -> str:
    return inst.name or path.stem


def _solve(inst, cfg: RunConfig) -> tuple[list[dict], int, str]:
    if isinstance(inst, UtspInstance):
        return _utsp_results(inst, cfg), EXIT_OK, ""
    return _lpuu_results(inst, cfg)


def _check_maximal(inst, cfg: RunConfig) -> tuple[list[dict], int, str]:
    if isinstance(inst, UtspInstance):
        if not cfg.tour:
            raise InputError("check-maximal on a UTSP instance needs --tour")
        try:
            t = Tour.from_labels([int(v) for v in cfg.tour.split(",")])
        except ValueError as exc:
            raise InputError(f"bad --tour: {exc}") from None
        if t.n != inst.n:
            raise InputError(f"--tour has {t.n} cities, instance has {inst.n}")
        if inst.kind == "dist":
            best, length = tsp.expected_optimal_tour(inst, cfg.method)
            ok = t.length(inst.expected_times()) <= length + 1e-9
            return [dict(criterion="maximal", variant="expected", solution=_tour_labels(t),
                         value=ok, v_star=length, set_size=None)], EXIT_OK, f"maximal: {str(ok).lower()}"
        tour, v_star = tsp.maximin_tour(inst, cfg.method)
        rows, parts = [], []
        hyp = tsp.maximal_tours_hypograph(inst, v_star)
        if cfg.maximal_variant in ("hypograph", "both"):
            ok = t in hyp
            rows.append(dict(criterion="maximal", variant="hypograph", solution=_tour_labels(t),
                             value=ok, v_star=v_star, set_size=len(hyp)))
            parts.append(f"{str(ok).lower()} (hypograph)")
        if cfg.maximal_variant in ("edge", "both"):
            edge = tsp.maximal_tours_edge_level(inst, hyp)
            ok = t in edge
            rows.append(dict(criterion="maximal", variant="edge", solution=_tour_labels(t),
                             value=ok, v_star=v_star, set_size=len(edge)))
            parts.append(f"{str(ok).lower()} (edge)")
        return rows, EXIT_OK, "maximal: " + ", ".join(parts)

    if not cfg.x:
        raise InputError("check-maximal on an LPUU instance needs --x")
    try:
        x = np.array([float(v) for v in cfg.x.split(",")])
        if x.shape != (inst.n,) or np.any(x < 0):
            raise ValueError(f"expected {inst.n} nonnegative numbers")
    except ValueError as exc:
        raise InputError(f"bad --x: {exc}") from None
    if inst.kind == "dist":
        choice, _, cands = _lpuu_prob_choice(inst, cfg, extra=[x])
        idx = next(i for i, c in enumerate(cands) if np.array_equal(c, x))
        ok = choice.scores[idx] >= choice.score - 1e-12
        return [dict(criterion="maximal", variant="probabilistic", solution=_vec(x), value=bool(ok),
                     v_star=choice.score, set_size=None)], EXIT_OK, f"maximal: {str(ok).lower()}"
    verdict = lpuu.maximal_membership_interval(inst, x)
    note = " (inner feasibility space empty)" if verdict.degenerate_inner_empty else ""
    return [dict(criterion="maximal", variant="outer", solution=_vec(x), value=verdict.is_maximal,
                 v_star=None, set_size=None, degenerate_inner_empty=verdict.degenerate_inner_empty)], \
        EXIT_OK, f"maximal: {str(verdict.is_maximal).lower()}{note}"


def _oracle(inst, cfg: RunConfig) -> tuple[list[dict], int, str]:
    reports = [oracle.prop1_check(inst)]
    if isinstance(inst, UtspInstance) and inst.kind != "dist":
        table = oracle.tour_enumeration_oracle(inst)
        tour, v_star = tsp.maximin_tour(inst, cfg.method)
        hyp = tsp.maximal_tours_hypograph(inst, v_star)
        edge = tsp.maximal_tours_edge_level(inst, hyp)
        same = (tour == table.maximin_tour and hyp == table.hypograph_maximal
                and edge == table.edge_level_maximal)
        reports.append(oracle.OracleReport("tour sets", same and abs(v_star - table.v_star) <= 1e-9,
                                           abs(v_star - table.v_star), len(table.rows)))
    elif isinstance(inst, UtspInstance):
        table = oracle.tour_enumeration_oracle(inst)
        tour, length = tsp.expected_optimal_tour(inst, cfg.method)
        reports.append(oracle.OracleReport("expected tour", tour == table.expected_tour, 0.0, len(table.rows)))
    elif inst.kind != "dist":
        inner = lpuu.inner_polyhedron(inst)
        got = lpuu.maximin_interval(inst).outcome
        ref = oracle.lp_vertex_oracle(inner, inst.c, inst.sense)
        gap = abs(got.value - ref.value) if got.optimal and ref.optimal else 0.0
        reports.append(oracle.OracleReport("lp_solve", got.status == ref.status and gap <= 1e-6, gap, 1))
    rows = [dict(criterion="oracle", variant=r.subject, solution=r.detail or None, value=r.agreement,
                 v_star=None, set_size=r.cases_checked, max_discrepancy=r.max_discrepancy)
            for r in reports]
    ok = all(r.agreement for r in reports)
    return rows, EXIT_OK if ok else EXIT_INFEASIBLE, "oracle: " + ("agreement" if ok else "DISAGREEMENT")


def _enumerate(inst, cfg: RunConfig):
    return _solve(inst, replace(cfg, criterion="maximal"))


_COMMANDS = {
    "solve": _solve,
    "check-maximal": _check_maximal,
    "enumerate-maximal": _enumerate,
    "oracle": _oracle,
}


def run_command(cfg: RunConfig) -> RunResult:
    """Run one command on one instance file or a directory of ``*.json`` files."""
    path = Path(cfg.input)
    files = sorted(path.glob("*.json")) if path.is_dir() else [path]
    if path.is_dir() and not files:
        return RunResult({"error": f"no *.json files in {path}"}, EXIT_INPUT, f"no *.json files in {path}")
    results = [_run_one(f, cfg) for f in files]
    if len(results) == 1:
        return results[0]
    return RunResult(
        {"instances": [r.report for r in results]},
        max(r.exit_code for r in results),
        "\n".join(r.message for r in results if r.message),
        [row for r in results for row in r.rows],
    )


def _run_one(path: Path, cfg: RunConfig) -> RunResult:
    t0 = time.perf_counter()
    base = {"input": str(path), "command": cfg.command, "criterion": cfg.criterion, "seed": cfg.seed}
    try:
        inst = _load(path, cfg)
        results, code, msg = _COMMANDS[cfg.command](inst, cfg)
    except (InstanceError, InputError, tsp.CapExceeded, oracle.OracleCapExceeded) as exc:
        return RunResult({**base, "error": str(exc)}, EXIT_INPUT, f"input error: {exc}")
    except NumericFailure as exc:
        return RunResult({**base, "error": str(exc)}, EXIT_NUMERIC, f"numeric failure: {exc}")
    except ValueError as exc:
        return RunResult({**base, "error": str(exc)}, EXIT_INPUT, f"input error: {exc}")
    iid = _instance_id(inst, path)
    report = {
        **base,
        "instance_id": iid,
        "type": "utsp" if isinstance(inst, UtspInstance) else "lpuu",
        "kind": inst.kind,
        "samples": cfg.samples if inst.kind == "dist" else None,
        "results": results,
        "message": msg,
        "timing_s": time.perf_counter() - t0,
    }
    rows = [
        {
            "instance_id": iid,
            "criterion": r["criterion"],
            "variant": r["variant"],
            "solution": json.dumps(r["solution"], separators=(",", ":")),
            "value": _fmt(r.get("value")),
            "v_star": _fmt(r.get("v_star")),
            "set_size": _fmt(r.get("set_size")),
            "seed": cfg.seed,
        }
        for r in results
    ]
    return RunResult(report, code, msg, rows)


# ---------------------------------------------------------------- output


def _tour_str(t) -> str:
    return "(" + ",".join(map(str, t)) + ")"


def render_human(result: RunResult) -> str:
    reports = result.report.get("instances", [result.report])
    lines = []
    for rep in reports:
        if "error" in rep:
            lines.append(f"{rep['input']}: error: {rep['error']}")
            continue
        lines.append(f"instance {rep['instance_id']} ({rep['type']}, {rep['kind']})")
        for r in rep["results"]:
            sol = r["solution"]
            if rep["type"] == "utsp" and isinstance(sol, list) and sol and isinstance(sol[0], list):
                sol = "{" + ", ".join(_tour_str(t) for t in sol) + "}"
            elif rep["type"] == "utsp" and isinstance(sol, list):
                sol = _tour_str(sol)
            parts = [f"  {r['criterion']} [{r['variant']}]: {sol}"]
            for key in ("value", "v_star", "set_size", "status"):
                if r.get(key) is not None:
                    parts.append(f"{key}={r[key]}")
            lines.append(" ".join(parts))
        if rep.get("message"):
            lines.append(rep["message"])
        lines.append(f"  seed={rep['seed']} time={rep['timing_s']:.3f}s")
    return "\n".join(lines) + "\n"


def render_csv(result: RunResult) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(result.rows)
    return buf.getvalue()


def render(result: RunResult, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(result.report, indent=2) + "\n"
    if fmt == "csv":
        return render_csv(result)
    return render_human(result)


# ------------------------------------------------------------------ main


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="itsp", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--input", required=True, help="instance file or directory of *.json files")
        sp.add_argument("--method", choices=["held_karp", "bruteforce"], default="held_karp")
        sp.add_argument("--maximal-variant", choices=["hypograph", "edge", "both"], default="both")
        sp.add_argument("--penalty", type=float, default=None)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--samples", type=int, default=10_000)
        sp.add_argument("--format", choices=["human", "json", "csv"], default="human")
        sp.add_argument("--out", default=None, help="write the report here instead of stdout")
        sp.add_argument("--x-max", type=float, default=DEFAULT_X_MAX,
                        help="decision box bound used to validate the penalty")

    s = sub.add_parser("solve", help="solve under one or all criteria")
    common(s)
    s.add_argument("--criterion", choices=["maximin", "maximal", "expected", "all"], default="all")

    s = sub.add_parser("check-maximal", help="test one tour or decision for maximality")
    common(s)
    s.add_argument("--tour", help="1-based tour, e.g. 1,3,2,4")
    s.add_argument("--x", help="decision vector, e.g. 1.5,0")

    s = sub.add_parser("enumerate-maximal", help="list the maximal set")
    common(s)

    s = sub.add_parser("oracle", help="cross-check solvers against brute-force oracles")
    common(s)

    g = sub.add_parser("gen", help="generate a random instance document")
    g.add_argument("--problem", choices=["utsp", "lpuu"], default="utsp")
    g.add_argument("--kind", choices=["interval", "dist", "crisp"], default="interval")
    g.add_argument("--n", type=int, default=6, help="cities (utsp) or variables (lpuu)")
    g.add_argument("--m", type=int, default=2, help="constraints (lpuu)")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--spread", type=float, default=2.0)
    g.add_argument("--out", default=None)
    return p


def _emit(text: str, out: Optional[str]):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "gen":
        size = args.n if args.problem == "utsp" else (args.m, args.n)
        try:
            doc = generate_instance(args.problem, args.kind, size, args.seed, spread=args.spread)
        except ValueError as exc:
            print(f"input error: {exc}", file=sys.stderr)
            return EXIT_INPUT
        _emit(dump_document(doc), args.out)
        return EXIT_OK
    cfg = RunConfig(
        input=args.input,
        command=args.command,
        criterion=getattr(args, "criterion", "all"),
        method=args.method,
        maximal_variant=args.maximal_variant,
        penalty=args.penalty,
        seed=args.seed,
        samples=args.samples,
        format=args.format,
        x_max=args.x_max,
        tour=getattr(args, "tour", None),
        x=getattr(args, "x", None),
    )
    result = run_command(cfg)
    _emit(render(result, cfg.format), args.out)
    if result.exit_code != EXIT_OK and result.message and cfg.format != "human":
        print(result.message, file=sys.stderr)
    return result.exit_code
