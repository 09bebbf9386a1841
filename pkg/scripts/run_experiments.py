"""Batch experiments on random instances.

Writes one CSV row per instance: set sizes of the maximin and maximal
solutions for interval UTSP, and inner/outer status plus penalty sensitivity
for LPUU.  Example::

    python3 scripts/run_experiments.py --problem utsp --sizes 5 6 7 8 --seeds 20
    python3 scripts/run_experiments.py --problem lpuu --sizes 2 3 --seeds 50 --kind dist
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from itsp import lpuu, tsp
from itsp.instances import generate_instance, instance_from_document


@dataclass
class ExperimentConfig:
    problem: str = "utsp"
    kind: str = "interval"
    sizes: list[int] = field(default_factory=lambda: [5, 6, 7, 8])
    seeds: int = 10
    spread: float = 2.0
    samples: int = 5000
    out: str | None = None


def utsp_row(inst, cfg: ExperimentConfig) -> dict:
    t0 = time.perf_counter()
    if inst.kind == "dist":
        tour, length = tsp.expected_optimal_tour(inst)
        return dict(solution=str(tour), value=length, hypograph=1, edge=1,
                    seconds=time.perf_counter() - t0)
    report = tsp.maximal_tour_report(inst, "both" if inst.n <= tsp.edge_cap() else "hypograph")
    edge = report.edge_level_maximal
    return dict(
        solution=str(report.maximin_tour),
        value=report.maximin_value,
        hypograph=len(report.hypograph_maximal),
        edge="" if edge is None else len(edge),
        seconds=time.perf_counter() - t0,
    )


def lpuu_row(inst, cfg: ExperimentConfig, seed: int) -> dict:
    t0 = time.perf_counter()
    if inst.kind == "dist":
        cands = lpuu.default_candidates(inst, grid_points=6)
        choice = lpuu.maximin_probabilistic(inst, cands, cfg.samples, seed)
        harsher = lpuu.maximin_probabilistic(inst.with_penalty(10 * inst.penalty), cands, cfg.samples, seed)
        return dict(
            solution=np.round(choice.x, 4).tolist(),
            value=choice.value,
            status=f"p={choice.probability:.3f}",
            penalty_sensitive=not np.array_equal(choice.x, harsher.x),
            seconds=time.perf_counter() - t0,
        )
    out = lpuu.maximin_interval(inst).outcome
    return dict(
        solution=None if out.x is None else np.round(out.x, 4).tolist(),
        value=out.value,
        status=out.status,
        penalty_sensitive=False,
        seconds=time.perf_counter() - t0,
    )


def run(cfg: ExperimentConfig) -> list[dict]:
    rows = []
    for size in cfg.sizes:
        for seed in range(cfg.seeds):
            shape = size if cfg.problem == "utsp" else (size, size)
            doc = generate_instance(cfg.problem, cfg.kind, shape, seed, spread=cfg.spread)
            inst = instance_from_document(doc)
            row = utsp_row(inst, cfg) if cfg.problem == "utsp" else lpuu_row(inst, cfg, seed)
            rows.append({"instance": doc["name"], "size": size, "seed": seed, **row})
    return rows


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--problem", choices=["utsp", "lpuu"], default="utsp")
    p.add_argument("--kind", choices=["interval", "dist", "crisp"], default="interval")
    p.add_argument("--sizes", type=int, nargs="+", default=[5, 6, 7, 8])
    p.add_argument("--seeds", type=int, default=10)
    p.add_argument("--spread", type=float, default=2.0)
    p.add_argument("--samples", type=int, default=5000)
    p.add_argument("--out")
    cfg = ExperimentConfig(**vars(p.parse_args(argv)))
    rows = run(cfg)
    fh = open(cfg.out, "w", newline="") if cfg.out else sys.stdout
    try:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if cfg.out:
            fh.close()
    print(f"# {len(rows)} instances, config {asdict(cfg)}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
