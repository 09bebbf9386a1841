"""Wall-clock timings of the interval UTSP pipeline by city count.

    python3 scripts/benchmark_runtime.py --sizes 8 10 12 --repeats 3
"""

from __future__ import annotations

import argparse
import statistics
import time
from dataclasses import dataclass, field

from itsp import tsp
from itsp.instances import generate_instance, instance_from_document


@dataclass
class BenchConfig:
    sizes: list[int] = field(default_factory=lambda: [8, 10, 12])
    repeats: int = 3
    seed: int = 0
    spread: float = 2.0


def timed(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t0


def bench(cfg: BenchConfig):
    print(f"{'n':>3} {'maximin':>9} {'hypograph':>10} {'edge':>9} {'|hyp|':>9} {'|edge|':>7}")
    for n in cfg.sizes:
        inst = instance_from_document(generate_instance("utsp", "interval", n, cfg.seed, spread=cfg.spread))
        t_mm, t_hyp, t_edge = [], [], []
        for _ in range(cfg.repeats):
            (_, v_star), dt = timed(tsp.maximin_tour, inst)
            t_mm.append(dt)
            hyp, dt = timed(tsp.maximal_tours_hypograph, inst, v_star)
            t_hyp.append(dt)
            edge = None
            if n <= tsp.edge_cap():
                edge, dt = timed(tsp.maximal_tours_edge_level, inst, hyp)
                t_edge.append(dt)
        med = statistics.median
        edge_t = f"{med(t_edge):9.3f}" if t_edge else f"{'-':>9}"
        edge_n = len(edge) if edge is not None else "-"
        print(f"{n:>3} {med(t_mm):9.3f} {med(t_hyp):10.3f} {edge_t} {len(hyp):>9} {edge_n:>7}")


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[8, 10, 12])
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--spread", type=float, default=2.0)
    bench(BenchConfig(**vars(p.parse_args(argv))))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
