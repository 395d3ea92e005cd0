"""Time the permutation-triple search on the bundled Belyi profiles.

Collects every declared profile plus the isotope family and the two small
reference profiles, runs the search under a node budget, and prints one JSON
line per profile (status, nodes, seconds).

    python3 scripts/search_timings.py [--budget N] [--max-degree D]
"""

from __future__ import annotations

import argparse
import json
import time
from dataclasses import dataclass

from kfv.belyi import (
    RamificationProfile, check_riemann_hurwitz, isotope_profile, realizable_as_permutation_triple,
)
from kfv.kfw_format import bundled_names, load


@dataclass
class SearchConfig:
    budget: int = 10**6
    max_degree: int = 30


def profiles():
    seen = {}
    seen[(5, (3, 2), (2, 1, 1, 1), (5,))] = "reference"
    seen[(4, (2, 2), (2, 2), (3, 1))] = "klein"
    for k in range(2, 7):
        p = isotope_profile(k)
        seen.setdefault((p.n, *p.partitions()), f"isotope k={k}")
    for name in bundled_names():
        for zid, block in load(name).belyi.items():
            if block.profile is not None:
                p = block.profile
                seen.setdefault((p.n, *p.partitions()), f"{name} E{zid}")
    return [(RamificationProfile(*key), label) for key, label in seen.items()]


def run(cfg):
    for p, label in sorted(profiles(), key=lambda x: x[0].n):
        if p.n > cfg.max_degree or not check_riemann_hurwitz(p):
            continue
        start = time.perf_counter()
        res = realizable_as_permutation_triple(p, budget=cfg.budget)
        row = {"source": label, "profile": str(p), "status": res.status, "nodes": res.nodes,
               "seconds": round(time.perf_counter() - start, 3)}
        print(json.dumps(row), flush=True)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--budget", type=int, default=SearchConfig.budget)
    ap.add_argument("--max-degree", type=int, default=SearchConfig.max_degree)
    args = ap.parse_args()
    run(SearchConfig(args.budget, args.max_degree))


if __name__ == "__main__":
    main()
