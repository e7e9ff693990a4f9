"""Run the verification suites and print a per-theorem outcome table.

    python3 scripts/theorem_sweep.py --samples 500 --seed 3 --jsonl sweep.jsonl
"""

import argparse
import json
import time
from dataclasses import dataclass

from entangle_hierarchy.sweeps import SUITES, run_suite

OUTCOMES = ("Verified", "Violated", "Vacuous", "Undecidable")


@dataclass
class Config:
    suite: str = "all"
    samples: int = 200
    seed: int = 0
    jsonl: str | None = None


def main(cfg: Config) -> int:
    t0 = time.perf_counter()
    records = list(run_suite(cfg.suite, cfg.samples, cfg.seed))
    if cfg.jsonl:
        with open(cfg.jsonl, "w") as fh:
            for rec in records:
                fh.write(json.dumps(rec, sort_keys=True) + "\n")
    summary = records[-1]
    print(f"{'theorem':<12}" + "".join(f"{o:>13}" for o in OUTCOMES))
    for name, counts in summary["conclusions"].items():
        print(f"{name:<12}" + "".join(f"{counts.get(o, 0):>13}" for o in OUTCOMES))
    print(f"chain violations {summary['chain_violations']}, "
          f"consistency errors {summary['consistency_errors']}, "
          f"{summary['cases']} cases in {time.perf_counter() - t0:.1f} s")
    return 0 if summary["ok"] else 1


if __name__ == "__main__":
    p = argparse.ArgumentParser()
    p.add_argument("--suite", choices=SUITES + ("all",), default="all")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jsonl")
    raise SystemExit(main(Config(**vars(p.parse_args()))))
