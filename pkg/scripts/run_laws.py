"""Run every law suite over several seeds and tabulate cases, verdicts and timings.

    python scripts/run_laws.py --seeds 0 1 2 --samples 100
"""
from __future__ import annotations

import argparse
import time
from dataclasses import dataclass, field

from causalcat import laws
from causalcat.hilbfield import TAU


@dataclass
class Config:
    seeds: list[int] = field(default_factory=lambda: [0])
    samples: int | None = None
    tol: float = TAU
    suites: tuple[str, ...] = laws.SUITES


def run(cfg: Config) -> bool:
    print(f"{'suite':<14}{'seed':>5}{'cases':>8}{'failed laws':>13}{'max dev':>11}{'time':>8}")
    ok = True
    for name in cfg.suites:
        for seed in cfg.seeds:
            t0 = time.perf_counter()
            rep = laws.run_suite(name, seed, cfg.samples, cfg.tol)
            dt = time.perf_counter() - t0
            failed = sum(not v for v in rep.laws.values())
            ok &= rep.passed
            print(f"{name:<14}{seed:>5}{rep.cases:>8}{failed:>13}{rep.max_deviation:>11.2g}{dt:>7.2f}s")
            for f in rep.failures[:3]:
                print(f"    {f.law}: witness {f.witness!r}")
    print("all suites pass" if ok else "some suites FAIL")
    return ok


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--seeds", type=int, nargs="+", default=[0])
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--tol", type=float, default=TAU)
    p.add_argument("--suites", nargs="+", default=list(laws.SUITES), choices=laws.SUITES)
    a = p.parse_args()
    raise SystemExit(0 if run(Config(a.seeds, a.samples, a.tol, tuple(a.suites))) else 1)


if __name__ == "__main__":
    main()
