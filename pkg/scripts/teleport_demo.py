"""Teleportation across random causal sites.

Reports the diamond in both pair modes, then how often the restricted map is
invertible and how often Alice's and Bob's futures fail to meet, first with the
dual pair and then with a random (non-dual) effect for Alice.
"""
from __future__ import annotations

import argparse
from dataclasses import dataclass

import numpy as np

from causalcat.causal import diamond
from causalcat.protocol import Scenario, random_scenario, verify_teleportation


@dataclass
class Config:
    n: int = 500
    seed: int = 0
    max_points: int = 8
    max_qdim: int = 3


def run(cfg: Config) -> None:
    for mode in ("dual", "normalized"):
        rep = verify_teleportation(Scenario(diamond(), ["p"], ["a"], ["b"], 2, mode, mode))
        print(f"diamond, {mode} pair:")
        print("  " + rep.format_text().replace("\n", "\n  "))

    rng = np.random.default_rng(cfg.seed)
    for label, random_eps in (("dual pair", False), ("random effect", True)):
        contained = iso = empty = 0
        worst = 0.0
        for _ in range(cfg.n):
            scn = random_scenario(rng, cfg.max_points, cfg.max_qdim)
            if random_eps:
                d = scn.qdim
                eps = rng.normal(size=(1, d * d)) + 1j * rng.normal(size=(1, d * d))
                scn = Scenario(scn.site, scn.r, scn.s, scn.t, d, "dual", eps)
            rep = verify_teleportation(scn)
            contained += rep.contained
            iso += rep.restricted_iso
            empty += rep.empty_intersection
            if not random_eps:
                worst = max(worst, rep.deviation)
        print(f"{cfg.n} random scenarios, {label}: support contained {contained}, "
              f"restricted map invertible {iso}, empty intersection {empty}"
              + (f", worst deviation {worst:.2g}" if not random_eps else ""))


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-points", type=int, default=8)
    p.add_argument("--max-qdim", type=int, default=3)
    a = p.parse_args()
    run(Config(a.n, a.seed, a.max_points, a.max_qdim))


if __name__ == "__main__":
    main()
