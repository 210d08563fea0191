"""Where the numerical tolerance decides support and locality.

A one-point morphism with fiber c * I_d is scanned over magnitudes |c| around
the tolerance; the table shows when the point enters the support and when
restriction to that point starts (or stops) treating the field as local.
"""
from __future__ import annotations

import argparse

import numpy as np

from causalcat.hilbfield import TAU, BaseSpace, HField, HMorphism, matrix_rank
from causalcat.subunits import Subunit, has_support_in, support


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--tol", type=float, default=TAU)
    a = p.parse_args()

    base = BaseSpace(["x", "y"])
    E = HField(base, (a.dim, a.dim))
    empty_at_x = Subunit(base, ["y"])
    print(f"{'|c|':>9}  {'x in supp':>9}  {'supported off x':>15}  {'rank(diag(1, c))':>16}")
    for c in np.logspace(-13, -5, 17):
        f = HMorphism(E, E, [c * np.eye(a.dim), np.zeros((a.dim, a.dim))])
        in_supp = "x" in support(f, a.tol).carrier
        off = has_support_in(f, empty_at_x, "both", a.tol)
        r = matrix_rank(np.diag([1.0, c]), a.tol)
        print(f"{c:>9.1e}  {str(in_supp):>9}  {str(off):>15}  {r:>16}")


if __name__ == "__main__":
    main()
