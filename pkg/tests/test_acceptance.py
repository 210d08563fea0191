"""Acceptance criteria, one test each, at the stated sizes, tolerances and time limits.

Each test prints one line ``ACCEPTANCE <n> PASS|FAIL ...``.  Run directly with
``python tests/test_acceptance.py`` to get just those lines.
"""
from __future__ import annotations

import sys
import time

import numpy as np
import pytest

from causalcat import firmmod, laws
from causalcat.causal import diamond, future_closure
from causalcat.protocol import Scenario, random_scenario, verify_teleportation

TAU = 1e-9


def _laws_ok(rep, names):
    missing = [n for n in names if n not in rep.laws]
    assert not missing, f"suite did not check {missing}"
    return all(rep.laws[n] for n in names)


def c1_semilattice():
    rep = laws.run_suite("semilattice", samples=1000, tol=TAU)
    ok = _laws_ok(rep, ["carrier(u (x) v) = U & V", "unit law", "idempotent", "meet associative"])
    # every carrier pair over bases of 0..4 points
    exhaustive = sum(4 ** n for n in range(5))
    ok &= rep.values["exhaustive pairs"] == exhaustive and rep.cases == exhaustive + 1000
    return ok and rep.passed, f"{rep.cases} cases"


def c2_firmness():
    rep = laws.run_suite("firmness", tol=TAU)
    ok = _laws_ok(rep, ["s (x) id_T monic"]) and rep.cases == sum(4 ** n for n in range(6))
    return ok and not rep.failures, f"{rep.cases} subunit pairs, {len(rep.failures)} failures"


def c3_support():
    rep = laws.run_suite("support", samples=500, tol=TAU)
    ok = _laws_ok(rep, ["supp(g f) within supp g & supp f", "supp(f (x) g) = supp f & supp g",
                        "fast and factorization paths agree"])
    return ok and rep.passed and rep.cases == 500, f"{rep.cases} pairs"


def c4_coreflection():
    rep = laws.run_suite("coreflection", samples=300, tol=TAU)
    ok = _laws_ok(rep, ["backward after forward", "forward after backward",
                        "triangle at local object", "triangle at restricted object"])
    ok &= rep.max_deviation <= TAU and rep.cases == 300
    return ok and rep.passed, f"max deviation {rep.max_deviation:.2g}"


def c5_graded_monad():
    rep = laws.run_suite("graded-monad", samples=200, tol=TAU)
    ok = _laws_ok(rep, ["associativity square", "left unit triangle", "right unit triangle"])
    ok &= rep.max_deviation <= TAU and rep.cases == 200 and rep.values["non-canonical grades"] > 0
    return ok and rep.passed, (f"max deviation {rep.max_deviation:.2g}, "
                               f"{rep.values['non-canonical grades']} non-canonical grades")


def c6_localisation():
    rep = laws.run_suite("localisation", tol=TAU)
    ok = _laws_ok(rep, ["Q inverts id_E (x) s", "eta_E iso"])
    return ok and rep.passed, f"{rep.cases} sampled objects"


def c7_closure():
    rep = laws.run_suite("closure", samples=500, tol=TAU)
    names = [f"{d} {law}" for d in ("future", "past") for law in ("monotone", "inflationary", "idempotent")]
    names += [f"restricted {law} (all down-sets)" for law in ("monotone", "inflationary", "idempotent")]
    ok = _laws_ok(rep, names) and rep.cases == 500
    return ok and rep.passed, f"{rep.cases} sites"


def c8_complements():
    rep = laws.run_suite("complements", tol=TAU)
    ok = _laws_ok(rep, ["complement closed", "disjoint", "covers", "unique"])
    return ok and rep.passed, f"{rep.cases} closed sets"


def c9_teleportation():
    D = diamond()
    C = future_closure(D)
    dual = verify_teleportation(Scenario(D, ["p"], ["a"], ["b"], 2))
    ok = dual.support == ["q"] and set(dual.support) == C(frozenset("a")) & C(frozenset("b"))
    ok &= dual.deviation == 0
    norm = verify_teleportation(Scenario(D, ["p"], ["a"], ["b"], 2, "normalized", "normalized"))
    ok &= norm.support == ["q"] and norm.deviation <= 1e-12
    rng = np.random.default_rng(0)
    contained = sum(verify_teleportation(random_scenario(rng)).contained for _ in range(200))
    ok &= contained == 200
    return ok, f"diamond {{q}}, dual dev {dual.deviation:.2g}, normalized dev {norm.deviation:.2g}, {contained}/200 contained"


def c10_firm_rings():
    ok = True
    for n in range(5):
        ok &= len(firmmod.enumerate_subunits(n)) == 2 ** n
        rep = firmmod.equivalence_report(n, samples=100, seed=n)
        ok &= rep.passed and rep.cases == 100
    return ok, "n = 0..4, 100 samples each"


CRITERIA = [
    (1, "subunit semilattice", c1_semilattice, 5),
    (2, "firmness", c2_firmness, 5),
    (3, "support calculus", c3_support, 10),
    (4, "coreflection", c4_coreflection, 10),
    (5, "graded monad", c5_graded_monad, 10),
    (6, "localisation", c6_localisation, 5),
    (7, "closure operators", c7_closure, 5),
    (8, "complements", c8_complements, 10),
    (9, "teleportation", c9_teleportation, 10),
    (10, "firm rings", c10_firm_rings, 10),
]


def evaluate(number, title, fn, limit):
    t0 = time.perf_counter()
    ok, detail = fn()
    elapsed = time.perf_counter() - t0
    passed = bool(ok) and elapsed < limit
    line = (f"ACCEPTANCE {number:>2} {'PASS' if passed else 'FAIL'} {title}: {detail}; "
            f"{elapsed:.2f}s (limit {limit}s)")
    return passed, bool(ok), elapsed, line


@pytest.mark.parametrize("number,title,fn,limit", CRITERIA, ids=[c[1].replace(" ", "-") for c in CRITERIA])
def test_criterion(number, title, fn, limit, capsys):
    passed, ok, elapsed, line = evaluate(number, title, fn, limit)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line
    assert elapsed < limit, line


if __name__ == "__main__":
    results = [evaluate(*c) for c in CRITERIA]
    for *_, line in results:
        print(line)
    sys.exit(0 if all(r[0] for r in results) else 1)
