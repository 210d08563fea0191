"""Named law suites driven by one seeded generator."""
from __future__ import annotations

import itertools
from typing import Callable

import numpy as np

from . import causal, lattice
from .causal import naturally_labelled_sites, random_site
from .hilbfield import TAU, BaseSpace, compose, random_base, random_field, random_morphism, tensor_mor
from .lattice import (
    all_semilattices, check_all_restrictions, check_closure, chain, divisor_lattice, explicit_powerset, meet_laws,
    random_semilattice, restrict_closure, subunits_of_thin, thin_from_semilattice,
)
from .report import LawReport
from .restriction import coreflection_report, graded_monad_report, localisation_report
from .subunits import (
    Subunit, all_subunits, firmness_report, has_support_in, random_subunit, subunit_leq,
    subunit_meet, support,
)
from . import firmmod

DEFAULT_SAMPLES = {
    "semilattice": 1000,
    "closure": 500,
    "firmness": 0,
    "support": 500,
    "coreflection": 300,
    "graded-monad": 200,
    "localisation": 50,
    "causal-site": 500,
    "complements": 0,
    "firm-rings": 100,
}

SUITES = tuple(DEFAULT_SAMPLES)


def semilattice_suite(rng, samples: int, tol: float = TAU) -> LawReport:
    """Meet laws on abstract semilattices and on subunits under the tensor."""
    rep = LawReport("semilattice")
    catalog = [L for n in range(1, 7) for L in all_semilattices(n)]
    catalog += [divisor_lattice(12), divisor_lattice(30), explicit_powerset("abc")]
    for L in catalog:
        sub = meet_laws(L)
        for law, ok in sub.laws.items():
            rep.record(f"lattice meet {law}", ok, sub.witness(law))
        back = subunits_of_thin(thin_from_semilattice(L))
        rep.record("thin round trip", back == L, repr(L))

    def check_pair(u: Subunit, v: Subunit, case: int):
        m = subunit_meet(u, v)
        w = (u.sorted_carrier(), v.sorted_carrier())
        rep.record("carrier(u (x) v) = U & V", m.carrier == u.carrier & v.carrier, w, case)
        rep.record("meet commutative", m.carrier == subunit_meet(v, u).carrier, w, case)
        rep.record("meet below both", subunit_leq(m, u, tol) and subunit_leq(m, v, tol), w, case)
        rep.record("leq by inclusion agrees", subunit_leq(u, v, tol) == (u.carrier <= v.carrier), w, case)

    def check_single(u: Subunit, case: int):
        full = Subunit.full(u.base)
        w = u.sorted_carrier()
        rep.record("unit law", subunit_meet(u, full).carrier == u.carrier == subunit_meet(full, u).carrier, w, case)
        rep.record("idempotent", subunit_meet(u, u).carrier == u.carrier, w, case)

    case = 0
    for n in range(0, 5):
        base = BaseSpace(tuple("abcd"[:n]))
        subs = all_subunits(base)
        for u in subs:
            check_single(u, case)
            for v in subs:
                check_pair(u, v, case)
                case += 1
        for u, v, w in itertools.product(subs, repeat=3) if n <= 3 else ():
            rep.record("meet associative",
                       subunit_meet(subunit_meet(u, v), w).carrier == subunit_meet(u, subunit_meet(v, w)).carrier,
                       (u.sorted_carrier(), v.sorted_carrier(), w.sorted_carrier()))
    rep.values["exhaustive pairs"] = case
    for _ in range(samples):
        base = random_base(rng, 8, 5)
        u, v, w = (random_subunit(rng, base) for _ in range(3))
        check_single(u, case)
        check_pair(u, v, case)
        rep.record("meet associative",
                   subunit_meet(subunit_meet(u, v), w).carrier == subunit_meet(u, subunit_meet(v, w)).carrier,
                   None, case)
        m = subunit_meet(u, v)
        rep.record("meet scalars multiply",
                   all(abs(m.scalar(p) - u.scalar(p) * v.scalar(p)) <= tol for p in m.carrier), None, case)
        case += 1
    for _ in range(min(samples, 50)):
        L = random_semilattice(rng, 5, 6)
        sub = meet_laws(L)
        for law, ok in sub.laws.items():
            rep.record(f"lattice meet {law}", ok, sub.witness(law))
    rep.cases = case
    return rep


RESTRICT_ALL_LIMIT = 5


def closure_suite(rng, samples: int, tol: float = TAU) -> LawReport:
    """Future/past closures of random sites, and their restrictions to every down-set.

    All down-sets go through the bitmask check; the object-level restriction is
    built for every r on small sites and for two random r otherwise, and must
    agree with the bitmask table.
    """
    rep = LawReport("closure")
    for case in range(samples):
        site = random_site(rng, int(rng.integers(1, 11)))
        C = causal.causal_structure(site)
        for name, op in (("future", C.future), ("past", C.past)):
            sub = check_closure(op)
            for law, ok in sub.laws.items():
                rep.record(f"{name} {law}", ok, sub.witness(law), case)
            sub = check_all_restrictions(op)
            for law, ok in sub.laws.items():
                rep.record(f"restricted {law} (all down-sets)", ok, (name, sub.witness(law)), case)
            pts = list(site.points)
            if len(pts) <= RESTRICT_ALL_LIMIT:
                rs = op.carrier.elements
            else:
                rs = [frozenset(p for p in pts if rng.random() < 0.5) for _ in range(2)]
            for r in rs:
                D = restrict_closure(op, r)
                sub = check_closure(D)
                rep.record("restricted closure is a closure", sub.passed,
                           (name, sorted(r), [k for k, ok in sub.laws.items() if not ok]), case)
                rep.record("restriction matches C(s) & r", all(D(s) == op(s) & r for s in D.carrier.elements),
                           (name, sorted(r)), case)
        rep.cases += 1
    return rep


def firmness_suite(rng, samples: int, tol: float = TAU) -> LawReport:
    rep = LawReport("firmness")
    for n in range(0, 6):
        rep.merge(firmness_report(BaseSpace(tuple("abcde"[:n])), dims_bound=2, tol=tol))
    return rep


def support_suite(rng, samples: int, tol: float = TAU) -> LawReport:
    rep = LawReport("support")
    for case in range(samples):
        base = random_base(rng, 5)
        E, F, G = (random_field(rng, base, 4) for _ in range(3))
        f = random_morphism(rng, E, F, zero_prob=0.3)
        g = random_morphism(rng, F, G, zero_prob=0.3)
        sf, sg = support(f, tol), support(g, tol)
        both = sf.carrier & sg.carrier
        w = (sf.sorted_carrier(), sg.sorted_carrier())
        rep.record("supp(g f) within supp g & supp f", support(compose(g, f), tol).carrier <= both, w, case)
        rep.record("supp(f (x) g) = supp f & supp g", support(tensor_mor(f, g), tol).carrier == both, w, case)
        rep.record("g f supported in supp g (x) supp f",
                   has_support_in(compose(g, f), subunit_meet(sg, sf), "both", tol), w, case)
        u = random_subunit(rng, base)
        fast = has_support_in(f, u, "fast", tol)
        slow = has_support_in(f, u, "factor", tol)
        rep.record("fast and factorization paths agree", fast == slow, (u.sorted_carrier(), w), case)
        rep.record("supported iff support below", fast == (sf.carrier <= u.carrier), u.sorted_carrier(), case)
        rep.record("f supported in its support", has_support_in(f, sf, "both", tol), w, case)
        rep.cases += 1
    return rep


def coreflection_suite(rng, samples, tol=TAU):
    return coreflection_report(samples, rng=rng, tol=tol)


def graded_monad_suite(rng, samples, tol=TAU):
    return graded_monad_report(samples, rng=rng, tol=tol)


def localisation_suite(rng, samples: int, tol: float = TAU) -> LawReport:
    rep = LawReport("localisation")
    for _ in range(samples):
        base = random_base(rng, 4)
        rep.merge(localisation_report(random_subunit(rng, base), 1, rng=rng, tol=tol))
    return rep


def causal_site_suite(rng, samples: int, tol: float = TAU) -> LawReport:
    rep = LawReport("causal-site")
    for case in range(samples):
        site = random_site(rng, int(rng.integers(0, 11)))
        v = causal.validate_site(site, strict=True)
        rep.record("generated site valid", v.passed, [k for k, ok in v.laws.items() if not ok], case)
        pts = list(site.points)
        S = frozenset(p for p in pts if rng.random() < 0.4)
        T = S | frozenset(p for p in pts if rng.random() < 0.3)
        w = sorted(S)
        If, Jf = causal.chron_future(site, S), causal.causal_future(site, S)
        Ip, Jp = causal.chron_past(site, S), causal.causal_past(site, S)
        rep.record("I+ within J+", If <= Jf, w, case)
        rep.record("I- within J-", Ip <= Jp, w, case)
        rep.record("I+ monotone", If <= causal.chron_future(site, T), w, case)
        rep.record("I+ I+ within I+", causal.chron_future(site, If) <= If, w, case)
        rep.record("S within J+(S)", S <= Jf and S <= Jp, w, case)
        C = causal.future_closure(site)
        rep.record("C+ idempotent", C(C(S)) == C(S), w, case)
        rep.cases += 1
    bad = causal.CausalSite(("x",), {("x", "x")}, {("x", "x")})
    v = causal.validate_site(bad)
    rep.record("self-loop rejected", not v.laws["chron irreflexive"], "x")
    return rep


def complements_suite(rng, samples: int, tol: float = TAU) -> LawReport:
    """Every site on at most five points, every future set and every past set."""
    rep = LawReport("complements")
    for n in range(0, 6):
        for site in naturally_labelled_sites(n):
            for direction, closed in (("future", causal.future_sets(site)), ("past", causal.past_sets(site))):
                for F in closed:
                    c = causal.complement(site, F, direction)
                    w = (direction, sorted(F), sorted(site.chron))
                    rep.record("complement closed", c.closed, w, rep.cases)
                    rep.record("disjoint", c.disjoint, w, rep.cases)
                    rep.record("covers", c.covers, w, rep.cases)
                    rep.record("unique", c.unique is True, w, rep.cases)
                    rep.cases += 1
    return rep


def firm_rings_suite(rng, samples: int, tol: float = TAU) -> LawReport:
    rep = LawReport("firm-rings")
    for n in range(0, 5):
        ideals = firmmod.enumerate_subunits(n)
        rep.record("2^n ideals", len(ideals) == 2 ** n, n)
        rep.merge(firmmod.equivalence_report(n, samples, rng=rng))
    return rep


SUITE_FUNCS: dict[str, Callable[..., LawReport]] = {
    "semilattice": semilattice_suite,
    "closure": closure_suite,
    "firmness": firmness_suite,
    "support": support_suite,
    "coreflection": coreflection_suite,
    "graded-monad": graded_monad_suite,
    "localisation": localisation_suite,
    "causal-site": causal_site_suite,
    "complements": complements_suite,
    "firm-rings": firm_rings_suite,
}


def suite_rng(seed: int, name: str) -> np.random.Generator:
    """Generator for one suite, independent of which other suites run."""
    children = np.random.SeedSequence(seed).spawn(len(SUITES))
    return np.random.default_rng(children[SUITES.index(name)])


def run_suite(name: str, seed: int = 0, samples: int | None = None, tol: float = TAU) -> LawReport:
    if name not in SUITE_FUNCS:
        raise KeyError(name)
    n = DEFAULT_SAMPLES[name] if samples is None else samples
    return SUITE_FUNCS[name](suite_rng(seed, name), n, tol)
