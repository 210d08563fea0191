import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from causalcat.lattice import (
    ClosureOperator, DomainError, FiniteSemilattice, PowersetLattice, all_semilattices, chain,
    check_all_restrictions,
    check_closure, check_semilattice, divisor_lattice, explicit_powerset, identity_closure,
    meet_laws, random_semilattice, restrict_closure, semilattice_from_json, set_id,
    subunits_of_thin, thin_from_semilattice, top_closure,
)


def test_powerset_meet_is_intersection():
    L = explicit_powerset("abc")
    assert L.meet("{a,b}", "{b,c}") == "{b}"


def test_meet_with_top_is_unit():
    L = explicit_powerset("abc")
    for x in L.elements:
        assert L.meet(x, L.top) == x


def test_divisor_lattice_meet_matches_brute_force_gcd():
    L = divisor_lattice(12)
    # oracle: the largest common divisor found by scanning all divisors
    common = [d for d in range(1, 13) if 4 % d == 0 and 6 % d == 0]
    assert L.meet("4", "6") == str(max(common)) == "2"


def test_unknown_element_is_a_domain_error():
    with pytest.raises(DomainError):
        chain(3).meet("0", "nope")


def test_invalid_order_rejected():
    with pytest.raises(DomainError, match="antisymmetric"):
        FiniteSemilattice("xy", [("x", "x"), ("y", "y"), ("x", "y"), ("y", "x")], "y")
    # two maximal elements and no top
    bad = FiniteSemilattice("xyz", [("x", "x"), ("y", "y"), ("z", "z"), ("x", "y"), ("x", "z")], "y",
                            check=False)
    rep = check_semilattice(bad)
    assert not rep.laws["top is greatest"]


@pytest.mark.parametrize("n", range(1, 7))
def test_meet_laws_exhaustive_small_semilattices(n):
    found = all_semilattices(n)
    assert found
    for L in found:
        assert meet_laws(L).passed


def test_all_semilattices_covers_known_lattices():
    # lattices on 4 elements: the chain and the square
    shapes = {tuple(sorted(len(L.lower_bounds(x)) for x in L.elements)) for L in all_semilattices(4)}
    assert shapes == {(1, 2, 3, 4), (1, 2, 2, 4)}


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 7), st.integers(1, 9))
def test_meet_laws_random_semilattices(seed, atoms, gens):
    L = random_semilattice(np.random.default_rng(seed), atoms, gens)
    assert meet_laws(L).passed


# --- closure operators -------------------------------------------------------

def test_identity_and_top_closures_pass():
    L = explicit_powerset("abc")
    assert check_closure(identity_closure(L)).passed
    assert check_closure(top_closure(L)).passed


def test_non_inflationary_map_reports_witness():
    L = explicit_powerset("ab")
    C = ClosureOperator(L, {"{}": "{}", "{a}": "{}", "{b}": "{b}", "{a,b}": "{a,b}"})
    rep = check_closure(C)
    assert not rep.laws["inflationary"]
    assert rep.witness("inflationary") == "{a}"
    assert rep.laws["monotone"] and rep.laws["idempotent"]


def test_non_monotone_and_non_idempotent_maps_caught():
    P = PowersetLattice("ab")
    a, b, ab, e = frozenset("a"), frozenset("b"), frozenset("ab"), frozenset()
    # inflationary and idempotent, but {a} <= {a,b} while C({a}) = {a,b} and C({a,b})... is fine;
    # break monotonicity with {} |-> {b}, {a} |-> {a}
    C = ClosureOperator(P, {e: b, a: a, b: b, ab: ab})
    rep = check_closure(C)
    assert not rep.laws["monotone"]
    C2 = ClosureOperator(chain(3), {"0": "1", "1": "2", "2": "2"})
    rep2 = check_closure(C2)
    assert not rep2.laws["idempotent"] and rep2.witness("idempotent") == "0"


def test_restrict_identity_closure_is_identity_on_down_set():
    L = explicit_powerset("abc")
    D = restrict_closure(identity_closure(L), "{a,c}")
    assert set(D.carrier.elements) == {"{}", "{a}", "{c}", "{a,c}"}
    assert all(D(x) == x for x in D.carrier.elements)


def test_restrict_top_closure_is_constant():
    L = explicit_powerset("abc")
    D = restrict_closure(top_closure(L), "{a,c}")
    assert all(D(x) == "{a,c}" for x in D.carrier.elements)


def test_restrict_closure_worked_example():
    P = PowersetLattice("abc")
    C = ClosureOperator(P, {S: (S | {"c"}) if S else S for S in P.elements})
    assert check_closure(C).passed
    r = frozenset("ac")
    D = restrict_closure(C, r)
    # definition evaluated by hand: ({a} | {c}) & {a,c}
    assert D(frozenset("a")) == (frozenset("a") | {"c"}) & r == frozenset("ac")
    assert check_closure(D).passed


def test_restrict_unknown_element():
    with pytest.raises(DomainError):
        restrict_closure(identity_closure(chain(2)), "7")


def _moore_closure(P: PowersetLattice, closed: set) -> ClosureOperator:
    """Closure from an intersection-closed family: least closed superset."""
    closed = set(closed) | {P.top}
    while True:
        new = {a & b for a in closed for b in closed} - closed
        if not new:
            break
        closed |= new
    table = {}
    for S in P.elements:
        above = [c for c in closed if S <= c]
        table[S] = frozenset.intersection(*above)
    return ClosureOperator(P, table)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_restrict_closure_preserves_axioms_on_every_down_set(seed):
    rng = np.random.default_rng(seed)
    P = PowersetLattice("abcde")  # 32 elements
    family = {frozenset(x for x in "abcde" if rng.random() < 0.5) for _ in range(int(rng.integers(0, 6)))}
    C = _moore_closure(P, family)
    assert check_closure(C).passed
    for r in P.elements:
        assert check_closure(restrict_closure(C, r)).passed


def test_restrict_closure_explicit_carrier():
    L = divisor_lattice(12)
    # closure: round up to the nearest element of the Moore family {1? no: 2, 4, 6, 12}
    fam = {"2", "4", "6", "12"}
    table = {}
    for x in L.elements:
        above = [c for c in fam if L.leq(x, c)]
        m = above[0]
        for c in above[1:]:
            m = L.meet(m, c)
        table[x] = m
    C = ClosureOperator(L, table)
    assert check_closure(C).passed
    for r in L.elements:
        assert check_closure(restrict_closure(C, r)).passed


# --- thin categories -----------------------------------------------------------

def test_thin_two_element():
    T = thin_from_semilattice(chain(2))
    assert len(T.arrows) == 3


@pytest.mark.parametrize("n", range(1, 8))
def test_thin_chain_arrow_count(n):
    expected = sum(1 for i in range(n) for j in range(n) if i <= j)
    assert len(thin_from_semilattice(chain(n)).arrows) == expected == n * (n + 1) // 2


def test_thin_powerset_arrow_count():
    subsets = [set(c) for k in range(3) for c in itertools.combinations("ab", k)]
    expected = sum(1 for x in subsets for y in subsets if x <= y)
    assert len(thin_from_semilattice(explicit_powerset("ab")).arrows) == expected == 9


def test_thin_structure():
    T = thin_from_semilattice(divisor_lattice(12))
    f, g = ("2", "4"), ("4", "12")
    assert T.compose(g, f) == ("2", "12")
    assert T.tensor(("4", "12"), ("6", "6")) == ("2", "6")
    assert T.unit == "12"
    assert all(T.is_mono(a) for a in T.arrows)
    with pytest.raises(DomainError):
        T.compose(f, g)


@pytest.mark.parametrize("L", [explicit_powerset("a"), chain(3), divisor_lattice(12), explicit_powerset("abc")],
                         ids=["powerset1", "chain3", "div12", "powerset3"])
def test_round_trip(L):
    assert subunits_of_thin(thin_from_semilattice(L)) == L


def test_json_loader_closes_order():
    doc = {"elements": ["0", "m", "1"], "leq": [["0", "m"], ["m", "1"]], "top": "1",
           "closure": {"0": "m", "m": "m", "1": "1"}}
    L, C = semilattice_from_json(doc)
    assert L.leq("0", "1")
    assert check_closure(C).passed


def test_set_id():
    assert set_id(frozenset("ba")) == "{a,b}"
    assert set_id(()) == "{}"


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.booleans())
def test_bitmask_restriction_check_agrees(seed, closure_like):
    rng = np.random.default_rng(seed)
    P = PowersetLattice("abcd")
    if closure_like:
        C = _moore_closure(P, {frozenset(x for x in "abcd" if rng.random() < 0.5) for _ in range(3)})
    else:
        # arbitrary maps, mostly not closures
        C = ClosureOperator(P, {S: frozenset(x for x in "abcd" if rng.random() < 0.5) for S in P.elements})
    fast = check_all_restrictions(C)
    for law in ("total", "inflationary", "idempotent", "monotone"):
        slow = all(check_closure(restrict_closure(C, r)).laws[law] for r in P.elements)
        assert fast.laws[law] == slow, law
    assert fast.cases == 3 ** 4


def test_bitmask_restriction_witness():
    P = PowersetLattice("ab")
    C = ClosureOperator(P, {S: frozenset() for S in P.elements})
    rep = check_all_restrictions(C)
    assert not rep.laws["inflationary"]
    assert rep.witness("inflationary") == ("{a}", "{a}")
    with pytest.raises(DomainError):
        check_all_restrictions(identity_closure(chain(2)))
