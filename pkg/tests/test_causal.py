import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from causalcat.causal import (
    CausalSite, InvalidSite, causal_future, causal_past, chain_site, chron_future, chron_past,
    complement, diamond, future_closure, future_sets, naturally_labelled_sites, past_closure,
    past_sets, random_site, site_from_json, site_to_json, validate_site,
)
from causalcat.lattice import DomainError, check_closure

F = frozenset


def scan_future(site, S, rel):
    """Oracle: direct scan of the relation."""
    return F(t for s, t in rel if s in S)


def test_diamond_valid():
    D = diamond()
    # the chronological relation is the transitive closure of the four edges
    assert D.chron == {("p", "a"), ("p", "b"), ("a", "q"), ("b", "q"), ("p", "q")}
    assert validate_site(D).passed
    assert validate_site(D, strict=True).passed


def test_empty_site_valid():
    assert validate_site(CausalSite(()), strict=True).passed


def test_self_loop_fails_irreflexivity():
    site = CausalSite("xy", {("x", "x")}, {("x", "x"), ("y", "y")})
    rep = validate_site(site)
    assert not rep.laws["chron irreflexive"]
    assert rep.witness("chron irreflexive") == "x"


def test_other_axioms_reported():
    site = CausalSite("xyz", {("x", "y"), ("y", "z")}, {("x", "y"), ("y", "z")})
    rep = validate_site(site)
    assert not rep.laws["chron transitive"] and rep.witness("chron transitive") == ("x", "y", "z")
    assert not rep.laws["causal reflexive"]


def test_strict_push_up():
    # causal has x < y with no chronological link; y << z but not x << z
    site = CausalSite("xyz", {("y", "z")}, {("x", "y"), ("y", "z"), ("x", "z"),
                                             ("x", "x"), ("y", "y"), ("z", "z")})
    assert validate_site(site).passed
    rep = validate_site(site, strict=True)
    assert not rep.laws["push-down"]


def test_unknown_point_rejected():
    with pytest.raises(InvalidSite):
        CausalSite("x", {("x", "y")}, set())
    with pytest.raises(DomainError):
        chron_future(diamond(), {"zz"})


def test_futures_and_pasts_on_diamond():
    D = diamond()
    assert chron_future(D, {"a"}) == scan_future(D, {"a"}, D.chron) == F("q")
    assert chron_future(D, set()) == F()
    assert causal_future(D, {"a"}) == scan_future(D, {"a"}, D.causal) == F("aq")
    assert chron_past(D, {"q"}) == F("pab")
    assert causal_past(D, {"a"}) == F("pa")


def test_future_closure_on_diamond():
    D = diamond()
    C = future_closure(D)
    assert C(F("a")) == F("a") | chron_future(D, F("a")) == F("aq")
    assert C(F(D.points)) == F(D.points)
    assert C(F("p")) == F("pabq")
    assert check_closure(C).passed
    assert check_closure(past_closure(D)).passed


def test_closure_rejects_invalid_site():
    bad = CausalSite("x", {("x", "x")}, {("x", "x")})
    with pytest.raises(InvalidSite, match="irreflexive"):
        future_closure(bad)


def test_minimal_points_not_in_own_future():
    # a finite site has <<-minimal points, so S is not inside I+(S) in general
    D = diamond()
    assert not F("p") <= chron_future(D, F("p"))
    C = future_closure(D)
    assert F("p") <= C(F("p"))


def brute_force_complements(site, Fset, direction):
    """All closed sets of the other direction disjoint from F and covering X."""
    X = F(site.points)
    rel = site.chron if direction == "future" else {(t, s) for s, t in site.chron}
    out = []
    for k in range(len(X) + 1):
        for P in map(F, itertools.combinations(site.points, k)):
            past_closed = all(s in P for s, t in rel if t in P)
            if past_closed and not (P & Fset) and (P | Fset) == X:
                out.append(P)
    return out


def test_complement_on_chain():
    site = chain_site("xyz")
    c = complement(site, {"y", "z"})
    assert c.complement == F("x")
    assert brute_force_complements(site, F("yz"), "future") == [F("x")]
    assert c.ok and c.unique


def test_complement_of_everything_is_empty():
    D = diamond()
    assert complement(D, D.points).complement == F()


def test_complement_on_diamond():
    D = diamond()
    c = complement(D, {"q"})
    assert c.complement == F("pab")
    assert brute_force_complements(D, F("q"), "future") == [F("pab")]
    assert c.unique
    # and in the past direction
    c = complement(D, {"p"}, "past")
    assert c.complement == F("abq") and c.ok


def test_complement_requires_closed_region():
    with pytest.raises(DomainError, match="future-closed"):
        complement(diamond(), {"a"})


@pytest.mark.parametrize("n", range(0, 5))
def test_complements_exhaustive(n):
    for site in naturally_labelled_sites(n):
        for Fs in future_sets(site):
            c = complement(site, Fs)
            assert c.ok and c.unique
            assert brute_force_complements(site, Fs, "future") == [c.complement]
        for Ps in past_sets(site):
            assert complement(site, Ps, "past").ok


def test_naturally_labelled_sites_small_counts():
    # strict orders on 3 labelled-up-to-linear-extension points: distinct relations found
    assert len(naturally_labelled_sites(0)) == 1
    assert len(naturally_labelled_sites(1)) == 1
    assert len(naturally_labelled_sites(2)) == 2
    assert all(validate_site(s, strict=True).passed for s in naturally_labelled_sites(4))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 8))
def test_random_site_laws(seed, n):
    rng = np.random.default_rng(seed)
    site = random_site(rng, n)
    assert validate_site(site, strict=True).passed
    C, P = future_closure(site), past_closure(site)
    assert check_closure(C).passed and check_closure(P).passed
    for S in C.carrier.elements[:: max(1, len(C.carrier.elements) // 16)]:
        assert chron_future(site, S) <= causal_future(site, S)
        assert chron_past(site, S) <= causal_past(site, S)
        assert C(C(S)) == C(S)
        assert chron_future(site, chron_future(site, S)) <= chron_future(site, S)


def test_site_json_round_trip():
    D = diamond()
    assert site_from_json(site_to_json(D)) == D
    auto = site_from_json({"points": ["a", "b"], "chron": [["a", "b"]], "causal": "auto"})
    assert auto.causal == {("a", "b"), ("a", "a"), ("b", "b")}
