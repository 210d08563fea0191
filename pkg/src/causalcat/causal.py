"""Finite causal sites: chronological/causal futures and pasts, closures, complements."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Hashable, Iterable, Mapping

from .lattice import ClosureOperator, CausalStructurePair, DomainError, PowersetLattice
from .report import LawReport

Point = Hashable
Region = frozenset

COMPLEMENT_SEARCH_LIMIT = 12


class InvalidSite(DomainError):
    pass


@dataclass(frozen=True)
class CausalSite:
    """Points with a chronological relation ``chron`` and a causal relation ``causal``.

    Both relations are sets of ordered pairs ``(s, t)`` read as s << t and s < t.
    """

    points: tuple
    chron: frozenset = field(default_factory=frozenset)
    causal: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "chron", frozenset(map(tuple, self.chron)))
        object.__setattr__(self, "causal", frozenset(map(tuple, self.causal)))
        if len(set(self.points)) != len(self.points):
            raise InvalidSite("duplicate points")
        pts = set(self.points)
        for rel in (self.chron, self.causal):
            for s, t in rel:
                if s not in pts or t not in pts:
                    raise InvalidSite(f"relation mentions unknown point in {(s, t)!r}")

    @classmethod
    def from_chron(cls, points: Iterable[Point], chron: Iterable[tuple]) -> CausalSite:
        """Close ``chron`` transitively and take its reflexive closure as the causal relation."""
        points = tuple(points)
        closed = transitive_closure(chron)
        return cls(points, closed, closed | {(p, p) for p in points})

    @cached_property
    def _succ(self) -> dict:
        return _adjacency(self.points, self.chron, forward=True)

    @cached_property
    def _pred(self) -> dict:
        return _adjacency(self.points, self.chron, forward=False)

    @cached_property
    def _csucc(self) -> dict:
        return _adjacency(self.points, self.causal, forward=True)

    @cached_property
    def _cpred(self) -> dict:
        return _adjacency(self.points, self.causal, forward=False)

    def region(self, members: Iterable[Point]) -> Region:
        r = frozenset(members)
        extra = r - set(self.points)
        if extra:
            raise DomainError(f"points {sorted(map(str, extra))} not in site")
        return r

    def sorted_region(self, S: Iterable[Point]) -> list:
        S = set(S)
        return [p for p in self.points if p in S]

    @property
    def lattice(self) -> PowersetLattice:
        return _powerset(self)


def _adjacency(points, rel, forward):
    adj = {p: set() for p in points}
    for s, t in rel:
        if forward:
            adj[s].add(t)
        else:
            adj[t].add(s)
    return {p: frozenset(v) for p, v in adj.items()}


_POWERSETS: dict = {}


def _powerset(site: CausalSite) -> PowersetLattice:
    key = site.points
    if key not in _POWERSETS:
        if len(_POWERSETS) > 256:
            _POWERSETS.clear()
        _POWERSETS[key] = PowersetLattice(site.points)
    return _POWERSETS[key]


def transitive_closure(pairs: Iterable[tuple]) -> frozenset:
    succ: dict = {}
    for s, t in pairs:
        succ.setdefault(s, set()).add(t)
        succ.setdefault(t, set())
    out = set()
    for s in succ:
        stack, seen = list(succ[s]), set()
        while stack:
            u = stack.pop()
            if u in seen:
                continue
            seen.add(u)
            stack.extend(succ[u])
        out.update((s, u) for u in seen)
    return frozenset(out)


def validate_site(site: CausalSite, strict: bool = False) -> LawReport:
    rep = LawReport("causal-site")
    chron, causal, pts = site.chron, site.causal, site.points
    rep.cases = len(pts)
    loop = next((s for s, t in sorted(chron, key=repr) if s == t), None)
    rep.record("chron irreflexive", loop is None, loop)
    rep.record("chron transitive", *_transitivity_witness(chron, site._succ))
    refl = next((p for p in pts if (p, p) not in causal), None)
    rep.record("causal reflexive", refl is None, refl)
    rep.record("causal transitive", *_transitivity_witness(causal, site._csucc))
    stray = next((e for e in sorted(chron, key=repr) if e not in causal), None)
    rep.record("chron within causal", stray is None, stray)
    if strict:
        up = next(((s, t, u) for s, t in chron for u in site._csucc[t] if (s, u) not in chron), None)
        rep.record("push-up", up is None, up)
        down = next(((s, t, u) for s, t in causal for u in site._succ[t] if (s, u) not in chron), None)
        rep.record("push-down", down is None, down)
    return rep


def _transitivity_witness(rel, succ):
    for s, t in sorted(rel, key=repr):
        for u in succ[t]:
            if (s, u) not in rel:
                return False, (s, t, u)
    return True, None


def _image(adj: Mapping, S: Iterable[Point]) -> Region:
    out: set = set()
    for s in S:
        out |= adj[s]
    return frozenset(out)


def chron_future(site: CausalSite, S: Iterable[Point]) -> Region:
    return _image(site._succ, site.region(S))


def chron_past(site: CausalSite, S: Iterable[Point]) -> Region:
    return _image(site._pred, site.region(S))


def causal_future(site: CausalSite, S: Iterable[Point]) -> Region:
    return _image(site._csucc, site.region(S))


def causal_past(site: CausalSite, S: Iterable[Point]) -> Region:
    return _image(site._cpred, site.region(S))


def _require_valid(site: CausalSite) -> None:
    rep = validate_site(site)
    if not rep.passed:
        bad = next(law for law, ok in rep.laws.items() if not ok)
        raise InvalidSite(f"{bad} violated, witness {rep.witness(bad)!r}")


def future_closure(site: CausalSite) -> ClosureOperator:
    """S |-> S | I+(S) on the powerset of points."""
    _require_valid(site)
    return _closure(site, site._succ)


def past_closure(site: CausalSite) -> ClosureOperator:
    _require_valid(site)
    return _closure(site, site._pred)


def _closure(site, adj) -> ClosureOperator:
    L = site.lattice
    # C(S) is the union of C({s}); every proper subset precedes S in mask order
    single = {p: frozenset({p}) | adj[p] for p in site.points}
    table = {frozenset(): frozenset()}
    for S in L.elements:
        if S:
            p = next(iter(S))
            table[S] = single[p] | table[S - {p}]
    return ClosureOperator(L, table)


def causal_structure(site: CausalSite) -> CausalStructurePair:
    return CausalStructurePair(future_closure(site), past_closure(site))


@dataclass(frozen=True)
class Complement:
    given: Region
    complement: Region
    direction: str
    closed: bool
    disjoint: bool
    covers: bool
    unique: bool | None  # None when the site is too large to search

    @property
    def ok(self) -> bool:
        return self.closed and self.disjoint and self.covers and self.unique is not False


def complement(site: CausalSite, F: Iterable[Point], direction: str = "future") -> Complement:
    """Complement of a future set (``direction="future"``) or of a past set."""
    if direction not in ("future", "past"):
        raise ValueError(f"direction must be 'future' or 'past', not {direction!r}")
    F = site.region(F)
    own, other = ((site._succ, site._pred) if direction == "future" else (site._pred, site._succ))
    if not _image(own, F) <= F:
        raise DomainError(f"region is not {direction}-closed")
    X = frozenset(site.points)
    P = X - F
    closed = _image(other, P) <= P
    unique = None
    if len(site.points) <= COMPLEMENT_SEARCH_LIMIT:
        found = [Q for Q in _closed_sets(site, other) if not (Q & F) and (Q | F) == X]
        unique = found == [P]
    return Complement(F, P, direction, closed, not (F & P), (F | P) == X, unique)


def _closed_sets(site: CausalSite, adj) -> list[Region]:
    return [S for S in site.lattice.elements if _image(adj, S) <= S]


def future_sets(site: CausalSite) -> list[Region]:
    return _closed_sets(site, site._succ)


def past_sets(site: CausalSite) -> list[Region]:
    return _closed_sets(site, site._pred)


# --- generators and examples ------------------------------------------------

def random_site(rng, n: int, edge_prob: float = 0.4) -> CausalSite:
    """Random DAG on ``x0 < x1 < ...``, closed transitively."""
    pts = [f"x{i}" for i in range(n)]
    edges = [(pts[i], pts[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < edge_prob]
    return CausalSite.from_chron(pts, edges)


def naturally_labelled_sites(n: int) -> list[CausalSite]:
    """Every causal site on n points up to isomorphism (with repeats across labellings).

    Each finite strict order has a linear extension, so every one is
    isomorphic to a transitive closure of forward edges on 0 < 1 < ... < n-1.
    """
    pts = [f"x{i}" for i in range(n)]
    forward = list(combinations(range(n), 2))
    seen: set = set()
    out = []
    for mask in range(1 << len(forward)):
        edges = [(pts[i], pts[j]) for k, (i, j) in enumerate(forward) if mask >> k & 1]
        closed = transitive_closure(edges)
        if closed in seen:
            continue
        seen.add(closed)
        out.append(CausalSite(pts, closed, closed | {(p, p) for p in pts}))
    return out


def diamond() -> CausalSite:
    return CausalSite.from_chron("pabq", [("p", "a"), ("p", "b"), ("a", "q"), ("b", "q")])


def chain_site(names: Iterable[str] = ("x", "y", "z")) -> CausalSite:
    names = list(names)
    return CausalSite.from_chron(names, zip(names, names[1:]))


def site_from_json(doc: Mapping) -> CausalSite:
    points = [str(p) for p in doc["points"]]
    chron = [(str(s), str(t)) for s, t in doc.get("chron", [])]
    causal = doc.get("causal", "auto")
    if causal == "auto":
        return CausalSite(points, chron, set(chron) | {(p, p) for p in points})
    return CausalSite(points, chron, [(str(s), str(t)) for s, t in causal])


def site_to_json(site: CausalSite) -> dict:
    return {
        "points": list(site.points),
        "chron": sorted(map(list, site.chron)),
        "causal": sorted(map(list, site.causal)),
    }
