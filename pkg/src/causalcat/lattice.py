"""Finite meet-semilattices, closure operators and the thin monoidal category.

Elements are opaque hashable ids (strings when read from JSON, frozensets
for powerset lattices).  An explicit semilattice stores its order as a set
of pairs; meets are found by scanning common lower bounds.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Hashable, Iterable, Iterator, Mapping

import numpy as np

from .report import LawReport

Element = Hashable


class DomainError(ValueError):
    """An element, object or morphism outside the domain of an operation."""


class MeetSemilattice:
    """Interface shared by explicit and powerset semilattices."""

    elements: tuple
    top: Element

    def leq(self, x: Element, y: Element) -> bool:
        raise NotImplementedError

    def meet(self, x: Element, y: Element) -> Element:
        raise NotImplementedError

    def generating_pairs(self) -> Iterator[tuple[Element, Element]]:
        """Strict pairs x < y whose reflexive-transitive closure is the order."""
        raise NotImplementedError

    def down_set(self, r: Element) -> MeetSemilattice:
        raise NotImplementedError

    def __contains__(self, x: Element) -> bool:
        return x in self._element_set

    @cached_property
    def _element_set(self) -> frozenset:
        return frozenset(self.elements)

    def le(self, x: Element, y: Element) -> bool:
        """``leq`` without the membership check, for callers that validated already."""
        return self.leq(x, y)

    def _require(self, *xs: Element) -> None:
        for x in xs:
            if x not in self:
                raise DomainError(f"unknown element {x!r}")

    def __len__(self) -> int:
        return len(self.elements)


class FiniteSemilattice(MeetSemilattice):
    def __init__(self, elements: Iterable[Element], leq: Iterable[tuple[Element, Element]],
                 top: Element, check: bool = True):
        self.elements = tuple(elements)
        self.leq_pairs = frozenset((x, y) for x, y in leq)
        self.top = top
        if check:
            report = check_semilattice(self)
            if not report.passed:
                bad = next(law for law, ok in report.laws.items() if not ok)
                raise DomainError(f"not a meet-semilattice: {bad} fails at {report.witness(bad)!r}")

    def __repr__(self) -> str:
        return f"FiniteSemilattice({len(self.elements)} elements, top={self.top!r})"

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, FiniteSemilattice) and self._element_set == other._element_set
                and self.leq_pairs == other.leq_pairs and self.top == other.top)

    def __hash__(self) -> int:
        return hash((self._element_set, self.leq_pairs, self.top))

    @cached_property
    def _down(self) -> dict[Element, frozenset]:
        down: dict[Element, set] = {x: set() for x in self.elements}
        for x, y in self.leq_pairs:
            if y in down:
                down[y].add(x)
        return {x: frozenset(d) for x, d in down.items()}

    def leq(self, x: Element, y: Element) -> bool:
        self._require(x, y)
        return (x, y) in self.leq_pairs

    def lower_bounds(self, x: Element) -> frozenset:
        self._require(x)
        return self._down[x]

    def meet(self, x: Element, y: Element) -> Element:
        self._require(x, y)
        common = self._down[x] & self._down[y]
        glbs = [z for z in common if common <= self._down[z]]
        if len(glbs) != 1:
            raise DomainError(f"{x!r} and {y!r} have no unique greatest lower bound")
        return glbs[0]

    def generating_pairs(self) -> Iterator[tuple[Element, Element]]:
        return ((x, y) for x, y in sorted(self.leq_pairs, key=repr) if x != y)

    def down_set(self, r: Element) -> FiniteSemilattice:
        below = self.lower_bounds(r)
        elems = [x for x in self.elements if x in below]
        pairs = [(x, y) for x, y in self.leq_pairs if x in below and y in below]
        return FiniteSemilattice(elems, pairs, r, check=False)


class PowersetLattice(MeetSemilattice):
    """Subsets of a finite set of atoms ordered by inclusion."""

    def __init__(self, atoms: Iterable[Element]):
        self.atoms = tuple(atoms)
        if len(set(self.atoms)) != len(self.atoms):
            raise DomainError("duplicate atoms")
        self.top = frozenset(self.atoms)

    def __repr__(self) -> str:
        return f"PowersetLattice({list(self.atoms)!r})"

    @cached_property
    def elements(self) -> tuple:
        n = len(self.atoms)
        return tuple(frozenset(a for i, a in enumerate(self.atoms) if mask >> i & 1)
                     for mask in range(1 << n))

    def __contains__(self, x: Element) -> bool:
        return isinstance(x, frozenset) and x <= self.top

    def leq(self, x, y) -> bool:
        self._require(x, y)
        return x <= y

    def le(self, x, y) -> bool:
        return x <= y

    def meet(self, x, y):
        self._require(x, y)
        return x & y

    def generating_pairs(self):
        for s in self.elements:
            for a in self.atoms:
                if a not in s:
                    yield s, s | {a}

    def down_set(self, r) -> PowersetLattice:
        self._require(r)
        return PowersetLattice(a for a in self.atoms if a in r)


def check_semilattice(L: MeetSemilattice) -> LawReport:
    """Exhaustively check the partial-order and meet axioms of an explicit order."""
    rep = LawReport("semilattice")
    elems = list(L.elements)
    pairs = L.leq_pairs if isinstance(L, FiniteSemilattice) else None
    if pairs is not None:
        stray = next(((x, y) for x, y in pairs if x not in L or y not in L), None)
        rep.record("relation on elements", stray is None, stray)
        rep.record("top is an element", L.top in L, L.top)
        if stray is not None or L.top not in L:
            return rep
        up: dict = {x: set() for x in elems}
        for x, y in pairs:
            up[x].add(y)
        refl = next((x for x in elems if (x, x) not in pairs), None)
        rep.record("reflexive", refl is None, refl)
        anti = next(((x, y) for x, y in pairs if x != y and (y, x) in pairs), None)
        rep.record("antisymmetric", anti is None, anti)
        trans = next(((x, y, z) for x, y in pairs for z in up[y] if (x, z) not in pairs), None)
        rep.record("transitive", trans is None, trans)
        if refl is not None or anti is not None or trans is not None:
            return rep
    not_top = next((x for x in elems if not L.leq(x, L.top)), None)
    rep.record("top is greatest", not_top is None, not_top)
    for x, y in itertools.combinations_with_replacement(elems, 2):
        rep.cases += 1
        try:
            L.meet(x, y)
        except DomainError:
            rep.record("meets exist", False, (x, y))
        else:
            rep.record("meets exist", True)
    return rep


def meet_laws(L: MeetSemilattice, elems: Iterable[Element] | None = None) -> LawReport:
    """Commutativity, associativity, idempotence and unitality of meet."""
    rep = LawReport("meet laws")
    elems = list(L.elements if elems is None else elems)
    for x in elems:
        rep.record("idempotent", L.meet(x, x) == x, x)
        rep.record("unital", L.meet(x, L.top) == x == L.meet(L.top, x), x)
        for y in elems:
            m = L.meet(x, y)
            rep.record("commutative", m == L.meet(y, x), (x, y))
            rep.record("lower bound", L.leq(m, x) and L.leq(m, y), (x, y))
            for z in elems:
                rep.cases += 1
                rep.record("associative", L.meet(m, z) == L.meet(x, L.meet(y, z)), (x, y, z))
    return rep


@dataclass(frozen=True)
class ClosureOperator:
    carrier: MeetSemilattice
    map: Mapping[Element, Element] = field(hash=False)

    def __call__(self, x: Element) -> Element:
        try:
            return self.map[x]
        except KeyError:
            raise DomainError(f"closure undefined at {x!r}") from None

    def closed_elements(self) -> list:
        return [x for x in self.carrier.elements if self.map.get(x) == x]


@dataclass(frozen=True)
class CausalStructurePair:
    future: ClosureOperator
    past: ClosureOperator

    def __post_init__(self):
        if self.future.carrier is not self.past.carrier and \
                set(self.future.carrier.elements) != set(self.past.carrier.elements):
            raise DomainError("future and past closures live on different carriers")


def check_closure(C: ClosureOperator) -> LawReport:
    """Report each closure axiom as holding or with a counterexample."""
    rep = LawReport("closure")
    L = C.carrier
    missing = next((x for x in L.elements if x not in C.map or C.map[x] not in L), None)
    rep.record("total", missing is None, missing)
    if missing is not None:
        return rep
    rep.laws.update({"monotone": True, "inflationary": True, "idempotent": True})
    for x in L.elements:
        rep.cases += 1
        cx = C.map[x]
        rep.record("inflationary", L.le(x, cx), x)
        rep.record("idempotent", C.map[cx] == cx, x)
    # monotonicity along generating pairs implies it on the whole order
    for x, y in L.generating_pairs():
        rep.record("monotone", L.le(C.map[x], C.map[y]), (x, y))
    return rep


def check_causal_structure(pair: CausalStructurePair) -> LawReport:
    rep = LawReport("causal structure")
    for name, c in (("future", pair.future), ("past", pair.past)):
        sub = check_closure(c)
        rep.cases += sub.cases
        for law, ok in sub.laws.items():
            rep.record(f"{name} {law}", ok, sub.witness(law))
    return rep


def restrict_closure(C: ClosureOperator, r: Element) -> ClosureOperator:
    """The closure s |-> C(s) meet r on the down-set of r."""
    L = C.carrier
    L._require(r)
    down = L.down_set(r)
    return ClosureOperator(down, {s: L.meet(C(s), r) for s in down.elements})


@lru_cache(maxsize=None)
def _nested_pairs(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Bitmasks (s, r) of every pair s <= r of subsets of n atoms, 3^n in all.

    Digit i of a base-3 code says atom i is outside r, in r only, or in both.
    """
    codes = np.arange(3 ** n, dtype=np.int64)
    s = np.zeros_like(codes)
    r = np.zeros_like(codes)
    for i in range(n):
        d = codes // 3 ** i % 3
        s |= (d == 2).astype(np.int64) << i
        r |= (d >= 1).astype(np.int64) << i
    s.flags.writeable = r.flags.writeable = False
    return s, r


def check_all_restrictions(C: ClosureOperator) -> LawReport:
    """Closure laws of s |-> C(s) & r for every r at once, on a powerset carrier.

    Subsets become bitmasks and the laws are evaluated with numpy over all
    3^n pairs s <= r of an n-atom carrier.
    """
    L = C.carrier
    if not isinstance(L, PowersetLattice):
        raise DomainError("bitmask restriction check needs a powerset carrier")
    n = len(L.atoms)
    bit = {a: 1 << i for i, a in enumerate(L.atoms)}
    tab = np.array([sum(bit[a] for a in C(S)) for S in L.elements], dtype=np.int64)
    s, r = _nested_pairs(n)
    D = tab[s] & r
    rep = LawReport("restricted closures", cases=len(s))

    def record(law: str, bad: np.ndarray) -> None:
        w = None
        if bad.any():
            k = int(np.argmax(bad))
            w = (set_id(L.elements[s[k]]), set_id(L.elements[r[k]]))
        rep.record(law, w is None, w)

    record("total", (D & ~r) != 0)
    record("inflationary", (D & s) != s)
    record("idempotent", (tab[D] & r) != D)
    mono_bad = np.zeros(len(s), dtype=bool)
    for b in range(n):
        t = s | (1 << b)
        mono_bad |= (r >> b & 1).astype(bool) & (t != s) & ((D & ~(tab[t] & r)) != 0)
    record("monotone", mono_bad)
    return rep


def identity_closure(L: MeetSemilattice) -> ClosureOperator:
    return ClosureOperator(L, {x: x for x in L.elements})


def top_closure(L: MeetSemilattice) -> ClosureOperator:
    return ClosureOperator(L, {x: L.top for x in L.elements})


# --- the thin symmetric monoidal category of a semilattice ---------------

@dataclass(frozen=True)
class ThinCategory:
    """Objects are lattice elements, one arrow x -> y iff x <= y, tensor is meet."""

    lattice: MeetSemilattice

    @property
    def objects(self) -> tuple:
        return self.lattice.elements

    @property
    def unit(self) -> Element:
        return self.lattice.top

    @cached_property
    def arrows(self) -> tuple[tuple[Element, Element], ...]:
        L = self.lattice
        return tuple((x, y) for x in L.elements for y in L.elements if L.leq(x, y))

    def hom(self, x: Element, y: Element) -> list[tuple[Element, Element]]:
        return [(x, y)] if self.lattice.leq(x, y) else []

    def identity(self, x: Element) -> tuple[Element, Element]:
        return (x, x)

    def compose(self, g: tuple, f: tuple) -> tuple:
        if f[1] != g[0]:
            raise DomainError(f"cannot compose {g!r} after {f!r}")
        return (f[0], g[1])

    def tensor(self, f: tuple, g: tuple) -> tuple:
        m = self.lattice.meet
        return (m(f[0], g[0]), m(f[1], g[1]))

    def is_mono(self, f: tuple) -> bool:
        # thin: parallel arrows are equal
        return f in self._arrow_set

    def is_iso(self, f: tuple) -> bool:
        return f in self._arrow_set and (f[1], f[0]) in self._arrow_set

    @cached_property
    def _arrow_set(self) -> frozenset:
        return frozenset(self.arrows)


def thin_from_semilattice(L: MeetSemilattice) -> ThinCategory:
    return ThinCategory(L)


def subunits_of_thin(T: ThinCategory) -> FiniteSemilattice:
    """Read the idempotent subunits back off a thin category."""
    I = T.unit
    subunits = []
    for x in T.objects:
        monos = [f for f in T.hom(x, I) if T.is_mono(f)]
        if not monos:
            continue
        s = monos[0]
        # s (x) id_x : x (x) x -> I (x) x must be invertible
        if T.is_iso(T.tensor(s, T.identity(x))):
            subunits.append(x)
    # s <= t iff s factors through t
    leq = [(x, y) for x in subunits for y in subunits if T.hom(x, y)]
    return FiniteSemilattice(subunits, leq, I)


# --- constructors ----------------------------------------------------------

def chain(n: int) -> FiniteSemilattice:
    ids = [str(i) for i in range(n)]
    return FiniteSemilattice(ids, [(ids[i], ids[j]) for i in range(n) for j in range(i, n)], ids[-1])


def divisor_lattice(n: int) -> FiniteSemilattice:
    divs = [d for d in range(1, n + 1) if n % d == 0]
    return FiniteSemilattice([str(d) for d in divs],
                             [(str(a), str(b)) for a in divs for b in divs if b % a == 0], str(n))


def explicit_powerset(atoms: Iterable[str]) -> FiniteSemilattice:
    """Powerset with string ids like ``{a,b}``, stored explicitly."""
    P = PowersetLattice(atoms)
    name = {s: set_id(s) for s in P.elements}
    return FiniteSemilattice([name[s] for s in P.elements],
                             [(name[s], name[t]) for s in P.elements for t in P.elements if s <= t],
                             name[P.top])


def set_id(s: Iterable) -> str:
    return "{" + ",".join(sorted(map(str, s))) + "}"


def random_semilattice(rng, n_atoms: int = 5, n_generators: int = 6) -> FiniteSemilattice:
    """Intersection-closed family of random subsets plus the full set."""
    full = frozenset(range(n_atoms))
    family = {full}
    for _ in range(n_generators):
        family.add(frozenset(int(a) for a in range(n_atoms) if rng.random() < 0.5))
    changed = True
    while changed:
        new = {a & b for a in family for b in family} - family
        changed = bool(new)
        family |= new
    elems = sorted(family, key=lambda s: (len(s), sorted(s)))
    name = {s: set_id(s) for s in elems}
    return FiniteSemilattice([name[s] for s in elems],
                             [(name[a], name[b]) for a in elems for b in elems if a <= b], name[full])


def semilattice_from_json(doc: Mapping) -> tuple[FiniteSemilattice, ClosureOperator | None]:
    """Read ``{"elements", "leq", "top", "closure"?}``; leq is closed reflexively."""
    elements = [str(x) for x in doc["elements"]]
    leq = {(str(x), str(y)) for x, y in doc["leq"]} | {(x, x) for x in elements}
    L = FiniteSemilattice(elements, _transitive_closure(leq), str(doc["top"]))
    closure = doc.get("closure")
    C = ClosureOperator(L, {str(k): str(v) for k, v in closure.items()}) if closure is not None else None
    return L, C


def _transitive_closure(pairs: set) -> set:
    succ: dict = {}
    for a, b in pairs:
        succ.setdefault(a, set()).add(b)
    out = set()
    for a, direct in succ.items():
        seen, stack = set(), list(direct)
        while stack:
            b = stack.pop()
            if b not in seen:
                seen.add(b)
                stack.extend(succ.get(b, ()))
        out.update((a, b) for b in seen)
    return out


def all_semilattices(n: int) -> list[FiniteSemilattice]:
    """Every meet-semilattice on n elements, up to isomorphism, possibly repeated.

    Orders are generated as transitive closures of forward edges on
    0 < 1 < ... < n-1 (every finite order has a linear extension); those
    with a greatest element and all binary meets are kept.
    """
    if n == 0:
        return []
    ids = [str(i) for i in range(n)]
    forward = [(i, j) for i in range(n) for j in range(i + 1, n)]
    seen, out = set(), []
    for mask in range(1 << len(forward)):
        edges = {(ids[i], ids[j]) for k, (i, j) in enumerate(forward) if mask >> k & 1}
        closed = frozenset(_transitive_closure(edges) | {(x, x) for x in ids})
        if closed in seen:
            continue
        seen.add(closed)
        tops = [y for y in ids if all((x, y) in closed for x in ids)]
        if not tops:
            continue
        L = FiniteSemilattice(ids, closed, tops[0], check=False)
        if check_semilattice(L).passed:
            out.append(L)
    return out
