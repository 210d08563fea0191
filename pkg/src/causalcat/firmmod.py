"""Firm modules over a ring of finitely many rational components, in exact arithmetic.

The ring R is a family of copies of Q indexed by components, multiplied
componentwise.  A module is a rational vector space per component and a
linear map is a rational matrix per component, so all tensor products and
linear maps split over components.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .lattice import DomainError
from .report import LawReport

MAX_COMPONENTS = 5


@dataclass(frozen=True)
class QMatrix:
    nrows: int
    ncols: int
    rows: tuple

    @classmethod
    def of(cls, rows: Sequence[Sequence], ncols: int | None = None) -> QMatrix:
        rows = tuple(tuple(Fraction(x) for x in r) for r in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise DomainError("ragged matrix")
        return cls(len(rows), ncols, rows)

    @classmethod
    def identity(cls, n: int) -> QMatrix:
        return cls.of([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, n: int, k: int) -> QMatrix:
        return cls.of([[0] * k for _ in range(n)], k)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __matmul__(self, other: QMatrix) -> QMatrix:
        if self.ncols != other.nrows:
            raise DomainError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = list(zip(*other.rows)) if other.nrows else [()] * other.ncols
        return QMatrix(self.nrows, other.ncols,
                       tuple(tuple(sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols)
                             for r in self.rows))

    def kron(self, other: QMatrix) -> QMatrix:
        return QMatrix(self.nrows * other.nrows, self.ncols * other.ncols,
                       tuple(tuple(a * b for a in r for b in s) for r in self.rows for s in other.rows))

    def rank(self) -> int:
        m = [list(r) for r in self.rows]
        rank, col = 0, 0
        while rank < self.nrows and col < self.ncols:
            pivot = next((i for i in range(rank, self.nrows) if m[i][col] != 0), None)
            if pivot is None:
                col += 1
                continue
            m[rank], m[pivot] = m[pivot], m[rank]
            for i in range(rank + 1, self.nrows):
                if m[i][col]:
                    c = m[i][col] / m[rank][col]
                    m[i] = [x - c * y for x, y in zip(m[i], m[rank])]
            rank += 1
            col += 1
        return rank


@dataclass(frozen=True)
class ComponentRing:
    """Finitely supported rational families over ``components``."""

    components: tuple

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(sorted(self.components)))

    @classmethod
    def of_size(cls, n: int) -> ComponentRing:
        return cls(tuple(range(n)))

    def __len__(self) -> int:
        return len(self.components)

    def element(self, values: dict) -> tuple:
        return tuple(Fraction(values.get(i, 0)) for i in self.components)

    def basis(self) -> list[tuple]:
        return [self.element({i: 1}) for i in self.components]

    def mul(self, x: Sequence, y: Sequence) -> tuple:
        return tuple(a * b for a, b in zip(x, y))

    def is_firm(self) -> bool:
        # R (x)_R R -> R is [1] on each component Q (x)_Q Q -> Q
        return all(QMatrix.of([[1]]).rank() == 1 for _ in self.components)

    def is_nondegenerate(self) -> bool:
        return all(any(any(self.mul(x, r)) for r in self.basis()) for x in self.basis())

    @property
    def unit_module(self) -> FModObject:
        return FModObject(self, (1,) * len(self))


@dataclass(frozen=True)
class FModObject:
    ring: ComponentRing
    dims: tuple

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if len(self.dims) != len(self.ring) or any(d < 0 for d in self.dims):
            raise DomainError(f"bad dims {self.dims} for {len(self.ring)} components")

    def dim(self, i: int) -> int:
        return self.dims[self.ring.components.index(i)]

    def is_firm(self) -> bool:
        """E (x)_R R -> E, x (x) r |-> xr, is bijective componentwise."""
        return all(QMatrix.identity(d).kron(QMatrix.of([[1]])).rank() == d for d in self.dims)

    def is_nondegenerate(self) -> bool:
        # a vector killed by every basis idempotent of R is zero on every component
        return all(d == 0 or any(self.ring.mul(e, e)) for d, e in zip(self.dims, self.ring.basis()))


@dataclass(frozen=True)
class FModMorphism:
    dom: FModObject
    cod: FModObject
    mats: tuple

    def __post_init__(self):
        if self.dom.ring != self.cod.ring:
            raise DomainError("morphism between modules over different rings")
        mats = tuple(self.mats)
        if len(mats) != len(self.dom.dims):
            raise DomainError("one matrix per component required")
        for m, k, n in zip(mats, self.dom.dims, self.cod.dims):
            if m.shape != (n, k):
                raise DomainError(f"component matrix {m.shape} should be {(n, k)}")
        object.__setattr__(self, "mats", mats)

    def is_injective(self) -> bool:
        return all(m.rank() == m.ncols for m in self.mats)

    def is_iso(self) -> bool:
        return self.dom.dims == self.cod.dims and self.is_injective()


def fmod_identity(E: FModObject) -> FModMorphism:
    return FModMorphism(E, E, tuple(QMatrix.identity(d) for d in E.dims))


def fmod_compose(g: FModMorphism, f: FModMorphism) -> FModMorphism:
    if f.cod != g.dom:
        raise DomainError("cannot compose")
    return FModMorphism(f.dom, g.cod, tuple(b @ a for a, b in zip(f.mats, g.mats)))


def fmod_tensor_ob(E: FModObject, F: FModObject) -> FModObject:
    if E.ring != F.ring:
        raise DomainError("tensor over different rings")
    return FModObject(E.ring, tuple(a * b for a, b in zip(E.dims, F.dims)))


def fmod_tensor(f: FModMorphism, g: FModMorphism) -> FModMorphism:
    return FModMorphism(fmod_tensor_ob(f.dom, g.dom), fmod_tensor_ob(f.cod, g.cod),
                        tuple(a.kron(b) for a, b in zip(f.mats, g.mats)))


# --- idempotent ideals ---------------------------------------------------------

@dataclass(frozen=True)
class IdempotentIdeal:
    ring: ComponentRing
    support: frozenset

    def __post_init__(self):
        object.__setattr__(self, "support", frozenset(self.support))
        if not self.support <= set(self.ring.components):
            raise DomainError("ideal supported outside the ring")

    @property
    def module(self) -> FModObject:
        return FModObject(self.ring, tuple(int(i in self.support) for i in self.ring.components))

    @property
    def inclusion(self) -> FModMorphism:
        return FModMorphism(self.module, self.ring.unit_module,
                            tuple(QMatrix.of([[1]]) if i in self.support else QMatrix.zeros(1, 0)
                                  for i in self.ring.components))

    @property
    def as_ring(self) -> ComponentRing:
        return ComponentRing(tuple(sorted(self.support)))

    def basis(self) -> list[tuple]:
        return [self.ring.element({i: 1}) for i in sorted(self.support)]

    def is_idempotent(self) -> bool:
        """S^2 = S: products of elements of S span S and stay inside it."""
        basis = self.basis()
        prods = [self.ring.mul(x, y) for x in basis for y in basis]
        inside = all(v == 0 or i in self.support for p in prods for i, v in zip(self.ring.components, p))
        span = QMatrix.of(prods, len(self.ring)).rank() if prods else 0
        return inside and span == len(self.support)

    def unit(self) -> tuple:
        return self.ring.element({i: 1 for i in self.support})

    def is_unital(self) -> bool:
        one = self.unit()
        return all(self.ring.mul(one, x) == x for x in self.basis())

    def is_firm(self) -> bool:
        return self.module.is_firm()

    def is_nondegenerate(self) -> bool:
        return all(any(any(self.ring.mul(x, r)) for r in self.ring.basis()) for x in self.basis())

    def is_subunit(self) -> bool:
        """Inclusion monic and s (x) id_S invertible."""
        s = self.inclusion
        return s.is_injective() and fmod_tensor(s, fmod_identity(self.module)).is_iso()


def _component_candidates(max_dim: int = 2, entries: Iterable[int] = (0, 1, 2)):
    """Every (dim m, 1 x m matrix) into one component Q with small entries."""
    entries = list(entries)
    for m in range(max_dim + 1):
        for row in product(entries, repeat=m):
            yield m, QMatrix.of([list(row)], m)


def enumerate_subunits(n: int) -> list[IdempotentIdeal]:
    """All idempotent subunits of FMod_R up to subobject equivalence, by brute force.

    Candidates are component-family modules with per-component dimension at
    most 2.  Monicity and invertibility of s (x) id_S split over components,
    so each component is searched independently and the images combined.
    """
    if not 0 <= n <= MAX_COMPONENTS:
        raise DomainError(f"exhaustive search supports at most {MAX_COMPONENTS} components")
    images_per_component = set()
    for m, s in _component_candidates():
        monic = s.rank() == m
        idem = m * m == m and s.kron(QMatrix.identity(m)).rank() == m * m
        if monic and idem:
            images_per_component.add(s.rank() == 1)
    ring = ComponentRing.of_size(n)
    ideals = set()
    for choice in product(sorted(images_per_component), repeat=n):
        ideals.add(frozenset(i for i, on in enumerate(choice) if on))
    return [IdempotentIdeal(ring, S) for S in sorted(ideals, key=lambda S: (len(S), sorted(S)))]


# --- restriction and the equivalence FMod_R|S ~ FMod_S -------------------------

def restrict_to_ideal(E: FModObject, S: IdempotentIdeal) -> FModObject:
    """E (x)_R S: components off S vanish."""
    return fmod_tensor_ob(E, S.module)


def restrict_morphism_to_ideal(f: FModMorphism, S: IdempotentIdeal) -> FModMorphism:
    return fmod_tensor(f, fmod_identity(S.module))


def is_local(E: FModObject, S: IdempotentIdeal) -> bool:
    return fmod_tensor(fmod_identity(E), S.inclusion).is_iso()


def to_ideal_module(E: FModObject, S: IdempotentIdeal) -> FModObject:
    """View a module local to S as a module over the ring S, x . s := xs."""
    if not is_local(E, S):
        raise DomainError("module is not local to the ideal")
    keep = [k for k, i in enumerate(E.ring.components) if i in S.support]
    return FModObject(S.as_ring, tuple(E.dims[k] for k in keep))


def to_ideal_morphism(f: FModMorphism, S: IdempotentIdeal) -> FModMorphism:
    dom, cod = to_ideal_module(f.dom, S), to_ideal_module(f.cod, S)
    keep = [k for k, i in enumerate(f.dom.ring.components) if i in S.support]
    return FModMorphism(dom, cod, tuple(f.mats[k] for k in keep))


def induce_from(F: FModObject, R: ComponentRing) -> FModObject:
    """F (x)_S S as an R-module: extend by zero off the components of S."""
    if not set(F.ring.components) <= set(R.components):
        raise DomainError("ideal ring is not inside R")
    dims = dict(zip(F.ring.components, F.dims))
    return FModObject(R, tuple(dims.get(i, 0) for i in R.components))


def induce_morphism(g: FModMorphism, R: ComponentRing) -> FModMorphism:
    dom, cod = induce_from(g.dom, R), induce_from(g.cod, R)
    mats = dict(zip(g.dom.ring.components, g.mats))
    return FModMorphism(dom, cod, tuple(mats.get(i, QMatrix.zeros(n, k))
                                        for i, k, n in zip(R.components, dom.dims, cod.dims)))


def multiplication_iso(E: FModObject, S: IdempotentIdeal) -> FModMorphism:
    """x (x) s |-> xs : E (x)_R S -> E for E local to S, identity on surviving components."""
    ES = restrict_to_ideal(E, S)
    mats = []
    for i, d, e in zip(E.ring.components, E.dims, ES.dims):
        mats.append(QMatrix.identity(d).kron(QMatrix.of([[1]])) if i in S.support else QMatrix.zeros(d, e))
    return FModMorphism(ES, E, tuple(mats))


def random_rational(rng) -> Fraction:
    return Fraction(int(rng.integers(-3, 4)), int(rng.integers(1, 4)))


def random_fmod_morphism(rng, dom: FModObject, cod: FModObject) -> FModMorphism:
    return FModMorphism(dom, cod, tuple(QMatrix.of([[random_rational(rng) for _ in range(k)] for _ in range(n)], k)
                                        for k, n in zip(dom.dims, cod.dims)))


def random_fmod_object(rng, ring: ComponentRing, max_dim: int = 3) -> FModObject:
    return FModObject(ring, tuple(int(d) for d in rng.integers(0, max_dim + 1, size=len(ring))))


def equivalence_report(n: int, samples: int = 100, rng=None, seed: int = 0,
                       ideal: Iterable[int] | None = None) -> LawReport:
    """Check FMod_R restricted to S is monoidally equivalent to FMod_S, exactly."""
    if not 0 <= n <= MAX_COMPONENTS:
        raise DomainError(f"at most {MAX_COMPONENTS} components")
    rng = np.random.default_rng(seed) if rng is None else rng
    R = ComponentRing.of_size(n)
    rep = LawReport("firm-rings")
    ideals = enumerate_subunits(n)
    for S in ideals:
        rep.record("ideal idempotent", S.is_idempotent(), sorted(S.support))
        rep.record("ideal unital", S.is_unital(), sorted(S.support))
        rep.record("ideal firm and nondegenerate", S.is_firm() and S.is_nondegenerate(), sorted(S.support))
        for T in ideals:
            firm = fmod_tensor(S.inclusion, fmod_identity(T.module)).is_injective()
            rep.record("FMod_R firm", firm, (sorted(S.support), sorted(T.support)))
    rep.record("R firm and nondegenerate", R.is_firm() and R.is_nondegenerate())
    fixed = IdempotentIdeal(R, ideal) if ideal is not None else None
    for case in range(samples):
        S = fixed or ideals[int(rng.integers(len(ideals)))]
        w = sorted(S.support)
        E, F, G = (restrict_to_ideal(random_fmod_object(rng, R), S) for _ in range(3))
        f, g = random_fmod_morphism(rng, E, F), random_fmod_morphism(rng, F, G)
        rep.record("restricted objects local", all(is_local(X, S) for X in (E, F, G)), w, case)

        # R|S -> S -> R|S and S -> R|S -> S are identities on the nose
        rep.record("induce after restrict = id (objects)", induce_from(to_ideal_module(E, S), R) == E, w, case)
        rep.record("induce after restrict = id (morphisms)", induce_morphism(to_ideal_morphism(f, S), R) == f, w, case)
        Fs = random_fmod_object(rng, S.as_ring)
        hs = random_fmod_morphism(rng, Fs, random_fmod_object(rng, S.as_ring))
        rep.record("restrict after induce = id (objects)", to_ideal_module(induce_from(Fs, R), S) == Fs, w, case)
        rep.record("restrict after induce = id (morphisms)", to_ideal_morphism(induce_morphism(hs, R), S) == hs, w, case)

        # functoriality
        gf = fmod_compose(g, f)
        rep.record("functorial (to S)", to_ideal_morphism(gf, S) ==
                   fmod_compose(to_ideal_morphism(g, S), to_ideal_morphism(f, S)), w, case)
        rep.record("functorial (induce)", induce_morphism(to_ideal_morphism(gf, S), R) ==
                   fmod_compose(induce_morphism(to_ideal_morphism(g, S), R),
                                induce_morphism(to_ideal_morphism(f, S), R)), w, case)
        rep.record("functorial (restriction)", restrict_morphism_to_ideal(gf, S) ==
                   fmod_compose(restrict_morphism_to_ideal(g, S), restrict_morphism_to_ideal(f, S)), w, case)

        # monoidal: tensor and unit preserved
        rep.record("monoidal (tensor)", to_ideal_morphism(fmod_tensor(f, g), S) ==
                   fmod_tensor(to_ideal_morphism(f, S), to_ideal_morphism(g, S)), w, case)
        rep.record("monoidal (unit)", to_ideal_module(S.module, S) == S.as_ring.unit_module, w, case)

        # E (x)_S S ~ E (x)_R R ~ E, naturally
        mE, mF = multiplication_iso(E, S), multiplication_iso(F, S)
        rep.record("multiplication iso", mE.is_iso() and mF.is_iso(), w, case)
        rep.record("multiplication natural", fmod_compose(f, mE) ==
                   fmod_compose(mF, restrict_morphism_to_ideal(f, S)), w, case)
        rep.cases += 1
    if fixed is not None and not fixed.support:
        rep.notes.append("empty ideal: the restricted category is the zero category")
    return rep
