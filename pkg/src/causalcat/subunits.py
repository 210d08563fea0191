"""Idempotent subunits of the field model: recognition, meets, order and support."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping

import numpy as np

from .hilbfield import (
    TAU, BaseSpace, HField, HMorphism, compose, fiber_norm, identity, is_iso, is_mono,
    solve_factorization, tensor_mor, tensor_ob, unit_field,
)
from .lattice import DomainError
from .report import LawReport


class NotMono(DomainError):
    pass


class NotIdempotent(DomainError):
    pass


class InconsistentModel(RuntimeError):
    """Two independent computations of the same fact disagreed."""


@dataclass(frozen=True)
class Subunit:
    """Open region ``carrier`` with the nonzero scalars of the mono S -> I.

    ``scalars`` is aligned with ``base.points`` and is 0 off the carrier.
    """

    base: BaseSpace
    carrier: frozenset
    scalars: tuple

    def __init__(self, base: BaseSpace, carrier: Iterable, scalars: Mapping | None = None, tol: float = TAU):
        carrier = frozenset(carrier)
        unknown = carrier - set(base.points)
        if unknown:
            raise DomainError(f"carrier mentions points outside the base: {sorted(map(str, unknown))}")
        scalars = dict(scalars or {})
        values = []
        for p in base.points:
            if p in carrier:
                c = complex(scalars.get(p, 1))
                if abs(c) <= tol:
                    raise NotMono(f"scalar at {p!r} vanishes, so S -> I is not monic")
                values.append(c)
            else:
                values.append(0j)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "carrier", carrier)
        object.__setattr__(self, "scalars", tuple(values))

    @classmethod
    def full(cls, base: BaseSpace) -> Subunit:
        return cls(base, base.points)

    @classmethod
    def empty(cls, base: BaseSpace) -> Subunit:
        return cls(base, ())

    def scalar(self, t) -> complex:
        return self.scalars[self.base.index[t]]

    @property
    def is_canonical(self) -> bool:
        return all(c == 1 for c, p in zip(self.scalars, self.base.points) if p in self.carrier)

    def canonical(self) -> Subunit:
        return Subunit(self.base, self.carrier)

    @cached_property
    def obj(self) -> HField:
        return HField(self.base, [int(p in self.carrier) for p in self.base.points])

    @cached_property
    def mono(self) -> HMorphism:
        return HMorphism(self.obj, unit_field(self.base),
                         [np.array([[c]]) if p in self.carrier else np.zeros((1, 0))
                          for p, c in zip(self.base.points, self.scalars)])

    def sorted_carrier(self) -> list:
        return [p for p in self.base.points if p in self.carrier]

    def __repr__(self) -> str:
        if self.is_canonical:
            return f"Subunit({self.sorted_carrier()!r})"
        return f"Subunit({ {p: self.scalar(p) for p in self.sorted_carrier()}!r})"


def recognize_subunit(s: HMorphism, tol: float = TAU) -> Subunit:
    """Read an idempotent subunit off a morphism into the tensor unit."""
    if s.cod != unit_field(s.base):
        raise DomainError("codomain is not the tensor unit")
    if not is_mono(s, tol):
        raise NotMono("morphism into the unit is not monic")
    S = s.dom
    if not is_iso(tensor_mor(s, identity(S)), tol):
        raise NotIdempotent("s (x) id_S is not invertible")
    carrier = [p for p, d in zip(s.base.points, S.dims) if d == 1]
    return Subunit(s.base, carrier, {p: s.fiber(p)[0, 0] for p in carrier}, tol)


def _same_base(u: Subunit, v: Subunit) -> None:
    if u.base != v.base:
        raise DomainError("subunits over different bases")


def subunit_meet(u: Subunit, v: Subunit) -> Subunit:
    """The subunit lambda_I after (s (x) t); lambda_I is an identity here."""
    _same_base(u, v)
    return recognize_subunit(tensor_mor(u.mono, v.mono))


def subunit_leq(u: Subunit, v: Subunit, tol: float = TAU) -> bool:
    """u <= v, computed as an inclusion and as invertibility of id_S (x) t."""
    _same_base(u, v)
    by_subset = u.carrier <= v.carrier
    by_iso = is_iso(tensor_mor(identity(u.obj), v.mono), tol)
    if by_subset != by_iso:
        raise InconsistentModel(f"inclusion says {by_subset}, iso test says {by_iso} for {u} <= {v}")
    return by_subset


def grade_arrow(s: Subunit, t: Subunit) -> HMorphism | None:
    """The unique f : S -> T with s = t after f, or None if there is none."""
    _same_base(s, t)
    if not s.carrier <= t.carrier:
        return None
    mats = []
    for p, a, b in zip(s.base.points, s.scalars, t.scalars):
        if p in s.carrier:
            mats.append(np.array([[a / b]]))
        else:
            mats.append(np.zeros((int(p in t.carrier), 0)))
    return HMorphism(s.obj, t.obj, mats)


def mediating_iso(s: Subunit, s2: Subunit) -> HMorphism:
    """The unique isomorphism f with s2 = s after f."""
    _same_base(s, s2)
    if s.carrier != s2.carrier:
        raise DomainError("mediating isomorphism needs equal carriers")
    f = grade_arrow(s2, s)
    assert f is not None and is_iso(f)
    return f


def counit_through(F: HField, s: Subunit) -> HMorphism:
    """rho_F after (id_F (x) s) : F (x) S -> F."""
    return tensor_mor(identity(F), s.mono)


def has_support_in(f: HMorphism, s: Subunit, method: str = "both", tol: float = TAU) -> bool:
    """Whether f factors through F (x) S -> F.

    ``fast`` checks that fibers vanish off the carrier, ``factor`` solves the
    factorization fiberwise; ``both`` runs the two and insists they agree.
    """
    if f.base != s.base:
        raise DomainError("morphism and subunit over different bases")
    fast = factor = None
    if method in ("fast", "both"):
        fast = all(fiber_norm(a) <= tol for p, a in zip(f.base.points, f.mats) if p not in s.carrier)
    if method in ("factor", "both"):
        factor = solve_factorization(counit_through(f.cod, s), f, tol)[1] <= tol
    if method == "both" and fast != factor:
        raise InconsistentModel(f"support paths disagree: fast={fast}, factor={factor}")
    if fast is None and factor is None:
        raise ValueError(f"unknown method {method!r}")
    return fast if fast is not None else factor


def support(f: HMorphism, tol: float = TAU) -> Subunit:
    """Least subunit f has support in: the points where the fiber is nonzero."""
    return Subunit(f.base, [p for p, a in zip(f.base.points, f.mats) if fiber_norm(a) > tol])


def all_subunits(base: BaseSpace) -> list[Subunit]:
    pts = base.points
    return [Subunit(base, c) for k in range(len(pts) + 1) for c in combinations(pts, k)]


def firmness_report(base: BaseSpace, dims_bound: int = 1, tol: float = TAU) -> LawReport:
    """Check s (x) id_T monic for every pair of subunits, and s (x) id_E for constant E."""
    rep = LawReport("firmness")
    subs = all_subunits(base)
    for s in subs:
        for t in subs:
            rep.cases += 1
            rep.record("s (x) id_T monic", is_mono(tensor_mor(s.mono, identity(t.obj)), tol),
                       (s.sorted_carrier(), t.sorted_carrier()), rep.cases - 1)
        for d in range(1, dims_bound + 1):
            E = HField(base, (d,) * len(base))
            rep.record("s (x) id_E monic", is_mono(tensor_mor(s.mono, identity(E)), tol),
                       (s.sorted_carrier(), d))
    return rep


def locality_conditions(E: HField, u: Subunit, tol: float = TAU) -> dict[str, bool]:
    S = u.obj
    return {
        "a": is_iso(tensor_mor(identity(E), u.mono), tol),
        "b": tensor_ob(E, S).dims == E.dims,
        "d": has_support_in(identity(E), u, "both", tol),
    }


def locality_report(E: HField, u: Subunit, tol: float = TAU) -> LawReport:
    """Evaluate the equivalent locality conditions and check they agree."""
    if E.base != u.base:
        raise DomainError("field and subunit over different bases")
    rep = LawReport("locality", cases=1)
    vals = locality_conditions(E, u, tol)
    rep.values.update(vals)
    rep.record("(a) iff (d)", vals["a"] == vals["d"], vals)
    rep.record("(a) iff (b)", vals["a"] == vals["b"], vals)
    return rep


def is_local(E: HField, u: Subunit, tol: float = TAU) -> bool:
    return is_iso(tensor_mor(identity(E), u.mono), tol)


def random_subunit(rng, base: BaseSpace, canonical: bool = False) -> Subunit:
    carrier = [p for p in base.points if rng.random() < 0.5]
    if canonical:
        return Subunit(base, carrier)
    scalars = {p: complex(*rng.choice([1, -1, 2, 3, 0.5], size=2)) for p in carrier}
    return Subunit(base, carrier, scalars)


def subunit_from_json(base: BaseSpace, doc: Mapping) -> Subunit:
    scalars = {str(k): complex(re, im) for k, (re, im) in doc.get("scalars", {}).items()}
    return Subunit(base, [str(p) for p in doc["carrier"]], scalars)


def subunit_to_json(u: Subunit) -> dict:
    return {"carrier": u.sorted_carrier(),
            "scalars": {str(p): [u.scalar(p).real, u.scalar(p).imag] for p in u.sorted_carrier()}}

