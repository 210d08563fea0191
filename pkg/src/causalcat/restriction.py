"""Restriction to a subunit: coreflection, graded monad and localisation.

Every coherence isomorphism is an identity matrix under the strict
convention, but the diagrams below are still evaluated as compositions of
actual morphisms and compared numerically.
"""
from __future__ import annotations

import numpy as np

from .hilbfield import (
    TAU, BaseSpace, HField, HMorphism, compose, compose_all, deviation, identity, invert,
    is_iso, random_base, random_field, random_morphism, tensor_mor, tensor_ob,
)
from .lattice import DomainError
from .report import LawReport
from .subunits import Subunit, counit_through, grade_arrow, is_local, random_subunit, subunit_meet


class NotLocal(DomainError):
    pass


def restrict_object(E: HField, u: Subunit) -> HField:
    return tensor_ob(E, u.obj)


def restrict_morphism(f: HMorphism, u: Subunit) -> HMorphism:
    return tensor_mor(f, identity(u.obj))


def counit(E: HField, u: Subunit) -> HMorphism:
    """E (x) S -> E."""
    return counit_through(E, u)


def strict_iso(E: HField, F: HField) -> HMorphism:
    """Identity matrices between fields of equal dims: a coherence isomorphism."""
    if E.dims != F.dims or E.base != F.base:
        raise DomainError(f"no strict coherence iso between {E.dims} and {F.dims}")
    return HMorphism(E, F, identity(E).mats)


def adjunction_forward(f: HMorphism, u: Subunit, tol: float = TAU) -> HMorphism:
    """f : E -> F with E local  |->  (f (x) id_S) (id_E (x) s)^-1 rho_E^-1 : E -> F (x) S."""
    E = f.dom
    if not is_local(E, u, tol):
        raise NotLocal("domain is not local for the subunit")
    inv = invert(tensor_mor(identity(E), u.mono), tol)
    return compose(restrict_morphism(f, u), inv)


def adjunction_backward(g: HMorphism, u: Subunit, F: HField) -> HMorphism:
    """g : E -> F (x) S  |->  rho_F (id_F (x) s) g : E -> F."""
    return compose(counit(F, u), g)


def adjunction_unit(E: HField, u: Subunit, tol: float = TAU) -> HMorphism:
    return adjunction_forward(identity(E), u, tol)


# --- graded monad ------------------------------------------------------------

def graded_unit(E: HField) -> HMorphism:
    """rho_E^-1 : E -> E (x) I."""
    return strict_iso(E, tensor_ob(E, _unit_obj(E.base)))


def graded_mult(E: HField, u: Subunit, v: Subunit) -> HMorphism:
    """alpha : (E (x) S) (x) T -> E (x) (S (x) T)."""
    return strict_iso(tensor_ob(tensor_ob(E, u.obj), v.obj), tensor_ob(E, subunit_meet(u, v).obj))


def grade_action(E: HField, f: HMorphism) -> HMorphism:
    """T(f) at E: id_E (x) f for a grade arrow f."""
    return tensor_mor(identity(E), f)


def _unit_obj(base: BaseSpace) -> HField:
    return Subunit.full(base).obj


def _T(E: HField, *grades: Subunit) -> HField:
    for g in grades:
        E = restrict_object(E, g)
    return E


def graded_monad_case(E: HField, f: HMorphism, r: Subunit, s: Subunit, t: Subunit,
                      rep: LawReport, case: int, tol: float = TAU) -> None:
    """Evaluate the associativity square, both unit triangles, naturality and
    functoriality of the grading for one object, morphism and grade triple."""
    base = E.base
    one = Subunit.full(base)
    rs, st = subunit_meet(r, s), subunit_meet(s, t)
    rs_t, r_st = subunit_meet(rs, t), subunit_meet(r, st)

    # associativity: T(alpha) mu_{rs,t} (mu_{r,s} * T(t))  ==  mu_{r,st} (T(r) * mu_{s,t})
    alpha = grade_arrow(rs_t, r_st)
    rep.record("alpha is a grade arrow", alpha is not None and is_iso(alpha), (r, s, t), case)
    left = compose_all(grade_action(E, alpha), graded_mult(E, rs, t),
                       restrict_morphism(graded_mult(E, r, s), t))
    right = compose(graded_mult(E, r, st), graded_mult(restrict_object(E, r), s, t))
    dev = deviation(left, right)
    rep.record("associativity square", dev <= tol, (r, s, t), case, dev)

    # left unit: T(lambda_s) mu_{1,s} (eta * T(s)) == id
    lam = grade_arrow(subunit_meet(one, s), s)
    path = compose_all(grade_action(E, lam), graded_mult(E, one, s), restrict_morphism(graded_unit(E), s))
    dev = deviation(path, identity(_T(E, s)))
    rep.record("left unit triangle", dev <= tol, s, case, dev)

    # right unit: T(rho_s) mu_{s,1} (T(s) * eta) == id
    rho = grade_arrow(subunit_meet(s, one), s)
    path = compose_all(grade_action(E, rho), graded_mult(E, s, one), graded_unit(_T(E, s)))
    dev = deviation(path, identity(_T(E, s)))
    rep.record("right unit triangle", dev <= tol, s, case, dev)

    # naturality of mu and eta in E
    F = f.cod
    lhs = compose(graded_mult(F, r, s), restrict_morphism(restrict_morphism(f, r), s))
    rhs = compose(restrict_morphism(f, rs), graded_mult(E, r, s))
    dev = deviation(lhs, rhs)
    rep.record("mu natural", dev <= tol, (r, s), case, dev)
    dev = deviation(compose(graded_unit(F), f), compose(restrict_morphism(f, one), graded_unit(E)))
    rep.record("eta natural", dev <= tol, None, case, dev)

    # T is a functor on grade arrows, and each T(a) is natural in E
    a, b = grade_arrow(rs, r), grade_arrow(r, one)
    ok = a is not None and b is not None
    if ok:
        dev = deviation(grade_action(E, compose(b, a)), compose(grade_action(E, b), grade_action(E, a)))
        rep.record("T preserves composition", dev <= tol, (rs, r), case, dev)
        dev = deviation(grade_action(E, grade_arrow(r, r)), identity(_T(E, r)))
        rep.record("T preserves identities", dev <= tol, r, case, dev)
        dev = deviation(compose(grade_action(F, a), restrict_morphism(f, rs)),
                        compose(restrict_morphism(f, r), grade_action(E, a)))
        rep.record("T(f) natural", dev <= tol, (rs, r), case, dev)
    rep.record("grade arrows exist along meets", ok, (r, s), case)


def graded_monad_report(samples: int = 200, rng=None, seed: int = 0, max_points: int = 3,
                        max_dim: int = 3, tol: float = TAU) -> LawReport:
    rng = np.random.default_rng(seed) if rng is None else rng
    rep = LawReport("graded-monad")
    noncanon = 0
    for case in range(samples):
        base = random_base(rng, max_points)
        E, F = random_field(rng, base, max_dim), random_field(rng, base, max_dim)
        f = random_morphism(rng, E, F, zero_prob=0.2)
        # mix canonical and non-canonical witnesses of the same regions
        r, s, t = (random_subunit(rng, base, canonical=bool(rng.random() < 0.3)) for _ in range(3))
        graded_monad_case(E, f, r, s, t, rep, case, tol)
        rep.cases += 1
        noncanon += sum(not g.is_canonical for g in (r, s, t))
    rep.values["non-canonical grades"] = noncanon
    return rep


# --- coreflection --------------------------------------------------------------

def coreflection_case(E: HField, F: HField, f: HMorphism, g: HMorphism, h: HMorphism, u: Subunit,
                      rep: LawReport, case: int, tol: float = TAU) -> None:
    """E local; f : E -> F, g : E -> F (x) S, h : F -> G arbitrary."""
    fwd_back = adjunction_backward(adjunction_forward(f, u, tol), u, F)
    dev = deviation(fwd_back, f)
    rep.record("backward after forward", dev <= tol, u, case, dev)
    back_fwd = adjunction_forward(adjunction_backward(g, u, F), u, tol)
    dev = deviation(back_fwd, g)
    rep.record("forward after backward", dev <= tol, u, case, dev)

    # triangle identities of inclusion -| restriction
    dev = deviation(compose(counit(E, u), adjunction_unit(E, u, tol)), identity(E))
    rep.record("triangle at local object", dev <= tol, u, case, dev)
    FS = restrict_object(F, u)
    dev = deviation(compose(restrict_morphism(counit(F, u), u), adjunction_unit(FS, u, tol)), identity(FS))
    rep.record("triangle at restricted object", dev <= tol, u, case, dev)

    # counit natural: eps_G (h (x) id_S) == h eps_F
    dev = deviation(compose(counit(h.cod, u), restrict_morphism(h, u)), compose(h, counit(F, u)))
    rep.record("counit natural", dev <= tol, u, case, dev)

    # restricted objects are local, and restriction is idempotent
    rep.record("restricted object is local", is_local(FS, u, tol), u, case)
    rep.record("restriction idempotent", restrict_object(FS, u).dims == FS.dims, u, case)


def random_local_field(rng, u: Subunit, max_dim: int = 4) -> HField:
    dims = [int(rng.integers(0, max_dim + 1)) if p in u.carrier else 0 for p in u.base.points]
    return HField(u.base, dims)


def coreflection_report(samples: int = 300, rng=None, seed: int = 0, max_points: int = 5,
                        max_dim: int = 4, tol: float = TAU) -> LawReport:
    rng = np.random.default_rng(seed) if rng is None else rng
    rep = LawReport("coreflection")
    for case in range(samples):
        base = random_base(rng, max_points)
        u = random_subunit(rng, base)
        E = random_local_field(rng, u, max_dim)
        F, G = random_field(rng, base, max_dim), random_field(rng, base, max_dim)
        f = random_morphism(rng, E, F, zero_prob=0.2)
        g = random_morphism(rng, E, restrict_object(F, u), zero_prob=0.2)
        h = random_morphism(rng, F, G)
        coreflection_case(E, F, f, g, h, u, rep, case, tol)
        rep.cases += 1
    return rep


# --- localisation --------------------------------------------------------------

def sigma(E: HField, u: Subunit) -> HMorphism:
    """id_E (x) s, the morphisms restriction must invert."""
    return tensor_mor(identity(E), u.mono)


def localisation_eta(E: HField, u: Subunit, v: Subunit) -> HMorphism:
    """R(rho_E) R(id_E (x) s) : R(E (x) S) -> R(E) for R = restriction to v."""
    rho = strict_iso(tensor_ob(E, _unit_obj(E.base)), E)
    return compose(restrict_morphism(rho, v), restrict_morphism(sigma(E, u), v))


def localisation_report(u: Subunit, samples: int = 50, rng=None, seed: int = 0,
                        max_dim: int = 3, tol: float = TAU) -> LawReport:
    rng = np.random.default_rng(seed) if rng is None else rng
    base = u.base
    rep = LawReport("localisation")
    below = [v for v in _subunits_below(u)]
    for case in range(samples):
        E, F = random_field(rng, base, max_dim), random_field(rng, base, max_dim)
        f = random_morphism(rng, E, F)
        rep.record("Q inverts id_E (x) s", is_iso(restrict_morphism(sigma(E, u), u), tol), E.dims, case)
        for v in below:
            eta_E, eta_F = localisation_eta(E, u, v), localisation_eta(F, u, v)
            rep.record("R inverts id_E (x) s", is_iso(restrict_morphism(sigma(E, u), v), tol), (E.dims, v), case)
            rep.record("eta_E iso", is_iso(eta_E, tol), (E.dims, v), case)
            # eta natural: eta_F R(f (x) id_S) == R(f) eta_E
            dev = deviation(compose(eta_F, restrict_morphism(restrict_morphism(f, u), v)),
                            compose(restrict_morphism(f, v), eta_E))
            rep.record("eta natural", dev <= tol, (E.dims, v), case, dev)
        # precomposition with Q is faithful: distinct local morphisms stay distinct
        Eu, Fu = restrict_object(E, u), restrict_object(F, u)
        g1 = random_morphism(rng, Eu, Fu)
        g2 = random_morphism(rng, Eu, Fu)
        dist = deviation(g1, g2)
        qdist = deviation(restrict_morphism(g1, u), restrict_morphism(g2, u))
        rep.record("Q faithful on local homs", (dist <= tol) == (qdist <= tol), (E.dims, F.dims), case)
        rep.cases += 1
    return rep


def _subunits_below(u: Subunit) -> list[Subunit]:
    pts = u.sorted_carrier()
    out = []
    for mask in range(1 << len(pts)):
        out.append(Subunit(u.base, [p for i, p in enumerate(pts) if mask >> i & 1]))
    return out
