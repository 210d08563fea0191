"""Teleportation over a causal site, with propagation modelled as restriction."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

import numpy as np

from .causal import CausalSite, future_closure, site_from_json, validate_site
from .hilbfield import (
    TAU, BaseSpace, HField, HMorphism, braiding, compose, constant_field, deviation, dual_counit,
    dual_unit, identity, is_iso, matrix_from_json, scale, scalar_morphism, tensor_all, tensor_mor,
    tensor_ob, unit_field,
)
from .lattice import DomainError
from .restriction import restrict_morphism, restrict_object
from .subunits import Subunit, support, subunit_meet


class ScenarioError(DomainError):
    pass


Mode = Any  # "dual" | "normalized" | one matrix (list or array) used at every point


@dataclass(frozen=True)
class Scenario:
    """Pair creation in ``r``, Alice's lab ``s``, Bob's lab ``t``."""

    site: CausalSite
    r: frozenset
    s: frozenset
    t: frozenset
    qdim: int = 2
    eta_mode: Mode = field(default="dual", hash=False, compare=False)
    eps_mode: Mode = field(default="dual", hash=False, compare=False)

    def __post_init__(self):
        for name in ("r", "s", "t"):
            object.__setattr__(self, name, self.site.region(getattr(self, name)))
        if self.qdim < 1:
            raise ScenarioError("qdim must be positive")


@dataclass
class TeleportReport:
    support: list
    expected: list
    deviation: float
    restricted_iso: bool
    empty_intersection: bool
    tol: float = TAU

    @property
    def contained(self) -> bool:
        return set(self.support) <= set(self.expected)

    @property
    def verdict(self) -> str:
        return "PASS" if self.contained and self.deviation <= self.tol else "FAIL"

    def to_dict(self) -> dict:
        return {
            "support": self.support,
            "expected": self.expected,
            "contained": self.contained,
            "deviation": self.deviation,
            "restricted_iso": self.restricted_iso,
            "empty_intersection": self.empty_intersection,
            "verdict": self.verdict,
        }

    def format_text(self) -> str:
        lines = [
            f"support carrier: {{{', '.join(map(str, self.support))}}}",
            f"expected (future of Alice meet future of Bob): {{{', '.join(map(str, self.expected))}}}",
            f"deviation from expected iso: {self.deviation:.3g}",
            f"restricted map invertible: {self.restricted_iso}",
        ]
        if self.empty_intersection:
            lines.append("note: empty intersection, restricted map is the identity on the zero object")
        lines.append(f"verdict: {self.verdict}")
        return "\n".join(lines)


@dataclass(frozen=True)
class Protocol:
    """The built composite and the pieces needed to check it."""

    base: BaseSpace
    composite: HMorphism
    alice: Subunit   # future of s, inside the working base
    bob: Subunit     # future of t
    expected_scale: complex


def _pair_matrix(mode: Mode, d: int, kind: str) -> tuple[np.ndarray, complex]:
    """Fiber matrix of the pair state or effect, and its scale against the dual pair."""
    shape = (d * d, 1) if kind == "eta" else (1, d * d)
    if isinstance(mode, str):
        if mode not in ("dual", "normalized"):
            raise ScenarioError(f"unknown {kind} mode {mode!r}")
        c = 1.0 if mode == "dual" else 1 / np.sqrt(d)
        return c * np.eye(d, dtype=complex).reshape(shape), c
    m = np.asarray(mode, dtype=complex)
    if m.size != d * d:
        raise ScenarioError(f"{kind} matrix has {m.size} entries, expected {d * d}")
    return m.reshape(shape), 1.0


def build_protocol(scn: Scenario, tol: float = TAU) -> Protocol:
    site = scn.site
    rep = validate_site(site)
    if not rep.passed:
        bad = next(law for law, ok in rep.laws.items() if not ok)
        raise ScenarioError(f"{bad} violated, witness {rep.witness(bad)!r}")
    C = future_closure(site)
    future_r = C(scn.r)
    outside = (scn.s | scn.t) - future_r
    if outside:
        raise ScenarioError(f"labs outside the future of the pair source: {sorted(map(str, outside))}")

    # work inside the future of r only
    base = BaseSpace(site.sorted_region(future_r))
    alice = Subunit(base, C(scn.s))
    bob = Subunit(base, C(scn.t))
    d = scn.qdim
    I = unit_field(base)
    A = constant_field(base, d)
    Ap, B = A, A
    Cs, Ct = alice.obj, bob.obj

    eta_m, a = _pair_matrix(scn.eta_mode, d, "eta")
    eps_m, b = _pair_matrix(scn.eps_mode, d, "eps")
    eta = HMorphism(I, tensor_ob(Ap, B), [eta_m] * len(base))
    eps0 = HMorphism(tensor_ob(A, Ap), I, [eps_m] * len(base))

    # eta' = eta (x) id_{C+(s)} (x) id_{C+(t)}
    eta_p = tensor_all(eta, identity(Cs), identity(Ct))
    # Alice's effect lives in her future: A (x) A' (x) C+(s) -> I
    eps = tensor_mor(eps0, alice.mono)
    # the coherence step the diagram leaves implicit: move B past C+(s)
    shuffle = tensor_all(identity(A), identity(Ap), braiding(B, Cs), identity(Ct))
    composite = compose(tensor_mor(eps, identity(tensor_ob(B, Ct))),
                        compose(shuffle, tensor_mor(identity(A), eta_p)))
    return Protocol(base, composite, alice, bob, a * b)


def verify_teleportation(scn: Scenario, tol: float = TAU) -> TeleportReport:
    prot = build_protocol(scn, tol)
    f = prot.composite
    supp = support(f, tol)
    both = subunit_meet(prot.alice, prot.bob)
    restricted = restrict_morphism(f, both)
    # the target is B (x) C+(s) (x) C+(t) restricted to the same region, equal dims to the domain
    expected = scalar_morphism(restricted.dom, [prot.expected_scale] * len(prot.base))
    expected = HMorphism(restricted.dom, restricted.cod, expected.mats)
    dev = deviation(restricted, expected)
    return TeleportReport(
        support=supp.sorted_carrier(),
        expected=both.sorted_carrier(),
        deviation=dev,
        restricted_iso=is_iso(restricted, tol),
        empty_intersection=not both.carrier,
        tol=tol,
    )


def scenario_from_json(doc: Mapping, site: CausalSite | None = None) -> Scenario:
    site = site if site is not None else site_from_json(doc["site"])
    return Scenario(site, [str(p) for p in doc["r"]], [str(p) for p in doc["s"]],
                    [str(p) for p in doc["t"]], int(doc.get("qdim", 2)),
                    _mode_from_json(doc.get("eta", "dual")), _mode_from_json(doc.get("eps", "dual")))


def _mode_from_json(m):
    if isinstance(m, str):
        return m
    if isinstance(m, Mapping):
        m = m["matrix"]
    return matrix_from_json(m)


def random_scenario(rng, max_points: int = 8, max_qdim: int = 3) -> Scenario:
    from .causal import random_site

    site = random_site(rng, int(rng.integers(1, max_points + 1)))
    pts = list(site.points)
    r = [p for p in pts if rng.random() < 0.3] or [pts[int(rng.integers(len(pts)))]]
    fut = site.sorted_region(future_closure(site)(frozenset(r)))
    pick = lambda: [p for p in fut if rng.random() < 0.4] or [fut[int(rng.integers(len(fut)))]]
    return Scenario(site, r, pick(), pick(), int(rng.integers(1, max_qdim + 1)))
