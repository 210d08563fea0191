"""Fields of finite-dimensional Hilbert spaces over a finite discrete base.

An object assigns a dimension to every base point; a morphism assigns a
complex matrix to every point.  The monoidal structure is strict: tensor is
the fiberwise Kronecker product in row-major order, so associators and
unitors are identity matrices.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np
import scipy.linalg

from .lattice import DomainError

TAU = 1e-9

Point = Hashable


@dataclass(frozen=True)
class BaseSpace:
    points: tuple

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if len(set(self.points)) != len(self.points):
            raise DomainError("duplicate base points")

    @cached_property
    def index(self) -> dict:
        return {p: i for i, p in enumerate(self.points)}

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)


@dataclass(frozen=True)
class HField:
    base: BaseSpace
    dims: tuple

    def __post_init__(self):
        dims = self.dims
        if isinstance(dims, Mapping):
            missing = set(self.base.points) - set(dims)
            extra = set(dims) - set(self.base.points)
            if missing or extra:
                raise DomainError(f"dims must cover the base exactly (missing {sorted(map(str, missing))}, "
                                  f"extra {sorted(map(str, extra))})")
            dims = [dims[p] for p in self.base.points]
        dims = tuple(int(d) for d in dims)
        if len(dims) != len(self.base) or any(d < 0 for d in dims):
            raise DomainError(f"bad dims {dims} for base of size {len(self.base)}")
        object.__setattr__(self, "dims", dims)

    def dim(self, t: Point) -> int:
        return self.dims[self.base.index[t]]

    def as_dict(self) -> dict:
        return dict(zip(self.base.points, self.dims))

    def __repr__(self) -> str:
        return f"HField({self.as_dict()!r})"


class HMorphism:
    """A family of matrices ``mats[i]`` of shape cod.dims[i] x dom.dims[i]."""

    __slots__ = ("dom", "cod", "mats")

    def __init__(self, dom: HField, cod: HField, mats: Iterable | Mapping):
        if dom.base != cod.base:
            raise DomainError("domain and codomain live over different bases")
        if isinstance(mats, Mapping):
            mats = [mats[p] for p in dom.base.points]
        arrays = []
        for m, p, n, k in zip(mats, dom.base.points, cod.dims, dom.dims):
            a = np.array(m, dtype=complex)
            if a.size == 0 and n * k == 0:
                a = a.reshape(n, k)
            if a.shape != (n, k):
                raise DomainError(f"fiber at {p!r} has shape {a.shape}, expected {(n, k)}")
            a.flags.writeable = False
            arrays.append(a)
        if len(arrays) != len(dom.base):
            raise DomainError("one matrix per base point required")
        self.dom, self.cod, self.mats = dom, cod, tuple(arrays)

    @property
    def base(self) -> BaseSpace:
        return self.dom.base

    def fiber(self, t: Point) -> np.ndarray:
        return self.mats[self.base.index[t]]

    def __repr__(self) -> str:
        return f"HMorphism({self.dom.dims} -> {self.cod.dims})"


# --- basic objects and morphisms -------------------------------------------

def unit_field(base: BaseSpace) -> HField:
    return HField(base, (1,) * len(base))


def constant_field(base: BaseSpace, d: int) -> HField:
    if d < 0:
        raise DomainError("dimension must be nonnegative")
    return HField(base, (d,) * len(base))


def zero_field(base: BaseSpace) -> HField:
    return constant_field(base, 0)


def identity(E: HField) -> HMorphism:
    return HMorphism(E, E, [np.eye(d, dtype=complex) for d in E.dims])


def zero_morphism(E: HField, F: HField) -> HMorphism:
    return HMorphism(E, F, [np.zeros((n, k), dtype=complex) for k, n in zip(E.dims, F.dims)])


def scalar_morphism(E: HField, values: Mapping | Sequence) -> HMorphism:
    """Fiberwise multiple of the identity."""
    if isinstance(values, Mapping):
        values = [values.get(p, 0) for p in E.base.points]
    return HMorphism(E, E, [c * np.eye(d, dtype=complex) for c, d in zip(values, E.dims)])


def compose(g: HMorphism, f: HMorphism) -> HMorphism:
    """g after f."""
    if f.cod != g.dom:
        raise DomainError(f"cannot compose: codomain {f.cod.dims} vs domain {g.dom.dims}")
    return HMorphism(f.dom, g.cod, [b @ a for a, b in zip(f.mats, g.mats)])


def compose_all(*fs: HMorphism) -> HMorphism:
    """``compose_all(h, g, f)`` is h after g after f."""
    out = fs[-1]
    for g in reversed(fs[:-1]):
        out = compose(g, out)
    return out


def add(f: HMorphism, g: HMorphism) -> HMorphism:
    if f.dom != g.dom or f.cod != g.cod:
        raise DomainError("addition of non-parallel morphisms")
    return HMorphism(f.dom, f.cod, [a + b for a, b in zip(f.mats, g.mats)])


def scale(c: complex, f: HMorphism) -> HMorphism:
    return HMorphism(f.dom, f.cod, [c * a for a in f.mats])


def tensor_ob(E: HField, F: HField) -> HField:
    if E.base != F.base:
        raise DomainError("tensor of fields over different bases")
    return HField(E.base, tuple(a * b for a, b in zip(E.dims, F.dims)))


def tensor_mor(f: HMorphism, g: HMorphism) -> HMorphism:
    if f.base != g.base:
        raise DomainError("tensor of morphisms over different bases")
    return HMorphism(tensor_ob(f.dom, g.dom), tensor_ob(f.cod, g.cod),
                     [kron(a, b) for a, b in zip(f.mats, g.mats)])


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-major Kronecker product (same convention as numpy.kron)."""
    (n, k), (m, l) = a.shape, b.shape
    return (a[:, None, :, None] * b[None, :, None, :]).reshape(n * m, k * l)


def tensor_all(*xs):
    out = xs[0]
    for x in xs[1:]:
        out = tensor_ob(out, x) if isinstance(out, HField) else tensor_mor(out, x)
    return out


def swap_matrix(m: int, n: int) -> np.ndarray:
    """Permutation sending x (x) y to y (x) x for x in C^m, y in C^n."""
    P = np.zeros((m * n, m * n), dtype=complex)
    for i in range(m):
        for j in range(n):
            P[j * m + i, i * n + j] = 1
    return P


def braiding(E: HField, F: HField) -> HMorphism:
    if E.base != F.base:
        raise DomainError("braiding of fields over different bases")
    return HMorphism(tensor_ob(E, F), tensor_ob(F, E), [swap_matrix(m, n) for m, n in zip(E.dims, F.dims)])


# --- numerical predicates ----------------------------------------------------

def fiber_norm(a: np.ndarray) -> float:
    """Operator 2-norm of one fiber."""
    if a.size == 0:
        return 0.0
    if a.size == 1:
        return abs(complex(a[0, 0]))
    if min(a.shape) == 1:
        # a single row or column: the Frobenius norm is the operator norm
        return float(np.sqrt(np.sum(a.real ** 2 + a.imag ** 2)))
    return float(np.linalg.norm(a, 2))


def matrix_rank(a: np.ndarray, tol: float = TAU) -> int:
    """Rank from a column-pivoted QR, cutting diagonal entries at tol * max(1, |R00|)."""
    if a.size == 0:
        return 0
    if min(a.shape) == 1:
        n = fiber_norm(a)
        return int(n > tol * max(1.0, n))
    R = scipy.linalg.qr(a, mode="r", pivoting=True)[0]
    d = np.abs(np.diag(R))
    return int(np.sum(d > tol * max(1.0, d[0])))


def is_mono(f: HMorphism, tol: float = TAU) -> bool:
    return all(matrix_rank(a, tol) == a.shape[1] for a in f.mats)


def is_epi(f: HMorphism, tol: float = TAU) -> bool:
    return all(matrix_rank(a, tol) == a.shape[0] for a in f.mats)


def is_iso(f: HMorphism, tol: float = TAU) -> bool:
    return f.dom.dims == f.cod.dims and is_mono(f, tol)


class NotInvertible(DomainError):
    pass


def invert(f: HMorphism, tol: float = TAU) -> HMorphism:
    if not is_iso(f, tol):
        raise NotInvertible(f"{f!r} is not an isomorphism")
    g = HMorphism(f.cod, f.dom, [np.linalg.inv(a) if a.size else a.T for a in f.mats])
    dev = deviation(compose(f, g), identity(f.cod))
    if dev > tol * max(1.0, max((fiber_norm(a) for a in f.mats), default=1.0)):
        raise NotInvertible(f"inverse residual {dev:.3g} exceeds tolerance")
    return g


def deviation(f: HMorphism, g: HMorphism) -> float:
    """Largest fiberwise operator-norm distance between parallel morphisms."""
    if f.dom != g.dom or f.cod != g.cod:
        raise DomainError("deviation of non-parallel morphisms")
    return max((fiber_norm(a - b) for a, b in zip(f.mats, g.mats)), default=0.0)


def allclose(f: HMorphism, g: HMorphism, tol: float = TAU) -> bool:
    return deviation(f, g) <= tol


# --- duals -------------------------------------------------------------------

def _cup(d: int) -> np.ndarray:
    return np.eye(d, dtype=complex).reshape(d * d, 1)


def dual_unit(base: BaseSpace, d: int) -> HMorphism:
    """eta : I -> D (x) D, sum_i e_i (x) e_i at every point."""
    D = constant_field(base, d)
    return HMorphism(unit_field(base), tensor_ob(D, D), [_cup(d)] * len(base))


def dual_counit(base: BaseSpace, d: int) -> HMorphism:
    """eps : D (x) D -> I, sum_i e_i* (x) e_i* at every point."""
    D = constant_field(base, d)
    return HMorphism(tensor_ob(D, D), unit_field(base), [_cup(d).T] * len(base))


def snake(base: BaseSpace, d: int) -> HMorphism:
    """(eps (x) id) after (id (x) eta) : D -> D."""
    D = constant_field(base, d)
    idD = identity(D)
    return compose(tensor_mor(dual_counit(base, d), idD), tensor_mor(idD, dual_unit(base, d)))


# --- random instances --------------------------------------------------------

def random_field(rng, base: BaseSpace, max_dim: int = 4, min_dim: int = 0) -> HField:
    return HField(base, [int(d) for d in rng.integers(min_dim, max_dim + 1, size=len(base))])


def random_matrix(rng, n: int, k: int) -> np.ndarray:
    return rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))


def random_morphism(rng, dom: HField, cod: HField, zero_prob: float = 0.0) -> HMorphism:
    """Gaussian fibers, each replaced by zero with probability ``zero_prob``."""
    mats = []
    for k, n in zip(dom.dims, cod.dims):
        a = random_matrix(rng, n, k)
        if rng.random() < zero_prob:
            a = np.zeros((n, k), dtype=complex)
        mats.append(a)
    return HMorphism(dom, cod, mats)


def random_base(rng, max_points: int = 5, min_points: int = 1) -> BaseSpace:
    n = int(rng.integers(min_points, max_points + 1))
    return BaseSpace(tuple("abcdefghijklmnopqrstuvwxyz"[:n]))


# --- JSON --------------------------------------------------------------------

def field_from_json(base: BaseSpace, doc: Mapping) -> HField:
    return HField(base, {str(k): int(v) for k, v in doc.items()})


def field_to_json(E: HField) -> dict:
    return {str(p): d for p, d in zip(E.base.points, E.dims)}


def matrix_from_json(rows) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in rows], dtype=complex)


def matrix_to_json(a: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in a]


def morphism_from_json(dom: HField, cod: HField, mats: Mapping) -> HMorphism:
    out = []
    for p, n, k in zip(dom.base.points, cod.dims, dom.dims):
        rows = mats.get(str(p))
        out.append(np.zeros((n, k), dtype=complex) if rows is None
                   else matrix_from_json(rows).reshape(n, k))
    return HMorphism(dom, cod, out)


def morphism_to_json(f: HMorphism) -> dict:
    return {str(p): matrix_to_json(a) for p, a in zip(f.base.points, f.mats)}


def solve_factorization(m: HMorphism, f: HMorphism, tol: float = TAU) -> tuple[HMorphism, float]:
    """Least-squares g with m after g close to f; returns g and the worst relative residual."""
    if m.cod != f.cod:
        raise DomainError("factorization target has the wrong codomain")
    gs, worst = [], 0.0
    for a, b in zip(m.mats, f.mats):
        if a.shape[1] == 0 or a.shape[0] == 0:
            g = np.zeros((a.shape[1], b.shape[1]), dtype=complex)
        else:
            g = np.linalg.lstsq(a, b, rcond=None)[0]
        res = fiber_norm(a @ g - b) / max(1.0, fiber_norm(b))
        worst = max(worst, res)
        gs.append(g)
    return HMorphism(f.dom, m.dom, gs), worst
