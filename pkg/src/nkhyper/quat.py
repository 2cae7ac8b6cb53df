"""Quaternion and 7-dimensional cross-product algebra.

Quaternions are stored as float64 arrays ``(w, x, y, z)``; the free functions
broadcast over leading axes. The small frozen classes at the bottom wrap a
single value for readable call sites and carry the construction invariants.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from ._kernels_py import CAYLEY_TRIPLES, EPS7

__all__ = [
    "CAYLEY_TRIPLES",
    "DomainError",
    "ImaginaryQuaternion",
    "Octonion7Vector",
    "Quaternion",
    "RNG_ALGORITHM",
    "UnitQuaternion",
    "conj",
    "cross7",
    "exp_im",
    "inverse",
    "log_unit",
    "mul",
    "norm",
    "random_tangent",
    "random_unit",
    "rng",
]

ONE = np.array([1.0, 0.0, 0.0, 0.0])
UNIT_TOL = 1e-12

# Version tag of the sampling scheme; bump when draws change.
RNG_ALGORITHM = "pcg64/seedsequence-spawn-key/v1"


class DomainError(ValueError):
    """Input outside the domain of an operation."""


def mul(a, b):
    """Hamilton product, broadcasting over leading axes."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    shape = np.broadcast_shapes(a.shape, b.shape)
    a2 = np.ascontiguousarray(np.broadcast_to(a, shape).reshape(-1, 4))
    b2 = np.ascontiguousarray(np.broadcast_to(b, shape).reshape(-1, 4))
    return kernels.qmul(a2, b2).reshape(shape)


def conj(a):
    a = np.asarray(a, dtype=float)
    return a * np.array([1.0, -1.0, -1.0, -1.0])


def norm(a):
    return np.linalg.norm(np.asarray(a, dtype=float), axis=-1)


def inverse(a):
    a = np.asarray(a, dtype=float)
    n2 = np.sum(a * a, axis=-1, keepdims=True)
    if np.any(n2 == 0.0):
        raise DomainError("inverse of the zero quaternion")
    return conj(a) / n2


def dot(a, b):
    """Euclidean R^4 inner product (the product metric on each factor)."""
    return np.sum(np.asarray(a) * np.asarray(b), axis=-1)


def _sinc(r):
    small = r < 1e-4
    rs = np.where(small, 1.0, r)
    return np.where(small, 1.0 - r * r / 6.0, np.sin(rs) / rs)


def exp_im(v):
    """exp of an imaginary quaternion given as a 3-vector (or w=0 4-vector)."""
    v = np.asarray(v, dtype=float)
    if v.shape[-1] == 4:
        v = v[..., 1:]
    r = np.linalg.norm(v, axis=-1)
    out = np.empty(v.shape[:-1] + (4,))
    out[..., 0] = np.cos(r)
    out[..., 1:] = _sinc(r)[..., None] * v
    return out


def log_unit(q):
    """Inverse of ``exp_im`` on unit quaternions away from -1; returns 3-vectors."""
    q = np.asarray(q, dtype=float)
    s = np.linalg.norm(q[..., 1:], axis=-1)
    angle = np.arctan2(s, q[..., 0])
    small = s < 1e-12
    scale = np.where(small, 1.0, angle / np.where(small, 1.0, s))
    return scale[..., None] * q[..., 1:]


def cross7(a, b):
    """Vector cross product on Im(O) = R^7, broadcasting over leading axes."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    shape = np.broadcast_shapes(a.shape, b.shape)
    a2 = np.ascontiguousarray(np.broadcast_to(a, shape).reshape(-1, 7))
    b2 = np.ascontiguousarray(np.broadcast_to(b, shape).reshape(-1, 7))
    return kernels.cross7(a2, b2).reshape(shape)


def rng(seed, *counter):
    """Generator for sub-stream ``counter`` of master ``seed``.

    Sub-streams are keyed by counter rather than drawn in sequence, so the
    draw for sample i does not depend on evaluation order.
    """
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(c) for c in counter))
    return np.random.Generator(np.random.PCG64(ss))


def random_unit(gen, size=None):
    """Uniform point(s) on S^3: four normal deviates, normalised."""
    shape = (4,) if size is None else (size, 4)
    q = gen.standard_normal(shape)
    return q / np.linalg.norm(q, axis=-1, keepdims=True)


def random_tangent(p, gen):
    """Gaussian tangent vector at p in S^3 (projection of a normal draw)."""
    p = np.asarray(p, dtype=float)
    t = gen.standard_normal(p.shape)
    return t - dot(t, p)[..., None] * p


@dataclass(frozen=True)
class Quaternion:
    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def from_array(cls, a) -> Quaternion:
        w, x, y, z = (float(c) for c in a)
        return cls(w, x, y, z)

    def as_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return Quaternion.from_array(mul(self.as_array(), other.as_array()))
        return Quaternion.from_array(self.as_array() * float(other))

    __rmul__ = __mul__

    def __add__(self, other: Quaternion) -> Quaternion:
        return Quaternion.from_array(self.as_array() + other.as_array())

    def __sub__(self, other: Quaternion) -> Quaternion:
        return Quaternion.from_array(self.as_array() - other.as_array())

    def __neg__(self) -> Quaternion:
        return Quaternion.from_array(-self.as_array())

    def conj(self) -> Quaternion:
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def inverse(self) -> Quaternion:
        return Quaternion.from_array(inverse(self.as_array()))

    def norm(self) -> float:
        return float(norm(self.as_array()))

    def isclose(self, other: Quaternion, tol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(self.as_array() - other.as_array())) <= tol)


@dataclass(frozen=True)
class UnitQuaternion(Quaternion):
    """Quaternion with |q| = 1 checked at construction."""

    def __post_init__(self):
        if abs(self.norm() - 1.0) > UNIT_TOL:
            raise DomainError(f"not a unit quaternion (norm {self.norm()!r})")

    @classmethod
    def normalized(cls, q) -> UnitQuaternion:
        a = q.as_array() if isinstance(q, Quaternion) else np.asarray(q, dtype=float)
        n = np.linalg.norm(a)
        if n == 0.0:
            raise DomainError("cannot normalise the zero quaternion")
        return cls.from_array(a / n)


def ImaginaryQuaternion(x: float, y: float, z: float) -> Quaternion:
    """Quaternion with w = 0 exactly."""
    return Quaternion(0.0, float(x), float(y), float(z))


@dataclass(frozen=True)
class Octonion7Vector:
    c: tuple

    def __post_init__(self):
        if len(self.c) != 7:
            raise DomainError("an imaginary octonion has 7 components")

    @classmethod
    def basis(cls, i: int) -> Octonion7Vector:
        """Basis vector e_i, 1-based as in the Cayley table."""
        e = [0.0] * 7
        e[i - 1] = 1.0
        return cls(tuple(e))

    def as_array(self) -> np.ndarray:
        return np.array(self.c, dtype=float)

    def cross(self, other: Octonion7Vector) -> Octonion7Vector:
        return Octonion7Vector(tuple(cross7(self.as_array(), other.as_array())))


def structure_constants() -> np.ndarray:
    """The (7, 7, 7) tensor with (a x b)_k = eps[i, j, k] a_i b_j."""
    return EPS7.copy()
