"""Group law, dilations and the homogeneous metric of the Heisenberg group H^n.

Points are stored in exponential coordinates as arrays whose last axis has
length 2n+1: the first 2n entries are the horizontal part p', the last one is
the vertical coordinate t.  Every function broadcasts over leading axes, so a
batch of points is simply an array of shape (N, 2n+1).

Sign convention for the symplectic form (used everywhere in the package)::

    omega(a, b) = sum_i a[i+n] * b[i] - a[i] * b[i+n]

so that p.q = (p' + q', p_t + q_t + 2 omega(p', q')).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidInputError


def dim_of(p) -> int:
    """Return n for a point (or batch of points) with last axis 2n+1."""
    m = np.shape(p)[-1]
    if m < 3 or m % 2 == 0:
        raise InvalidInputError(f"coordinate length {m} is not of the form 2n+1 with n >= 1")
    return (m - 1) // 2


def as_points(p) -> np.ndarray:
    """Coerce HPoint / sequences to a float array with last axis 2n+1."""
    if isinstance(p, HPoint):
        return p.coords
    arr = np.asarray(p, dtype=float)
    if arr.ndim == 0:
        raise InvalidInputError("a point needs 2n+1 coordinates")
    dim_of(arr)
    return arr


def _same_dim(p: np.ndarray, q: np.ndarray) -> int:
    n = dim_of(p)
    if dim_of(q) != n:
        raise InvalidInputError(f"dimension mismatch: H^{n} vs H^{dim_of(q)}")
    return n


def symplectic_matrix(n: int) -> np.ndarray:
    """J with omega(a, b) = a @ J @ b."""
    J = np.zeros((2 * n, 2 * n))
    J[n:, :n] = np.eye(n)
    J[:n, n:] = -np.eye(n)
    return J


def omega(a, b) -> np.ndarray | float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape[-1] != b.shape[-1] or a.shape[-1] % 2:
        raise InvalidInputError(f"omega needs two vectors of equal even length, got {a.shape[-1]} and {b.shape[-1]}")
    n = a.shape[-1] // 2
    out = np.sum(a[..., n:] * b[..., :n] - a[..., :n] * b[..., n:], axis=-1)
    return float(out) if np.ndim(out) == 0 else out


def mul(p, q) -> np.ndarray:
    p = as_points(p)
    q = as_points(q)
    _same_dim(p, q)
    hp, hq = p[..., :-1], q[..., :-1]
    horiz = hp + hq
    vert = p[..., -1] + q[..., -1] + 2.0 * np.asarray(omega(hp, hq))
    return np.concatenate([horiz, vert[..., None]], axis=-1)


def inv(p) -> np.ndarray:
    return -as_points(p)


def dilate(r: float, p) -> np.ndarray:
    p = as_points(p)
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise InvalidInputError("dilation factor must be positive")
    out = p.copy()
    out[..., :-1] = out[..., :-1] * r[..., None] if r.ndim else out[..., :-1] * r
    out[..., -1] = out[..., -1] * r**2
    return out


def hom_norm(p) -> np.ndarray | float:
    """max(|p'|, |t|^(1/2))."""
    p = as_points(p)
    h = p[..., :-1]
    scale = np.max(np.abs(h), axis=-1, initial=0.0)
    safe = np.where(scale > 0, scale, 1.0)
    # rescaled so tiny coordinates do not underflow when squared
    horiz = scale * np.linalg.norm(h / safe[..., None], axis=-1)
    out = np.maximum(horiz, np.sqrt(np.abs(p[..., -1])))
    return float(out) if np.ndim(out) == 0 else out


def dist(p, q) -> np.ndarray | float:
    """Left-invariant distance d(p, q) = ||q^{-1} p||."""
    return hom_norm(mul(inv(q), p))


def identity(n: int) -> np.ndarray:
    return np.zeros(2 * n + 1)


@dataclass(frozen=True)
class HPoint:
    """A single point of H^n; thin immutable wrapper around a coordinate array."""

    horiz: tuple[float, ...]
    vert: float

    def __post_init__(self):
        h = tuple(float(x) for x in self.horiz)
        if len(h) == 0 or len(h) % 2:
            raise InvalidInputError("horizontal part must have 2n entries, n >= 1")
        if not all(np.isfinite(h)) or not np.isfinite(self.vert):
            raise InvalidInputError("coordinates must be finite")
        object.__setattr__(self, "horiz", h)
        object.__setattr__(self, "vert", float(self.vert))

    @classmethod
    def from_array(cls, coords: Sequence[float]) -> "HPoint":
        arr = as_points(coords)
        if arr.ndim != 1:
            raise InvalidInputError("expected a single point")
        return cls(tuple(arr[:-1]), float(arr[-1]))

    from_json = from_array

    @classmethod
    def identity(cls, n: int) -> "HPoint":
        return cls((0.0,) * (2 * n), 0.0)

    @property
    def n(self) -> int:
        return len(self.horiz) // 2

    @property
    def coords(self) -> np.ndarray:
        return np.array(self.horiz + (self.vert,))

    def to_json(self) -> list[float]:
        return list(self.horiz) + [self.vert]

    def __mul__(self, other: "HPoint") -> "HPoint":
        return HPoint.from_array(mul(self, other))

    def inverse(self) -> "HPoint":
        return HPoint.from_array(inv(self))

    def dilate(self, r: float) -> "HPoint":
        return HPoint.from_array(dilate(r, self))

    def norm(self) -> float:
        return hom_norm(self)

    def dist(self, other: "HPoint") -> float:
        return dist(self, other)
