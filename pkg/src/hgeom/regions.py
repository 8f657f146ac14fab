"""Distance to homogeneous subgroups and intrinsic cones, cylinders, paraboloids."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import as_points, dim_of, hom_norm, identity, inv, mul, omega, symplectic_matrix
from .errors import InvalidInputError
from .subgroups import Subgroup

# absolute slack on the non-strict inequalities defining regions
SLACK = 1e-12
REGION_TOL = 1e-12


def dist_to_subgroup(p, S: Subgroup, tol: float = 1e-9, method: str = "auto") -> np.ndarray | float:
    """d(p, S) = inf over s in S of ||p^{-1} s||.

    ``method="auto"`` uses the closed form for vertical S (the Euclidean
    distance from p' to S', since the vertical coordinate of s is free) and
    bisection for horizontal S.  ``method="bisection"`` forces the generic
    solver for either kind.
    """
    p = as_points(p)
    if dim_of(p) != S.n:
        raise InvalidInputError(f"point in H^{dim_of(p)} but subgroup in H^{S.n}")
    if method not in ("auto", "bisection"):
        raise InvalidInputError(f"unknown method {method!r}")
    if method == "auto" and not S.horizontal:
        h = p[..., :-1]
        out = np.linalg.norm(h - h @ S.projector, axis=-1)
    else:
        out = _bisect_distance(p.reshape(-1, p.shape[-1]), S, tol).reshape(p.shape[:-1])
    return float(out) if np.ndim(out) == 0 else out


def _bisect_distance(p: np.ndarray, S: Subgroup, tol: float) -> np.ndarray:
    """Bisection on r over the feasibility of {s in S : ||p^{-1} s|| <= r}.

    For s = (v, tau) with v in S' we need |p' - v| <= r and
    |tau - p_t - 2 omega(p', v)| <= r^2.

    * The first constraint restricts v to a ball in S' with center c (the
      orthogonal projection of p' onto S') and radius R = sqrt(r^2 - d0^2),
      d0 = |p' - c|.
    * Horizontal S forces tau = 0.  l(v) = p_t + 2 omega(p', v) is affine on
      S'.  Over the ball it ranges over [l(c) - R|g|, l(c) + R|g|] with
      g_j = 2 omega(p', b_j).  That interval meets [-r^2, r^2] iff
      |l(c)| - R|g| <= r^2.
    * Vertical S leaves tau free, so only r >= d0 is needed.

    Feasibility is monotone in r. Bracket [0, ||p||] is valid since e is in S.
    Returns the upper (feasible) end, within ``tol`` of the infimum.
    """
    h = p[:, :-1]
    t = p[:, -1]
    P = S.projector
    c = h @ P
    d0sq = np.sum((h - c) ** 2, axis=1)
    if S.horizontal:
        ell0 = t + 2.0 * omega(h, c)
        if S.dim_h:
            g = 2.0 * (h @ symplectic_matrix(S.n) @ S.basis.T)
            gnorm = np.linalg.norm(g, axis=1)
        else:
            gnorm = np.zeros(len(p))
    else:
        ell0 = np.zeros(len(p))
        gnorm = np.full(len(p), np.inf)

    def feasible(r):
        R2 = r * r - d0sq
        R = np.sqrt(np.maximum(R2, 0.0))
        with np.errstate(invalid="ignore"):
            reach = np.where(R > 0, R * gnorm, 0.0)
        return (R2 >= 0) & (np.abs(ell0) - reach <= r * r)

    lo = np.zeros(len(p))
    hi = np.asarray(hom_norm(p), dtype=float).reshape(-1)
    hi = np.where(feasible(lo), 0.0, hi)
    top = float(hi.max()) if len(hi) else 0.0
    if top > 0:
        iters = min(200, math.ceil(math.log2(top / tol)) + 1) if top > tol else 1
        for _ in range(iters):
            mid = 0.5 * (lo + hi)
            ok = feasible(mid)
            hi = np.where(ok, mid, hi)
            lo = np.where(ok, lo, mid)
    return hi


def _check_unit_interval(name, value, closed_right=False):
    ok = 0 < value <= 1 if closed_right else 0 < value < 1
    if not ok:
        bracket = "(0, 1]" if closed_right else "(0, 1)"
        raise InvalidInputError(f"{name} must lie in {bracket}, got {value}")


def _point(p, n) -> np.ndarray:
    arr = identity(n) if p is None else as_points(p).astype(float)
    if arr.shape != (2 * n + 1,):
        raise InvalidInputError(f"expected a point of H^{n}")
    return arr


class Region:
    """Base class; subclasses implement ``margin`` (>= 0 inside, up to SLACK)."""

    def margin(self, p) -> np.ndarray | float:  # pragma: no cover - abstract
        raise NotImplementedError

    def contains(self, p):
        m = self.margin(p)
        out = np.asarray(m) >= -SLACK
        return bool(out) if out.ndim == 0 else out

    def to_json(self) -> dict:  # pragma: no cover - abstract
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class Cone(Region):
    """X(vertex, axis, aperture) = {p : d(vertex^{-1} p, axis) <= aperture d(p, vertex)}."""

    vertex: np.ndarray
    axis: Subgroup
    aperture: float

    def __post_init__(self):
        object.__setattr__(self, "vertex", _point(self.vertex, self.axis.n))
        _check_unit_interval("aperture", self.aperture)

    def margin(self, p):
        rel = mul(inv(self.vertex), as_points(p))
        return self.aperture * np.asarray(hom_norm(rel)) - np.asarray(
            dist_to_subgroup(rel, self.axis, tol=REGION_TOL)
        )

    def to_json(self) -> dict:
        return {"type": "cone", "vertex": self.vertex.tolist(), "axis": self.axis.to_json(), "aperture": self.aperture}


@dataclass(frozen=True, eq=False)
class TruncatedCone(Cone):
    """X(vertex, radius, axis, aperture) = X(vertex, axis, aperture) intersected with B(vertex, radius)."""

    radius: float = 1.0

    def __post_init__(self):
        super().__post_init__()
        if not self.radius > 0:
            raise InvalidInputError("radius must be positive")

    def margin(self, p):
        rel = mul(inv(self.vertex), as_points(p))
        nrm = np.asarray(hom_norm(rel))
        cone = self.aperture * nrm - np.asarray(dist_to_subgroup(rel, self.axis, tol=REGION_TOL))
        return np.minimum(cone, self.radius - nrm)

    def to_json(self) -> dict:
        return {**super().to_json(), "type": "truncated_cone", "radius": self.radius}


@dataclass(frozen=True, eq=False)
class Cylinder(Region):
    """N(center . axis, width) = {p : d(p, center . axis) <= width}; center defaults to e."""

    axis: Subgroup
    width: float
    center: np.ndarray = None

    def __post_init__(self):
        object.__setattr__(self, "center", _point(self.center, self.axis.n))
        if not self.width > 0:
            raise InvalidInputError("width must be positive")

    def margin(self, p):
        rel = mul(inv(self.center), as_points(p))
        return self.width - np.asarray(dist_to_subgroup(rel, self.axis, tol=REGION_TOL))

    def to_json(self) -> dict:
        return {"type": "cylinder", "axis": self.axis.to_json(), "width": self.width, "center": self.center.tolist()}


@dataclass(frozen=True, eq=False)
class Paraboloid(Region):
    """Q_alpha(center, base, lam) = {y : d(center^{-1} y, base) <= lam d(center, y)^(1+alpha)}."""

    center: np.ndarray
    base: Subgroup
    lam: float
    alpha: float

    def __post_init__(self):
        object.__setattr__(self, "center", _point(self.center, self.base.n))
        if not self.lam > 0:
            raise InvalidInputError("lambda must be positive")
        _check_unit_interval("alpha", self.alpha, closed_right=True)

    def margin(self, p):
        rel = mul(inv(self.center), as_points(p))
        nrm = np.asarray(hom_norm(rel))
        return self.lam * nrm ** (1.0 + self.alpha) - np.asarray(dist_to_subgroup(rel, self.base, tol=REGION_TOL))

    def to_json(self) -> dict:
        return {
            "type": "paraboloid",
            "center": self.center.tolist(),
            "base": self.base.to_json(),
            "lambda": self.lam,
            "alpha": self.alpha,
        }


def region_contains(region: Region, p):
    return region.contains(p)


def region_from_json(obj: dict) -> Region:
    kind = obj.get("type")
    if kind == "cone":
        return Cone(obj["vertex"], Subgroup.from_json(obj["axis"]), float(obj["aperture"]))
    if kind == "truncated_cone":
        return TruncatedCone(
            obj["vertex"], Subgroup.from_json(obj["axis"]), float(obj["aperture"]), float(obj["radius"])
        )
    if kind == "cylinder":
        return Cylinder(Subgroup.from_json(obj["axis"]), float(obj["width"]), obj.get("center"))
    if kind == "paraboloid":
        return Paraboloid(obj["center"], Subgroup.from_json(obj["base"]), float(obj["lambda"]), float(obj["alpha"]))
    raise InvalidInputError(f"unknown region type {kind!r}")
