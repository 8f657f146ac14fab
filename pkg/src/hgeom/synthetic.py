"""Ground-truth sample clouds: subgroup cosets, intrinsic graphs, balls and IFS fractals.

Every generator is a pure function of its arguments and seed.
"""
from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from .algebra import as_points, dilate, dim_of, identity, mul
from .errors import InvalidInputError
from .measure import PointCloud
from .subgroups import SplitPair, Subgroup


def _uniform_ball(dim: int, count: int, radius: float, rng: np.random.Generator) -> np.ndarray:
    """Uniform points in the Euclidean ``dim``-ball, by rejection from the bounding cube."""
    if dim == 0:
        return np.zeros((count, 0))
    out = np.zeros((0, dim))
    while len(out) < count:
        batch = rng.uniform(-radius, radius, size=(2 * (count - len(out)) + 16, dim))
        out = np.vstack([out, batch[np.sum(batch**2, axis=1) <= radius**2]])
    return out[:count]


def sample_in_subgroup(S: Subgroup, count: int, radius: float, rng: np.random.Generator) -> np.ndarray:
    """Haar-uniform points of S inside the homogeneous ball B(e, radius).

    Horizontal S: Lebesgue on the disc {|v| <= radius} of S'.  Vertical S: the
    Haar measure is Lebesgue on (S' coordinates) x (vertical coordinate) and
    the ball is exactly {|v| <= radius} x [-radius^2, radius^2].
    """
    coords = _uniform_ball(S.dim_h, count, radius, rng)
    pts = np.zeros((count, 2 * S.n + 1))
    if S.dim_h:
        pts[:, :-1] = coords @ S.basis
    if not S.horizontal:
        pts[:, -1] = rng.uniform(-radius**2, radius**2, size=count)
    return pts


def sample_subgroup(S: Subgroup, base=None, count: int = 10_000, box_radius: float = 1.0, seed: int = 0) -> PointCloud:
    """Uniform sample of the coset base . S within B(base, box_radius); total mass box_radius^{k_m}."""
    if count < 1 or not box_radius > 0:
        raise InvalidInputError("count must be >= 1 and box_radius > 0")
    base = identity(S.n) if base is None else as_points(base)
    rng = np.random.default_rng(seed)
    pts = mul(base, sample_in_subgroup(S, count, box_radius, rng))
    mass = float(box_radius**S.k_m)
    meta = {"subgroup": S.to_json(), "base": base.tolist(), "box_radius": box_radius}
    return PointCloud(pts, np.full(count, mass / count), S.n, S.k_m, mass, "subgroup", seed, meta)


def sample_ball(n: int, count: int = 10_000, radius: float = 1.0, k_m: int = 3, seed: int = 0) -> PointCloud:
    """Lebesgue-uniform sample of the homogeneous ball B(e, radius) in H^n.

    Mass is spread over a full-dimensional set, so no subgroup is tangent
    anywhere.  Total mass is declared as radius^{k_m} to sit on the same scale
    as subgroup samples of metric dimension k_m.
    """
    rng = np.random.default_rng(seed)
    pts = np.zeros((count, 2 * n + 1))
    pts[:, :-1] = _uniform_ball(2 * n, count, radius, rng)
    pts[:, -1] = rng.uniform(-radius**2, radius**2, size=count)
    mass = float(radius**k_m)
    meta = {"radius": radius, "note": "full-dimensional ball; negative control for tangent fitting"}
    return PointCloud(pts, np.full(count, mass / count), n, k_m, mass, "ball", seed, meta)


# ---------------------------------------------------------------- intrinsic graphs

GRAPH_FAMILIES = ("constant", "linear", "smooth")


def graph_map(pair: SplitPair, phi: dict):
    """Build phi: W -> V from a descriptor {"family": ..., **params}.

    * constant: {"value": [c_1..c_m]} -> phi(w) = sum c_j b_j (V basis b_j)
    * linear:   {"matrix": m x dim W'} or {"slope": a} -> phi(w) = L (W'-coordinates of w)
      (``slope`` maps the first W' coordinate to the first V direction)
    * smooth:   {"amplitude": a, "frequency": f} -> first V coordinate
      a sin(f (y_1 + t)), y_1 the first W' coordinate; sup norm a
    """
    family = phi.get("family")
    V, W = pair.V, pair.W
    m = V.dim_h
    if family == "constant":
        c = np.asarray(phi.get("value", np.zeros(m)), dtype=float).reshape(m)
        return lambda wc, t: np.tile(c, (len(wc), 1))
    if family == "linear":
        if "matrix" in phi:
            L = np.asarray(phi["matrix"], dtype=float).reshape(m, W.dim_h)
        else:
            L = np.zeros((m, W.dim_h))
            L[0, 0] = float(phi.get("slope", 0.1))
        return lambda wc, t: wc @ L.T
    if family == "smooth":
        a = float(phi.get("amplitude", 0.1))
        f = float(phi.get("frequency", 1.0))

        def smooth(wc, t):
            out = np.zeros((len(wc), m))
            out[:, 0] = a * np.sin(f * (wc[:, 0] + t))
            return out

        return smooth
    raise InvalidInputError(f"unknown graph family {family!r}; expected one of {GRAPH_FAMILIES}")


def sample_intrinsic_graph(
    pair: SplitPair,
    phi: dict,
    domain_radius: float = 1.0,
    count: int = 5000,
    seed: int = 0,
) -> PointCloud:
    """Points w . phi(w) for w Haar-uniform in W intersected with B(e, domain_radius)."""
    if count < 1 or not domain_radius > 0:
        raise InvalidInputError("count must be >= 1 and domain_radius > 0")
    fn = graph_map(pair, phi)
    rng = np.random.default_rng(seed)
    w = sample_in_subgroup(pair.W, count, domain_radius, rng)
    wc = w[:, :-1] @ pair.W.basis.T
    v = np.zeros_like(w)
    v[:, :-1] = fn(wc, w[:, -1]) @ pair.V.basis
    pts = mul(w, v)
    k_m = pair.W.k_m
    mass = float(domain_radius**k_m)
    meta = {
        "W": pair.W.to_json(),
        "V": pair.V.to_json(),
        "phi": dict(phi),
        "domain_radius": domain_radius,
    }
    if phi.get("family") == "smooth":
        meta["sup_norm"] = abs(float(phi.get("amplitude", 0.1)))
    return PointCloud(pts, np.full(count, mass / count), pair.n, k_m, mass, "graph", seed, meta)


# ---------------------------------------------------------------- self-similar sets


def similarity_dimension(ratios: Sequence[float]) -> float:
    """Solve sum r_i^d = 1."""
    r = np.asarray(ratios, dtype=float)
    if len(r) == 1:
        return 0.0
    return float(brentq(lambda d: np.sum(r**d) - 1.0, 0.0, 1e3))


def sample_ifs_fractal(maps, depth: int = 8, seed: int = 0, count: int = 4096) -> PointCloud:
    """Random depth-``depth`` compositions of the similarities p -> q_i . delta_{r_i}(p) applied to e.

    ``maps`` is a list of (q, r) with q a point and 0 < r < 1.  These sets are
    heuristic stand-ins for unrectifiable sets; no unrectifiability is claimed.
    """
    if not maps:
        raise InvalidInputError("IFS needs at least one map")
    qs = np.array([as_points(q) for q, _ in maps], dtype=float)
    rs = np.array([float(r) for _, r in maps])
    if np.any(rs <= 0) or np.any(rs >= 1):
        raise InvalidInputError("contraction ratios must lie in (0, 1)")
    n = dim_of(qs[0])
    rng = np.random.default_rng(seed)
    pts = np.zeros((count, 2 * n + 1))
    for _ in range(depth):
        i = rng.integers(len(maps), size=count)
        pts = mul(qs[i], dilate(rs[i], pts))
    d = similarity_dimension(rs)
    meta = {
        "maps": [[q.tolist(), float(r)] for q, r in zip(qs, rs)],
        "depth": depth,
        "similarity_dimension": d,
        "note": "heuristic unrectifiable-flavoured set",
    }
    k_m = max(1, int(round(d)))
    return PointCloud(pts, np.full(count, 1.0 / count), n, k_m, 1.0, "ifs", seed, meta)


def four_corner_ifs(n: int = 1, r: float = 0.5) -> list:
    """Maps with ratio r translating by +-e_1 and +-e_{n+1} (a symplectically paired direction pair)."""
    maps = []
    for axis in (0, n):
        for sgn in (1.0, -1.0):
            q = np.zeros(2 * n + 1)
            q[axis] = sgn
            maps.append((q, r))
    return maps
