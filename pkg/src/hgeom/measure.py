"""Empirical measures on H^n: point clouds, ball queries, covers and densities."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np
from scipy import sparse

from .algebra import as_points, dim_of, hom_norm, inv, mul
from .errors import GrassmannianError, InvalidInputError
from .regions import REGION_TOL, SLACK, dist_to_subgroup
from .subgroups import Subgroup, is_in_grassmannian

BRUTE_FORCE_BELOW = 2000


def distances_to(points: np.ndarray, center) -> np.ndarray:
    """d(x, center) for every row x of ``points``."""
    return np.asarray(hom_norm(mul(inv(as_points(center)), points)), dtype=float).reshape(-1)


class MetricTree:
    """Vantage-point tree over the homogeneous distance.

    The homogeneous max-norm distance is a genuine metric, so the usual
    triangle-inequality pruning is exact.  Leaves are scanned vectorized.
    """

    def __init__(self, points: np.ndarray, leaf_size: int = 48, seed: int = 0):
        self.points = np.asarray(points, dtype=float)
        self.leaf_size = leaf_size
        rng = np.random.default_rng(seed)
        # node: (vantage, mu, inside, outside, leaf_indices)
        self.nodes: list[tuple] = []
        self.root = self._build(np.arange(len(self.points)), rng) if len(self.points) else None

    def _build(self, idx: np.ndarray, rng) -> int:
        node_id = len(self.nodes)
        self.nodes.append(None)
        if len(idx) <= self.leaf_size:
            self.nodes[node_id] = (-1, 0.0, -1, -1, idx)
            return node_id
        j = int(rng.integers(len(idx)))
        vp = int(idx[j])
        rest = np.delete(idx, j)
        d = distances_to(self.points[rest], self.points[vp])
        mu = float(np.median(d))
        inside, outside = rest[d <= mu], rest[d > mu]
        if len(outside) == 0:
            self.nodes[node_id] = (-1, 0.0, -1, -1, idx)
            return node_id
        left = self._build(inside, rng)
        right = self._build(outside, rng)
        self.nodes[node_id] = (vp, mu, left, right, None)
        return node_id

    def query_ball(self, center, radius: float) -> np.ndarray:
        """Sorted indices of points x with d(x, center) <= radius."""
        if self.root is None:
            return np.zeros(0, dtype=int)
        center = as_points(center)
        eps = 1e-12 * (1.0 + radius)
        found = []
        stack = [self.root]
        while stack:
            vp, mu, left, right, leaf = self.nodes[stack.pop()]
            if leaf is not None:
                d = distances_to(self.points[leaf], center)
                found.append(leaf[d <= radius])
                continue
            d = float(distances_to(self.points[vp : vp + 1], center)[0])
            if d <= radius:
                found.append(np.array([vp]))
            if d - radius <= mu + eps:
                stack.append(left)
            if d + radius > mu - eps:
                stack.append(right)
        return np.sort(np.concatenate(found)) if found else np.zeros(0, dtype=int)


@dataclass(eq=False)
class PointCloud:
    """Weighted sample standing in for H^{k_m} restricted to a set E."""

    points: np.ndarray
    weights: np.ndarray
    n: int
    k_m: int
    total_mass: float
    generator: str = "unknown"
    seed: int = 0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.size == 0:
            pts = np.zeros((0, 2 * self.n + 1))
        pts = np.atleast_2d(pts)
        if pts.shape[1] != 2 * self.n + 1:
            raise InvalidInputError(f"points must have {2 * self.n + 1} coordinates")
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        if len(w) != len(pts):
            raise InvalidInputError("one weight per point required")
        if np.any(w < 0) or not np.all(np.isfinite(pts)):
            raise InvalidInputError("weights must be nonnegative and points finite")
        if len(w) and not np.isclose(w.sum(), self.total_mass, rtol=1e-9, atol=0.0):
            raise InvalidInputError(f"weights sum to {w.sum()} but total mass is {self.total_mass}")
        pts.setflags(write=False)
        w.setflags(write=False)
        self.points, self.weights = pts, w

    def __len__(self) -> int:
        return len(self.points)

    @cached_property
    def tree(self) -> MetricTree:
        return MetricTree(self.points, seed=self.seed)

    def ball(self, center, radius: float) -> np.ndarray:
        """Indices of cloud points within homogeneous distance ``radius`` of center."""
        if len(self) < BRUTE_FORCE_BELOW:
            return np.flatnonzero(distances_to(self.points, center) <= radius)
        return self.tree.query_ball(center, radius)

    def left_translate(self, g) -> "PointCloud":
        return PointCloud(
            mul(as_points(g), self.points), self.weights.copy(), self.n, self.k_m, self.total_mass,
            self.generator, self.seed, dict(self.meta),
        )

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k_m": self.k_m,
            "total_mass": self.total_mass,
            "points": self.points.tolist(),
            "weights": self.weights.tolist(),
            "generator": self.generator,
            "seed": self.seed,
            "meta": self.meta,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "PointCloud":
        return cls(
            np.asarray(obj["points"], dtype=float), np.asarray(obj["weights"], dtype=float), int(obj["n"]),
            int(obj["k_m"]), float(obj["total_mass"]), obj.get("generator", "unknown"), int(obj.get("seed", 0)),
            obj.get("meta", {}),
        )

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json()))

    @classmethod
    def load(cls, path) -> "PointCloud":
        return cls.from_json(json.loads(Path(path).read_text()))


# ---------------------------------------------------------------- covering estimate


def cover_diameters(cloud: PointCloud, delta: float) -> np.ndarray:
    """Diameters of the pieces of a greedy delta-cover of the cloud support.

    Repeatedly picks the unprocessed point with the most unprocessed
    neighbours within ``delta``.  It grows a piece from that point by adding
    neighbours (nearest first) while the piece diameter stays <= delta.
    """
    if not delta > 0:
        raise InvalidInputError("delta must be positive")
    N = len(cloud)
    if N == 0:
        return np.zeros(0)
    pts = cloud.points
    rows, cols, dists = [], [], []
    chunk = max(1, 500_000 // max(N, 1))
    for start in range(0, N, chunk):
        block = pts[start : start + chunk]
        # d(x_j, y_i) = ||y_i^{-1} x_j|| for the whole block at once
        d = np.asarray(hom_norm(mul(inv(block)[:, None, :], pts[None, :, :])))
        r, c = np.nonzero(d <= delta)
        rows.append(r + start)
        cols.append(c)
        dists.append(d[r, c])
    rows, cols, dists = np.concatenate(rows), np.concatenate(cols), np.concatenate(dists)
    adj = sparse.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(N, N))
    dmat = sparse.csr_matrix((dists + 1.0, (rows, cols)), shape=(N, N))  # +1 keeps zero distances stored

    todo = np.ones(N, dtype=bool)
    diams = []
    while todo.any():
        counts = adj @ todo.astype(float)
        counts[~todo] = -1.0
        c = int(np.argmax(counts))
        row = dmat.getrow(c)
        nb, nd = row.indices, row.data - 1.0
        keep = todo[nb] & (nb != c)
        nb = nb[keep][np.argsort(nd[keep], kind="stable")]
        piece = [c]
        diam = 0.0
        if len(nb):
            cand = pts[nb]
            # max distance from each candidate to the current piece
            reach = np.sort(nd[keep], kind="stable")
            ok = reach <= delta
            while ok.any():
                j = int(np.argmax(ok))  # nearest still-compatible candidate
                diam = max(diam, float(reach[j]))
                piece.append(int(nb[j]))
                ok[j] = False
                live = np.flatnonzero(ok)
                reach[live] = np.maximum(reach[live], distances_to(cand[live], cand[j]))
                ok[live] = reach[live] <= delta
        diams.append(diam)
        todo[piece] = False
    return np.asarray(diams)


def cover_measure(cloud: PointCloud, k: float, delta: float) -> float:
    """Greedy upper estimate of H^k_delta for the finite support of ``cloud``.

    Charges 2^{-k} diam^k per piece of :func:`cover_diameters`; singletons
    cost 0.  Only meaningful for comparisons across scales on one cloud, at
    scales well above the sample spacing.
    """
    if not k > 0:
        raise InvalidInputError("k must be positive")
    d = cover_diameters(cloud, delta)
    return float(np.sum(2.0 ** (-k) * d**k))


# ---------------------------------------------------------------- densities


@dataclass
class DensityReport:
    """Finite-scale proxies for the upper/lower k_m-densities (no r -> 0 limit is taken)."""

    point: np.ndarray
    radii: np.ndarray
    ball_mass: np.ndarray
    k_m: int
    upper_density: float
    lower_density: float

    @property
    def normalized(self) -> np.ndarray:
        return self.ball_mass / self.radii**self.k_m

    def csv_rows(self, point_index: int = 0) -> list[tuple]:
        return [
            (point_index, float(r), float(m), float(v))
            for r, m, v in zip(self.radii, self.ball_mass, self.normalized)
        ]

    def to_json(self) -> dict:
        return {
            "point": np.asarray(self.point).tolist(),
            "radii": self.radii.tolist(),
            "ball_mass": self.ball_mass.tolist(),
            "k_m": self.k_m,
            "upper_density_proxy": self.upper_density,
            "lower_density_proxy": self.lower_density,
        }


def _check_radii(radii) -> np.ndarray:
    radii = np.asarray(radii, dtype=float).reshape(-1)
    if len(radii) == 0:
        raise InvalidInputError("radius schedule is empty")
    if np.any(radii <= 0) or np.any(np.diff(radii) >= 0):
        raise InvalidInputError("radii must be positive and strictly decreasing")
    return radii


def density_at(cloud: PointCloud, p, k_m: int, radii) -> DensityReport:
    radii = _check_radii(radii)
    p = as_points(p)
    if len(cloud):
        idx = cloud.ball(p, radii[0])
        d = distances_to(cloud.points[idx], p)
        w = cloud.weights[idx]
        mass = np.array([w[d <= r].sum() for r in radii])
    else:
        mass = np.zeros(len(radii))
    ratio = mass / radii**k_m
    return DensityReport(p, radii, mass, k_m, float(ratio.max()), float(ratio.min()))


def out_of_cone_mass(
    cloud: PointCloud, p, V: Subgroup, s: float, r: float, normalized: bool = False
) -> float:
    """Mass of cloud points q in B(p, r) outside X(p, V, s), optionally divided by r^{k_m(V)}."""
    if not is_in_grassmannian(V):
        raise GrassmannianError("cone axis must lie in the intrinsic Grassmannian")
    if not 0 < s < 1 or not r > 0:
        raise InvalidInputError("need 0 < s < 1 and r > 0")
    p = as_points(p)
    if dim_of(p) != cloud.n:
        raise InvalidInputError("point and cloud live in different H^n")
    idx = cloud.ball(p, r)
    rel = mul(inv(p), cloud.points[idx])
    out = np.asarray(dist_to_subgroup(rel, V, tol=REGION_TOL)) > s * np.asarray(hom_norm(rel)) + SLACK
    mass = float(cloud.weights[idx][out].sum())
    return mass / r**V.k_m if normalized else mass
