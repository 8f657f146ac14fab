"""Fitting approximate tangent subgroups to sampled sets.

The score of a Grassmannian element V at p is the normalized out-of-cone mass
r^{-k_m} * mass(B(p, r) minus X(p, V, s)) over a decreasing radius schedule.
It is piecewise constant in V on finite samples, so the search is
derivative-free: random isotropic frames, then small unitary perturbations.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .algebra import as_points, dim_of, hom_norm, inv, mul
from .errors import InsufficientDataError, InvalidInputError
from .measure import PointCloud, _check_radii
from .regions import REGION_TOL, SLACK, dist_to_subgroup
from .subgroups import (
    Subgroup,
    admissible_k,
    grassmannian_from_frame,
    random_isotropic_frame,
)

CONVERGENCE_THRESHOLD = 0.05
MIN_BALL_POINTS = 10


@dataclass
class TangentReport:
    point: np.ndarray
    best_subgroup: Subgroup | None
    scores: list = field(default_factory=list)  # (radius, aperture, normalized out-of-cone mass)
    converged: bool = False
    evaluations: int = 0
    error: str | None = None

    @property
    def objective(self) -> float:
        return float(sum(m for _, _, m in self.scores))

    def to_json(self) -> dict:
        return {
            "point": np.asarray(self.point).tolist(),
            "best_subgroup": None if self.best_subgroup is None else self.best_subgroup.to_json(),
            "scores": [[float(r), float(s), float(m)] for r, s, m in self.scores],
            "converged": bool(self.converged),
            "evaluations": int(self.evaluations),
            "error": self.error,
        }


class _LocalData:
    """Points of B(p, radii[0]) translated to the origin, with their norms and weights."""

    def __init__(self, cloud: PointCloud, p: np.ndarray, radii: np.ndarray):
        idx = cloud.ball(p, radii[0])
        self.rel = mul(inv(p), cloud.points[idx])
        self.norm = np.asarray(hom_norm(self.rel), dtype=float).reshape(-1)
        self.weights = cloud.weights[idx]
        self.radii = radii
        self.inside = [self.norm <= r for r in radii]

    def __len__(self) -> int:
        return len(self.rel)

    def evaluate(self, V: Subgroup, s: float):
        """Return (normalized masses per radius, mean relative distance at the smallest radius)."""
        d = np.asarray(dist_to_subgroup(self.rel, V, tol=REGION_TOL), dtype=float).reshape(-1)
        out = d > s * self.norm + SLACK
        masses = np.array(
            [self.weights[ins & out].sum() / r**V.k_m for r, ins in zip(self.radii, self.inside)]
        )
        near = self.inside[-1] & (self.norm > 0)
        spread = float(np.mean(d[near] / self.norm[near])) if near.any() else 0.0
        return masses, spread


def tangent_score(cloud: PointCloud, p, V: Subgroup, s: float, radii) -> np.ndarray:
    """Normalized out-of-cone mass of ``cloud`` around p for each radius."""
    radii = _check_radii(radii)
    if not 0 < s < 1:
        raise InvalidInputError("aperture must lie in (0, 1)")
    return _LocalData(cloud, as_points(p), radii).evaluate(V, s)[0]


def _frame_dim(n: int, k: int) -> int:
    return k if k <= n else 2 * n + 1 - k


def _unitary_step(n: int, eps: float, rng: np.random.Generator) -> np.ndarray:
    """exp(eps A) with A = [[X, -Y], [Y, X]], X skew and Y symmetric.

    Such A commute with J, so the step is orthogonal and symplectic and maps
    isotropic frames to isotropic frames.
    """
    G = rng.standard_normal((n, n))
    H = rng.standard_normal((n, n))
    X = (G - G.T) / 2
    Y = (H + H.T) / 2
    A = np.block([[X, -Y], [Y, X]])
    A /= max(np.linalg.norm(A), 1e-12)
    return expm(eps * A)


def fit_tangent(
    cloud: PointCloud,
    p,
    k: int,
    s: float,
    radii,
    budget: int = 200,
    seed: int = 0,
    threshold: float = CONVERGENCE_THRESHOLD,
) -> TangentReport:
    """Search G(H^n, k) for the subgroup minimizing the summed out-of-cone score at p.

    Candidates are compared lexicographically: first the summed normalized
    out-of-cone mass, then the mean of d(p^{-1}q, V) / d(p, q) over the
    smallest ball.  The second key breaks the large ties of the piecewise
    constant first key and pulls the estimate towards the data.
    """
    radii = _check_radii(radii)
    if not 0 < s < 1:
        raise InvalidInputError("aperture must lie in (0, 1)")
    if budget < 1:
        raise InvalidInputError("budget must be >= 1")
    p = as_points(p)
    n = dim_of(p)
    if n != cloud.n:
        raise InvalidInputError("point and cloud live in different H^n")
    if not admissible_k(n, k):
        raise InvalidInputError(f"k={k} is not admissible for H^{n}")
    data = _LocalData(cloud, p, radii)
    if len(data) < MIN_BALL_POINTS:
        raise InsufficientDataError(
            f"only {len(data)} cloud points within radius {radii[0]} of the query point (need {MIN_BALL_POINTS})"
        )
    rng = np.random.default_rng(seed)
    m = _frame_dim(n, k)

    def score(frame):
        V = grassmannian_from_frame(n, k, frame)
        masses, spread = data.evaluate(V, s)
        return (float(masses.sum()), spread), V, masses

    restarts = max(1, budget // 4)
    best = None
    evals = 0
    for _ in range(restarts):
        frame = random_isotropic_frame(n, m, rng)
        key, V, masses = score(frame)
        evals += 1
        if best is None or key < best[0]:
            best = (key, V, masses, frame)
    steps = budget - restarts
    eps0, eps1 = 0.3, 1e-4
    for i in range(steps):
        eps = eps0 * (eps1 / eps0) ** (i / max(steps - 1, 1))
        frame = best[3] @ _unitary_step(n, eps, rng).T
        key, V, masses = score(frame)
        evals += 1
        if key < best[0]:
            best = (key, V, masses, frame)
    _, V, masses, _ = best
    scores = [(float(r), float(s), float(mm)) for r, mm in zip(radii, masses)]
    return TangentReport(p, V, scores, bool(masses[-1] <= threshold), evals)


def classify_cloud(
    cloud: PointCloud,
    k: int,
    s: float,
    radii,
    sample_count: int,
    seed: int = 0,
    budget: int = 200,
    threads: int = 1,
) -> list[TangentReport]:
    """Run fit_tangent at ``sample_count`` support points chosen with ``seed``.

    Each point gets its own RNG stream spawned from the seed, so the result
    does not depend on ``threads``.  Insufficient-data failures are recorded
    in the report instead of aborting the batch.
    """
    radii = _check_radii(radii)
    if not 0 < sample_count <= len(cloud):
        raise InvalidInputError("sample_count must be between 1 and the number of cloud points")
    ss = np.random.SeedSequence(seed)
    pick_seq, *point_seqs = ss.spawn(sample_count + 1)
    idx = np.sort(np.random.default_rng(pick_seq).choice(len(cloud), size=sample_count, replace=False))
    _ = cloud.tree if len(cloud) >= 2000 else None  # build the shared index once

    def one(j):
        p = cloud.points[idx[j]]
        point_seed = int(point_seqs[j].generate_state(1)[0])
        try:
            return fit_tangent(cloud, p, k, s, radii, budget=budget, seed=point_seed)
        except InsufficientDataError as exc:
            return TangentReport(p, None, [], False, 0, str(exc))

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(one, range(sample_count)))
    return [one(j) for j in range(sample_count)]
