"""Homogeneous subgroups, complementary splittings and the intrinsic Grassmannian.

A homogeneous subgroup of H^n is determined by its horizontal linear part
S' in R^{2n}:

* horizontal: S = {(v, 0) : v in S'} with S' isotropic for omega (abelian);
* vertical:   S = {(v, t) : v in S', t in R}, i.e. S' x center.

Bases are stored orthonormalized (rows of a (m, 2n) array).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy.linalg import null_space
from scipy.stats import norm as _gauss
from scipy.stats import qmc

from .algebra import as_points, dilate, dim_of, hom_norm, inv, mul, symplectic_matrix
from .errors import GrassmannianError, InvalidInputError, NotASubgroupError

HORIZONTAL = "horizontal"
VERTICAL = "vertical"

ORTHO_TOL = 1e-10
ISOTROPY_TOL = 1e-10
SPAN_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class Subgroup:
    kind: str
    basis: np.ndarray
    n: int

    def __post_init__(self):
        basis = np.array(self.basis, dtype=float).reshape(-1, 2 * self.n)
        basis.setflags(write=False)
        object.__setattr__(self, "basis", basis)

    @property
    def dim_h(self) -> int:
        """Dimension of the horizontal linear part S'."""
        return self.basis.shape[0]

    @property
    def k(self) -> int:
        """Topological dimension."""
        return self.dim_h if self.kind == HORIZONTAL else self.dim_h + 1

    @property
    def k_m(self) -> int:
        """Metric (Hausdorff) dimension."""
        return self.k if self.kind == HORIZONTAL else self.k + 1

    @property
    def horizontal(self) -> bool:
        return self.kind == HORIZONTAL

    @cached_property
    def projector(self) -> np.ndarray:
        """Orthogonal projector of R^{2n} onto S'."""
        return self.basis.T @ self.basis

    def membership_residual(self, p) -> np.ndarray | float:
        """Euclidean residual of p off S (0 iff p in S)."""
        p = as_points(p)
        h = p[..., :-1]
        res = np.linalg.norm(h - h @ self.projector, axis=-1)
        if self.horizontal:
            res = np.maximum(res, np.abs(p[..., -1]))
        return float(res) if np.ndim(res) == 0 else res

    def same_span(self, other: "Subgroup", tol: float = SPAN_TOL) -> bool:
        """Equal kind, n and span (largest principal angle below tol)."""
        if self.kind != other.kind or self.n != other.n or self.dim_h != other.dim_h:
            return False
        if self.dim_h == 0:
            return True
        # ||P1 - P2||_2 is the sine of the largest principal angle (stable near 0)
        return bool(np.linalg.norm(self.projector - other.projector, 2) <= tol)

    def to_json(self) -> dict:
        return {"kind": self.kind, "n": self.n, "basis": self.basis.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "Subgroup":
        return make_subgroup(obj["kind"], obj.get("basis", []), int(obj["n"]))

    def __repr__(self) -> str:
        return f"Subgroup({self.kind}, n={self.n}, k={self.k}, basis={self.basis.tolist()})"


def make_subgroup(kind: str, basis_vectors, n: int) -> Subgroup:
    if kind not in (HORIZONTAL, VERTICAL):
        raise InvalidInputError(f"unknown subgroup kind {kind!r}")
    if n < 1:
        raise InvalidInputError("n must be a positive integer")
    B = np.asarray(basis_vectors, dtype=float)
    if B.size == 0:
        B = np.zeros((0, 2 * n))
    B = np.atleast_2d(B)
    if B.shape[1] != 2 * n:
        raise InvalidInputError(f"basis vectors must have length {2 * n}")
    if not np.all(np.isfinite(B)):
        raise InvalidInputError("basis vectors must be finite")
    m = B.shape[0]
    if m:
        s = np.linalg.svd(B, compute_uv=False)
        if s[-1] <= 1e-10 * max(1.0, s[0]):
            raise InvalidInputError("basis vectors are linearly dependent")
        q, _ = np.linalg.qr(B.T)
        B = q.T
    if kind == HORIZONTAL and m:
        G = B @ symplectic_matrix(n) @ B.T
        if np.max(np.abs(G)) > ISOTROPY_TOL:
            raise NotASubgroupError(
                f"horizontal basis is not isotropic (max |omega| = {np.max(np.abs(G)):.3g})"
            )
    return Subgroup(kind, B, n)


def isotropy_residual(basis: np.ndarray) -> float:
    basis = np.atleast_2d(basis)
    if basis.shape[0] == 0:
        return 0.0
    n = basis.shape[1] // 2
    return float(np.max(np.abs(basis @ symplectic_matrix(n) @ basis.T)))


def complement(S: Subgroup) -> Subgroup:
    """Subgroup with the Euclidean orthocomplement of S' as horizontal part, kind flipped."""
    if S.dim_h == 0:
        perp = np.eye(2 * S.n)
    else:
        perp = null_space(S.basis).T
    if S.horizontal:
        return Subgroup(VERTICAL, perp, S.n)
    if isotropy_residual(perp) > ISOTROPY_TOL:
        raise GrassmannianError(
            "orthocomplement of this vertical subgroup is not isotropic; no orthogonal horizontal complement"
        )
    return Subgroup(HORIZONTAL, perp, S.n)


def is_complementary_pair(W: Subgroup, V: Subgroup) -> bool:
    if W.n != V.n or W.kind != VERTICAL or V.kind != HORIZONTAL:
        return False
    if W.dim_h + V.dim_h != 2 * W.n:
        return False
    M = np.vstack([W.basis, V.basis])
    return bool(np.linalg.svd(M, compute_uv=False).min() > SPAN_TOL)


def is_in_grassmannian(S: Subgroup) -> bool:
    """Membership in G(H^n, k).

    Horizontal subgroups always qualify (isotropy caps their dimension at n).
    Vertical ones qualify iff k >= n+1; the center and other vertical
    subgroups of linear dimension <= n admit no complement.
    """
    if S.horizontal:
        return S.dim_h <= S.n
    return S.k >= S.n + 1


def admissible_k(n: int, k: int) -> bool:
    return 1 <= k <= 2 * n


class SplitPair:
    """Semidirect splitting H^n = W . V with W vertical (normal) and V horizontal.

    Every p factors uniquely as p = pi_W(p) . pi_V(p), where pi_V(p) is the
    oblique projection of p' onto V' along W' (vertical coordinate 0) and
    pi_W(p) = p . pi_V(p)^{-1}.
    """

    def __init__(self, W: Subgroup, V: Subgroup):
        if not is_complementary_pair(W, V):
            raise InvalidInputError("W must be vertical, V horizontal, and W' + V' = R^{2n} as a direct sum")
        self.W = W
        self.V = V
        self.n = W.n
        M = np.vstack([W.basis, V.basis])
        # p' = c @ M, so the V-coordinates of p' are (p' @ inv(M))[:, dim W':]
        self._to_v = np.linalg.inv(M)[:, W.dim_h:] @ V.basis

    @classmethod
    def orthogonal(cls, S: Subgroup) -> "SplitPair":
        """The orthogonal splitting having S as one factor."""
        if S.horizontal:
            return cls(complement(S), S)
        return cls(S, complement(S))

    def project_v(self, p) -> np.ndarray:
        p = as_points(p)
        out = np.zeros_like(p)
        out[..., :-1] = p[..., :-1] @ self._to_v
        return out

    def project(self, p) -> tuple[np.ndarray, np.ndarray]:
        """Return (pi_W(p), pi_V(p))."""
        p = as_points(p)
        v = self.project_v(p)
        return mul(p, inv(v)), v

    def project_w(self, p) -> np.ndarray:
        return self.project(p)[0]

    @cached_property
    def c_est(self) -> float:
        return self.estimate_c()

    def estimate_c(self, samples: int = 100_000, seed: int = 0, shrink: float = 0.99) -> float:
        """Empirical constant c(V, W) of the projection estimates.

        Minimizes both ratios d(p,W)/||pi_V p|| and
        d(p,V)/||pi_V(p)^{-1} pi_W(p) pi_V(p)|| over unit-sphere samples, refines
        the smallest few by pattern search and shrinks the result.
        """
        from .regions import dist_to_subgroup

        def ratio(x):
            w, v = self.project(x)
            a = hom_norm(v)
            b = hom_norm(mul(mul(inv(v), w), v))
            r1 = np.where(a > 1e-12, dist_to_subgroup(x, self.W) / np.maximum(a, 1e-300), np.inf)
            r2 = np.where(b > 1e-12, dist_to_subgroup(x, self.V, tol=1e-12) / np.maximum(b, 1e-300), np.inf)
            return np.minimum(r1, r2)

        x = unit_sphere_samples(self.n, samples, seed)
        vals = ratio(x)
        starts = x[np.argsort(vals)[:8]]
        _, best, _ = sphere_pattern_search(ratio, starts, maximize=False)
        return float(min(vals.min(), best.min()) * shrink)

    def __repr__(self) -> str:
        return f"SplitPair(W={self.W!r}, V={self.V!r})"


def project_split(pair: SplitPair, p) -> tuple[np.ndarray, np.ndarray]:
    return pair.project(p)


# ---------------------------------------------------------------- unit sphere


def normalize_to_sphere(x: np.ndarray) -> np.ndarray:
    """Dilate each point onto the unit homogeneous sphere."""
    nrm = np.asarray(hom_norm(x))
    return dilate(1.0 / np.maximum(nrm, 1e-300), x)


def unit_sphere_samples(n: int, count: int, seed: int = 0, symmetric: bool = False) -> np.ndarray:
    """Low-discrepancy points on {||x|| = 1}.

    A scrambled Sobol sequence is pushed through the Gaussian quantile to get
    directions g in R^{2n+1}; (g', g_t) is mapped to (g', sign(g_t) g_t^2) so
    both branches of the max-norm are active, then dilated to norm 1.
    With ``symmetric`` the set is closed under inversion x -> x^{-1}.
    """
    d = 2 * n + 1
    sob = qmc.Sobol(d, scramble=True, seed=seed)
    m = int(np.ceil(np.log2(max(count, 2))))
    u = sob.random_base2(m)[:count]
    g = _gauss.ppf(np.clip(u, 1e-12, 1 - 1e-12))
    g[:, -1] = np.sign(g[:, -1]) * g[:, -1] ** 2
    x = normalize_to_sphere(g)
    if symmetric:
        x = np.concatenate([x, inv(x)])
    return x


def sphere_pattern_search(
    f: Callable[[np.ndarray], np.ndarray],
    starts: np.ndarray,
    maximize: bool = True,
    step: float = 0.05,
    min_step: float = 1e-7,
    max_iter: int = 400,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Compass search on the unit sphere, run in parallel from several starts.

    Each iteration polls x +- h e_i (renormalized) for every coordinate, moves
    to the best poll point if it improves, otherwise halves h.
    Returns (points, values, final step sizes).
    """
    sign = 1.0 if maximize else -1.0
    x = np.array(starts, dtype=float)
    m, d = x.shape
    fx = sign * f(x)
    h = np.full(m, step)
    E = np.concatenate([np.eye(d), -np.eye(d)])
    for _ in range(max_iter):
        active = h >= min_step
        if not active.any():
            break
        idx = np.flatnonzero(active)
        cand = x[idx, None, :] + h[idx, None, None] * E[None, :, :]
        cand = normalize_to_sphere(cand.reshape(-1, d))
        fc = sign * f(cand)
        fc = np.where(np.isfinite(fc), fc, -np.inf).reshape(len(idx), 2 * d)
        j = np.argmax(fc, axis=1)
        best = fc[np.arange(len(idx)), j]
        better = best > fx[idx]
        moved = idx[better]
        x[moved] = cand.reshape(len(idx), 2 * d, d)[better, j[better]]
        fx[moved] = best[better]
        h[idx[~better]] *= 0.5
    return x, sign * fx, h


# ---------------------------------------------------------------- Grassmannian


def random_isotropic_frame(n: int, k: int, rng: np.random.Generator) -> np.ndarray:
    """Orthonormal isotropic k-frame by a symplectic Gram-Schmidt sweep.

    Each new Gaussian vector is made orthogonal to the previous vectors u_i and
    to J u_i; orthogonality to J u_i is exactly omega(., u_i) = 0.
    """
    if not 0 <= k <= n:
        raise InvalidInputError(f"isotropic subspaces of R^{2 * n} have dimension <= {n}")
    J = symplectic_matrix(n)
    frame = np.zeros((0, 2 * n))
    while frame.shape[0] < k:
        g = rng.standard_normal(2 * n)
        span = np.vstack([frame, frame @ J.T]) if frame.shape[0] else frame
        for _ in range(2):
            if span.shape[0]:
                g = g - span.T @ (span @ g)
        nrm = np.linalg.norm(g)
        if nrm < 1e-8:
            continue
        frame = np.vstack([frame, g / nrm])
    return frame


def grassmannian_from_frame(n: int, k: int, frame: np.ndarray) -> Subgroup:
    """Element of G(H^n, k) from an isotropic frame of its horizontal factor.

    For k <= n the frame spans S' itself; for k >= n+1 it spans the horizontal
    complement S^perp (dimension 2n+1-k) and S = complement(S^perp).
    """
    h = make_subgroup(HORIZONTAL, frame, n)
    return h if k <= n else complement(h)


def random_grassmannian(n: int, k: int, rng: np.random.Generator) -> Subgroup:
    if not admissible_k(n, k):
        raise InvalidInputError(f"k={k} is not admissible for H^{n} (1 <= k <= {2 * n})")
    dim = k if k <= n else 2 * n + 1 - k
    return grassmannian_from_frame(n, k, random_isotropic_frame(n, dim, rng))


# ---------------------------------------------------------------- rho metric


class RhoResult(NamedTuple):
    value: float
    tolerance: float
    argmax: np.ndarray

    def __float__(self) -> float:
        return self.value


def grassmannian_projection(S: Subgroup) -> Callable[[np.ndarray], np.ndarray]:
    """pi_S within the orthogonal splitting (complement(S), S)."""
    pair = SplitPair.orthogonal(S)
    if S.horizontal:
        return pair.project_v
    return pair.project_w


def _check_rho_args(S1: Subgroup, S2: Subgroup) -> None:
    for S in (S1, S2):
        if not is_in_grassmannian(S):
            raise GrassmannianError(f"{S!r} is not in the intrinsic Grassmannian")
    if S1.n != S2.n:
        raise InvalidInputError("subgroups live in different H^n")
    if S1.k != S2.k or S1.kind != S2.kind:
        raise GrassmannianError("rho compares subgroups of the same Grassmannian G(H^n, k)")


def rho_metric(
    S1: Subgroup,
    S2: Subgroup,
    samples: int = 4096,
    refine: int = 8,
    seed: int = 0,
    sphere: np.ndarray | None = None,
) -> RhoResult:
    """rho(S1, S2) = max over ||x|| = 1 of d(pi_S1 x, pi_S2 x).

    Sampled maximization (Sobol sphere points, or ``sphere`` if given) followed
    by compass search from the ``refine`` best samples.  The reported tolerance
    is the largest change of the objective over the final poll stencil.
    """
    _check_rho_args(S1, S2)
    p1 = grassmannian_projection(S1)
    p2 = grassmannian_projection(S2)

    def f(x):
        return np.asarray(hom_norm(mul(inv(p1(x)), p2(x))))

    if sphere is None:
        sphere = unit_sphere_samples(S1.n, samples, seed, symmetric=True)
    vals = f(sphere)
    order = np.argsort(-vals, kind="stable")[:refine]
    x, fx, h = sphere_pattern_search(f, sphere[order], maximize=True)
    i = int(np.argmax(fx))
    value = float(max(fx[i], vals[order[0]]))
    d = x.shape[1]
    E = np.concatenate([np.eye(d), -np.eye(d)])
    stencil = normalize_to_sphere(x[i] + 2 * h[i] * E)
    tol = float(np.max(np.abs(f(stencil) - fx[i])))
    return RhoResult(value, tol, x[i])
