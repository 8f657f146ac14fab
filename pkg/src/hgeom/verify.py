"""Randomized numerical checks of the quantitative lemmas and inclusions.

Every check returns a CheckReport whose ``worst_margin`` is the minimum over
trials of (right-hand side - left-hand side); a trial is a violation when its
margin is below ``-tolerance``.  Conditioned samples come from proposal plus
rejection, and the acceptance rate is reported.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .algebra import dilate, hom_norm, inv, mul
from .errors import InvalidInputError, PreconditionError, SamplingStarvedError
from .measure import PointCloud, density_at
from .regions import REGION_TOL, SLACK, dist_to_subgroup
from .subgroups import (
    SplitPair,
    Subgroup,
    complement,
    is_in_grassmannian,
    normalize_to_sphere,
    random_grassmannian,
    rho_metric,
    unit_sphere_samples,
)
from .synthetic import _uniform_ball, sample_in_subgroup

EXACT_TOL = 1e-9
IDENTITY_TOL = 1e-10
RHO_TOL = 5e-4
MIN_ACCEPTANCE = 1e-4


@dataclass
class CheckReport:
    check_name: str
    trials: int
    violations: int
    worst_margin: float
    config: dict
    seed: int
    tolerance: float
    skipped: int = 0
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def to_json(self) -> dict:
        return json.loads(json.dumps(asdict(self), default=_jsonable))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, obj: dict) -> "CheckReport":
        return cls(**obj)

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status} {self.check_name}: trials={self.trials} violations={self.violations} "
            f"skipped={self.skipped} worst_margin={self.worst_margin!r}"
        )


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, Subgroup):
        return obj.to_json()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _finish(name, margins, config, seed, tol, skipped=0, details=None, replay=None) -> CheckReport:
    margins = np.asarray(margins, dtype=float).reshape(-1)
    bad = margins < -tol
    details = dict(details or {})
    if bad.any() and replay is not None:
        details["first_violation"] = replay(int(np.argmax(bad)))
    # no tested trials: report a neutral finite margin, the trial count says the rest
    worst = float(margins.min()) if len(margins) else 0.0
    return CheckReport(name, int(len(margins)), int(bad.sum()), worst, config, seed, tol, int(skipped), details)


def _random_points(rng, n, count, scale=2.0):
    return rng.uniform(-scale, scale, size=(count, 2 * n + 1))


def _residual(a, b):
    return np.max(np.abs(a - b), axis=-1)


# ---------------------------------------------------------------- projections


def check_projection_identities(pair: SplitPair, trials: int = 10_000, seed: int = 0, tol: float = IDENTITY_TOL) -> CheckReport:
    """The factorization id = pi_W . pi_V and the algebraic identities of the projections."""
    rng = np.random.default_rng(seed)
    p = _random_points(rng, pair.n, trials)
    q = _random_points(rng, pair.n, trials)
    lam = rng.uniform(0.1, 3.0, size=trials)
    wp, vp = pair.project(p)
    wq, vq = pair.project(q)
    res = {
        "factorization": _residual(mul(wp, vp), p),
        "v_homomorphism": _residual(pair.project_v(mul(p, q)), mul(vp, vq)),
        "v_dilation": _residual(pair.project_v(dilate(lam, p)), dilate(lam, vp)),
        "w_dilation": _residual(pair.project_w(dilate(lam, p)), dilate(lam, wp)),
        "v_inverse": _residual(pair.project_v(inv(p)), inv(vp)),
        "w_product": _residual(pair.project_w(mul(p, q)), mul(mul(mul(wp, vp), wq), inv(vp))),
        "w_inverse": _residual(pair.project_w(inv(p)), mul(mul(inv(vp), inv(wp)), vp)),
    }
    worst = np.max(np.vstack(list(res.values())), axis=0)
    details = {"max_residual": {k: float(v.max()) for k, v in res.items()}}
    config = {"W": pair.W, "V": pair.V}
    return _finish(
        "projection_identities", -worst, config, seed, tol, details=details,
        replay=lambda i: {"p": p[i], "q": q[i], "lambda": float(lam[i])},
    )


def check_projection_sandwich(pair: SplitPair, trials: int = 10_000, seed: int = 0, c: float | None = None, tol: float = EXACT_TOL) -> CheckReport:
    """c ||pi_V p|| <= d(p, W) <= ||pi_V p|| and the matching bounds for d(p, V)."""
    c = pair.c_est if c is None else float(c)
    rng = np.random.default_rng(seed)
    p = _random_points(rng, pair.n, trials)
    w, v = pair.project(p)
    a = np.asarray(hom_norm(v))
    b = np.asarray(hom_norm(mul(mul(inv(v), w), v)))
    dW = np.asarray(dist_to_subgroup(p, pair.W))
    dV = np.asarray(dist_to_subgroup(p, pair.V, tol=1e-12))
    margins = np.min(np.vstack([dW - c * a, a - dW, dV - c * b, b - dV]), axis=0)
    return _finish(
        "projection_sandwich", margins, {"W": pair.W, "V": pair.V, "c": c}, seed, tol,
        replay=lambda i: {"p": p[i]},
    )


# ---------------------------------------------------------------- rho duality


def check_rho_duality(k: int, pairs: int = 100, seed: int = 0, n: int = 1, samples: int = 4096, tol: float = 2 * RHO_TOL) -> CheckReport:
    """|rho(S1, S2) - rho(S1^perp, S2^perp)| on random pairs, both sides on one symmetric sphere sample."""
    rng = np.random.default_rng(seed)
    sphere = unit_sphere_samples(n, samples, seed, symmetric=True)
    margins, diffs, cfg = [], [], []
    for _ in range(pairs):
        S1 = random_grassmannian(n, k, rng)
        S2 = random_grassmannian(n, k, rng)
        a = rho_metric(S1, S2, sphere=sphere).value
        b = rho_metric(complement(S1), complement(S2), sphere=sphere).value
        diffs.append(abs(a - b))
        margins.append(tol - abs(a - b))
        cfg.append((S1, S2, a, b))
    details = {"max_abs_difference": float(max(diffs)) if diffs else 0.0}
    return _finish(
        "rho_duality", margins, {"n": n, "k": k, "pairs": pairs, "samples": samples}, seed, tol,
        details=details, replay=lambda i: {"S1": cfg[i][0], "S2": cfg[i][1], "rho": cfg[i][2], "rho_perp": cfg[i][3]},
    )


# ---------------------------------------------------------------- cone inversion


def _ball_proposals(n, count, radius, rng):
    """Points of B(e, radius): half uniform in the (x', t) box ball, half on the sphere."""
    half = count // 2
    inner = np.zeros((half, 2 * n + 1))
    inner[:, :-1] = _uniform_ball(2 * n, half, radius, rng)
    inner[:, -1] = rng.uniform(-radius**2, radius**2, size=half)
    outer = dilate(radius, normalize_to_sphere(rng.standard_normal((count - half, 2 * n + 1))))
    return np.vstack([inner, outer])


def _compass_max(f, feasible, starts, step, min_step, max_iter=300):
    """Compass search in coordinates; infeasible polls are discarded."""
    x = np.array(starts, dtype=float)
    m, d = x.shape
    fx = f(x)
    h = np.full(m, float(step))
    E = np.concatenate([np.eye(d), -np.eye(d)])
    for _ in range(max_iter):
        idx = np.flatnonzero(h >= min_step)
        if not len(idx):
            break
        cand = (x[idx, None, :] + h[idx, None, None] * E[None]).reshape(-1, d)
        fc = np.where(feasible(cand), f(cand), -np.inf).reshape(len(idx), 2 * d)
        j = np.argmax(fc, axis=1)
        best = fc[np.arange(len(idx)), j]
        better = best > fx[idx]
        moved = idx[better]
        x[moved] = cand.reshape(len(idx), 2 * d, d)[better, j[better]]
        fx[moved] = best[better]
        h[idx[~better]] *= 0.5
    return x, fx


def sample_cone_inversion_hypothesis(V: Subgroup, alpha, beta, s, M, count, rng, max_batches: int = 1000):
    """Points x with ||x|| <= alpha^2 M and d(x, V^perp) <= s^2 beta^2 M.

    Proposal x = u . y with u in V^perp, ||u|| <= alpha^2 M + eps and
    ||y|| <= eps = s^2 beta^2 M.  Then d(x, V^perp) = d(y, V^perp) <= eps, and
    every admissible x arises this way, so rejection on ||x|| is exact.
    When eps >= alpha^2 M the distance hypothesis is implied by the norm
    bound (d(x, V^perp) <= ||x||) and x is drawn from B(e, alpha^2 M) directly.
    Returns (samples, acceptance rate).
    """
    Vp = complement(V)
    eps = s**2 * beta**2 * M
    R = alpha**2 * M
    out, proposed = [], 0
    batch = max(2 * count, 1024)
    got = 0
    for _ in range(max_batches):
        if eps >= R:
            x = _ball_proposals(V.n, batch, R, rng)
        else:
            x = mul(sample_in_subgroup(Vp, batch, R + eps, rng), _ball_proposals(V.n, batch, eps, rng))
        keep = np.asarray(hom_norm(x)) <= R
        proposed += batch
        out.append(x[keep])
        got += int(keep.sum())
        rate = got / proposed
        if proposed >= 10 * batch and rate < MIN_ACCEPTANCE:
            break
        if got >= count:
            break
    rate = got / max(proposed, 1)
    if rate < MIN_ACCEPTANCE or got < count:
        raise SamplingStarvedError(
            f"acceptance rate {rate:.2e} is too low; widen alpha^2 M relative to s^2 beta^2 M"
        )
    return np.vstack(out)[:count], rate


def cone_inversion_bound(alpha, beta, s, M) -> float:
    return (beta**2 + 2 * math.sqrt(2) * alpha * beta) * s * M


def check_cone_inversion(
    V: Subgroup, alpha: float, beta: float, s: float, M: float, trials: int = 10_000, seed: int = 0,
    tol: float = EXACT_TOL, extremal: bool = True,
) -> CheckReport:
    """d(x^{-1}, V^perp) <= (beta^2 + 2 sqrt2 alpha beta) s M for sampled admissible x (pointwise reading)."""
    if V.horizontal or not is_in_grassmannian(V):
        raise InvalidInputError("V must be a vertical element of the Grassmannian")
    if min(alpha, beta, M) <= 0 or not 0 < s <= 1:
        raise InvalidInputError("need alpha, beta, M > 0 and 0 < s <= 1")
    rng = np.random.default_rng(seed)
    Vp = complement(V)
    x, rate = sample_cone_inversion_hypothesis(V, alpha, beta, s, M, trials, rng)
    bound = cone_inversion_bound(alpha, beta, s, M)
    lhs = np.asarray(dist_to_subgroup(inv(x), Vp, tol=1e-12))
    margins = bound - lhs
    details = {"acceptance_rate": rate, "bound": bound, "reading": "pointwise implication per x"}
    if extremal:
        eps = s**2 * beta**2 * M
        R = alpha**2 * M

        def f(z):
            return np.asarray(dist_to_subgroup(inv(z), Vp, tol=1e-12)) / (s * M)

        def feasible(z):
            return (np.asarray(hom_norm(z)) <= R) & (np.asarray(dist_to_subgroup(z, Vp, tol=1e-12)) <= eps)

        starts = x[np.argsort(-lhs)[:8]]
        _, fx = _compass_max(f, feasible, starts, step=0.1 * eps, min_step=1e-9 * max(eps, 1e-300))
        sup_ratio = float(max(fx.max(), (lhs / (s * M)).max()))
        bound_ratio = bound / (s * M)
        details.update({"sup_ratio": sup_ratio, "bound_ratio": bound_ratio})
    cfg = {"V": V, "alpha": alpha, "beta": beta, "s": s, "M": M, "trials": trials}
    rep = _finish("cone_inversion", margins, cfg, seed, tol, details=details, replay=lambda i: {"x": x[i]})
    if extremal and (bound_ratio - sup_ratio) * s * M < -tol:
        rep.violations += 1
        rep.details["extremal_violation"] = True
    return rep


# ---------------------------------------------------------------- two-cone covering


@dataclass(frozen=True)
class TwoConeConfig:
    s: float
    rho: float
    V: Subgroup
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.s < 1 or not self.rho > 0:
            raise InvalidInputError("need 0 < s < 1 and rho > 0")
        if self.V.horizontal or not is_in_grassmannian(self.V):
            raise InvalidInputError("V must be a vertical element of the Grassmannian")

    @property
    def s_bar(self) -> float:
        return self.s**2 / 100

    @property
    def s_bar_1(self) -> float:
        return self.s_bar / 20

    def to_json(self) -> dict:
        return {"s": self.s, "s_bar": self.s_bar, "s_bar_1": self.s_bar_1, "rho": self.rho,
                "V": self.V.to_json(), "seed": self.seed}


def reach(points: np.ndarray, x, Vp: Subgroup, aperture: float):
    """h(x) = sup ||x^{-1} y|| over cloud points y in X(x, V^perp, aperture); (h, argmax index or -1)."""
    rel = mul(inv(np.asarray(x)), points)
    nrm = np.asarray(hom_norm(rel))
    inside = np.asarray(dist_to_subgroup(rel, Vp, tol=REGION_TOL)) <= aperture * nrm + SLACK
    inside &= nrm > 0
    if not inside.any():
        return 0.0, -1
    j = int(np.flatnonzero(inside)[np.argmax(nrm[inside])])
    return float(nrm[j]), j


def check_two_cone_covering(config: TwoConeConfig, cloud: PointCloud, trials: int = 200, tol: float = EXACT_TOL) -> CheckReport:
    """Cloud points of N(x V^perp, s_bar h(x)) within B(x, rho) lie in X(x, 2h, V^perp, s) or X(y, 2h, V^perp, s).

    h(x) is the sup over the finite cloud; trials with h(x) = 0 are skipped.
    """
    Vp = complement(config.V)
    pts = cloud.points
    rng = np.random.default_rng(config.seed)
    if len(pts) == 0:
        return _finish("two_cone_covering", [], config.to_json(), config.seed, tol)
    base = rng.choice(len(pts), size=min(trials, len(pts)), replace=False)
    margins, skipped, tested = [], 0, 0
    records = []
    s, sb = config.s, config.s_bar
    for i in base:
        x = pts[i]
        h, j = reach(pts, x, Vp, sb)
        if h == 0.0:
            skipped += 1
            continue
        y = pts[j]
        rel_x = mul(inv(x), pts)
        nx = np.asarray(hom_norm(rel_x))
        dx = np.asarray(dist_to_subgroup(rel_x, Vp, tol=REGION_TOL))
        sel = (dx <= sb * h + SLACK) & (nx <= config.rho + SLACK)
        if not sel.any():
            margins.append(np.inf)
            continue
        z = pts[sel]
        rel_y = mul(inv(y), z)
        ny = np.asarray(hom_norm(rel_y))
        dy = np.asarray(dist_to_subgroup(rel_y, Vp, tol=REGION_TOL))
        m_x = np.minimum(s * nx[sel] - dx[sel], 2 * h - nx[sel])
        m_y = np.minimum(s * ny - dy, 2 * h - ny)
        m = np.maximum(m_x, m_y)
        tested += int(sel.sum())
        margins.append(float(m.min()))
        records.append((int(i), int(j), h))
    # skipped trials are reported separately and do not enter the margins
    margins = [m for m in margins if np.isfinite(m)] or []
    details = {"cylinder_points_tested": tested, "base_points": int(len(base))}
    if not margins:
        details["note"] = "every sampled base point had h(x) = 0 or an empty cylinder"
    rep = _finish("two_cone_covering", margins, config.to_json(), config.seed, tol, skipped=skipped, details=details,
                  replay=lambda k: {"x_index": records[k][0], "y_index": records[k][1], "h": records[k][2]})
    rep.trials = int(len(base)) - skipped
    return rep


# ---------------------------------------------------------------- cone separation


def pair_constant(V: Subgroup, T: Subgroup, samples: int = 100_000) -> float:
    """Projection constant valid for both orthogonal splittings (V, V^perp) and (T, T^perp)."""
    return min(SplitPair.orthogonal(V).estimate_c(samples), SplitPair.orthogonal(T).estimate_c(samples))


def sample_cone(axis: Subgroup, aperture: float, count: int, rng, max_batches: int = 1000):
    """Points q != e of X(e, axis, aperture), by proposal u . y and rejection.

    After dilating q to norm 1 there is u in the axis with ||u^{-1} q|| <= aperture,
    so ||u|| lies in [1 - a, 1 + a].  Proposals take ||u|| = 1 and
    ||y|| <= a / (1 - a), which covers the normalized cone; a random dilation
    then spreads the norms.  Returns (samples, acceptance rate).
    """
    n = axis.n
    eta = aperture / (1 - aperture)
    out, got, proposed = [], 0, 0
    batch = max(2 * count, 1024)
    for _ in range(max_batches):
        u = sample_in_subgroup(axis, batch, 1.0, rng)
        u = normalize_to_sphere(u[np.asarray(hom_norm(u)) > 1e-9])
        y = _ball_proposals(n, len(u), eta, rng)
        q = mul(u, y)
        nq = np.asarray(hom_norm(q))
        ok = (nq > 0) & (np.asarray(dist_to_subgroup(q, axis, tol=REGION_TOL)) <= aperture * nq)
        proposed += len(u)
        q = q[ok]
        q = dilate(np.exp(rng.uniform(-3, 3, size=len(q))), q)
        out.append(q)
        got += len(q)
        if got >= count:
            break
        if proposed >= 10 * batch and got / proposed < MIN_ACCEPTANCE:
            break
    rate = got / max(proposed, 1)
    if rate < MIN_ACCEPTANCE or got < count:
        raise SamplingStarvedError(f"cone sampler acceptance {rate:.2e}; use a wider aperture")
    return np.vstack(out)[:count], rate


def check_cone_separation(
    V: Subgroup, T: Subgroup, s0: float | None = None, trials: int = 10_000, seed: int = 0,
    tol: float = EXACT_TOL, c: float | None = None, rho_samples: int = 4096,
) -> CheckReport:
    """X(e, V^perp, s0) minus {e} misses X(e, T, s0) when rho(V, T) < 1/3 and s0 < c/3."""
    rho = rho_metric(V, T, samples=rho_samples, seed=seed)
    if not rho.value < 1 / 3:
        raise PreconditionError(f"rho(V, T) = {rho.value:.4g} is not below 1/3")
    c = pair_constant(V, T) if c is None else float(c)
    s0 = c / 4 if s0 is None else float(s0)
    if not 0 < s0 < c / 3:
        raise PreconditionError(f"s0 = {s0:.4g} must lie in (0, c/3) with c = {c:.4g}")
    rng = np.random.default_rng(seed)
    q, rate = sample_cone(complement(V), s0, trials, rng)
    margins = np.asarray(dist_to_subgroup(q, T, tol=REGION_TOL)) - s0 * np.asarray(hom_norm(q))
    cfg = {"V": V, "T": T, "s0": s0, "c": c, "rho": rho.value, "trials": trials}
    return _finish("cone_separation", margins, cfg, seed, tol, details={"acceptance_rate": rate},
                   replay=lambda i: {"q": q[i]})


# ---------------------------------------------------------------- paraboloids


def check_paraboloid_in_cone(
    V: Subgroup, lam: float, alpha: float, s: float, trials: int = 10_000, seed: int = 0, tol: float = EXACT_TOL,
) -> CheckReport:
    """Q_alpha(e, V, lam) within B(e, r) lies in X(e, V, s) for r <= r* = (s / lam)^(1/alpha).

    Proposals y = u . w with u in V and ||w|| <= lam r^(1+alpha), so that
    d(y, V) = d(w, V) <= ||w||; rejection keeps ||y|| <= r and the paraboloid
    inequality.  Half of the trials use r = r*, where the inclusion is tight.
    """
    if not lam > 0 or not 0 < alpha <= 1 or not 0 < s < 1:
        raise InvalidInputError("need lam > 0, alpha in (0, 1], s in (0, 1)")
    rng = np.random.default_rng(seed)
    r_star = (s / lam) ** (1 / alpha)
    out, got, proposed = [], 0, 0
    batch = max(2 * trials, 1024)
    while got < trials:
        r = np.where(rng.random(batch) < 0.5, r_star, r_star * rng.random(batch) ** 0.25)
        u = sample_in_subgroup(V, batch, 1.0, rng)
        u = dilate(r, u)
        w = dilate(lam * r ** (1 + alpha), _ball_proposals(V.n, batch, 1.0, rng))
        y = mul(u, w)
        ny = np.asarray(hom_norm(y))
        dy = np.asarray(dist_to_subgroup(y, V, tol=REGION_TOL))
        ok = (ny <= r) & (dy <= lam * ny ** (1 + alpha))
        proposed += batch
        out.append(y[ok])
        got += int(ok.sum())
        if proposed >= 10 * batch and got / proposed < MIN_ACCEPTANCE:
            raise SamplingStarvedError("paraboloid sampler starved; increase lambda or s")
    y = np.vstack(out)[:trials]
    margins = s * np.asarray(hom_norm(y)) - np.asarray(dist_to_subgroup(y, V, tol=REGION_TOL))
    cfg = {"V": V, "lambda": lam, "alpha": alpha, "s": s, "r_star": r_star, "trials": trials}
    return _finish("paraboloid_in_cone", margins, cfg, seed, tol,
                   details={"acceptance_rate": got / proposed}, replay=lambda i: {"y": y[i]})


# ---------------------------------------------------------------- density bound


def density_bound(k_m: int, s: float, lam: float) -> float:
    """(2^{11 k_m + 1} 2000^{4 k_m} s^{-7 k_m}) lam, as a float (may overflow to inf)."""
    with np.errstate(over="ignore"):
        return float(np.exp((11 * k_m + 1) * np.log(2) + 4 * k_m * np.log(2000) - 7 * k_m * np.log(s)) * lam)


def density_bound_report(cloud: PointCloud, s: float, lam: float, radii, points: int = 20, seed: int = 0) -> CheckReport:
    """Compare finite-scale upper-density proxies with the density-estimate constant (trivially satisfied)."""
    rng = np.random.default_rng(seed)
    bound = density_bound(cloud.k_m, s, lam)
    idx = rng.choice(len(cloud), size=min(points, len(cloud)), replace=False) if len(cloud) else []
    ups = [density_at(cloud, cloud.points[i], cloud.k_m, radii).upper_density for i in idx]
    margins = [bound - u for u in ups]
    details = {"bound": bound, "max_upper_density_proxy": max(ups) if ups else 0.0,
               "note": "trivially satisfied: the constant is astronomically larger than desk-scale densities"}
    return _finish("density_bound", margins, {"s": s, "lambda": lam, "k_m": cloud.k_m}, seed, EXACT_TOL, details=details)


# ---------------------------------------------------------------- registry for the CLI


def _subgroup_param(params, key, default):
    obj = params.get(key)
    return default if obj is None else Subgroup.from_json(obj)


def _default_vertical(n):
    from .subgroups import VERTICAL, make_subgroup

    basis = np.eye(2 * n)[1:]  # everything but x_1: vertical, k = 2n, complement span{x_1}
    return make_subgroup(VERTICAL, basis, n)


def run_check(name: str, params: dict, trials: int | None, seed: int) -> CheckReport:
    """Dispatch a named check with JSON-style parameters."""
    params = dict(params or {})
    n = int(params.get("n", 1))
    if name == "projection_identities":
        V = _subgroup_param(params, "V", None)
        pair = SplitPair.orthogonal(V) if V is not None else SplitPair.orthogonal(_default_vertical(n))
        return check_projection_identities(pair, trials or 10_000, seed)
    if name == "projection_sandwich":
        V = _subgroup_param(params, "V", None)
        pair = SplitPair.orthogonal(V) if V is not None else SplitPair.orthogonal(_default_vertical(n))
        return check_projection_sandwich(pair, trials or 10_000, seed, c=params.get("c"))
    if name == "rho_duality":
        return check_rho_duality(int(params.get("k", 1)), trials or 100, seed, n=n)
    if name == "cone_inversion":
        V = _subgroup_param(params, "V", _default_vertical(n))
        return check_cone_inversion(
            V, float(params.get("alpha", 1)), float(params.get("beta", 1)), float(params.get("s", 1)),
            float(params.get("M", 1)), trials or 10_000, seed,
        )
    if name == "cone_separation":
        V = _subgroup_param(params, "V", _default_vertical(n))
        T = _subgroup_param(params, "T", V)
        return check_cone_separation(V, T, params.get("s0"), trials or 10_000, seed, c=params.get("c"))
    if name == "paraboloid_in_cone":
        V = _subgroup_param(params, "V", _default_vertical(n))
        return check_paraboloid_in_cone(
            V, float(params.get("lambda", 1)), float(params.get("alpha", 1)), float(params.get("s", 0.5)),
            trials or 10_000, seed,
        )
    if name == "two_cone_covering":
        if "cloud" not in params:
            raise InvalidInputError("two_cone_covering needs params.cloud (path to a PointCloud JSON)")
        cloud = PointCloud.load(params["cloud"])
        V = _subgroup_param(params, "V", _default_vertical(cloud.n))
        cfg = TwoConeConfig(float(params.get("s", 0.5)), float(params.get("rho", 10.0)), V, seed)
        return check_two_cone_covering(cfg, cloud, trials or 200)
    if name == "density_bound":
        if "cloud" not in params:
            raise InvalidInputError("density_bound needs params.cloud (path to a PointCloud JSON)")
        cloud = PointCloud.load(params["cloud"])
        radii = params.get("radii", [0.8, 0.4, 0.2])
        return density_bound_report(cloud, float(params.get("s", 0.5)), float(params.get("lambda", 1)), radii,
                                    trials or 20, seed)
    raise InvalidInputError(f"unknown check {name!r}; expected one of {sorted(CHECKS)}")


CHECKS = (
    "projection_identities",
    "projection_sandwich",
    "rho_duality",
    "cone_inversion",
    "two_cone_covering",
    "cone_separation",
    "paraboloid_in_cone",
    "density_bound",
)
