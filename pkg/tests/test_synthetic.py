import numpy as np
import pytest

from hgeom.algebra import hom_norm, inv, mul
from hgeom.errors import InvalidInputError
from hgeom.measure import density_at, out_of_cone_mass
from hgeom.regions import dist_to_subgroup
from hgeom.subgroups import SplitPair, grassmannian_from_frame, make_subgroup, random_grassmannian
from hgeom.synthetic import (
    four_corner_ifs,
    sample_ball,
    sample_ifs_fractal,
    sample_intrinsic_graph,
    sample_subgroup,
    similarity_dimension,
)


def test_subgroup_examples(plane, xline):
    c = sample_subgroup(plane, count=10_000, seed=1)
    assert c.k_m == 3 and len(c) == 10_000
    assert np.all(c.points[:, 0] == 0)
    assert np.all(hom_norm(c.points) <= 1.0 + 1e-12)
    assert c.weights.sum() == pytest.approx(1.0, rel=1e-9)
    L = sample_subgroup(xline, count=500, box_radius=2.0, seed=1)
    assert np.all(L.points[:, 1:] == 0) and L.total_mass == 2.0


@pytest.mark.parametrize("n,k", [(1, 1), (1, 2), (2, 2), (2, 3), (2, 4)])
def test_subgroup_samples_lie_on_coset(n, k):
    rng = np.random.default_rng(n * 10 + k)
    S = random_grassmannian(n, k, rng)
    base = rng.normal(size=2 * n + 1)
    c = sample_subgroup(S, base=base, count=2000, box_radius=0.7, seed=2)
    rel = mul(inv(base), c.points)
    # float points sit O(eps) off an irrational S, which the metric sees as sqrt(eps)
    assert np.max(S.membership_residual(rel)) <= 1e-12
    assert np.max(dist_to_subgroup(rel, S)) <= 1e-7
    assert np.all(hom_norm(rel) <= 0.7 + 1e-9)


@pytest.mark.parametrize("kind,basis", [("horizontal", [[1, 0, 0, 0], [0, 1, 0, 0]]), ("vertical", [[0, 0, 1, 0]])])
def test_axis_aligned_samples_exactly_on_coset(kind, basis):
    S = make_subgroup(kind, basis, 2)
    c = sample_subgroup(S, count=2000, seed=4)
    assert np.max(dist_to_subgroup(c.points, S)) <= 1e-9


def test_left_translate_in_distribution(plane):
    g = np.array([0.4, -1.0, 0.3])
    at_e = sample_subgroup(plane, count=20_000, seed=5)
    at_g = sample_subgroup(plane, base=g, count=20_000, seed=6)
    radii = [0.6, 0.4]
    probes = plane_points = sample_subgroup(plane, count=10, box_radius=0.3, seed=9).points
    for q in plane_points:
        a = density_at(at_e, q, 3, radii).ball_mass
        b = density_at(at_g, mul(g, q), 3, radii).ball_mass
        np.testing.assert_allclose(b, a, rtol=0.1)
    assert len(probes) == 10


def test_generators_are_deterministic(plane, xline):
    a = sample_subgroup(plane, count=100, seed=3).to_json()
    b = sample_subgroup(plane, count=100, seed=3).to_json()
    assert a == b
    pair = SplitPair(plane, xline)
    g1 = sample_intrinsic_graph(pair, {"family": "smooth", "amplitude": 0.2}, seed=4)
    g2 = sample_intrinsic_graph(pair, {"family": "smooth", "amplitude": 0.2}, seed=4)
    np.testing.assert_array_equal(g1.points, g2.points)
    assert g1.meta["sup_norm"] == 0.2


def test_generator_validation(plane):
    with pytest.raises(InvalidInputError):
        sample_subgroup(plane, count=0)
    with pytest.raises(InvalidInputError):
        sample_subgroup(plane, box_radius=0.0)


def test_ball_sample():
    c = sample_ball(2, count=3000, radius=0.8, seed=2)
    assert c.points.shape == (3000, 5)
    assert np.all(hom_norm(c.points) <= 0.8 + 1e-12)


# ---------------------------------------------------------------- graphs


def test_graph_trivial_phi(plane, xline):
    pair = SplitPair(plane, xline)
    c = sample_intrinsic_graph(pair, {"family": "constant", "value": [0.0]}, count=1000, seed=1)
    assert np.max(dist_to_subgroup(c.points, plane)) == 0.0
    assert c.meta["phi"]["family"] == "constant" and c.k_m == 3


def test_graph_constant_phi_projection(plane, xline):
    pair = SplitPair(plane, xline)
    c = sample_intrinsic_graph(pair, {"family": "constant", "value": [0.7]}, count=1000, seed=1)
    w, v = pair.project(c.points)
    np.testing.assert_allclose(v, np.tile([0.7, 0.0, 0.0], (1000, 1)), atol=1e-10)
    np.testing.assert_allclose(mul(w, v), c.points, atol=1e-10)


def test_graph_unknown_family(plane, xline):
    with pytest.raises(InvalidInputError):
        sample_intrinsic_graph(SplitPair(plane, xline), {"family": "spline"})


def test_linear_graph_cone_criterion(plane, xline):
    pair = SplitPair(plane, xline)
    c = sample_intrinsic_graph(pair, {"family": "linear", "slope": 0.1}, count=1000, seed=8)
    rng = np.random.default_rng(0)
    i, j = rng.integers(0, 1000, size=(2, 1000))
    keep = i != j
    rel = mul(inv(c.points[i[keep]]), c.points[j[keep]])
    inside = dist_to_subgroup(rel, xline) <= 0.5 * hom_norm(rel)
    assert not np.any(inside)


def test_linear_graph_matrix_form():
    W = make_subgroup("vertical", [[0, 0, 1, 0], [0, 0, 0, 1]], 2)
    V = make_subgroup("horizontal", [[1, 0, 0, 0], [0, 1, 0, 0]], 2)
    pair = SplitPair(W, V)
    c = sample_intrinsic_graph(pair, {"family": "linear", "matrix": [[0.1, 0], [0, -0.2]]}, count=200, seed=2)
    w, v = pair.project(c.points)
    wc = w[:, :-1] @ W.basis.T
    np.testing.assert_allclose(v[:, :-1] @ V.basis.T, wc[:, :2] @ np.array([[0.1, 0], [0, -0.2]]).T, atol=1e-10)


# ---------------------------------------------------------------- IFS


def test_ifs_examples():
    fixed = sample_ifs_fractal([(np.zeros(3), 0.5)], depth=6, count=50)
    assert np.all(fixed.points == 0)
    assert fixed.meta["similarity_dimension"] == 0.0
    seg = sample_ifs_fractal([([1.0, 0, 0], 0.5), ([-1.0, 0, 0], 0.5)], depth=10, count=500)
    assert seg.meta["similarity_dimension"] == pytest.approx(1.0)
    assert np.all(seg.points[:, 1:] == 0) and np.all(np.abs(seg.points[:, 0]) <= 2.0)
    assert similarity_dimension([0.5] * 4) == pytest.approx(2.0)
    with pytest.raises(InvalidInputError):
        sample_ifs_fractal([])
    with pytest.raises(InvalidInputError):
        sample_ifs_fractal([(np.zeros(3), 1.0)])


def test_four_corner_ifs_has_no_tangent_plane():
    cloud = sample_ifs_fractal(four_corner_ifs(1), depth=8, count=20_000, seed=3)
    assert cloud.meta["similarity_dimension"] == pytest.approx(2.0)
    planes = [grassmannian_from_frame(1, 1, [[np.cos(a), np.sin(a)]]) for a in np.linspace(0, np.pi, 12, endpoint=False)]
    rng = np.random.default_rng(1)
    for p in cloud.points[rng.choice(len(cloud), 10, replace=False)]:
        r = 0.25
        ball = cloud.weights[cloud.ball(p, r)].sum()
        worst = min(out_of_cone_mass(cloud, p, V, 0.3, r) for V in planes)
        assert worst >= 0.1 * ball
