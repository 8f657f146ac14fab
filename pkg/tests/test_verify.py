import json
import math

import numpy as np
import pytest

from hgeom.algebra import hom_norm, inv
from hgeom.errors import InvalidInputError, PreconditionError, SamplingStarvedError
from hgeom.measure import PointCloud
from hgeom.regions import dist_to_subgroup
from hgeom.subgroups import SplitPair, complement, grassmannian_from_frame, make_subgroup
from hgeom.synthetic import four_corner_ifs, sample_ifs_fractal, sample_subgroup
from hgeom.verify import (
    CHECKS,
    CheckReport,
    TwoConeConfig,
    check_cone_inversion,
    check_cone_separation,
    check_paraboloid_in_cone,
    check_projection_identities,
    check_projection_sandwich,
    check_rho_duality,
    check_two_cone_covering,
    cone_inversion_bound,
    density_bound,
    density_bound_report,
    reach,
    run_check,
    sample_cone,
    sample_cone_inversion_hypothesis,
)


def test_report_roundtrip_and_summary(plane, xline):
    rep = check_projection_identities(SplitPair(plane, xline), trials=200, seed=3)
    again = CheckReport.from_json(json.loads(rep.dumps()))
    assert again.dumps() == rep.dumps()
    assert rep.summary().startswith("PASS projection_identities: trials=200 violations=0")
    assert math.isfinite(rep.worst_margin) and rep.tolerance == 1e-10


def test_reports_are_reproducible(plane, xline):
    a = check_cone_inversion(plane, 1, 1, 1, 1, trials=500, seed=4).dumps()
    b = check_cone_inversion(plane, 1, 1, 1, 1, trials=500, seed=4).dumps()
    assert a == b


def test_projection_identities_degenerate(plane, xline):
    pair = SplitPair(plane, xline)
    w, v = pair.project(np.zeros(3))
    assert w.tolist() == [0, 0, 0] and v.tolist() == [0, 0, 0]
    assert check_projection_identities(pair, trials=2000, seed=1).violations == 0


def test_sandwich_detects_wrong_constant(plane, xline):
    pair = SplitPair(plane, xline)
    assert check_projection_sandwich(pair, trials=2000, seed=2).violations == 0
    # c > 1 contradicts d(p, W) <= ||pi_V p||
    assert check_projection_sandwich(pair, trials=2000, seed=2, c=1.5).violations > 0


def test_rho_duality_small():
    rep = check_rho_duality(1, pairs=5, seed=0, samples=1024)
    assert rep.passed and rep.details["max_abs_difference"] <= 1e-3


def test_cone_inversion_example(plane):
    assert cone_inversion_bound(1, 1, 1, 1) == pytest.approx(1 + 2 * math.sqrt(2))
    rep = check_cone_inversion(plane, 1, 1, 1, 1, trials=5000, seed=7)
    assert rep.passed and rep.details["sup_ratio"] <= rep.details["bound_ratio"]
    assert rep.details["bound"] == pytest.approx(3.828, abs=1e-3)


def test_cone_inversion_sampler_respects_hypothesis(plane, rng):
    x, rate = sample_cone_inversion_hypothesis(plane, 0.5, 0.25, 0.5, 2.0, 3000, rng)
    Vp = complement(plane)
    assert np.all(hom_norm(x) <= 0.5**2 * 2.0 + 1e-12)
    assert np.all(dist_to_subgroup(x, Vp) <= 0.5**2 * 0.25**2 * 2.0 + 1e-9)
    assert 0 < rate <= 1


def test_cone_inversion_points_on_complement(plane, xline):
    # x in V^perp: d(x^{-1}, V^perp) = 0
    x = np.array([[0.3, 0, 0], [-0.8, 0, 0]])
    assert np.all(dist_to_subgroup(inv(x), xline) == 0)


def test_cone_inversion_validation(plane, xline):
    with pytest.raises(InvalidInputError):
        check_cone_inversion(xline, 1, 1, 1, 1)
    with pytest.raises(InvalidInputError):
        check_cone_inversion(plane, 1, 1, 0, 1)


def test_sampling_starvation(plane, rng, monkeypatch):
    # the proposals are adapted to the targets, so force starvation via the acceptance floor
    import hgeom.verify as verify

    monkeypatch.setattr(verify, "MIN_ACCEPTANCE", 1.0 + 1e-9)
    with pytest.raises(SamplingStarvedError):
        sample_cone_inversion_hypothesis(plane, 1.0, 1.0, 0.5, 1.0, 100, rng)
    with pytest.raises(SamplingStarvedError):
        sample_cone(plane, 0.1, 100, rng, max_batches=3)


def test_two_cone_config():
    V = make_subgroup("vertical", [[0.0, 1.0]], 1)
    cfg = TwoConeConfig(0.5, 2.0, V)
    assert cfg.s_bar == 0.5**2 / 100 and cfg.s_bar_1 == cfg.s_bar / 20
    with pytest.raises(InvalidInputError):
        TwoConeConfig(1.2, 2.0, V)
    with pytest.raises(InvalidInputError):
        TwoConeConfig(0.5, 2.0, make_subgroup("horizontal", [[1.0, 0.0]], 1))


def test_two_cone_single_point_is_skipped(plane):
    cloud = PointCloud([[0.1, 0.2, 0.3]], [1.0], 1, 3, 1.0)
    assert reach(cloud.points, cloud.points[0], complement(plane), 0.1) == (0.0, -1)
    rep = check_two_cone_covering(TwoConeConfig(0.5, 2.0, plane), cloud, trials=5)
    assert rep.skipped == 1 and rep.trials == 0 and rep.violations == 0


def test_two_cone_on_complement_coset(plane, xline):
    cloud = sample_subgroup(xline, base=[0.0, 0.3, 0.1], count=400, seed=1)
    rep = check_two_cone_covering(TwoConeConfig(0.5, 2.0, plane), cloud, trials=50)
    assert rep.passed and rep.skipped == 0 and rep.trials == 50


def test_two_cone_on_ifs(plane):
    cloud = sample_ifs_fractal(four_corner_ifs(1), depth=6, count=1024, seed=2)
    rep = check_two_cone_covering(TwoConeConfig(0.5, 4.0, plane, seed=1), cloud, trials=60)
    assert rep.passed and rep.trials + rep.skipped == 60


def test_cone_sampler_membership(xline, rng):
    q, rate = sample_cone(xline, 0.2, 2000, rng)
    nq = hom_norm(q)
    assert np.all(nq > 0) and np.all(dist_to_subgroup(q, xline) <= 0.2 * nq + 1e-9)
    assert 0 < rate <= 1


def test_cone_separation_examples(plane):
    rep = check_cone_separation(plane, plane, trials=2000, seed=3)
    assert rep.passed and rep.config["s0"] == pytest.approx(rep.config["c"] / 4)
    a = 0.02
    T = complement(grassmannian_from_frame(1, 1, [[np.cos(a), np.sin(a)]]))
    assert check_cone_separation(plane, T, trials=2000, seed=3).passed


def test_cone_separation_preconditions(plane):
    far = complement(make_subgroup("horizontal", [[0.0, 1.0]], 1))
    with pytest.raises(PreconditionError):
        check_cone_separation(plane, far, trials=10)
    with pytest.raises(PreconditionError):
        check_cone_separation(plane, plane, s0=0.9, trials=10)


def test_paraboloid_example(plane, xline):
    for V in (plane, xline):
        rep = check_paraboloid_in_cone(V, 1.0, 1.0, 0.5, trials=3000, seed=5)
        assert rep.passed and rep.worst_margin >= -1e-12
    with pytest.raises(InvalidInputError):
        check_paraboloid_in_cone(plane, 1.0, 1.5, 0.5)


def test_density_bound_is_labelled_trivial(plane):
    assert density_bound(3, 0.5, 1.0) > 1e40
    cloud = sample_subgroup(plane, count=2000, seed=1)
    rep = density_bound_report(cloud, 0.5, 1.0, [0.6, 0.3], points=5)
    assert rep.passed and "trivially" in rep.details["note"]


def test_run_check_dispatch(tmp_path, plane):
    for name in ("projection_identities", "projection_sandwich", "paraboloid_in_cone", "cone_separation"):
        assert run_check(name, {}, 300, 1).passed
    path = tmp_path / "c.json"
    sample_subgroup(plane, count=500, seed=1).save(path)
    assert run_check("density_bound", {"cloud": str(path)}, 3, 0).passed
    assert run_check("two_cone_covering", {"cloud": str(path), "s": 0.5}, 5, 0).violations == 0
    with pytest.raises(InvalidInputError):
        run_check("two_cone_covering", {}, 5, 0)
    with pytest.raises(InvalidInputError):
        run_check("fermat", {}, 5, 0)
    assert "rho_duality" in CHECKS and len(CHECKS) == 8
