import numpy as np
import pytest

from sunlab import (
    EmptyCloud,
    NoCandidate,
    NotANearestPoint,
    PointCloud,
    QueryInCloud,
    builtin,
    find_luminosity,
    is_sun_sampled,
    project,
    sun_check,
)

LINF2 = builtin("linf", 2)


# --- metric projection -------------------------------------------------------


def test_project_hand_cases():
    cloud = PointCloud([[0, 0], [2, 0]])
    pr = project(LINF2, cloud, [0.6, 0])
    assert pr.distance == 0.6
    assert list(pr.indices) == [0]

    member = project(LINF2, cloud, [2, 0])
    assert member.distance == 0.0
    assert 1 in member.indices


def test_project_tie():
    pr = project(LINF2, PointCloud([[0, 0], [0, 2]]), [1, 1])
    assert pr.distance == 1.0
    assert list(pr.indices) == [0, 1]


def test_project_empty_cloud():
    with pytest.raises(EmptyCloud):
        project(LINF2, PointCloud(np.empty((0, 2))), [0, 0])


def test_project_translation_equivariant():
    rng = np.random.default_rng(14)
    cloud = PointCloud(rng.uniform(-2, 2, size=(12, 2)))
    x = rng.uniform(-2, 2, 2)
    v = rng.uniform(-5, 5, 2)
    a = project(LINF2, cloud, x)
    b = project(LINF2, PointCloud(cloud.points + v), x + v)
    assert np.array_equal(a.indices, b.indices)
    assert abs(a.distance - b.distance) <= 1e-12


def test_project_scale_equivariant():
    rng = np.random.default_rng(15)
    cloud = PointCloud(rng.uniform(-2, 2, size=(12, 2)))
    x = rng.uniform(-2, 2, 2)
    t = 3.0
    a = project(LINF2, cloud, x)
    b = project(LINF2, PointCloud(t * cloud.points), t * x)
    assert np.array_equal(a.indices, b.indices)
    assert abs(b.distance - t * a.distance) <= 1e-12


# --- ray condition -----------------------------------------------------------


def test_sun_singleton_always_holds():
    cloud = PointCloud([[0.3, -0.7]])
    rep = sun_check(LINF2, cloud, [2, 2], [0.3, -0.7])
    assert rep.holds
    assert rep.falsifier is None


def test_sun_hand_case_and_mirror():
    cloud = PointCloud([[0, 0], [0, 2]])
    rep = sun_check(LINF2, cloud, [1, 1], [0, 0], lambda_max=10, grid=100)
    assert rep.verdict == "holds-on-grid"
    mirror = sun_check(LINF2, cloud, [1, 1], [0, 2], lambda_max=10, grid=100)
    assert mirror.holds


def test_sun_requires_nearest_candidate():
    cloud = PointCloud([[0, 0], [0, 2]])
    with pytest.raises(NotANearestPoint):
        sun_check(LINF2, cloud, [1, 1], [0, 2.5])


def test_sun_lambda_zero_and_one_pass():
    cloud = PointCloud([[0, 0], [1, 0], [2, 0]])
    rep = sun_check(LINF2, cloud, [0.5, 0.2], [0, 0], lambda_max=4, grid=9)
    # grid includes lambda = 0, 0.5, 1.0, ...; the first three are safe
    assert rep.per_lambda[0] and rep.per_lambda[2]


def test_sun_falsifier_reports_competitor():
    """A query whose horizontal offset beats its height is falsified by the
    next cloud point along the ray."""
    cloud = PointCloud([[0, 0], [1, 0], [2, 0]])
    rep = sun_check(LINF2, cloud, [0.5, 0.2], [0, 0])
    assert rep.verdict == "falsified"
    assert rep.falsifier["competitor"] == [1.0, 0.0]
    assert rep.falsifier["lambda"] > 1.0


def test_find_luminosity_prefers_first_passing_candidate():
    cloud = PointCloud([[0, 0], [0, 2]])
    rep = find_luminosity(LINF2, cloud, [1, 1])
    assert rep.holds
    assert rep.y == [0.0, 0.0]


def test_find_luminosity_rejects_member_query():
    with pytest.raises(QueryInCloud):
        find_luminosity(LINF2, PointCloud([[0, 0], [0, 2]]), [0, 2])


def test_find_luminosity_no_candidate():
    cloud = PointCloud([[0, 0], [1, 0], [2, 0]])
    out = find_luminosity(LINF2, cloud, [0.5, 0.1])
    assert isinstance(out, NoCandidate)
    assert not out.holds
    assert len(out.falsifications) == 2


def _segment_cloud(step=0.1):
    ts = np.round(np.arange(0.0, 2.0 + step / 2, step), 10)
    return PointCloud(np.stack([ts, np.zeros_like(ts)], axis=1))


def test_far_query_on_dense_segment_holds():
    rep = find_luminosity(LINF2, _segment_cloud(), [1.0, 5.0])
    assert rep.holds


def _clearance_queries(cloud, count, seed, clearance):
    """Uniform box queries kept only when farther than `clearance` from the
    cloud in the space norm."""
    rng = np.random.default_rng(seed)
    lo = cloud.points.min(axis=0) - 1.0
    hi = cloud.points.max(axis=0) + 1.0
    out = []
    while len(out) < count:
        q = rng.uniform(lo, hi)
        d = np.abs(cloud.points - q).max(axis=1).min()
        if d >= clearance:
            out.append(q)
    return np.asarray(out)


def test_dense_segment_sun_sampled_above_resolution():
    cloud = _segment_cloud(step=0.1)
    queries = _clearance_queries(cloud, 25, seed=2, clearance=0.15)
    rep = is_sun_sampled(LINF2, cloud, queries)
    assert rep.passed, rep.failures[:2]


def test_sun_sampled_skips_member_queries():
    cloud = PointCloud([[0, 0], [0, 2]])
    queries = np.array([[0.0, 0.0], [1.0, 1.0]])
    rep = is_sun_sampled(LINF2, cloud, queries)
    assert rep.skipped == [0]
    assert rep.passed


def test_sun_sampled_strict_hand_case():
    cloud = PointCloud([[0, 0], [0, 2]])
    rep = is_sun_sampled(LINF2, cloud, np.array([[1.0, 1.0]]), strict=True)
    assert rep.strict and rep.passed


def test_sun_sampled_two_point_diagonal_report():
    """No a-priori verdict for the diagonal pair; the report just records
    what the grid oracle finds for each query."""
    cloud = PointCloud([[0, 0], [1, 1]])
    rng = np.random.default_rng(3)
    queries = rng.uniform(-1, 2, size=(20, 2))
    rep = is_sun_sampled(LINF2, cloud, queries)
    assert rep.queries == 20
    assert isinstance(rep.failures, list)
    for f in rep.failures:
        assert "query" in f
