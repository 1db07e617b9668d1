import math

import numpy as np
import pytest

from gaussmin import corrmat, exactlaw, montecarlo, search
from gaussmin.streams import RngStream

SPURIOUS_SEED = 4  # local search from this seed's random start lands on a
# stationary point far from the cosine matrix (documented spurious minimum)


def _space_and_objective(samples=50_000, seed=77, rank=2):
    space = search.SearchSpace(n=4, rank=rank)
    obj = search.Objective(kind="moment", p=2.0, samples=samples, base_seed=seed)
    return space, obj


def test_decode_always_validates():
    space = search.SearchSpace(n=4, rank=2)
    cursor = RngStream(1).open()
    for _ in range(200):
        params = cursor.gaussians(space.param_count)
        rep = corrmat.validate(space.matrix(params))
        assert rep.valid, rep.first_violation


def test_decode_many_random_params_fast_path():
    # volume check of the decoded-matrix invariants at scale
    space = search.SearchSpace(n=5, rank=3)
    z = RngStream(2).gaussian_matrix(10_000, space.param_count)
    for i in range(0, 10_000, 500):
        v = space.decode(z[i])
        assert np.all(np.abs(np.linalg.norm(v, axis=1) - 1.0) < 1e-12)


def test_degenerate_rows_rerandomized():
    space = search.SearchSpace(n=3, rank=2)
    params = np.zeros(6)
    v = space.decode(params)
    norms = np.linalg.norm(v, axis=1)
    assert np.all(np.abs(norms - 1.0) < 1e-12)
    # deterministic replacement
    assert np.array_equal(v, space.decode(params))


def test_objective_validation():
    with pytest.raises(ValueError):
        search.Objective(kind="moment", p=0.0)
    with pytest.raises(ValueError):
        search.Objective(kind="tail", t=-0.5)
    with pytest.raises(ValueError):
        search.Objective(kind="nope")


def test_crn_determinism_and_estimator_equivalence():
    space, obj = _space_and_objective()
    params = space.encode(corrmat.cosine_covariance(4))
    v1 = search.evaluate_objective(space, params, obj)
    v2 = search.evaluate_objective(space, params, obj)
    assert v1 == v2
    gf = corrmat.gram_factor(corrmat.cosine_covariance(4))
    est = montecarlo.estimate_moment(gf, 2.0, obj.samples, RngStream(obj.base_seed))
    assert v1 == est.value
    assert abs(v1 - exactlaw.cos_moment_p2(4)) < 4.0 * est.std_error


def test_objective_invariant_under_signed_permutation():
    space, obj = _space_and_objective()
    params = RngStream(9).gaussians(space.param_count)
    base = search.evaluate_objective(space, params, obj)
    rows = params.reshape(4, 2)
    image = (rows[[3, 1, 0, 2]] * np.array([[-1.0], [1.0], [1.0], [-1.0]])).reshape(-1)
    assert search.evaluate_objective(space, image, obj) == base


def test_tail_objective():
    space = search.SearchSpace(n=4, rank=2)
    obj = search.Objective(kind="tail", t=0.5, samples=50_000, base_seed=3)
    params = space.encode(corrmat.cosine_covariance(4))
    v = search.evaluate_objective(space, params, obj)
    exact = exactlaw.cos_tail(4, 0.5)
    se = math.sqrt(exact * (1 - exact) / obj.samples)
    assert abs(v - exact) < 4.0 * se


def test_identity_n1_objective_is_one():
    space = search.SearchSpace(n=1, rank=1)
    obj = search.Objective(kind="moment", p=2.0, samples=50_000, base_seed=5)
    v = search.evaluate_objective(space, np.array([3.0]), obj)
    assert abs(v - 1.0) < 0.03


def test_gradient_stable_across_step_sizes():
    space, obj = _space_and_objective()
    params = RngStream(10).gaussians(space.param_count)
    g1, _ = search._central_gradient(space, params, obj, 1e-3)
    g2, _ = search._central_gradient(space, params, obj, 5e-4)
    assert np.linalg.norm(g1 - g2) <= 0.2 * np.linalg.norm(g2)


def test_de_zero_generations_is_best_of_init():
    space, obj = _space_and_objective(samples=10_000)
    rep = search.differential_evolution(space, obj, population=4, generations=0,
                                        stream=RngStream(1, stream_id=1))
    assert rep.history.size == 1
    assert rep.best_value == rep.history[0]
    assert rep.evaluations == 4


def test_de_requires_population():
    space, obj = _space_and_objective(samples=10_000)
    with pytest.raises(ValueError):
        search.differential_evolution(space, obj, population=3, generations=1,
                                      stream=RngStream(1))


def test_de_monotone_and_reproducible():
    space, obj = _space_and_objective(samples=20_000)
    rep1 = search.differential_evolution(space, obj, population=12, generations=25,
                                         stream=RngStream(5, stream_id=1))
    rep2 = search.differential_evolution(space, obj, population=12, generations=25,
                                         stream=RngStream(5, stream_id=1))
    assert np.array_equal(rep1.history, rep2.history)
    assert np.all(np.diff(rep1.history) <= 0.0)
    assert rep1.best_value == rep2.best_value
    # the reported best re-evaluates to exactly the reported value
    assert search.evaluate_objective(space, rep1.best_params, obj) == rep1.best_value


def test_de_finds_counterexample_quickly():
    space, obj = _space_and_objective(samples=100_000, seed=0)
    rep = search.differential_evolution(space, obj, population=24, generations=80,
                                        stream=RngStream(0, stream_id=1))
    assert rep.best_value < 0.1396
    assert rep.improvement_over_simplex > 0.03


def test_local_search_descends_from_simplex():
    space = search.SearchSpace(n=4, rank=4)
    obj = search.Objective(kind="moment", p=2.0, samples=50_000, base_seed=8)
    start = space.encode(corrmat.simplex_covariance(4))
    rep = search.local_search(space, obj, start, iterations=10,
                              stream=RngStream(8, stream_id=1))
    assert rep.best_value < rep.history[0]
    assert np.all(np.diff(rep.history) <= 0.0)


def test_local_search_near_stationary_at_cosine():
    space, obj = _space_and_objective(samples=100_000, seed=13)
    start = space.encode(corrmat.cosine_covariance(4))
    f0 = search.evaluate_objective(space, start, obj)
    rep = search.local_search(space, obj, start, iterations=8,
                              stream=RngStream(13, stream_id=1))
    se = 0.095 / math.sqrt(obj.samples)  # sample std of M^2 is about 0.095
    assert f0 - rep.best_value < 2.0 * se
    assert rep.distance_to_cosine < 0.05


def test_local_search_spurious_minimum_documented_seed():
    space = search.SearchSpace(n=4, rank=4)
    obj = search.Objective(kind="moment", p=2.0, samples=100_000,
                           base_seed=SPURIOUS_SEED)
    driver = RngStream(SPURIOUS_SEED, stream_id=1)
    start = driver.split(0).gaussians(space.param_count)
    rep = search.local_search(space, obj, start, iterations=40,
                              stream=driver.split(1))
    assert rep.distance_to_cosine > 0.5
    # locally stationary: a restart from the endpoint barely improves
    rerun = search.local_search(space, obj, rep.best_params, iterations=10,
                                stream=driver.split(2))
    se = 0.095 / math.sqrt(obj.samples)
    assert rep.best_value - rerun.best_value < 2.0 * se


def test_local_search_validation():
    space, obj = _space_and_objective(samples=10_000)
    with pytest.raises(ValueError):
        search.local_search(space, obj, np.zeros(space.param_count), 0, RngStream(1))
    with pytest.raises(ValueError):
        search.local_search(space, obj, np.zeros(3), 5, RngStream(1))


def test_campaign_empty_seeds():
    cfg = search.CampaignConfig(n=4, rank=2, seeds=())
    summary = search.run_campaign(cfg)
    assert summary.reports == ()
    assert math.isnan(summary.best_value)
    assert summary.best_seed is None


def test_campaign_aggregates():
    cfg = search.CampaignConfig(n=4, rank=2, samples=20_000, method="de",
                                seeds=(0, 1), population=12, generations=30)
    summary = search.run_campaign(cfg)
    assert len(summary.reports) == 2
    assert summary.best_value == min(r.best_value for r in summary.reports)
    assert 0.0 <= summary.recovered_fraction <= 1.0
    d = summary.to_json_dict()
    assert len(d["runs"]) == 2


def test_campaign_n3_matches_simplex():
    # no counterexample exists at n=3: the optimum equals the simplex value
    cfg = search.CampaignConfig(n=3, rank=2, samples=50_000, method="de",
                                seeds=(0, 1, 2), population=16, generations=60)
    summary = search.run_campaign(cfg)
    baseline = search._simplex_baseline(
        search.Objective(kind="moment", p=2.0, samples=50_000, base_seed=0), 3)
    for rep in summary.reports:
        assert abs(rep.best_value - baseline) < 0.01
    # the cosine matrix at n=3 IS the simplex up to signed permutation
    assert corrmat.canonical_distance(corrmat.cosine_covariance(3),
                                      corrmat.simplex_covariance(3)) < 1e-12


def test_space_encode_rejects_overrank():
    space = search.SearchSpace(n=4, rank=2)
    with pytest.raises(ValueError):
        space.encode(corrmat.simplex_covariance(4))  # rank 3 > 2
