import numpy as np
import pytest
from hypothesis import given, strategies as st

from drafting.token_stream import TokenStream, is_prefix_of, make_corpus
from estimation import (
    AlphaEstimator,
    ConfigCatalog,
    LatencyModel,
    LatencyObservation,
    accumulated_alpha,
    calibrate,
    fit_latency,
    heuristic_priors,
    predict_cost,
)
from utils.exceptions import DomainError


class TestAlphaEstimator:
    def test_first_outcome_initializes_without_prior(self):
        estimator = AlphaEstimator(window=4, smoothing=0.7)
        assert estimator.update(True) == 1.0
        assert estimator.initialized

    def test_smoothed_update_over_window_mean(self):
        estimator = AlphaEstimator(window=3, smoothing=0.5, prior=0.5)
        assert estimator.update(True) == pytest.approx(0.75)
        assert estimator.update(False) == pytest.approx(0.625)
        estimator.update(False)
        estimator.update(False)
        # the window now holds three rejections
        assert estimator.recent == 0.0

    def test_invalid_configuration(self):
        with pytest.raises(DomainError):
            AlphaEstimator(window=0)
        with pytest.raises(DomainError):
            AlphaEstimator(smoothing=1.5)
        with pytest.raises(DomainError):
            AlphaEstimator(prior=-0.1)

    @given(prior=st.floats(min_value=0.0, max_value=1.0),
           smoothing=st.floats(min_value=0.0, max_value=1.0),
           outcomes=st.lists(st.booleans(), max_size=60))
    def test_estimate_stays_a_probability(self, prior, smoothing, outcomes):
        estimator = AlphaEstimator(window=5, smoothing=smoothing, prior=prior)
        for accepted in outcomes:
            value = estimator.update(accepted)
            assert 0.0 <= value <= 1.0

    def test_converges_toward_acceptance_rate(self):
        rng = np.random.default_rng(0)
        estimator = AlphaEstimator(window=20, smoothing=0.7, prior=0.1)
        for accepted in rng.random(400) < 0.8:
            estimator.update(bool(accepted))
        assert estimator.ema == pytest.approx(0.8, abs=0.15)

    def test_estimate_error_across_seeds(self):
        # a 20-outcome window leaves about 0.1 of sampling noise, so only the seed
        # average sits tightly on the rate
        rate = 0.7
        finals = []
        for seed in range(1000):
            outcomes = np.random.default_rng(seed).random(200) < rate
            estimator = AlphaEstimator(window=20, smoothing=0.7)
            for accepted in outcomes:
                estimator.update(bool(accepted))
            finals.append(estimator.ema)
        errors = np.abs(np.array(finals) - rate)
        assert np.mean(finals) == pytest.approx(rate, abs=0.02)
        assert np.mean(errors <= 0.3) >= 0.99
        assert np.mean(errors <= 0.05) < 0.99


class TestConfigCatalog:
    def test_cascade_alias_shares_top_model_estimator(self):
        catalog = ConfigCatalog()
        catalog.register('d1')
        catalog.register('VC(d1,pld)', key='d1')
        catalog.record_first_token_outcome('VC(d1,pld)', True)
        assert catalog.estimator('d1') is catalog.estimator('VC(d1,pld)')
        assert catalog.usage['VC(d1,pld)'].first_outcomes == 1
        assert catalog.usage['d1'].first_outcomes == 0

    def test_unselected_estimates_are_untouched(self):
        catalog = ConfigCatalog()
        catalog.seed_priors({'d1': 0.6, 'd2': 0.4})
        catalog.record_first_token_outcome('d1', False)
        assert catalog.alpha('d2') == 0.4
        assert catalog.alpha('d1') < 0.6

    def test_unknown_configuration_raises(self):
        with pytest.raises(KeyError):
            ConfigCatalog().alpha('d3')

    def test_usage_counters(self):
        catalog = ConfigCatalog()
        catalog.register('d2')
        catalog.record_selection('d2')
        catalog.record_tokens('d2', drafted=4, accepted=3)
        stats = catalog.usage['d2']
        assert (stats.selections, stats.drafted_tokens, stats.accepted_tokens) == (1, 4, 3)

    def test_seeding_does_not_overwrite_learned_estimates(self):
        catalog = ConfigCatalog()
        catalog.register('d1')
        catalog.record_first_token_outcome('d1', True)
        catalog.seed_priors({'d1': 0.2})
        assert catalog.alpha('d1') == 1.0
        catalog.seed_priors({'d1': 0.2}, overwrite=True)
        assert catalog.alpha('d1') == 0.2


class TestPriors:
    def test_cheaper_models_get_lower_priors(self, counterexample):
        priors = heuristic_priors(counterexample)
        assert priors['d1'] > priors['d2'] > priors['pld']
        assert priors['d1'] == pytest.approx(0.75)
        assert priors['pld'] == pytest.approx(0.25)

    def test_accumulated_alpha(self):
        assert accumulated_alpha([]) == 1.0
        assert accumulated_alpha([0.5, 0.8]) == pytest.approx(0.4)
        with pytest.raises(DomainError):
            accumulated_alpha([1.2])


class TestLatencyModel:
    def test_prior_predicts_nominal_costs(self, counterexample):
        model = LatencyModel.from_hierarchy(counterexample)
        assert model.predict('d1', 1) == pytest.approx(0.4)
        assert model.predict('d2', 3) == pytest.approx(0.9)
        assert model.predict('pld', 5) == pytest.approx(0.01)

    def test_posterior_tracks_observed_costs(self, counterexample):
        model = LatencyModel.from_hierarchy(counterexample)
        observations = [LatencyObservation('d1', k, 1, 0.6 * k) for k in range(1, 6)] * 40
        model.update(observations)
        assert model.num_observations == 200
        assert predict_cost(model, 'd1', 3) == pytest.approx(1.8, abs=0.01)

    def test_fit_leaves_input_untouched(self, counterexample):
        model = LatencyModel.from_hierarchy(counterexample)
        before = model.mean.copy()
        fitted = fit_latency(model, [LatencyObservation('d2', 2, 1, 1.0)])
        assert fitted.num_observations == 1
        assert model.num_observations == 0
        np.testing.assert_array_equal(model.mean, before)

    def test_prediction_is_clamped(self, counterexample):
        model = LatencyModel.from_hierarchy(counterexample)
        model.update([LatencyObservation('pld', 1, 1, -5.0)] * 50)
        assert model.predict('pld', 1) == LatencyModel.MIN_PREDICTION

    def test_covariance_shrinks_with_data(self, counterexample):
        model = LatencyModel.from_hierarchy(counterexample)
        before = np.trace(model.covariance)
        model.update([LatencyObservation('d1', 2, 1, 0.8)] * 10)
        assert np.trace(model.covariance) < before

    def test_unknown_tier_and_empty_fit(self, counterexample):
        model = LatencyModel.from_hierarchy(counterexample)
        with pytest.raises(DomainError):
            model.predict('d7', 1)
        with pytest.raises(DomainError):
            fit_latency(model, [])


class TestCalibration:
    def test_round_robin_commits_verified_tokens(self, counterexample):
        truth = make_corpus(1, 500, 0.5)
        catalog = ConfigCatalog()
        result = calibrate(catalog, counterexample, truth, steps=2, rng=np.random.default_rng(0),
                           start_position=64)
        assert result.cycles == 6
        assert len(result.charges) == 12
        assert 6 <= len(result.tokens) <= 12
        assert result.position == 64 + len(result.tokens)
        assert is_prefix_of(result.tokens, truth, 64)
        assert result.cost_units == pytest.approx(6 + 2 * (0.4 + 0.3 + 0.01))
        assert all(catalog.estimator(m).updates == 2 for m in ('d1', 'd2'))
        assert catalog.estimator('pld').updates <= 2

    def test_empty_lookup_draft_records_no_outcome(self, counterexample):
        distinct = TokenStream(tokens=tuple(range(200)), seed=0, repeat_bias=0.0, period=16)
        catalog = ConfigCatalog()
        result = calibrate(catalog, counterexample, distinct, steps=3, rng=np.random.default_rng(0),
                           start_position=64)
        assert result.cycles == 9
        assert catalog.estimator('pld').updates == 0
        assert catalog.alpha('pld') == pytest.approx(0.25)

    def test_token_budget_truncates(self, counterexample):
        truth = make_corpus(1, 500, 0.5)
        result = calibrate(ConfigCatalog(), counterexample, truth, steps=5,
                           rng=np.random.default_rng(0), start_position=64, max_tokens=3)
        assert len(result.tokens) == 3
        assert result.cycles <= 3

    def test_zero_steps_only_seeds_priors(self, counterexample):
        catalog = ConfigCatalog()
        result = calibrate(catalog, counterexample, make_corpus(1, 100, 0.5), steps=0)
        assert result.cycles == 0
        assert catalog.alpha('d1') == pytest.approx(0.75)

    def test_negative_steps_raise(self, counterexample):
        with pytest.raises(DomainError):
            calibrate(ConfigCatalog(), counterexample, make_corpus(1, 100, 0.5), steps=-1)
