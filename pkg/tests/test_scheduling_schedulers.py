import numpy as np
import pytest

from drafting.prompt_lookup import PromptLookup
from estimation import ConfigCatalog, LatencyModel
from scheduling import (
    AutoregressiveScheduler,
    DraftExecutor,
    DyTCScheduler,
    EstimateProvider,
    GreedyScheduler,
    HCScheduler,
    HCVCScheduler,
    SDScheduler,
    VCScheduler,
    make_scheduler,
    single,
    static_schedule,
    vertical,
)
from utils.exceptions import ConfigError, DomainError


def _provider(hierarchy, mode='perfect'):
    return EstimateProvider(mode, hierarchy, ConfigCatalog(), LatencyModel.from_hierarchy(hierarchy))


def _executor(hierarchy, truth, seed=0):
    return DraftExecutor(hierarchy, truth, np.random.default_rng(seed), PromptLookup(tokens=truth.slice(0, 64)))


class TestEstimates:
    def test_perfect_single_model(self, counterexample):
        provider = _provider(counterexample)
        assert provider.alpha(single('d2'), 100) == 0.8
        assert provider.cost(single('d2')) == 0.3
        assert provider.bottom(100) == (0.2, 0.01)

    def test_perfect_cascade_cost_per_token(self, counterexample):
        provider = _provider(counterexample)
        tokens_per_round = (1 - 0.2 ** 5) / 0.8
        assert provider.cost(vertical('d1', 'pld')) == pytest.approx(0.41 / tokens_per_round)
        assert provider.alpha(vertical('d1', 'pld'), 0) == 0.9

    def test_nested_cascade_cost_recurses(self, counterexample):
        provider = _provider(counterexample)
        inner = provider.cost(vertical('d2', 'pld'))
        tokens_per_round = (1 - 0.8 ** 5) / 0.2
        expected = (0.4 + 4 * inner) / tokens_per_round
        assert provider.cost(vertical('d1', 'd2', 'pld')) == pytest.approx(expected)

    def test_online_mode_reads_catalog_and_latency(self, counterexample):
        provider = _provider(counterexample, mode='online')
        provider.catalog.seed_priors({'d1': 0.66})
        config = vertical('d1', 'pld')
        assert provider.alpha(config, 0) == 0.66
        assert provider.catalog.key_for(config.id) == 'd1'
        assert provider.model_cost('d1') == pytest.approx(0.4)

    def test_online_bottom_never_falls_below_its_prior(self, counterexample):
        provider = _provider(counterexample, mode='online')
        provider.catalog.seed_priors({'pld': 0.0})
        assert provider.bottom(0) == (pytest.approx(0.25), pytest.approx(0.01))
        provider.catalog.seed_priors({'pld': 0.8}, overwrite=True)
        assert provider.bottom(0)[0] == pytest.approx(0.8)

    def test_unknown_mode(self, counterexample):
        with pytest.raises(ConfigError):
            _provider(counterexample, mode='psychic')


class TestExecutor:
    def test_single_neural_draft(self, counterexample, truth):
        outcome = _executor(counterexample, truth).draft(single('d1'), 64, 3)
        assert len(outcome.tokens) == 3
        assert outcome.cost_units == pytest.approx(1.2)
        assert [c.kind for c in outcome.charges] == ['draft']
        assert outcome.observations[0].k == 3
        assert outcome.estimator_key == 'd1'

    def test_static_cascade_runs_fixed_rounds(self, counterexample, truth):
        outcome = _executor(counterexample, truth).draft(vertical('d1', 'd2'), 64, 0, rounds=3, inner_k=2)
        assert outcome.rounds == 3
        assert 3 <= len(outcome.tokens) <= 9
        verifies = [c for c in outcome.charges if c.kind == 'verify']
        assert len(verifies) == 3 and all(c.model_id == 'd1' for c in verifies)
        assert outcome.cost_units == pytest.approx(3 * 0.4 + 3 * 2 * 0.3)

    def test_dynamic_cascade_stops_on_rejection_or_length(self, counterexample, truth):
        outcome = _executor(counterexample, truth).draft(vertical('d1', 'd2', 'pld'), 64, 4)
        assert outcome.rounds >= 1
        assert len(outcome.tokens) >= 1
        assert outcome.config_id == 'VC(d1,VC(d2,pld))'
        assert outcome.estimator_key == 'd1'

    def test_cascade_without_inner_draft_matches_single_token_draft(self, counterexample, truth):
        cascade = _executor(counterexample, truth, seed=5).draft(vertical('d1', 'd2'), 64, 0,
                                                                 rounds=1, inner_k=0)
        plain = _executor(counterexample, truth, seed=5).draft(single('d1'), 64, 1)
        assert cascade.tokens == plain.tokens
        assert cascade.cost_units == plain.cost_units

    def test_zero_length_needs_rounds(self, counterexample, truth):
        with pytest.raises(DomainError):
            _executor(counterexample, truth).draft(single('d1'), 64, 0)

    def test_prompt_lookup_cascade_top_rejected(self, counterexample, truth):
        with pytest.raises(DomainError):
            _executor(counterexample, truth).draft(vertical('pld', 'd1'), 64, 2)


class TestStaticSchedulers:
    def test_autoregressive_builds_root_only_tree(self, counterexample_session):
        build = AutoregressiveScheduler().build_tree(counterexample_session)
        assert build.tree.size == 0 and build.cost_units == 0

    def test_sd_draft_chain(self, counterexample_session):
        build = SDScheduler(3).build_tree(counterexample_session)
        assert build.tree.size == 3
        assert all(n.config_id == 'd1' for n in build.tree.nodes[1:])
        assert build.cost_units == pytest.approx(1.2)

    def test_hc_second_draft_follows_first(self, counterexample_session):
        build = HCScheduler(2, 2).build_tree(counterexample_session)
        configs = [n.config_id for n in build.tree.nodes[1:]]
        assert configs == ['d1', 'd1', 'd2', 'd2']
        assert [e.depth for e in build.expansions] == [0, 2]
        assert build.cost_units == pytest.approx(2 * 0.4 + 2 * 0.3)

    def test_hc_without_first_draft(self, counterexample_session):
        build = HCScheduler(0, 3).build_tree(counterexample_session)
        assert [e.config_id for e in build.expansions] == ['d2']

    def test_vc_and_hc_vc(self, two_tier_session):
        vc = VCScheduler(2, 3).build_tree(two_tier_session)
        assert vc.expansions[0].config_id == 'VC(d1,d2)'
        combined = HCVCScheduler(2, 3, 2).build_tree(two_tier_session)
        assert combined.expansions[0].config_id == 'VC(d1,d2)'
        if len(combined.expansions) > 1:
            assert combined.expansions[1].config_id == 'pld'

    def test_describe_names(self):
        assert SDScheduler(3, model='d2').describe() == 'SD(d2,3)'
        assert HCScheduler(2, 2).describe() == 'HC(2,2)'
        assert VCScheduler(1, 0).describe() == 'VC(1,0)'
        assert HCVCScheduler(2, 3, 1).describe() == 'HC+VC(2,3,1)'

    @pytest.mark.parametrize('kind, hyper', [
        ('sd', {'k': 0}),
        ('hc', {'k1': 0, 'k2': 0}),
        ('vc', {'n': 0, 'k': 1}),
        ('sd', {'k': 2, 'bogus': 1}),
        ('beam', {}),
    ])
    def test_invalid_static_schedules(self, kind, hyper):
        with pytest.raises(ConfigError):
            static_schedule(kind, **hyper)


class TestDynamicSchedulers:
    def test_greedy_counterexample_tree(self, counterexample_session):
        build = GreedyScheduler(counterexample_session.params).build_tree(counterexample_session)
        # 20 * 0.8^3 falls below the stop threshold of 11.5
        assert build.tree.size == 3
        assert [e.config_id for e in build.expansions] == ['d2', 'd2', 'd2']
        assert all(e.k == 1 for e in build.expansions)
        assert build.stop_reason == 'stop_rule'

    def test_dytc_matches_greedy_on_counterexample(self, counterexample_scenario):
        from simulation.session import DecodeSession
        params = counterexample_scenario.default_params()
        greedy = GreedyScheduler(params).build_tree(DecodeSession(counterexample_scenario, params, 1))
        dytc = DyTCScheduler(params).build_tree(DecodeSession(counterexample_scenario, params, 1))
        assert [e.config_id for e in dytc.expansions] == [e.config_id for e in greedy.expansions]
        assert dytc.expansions[0].objective == pytest.approx(0.96 / 0.31)
        assert dytc.expansions[0].runner_up == 'd1'

    def test_dytc_respects_size_limit(self, two_tier_scenario):
        from simulation.session import DecodeSession
        params = two_tier_scenario.default_params().with_overrides({'max_size': 6, 't_min': 0.01})
        session = DecodeSession(two_tier_scenario, params, 2)
        build = DyTCScheduler(params).build_tree(session)
        assert 1 <= build.tree.size <= 6
        assert build.cost_units > 0
        assert build.expansion_at_root() is not None

    def test_high_threshold_stops_immediately(self, counterexample_scenario):
        from simulation.session import DecodeSession
        params = counterexample_scenario.default_params().with_overrides({'t_min': 50.0})
        build = DyTCScheduler(params).build_tree(DecodeSession(counterexample_scenario, params, 0))
        assert build.tree.size == 0
        assert build.stop_reason == 'stop_rule'

    def test_draft_length_is_capped_at_remaining_capacity(self, counterexample_scenario):
        from simulation.session import DecodeSession
        # verification overhead in the objective pushes greedy to k = 5 with d1
        params = counterexample_scenario.default_params().with_overrides(
            {'greedy_verify_cost': 1.0, 'max_size': 2})
        build = GreedyScheduler(params).build_tree(DecodeSession(counterexample_scenario, params, 0))
        assert [(e.config_id, e.k) for e in build.expansions] == [('d1', 2)]
        assert build.tree.size == 2
        assert build.cost_units == pytest.approx(2 * 0.4)

    def test_collapsed_bottom_estimate_still_drafts_at_the_root(self, two_tier_session):
        two_tier_session.catalog.seed_priors({'pld': 0.0}, overwrite=True)
        params = two_tier_session.params
        build = DyTCScheduler(params).build_tree(two_tier_session)
        assert build.expansion_at_root() is not None
        assert build.tree.size >= 1


class TestFactory:
    def test_names_and_kinds(self):
        assert make_scheduler('dytc').name == 'dytc'
        assert make_scheduler({'kind': 'hc', 'k1': 2, 'k2': 2}).name == 'HC(2,2)'
        assert make_scheduler({'kind': 'sd', 'k': 3, 'name': 'sd3'}).name == 'sd3'

    def test_per_scheduler_params(self):
        scheduler = make_scheduler({'kind': 'greedy', 'params': {'t_min': 3.0}})
        assert scheduler.params.t_min == 3.0

    @pytest.mark.parametrize('spec', [
        'teleport',
        {'k1': 2},
        {'kind': 'dytc', 'k': 3},
        {'kind': 'greedy', 'params': {'nope': 1}},
        42,
    ])
    def test_invalid_specs(self, spec):
        with pytest.raises(ConfigError):
            make_scheduler(spec)
