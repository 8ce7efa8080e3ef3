import pytest

from scheduling import make_scheduler
from simulation import (
    PRESETS,
    Regime,
    Scenario,
    build_hierarchy,
    compare_to_baseline,
    make_scenario,
    run_ensemble,
)
from simulation.scenario import DEFAULT_PROMPT_LENGTH
from utils.exceptions import ConfigError

MODELS = [
    {'id': 'd1', 'kind': 'neural_sim', 'alpha': 0.9, 'cost': 0.4},
    {'id': 'd2', 'kind': 'neural_sim', 'alpha': [[0, 0.8], [100, 0.5]], 'cost': 0.3},
    {'id': 'pld', 'kind': 'ngram_pld', 'alpha': 0.2, 'cost': 0.01},
]


class TestScenarios:
    @pytest.mark.parametrize('preset', sorted(PRESETS))
    def test_presets_are_valid(self, preset):
        scenario = make_scenario(preset, horizon=64)
        assert scenario.horizon == 64
        assert scenario.hierarchy.bottom_model.id == 'pld'
        scenario.default_params()

    def test_counterexample_uses_perfect_estimates(self, counterexample_scenario):
        params = counterexample_scenario.default_params()
        assert params.estimates == 'perfect'
        assert params.t_min == 11.5
        assert params.candidate_set == 'drafts'

    def test_shift_takes_effect_at_the_shift_step(self):
        scenario = make_scenario('shift', horizon=200)
        assert scenario.regime is Regime.SHIFT
        d2 = scenario.hierarchy.get('d2')
        start = DEFAULT_PROMPT_LENGTH + scenario.shift_step
        assert d2.alpha_at(start - 1) == 0.8
        assert d2.alpha_at(start) == 0.5

    def test_pld_poor_has_no_repetition(self):
        assert make_scenario('pld_poor', horizon=64).repeat_bias == 0.0

    def test_alternate_preset_name_builds_the_two_tier_scenario(self):
        scenario = make_scenario('appendix_e', horizon=64)
        assert scenario.name == 'two_tier'
        assert scenario.hierarchy.ids == ['d1', 'd2', 'pld']

    def test_unknown_preset(self):
        with pytest.raises(ConfigError):
            make_scenario('nowhere')

    def test_invalid_scenario_reports_every_problem(self, counterexample):
        with pytest.raises(ConfigError) as excinfo:
            Scenario('bad', counterexample, horizon=0, repeat_bias=2.0)
        assert len(excinfo.value.problems) == 2

    def test_shift_needs_a_step_inside_the_horizon(self, counterexample):
        with pytest.raises(ConfigError):
            Scenario('bad', counterexample, horizon=10, regime='shift', shift_step=10)

    def test_truth_stream_covers_the_horizon(self, two_tier_scenario):
        truth = two_tier_scenario.make_truth(5)
        assert len(truth) > two_tier_scenario.prompt_length + two_tier_scenario.horizon


class TestBuildHierarchy:
    def test_from_mappings(self):
        hierarchy = build_hierarchy(MODELS)
        assert hierarchy.ids == ['d1', 'd2', 'pld']
        assert hierarchy.get('d2').alpha_at(150) == 0.5

    def test_missing_keys_and_bad_kinds_are_collected(self):
        with pytest.raises(ConfigError) as excinfo:
            build_hierarchy([{'id': 'd1', 'kind': 'neural_sim'},
                             {'id': 'd2', 'kind': 'transformer', 'alpha': 0.5, 'cost': 0.3}])
        assert len(excinfo.value.problems) == 2

    def test_empty_list(self):
        with pytest.raises(ConfigError):
            build_hierarchy([])

    def test_inline_scenario_rejects_invalid_ordering(self):
        reversed_models = [MODELS[1], MODELS[0], MODELS[2]]
        with pytest.raises(ConfigError):
            Scenario('custom', build_hierarchy(reversed_models))


class TestEnsemble:
    def _schedulers(self, scenario):
        params = scenario.default_params()
        return [make_scheduler(spec, params)
                for spec in ('autoregressive', 'greedy', {'kind': 'hc', 'k1': 2, 'k2': 2})]

    def test_tables_cover_every_pair(self, counterexample_scenario):
        result = run_ensemble(counterexample_scenario, self._schedulers(counterexample_scenario),
                              seeds=[0, 1, 2])
        assert len(result.runs) == 9
        assert list(result.summary['scheduler']) == ['autoregressive', 'greedy', 'HC(2,2)']
        assert (result.summary['seeds'] == 3).all()
        assert (result.summary['ci_low'] <= result.summary['mean']).all()

    def test_worker_count_does_not_change_results(self, counterexample_scenario):
        schedulers = self._schedulers(counterexample_scenario)
        serial = run_ensemble(counterexample_scenario, schedulers, seeds=[0, 1], workers=1)
        threaded = run_ensemble(counterexample_scenario, schedulers, seeds=[0, 1], workers=3)
        assert serial.runs.equals(threaded.runs)

    def test_compare_against_autoregressive(self, counterexample_scenario):
        result = run_ensemble(counterexample_scenario, self._schedulers(counterexample_scenario),
                              seeds=[0, 1])
        table = compare_to_baseline(result.runs, 'autoregressive').set_index('scheduler')
        assert table.loc['autoregressive', 'mean'] == 1.0
        assert table.loc['autoregressive', 'wins'] == 0
        assert table.loc['HC(2,2)', 'mean'] > 1.0
        assert list(table.columns) == ['seeds', 'mean', 'std', 'ci_low', 'ci_high', 'wins']

    def test_unknown_baseline(self, counterexample_scenario):
        result = run_ensemble(counterexample_scenario, self._schedulers(counterexample_scenario)[:1],
                              seeds=[0])
        with pytest.raises(ConfigError):
            compare_to_baseline(result.runs, 'dytc')

    @pytest.mark.parametrize('seeds, count', [([0], 0), ([], 1)])
    def test_empty_inputs(self, counterexample_scenario, seeds, count):
        schedulers = self._schedulers(counterexample_scenario)[:count]
        with pytest.raises(ConfigError):
            run_ensemble(counterexample_scenario, schedulers, seeds=seeds)

    def test_duplicate_names(self, counterexample_scenario):
        twice = [make_scheduler('greedy'), make_scheduler('greedy')]
        with pytest.raises(ConfigError):
            run_ensemble(counterexample_scenario, twice, seeds=[0])


@pytest.mark.slow
class TestDominance:
    """DyTC grows trees with sibling candidates; the baselines draft single chains."""
    SEEDS = list(range(100))
    HORIZON = 2000
    TREE_MODE = {'sibling_expansion': True, 'top_p': 0.08}

    def _summary(self, scenario, params, statics):
        specs = [{'kind': 'dytc', 'params': self.TREE_MODE}, 'greedy'] + statics
        schedulers = [make_scheduler(spec, params) for spec in specs]
        result = run_ensemble(scenario, schedulers, seeds=self.SEEDS)
        return result.summary.set_index('scheduler')['mean']

    def test_dytc_beats_every_chain_schedule_on_the_counterexample(self):
        scenario = make_scenario('counterexample', horizon=self.HORIZON)
        means = self._summary(scenario, scenario.default_params(), [
            {'kind': 'sd', 'k': 4},
            {'kind': 'hc', 'k1': 2, 'k2': 2},
            {'kind': 'vc', 'n': 2, 'k': 1},
        ])
        # three d2 tokens, each backed by one sibling that holds the truth half the time
        assert means['dytc'] == pytest.approx(3.196 / 1.9, rel=0.01)
        assert means['HC(2,2)'] == pytest.approx(1.61517, rel=0.01)
        assert means['dytc'] > means.drop('dytc').max()

    def test_dytc_beats_every_chain_schedule_across_a_shift(self):
        scenario = make_scenario('shift', horizon=self.HORIZON)
        params = scenario.default_params().with_overrides({
            'estimates': 'perfect',
            'candidate_set': 'drafts',
            'calibration_steps': 0,
            't_min': 17.0,
            'sibling_expansion': False,
        })
        means = self._summary(scenario, params, [
            {'kind': 'sd', 'k': 3},
            {'kind': 'hc', 'k1': 3, 'k2': 1},
            {'kind': 'hc', 'k1': 2, 'k2': 2},
            {'kind': 'vc', 'n': 2, 'k': 1},
        ])
        # d2 chains before the shift, d1 chains after it
        assert means['greedy'] == pytest.approx(1.4873, rel=0.02)
        assert means['dytc'] == pytest.approx(1.5960, rel=0.02)
        assert means['dytc'] > means.drop('dytc').max()
