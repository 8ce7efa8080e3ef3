import json

import numpy as np
import pytest

from calculations import VcParams, ewif_vc
from estimation.calibration import TARGET_ID
from scheduling import HCScheduler, SDScheduler, VCScheduler, make_scheduler
from scheduling.base import Expansion, Scheduler, TreeBuild
from simulation import PRESETS, DecodeSession, Scenario, build_hierarchy, make_scenario, run_decode
from utils.exceptions import InvariantError

SCHEDULER_SPECS = [
    'dytc',
    'greedy',
    'autoregressive',
    {'kind': 'sd', 'k': 3},
    {'kind': 'chain_tree', 'k': 3},
    {'kind': 'hc', 'k1': 2, 'k2': 2},
    {'kind': 'vc', 'n': 2, 'k': 2},
    {'kind': 'hc_vc', 'n': 2, 'k': 2, 'k_tail': 2},
]


def _run(scenario, spec, seed=0, **kwargs):
    return run_decode(scenario, make_scheduler(spec, scenario.default_params()), seed, **kwargs)


class SiblingHitScheduler(Scheduler):
    """One d2 expansion at the root whose rank-0 token is wrong and whose sibling is right."""
    name = 'sibling_hit'
    uses_estimates = True

    def build_tree(self, session):
        tree = self.new_tree(session)
        reference = session.truth.token_at(session.position)
        main = tree.add_child(tree.root, (reference + 1) % session.scenario.vocab_size, 0.8, 'd2')
        sibling = tree.add_child(tree.root, reference, 0.1, 'd2')
        expansion = Expansion('d2', 1, 0, 1, nodes=[main, sibling], estimator_key='d2')
        return TreeBuild(tree=tree, expansions=[expansion], stop_reason='stop_rule')


class TestLosslessness:
    @pytest.mark.parametrize('preset', sorted(PRESETS))
    @pytest.mark.parametrize('spec', SCHEDULER_SPECS, ids=str)
    def test_every_scheduler_reproduces_the_target(self, preset, spec):
        scenario = make_scenario(preset, horizon=40)
        result = _run(scenario, spec, seed=1)
        session = DecodeSession(scenario, scenario.default_params(), 1)
        assert tuple(result.decoded) == session.truth.slice(scenario.prompt_length, scenario.prompt_length + 40)
        assert result.tokens_generated == 40

    def test_divergence_is_an_invariant_violation(self, counterexample_scenario, monkeypatch):
        monkeypatch.setattr('simulation.decode_runner.is_prefix_of', lambda *args: False)
        with pytest.raises(InvariantError):
            _run(counterexample_scenario, 'greedy')


class TestCostAccounting:
    def test_ledger_matches_reported_cost(self, two_tier_scenario):
        result = _run(two_tier_scenario, 'dytc', seed=4)
        assert sum(result.cost_by_model.values()) == pytest.approx(result.cost_units)
        assert result.cost_by_model[TARGET_ID] == pytest.approx(result.cycles)
        assert result.empirical_ewif == pytest.approx(result.tokens_generated / result.cost_units)

    def test_autoregressive_is_the_unit_baseline(self, counterexample_scenario):
        result = _run(counterexample_scenario, 'autoregressive')
        assert result.empirical_ewif == 1.0
        assert result.cycles == counterexample_scenario.horizon
        assert result.cost_by_model == {TARGET_ID: float(counterexample_scenario.horizon)}

    def test_static_draft_costs(self, counterexample_scenario):
        result = _run(counterexample_scenario, {'kind': 'sd', 'k': 3})
        assert result.cost_by_model['d1'] == pytest.approx(1.2 * result.cycles)


class TestEquivalentSchedules:
    def test_single_round_cascade_without_inner_draft_is_one_token_sd(self, counterexample_scenario):
        params = counterexample_scenario.default_params()
        cascade = run_decode(counterexample_scenario, VCScheduler(1, 0, params=params), seed=8)
        plain = run_decode(counterexample_scenario, SDScheduler(1, params=params), seed=8)
        assert cascade.decoded == plain.decoded
        assert cascade.cycles == plain.cycles
        assert cascade.cost_units == pytest.approx(plain.cost_units)

    def test_horizontal_cascade_without_first_draft_is_sd_of_second(self, counterexample_scenario):
        params = counterexample_scenario.default_params()
        cascade = run_decode(counterexample_scenario, HCScheduler(0, 3, params=params), seed=8)
        plain = run_decode(counterexample_scenario, SDScheduler(3, model='d2', params=params), seed=8)
        assert cascade.cycles == plain.cycles
        assert cascade.cost_units == pytest.approx(plain.cost_units)


class TestRunBehavior:
    def test_same_seed_same_result(self, two_tier_scenario):
        first = _run(two_tier_scenario, 'dytc', seed=6)
        second = _run(two_tier_scenario, 'dytc', seed=6)
        assert first.to_row() == second.to_row()
        assert first.config_counts == second.config_counts

    def test_calibration_runs_as_real_decoding(self, two_tier_scenario):
        session = DecodeSession(two_tier_scenario, two_tier_scenario.default_params(), 2)
        cycles = session.run_calibration()
        assert cycles == 6
        assert session.cycle == 6
        assert len(session.ledger) == 12
        assert session.position == two_tier_scenario.prompt_length + len(session.decoded)

    def test_step_log_records_are_json(self, counterexample_scenario):
        result = _run(counterexample_scenario, 'dytc', keep_step_log=True)
        assert len(result.step_log) == result.cycles
        first = result.step_log[0]
        assert first['config'] == 'd2'
        assert first['stop_reason'] == 'stop_rule'
        assert first['objective'] == pytest.approx(0.96 / 0.31, abs=1e-5)
        assert first['runner_up'] == 'd1'
        json.dumps(result.step_log)

    def test_single_candidate_keeps_a_constant_length(self):
        hierarchy = build_hierarchy([
            {'id': 'd1', 'kind': 'neural_sim', 'alpha': 0.8, 'cost': 0.3},
            {'id': 'pld', 'kind': 'ngram_pld', 'alpha': 0.3, 'cost': 0.01},
        ])
        scenario = Scenario('single', hierarchy, horizon=150, param_overrides={
            'estimates': 'perfect', 'candidate_set': 'drafts', 'sibling_expansion': False})
        result = _run(scenario, 'dytc', keep_step_log=True)
        lengths = {step['k'] for step in result.step_log}
        assert len(lengths) == 1
        assert {step['config'] for step in result.step_log} == {'d1'}

    def test_step_log_off_by_default_argument(self, counterexample_scenario):
        assert _run(counterexample_scenario, 'greedy', keep_step_log=False).step_log == []

    def test_online_runs_record_estimates(self, two_tier_scenario):
        result = _run(two_tier_scenario, 'dytc', keep_step_log=True)
        assert set(result.step_log[-1]['estimates']) >= {'d1', 'd2', 'pld'}

    @pytest.mark.parametrize('update_all', [False, True])
    def test_sibling_match_is_not_a_first_token_hit(self, two_tier_scenario, update_all):
        params = two_tier_scenario.default_params().with_overrides(
            {'calibration_steps': 0, 'update_all_expansions': update_all})
        result = run_decode(two_tier_scenario, SiblingHitScheduler(params), 0, keep_step_log=True)
        assert all(record['accepted'] == 1 for record in result.step_log)
        assert result.step_log[-1]['estimates']['d2'] == pytest.approx(0.0, abs=1e-3)



class TestOnlinePresets:
    @pytest.mark.parametrize('preset', ['two_tier', 'shift', 'mixture'])
    def test_dytc_speeds_up_decoding(self, preset):
        scenario = make_scenario(preset, horizon=2000)
        for seed in (0, 1):
            assert _run(scenario, 'dytc', seed).empirical_ewif > 1.05

    def test_dytc_keeps_drafting_without_repetition(self):
        scenario = make_scenario('pld_poor', horizon=1000)
        result = _run(scenario, 'dytc', keep_step_log=True)
        drafted = [record['config'] is not None for record in result.step_log]
        assert np.mean(drafted) >= 0.99


class TestCounterexample:
    SEEDS = [0, 1]
    HORIZON = 10_000

    def _ewifs(self, spec, seeds, horizon):
        scenario = make_scenario('counterexample', horizon=horizon)
        return [_run(scenario, spec, seed, keep_step_log=False).empirical_ewif for seed in seeds]

    def test_horizontal_cascade_beats_greedy(self):
        greedy = self._ewifs('greedy', self.SEEDS, self.HORIZON)
        hc = self._ewifs({'kind': 'hc', 'k1': 2, 'k2': 2}, self.SEEDS, self.HORIZON)
        assert np.mean(greedy) == pytest.approx(1.55368, rel=0.02)
        assert np.mean(hc) == pytest.approx(1.61517, rel=0.02)
        assert np.mean(hc) > np.mean(greedy)

    @pytest.mark.slow
    def test_horizontal_cascade_beats_greedy_on_every_seed(self):
        seeds = range(100)
        greedy = self._ewifs('greedy', seeds, 100_000)
        hc = self._ewifs({'kind': 'hc', 'k1': 2, 'k2': 2}, seeds, 100_000)
        assert np.mean(greedy) == pytest.approx(1.55368, rel=0.01)
        assert np.mean(hc) == pytest.approx(1.61517, rel=0.01)
        assert all(h > g for g, h in zip(greedy, hc))

    @pytest.mark.slow
    @pytest.mark.parametrize('n, k', [(1, 1), (2, 2), (3, 3)])
    def test_vertical_cascade_matches_closed_form(self, n, k):
        simulated = self._ewifs({'kind': 'vc', 'n': n, 'k': k}, [0], 150_000)[0]
        assert simulated == pytest.approx(ewif_vc(VcParams(0.9, 0.8, 0.4, 0.3, n, k)), rel=0.01)
