"""
Shared fixtures: preset hierarchies, short-horizon scenarios and sessions.
"""

import pytest

from drafting.model_spec import counterexample_hierarchy, two_tier_hierarchy
from drafting.token_stream import make_corpus
from simulation.scenario import make_scenario
from simulation.session import DecodeSession


@pytest.fixture(autouse=True)
def _isolated_output_dir(monkeypatch):
    # the environment override would redirect every CLI test's output
    monkeypatch.delenv('CASCADE_OUTPUT_DIR', raising=False)


@pytest.fixture
def counterexample():
    return counterexample_hierarchy()


@pytest.fixture
def two_tier():
    return two_tier_hierarchy()


@pytest.fixture
def truth():
    return make_corpus(seed=7, length=2000, repeat_bias=0.5)


@pytest.fixture
def counterexample_scenario():
    return make_scenario('counterexample', horizon=200)


@pytest.fixture
def two_tier_scenario():
    return make_scenario('two_tier', horizon=200)


@pytest.fixture
def counterexample_session(counterexample_scenario):
    return DecodeSession(counterexample_scenario, counterexample_scenario.default_params(), seed=3)


@pytest.fixture
def two_tier_session(two_tier_scenario):
    return DecodeSession(two_tier_scenario, two_tier_scenario.default_params(), seed=3)
