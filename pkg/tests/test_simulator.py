import io

import numpy as np
import pytest

from zsbgames import run_episode, run_monte_carlo
from zsbgames.simulator import write_results_csv

from conftest import constant_spec, random_spec


class UniformAgent:
    def __init__(self, num_actions):
        self.num_actions = num_actions
        self.seen = []

    def begin_episode(self, own_state):
        self.seen = [own_state]

    def act(self):
        return np.full(self.num_actions, 1.0 / self.num_actions)

    def observe(self, a, b, own_next_state):
        self.seen.append(own_next_state)


def test_episode_deterministic_given_seed(rng):
    spec = random_spec(rng, horizon=4)
    t1 = run_episode(spec, UniformAgent(2), UniformAgent(2), 99)
    t2 = run_episode(spec, UniformAgent(2), UniformAgent(2), 99)
    assert t1.total == t2.total
    assert [(r.k, r.l, r.a, r.b) for r in t1.records] == \
           [(r.k, r.l, r.a, r.b) for r in t2.records]


def test_episode_total_is_discounted_sum(rng):
    spec = random_spec(rng, horizon=3)
    trace = run_episode(spec, UniformAgent(2), UniformAgent(2), 7)
    want = sum(spec.lam ** (r.t - 1) * spec.payoff[r.k, r.l, r.a, r.b]
               for r in trace.records)
    assert trace.total == pytest.approx(want, abs=1e-12)
    assert [r.t for r in trace.records] == [1, 2, 3]


def test_constant_payoff_total_exact():
    spec = constant_spec(c=2.0, lam=0.5, horizon=3)
    trace = run_episode(spec, UniformAgent(2), UniformAgent(2), 0)
    assert trace.total == pytest.approx(2.0 * (1 + 0.5 + 0.25), abs=1e-12)


def test_agents_observe_every_stage(rng):
    spec = random_spec(rng, horizon=4)
    a1, a2 = UniformAgent(2), UniformAgent(2)
    run_episode(spec, a1, a2, 3)
    assert len(a1.seen) == 4 and len(a2.seen) == 4


def test_monte_carlo_seeds_and_stats(rng):
    spec = random_spec(rng, horizon=2)
    res = run_monte_carlo(spec, lambda: UniformAgent(2),
                          lambda: UniformAgent(2), 50, base_seed=10)
    assert res.seeds == list(range(10, 60))
    assert res.mean == pytest.approx(res.totals.sum() / 50, abs=0)
    assert res.stddev == pytest.approx(float(res.totals.std(ddof=1)), abs=0)
    assert res.stderr == pytest.approx(res.stddev / np.sqrt(50), abs=0)


def test_monte_carlo_single_run_has_zero_spread(rng):
    spec = random_spec(rng, horizon=2)
    res = run_monte_carlo(spec, lambda: UniformAgent(2),
                          lambda: UniformAgent(2), 1, base_seed=0)
    assert res.stddev == 0.0 and res.stderr == 0.0


def test_results_csv_layout(rng):
    spec = random_spec(rng, horizon=2)
    res = run_monte_carlo(spec, lambda: UniformAgent(2),
                          lambda: UniformAgent(2), 3, base_seed=4)
    buf = io.StringIO()
    write_results_csv(res, buf)
    lines = buf.getvalue().strip().splitlines()
    assert lines[0] == "seed,total"
    assert len(lines) == 6 and lines[4] == "runs,mean,stddev,stderr"
    assert lines[1].startswith("4,")
    assert lines[5].split(",")[0] == "3"
