import numpy as np
import pytest

from zsbgames import best_response_vs_p1, best_response_vs_p2, solve_primal
from zsbgames.primal_solver import RealizationPlan
from zsbgames.history_index import build_index

from conftest import random_spec


def _uniform_plan(spec, side, n):
    """Realization plan of the uniform behavioral strategy."""
    index = build_index(spec, n)
    root = spec.p0 if side == 1 else spec.q0
    num_acts = spec.num_a if side == 1 else spec.num_b
    trans = spec.trans_p if side == 1 else spec.trans_q
    values = {}
    for t in range(1, n + 1):
        for hid, (states, acts) in enumerate(index.histories(side, t)):
            reach = float(root[states[0]])
            for s, (a, b) in enumerate(acts):
                reach *= trans[a, b, states[s], states[s + 1]] / num_acts
            for act in range(num_acts):
                values[(t, hid, act)] = reach / num_acts
    return RealizationPlan(side=side, depth=n, index=index,
                           root=np.asarray(root, dtype=float), values=values)


def test_security_level_of_optimal_plans(rng):
    for _ in range(5):
        spec = random_spec(rng, num_k=2, num_l=2, num_a=2, num_b=2, horizon=2)
        r1 = solve_primal(spec, spec.p0, spec.q0, 2, spec.lam, 1)
        br = best_response_vs_p1(spec, r1.plan, spec.q0, 2, spec.lam)
        assert br.value == pytest.approx(r1.value, abs=1e-7)
        r2 = solve_primal(spec, spec.p0, spec.q0, 2, spec.lam, 2)
        br2 = best_response_vs_p2(spec, r2.plan, spec.p0, 2, spec.lam)
        assert br2.value == pytest.approx(r2.value, abs=1e-7)


def test_uniform_plan_is_exploitable(rng):
    """The value against a best response brackets the game value."""
    spec = random_spec(rng, num_k=2, num_l=2, num_a=2, num_b=2, horizon=2)
    value = solve_primal(spec, spec.p0, spec.q0, 2, spec.lam, 1).value
    vs_p1 = best_response_vs_p1(spec, _uniform_plan(spec, 1, 2),
                                spec.q0, 2, spec.lam)
    vs_p2 = best_response_vs_p2(spec, _uniform_plan(spec, 2, 2),
                                spec.p0, 2, spec.lam)
    assert vs_p1.value <= value + 1e-7      # opponent minimizes against p1
    assert vs_p2.value >= value - 1e-7      # opponent maximizes against p2


def test_payoff_map_consistent_with_value(rng):
    spec = random_spec(rng, num_k=2, num_l=3, num_a=2, num_b=2, horizon=2)
    r1 = solve_primal(spec, spec.p0, spec.q0, 2, spec.lam, 1)
    br = best_response_vs_p1(spec, r1.plan, spec.q0, 2, spec.lam)
    index = r1.plan.index
    roots = np.array([br.payoff_map[(1, index.id_of(2, 1, (l,), ()))]
                      for l in range(spec.num_l)])
    assert float(spec.q0 @ roots) == pytest.approx(br.value, abs=1e-7)


def test_wrong_plan_side_rejected(rng):
    spec = random_spec(rng, horizon=2)
    r1 = solve_primal(spec, spec.p0, spec.q0, 2, spec.lam, 1)
    with pytest.raises(ValueError):
        best_response_vs_p2(spec, r1.plan, spec.p0, 2, spec.lam)
