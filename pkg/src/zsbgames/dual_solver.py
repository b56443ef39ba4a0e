"""Dual-game LPs.

Each dual LP is the other player's primal constraint system plus one
scalar variable linking the root weighted payoffs to the opponent's
initial vector payoff. Sharing the system builder with the primal module
keeps the two formulations structurally identical.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import lp_core
from .errors import SolverError
from .game_model import GameSpec
from .history_index import DEFAULT_MAX_VARS, build_index
from .lp_core import LpBuilder
from .primal_solver import (BehavioralStrategy, RealizationPlan,
                            add_sequence_system, extract_strategy,
                            plan_from_solution)


@dataclass
class DualResult:
    value: float
    strategy: BehavioralStrategy
    plan: RealizationPlan
    weighted_payoffs: dict          # (t, hid) on the plan owner's opponent side


def solve_dual1(spec: GameSpec, mu, q, n: int, lam: float,
                max_vars: int = DEFAULT_MAX_VARS) -> DualResult:
    """Value of the dual game where player 1 picks its own initial state
    against the vector payoff `mu`, plus player 2's security strategy."""
    mu = np.asarray(mu, dtype=float)
    q = np.asarray(q, dtype=float)
    index = build_index(spec, n, max_vars=max_vars)
    builder = LpBuilder()
    s_vars, z_vars = add_sequence_system(builder, spec, index, 2, n, lam, q)
    z0 = builder.new_var()
    for k in range(spec.num_k):
        root = z_vars[(1, index.id_of(1, 1, (k,), ()))]
        builder.add_row({root: 1.0, z0: -1.0}, "<=", -float(mu[k]))
    lp = builder.build(lp_core.MIN, {z0: 1.0})
    sol = lp_core.solve(lp)
    if sol.status != "optimal":
        raise SolverError(f"dual-1 LP returned {sol.status}")
    plan = plan_from_solution(index, 2, n, s_vars, sol.primal, q)
    strategy = extract_strategy(plan, spec)
    payoffs = {key: float(sol.primal[var]) for key, var in z_vars.items()}
    return DualResult(value=sol.objective_value, strategy=strategy,
                      plan=plan, weighted_payoffs=payoffs)


def solve_dual2(spec: GameSpec, p, nu, n: int, lam: float,
                max_vars: int = DEFAULT_MAX_VARS) -> DualResult:
    """Value of the dual game where player 2 picks its own initial state
    against the vector payoff `nu`, plus player 1's security strategy."""
    p = np.asarray(p, dtype=float)
    nu = np.asarray(nu, dtype=float)
    index = build_index(spec, n, max_vars=max_vars)
    builder = LpBuilder()
    r_vars, u_vars = add_sequence_system(builder, spec, index, 1, n, lam, p)
    u0 = builder.new_var()
    for l in range(spec.num_l):
        root = u_vars[(1, index.id_of(2, 1, (l,), ()))]
        builder.add_row({root: 1.0, u0: -1.0}, ">=", -float(nu[l]))
    lp = builder.build(lp_core.MAX, {u0: 1.0})
    sol = lp_core.solve(lp)
    if sol.status != "optimal":
        raise SolverError(f"dual-2 LP returned {sol.status}")
    plan = plan_from_solution(index, 1, n, r_vars, sol.primal, p)
    strategy = extract_strategy(plan, spec)
    payoffs = {key: float(sol.primal[var]) for key, var in u_vars.items()}
    return DualResult(value=sol.objective_value, strategy=strategy,
                      plan=plan, weighted_payoffs=payoffs)
