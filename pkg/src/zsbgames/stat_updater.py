"""Sufficient-statistic updates: Bayes rules for beliefs, joint LPs for
vector payoffs.

The vector-payoff update LP couples one sub-system per action pair
(a, b): a shortened (horizon n-1) opponent-side sequence system rooted at
the posterior belief for that pair, a scalar tail value, and the new
vector payoff itself. The coupling scalar equals the dual-game value, so
only one LP solve is needed per stage even though all action pairs'
candidate payoffs are produced.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import lp_core
from .errors import SolverError, ValidationError
from .game_model import GameSpec
from .history_index import DEFAULT_MAX_VARS, build_index
from .lp_core import LpBuilder
from .primal_solver import add_sequence_system

DEGENERATE_TOL = 1e-9


def check_stage_strategy(matrix: np.ndarray, name: str = "stage strategy") -> None:
    """Columns must be probability distributions over actions."""
    m = np.asarray(matrix, dtype=float)
    if np.any(m < -1e-6):
        raise ValidationError(f"{name} has a negative entry")
    sums = m.sum(axis=0)
    if np.any(np.abs(sums - 1.0) > 1e-6):
        raise ValidationError(f"{name} columns sum to {sums}, expected 1")


def update_belief_p(spec: GameSpec, p, X, a: int, b: int) -> np.ndarray:
    """Posterior over player 1's next state after seeing action pair (a, b).

    X[a', k] is the modeled probability that player 1 plays a' in state k.
    If the observed action has (near) zero prior likelihood the likelihood
    factor is dropped and the prior is pushed through the transition.
    """
    p = np.asarray(p, dtype=float)
    X = np.asarray(X, dtype=float)
    xbar = float(np.dot(p, X[a]))
    if xbar <= DEGENERATE_TOL:
        post = spec.trans_p[a, b].T @ p
    else:
        post = spec.trans_p[a, b].T @ (p * X[a] / xbar)
    total = float(post.sum())
    return post / total if total > 0 else np.full_like(post, 1.0 / post.size)


def update_belief_q(spec: GameSpec, q, Y, a: int, b: int) -> np.ndarray:
    """Posterior over player 2's next state; Y[b', l] mirrors X above."""
    q = np.asarray(q, dtype=float)
    Y = np.asarray(Y, dtype=float)
    ybar = float(np.dot(q, Y[b]))
    if ybar <= DEGENERATE_TOL:
        post = spec.trans_q[a, b].T @ q
    else:
        post = spec.trans_q[a, b].T @ (q * Y[b] / ybar)
    total = float(post.sum())
    return post / total if total > 0 else np.full_like(post, 1.0 / post.size)


@dataclass
class UpdateResult:
    vector: np.ndarray              # new vector payoff for the observed pair
    w: float                        # dual-game value at the pre-update statistic
    all_vectors: dict               # (a, b) -> candidate vector payoff


def update_mu(spec: GameSpec, mu, q, y_star, a: int, b: int, n: int,
              lam: float, max_vars: int = DEFAULT_MAX_VARS) -> UpdateResult:
    """Next vector payoff over player 1's states for player 2's statistic.

    `y_star` must be player 2's stage-1 strategy of the n-stage dual game
    at (mu, q); the returned scalar then equals that dual game's value.
    """
    mu = np.asarray(mu, dtype=float)
    q = np.asarray(q, dtype=float)
    y_star = np.asarray(y_star, dtype=float)
    ybar = y_star @ q                              # ybar[b'] = sum_l q(l) Y(b', l)

    builder = LpBuilder()
    rho = builder.new_var()
    sub_index = build_index(spec, n - 1, max_vars=max_vars) if n >= 2 else None
    z0_vars, beta_vars = {}, {}
    for aa in range(spec.num_a):
        for bb in range(spec.num_b):
            z0_vars[(aa, bb)] = builder.new_var()
            beta_vars[(aa, bb)] = builder.new_vars(spec.num_k)
            if n >= 2:
                q_plus = update_belief_q(spec, q, y_star, aa, bb)
                _, z_vars = add_sequence_system(builder, spec, sub_index, 2,
                                                n - 1, lam, q_plus)
                for k in range(spec.num_k):
                    root = z_vars[(1, sub_index.id_of(1, 1, (k,), ()))]
                    builder.add_row({beta_vars[(aa, bb)][k]: 1.0, root: 1.0,
                                     z0_vars[(aa, bb)]: -1.0}, "<=", 0.0)
            else:
                for k in range(spec.num_k):
                    builder.add_row({beta_vars[(aa, bb)][k]: 1.0,
                                     z0_vars[(aa, bb)]: -1.0}, "<=", 0.0)

    for aa in range(spec.num_a):
        for k in range(spec.num_k):
            coeffs = {rho: 1.0}
            rhs = float(mu[k])
            for bb in range(spec.num_b):
                rhs += float(np.dot(spec.payoff[k, :, aa, bb] * q, y_star[bb]))
                coeffs[z0_vars[(aa, bb)]] = -lam * float(ybar[bb])
                for k2 in range(spec.num_k):
                    var = beta_vars[(aa, bb)][k2]
                    coeffs[var] = coeffs.get(var, 0.0) + \
                        lam * float(ybar[bb]) * spec.trans_p[aa, bb, k, k2]
            builder.add_row(coeffs, ">=", rhs)

    lp = builder.build(lp_core.MIN, {rho: 1.0})
    sol = lp_core.solve(lp)
    if sol.status != "optimal":
        raise SolverError(f"vector-payoff update LP (type 1) returned {sol.status}")
    all_vectors = {key: np.array([sol.primal[v] for v in vars_])
                   for key, vars_ in beta_vars.items()}
    return UpdateResult(vector=all_vectors[(a, b)],
                        w=sol.objective_value, all_vectors=all_vectors)


def update_nu(spec: GameSpec, nu, p, x_star, a: int, b: int, n: int,
              lam: float, max_vars: int = DEFAULT_MAX_VARS) -> UpdateResult:
    """Next vector payoff over player 2's states for player 1's statistic.

    Mirror of update_mu: `x_star` is player 1's stage-1 strategy of the
    n-stage dual game at (p, nu).
    """
    nu = np.asarray(nu, dtype=float)
    p = np.asarray(p, dtype=float)
    x_star = np.asarray(x_star, dtype=float)
    xbar = x_star @ p                              # xbar[a'] = sum_k p(k) X(a', k)

    builder = LpBuilder()
    phi = builder.new_var()
    sub_index = build_index(spec, n - 1, max_vars=max_vars) if n >= 2 else None
    u0_vars, alpha_vars = {}, {}
    for aa in range(spec.num_a):
        for bb in range(spec.num_b):
            u0_vars[(aa, bb)] = builder.new_var()
            alpha_vars[(aa, bb)] = builder.new_vars(spec.num_l)
            if n >= 2:
                p_plus = update_belief_p(spec, p, x_star, aa, bb)
                _, u_vars = add_sequence_system(builder, spec, sub_index, 1,
                                                n - 1, lam, p_plus)
                for l in range(spec.num_l):
                    root = u_vars[(1, sub_index.id_of(2, 1, (l,), ()))]
                    builder.add_row({alpha_vars[(aa, bb)][l]: 1.0, root: 1.0,
                                     u0_vars[(aa, bb)]: -1.0}, ">=", 0.0)
            else:
                for l in range(spec.num_l):
                    builder.add_row({alpha_vars[(aa, bb)][l]: 1.0,
                                     u0_vars[(aa, bb)]: -1.0}, ">=", 0.0)

    for bb in range(spec.num_b):
        for l in range(spec.num_l):
            coeffs = {phi: 1.0}
            rhs = float(nu[l])
            for aa in range(spec.num_a):
                rhs += float(np.dot(spec.payoff[:, l, aa, bb] * p, x_star[aa]))
                coeffs[u0_vars[(aa, bb)]] = -lam * float(xbar[aa])
                for l2 in range(spec.num_l):
                    var = alpha_vars[(aa, bb)][l2]
                    coeffs[var] = coeffs.get(var, 0.0) + \
                        lam * float(xbar[aa]) * spec.trans_q[aa, bb, l, l2]
            builder.add_row(coeffs, "<=", rhs)

    lp = builder.build(lp_core.MAX, {phi: 1.0})
    sol = lp_core.solve(lp)
    if sol.status != "optimal":
        raise SolverError(f"vector-payoff update LP (type 2) returned {sol.status}")
    all_vectors = {key: np.array([sol.primal[v] for v in vars_])
                   for key, vars_ in alpha_vars.items()}
    return UpdateResult(vector=all_vectors[(a, b)],
                        w=sol.objective_value, all_vectors=all_vectors)
