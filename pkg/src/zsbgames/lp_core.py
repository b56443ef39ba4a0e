"""Sparse LP data model and solve contract.

All solver modules build `LinearProgram` instances (usually through
`LpBuilder`) and call `solve`, which is backed by scipy's HiGHS. HiGHS is
deterministic for identical input, which the rest of the package relies
on for reproducible strategy extraction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.optimize import linprog

from .errors import NumericalError

MIN = "min"
MAX = "max"

FEAS_TOL = 1e-6

_REL = ("<=", "=", ">=")


@dataclass
class LinearProgram:
    sense: str                       # "min" or "max"
    num_vars: int
    objective: list                  # [(var, coeff)]
    rows: list                       # [(coeffs list, relation, rhs)]
    bounds: list                     # [(lower, upper)] per variable

    def check(self) -> None:
        assert self.sense in (MIN, MAX)
        for var, _ in self.objective:
            assert 0 <= var < self.num_vars
        for coeffs, rel, rhs in self.rows:
            assert rel in _REL and math.isfinite(rhs)
            seen = set()
            for var, _ in coeffs:
                assert 0 <= var < self.num_vars and var not in seen
                seen.add(var)


@dataclass
class LpSolution:
    status: str                      # "optimal" | "infeasible" | "unbounded"
    objective_value: float
    primal: np.ndarray


class LpBuilder:
    """Incremental construction of a LinearProgram.

    Coefficients are accumulated per row, so duplicate variable mentions
    within one `add_row` call are merged.
    """

    def __init__(self):
        self._bounds = []
        self._rows = []

    def new_var(self, lower=-math.inf, upper=math.inf) -> int:
        self._bounds.append((lower, upper))
        return len(self._bounds) - 1

    def new_vars(self, count: int, lower=-math.inf, upper=math.inf) -> list[int]:
        return [self.new_var(lower, upper) for _ in range(count)]

    def add_row(self, coeffs: dict, rel: str, rhs: float) -> None:
        items = [(v, c) for v, c in coeffs.items() if c != 0.0]
        items.sort()
        self._rows.append((items, rel, float(rhs)))

    def build(self, sense: str, objective: dict) -> LinearProgram:
        obj = sorted((v, c) for v, c in objective.items() if c != 0.0)
        return LinearProgram(sense=sense, num_vars=len(self._bounds),
                             objective=obj, rows=list(self._rows),
                             bounds=list(self._bounds))


def _assemble(lp: LinearProgram):
    c = np.zeros(lp.num_vars)
    for var, coef in lp.objective:
        c[var] = coef
    if lp.sense == MAX:
        c = -c

    ub_data, ub_i, ub_j, ub_rhs = [], [], [], []
    eq_data, eq_i, eq_j, eq_rhs = [], [], [], []
    for coeffs, rel, rhs in lp.rows:
        if rel == "=":
            row = len(eq_rhs)
            eq_rhs.append(rhs)
            for var, coef in coeffs:
                eq_i.append(row)
                eq_j.append(var)
                eq_data.append(coef)
        else:
            sign = 1.0 if rel == "<=" else -1.0
            row = len(ub_rhs)
            ub_rhs.append(sign * rhs)
            for var, coef in coeffs:
                ub_i.append(row)
                ub_j.append(var)
                ub_data.append(sign * coef)

    a_ub = sp.csr_matrix((ub_data, (ub_i, ub_j)),
                         shape=(len(ub_rhs), lp.num_vars)) if ub_rhs else None
    a_eq = sp.csr_matrix((eq_data, (eq_i, eq_j)),
                         shape=(len(eq_rhs), lp.num_vars)) if eq_rhs else None
    return c, a_ub, np.array(ub_rhs), a_eq, np.array(eq_rhs)


def solve(lp: LinearProgram) -> LpSolution:
    """Solve with HiGHS. Raises NumericalError if the backend cannot classify."""
    c, a_ub, b_ub, a_eq, b_eq = _assemble(lp)
    res = linprog(c,
                  A_ub=a_ub, b_ub=b_ub if a_ub is not None else None,
                  A_eq=a_eq, b_eq=b_eq if a_eq is not None else None,
                  bounds=lp.bounds, method="highs")
    if res.status == 0:
        value = float(res.fun)
        if lp.sense == MAX:
            value = -value
        return LpSolution(status="optimal", objective_value=value,
                          primal=np.asarray(res.x, dtype=float))
    if res.status == 2:
        return LpSolution(status="infeasible", objective_value=math.nan,
                          primal=np.full(lp.num_vars, math.nan))
    if res.status == 3:
        return LpSolution(status="unbounded", objective_value=math.nan,
                          primal=np.full(lp.num_vars, math.nan))
    raise NumericalError(f"LP backend failed: status={res.status} ({res.message})")


def check_feasibility(lp: LinearProgram, point, tol: float = FEAS_TOL) -> list[dict]:
    """List of constraint/bound violations of `point` beyond `tol`."""
    x = np.asarray(point, dtype=float)
    if x.shape != (lp.num_vars,):
        raise ValueError(f"point has length {x.size}, expected {lp.num_vars}")
    report = []
    for idx, (coeffs, rel, rhs) in enumerate(lp.rows):
        lhs = sum(coef * x[var] for var, coef in coeffs)
        gap = lhs - rhs
        bad = ((rel == "<=" and gap > tol) or
               (rel == ">=" and gap < -tol) or
               (rel == "=" and abs(gap) > tol))
        if bad:
            report.append({"kind": "row", "index": idx, "relation": rel,
                           "violation": float(abs(gap))})
    for var, (lo, hi) in enumerate(lp.bounds):
        if x[var] < lo - tol or x[var] > hi + tol:
            report.append({"kind": "bound", "index": var,
                           "violation": float(max(lo - x[var], x[var] - hi))})
    return report


def write_lp_text(lp: LinearProgram, path) -> None:
    """Dump in CPLEX LP text format, for debugging with external tools."""
    def term(var, coef):
        sign = "+" if coef >= 0 else "-"
        return f" {sign} {abs(coef):.17g} x{var}"

    lines = ["Maximize" if lp.sense == MAX else "Minimize"]
    lines.append(" obj:" + "".join(term(v, c) for v, c in lp.objective))
    lines.append("Subject To")
    relmap = {"<=": "<=", ">=": ">=", "=": "="}
    for i, (coeffs, rel, rhs) in enumerate(lp.rows):
        body = "".join(term(v, c) for v, c in coeffs) or " 0 x0"
        lines.append(f" r{i}:{body} {relmap[rel]} {rhs:.17g}")
    lines.append("Bounds")
    for var, (lo, hi) in enumerate(lp.bounds):
        lo_s = "-inf" if lo == -math.inf else f"{lo:.17g}"
        hi_s = "+inf" if hi == math.inf else f"{hi:.17g}"
        lines.append(f" {lo_s} <= x{var} <= {hi_s}")
    lines.append("End")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
