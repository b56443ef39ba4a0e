import numpy as np
import pytest

from zsbgames import GameSpec, load_case_study

# one line per acceptance criterion, echoed after the run so pass/fail
# verdicts survive pytest's output capture
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_spec(rng, num_k=2, num_l=2, num_a=2, num_b=2, horizon=2,
                lam=0.7, payoff_scale=5.0):
    """Random valid game: positive payoffs, strictly positive distributions."""
    def dist(shape):
        v = rng.uniform(0.1, 1.0, shape)
        return v / v.sum(axis=-1, keepdims=True)

    return GameSpec(
        num_k=num_k, num_l=num_l, num_a=num_a, num_b=num_b,
        payoff=rng.uniform(0.0, payoff_scale, (num_k, num_l, num_a, num_b)),
        p0=dist(num_k), q0=dist(num_l),
        trans_p=dist((num_a, num_b, num_k, num_k)),
        trans_q=dist((num_a, num_b, num_l, num_l)),
        lam=lam, horizon_n=horizon)


def constant_spec(c=1.0, lam=0.5, horizon=3, num_k=2, num_l=2,
                  num_a=2, num_b=2):
    """Every payoff entry equals c; the value is c * sum of discounts."""
    def uniform_trans(na, nb, ns):
        return np.full((na, nb, ns, ns), 1.0 / ns)

    return GameSpec(
        num_k=num_k, num_l=num_l, num_a=num_a, num_b=num_b,
        payoff=np.full((num_k, num_l, num_a, num_b), float(c)),
        p0=np.full(num_k, 1.0 / num_k), q0=np.full(num_l, 1.0 / num_l),
        trans_p=uniform_trans(num_a, num_b, num_k),
        trans_q=uniform_trans(num_a, num_b, num_l),
        lam=lam, horizon_n=horizon)


@pytest.fixture(scope="session")
def case_study():
    return load_case_study()


@pytest.fixture
def rng():
    return np.random.default_rng(20260823)
