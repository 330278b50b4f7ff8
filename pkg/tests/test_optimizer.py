import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcap import capacity as cap
from qcap import distributions as dist
from qcap import optimizer as opt
from qcap.decoherence import ExpDecay


def test_parabola():
    r = opt.maximize(opt.ScalarProblem(lambda x: x * (1 - x), 0.01, 0.99))
    assert r.argmax == pytest.approx(0.5, abs=1e-6)
    assert r.value == pytest.approx(0.25, abs=1e-12)
    assert not r.at_boundary
    assert r.n_evals <= 200


def test_mg1_alpha_half():
    r = opt.maximize(opt.ScalarProblem(lambda l: l * (1 - l) / (1 - 0.5 * l), *opt.LAMBDA_BOX))
    assert r.argmax == pytest.approx(0.58579, abs=1e-4)
    assert r.argmax == pytest.approx(1 / (1 + math.sqrt(0.5)), abs=1e-6)


def test_general_p_kappa_small():
    r = opt.maximize(opt.ScalarProblem(lambda l: cap.mm1_general_p_capacity(l, ExpDecay(0.01)).value,
                                       *opt.LAMBDA_BOX))
    assert r.argmax == pytest.approx(1 / (1 + math.sqrt(1 - 1 / 1.01)), abs=1e-3)


def test_minimize():
    r = opt.minimize(opt.ScalarProblem(lambda x: (x - 0.3) ** 2 + 1, 0.0, 1.0))
    assert r.argmax == pytest.approx(0.3, abs=1e-6)
    assert r.value == pytest.approx(1.0, abs=1e-12)


def test_boundary_flag():
    r = opt.maximize(opt.ScalarProblem(lambda x: x, 0.1, 0.9))
    assert r.at_boundary
    assert r.argmax == pytest.approx(0.9, abs=1e-6)


@pytest.mark.parametrize("alpha", [0.1, 0.4, 0.8, 0.99])
def test_stationarity_at_optimum(alpha):
    f = lambda l: l * (1 - l) / (1 - alpha * l)
    r = opt.maximize(opt.ScalarProblem(f, *opt.LAMBDA_BOX))
    h = 1e-5
    deriv = (f(r.argmax + h) - f(r.argmax - h)) / (2 * h)
    assert abs(deriv) < 1e-4 * r.value


def test_degenerate():
    with pytest.raises(opt.DegenerateObjectiveError):
        opt.maximize(opt.ScalarProblem(lambda x: 0.7, 0.1, 0.9))


def test_problem_validation():
    with pytest.raises(ValueError):
        opt.ScalarProblem(lambda x: x, 0.5, 0.5)
    with pytest.raises(ValueError):
        opt.ScalarProblem(lambda x: x, 0.1, 0.5, tolerance=0)
    with pytest.raises(opt.OptimizerError):
        opt.maximize(opt.ScalarProblem(lambda x: math.nan, 0.1, 0.5))


def test_compare_examples():
    r = opt.compare_service_laws([0.5], 1.0, [dist.Deterministic(1), dist.Exponential(1)])
    caps = list(r.capacities.values())
    assert caps[0][0] == pytest.approx(0.36553, abs=1e-5)
    assert caps[1][0] == pytest.approx(1 / 3, abs=1e-12)
    assert r.dominates
    assert opt.compare_service_laws([0.2, 0.8], 3.0, [dist.Deterministic(1)]).dominates
    grid = np.linspace(0.05, 0.95, 10)
    for kappa in (0.05, 1.0, 10.0):
        r = opt.compare_service_laws(grid, kappa, [dist.Erlang(2, 2)])
        assert r.dominates and r.worst_margin > 0
    rows = list(r.rows())
    assert len(rows) == 10 and set(rows[0]) == {"lambda", "law", "capacity", "deterministic", "margin"}


def test_compare_rejects_bad_laws():
    with pytest.raises(ValueError):
        opt.compare_service_laws([0.5], 1.0, [dist.Exponential(2)])
    with pytest.raises(ValueError):
        opt.compare_service_laws([0.5], 1.0, [dist.Empirical([0.0, 2.0])])


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 4).flatmap(lambda k: st.tuples(
    st.lists(st.floats(0.05, 1.0), min_size=k, max_size=k),
    st.lists(st.floats(0.05, 20.0), min_size=k, max_size=k))),
    st.floats(0.01, 5.0))
def test_deterministic_dominates_random_hyperexponentials(params, kappa):
    raw_w, rates = params
    w = np.array(raw_w) / np.sum(raw_w)
    h = dist.HyperExponential(tuple(w), tuple(rates))
    unit = dist.scaled(h, 1.0 / h.mean())
    assert unit.mean() == pytest.approx(1.0, abs=1e-9)
    r = opt.compare_service_laws(np.linspace(0.05, 0.95, 7), kappa, [unit])
    assert r.dominates
