import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, stats

from qcap import distributions as dist


def test_deterministic_sample_is_point_mass():
    rng = dist.make_rng(1)
    d = dist.Deterministic(1.0)
    assert d.sample(rng) == 1.0
    assert np.all(d.sample(rng, 100) == 1.0)


def test_empirical_single_atom():
    rng = dist.make_rng(1)
    e = dist.Empirical([2.0])
    assert all(e.sample(rng) == 2.0 for _ in range(10))
    assert np.all(e.sample(rng, 50) == 2.0)


def test_exponential_lln():
    draws = dist.Exponential(1.0).sample(dist.make_rng(5), 10**6)
    assert abs(draws.mean() - 1.0) <= 3 * 1.0 / math.sqrt(10**6)


def test_same_seed_same_draws():
    a = dist.Erlang(3, 3).sample(dist.make_rng(11, 4), 1000)
    b = dist.Erlang(3, 3).sample(dist.make_rng(11, 4), 1000)
    c = dist.Erlang(3, 3).sample(dist.make_rng(11, 5), 1000)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


@pytest.mark.parametrize("spec, expected", [
    (dist.Exponential(2), 0.5),
    (dist.Erlang(3, 3), 1.0),
    (dist.HyperExponential([0.5, 0.5], [1, 2]), 0.75),
    (dist.Uniform(0, 2), 1.0),
    (dist.Empirical([1, 2, 6]), 3.0),
])
def test_means(spec, expected):
    assert dist.mean(spec) == pytest.approx(expected, rel=1e-15)


def test_laplace_examples():
    assert dist.laplace(dist.Exponential(1), 1) == pytest.approx(0.5, rel=1e-15)
    assert dist.laplace(dist.Deterministic(1), 1) == pytest.approx(math.exp(-1), rel=1e-15)
    # Erlang(2, 2) against direct integration of the gamma density
    oracle, _ = integrate.quad(lambda x: math.exp(-x) * stats.gamma.pdf(x, 2, scale=0.5), 0, math.inf)
    assert oracle == pytest.approx(4 / 9, abs=1e-10)
    assert dist.laplace(dist.Erlang(2, 2), 1) == pytest.approx(oracle, abs=1e-10)


def test_laplace_rejects_nonpositive_u():
    with pytest.raises(ValueError):
        dist.Exponential(1).laplace(0.0)
    with pytest.raises(ValueError):
        dist.Deterministic(1).laplace(-1.0)


@pytest.mark.parametrize("bad", [
    lambda: dist.Exponential(0),
    lambda: dist.Deterministic(-1),
    lambda: dist.Erlang(0, 1),
    lambda: dist.Erlang(1.5, 1),
    lambda: dist.HyperExponential([0.6, 0.6], [1, 1]),
    lambda: dist.HyperExponential([1.0], [0.0]),
    lambda: dist.Uniform(1, 1),
    lambda: dist.Uniform(-1, 1),
    lambda: dist.Empirical([]),
    lambda: dist.Empirical([-1, 2]),
])
def test_invalid_specs_rejected(bad):
    with pytest.raises(ValueError):
        bad()


PARAMETRIC = [
    dist.Exponential(1.3),
    dist.Deterministic(0.7),
    dist.Erlang(3, 2.5),
    dist.HyperExponential([0.3, 0.7], [0.5, 4.0]),
    dist.Uniform(0.2, 1.9),
]


@pytest.mark.parametrize("spec", PARAMETRIC, ids=lambda s: type(s).__name__)
def test_laplace_matches_monte_carlo(spec):
    n = 10**6
    for u in (0.3, 1.0, 2.5):
        vals = np.exp(-u * spec.sample(dist.make_rng(3, 1), n))
        se = vals.std(ddof=1) / math.sqrt(n)
        assert abs(vals.mean() - spec.laplace(u)) <= 4 * se + 1e-12


@pytest.mark.parametrize("spec", PARAMETRIC + [dist.Empirical([0.1, 0.5, 3.0])], ids=lambda s: type(s).__name__)
def test_laplace_bounds_monotone_and_jensen(spec):
    grid = np.linspace(0.01, 20, 200)
    vals = np.array([spec.laplace(u) for u in grid])
    assert np.all(vals > 0) and np.all(vals <= 1)
    assert np.all(np.diff(vals) <= 0)
    jensen = np.exp(-grid * spec.mean())
    if isinstance(spec, dist.Deterministic):
        np.testing.assert_allclose(vals, jensen, rtol=1e-14)
    else:
        assert np.all(vals > jensen)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(0.01, 10), min_size=1, max_size=4), st.floats(0.01, 30))
def test_hyperexponential_jensen_property(raw_rates, u):
    w = np.full(len(raw_rates), 1 / len(raw_rates))
    spec = dist.HyperExponential(tuple(w), tuple(raw_rates))
    val = spec.laplace(u)
    assert 0 < val <= 1
    assert val >= math.exp(-u * spec.mean()) - 1e-15


@pytest.mark.parametrize("text, expected", [
    ("exp", dist.Exponential(1.0)),
    ("exp:2", dist.Exponential(2.0)),
    ("det:1", dist.Deterministic(1.0)),
    ("erlang:2", dist.Erlang(2, 2.0)),
    ("erlang:3,1.5", dist.Erlang(3, 1.5)),
    ("hyper:0.5/2,0.5/0.6666666666666666", dist.HyperExponential((0.5, 0.5), (2.0, 2 / 3))),
    ("uniform:0,2", dist.Uniform(0.0, 2.0)),
    ('{"kind": "deterministic", "value": 2}', dist.Deterministic(2.0)),
])
def test_parse(text, expected):
    assert dist.parse(text) == expected


def test_json_round_trip():
    for spec in PARAMETRIC + [dist.Empirical([1.0, 3.0])]:
        assert dist.from_json(spec.to_json()) == spec


def test_scaled_preserves_family():
    s = dist.scaled(dist.Erlang(2, 2), 2.0)
    assert s == dist.Erlang(2, 1.0)
    assert s.mean() == pytest.approx(2.0)
