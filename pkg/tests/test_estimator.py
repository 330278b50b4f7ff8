import math

import numpy as np
import pytest

from qcap import capacity as cap
from qcap import estimator as est
from qcap import queue_sim as qs
from qcap.decoherence import DEPOLARIZING, ERASURE, DecoherenceModel, ExpDecay, apply_channel, constant
from qcap.distributions import make_rng


def h_ref(x):
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def test_moment_examples(short_mm1_trace, mm1_trace):
    assert est.estimate_moment(short_mm1_trace, est.MomentRequest(est.SURVIVAL, DecoherenceModel(constant(0.0)))) == (1.0, 0.0)
    m, se = est.estimate_moment(mm1_trace, est.MomentRequest(est.TRANSFORM, DecoherenceModel(ExpDecay(1.0))))
    assert abs(m - 2 / 3) <= 3 * se
    m, se = est.estimate_moment(short_mm1_trace, est.MomentRequest(est.ENTROPY_OF_PHI, DecoherenceModel(constant(0.22))))
    assert se == 0.0
    assert m == pytest.approx(h_ref(0.11), abs=1e-15)
    assert m == pytest.approx(0.49992, abs=1e-5)


def test_functionals_in_unit_interval(short_mm1_trace):
    model = DecoherenceModel(ExpDecay(0.3))
    w = short_mm1_trace.stationary_W
    for f in est.FUNCTIONALS:
        v = est.MomentRequest(f, model)(w)
        assert np.all((v >= 0) & (v <= 1))


def test_request_validation():
    with pytest.raises(ValueError):
        est.MomentRequest("variance", DecoherenceModel(ExpDecay(1.0)))
    with pytest.raises(ValueError):
        est.MomentRequest(est.TRANSFORM, DecoherenceModel(constant(0.5)))


def test_insufficient_samples():
    tr = qs.simulate(qs.QueueConfig(0.5, n_symbols=30, warmup=15))
    with pytest.raises(ValueError):
        est.mc_capacity(tr, DecoherenceModel(ExpDecay(1.0)))


def test_mc_capacity_examples(short_mm1_trace, mm1_trace):
    e = est.mc_capacity(short_mm1_trace, DecoherenceModel(constant(0.0)), 0.5)
    assert e.value == 0.5 and e.std_error == 0.0
    e = est.mc_capacity(mm1_trace, DecoherenceModel(ExpDecay(1.0)))
    assert e.method == cap.MONTE_CARLO
    assert abs(e.value - 1 / 3) <= 3 * e.std_error
    assert e.context["convention"] == qs.DELAY
    e = est.mc_capacity(short_mm1_trace, DecoherenceModel(constant(0.22), DEPOLARIZING), 1.0)
    assert e.value == pytest.approx(1 - h_ref(0.11), abs=1e-9)


def test_no_timing_bounds_from_trace(mm1_trace):
    model = DecoherenceModel(ExpDecay(1.0), DEPOLARIZING)
    lo, up = est.mc_capacity(mm1_trace, model, timing_known=False)
    known = est.mc_capacity(mm1_trace, model, timing_known=True)
    assert lo.value < up.value
    # the timing-known plug-in equals the upper bound functional exactly
    assert known.value == pytest.approx(up.value, rel=1e-12)
    w = mm1_trace.stationary_W
    phi = 0.5 * -np.expm1(-w)
    assert lo.value == pytest.approx(0.5 * (1 - h_ref(phi.mean())), rel=1e-12)
    assert lo.std_error > 0 and up.std_error > 0


def test_se_scales_like_root_two():
    model = DecoherenceModel(ExpDecay(1.0))
    ses = {}
    for n in (100_000, 200_000):
        ses[n] = np.mean([est.mc_capacity(qs.simulate(qs.QueueConfig(0.5, n_symbols=n + 10_000, warmup=10_000, seed=s)),
                                          model).std_error for s in range(10)])
    ratio = ses[100_000] / ses[200_000]
    assert abs(ratio - math.sqrt(2)) <= 0.2 * math.sqrt(2)


def test_direct_vs_indirect_erasure(mm1_trace):
    model = DecoherenceModel(ExpDecay(1.0))
    m, se_m = est.estimate_moment(mm1_trace, est.MomentRequest(est.ERASURE_PROB, model))
    w = mm1_trace.stationary_W
    out = apply_channel(model, np.zeros(len(w), dtype=int), w, make_rng(314))
    frac, se_f = qs.batch_means(out.erased.astype(float))
    assert abs(frac - m) <= 4 * math.hypot(se_m, se_f)


def test_erasure_invariant_to_timing_flag(short_mm1_trace):
    model = DecoherenceModel(ExpDecay(0.4))
    a = est.mc_capacity(short_mm1_trace, model, timing_known=True)
    b = est.mc_capacity(short_mm1_trace, model, timing_known=False)
    assert a.value == b.value and a.std_error == b.std_error


def test_mc_equals_additive_bound(short_mm1_trace):
    for model in (DecoherenceModel(ExpDecay(1.0)), DecoherenceModel(ExpDecay(1.0), DEPOLARIZING)):
        mc = est.mc_capacity(short_mm1_trace, model)
        bound = cap.additive_upper_bound(0.5, est.per_symbol_chi(short_mm1_trace, model))
        assert mc.value == bound.value


def test_merge_rejects_mixed_conventions(short_mm1_trace):
    model = DecoherenceModel(ExpDecay(1.0))
    a = est.mc_capacity(short_mm1_trace, model)
    b = est.mc_capacity(short_mm1_trace.with_convention(qs.SOJOURN), model)
    assert b.value < a.value
    with pytest.raises(ValueError):
        est.merge_estimates([a, b])
    with pytest.raises(ValueError):
        est.merge_estimates([])


def test_merge_inverse_variance():
    e1 = cap.CapacityEstimate(0.30, cap.MONTE_CARLO, 0.01, {"convention": "delay"})
    e2 = cap.CapacityEstimate(0.34, cap.MONTE_CARLO, 0.02, {"convention": "delay"})
    m = est.merge_estimates([e1, e2])
    assert m.value == pytest.approx((0.30 / 1e-4 + 0.34 / 4e-4) / (1 / 1e-4 + 1 / 4e-4))
    assert m.std_error == pytest.approx(math.sqrt(1 / (1 / 1e-4 + 1 / 4e-4)))


def test_replicate_deterministic_and_parallel():
    cfg = qs.QueueConfig(0.5, n_symbols=30_000, warmup=5_000)
    model = DecoherenceModel(ExpDecay(1.0))
    merged, parts = est.replicate(cfg, model, [1, 2, 3])
    merged2, parts2 = est.replicate(cfg, model, [1, 2, 3], workers=2)
    assert [p.value for p in parts] == [p.value for p in parts2]
    assert merged.value == merged2.value
    assert merged.context["replications"] == 3
