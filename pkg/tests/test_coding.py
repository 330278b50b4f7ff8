import itertools

import numpy as np
import pytest

from qcap import capacity as cap
from qcap import coding
from qcap import gf2
from qcap import queue_sim as qs
from qcap.decoherence import DEPOLARIZING, ERASED, DecoherenceModel, ExpDecay, constant
from qcap.distributions import make_rng


def brute_force_decode(G, received):
    """Unique message consistent with the unerased positions, else None."""
    k, n = G.shape
    keep = received != ERASED
    hits = []
    for bits in itertools.product((0, 1), repeat=k):
        m = np.array(bits, dtype=np.uint8)
        if np.array_equal((m @ G % 2)[keep], received[keep]):
            hits.append(m)
            if len(hits) > 1:
                return None
    return hits[0] if hits else None


@pytest.fixture(scope="module")
def coding_trace():
    return qs.simulate(qs.QueueConfig(0.5, n_symbols=210_000, warmup=10_000, seed=11))


def test_gf2_pack_round_trip():
    rng = make_rng(3)
    for k in (1, 63, 64, 65, 130):
        bits = rng.integers(0, 2, (17, k), dtype=np.uint8)
        assert np.array_equal(gf2.unpack_rows(gf2.pack_rows(bits), k), bits)


def test_gf2_rank_against_identity_and_dependent_rows():
    assert gf2.rank(np.eye(70, dtype=np.uint8)) == 70
    a = make_rng(1).integers(0, 2, (5, 40), dtype=np.uint8)
    stacked = np.vstack([a, a[0] ^ a[1], a[2] ^ a[3] ^ a[4]])
    assert gf2.rank(stacked) == gf2.rank(a)
    assert gf2.rank(np.zeros((3, 10), dtype=np.uint8)) == 0


def test_encode_matches_matmul():
    rng = make_rng(4)
    code = coding.LinearCode.random(100, 70, rng)
    m = rng.integers(0, 2, 70, dtype=np.uint8)
    assert np.array_equal(code.encode(m), m @ code.generator % 2)


def test_noiseless_success(short_mm1_trace):
    rng = make_rng(5)
    code = coding.LinearCode.from_generator(np.hstack([np.eye(8, dtype=np.uint8),
                                                        rng.integers(0, 2, (8, 12), dtype=np.uint8)]))
    assert coding.erasure_code_trial(code, short_mm1_trace, DecoherenceModel(constant(0.0)), rng)


def test_total_erasure_fails(short_mm1_trace):
    code = coding.LinearCode.random(50, 1, make_rng(6))
    assert not coding.erasure_code_trial(code, short_mm1_trace, DecoherenceModel(constant(1.0)), make_rng(7))


def test_trial_errors(short_mm1_trace):
    code = coding.LinearCode.random(10, 5, make_rng(1))
    with pytest.raises(ValueError):
        coding.erasure_code_trial(code, np.zeros(5), DecoherenceModel(ExpDecay(1.0)), make_rng(1))
    with pytest.raises(ValueError):
        coding.erasure_code_trial(code, short_mm1_trace, DecoherenceModel(ExpDecay(1.0), DEPOLARIZING), make_rng(1))
    with pytest.raises(ValueError):
        coding.LinearCode.random(5, 6, make_rng(1))


def test_rate_sweep_examples(coding_trace):
    model = DecoherenceModel(ExpDecay(1.0))
    reports = coding.rate_sweep(2000, [0.0, 0.5, 0.8, 1.1], coding_trace, model, trials=100, seed=3)
    freq = {r.multiplier: r.success_frequency for r in reports}
    assert freq[0.0] == 1.0 and reports[0].k == 0
    assert freq[0.5] == 1.0
    assert freq[0.8] >= 0.99
    assert freq[1.1] <= 0.01
    e_hat = reports[1].mean_erasure
    assert abs(e_hat - 1 / 3) < 0.02
    assert reports[2].k == round(0.8 * 2000 * (1 - e_hat))
    assert all(len(r.erasure_fractions) == 100 for r in reports)


def test_rate_sweep_monotone_and_deterministic(short_mm1_trace):
    model = DecoherenceModel(ExpDecay(1.0))
    mults = [0.6, 0.8, 0.9, 0.95, 1.0, 1.05, 1.2]
    a = coding.rate_sweep(400, mults, short_mm1_trace, model, trials=50, seed=1)
    freqs = [r.success_frequency for r in a]
    assert all(f1 <= f0 + 2 / 50 for f0, f1 in zip(freqs, freqs[1:]))
    b = coding.rate_sweep(400, mults, short_mm1_trace, model, trials=50, seed=1, workers=2)
    assert [r.successes for r in a] == [r.successes for r in b]


def test_report_serialization():
    r = coding.CodeExperimentReport(100, 40, 0.9, 10, 7, [0.3] * 10, 0.35)
    assert r.rate_per_use == 0.4 and r.mean_unerased == pytest.approx(0.65)
    assert coding.reports_to_csv([r]) == "multiplier,k,trials,successes\n0.90000000000000002,40,10,7\n"
    with pytest.raises(ValueError):
        coding.CodeExperimentReport(100, 40, 0.9, 10, 11)


def test_transition_midpoint():
    mk = lambda m, s: coding.CodeExperimentReport(10, 1, m, 10, s)
    assert coding.transition_midpoint([mk(0.9, 10), mk(1.0, 6), mk(1.1, 0)]) == pytest.approx(1.0 + 0.1 / 6)
    assert np.isnan(coding.transition_midpoint([mk(0.9, 10)]))


def test_decoder_matches_brute_force():
    rng = make_rng(2024)
    for _ in range(300):
        n = int(rng.integers(1, 25))
        k = int(rng.integers(0, min(n, 12) + 1))
        code = coding.LinearCode.random(n, k, rng)
        msg = rng.integers(0, 2, k, dtype=np.uint8)
        received = code.encode(msg).astype(np.int64)
        if rng.random() < 0.3:
            received = rng.integers(0, 2, n)
        received[rng.random(n) < rng.random()] = ERASED
        got = coding.decode_erasures(code, received)
        ref = brute_force_decode(code.generator, received)
        if ref is None:
            assert got is None
        else:
            assert got is not None and np.array_equal(got, ref)


def test_bsc_information_examples(short_mm1_trace, mm1_trace):
    per_use, rate, se = coding.bsc_information_estimate(short_mm1_trace, DecoherenceModel(constant(0.0), DEPOLARIZING))
    assert per_use == 1.0 and se == 0.0
    per_use, _, _ = coding.bsc_information_estimate(short_mm1_trace, DecoherenceModel(constant(1.0), DEPOLARIZING))
    assert per_use == pytest.approx(0.0, abs=1e-15)
    model = DecoherenceModel(ExpDecay(1.0), DEPOLARIZING)
    _, rate, se = coding.bsc_information_estimate(mm1_trace, model)
    ref = cap.qudit_capacities(0.5, 2, DEPOLARIZING, law=cap.mm1_delay_law(0.5), p_map=ExpDecay(1.0)).value
    assert abs(rate - ref) <= 3 * se
    with pytest.raises(ValueError):
        coding.bsc_information_estimate(mm1_trace, DecoherenceModel(ExpDecay(1.0)))
