"""Random linear codes over the erasure queue-channel, and BSC information estimates.

A message ``m`` of ``k`` bits is sent as ``c = m G`` through ``n`` consecutive
uses of the queue-channel.  Erasures never corrupt a received bit, so
maximum-likelihood decoding is Gaussian elimination on the unerased columns
of ``G``: it succeeds exactly when those columns have rank ``k``.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import gf2
from .decoherence import DEPOLARIZING, ERASED, ERASURE, DecoherenceModel, apply_channel, p_of
from .distributions import make_rng
from .queue_sim import EventTrace, batch_means


@dataclass(frozen=True, eq=False)
class LinearCode:
    """Binary ``[n, k]`` code; ``columns[j]`` is column ``j`` of G packed into words."""

    n: int
    k: int
    columns: np.ndarray
    seed: Optional[int] = None

    def __post_init__(self):
        if not 0 <= self.k <= self.n:
            raise ValueError(f"need 0 <= k <= n, got k={self.k}, n={self.n}")
        if self.columns.shape != (self.n, gf2.n_words(self.k)):
            raise ValueError("packed generator has the wrong shape")

    @classmethod
    def random(cls, n: int, k: int, rng: np.random.Generator, seed: Optional[int] = None) -> "LinearCode":
        return cls(n, k, gf2.random_words(rng, n, k), seed)

    @classmethod
    def from_generator(cls, generator) -> "LinearCode":
        G = np.asarray(generator, dtype=np.uint8)
        if G.ndim != 2 or np.any(G > 1):
            raise ValueError("generator must be a 2-D 0/1 matrix")
        k, n = G.shape
        return cls(n, k, gf2.pack_rows(G.T))

    @property
    def generator(self) -> np.ndarray:
        """The k x n generator matrix as 0/1 bytes."""
        return gf2.unpack_rows(self.columns, self.k).T.copy()

    def encode(self, message) -> np.ndarray:
        return gf2.encode(self.columns, gf2.pack_vector(message) if self.k else np.zeros(0, np.uint64))


def decode_erasures(code: LinearCode, received: np.ndarray) -> Optional[np.ndarray]:
    """ML decode ``received`` (0/1 or ERASED per position); None if the message is not unique."""
    received = np.asarray(received)
    if received.shape != (code.n,):
        raise ValueError("received word has the wrong length")
    keep = np.flatnonzero(received != ERASED)
    if code.k == 0:
        return None if np.any(received[keep]) else np.zeros(0, dtype=np.uint8)
    if len(keep) < code.k:
        return None
    rows = code.columns[keep].copy()
    rhs = received[keep].astype(np.uint8)
    rk, consistent, m = gf2.solve(rows, rhs, code.k)
    if rk < code.k or not consistent:
        return None
    return gf2.unpack_vector(m, code.k)


def _window(trace, start: int, n: int) -> np.ndarray:
    w = trace.stationary_W if isinstance(trace, EventTrace) else np.asarray(trace, dtype=float)
    if len(w) < n:
        raise ValueError(f"trace has {len(w)} stationary symbols, fewer than block length {n}")
    start = start % (len(w) - n + 1)
    return w[start:start + n]


def _trial(code: LinearCode, waits: np.ndarray, model: DecoherenceModel, rng: np.random.Generator) -> tuple:
    msg = rng.integers(0, 2, code.k, dtype=np.uint8)
    out = apply_channel(model, code.encode(msg), waits, rng)
    decoded = decode_erasures(code, out.outputs)
    return decoded is not None and bool(np.array_equal(decoded, msg)), out.erasure_fraction


def erasure_code_trial(code: LinearCode, trace, model: DecoherenceModel, rng: np.random.Generator,
                       offset: int = 0) -> bool:
    """Send one uniform message through ``n`` consecutive post-warm-up channel uses and decode it."""
    if model.noise != ERASURE or model.d != 2:
        raise ValueError("erasure code trials need a binary erasure model")
    return _trial(code, _window(trace, offset, code.n), model, rng)[0]


@dataclass
class CodeExperimentReport:
    n: int
    k: int
    multiplier: float
    trials: int
    successes: int
    erasure_fractions: list = field(default_factory=list)
    mean_erasure: float = float("nan")  # trace-level estimate used to size k

    def __post_init__(self):
        if not 0 <= self.successes <= self.trials:
            raise ValueError("successes must lie in [0, trials]")

    @property
    def rate_per_use(self) -> float:
        return self.k / self.n

    @property
    def mean_unerased(self) -> float:
        return 1.0 - self.mean_erasure

    @property
    def success_frequency(self) -> float:
        return self.successes / self.trials if self.trials else float("nan")

    def to_json(self) -> dict:
        return {"n": self.n, "k": self.k, "multiplier": self.multiplier, "trials": self.trials,
                "successes": self.successes, "rate_per_use": self.rate_per_use,
                "mean_unerased": self.mean_unerased, "erasure_fractions": list(self.erasure_fractions)}


def reports_to_csv(reports: Sequence[CodeExperimentReport]) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["multiplier", "k", "trials", "successes"])
    for r in reports:
        wr.writerow([format(r.multiplier, ".17g"), r.k, r.trials, r.successes])
    return buf.getvalue()


def mean_erasure(trace: EventTrace, model: DecoherenceModel) -> float:
    """Stationary mean of p(W) over the trace; sets the nominal capacity per use."""
    return float(np.mean(p_of(model, trace.stationary_W)))


def _run_multiplier(args):
    n, idx, mult, waits, model, trials, seed, e_hat = args
    k = min(n, max(0, int(round(mult * n * (1.0 - e_hat)))))
    successes = 0
    fractions = []
    for t in range(trials):
        rng = make_rng(seed, idx, t)
        code = LinearCode.random(n, k, rng, seed)
        ok, frac = _trial(code, _window(waits, t * n, n), model, rng)
        successes += ok
        fractions.append(frac)
    return CodeExperimentReport(n, k, float(mult), trials, successes, fractions, e_hat)


def rate_sweep(n: int, multipliers: Sequence[float], trace: EventTrace, model: DecoherenceModel,
               trials: int = 100, seed: int = 0, workers: int = 1) -> list:
    """Success counts of random linear codes with ``k = round(m n (1 - e))`` per multiplier ``m``.

    ``e`` is the trace-level mean erasure probability.  Trial ``t`` uses the
    ``t``-th block of ``n`` consecutive stationary symbols (wrapping around a
    short trace) and a fresh random code.
    """
    if n < 1 or trials < 1:
        raise ValueError("need n >= 1 and trials >= 1")
    if model.noise != ERASURE or model.d != 2:
        raise ValueError("rate sweeps need a binary erasure model")
    e_hat = mean_erasure(trace, model)
    waits = np.array(trace.stationary_W)
    if len(waits) < n:
        raise ValueError(f"trace has {len(waits)} stationary symbols, fewer than block length {n}")
    jobs = [(n, i, m, waits, model, trials, seed, e_hat) for i, m in enumerate(multipliers)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run_multiplier, jobs))
    return [_run_multiplier(j) for j in jobs]


def transition_midpoint(reports: Sequence[CodeExperimentReport]) -> float:
    """Multiplier at which the success frequency crosses 1/2 (linear interpolation)."""
    pts = sorted((r.multiplier, r.success_frequency) for r in reports)
    for (m0, s0), (m1, s1) in zip(pts, pts[1:]):
        if s0 >= 0.5 > s1 or s0 > 0.5 >= s1:
            return m0 + (s0 - 0.5) * (m1 - m0) / (s0 - s1)
    return float("nan")


def bsc_information_estimate(trace: EventTrace, model: DecoherenceModel, lam: Optional[float] = None) -> tuple:
    """Plug-in conditional information of the BSC queue-channel.

    Returns ``(per_use, bits_per_time, std_error_bits_per_time)`` where
    ``per_use = 1 - mean h(phi(W_j))`` over post-warm-up symbols.
    """
    from .estimator import per_symbol_chi

    if model.noise != DEPOLARIZING or model.d != 2:
        raise ValueError("BSC estimate needs a qubit depolarizing model")
    lam = trace.arrival_rate if lam is None else float(lam)
    per_use, se = batch_means(per_symbol_chi(trace, model))
    return per_use, lam * per_use, lam * se
