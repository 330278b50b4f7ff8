"""FCFS single-server queue simulation.

Symbols arrive at epochs ``A_j`` drawn from a renewal process, are served in
arrival order with i.i.d. service times ``S_j`` and leave at ``D_j``.  The queue
starts empty.  Waiting times follow the Lindley recursion

    delay_1 = 0,   delay_j = max(0, delay_{j-1} + S_{j-1} - (A_j - A_{j-1}))

and ``D_j = A_j + delay_j + S_j``.  A trace carries one waiting-time convention:
``"delay"`` (time before service starts) or ``"sojourn"`` (``D_j - A_j``).
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, TextIO, Union

import numpy as np
from numba import njit

from . import distributions as dist

DELAY = "delay"
SOJOURN = "sojourn"
CONVENTIONS = (DELAY, SOJOURN)

N_BATCHES = 32
MIN_SAMPLES = 20


class StabilityError(ValueError):
    """Raised when the offered load is not strictly below one."""


def default_warmup(n_symbols: int) -> int:
    """max(10^4, 1% of n), shrunk to n // 10 when the run is too short to afford it."""
    w = max(10_000, n_symbols // 100)
    if w >= n_symbols // 2:
        w = n_symbols // 10
    return w


@dataclass(frozen=True)
class QueueConfig:
    arrival_rate: Optional[float] = None
    inter_arrival: Optional[dist.Distribution] = None
    service: dist.Distribution = field(default_factory=dist.Exponential)
    convention: str = DELAY
    n_symbols: int = 100_000
    warmup: Optional[int] = None
    seed: int = 0

    def __post_init__(self):
        lam, ia = self.arrival_rate, self.inter_arrival
        if lam is None and ia is None:
            raise ValueError("need arrival_rate or inter_arrival")
        if ia is None:
            ia = dist.Exponential(lam)
        if lam is None:
            lam = 1.0 / ia.mean()
        lam = float(lam)
        if not lam > 0:
            raise ValueError(f"arrival_rate must be > 0, got {lam!r}")
        if not math.isclose(ia.mean(), 1.0 / lam, rel_tol=1e-9):
            raise ValueError(f"inter_arrival mean {ia.mean()!r} does not match 1/arrival_rate = {1.0 / lam!r}")
        if lam * self.service.mean() >= 1.0:
            raise StabilityError(
                f"unstable queue: arrival_rate * mean service = {lam * self.service.mean():.6g} >= 1"
            )
        if self.convention not in CONVENTIONS:
            raise ValueError(f"convention must be one of {CONVENTIONS}, got {self.convention!r}")
        n = int(self.n_symbols)
        if n < 1:
            raise ValueError("n_symbols must be >= 1")
        warmup = default_warmup(n) if self.warmup is None else int(self.warmup)
        if not 0 <= warmup < n:
            raise ValueError(f"warmup must satisfy 0 <= warmup < n_symbols, got {warmup}")
        object.__setattr__(self, "arrival_rate", lam)
        object.__setattr__(self, "inter_arrival", ia)
        object.__setattr__(self, "n_symbols", n)
        object.__setattr__(self, "warmup", warmup)
        object.__setattr__(self, "seed", int(self.seed))

    @property
    def load(self) -> float:
        return self.arrival_rate * self.service.mean()


@dataclass(frozen=True, eq=False)
class EventTrace:
    """Per-symbol epochs of one simulated run (read-only arrays)."""

    A: np.ndarray
    S: np.ndarray
    D: np.ndarray
    delay: np.ndarray
    convention: str = DELAY
    warmup: int = 0
    arrival_rate: float = float("nan")

    def __post_init__(self):
        if self.convention not in CONVENTIONS:
            raise ValueError(f"unknown convention {self.convention!r}")
        for name in ("A", "S", "D", "delay"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if not (len(self.A) == len(self.S) == len(self.D) == len(self.delay)):
            raise ValueError("trace arrays must have equal length")
        W = self.delay if self.convention == DELAY else self.D - self.A
        W.setflags(write=False)
        object.__setattr__(self, "W", W)

    def __len__(self) -> int:
        return len(self.A)

    @property
    def stationary_W(self) -> np.ndarray:
        """Waiting times with the warm-up prefix removed."""
        return self.W[self.warmup:]

    def with_convention(self, convention: str) -> "EventTrace":
        return EventTrace(self.A, self.S, self.D, self.delay, convention, self.warmup, self.arrival_rate)

    def to_csv(self, fh: Optional[TextIO] = None) -> str:
        """Write ``j,A,S,D,W`` rows with 17 significant digits; returns the text."""
        buf = io.StringIO()
        buf.write("j,A,S,D,W\n")
        for j, row in enumerate(zip(self.A, self.S, self.D, self.W), start=1):
            buf.write(f"{j}," + ",".join(format(float(x), ".17g") for x in row) + "\n")
        text = buf.getvalue()
        if fh is not None:
            fh.write(text)
        return text


@njit(cache=True)
def _fcfs(gaps, service):
    n = gaps.shape[0]
    A = np.empty(n)
    delay = np.empty(n)
    D = np.empty(n)
    # compensated running sum keeps arrival epochs accurate on long runs
    s = 0.0
    c = 0.0
    for j in range(n):
        y = gaps[j] - c
        t = s + y
        c = (t - s) - y
        s = t
        A[j] = s
    if n > 0:
        delay[0] = 0.0
    for j in range(1, n):
        w = delay[j - 1] + service[j - 1] - (A[j] - A[j - 1])
        delay[j] = w if w > 0.0 else 0.0
    for j in range(n):
        D[j] = (A[j] + delay[j]) + service[j]
    return A, delay, D


def simulate(config: QueueConfig) -> EventTrace:
    """Run the queue described by ``config`` and return its event trace."""
    n = config.n_symbols
    gaps = np.asarray(config.inter_arrival.sample(dist.make_rng(config.seed, 0), n), dtype=float)
    service = np.asarray(config.service.sample(dist.make_rng(config.seed, 1), n), dtype=float)
    A, delay, D = _fcfs(gaps, service)
    return EventTrace(A, service, D, delay, config.convention, config.warmup, config.arrival_rate)


def batch_means(values: np.ndarray, n_batches: int = N_BATCHES) -> tuple:
    """Mean of ``values`` and its batch-means standard error."""
    values = np.asarray(values, dtype=float)
    n = len(values)
    if n < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples for a batch-means estimate, got {n}")
    if values.min() == values.max():
        return float(values[0]), 0.0
    k = min(n_batches, n)
    means = np.array([b.mean() for b in np.array_split(values, k)])
    return float(values.mean()), float(means.std(ddof=1) / math.sqrt(k))


def stationary_mean(trace: EventTrace, f: Callable[[np.ndarray], Union[np.ndarray, float]],
                    n_batches: int = N_BATCHES) -> tuple:
    """Time average of ``f(W_j)`` over post-warm-up symbols, with batch-means SE.

    ``f`` is applied to the whole waiting-time array and must broadcast.
    """
    w = trace.stationary_W
    if len(w) < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} post-warmup samples, got {len(w)}")
    vals = np.broadcast_to(np.asarray(f(w), dtype=float), w.shape)
    return batch_means(vals, n_batches)


def mm1_mean_delay(lam: float) -> float:
    """Mean time in queue of M/M/1 with unit service rate."""
    return lam / (1.0 - lam)
