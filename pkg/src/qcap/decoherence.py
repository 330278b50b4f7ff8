"""Waiting-time dependent noise acting on classical symbol streams.

A symbol that waited ``w`` is hit by noise with probability ``p(w)``.  Under
erasure noise it is replaced by :data:`ERASED`; under qubit depolarizing noise
the induced classical channel flips it with probability ``p(w) / 2``.  Given
the waiting times, symbols are corrupted independently of one another.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable, Mapping, Sequence, Union

import numpy as np

ERASED = -1
ERASURE = "erasure"
DEPOLARIZING = "depolarizing"
NOISE_KINDS = (ERASURE, DEPOLARIZING)


@dataclass(frozen=True)
class ExpDecay:
    """p(w) = 1 - exp(-kappa w); 1/kappa is the coherence time."""

    kappa: float

    def __post_init__(self):
        k = float(self.kappa)
        if not (math.isfinite(k) and k > 0):
            raise ValueError(f"kappa must be finite and > 0, got {self.kappa!r}")
        object.__setattr__(self, "kappa", k)

    def __call__(self, w):
        return -np.expm1(-self.kappa * np.asarray(w, dtype=float))

    def to_json(self) -> dict:
        return {"kind": "exp", "kappa": self.kappa}


@dataclass(frozen=True)
class Table:
    """Piecewise-linear p through knots ``(w_i, p_i)``, held flat outside the knots."""

    points: tuple

    def __post_init__(self):
        pts = tuple((float(w), float(p)) for w, p in self.points)
        if not pts:
            raise ValueError("table needs at least one point")
        ws = [w for w, _ in pts]
        ps = [p for _, p in pts]
        if ws[0] < 0 or any(b <= a for a, b in zip(ws, ws[1:])):
            raise ValueError("table abscissae must be nonnegative and strictly increasing")
        if any(not 0.0 <= p <= 1.0 for p in ps):
            raise ValueError("table probabilities must lie in [0, 1]")
        if any(b < a for a, b in zip(ps, ps[1:])):
            raise ValueError("table probabilities must be nondecreasing")
        object.__setattr__(self, "points", pts)

    @property
    def knots(self) -> np.ndarray:
        return np.array([w for w, _ in self.points])

    @property
    def values(self) -> np.ndarray:
        return np.array([p for _, p in self.points])

    def __call__(self, w):
        return np.interp(np.asarray(w, dtype=float), self.knots, self.values)

    def to_json(self) -> dict:
        return {"kind": "table", "points": [list(p) for p in self.points]}


@dataclass(frozen=True)
class Custom:
    """User supplied p; must map arrays of waiting times into [0, 1]."""

    fn: Callable
    name: str = "custom"

    def __call__(self, w):
        out = np.asarray(self.fn(np.asarray(w, dtype=float)), dtype=float)
        if np.any((out < 0) | (out > 1)):
            raise ValueError("custom p returned values outside [0, 1]")
        return out

    def to_json(self) -> dict:
        return {"kind": "custom", "name": self.name}


PMap = Union[ExpDecay, Table, Custom]


def constant(p: float) -> Table:
    return Table(((0.0, p),))


def p_map_from_json(obj: Mapping[str, Any]) -> PMap:
    """``{"kind": "exp", "kappa": x}`` or ``{"kind": "table", "points": [[w, p], ...]}``."""
    kind = str(obj.get("kind", "")).lower()
    if kind in ("exp", "expdecay", "exponential"):
        kappa = float(obj["kappa"])
        return constant(0.0) if kappa == 0 else ExpDecay(kappa)
    if kind == "table":
        return Table(tuple(tuple(p) for p in obj["points"]))
    if kind in ("const", "constant"):
        return constant(float(obj["p"]))
    raise ValueError(f"unknown p_map kind {obj.get('kind')!r}")


@dataclass(frozen=True)
class DecoherenceModel:
    p_map: PMap
    noise: str = ERASURE
    d: int = 2

    def __post_init__(self):
        if self.noise not in NOISE_KINDS:
            raise ValueError(f"noise must be one of {NOISE_KINDS}, got {self.noise!r}")
        if int(self.d) != self.d or self.d < 2:
            raise ValueError(f"dimension d must be an integer >= 2, got {self.d!r}")
        object.__setattr__(self, "d", int(self.d))

    def p(self, w):
        return p_of(self, w)

    def phi(self, w):
        """Crossover probability of the induced binary symmetric channel."""
        return 0.5 * p_of(self, w)


def p_of(model: Union[DecoherenceModel, PMap], w):
    """Noise probability after waiting ``w`` (scalar or array)."""
    p_map = model.p_map if isinstance(model, DecoherenceModel) else model
    arr = np.asarray(w, dtype=float)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise ValueError("waiting times must be nonnegative")
    out = p_map(arr)
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True, eq=False)
class SymbolStream:
    inputs: np.ndarray
    outputs: np.ndarray
    erased: np.ndarray
    flipped: np.ndarray

    def __len__(self) -> int:
        return len(self.inputs)

    @property
    def erasure_fraction(self) -> float:
        return float(self.erased.mean()) if len(self) else 0.0

    @property
    def error_fraction(self) -> float:
        return float(self.flipped.mean()) if len(self) else 0.0


def _waits(trace) -> np.ndarray:
    return np.asarray(trace.W if hasattr(trace, "W") else trace, dtype=float)


def apply_channel(model: DecoherenceModel, inputs: Sequence[int], trace,
                  rng: np.random.Generator) -> SymbolStream:
    """Pass ``inputs`` through the queue-channel, one use per waiting time.

    ``trace`` is an :class:`~qcap.queue_sim.EventTrace` or a plain array of
    waiting times.  The noise draws come only from ``rng``.
    """
    x = np.asarray(inputs, dtype=np.int64)
    w = _waits(trace)
    if x.shape != w.shape:
        raise ValueError(f"inputs length {len(x)} does not match trace length {len(w)}")
    if len(x) and (x.min() < 0 or x.max() >= model.d):
        raise ValueError(f"input symbols must lie in 0..{model.d - 1}")
    p = np.asarray(p_of(model, w), dtype=float)
    u = rng.random(len(x))
    if model.noise == ERASURE:
        erased = u < p
        flipped = np.zeros(len(x), dtype=bool)
        y = np.where(erased, ERASED, x)
    else:
        if model.d != 2:
            raise ValueError("depolarizing simulation is only available for qubits (d = 2)")
        erased = np.zeros(len(x), dtype=bool)
        flipped = u < 0.5 * p
        y = x ^ flipped.astype(np.int64)
    return SymbolStream(x, y, erased, flipped)
