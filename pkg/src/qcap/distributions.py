"""Inter-arrival and service time laws.

Every law is an immutable value object exposing ``mean()``, ``laplace(u)``
(the transform E[exp(-u S)]) and ``sample(rng, size)``.  Time is measured in
units of the mean service time unless stated otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence, Union

import numpy as np

WEIGHT_TOL = 1e-12


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Philox generator for ``seed``; ``stream`` selects an independent substream.

    Substreams are derived through :class:`numpy.random.SeedSequence` spawn keys, so
    ``make_rng(s, 0)`` and ``make_rng(s, 1)`` never overlap and are reproducible.
    """
    ss = np.random.SeedSequence(entropy=int(seed) & 0xFFFFFFFFFFFFFFFF, spawn_key=tuple(int(s) for s in stream))
    return np.random.Generator(np.random.Philox(ss))


def _positive(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0:
        raise ValueError(f"{name} must be finite and > 0, got {value!r}")
    return value


@dataclass(frozen=True)
class Exponential:
    rate: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "rate", _positive("rate", self.rate))

    def mean(self) -> float:
        return 1.0 / self.rate

    def laplace(self, u: float) -> float:
        u = _check_u(u)
        return self.rate / (self.rate + u)

    def sample(self, rng: np.random.Generator, size=None):
        return rng.exponential(1.0 / self.rate, size)

    def to_json(self) -> dict:
        return {"kind": "exponential", "rate": self.rate}


@dataclass(frozen=True)
class Deterministic:
    value: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "value", _positive("value", self.value))

    def mean(self) -> float:
        return self.value

    def laplace(self, u: float) -> float:
        u = _check_u(u)
        return math.exp(-u * self.value)

    def sample(self, rng: np.random.Generator, size=None):
        if size is None:
            return self.value
        return np.full(size, self.value)

    def to_json(self) -> dict:
        return {"kind": "deterministic", "value": self.value}


@dataclass(frozen=True)
class Erlang:
    shape: int
    rate: float

    def __post_init__(self):
        if int(self.shape) != self.shape or self.shape < 1:
            raise ValueError(f"shape must be a positive integer, got {self.shape!r}")
        object.__setattr__(self, "shape", int(self.shape))
        object.__setattr__(self, "rate", _positive("rate", self.rate))

    def mean(self) -> float:
        return self.shape / self.rate

    def laplace(self, u: float) -> float:
        u = _check_u(u)
        return (self.rate / (self.rate + u)) ** self.shape

    def sample(self, rng: np.random.Generator, size=None):
        return rng.gamma(self.shape, 1.0 / self.rate, size)

    def to_json(self) -> dict:
        return {"kind": "erlang", "shape": self.shape, "rate": self.rate}


@dataclass(frozen=True)
class HyperExponential:
    weights: tuple
    rates: tuple

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        r = tuple(_positive("rate", x) for x in self.rates)
        if not w or len(w) != len(r):
            raise ValueError("weights and rates must be nonempty and of equal length")
        if any(x < 0 or not math.isfinite(x) for x in w):
            raise ValueError("weights must be nonnegative")
        if abs(math.fsum(w) - 1.0) > WEIGHT_TOL:
            raise ValueError(f"weights must sum to 1, got {math.fsum(w)!r}")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "rates", r)

    def mean(self) -> float:
        return math.fsum(w / r for w, r in zip(self.weights, self.rates))

    def laplace(self, u: float) -> float:
        u = _check_u(u)
        return math.fsum(w * r / (r + u) for w, r in zip(self.weights, self.rates))

    def sample(self, rng: np.random.Generator, size=None):
        n = 1 if size is None else size
        branch = rng.choice(len(self.weights), size=n, p=np.asarray(self.weights) / sum(self.weights))
        scale = 1.0 / np.asarray(self.rates)[branch]
        out = rng.exponential(1.0, n) * scale
        return float(out[0]) if size is None else out

    def to_json(self) -> dict:
        return {"kind": "hyperexponential", "weights": list(self.weights), "rates": list(self.rates)}


@dataclass(frozen=True)
class Uniform:
    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if not (math.isfinite(lo) and math.isfinite(hi)) or lo < 0:
            raise ValueError(f"Uniform needs finite 0 <= lo, got lo={lo!r}")
        if not hi > lo:
            # lo == hi is a point mass; use Deterministic instead.
            raise ValueError(f"Uniform needs hi > lo, got lo={lo!r}, hi={hi!r}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def mean(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def laplace(self, u: float) -> float:
        u = _check_u(u)
        width = self.hi - self.lo
        return math.exp(-u * self.lo) * -math.expm1(-u * width) / (u * width)

    def sample(self, rng: np.random.Generator, size=None):
        return rng.uniform(self.lo, self.hi, size)

    def to_json(self) -> dict:
        return {"kind": "uniform", "lo": self.lo, "hi": self.hi}


@dataclass(frozen=True)
class Empirical:
    """Resampling law over a finite sample.

    The transform is the plug-in sample average of exp(-u x), so it is only an
    approximation of the transform of whatever law produced the sample.
    """

    values: tuple = field(default=())

    def __post_init__(self):
        v = tuple(sorted(float(x) for x in self.values))
        if not v:
            raise ValueError("Empirical needs at least one value")
        if v[0] < 0 or not all(math.isfinite(x) for x in v):
            raise ValueError("Empirical values must be finite and nonnegative")
        if v[-1] <= 0:
            raise ValueError("Empirical law must have positive mean")
        object.__setattr__(self, "values", v)

    def mean(self) -> float:
        return math.fsum(self.values) / len(self.values)

    def laplace(self, u: float) -> float:
        u = _check_u(u)
        return float(np.mean(np.exp(-u * np.asarray(self.values))))

    def sample(self, rng: np.random.Generator, size=None):
        arr = np.asarray(self.values)
        if size is None:
            return float(arr[rng.integers(len(arr))])
        return arr[rng.integers(len(arr), size=size)]

    def to_json(self) -> dict:
        return {"kind": "empirical", "values": list(self.values)}


Distribution = Union[Exponential, Deterministic, Erlang, HyperExponential, Uniform, Empirical]


def _check_u(u: float) -> float:
    u = float(u)
    if not u > 0:
        raise ValueError(f"transform argument must be > 0, got {u!r}")
    return u


def sample(spec: Distribution, rng: np.random.Generator, size=None):
    return spec.sample(rng, size)


def mean(spec: Distribution) -> float:
    return spec.mean()


def laplace(spec: Distribution, u: float) -> float:
    return spec.laplace(u)


def scaled(spec: Distribution, factor: float) -> Distribution:
    """The law of ``factor * S``."""
    factor = _positive("factor", factor)
    if isinstance(spec, Exponential):
        return Exponential(spec.rate / factor)
    if isinstance(spec, Deterministic):
        return Deterministic(spec.value * factor)
    if isinstance(spec, Erlang):
        return Erlang(spec.shape, spec.rate / factor)
    if isinstance(spec, HyperExponential):
        return HyperExponential(spec.weights, tuple(r / factor for r in spec.rates))
    if isinstance(spec, Uniform):
        return Uniform(spec.lo * factor, spec.hi * factor)
    return Empirical(tuple(x * factor for x in spec.values))


_ALIASES = {
    "exp": "exponential",
    "exponential": "exponential",
    "m": "exponential",
    "det": "deterministic",
    "deterministic": "deterministic",
    "d": "deterministic",
    "erlang": "erlang",
    "hyper": "hyperexponential",
    "hyperexp": "hyperexponential",
    "hyperexponential": "hyperexponential",
    "uniform": "uniform",
    "unif": "uniform",
    "empirical": "empirical",
}


def from_json(obj: Mapping[str, Any]) -> Distribution:
    """Build a law from ``{"kind": ..., params...}``.

    Recognised kinds and fields::

        {"kind": "exponential", "rate": r}            (default rate 1)
        {"kind": "deterministic", "value": v}         (default value 1)
        {"kind": "erlang", "shape": k, "rate": r}     (default rate = shape, unit mean)
        {"kind": "hyperexponential", "weights": [...], "rates": [...]}
        {"kind": "uniform", "lo": a, "hi": b}
        {"kind": "empirical", "values": [...]}
    """
    if "kind" not in obj:
        raise ValueError("distribution object needs a 'kind' field")
    kind = _ALIASES.get(str(obj["kind"]).lower())
    if kind is None:
        raise ValueError(f"unknown distribution kind {obj['kind']!r}")
    if kind == "exponential":
        return Exponential(obj.get("rate", 1.0))
    if kind == "deterministic":
        return Deterministic(obj.get("value", 1.0))
    if kind == "erlang":
        shape = obj["shape"]
        return Erlang(shape, obj.get("rate", shape))
    if kind == "hyperexponential":
        return HyperExponential(tuple(obj["weights"]), tuple(obj["rates"]))
    if kind == "uniform":
        return Uniform(obj["lo"], obj["hi"])
    return Empirical(tuple(obj["values"]))


def parse(text: str) -> Distribution:
    """Parse the compact command-line form ``kind[:params]``.

    Examples: ``exp``, ``exp:2`` (rate), ``det:1`` (value), ``erlang:2,2``
    (shape, rate), ``hyper:0.5/1,0.5/2`` (weight/rate pairs), ``uniform:0,2``,
    ``empirical:1,2,3``.  A JSON object string is also accepted.
    """
    text = text.strip()
    if text.startswith("{"):
        import json

        return from_json(json.loads(text))
    kind, _, rest = text.partition(":")
    kind = _ALIASES.get(kind.lower())
    if kind is None:
        raise ValueError(f"unknown distribution {text!r}")
    args = [a for a in rest.split(",") if a.strip()] if rest else []
    if kind == "exponential":
        return Exponential(float(args[0]) if args else 1.0)
    if kind == "deterministic":
        return Deterministic(float(args[0]) if args else 1.0)
    if kind == "erlang":
        shape = int(args[0]) if args else 2
        return Erlang(shape, float(args[1]) if len(args) > 1 else float(shape))
    if kind == "hyperexponential":
        pairs = [a.split("/") for a in args]
        return HyperExponential(tuple(float(w) for w, _ in pairs), tuple(float(r) for _, r in pairs))
    if kind == "uniform":
        lo, hi = (float(a) for a in args) if args else (0.0, 2.0)
        return Uniform(lo, hi)
    return Empirical(tuple(float(a) for a in args))


def to_json(spec: Distribution) -> dict:
    return spec.to_json()


def describe(spec: Distribution) -> str:
    params: Sequence = [f"{k}={v}" for k, v in spec.to_json().items() if k != "kind"]
    return f"{type(spec).__name__}({', '.join(params)})"
