"""Closed-form classical capacities of erasure and depolarizing queue-channels.

All capacities are in bits per unit time (service-time units unless rescaled).
Expectations over the stationary waiting-time law are either supplied by the
caller (usually plug-in estimates from :mod:`qcap.estimator`) or evaluated by
adaptive Gauss-Kronrod quadrature against a :class:`WaitingLaw`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np
from scipy import integrate

from . import distributions as dist
from . import optimizer
from .decoherence import DEPOLARIZING, ERASURE, Custom, DecoherenceModel, ExpDecay, PMap, Table, p_of
from .queue_sim import batch_means

ANALYTIC = "analytic"
MONTE_CARLO = "monte_carlo"
UPPER_BOUND = "upper_bound"
LOWER_BOUND = "lower_bound"
METHODS = (ANALYTIC, MONTE_CARLO, UPPER_BOUND, LOWER_BOUND)

QUAD_RTOL = 1e-8
QUAD_ATOL = 1e-14


class QuadratureError(RuntimeError):
    pass


class BoundaryWarning(UserWarning):
    """An optimum sits on the edge of the stable region."""


def _xlog2x(x):
    x = np.asarray(x, dtype=float)
    safe = np.where(x > 0, x, 1.0)
    return np.where(x > 0, x * np.log2(safe), 0.0)


def binary_entropy(x):
    """h(x) = -x log2 x - (1-x) log2 (1-x), with 0 log 0 = 0."""
    x = np.asarray(x, dtype=float)
    if np.any((x < 0) | (x > 1)):
        raise ValueError("binary entropy needs arguments in [0, 1]")
    out = -(_xlog2x(x) + _xlog2x(1.0 - x))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class CapacityEstimate:
    value: float
    method: str = ANALYTIC
    std_error: float = 0.0
    context: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.value < -1e-12 or self.std_error < 0:
            raise ValueError(f"capacity must be >= 0 with nonnegative error, got {self.value}, {self.std_error}")
        lam, d = self.context.get("lambda"), self.context.get("d", 2)
        if lam is not None and self.value > lam * math.log2(d) * (1 + 1e-12) + 1e-15:
            raise ValueError(f"capacity {self.value} exceeds the noiseless rate {lam * math.log2(d)}")
        object.__setattr__(self, "value", max(float(self.value), 0.0))
        object.__setattr__(self, "std_error", float(self.std_error))

    def to_json(self) -> dict:
        return {"value": self.value, "std_error": self.std_error, "method": self.method, "context": dict(self.context)}


def _check_lambda(lam: float, upper: Optional[float] = None) -> float:
    lam = float(lam)
    if not (math.isfinite(lam) and lam > 0):
        raise ValueError(f"arrival rate must be > 0, got {lam!r}")
    if upper is not None and not lam < upper:
        raise ValueError(f"arrival rate must be < {upper}, got {lam!r}")
    return lam


def _check_unit(name: str, x: float, hi: float = 1.0) -> float:
    x = float(x)
    if not 0.0 <= x <= hi:
        raise ValueError(f"{name} must lie in [0, {hi}], got {x!r}")
    return x


# ---------------------------------------------------------------------------
# General formulas, fed with stationary expectations

def erasure_capacity_general(lam: float, mean_survival: float, std_error: float = 0.0,
                             method: str = ANALYTIC, **context) -> CapacityEstimate:
    """lam * E[1 - p(W)]; the same with or without receiver timing knowledge."""
    lam = _check_lambda(lam)
    m = _check_unit("mean_survival", mean_survival)
    ctx = {"lambda": lam, "noise": ERASURE, "d": 2, "timing_known": None, **context}
    return CapacityEstimate(lam * m, method, lam * std_error, ctx)


def depolarizing_capacity(lam: float, mean_entropy: float, std_error: float = 0.0,
                          method: str = ANALYTIC, **context) -> CapacityEstimate:
    """lam * (1 - E[h(p(W)/2)]), valid when the receiver knows arrival and departure times."""
    lam = _check_lambda(lam)
    m = _check_unit("mean_entropy", mean_entropy)
    ctx = {"lambda": lam, "noise": DEPOLARIZING, "d": 2, "timing_known": True, **context}
    return CapacityEstimate(lam * (1.0 - m), method, lam * std_error, ctx)


def bsc_bounds_no_timing(lam: float, mean_phi: float, mean_entropy: float,
                         se_phi: float = 0.0, se_entropy: float = 0.0, **context):
    """(lower, upper) capacity bounds for the BSC queue-channel without timing knowledge.

    lower = lam (1 - h(E[phi])), upper = lam (1 - E[h(phi)]); concavity of h
    orders them whenever both moments come from the same law.
    """
    lam = _check_lambda(lam)
    mphi = _check_unit("mean_phi", mean_phi, 0.5)
    ment = _check_unit("mean_entropy", mean_entropy)
    h_mean = binary_entropy(mphi)
    if h_mean < ment - 1e-12:
        raise ValueError(f"h(E[phi]) = {h_mean} < E[h(phi)] = {ment}: moments are not from one law")
    ment = min(ment, h_mean)
    # delta method: d/dx h(x) = log2((1 - x) / x)
    slope = math.log2((1 - mphi) / mphi) if 0 < mphi < 0.5 else 0.0
    ctx = {"lambda": lam, "noise": DEPOLARIZING, "d": 2, "timing_known": False, **context}
    lower = CapacityEstimate(lam * (1.0 - h_mean), LOWER_BOUND, lam * abs(slope) * se_phi, ctx)
    upper = CapacityEstimate(lam * (1.0 - ment), UPPER_BOUND, lam * se_entropy, ctx)
    return lower, upper


# ---------------------------------------------------------------------------
# Per-use Holevo information of the single-use channels

def qudit_erasure_chi(p, d: int = 2):
    return math.log2(d) * (1.0 - np.asarray(p, dtype=float))


def qudit_depolarizing_chi(p, d: int = 2):
    """log2 d + (1-p+p/d) log2(1-p+p/d) + (d-1) (p/d) log2(p/d)."""
    p = np.asarray(p, dtype=float)
    out = math.log2(d) + _xlog2x(1.0 - p + p / d) + (d - 1) * _xlog2x(p / d)
    return np.maximum(out, 0.0)


def holevo_chi(model: DecoherenceModel, w):
    """Holevo information of the channel seen by a symbol that waited ``w``."""
    p = np.asarray(p_of(model, w), dtype=float)
    if model.noise == ERASURE:
        return qudit_erasure_chi(p, model.d)
    if model.d == 2:
        return 1.0 - binary_entropy(0.5 * p)
    return qudit_depolarizing_chi(p, model.d)


def additive_upper_bound(lam: float, chis: Sequence[float], d: int = 2, **context) -> CapacityEstimate:
    """lam times the stationary mean of per-symbol Holevo information."""
    lam = _check_lambda(lam)
    chis = np.asarray(chis, dtype=float)
    if chis.size == 0:
        raise ValueError("need at least one Holevo value")
    if np.any(chis < -1e-15) or np.any(chis > math.log2(d) + 1e-12):
        raise ValueError(f"Holevo values must lie in [0, log2 {d}]")
    m, se = batch_means(chis) if chis.size >= 20 else (float(chis.mean()), 0.0)
    ctx = {"lambda": lam, "d": d, **context}
    return CapacityEstimate(lam * m, UPPER_BOUND, lam * se, ctx)


# ---------------------------------------------------------------------------
# Stationary waiting-time laws for quadrature

@dataclass(frozen=True)
class WaitingLaw:
    """Atom of mass ``atom`` at zero plus an exponential(``rate``) part."""

    rate: float
    atom: float = 0.0
    name: str = ""

    def __post_init__(self):
        if not self.rate > 0 or not 0 <= self.atom <= 1:
            raise ValueError("WaitingLaw needs rate > 0 and atom in [0, 1]")

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        w = rng.exponential(1.0 / self.rate, size)
        if self.atom > 0:
            w[rng.random(size) < self.atom] = 0.0
        return w


def mm1_delay_law(lam: float) -> WaitingLaw:
    """M/M/1 (unit service rate) time before service: zero w.p. 1-lam, else Exp(1-lam)."""
    lam = _check_lambda(lam, 1.0)
    return WaitingLaw(1.0 - lam, 1.0 - lam, "mm1-delay")


def mm1_sojourn_law(lam: float) -> WaitingLaw:
    lam = _check_lambda(lam, 1.0)
    return WaitingLaw(1.0 - lam, 0.0, "mm1-sojourn")


def mm1_exp_rate_law(lam: float) -> WaitingLaw:
    """Exp((1-lam)/lam): the M/M/1 waiting law behind the general-p formula."""
    lam = _check_lambda(lam, 1.0)
    return WaitingLaw((1.0 - lam) / lam, 0.0, "mm1-exp-(1-lam)/lam")


def _quad(f: Callable[[float], float], a: float, b: float) -> float:
    res = integrate.quad(f, a, b, epsabs=QUAD_ATOL, epsrel=QUAD_RTOL, limit=500, full_output=1)
    if len(res) > 3:
        raise QuadratureError(f"quadrature on [{a}, {b}] did not converge: achieved abs error {res[1]:.3g} ({res[3]})")
    return res[0]


def _breakpoints(p_map: PMap) -> list:
    if isinstance(p_map, Table):
        return [w for w in p_map.knots.tolist() if w > 0]
    return []


def expect(g: Callable[[float], float], law: WaitingLaw, breakpoints: Sequence[float] = (),
           tail_constant: bool = False) -> float:
    """E[g(W)] under ``law``.

    ``breakpoints`` split the integral where ``g`` has kinks.  With
    ``tail_constant`` the integrand is taken constant past the last breakpoint
    and that tail is added in closed form.
    """
    r = law.rate
    total = law.atom * float(g(0.0))
    cont = 1.0 - law.atom
    if cont == 0:
        return total
    density = lambda w: float(g(w)) * r * math.exp(-r * w)
    edges = [0.0] + sorted(b for b in breakpoints if b > 0)
    acc = 0.0
    for a, b in zip(edges, edges[1:]):
        acc += _quad(density, a, b)
    last = edges[-1]
    if tail_constant and len(edges) > 1:
        acc += float(g(last)) * math.exp(-r * last)
    else:
        acc += _quad(density, last, math.inf)
    return total + cont * acc


def expect_p(fn: Callable, p_map: PMap, law: WaitingLaw) -> float:
    """E[fn(p(W))] under ``law`` by quadrature."""
    return expect(lambda w: fn(float(p_map(w))), law, _breakpoints(p_map), isinstance(p_map, Table))


def p_laplace(p_map: PMap, u: float) -> float:
    """Laplace transform of the noise probability: integral of exp(-u x) p(x) dx over x >= 0."""
    u = float(u)
    if not u > 0:
        raise ValueError(f"transform argument must be > 0, got {u!r}")
    if isinstance(p_map, ExpDecay):
        return 1.0 / u - 1.0 / (u + p_map.kappa)
    f = lambda x: math.exp(-u * x) * float(p_map(x))
    if isinstance(p_map, Table):
        knots = p_map.knots.tolist()
        edges = ([0.0] if knots[0] > 0 else []) + knots
        acc = math.fsum(_quad(f, a, b) for a, b in zip(edges, edges[1:]))
        return acc + float(p_map.values[-1]) * math.exp(-u * edges[-1]) / u
    return _quad(f, 0.0, math.inf)


# ---------------------------------------------------------------------------
# M/GI/1 and M/M/1 closed forms

def pk_delay_transform(lam: float, service: dist.Distribution, u: float) -> float:
    """E[exp(-u W)] for the stationary M/GI/1 time-before-service W."""
    rho = lam * service.mean()
    if not 0 <= rho < 1:
        raise ValueError(f"unstable queue (load {rho})")
    return (1.0 - rho) * u / (u - lam * (1.0 - service.laplace(u)))


def mg1_alpha(service: dist.Distribution, kappa: float) -> float:
    """(1 - F_S(kappa)) / kappa, with F_S the service-time transform."""
    kappa = float(kappa)
    if not kappa > 0:
        raise ValueError("kappa must be > 0")
    return (1.0 - service.laplace(kappa)) / kappa


@dataclass(frozen=True)
class MG1Params:
    lam: Optional[float]
    kappa: float
    service: dist.Distribution = field(default_factory=dist.Exponential)

    def __post_init__(self):
        if self.lam is not None:
            _check_lambda(self.lam, 1.0)
        if not float(self.kappa) > 0:
            raise ValueError("kappa must be > 0")
        if abs(self.service.mean() - 1.0) > 1e-9:
            raise ValueError(f"service law must have unit mean, got {self.service.mean()}")

    @property
    def alpha(self) -> float:
        return mg1_alpha(self.service, self.kappa)


def mg1_closed_form(params: MG1Params) -> CapacityEstimate:
    """lam (1 - lam) / (1 - alpha lam) for Poisson arrivals and p(w) = 1 - exp(-kappa w)."""
    if params.lam is None:
        raise ValueError("MG1Params.lam is required")
    lam, a = float(params.lam), params.alpha
    ctx = {"lambda": lam, "kappa": params.kappa, "alpha": a, "service": dist.to_json(params.service),
           "noise": ERASURE, "d": 2, "timing_known": None, "waiting_law": "pk-delay"}
    return CapacityEstimate(lam * (1.0 - lam) / (1.0 - a * lam), ANALYTIC, 0.0, ctx)


def mg1_optimal_lambda(alpha: Union[float, MG1Params]) -> float:
    """Capacity-maximising arrival rate 1 / (1 + sqrt(1 - alpha))."""
    a = alpha.alpha if isinstance(alpha, MG1Params) else float(alpha)
    if not 0 < a <= 1 + 1e-15:
        raise ValueError(f"alpha must lie in (0, 1], got {a!r}")
    a = min(a, 1.0)
    if a == 1.0:
        warnings.warn("alpha = 1: optimal arrival rate sits on the stability boundary", BoundaryWarning, stacklevel=2)
    return 1.0 / (1.0 + math.sqrt(1.0 - a))


def mm1_general_p_capacity(lam: float, p_map: PMap) -> CapacityEstimate:
    """lam (1 - u p~(u)) with u = (1 - lam)/lam, i.e. W ~ Exp((1-lam)/lam)."""
    lam = _check_lambda(lam, 1.0)
    u = (1.0 - lam) / lam
    mean_p = u * p_laplace(p_map, u)
    ctx = {"lambda": lam, "p_map": p_map.to_json(), "noise": ERASURE, "d": 2, "timing_known": None,
           "waiting_law": "exp((1-lambda)/lambda)"}
    return CapacityEstimate(lam * (1.0 - min(max(mean_p, 0.0), 1.0)), ANALYTIC, 0.0, ctx)


def mm1_optimal_lambda_general_p(p_map: PMap, tolerance: float = 1e-6) -> float:
    """1 - argmin over u in (0, 1) of u (1 + p~(u / (1 - u)))."""
    obj = lambda u: u * (1.0 + p_laplace(p_map, u / (1.0 - u)))
    opt = optimizer.minimize(optimizer.ScalarProblem(obj, *optimizer.LAMBDA_BOX, tolerance=tolerance))
    if opt.at_boundary:
        warnings.warn("optimal arrival rate found on the edge of the search box", BoundaryWarning, stacklevel=2)
    return 1.0 - opt.argmax


def mm1_convention_report(lam: float, kappa: float) -> dict:
    """E[exp(-kappa W)] for M/M/1 under each waiting-time reading, for comparison."""
    lam = _check_lambda(lam, 1.0)
    pk = pk_delay_transform(lam, dist.Exponential(1.0), kappa)
    u = (1.0 - lam) / lam
    return {
        "delay_pk": pk,
        "sojourn": (1.0 - lam) / (1.0 - lam + kappa),
        "exp_rate_(1-lambda)/lambda": u / (u + kappa),
    }


# ---------------------------------------------------------------------------
# Qudit capacities

def qudit_capacities(lam: float, d: int, noise: str, p=None, *, mean_p: Optional[float] = None,
                     law: Optional[WaitingLaw] = None, p_map: Optional[PMap] = None,
                     timing_known: bool = True) -> CapacityEstimate:
    """Capacity of the qudit erasure or depolarizing queue-channel.

    The stationary expectation comes from one of: ``p`` (a constant or an
    array of per-symbol p(W_j) values, averaged), ``mean_p`` (erasure only),
    or ``law`` together with ``p_map`` (quadrature).
    """
    lam = _check_lambda(lam)
    if int(d) != d or d < 2:
        raise ValueError(f"d must be an integer >= 2, got {d!r}")
    d = int(d)
    if noise == ERASURE:
        chi = lambda q: qudit_erasure_chi(q, d)
    elif noise == DEPOLARIZING:
        chi = lambda q: qudit_depolarizing_chi(q, d)
    else:
        raise ValueError(f"unknown noise kind {noise!r}")
    se = 0.0
    if p is not None:
        vals = np.atleast_1d(np.asarray(chi(np.asarray(p, dtype=float)), dtype=float))
        if vals.size >= 20:
            m, se = batch_means(vals)
        else:
            m = float(vals.mean())
    elif mean_p is not None:
        if noise != ERASURE:
            raise ValueError("mean_p alone determines only the erasure capacity")
        m = float(chi(_check_unit("mean_p", mean_p)))
    elif law is not None and p_map is not None:
        m = expect_p(lambda q: float(chi(q)), p_map, law)
    else:
        raise ValueError("supply p, mean_p, or law and p_map")
    ctx = {"lambda": lam, "d": d, "noise": noise, "timing_known": timing_known if noise == DEPOLARIZING else None}
    return CapacityEstimate(lam * m, ANALYTIC if se == 0 else MONTE_CARLO, lam * se, ctx)
