"""Derivative-free scalar maximisation and the service-law comparison harness."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np

from . import distributions as dist

LAMBDA_BOX = (1e-6, 1.0 - 1e-6)
N_SCAN = 64
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class DegenerateObjectiveError(ValueError):
    """The objective is flat over the scan grid, so it has no meaningful argmax."""


class OptimizerError(RuntimeError):
    pass


@dataclass(frozen=True)
class ScalarProblem:
    objective: Callable[[float], float]
    a: float = LAMBDA_BOX[0]
    b: float = LAMBDA_BOX[1]
    tolerance: float = 1e-6
    max_evals: int = 200

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError(f"need a < b, got [{self.a}, {self.b}]")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be > 0")
        if self.max_evals < N_SCAN + 4:
            raise ValueError(f"max_evals must be at least {N_SCAN + 4}")


class Optimum(NamedTuple):
    argmax: float
    value: float
    at_boundary: bool = False
    n_evals: int = 0


def maximize(problem: ScalarProblem) -> Optimum:
    """Golden-section search inside the bracket picked by a 64-point scan.

    For unimodal objectives the scan makes the result global; otherwise it is
    the best local maximum next to the best grid point.
    """
    f = problem.objective
    xs = np.linspace(problem.a, problem.b, N_SCAN)
    ys = np.array([float(f(x)) for x in xs])
    if not np.all(np.isfinite(ys)):
        raise OptimizerError("objective is not finite on the scan grid")
    if ys.max() - ys.min() < 1e-14:
        raise DegenerateObjectiveError("objective is flat over the scan grid")
    evals = N_SCAN
    i = int(np.argmax(ys))
    lo, hi = xs[max(i - 1, 0)], xs[min(i + 1, N_SCAN - 1)]

    c = hi - INV_PHI * (hi - lo)
    d = lo + INV_PHI * (hi - lo)
    fc, fd = f(c), f(d)
    evals += 2
    while hi - lo > problem.tolerance:
        if evals >= problem.max_evals:
            raise OptimizerError(f"no convergence within {problem.max_evals} evaluations (width {hi - lo:.3g})")
        if fc > fd:
            hi, d, fd = d, c, fc
            c = hi - INV_PHI * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + INV_PHI * (hi - lo)
            fd = f(d)
        evals += 1

    x = 0.5 * (lo + hi)
    fx = float(f(x))
    evals += 1
    # the refined point can never be worse than the scan's best grid point
    if ys[i] > fx:
        x, fx = float(xs[i]), float(ys[i])
    boundary = x - problem.a <= problem.tolerance or problem.b - x <= problem.tolerance
    return Optimum(float(x), fx, bool(boundary), evals)


def minimize(problem: ScalarProblem) -> Optimum:
    neg = ScalarProblem(lambda x: -problem.objective(x), problem.a, problem.b, problem.tolerance, problem.max_evals)
    opt = maximize(neg)
    return opt._replace(value=-opt.value)


@dataclass
class DominanceReport:
    kappa: float
    lambdas: list
    laws: list
    capacities: dict = field(default_factory=dict)  # law name -> list over lambdas
    deterministic: list = field(default_factory=list)
    dominates: bool = True
    worst_margin: float = math.inf

    def rows(self):
        for name in self.capacities:
            for lam, c, ref in zip(self.lambdas, self.capacities[name], self.deterministic):
                yield {"lambda": lam, "law": name, "capacity": c, "deterministic": ref, "margin": ref - c}


def compare_service_laws(lambdas: Sequence[float], kappa: float, laws: Sequence[dist.Distribution],
                         margin: float = -1e-12) -> DominanceReport:
    """Tabulate M/GI/1 erasure capacities per service law against unit deterministic service."""
    from . import capacity

    for law in laws:
        if abs(law.mean() - 1.0) > 1e-9:
            raise ValueError(f"service law {dist.describe(law)} does not have unit mean")
        if isinstance(law, dist.Empirical) and law.values[0] == 0.0:
            raise ValueError(f"service law {dist.describe(law)} has an atom at zero")
    det = dist.Deterministic(1.0)
    ref = [capacity.mg1_closed_form(capacity.MG1Params(lam, kappa, det)).value for lam in lambdas]
    report = DominanceReport(kappa, list(lambdas), list(laws), deterministic=ref)
    for idx, law in enumerate(laws):
        name = f"{idx}:{dist.describe(law)}"
        caps = [capacity.mg1_closed_form(capacity.MG1Params(lam, kappa, law)).value for lam in lambdas]
        report.capacities[name] = caps
        for r, c in zip(ref, caps):
            report.worst_margin = min(report.worst_margin, r - c)
    report.dominates = report.worst_margin >= margin
    return report
