"""Plug-in Monte Carlo estimates of stationary moments and capacities.

Each moment is the post-warm-up time average of a bounded functional of the
waiting time, with a batch-means standard error.  Entropy functionals are
evaluated per symbol and then averaged, so ``E[h(phi)]`` and ``h(E[phi])`` stay
distinct quantities.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from . import capacity as cap
from .decoherence import DEPOLARIZING, ERASURE, DecoherenceModel, ExpDecay, p_of
from .queue_sim import EventTrace, QueueConfig, batch_means, simulate

SURVIVAL = "survival"
TRANSFORM = "transform"
ENTROPY_OF_HALF_P = "entropy_of_half_p"
PHI = "phi"
ENTROPY_OF_PHI = "entropy_of_phi"
ERASURE_PROB = "erasure_prob"
FUNCTIONALS = (SURVIVAL, TRANSFORM, ENTROPY_OF_HALF_P, PHI, ENTROPY_OF_PHI, ERASURE_PROB)


@dataclass(frozen=True)
class MomentRequest:
    functional: str
    model: DecoherenceModel

    def __post_init__(self):
        if self.functional not in FUNCTIONALS:
            raise ValueError(f"functional must be one of {FUNCTIONALS}, got {self.functional!r}")
        if self.functional == TRANSFORM and not isinstance(self.model.p_map, ExpDecay):
            raise ValueError("the exp(-kappa W) functional needs an ExpDecay p_map")

    def __call__(self, w: np.ndarray) -> np.ndarray:
        p = np.asarray(p_of(self.model, w), dtype=float)
        if self.functional == SURVIVAL:
            return 1.0 - p
        if self.functional == TRANSFORM:
            return np.exp(-self.model.p_map.kappa * np.asarray(w, dtype=float))
        if self.functional == ERASURE_PROB:
            return p
        if self.functional == PHI:
            return 0.5 * p
        return np.asarray(cap.binary_entropy(0.5 * p), dtype=float)


def _stationary(trace: EventTrace) -> np.ndarray:
    w = trace.stationary_W
    if len(w) < 20:
        raise ValueError(f"need at least 20 post-warmup samples, got {len(w)}")
    return w


def estimate_moment(trace: EventTrace, req: MomentRequest) -> tuple:
    """(mean, std_error) of the requested functional over the stationary part of ``trace``."""
    return batch_means(req(_stationary(trace)))


def _context(trace: EventTrace, model: DecoherenceModel, lam: float, timing_known) -> dict:
    return {"lambda": lam, "noise": model.noise, "d": model.d, "p_map": model.p_map.to_json(),
            "timing_known": timing_known, "convention": trace.convention,
            "n_samples": len(trace) - trace.warmup}


def mc_capacity(trace: EventTrace, model: DecoherenceModel, lam: Optional[float] = None,
                noise: Optional[str] = None, timing_known: bool = True):
    """Plug-in capacity from one trace.

    Erasure and depolarizing-with-timing return a single
    :class:`~qcap.capacity.CapacityEstimate`; depolarizing without timing
    knowledge returns the ``(lower, upper)`` pair.
    """
    lam = trace.arrival_rate if lam is None else float(lam)
    if noise is not None and noise != model.noise:
        model = replace(model, noise=noise)
    w = _stationary(trace)
    if model.noise == ERASURE or timing_known:
        ctx = _context(trace, model, lam, None if model.noise == ERASURE else True)
        m, se = batch_means(cap.holevo_chi(model, w))
        return cap.CapacityEstimate(lam * m, cap.MONTE_CARLO, lam * se, ctx)
    if model.d != 2:
        raise ValueError("timing-free bounds are only available for qubits")
    mphi, sphi = estimate_moment(trace, MomentRequest(PHI, model))
    ment, sent = estimate_moment(trace, MomentRequest(ENTROPY_OF_PHI, model))
    return cap.bsc_bounds_no_timing(lam, mphi, ment, sphi, sent, **_context(trace, model, lam, False))


def per_symbol_chi(trace: EventTrace, model: DecoherenceModel) -> np.ndarray:
    """Holevo information of each post-warm-up channel use."""
    return cap.holevo_chi(model, _stationary(trace))


def merge_estimates(estimates: Sequence[cap.CapacityEstimate]) -> cap.CapacityEstimate:
    """Inverse-variance weighted combination of replications on one waiting convention."""
    if not estimates:
        raise ValueError("nothing to merge")
    conventions = {e.context.get("convention") for e in estimates}
    if len(conventions) > 1:
        raise ValueError(f"refusing to merge estimates from different conventions: {sorted(map(str, conventions))}")
    se = np.array([e.std_error for e in estimates])
    vals = np.array([e.value for e in estimates])
    if np.any(se == 0):
        exact = vals[se == 0]
        value, err = float(exact.mean()), 0.0
    else:
        w = 1.0 / se**2
        value, err = float(np.sum(w * vals) / np.sum(w)), float(math.sqrt(1.0 / np.sum(w)))
    ctx = dict(estimates[0].context)
    ctx["replications"] = len(estimates)
    return cap.CapacityEstimate(value, estimates[0].method, err, ctx)


def _one_replication(args):
    config, model, timing_known = args
    return mc_capacity(simulate(config), model, timing_known=timing_known)


def replicate(config: QueueConfig, model: DecoherenceModel, seeds: Sequence[int],
              timing_known: bool = True, workers: int = 1):
    """Run one replication per seed and merge them; results keep seed order."""
    jobs = [(replace(config, seed=s), model, timing_known) for s in seeds]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_one_replication, jobs))
    else:
        results = [_one_replication(j) for j in jobs]
    return merge_estimates(results), results
