"""``qcap`` command line.

Subcommands::

    qcap capacity  --noise erasure --service exp --lambda 0.5 --kappa 1
    qcap sweep     --kappas 0.01,0.1,0.5,1,2 --lambdas 0.01:0.99:99 [--mc --symbols 1e6] -o fig2.csv
    qcap optimize  --kappa 1 --service exp
    qcap code-test --n 2000 --multipliers 0.5,0.9,1.1 --trials 100
    qcap simulate  --n 10 --seed 7 --arrival det:2 --service det:1

Parameters
----------
Distributions (``--service``, ``--arrival``) take ``kind[:params]``:
``exp[:rate]``, ``det[:value]``, ``erlang:shape[,rate]``,
``hyper:w1/r1,w2/r2,...``, ``uniform:lo,hi``, ``empirical:x1,x2,...``, or a
JSON object ``{"kind": "exponential"|"deterministic"|"erlang"|"hyperexponential"|"uniform"|"empirical", ...}``.

The noise probability is one of ``--kappa K`` (``p(w) = 1 - exp(-K w)``,
``K = 0`` meaning no noise), ``--p-table`` (``w:p,w:p,...`` or JSON
``[[w, p], ...]``, piecewise linear and flat past the last knot) or
``--p-const P``.

``--config FILE`` reads a JSON object whose keys are flag names (``lambda``,
``p-table`` or ``p_table``, ...); explicit flags win over the file.  All times
are in mean-service-time units; ``--mu`` rescales reported rates and times to
a server of rate ``mu``.  ``QCAP_THREADS`` caps the worker pool.

Exit status: 0 on success, 2 on invalid input, 3 on a runtime failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from typing import Optional, Sequence

import numpy as np

from . import capacity as cap
from . import coding
from . import distributions as dist
from . import estimator as est
from . import optimizer as opt
from . import queue_sim as qs
from .decoherence import DEPOLARIZING, ERASURE, DecoherenceModel, ExpDecay, Table, constant, p_map_from_json

EXIT_OK, EXIT_INVALID, EXIT_RUNTIME = 0, 2, 3


class InvalidInput(Exception):
    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def _fmt(x) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    return format(float(x), ".17g")


def _checked(field: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except (ValueError, TypeError, KeyError, json.JSONDecodeError) as exc:
        raise InvalidInput(field, str(exc)) from exc


def _threads() -> int:
    raw = os.environ.get("QCAP_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise InvalidInput("QCAP_THREADS", f"not an integer: {raw!r}")


def _float_list(text: str):
    return [float(x) for x in str(text).split(",") if x.strip()]


def _grid(text: str):
    """``start:stop:count`` (inclusive, evenly spaced) or a comma list."""
    text = str(text)
    if ":" in text:
        a, b, n = text.split(":")
        n = int(n)
        if n < 1:
            raise ValueError("grid needs at least one point")
        return np.linspace(float(a), float(b), n).tolist() if n > 1 else [float(a)]
    return _float_list(text)


def _count(text) -> int:
    v = float(text)
    if v != int(v) or v < 1:
        raise ValueError(f"expected a positive integer, got {text!r}")
    return int(v)


def _parse_table(text: str) -> Table:
    text = str(text).strip()
    if text.startswith("["):
        return Table(tuple(tuple(p) for p in json.loads(text)))
    pts = [tuple(float(v) for v in item.split(":")) for item in text.split(",") if item.strip()]
    return Table(tuple(pts))


def _p_map(args):
    given = [n for n in ("kappa", "p_table", "p_const") if getattr(args, n, None) is not None]
    if len(given) > 1:
        raise InvalidInput("kappa", f"give only one of --kappa, --p-table, --p-const (got {', '.join(given)})")
    if not given:
        raise InvalidInput("kappa", "one of --kappa, --p-table, --p-const is required")
    if args.kappa is not None:
        k = float(args.kappa)
        if k < 0:
            raise InvalidInput("kappa", f"must be >= 0, got {k}")
        return constant(0.0) if k == 0 else ExpDecay(k)
    if args.p_table is not None:
        if isinstance(args.p_table, list):
            return _checked("p-table", p_map_from_json, {"kind": "table", "points": args.p_table})
        return _checked("p-table", _parse_table, args.p_table)
    return _checked("p-const", constant, float(args.p_const))


def _is_constant(p_map) -> bool:
    return isinstance(p_map, Table) and len(set(p_map.values.tolist())) == 1


def _dist(field: str, value):
    if isinstance(value, dict):
        return _checked(field, dist.from_json, value)
    return _checked(field, dist.parse, str(value))


def _lambda(args, upper: Optional[float] = 1.0) -> float:
    if args.lam is None:
        raise InvalidInput("lambda", "--lambda is required")
    lam = float(args.lam)
    if not lam > 0 or (upper is not None and not lam < upper):
        raise InvalidInput("lambda", f"must lie in (0, {upper}) for a stable queue, got {lam}")
    return lam


def _mu(args) -> float:
    mu = float(args.mu)
    if not mu > 0:
        raise InvalidInput("mu", f"must be > 0, got {mu}")
    return mu


def _scale_record(rec: dict, mu: float) -> dict:
    if mu != 1.0:
        rec = dict(rec, value=rec["value"] * mu, std_error=rec["std_error"] * mu)
        rec["context"] = dict(rec["context"], mu=mu)
    return rec


def _emit_json(obj, path: Optional[str]):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_text(text: str, path: Optional[str]):
    if path:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _check_writable(path: Optional[str], field: str = "output"):
    if not path:
        return
    parent = os.path.dirname(os.path.abspath(path)) or "."
    if not os.path.isdir(parent) or not os.access(parent, os.W_OK) or (os.path.isdir(path)):
        raise InvalidInput(field, f"cannot write to {path!r}")


# ---------------------------------------------------------------------------
# capacity

WAITING_LAWS = {"delay": cap.mm1_delay_law, "sojourn": cap.mm1_sojourn_law, "exp-rate": cap.mm1_exp_rate_law}


def cmd_capacity(args) -> dict:
    noise = args.noise
    d = _checked("d", int, args.d)
    if d < 2:
        raise InvalidInput("d", f"must be >= 2, got {d}")
    p_map = _p_map(args)
    service = _dist("service", args.service)
    mu = _mu(args)

    if _is_constant(p_map):
        lam = _lambda(args, upper=None)
        p = float(p_map.values[0])
        if noise == DEPOLARIZING and d == 2 and not args.timing:
            lower, upper = cap.bsc_bounds_no_timing(lam, p / 2, cap.binary_entropy(p / 2))
            return _bounds_record(lower, upper, mu)
        rec = cap.qudit_capacities(lam, d, noise, p, timing_known=args.timing).to_json()
        rec["context"]["p_map"] = p_map.to_json()
        return _scale_record(rec, mu)

    lam = _lambda(args)
    if abs(service.mean() - 1.0) > 1e-9:
        raise InvalidInput("service", f"service law must have unit mean (got {service.mean()}); use --mu to rescale")
    if lam * service.mean() >= 1:
        raise InvalidInput("lambda", "unstable queue")

    if args.mc:
        return _mc_capacity_record(args, lam, service, DecoherenceModel(p_map, noise, d), mu)

    exp_service = isinstance(service, dist.Exponential)
    if noise == ERASURE and isinstance(p_map, ExpDecay):
        params = _checked("service", cap.MG1Params, lam, p_map.kappa, service)
        base = cap.mg1_closed_form(params)
        if d == 2:
            rec = base.to_json()
        else:
            rec = cap.qudit_capacities(lam, d, ERASURE, mean_p=1.0 - base.value / lam).to_json()
            rec["context"].update(alpha=params.alpha, waiting_law="pk-delay", service=dist.to_json(service))
        rec["context"]["p_map"] = p_map.to_json()
        if exp_service:
            rec["context"]["transform_by_convention"] = cap.mm1_convention_report(lam, p_map.kappa)
        return _scale_record(rec, mu)

    if not exp_service:
        raise InvalidInput("service", "no closed form for this noise/service combination; add --mc")

    if noise == ERASURE and args.waiting_law == "exp-rate":
        base = cap.mm1_general_p_capacity(lam, p_map)
        rec = base.to_json() if d == 2 else cap.qudit_capacities(
            lam, d, ERASURE, mean_p=1.0 - base.value / lam).to_json()
        rec["context"].update(p_map=p_map.to_json(), waiting_law="exp((1-lambda)/lambda)")
        return _scale_record(rec, mu)

    law = WAITING_LAWS[args.waiting_law](lam)
    if noise == DEPOLARIZING and d == 2 and not args.timing:
        mphi = cap.expect_p(lambda q: 0.5 * q, p_map, law)
        ment = cap.expect_p(lambda q: cap.binary_entropy(0.5 * q), p_map, law)
        lower, upper = cap.bsc_bounds_no_timing(lam, mphi, ment, waiting_law=law.name, p_map=p_map.to_json())
        return _bounds_record(lower, upper, mu)
    rec = cap.qudit_capacities(lam, d, noise, law=law, p_map=p_map, timing_known=args.timing).to_json()
    rec["context"].update(p_map=p_map.to_json(), waiting_law=law.name)
    return _scale_record(rec, mu)


def _bounds_record(lower, upper, mu: float) -> dict:
    lo, up = _scale_record(lower.to_json(), mu), _scale_record(upper.to_json(), mu)
    rec = dict(lo)
    rec["bounds"] = {"lower": lo, "upper": up}
    return rec


def _mc_capacity_record(args, lam, service, model, mu) -> dict:
    n = _checked("symbols", _count, args.symbols)
    warmup = None if args.warmup is None else _checked("warmup", int, args.warmup)
    warmup = qs.default_warmup(n) if warmup is None else warmup
    config = _checked("symbols", qs.QueueConfig, lam, service=service, n_symbols=n + warmup, warmup=warmup,
                      seed=args.seed, convention=args.convention)
    trace = qs.simulate(config)
    if model.d > 2:
        res = cap.qudit_capacities(lam, model.d, model.noise, _p_values(trace, model), timing_known=args.timing)
        rec = res.to_json()
        rec["context"]["convention"] = trace.convention
        return _scale_record(rec, mu)
    res = est.mc_capacity(trace, model, lam, timing_known=args.timing)
    if isinstance(res, tuple):
        return _bounds_record(res[0], res[1], mu)
    return _scale_record(res.to_json(), mu)


def _p_values(trace, model):
    return np.asarray(model.p(trace.stationary_W), dtype=float)


# ---------------------------------------------------------------------------
# sweep

SWEEP_HEADER = ["lambda", "kappa", "capacity_analytic", "capacity_mc", "mc_stderr"]


def _sweep_mc_column(job):
    lam, kappas, service, n, warmup, seed, idx, convention = job
    # one trace per arrival rate, reused for every kappa
    config = qs.QueueConfig(lam, service=service, n_symbols=n + warmup, warmup=warmup,
                            seed=int(np.random.SeedSequence((seed, idx)).generate_state(1, np.uint64)[0]),
                            convention=convention)
    trace = qs.simulate(config)
    out = []
    for k in kappas:
        model = DecoherenceModel(constant(0.0) if k == 0 else ExpDecay(k))
        e = est.mc_capacity(trace, model, lam)
        out.append((e.value, e.std_error))
    return out


def cmd_sweep(args) -> tuple:
    lambdas = _checked("lambdas", _grid, args.lambdas)
    kappas = _checked("kappas", _float_list, args.kappas)
    if not lambdas or not kappas:
        raise InvalidInput("lambdas", "grid is empty")
    if any(not 0 < l < 1 for l in lambdas):
        raise InvalidInput("lambdas", "every arrival rate must lie in (0, 1)")
    if any(k < 0 for k in kappas):
        raise InvalidInput("kappas", "decoherence rates must be >= 0")
    service = _dist("service", args.service)
    if abs(service.mean() - 1.0) > 1e-9:
        raise InvalidInput("service", "service law must have unit mean")
    mu = _mu(args)
    _check_writable(args.output)
    _check_writable(args.summary, "summary")

    analytic = {}
    for k in kappas:
        for l in lambdas:
            analytic[(k, l)] = l if k == 0 else cap.mg1_closed_form(cap.MG1Params(l, k, service)).value

    mc = {}
    if args.mc:
        n = _checked("symbols", _count, args.symbols)
        warmup = qs.default_warmup(n) if args.warmup is None else _checked("warmup", int, args.warmup)
        jobs = [(l, kappas, service, n, warmup, args.seed, i, args.convention) for i, l in enumerate(lambdas)]
        workers = _threads()
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                cols = list(pool.map(_sweep_mc_column, jobs))
        else:
            cols = [_sweep_mc_column(j) for j in jobs]
        for l, col in zip(lambdas, cols):
            for k, (v, se) in zip(kappas, col):
                mc[(k, l)] = (v, se)

    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(SWEEP_HEADER)
    for k in kappas:
        for l in lambdas:
            v, se = mc.get((k, l), (None, None))
            wr.writerow([_fmt(l * mu), _fmt(k * mu), _fmt(analytic[(k, l)] * mu),
                         _fmt(None if v is None else v * mu), _fmt(None if se is None else se * mu)])
    summary = {"service": dist.to_json(service), "mu": mu, "curves": [_peak_summary(k, service, lambdas, analytic, mu) for k in kappas]}
    return buf.getvalue(), summary


def _peak_summary(kappa: float, service, lambdas, analytic, mu: float) -> dict:
    grid_vals = [analytic[(kappa, l)] for l in lambdas]
    i = int(np.argmax(grid_vals))
    entry = {"kappa": kappa * mu, "grid_argmax": lambdas[i] * mu, "grid_max": grid_vals[i] * mu}
    if kappa > 0:
        a = cap.mg1_alpha(service, kappa)
        f = lambda l: cap.mg1_closed_form(cap.MG1Params(l, kappa, service)).value
        o = opt.maximize(opt.ScalarProblem(f))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", cap.BoundaryWarning)
            entry.update(alpha=a, argmax=o.argmax * mu, max=o.value * mu, closed_form_argmax=cap.mg1_optimal_lambda(a) * mu)
    return entry


# ---------------------------------------------------------------------------
# optimize

def cmd_optimize(args) -> dict:
    p_map = _p_map(args)
    service = _dist("service", args.service)
    mu = _mu(args)
    if abs(service.mean() - 1.0) > 1e-9:
        raise InvalidInput("service", "service law must have unit mean")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", cap.BoundaryWarning)
        if isinstance(p_map, ExpDecay):
            params = _checked("service", cap.MG1Params, None, p_map.kappa, service)
            a = params.alpha
            lam_star = cap.mg1_optimal_lambda(a)
            f = lambda l: cap.mg1_closed_form(cap.MG1Params(l, p_map.kappa, service)).value
            numeric = opt.maximize(opt.ScalarProblem(f))
            value = f(min(lam_star, opt.LAMBDA_BOX[1]))
            method = "mg1_closed_form"
            extra = {"alpha": a, "service": dist.to_json(service)}
        else:
            if not isinstance(service, dist.Exponential):
                raise InvalidInput("service", "general p(w) optimisation needs exponential service")
            lam_star = cap.mm1_optimal_lambda_general_p(p_map)
            f = lambda l: cap.mm1_general_p_capacity(l, p_map).value
            numeric = opt.maximize(opt.ScalarProblem(f))
            value = f(lam_star)
            method = "mm1_general_p"
            extra = {"waiting_law": "exp((1-lambda)/lambda)"}
    boundary = bool(caught) or numeric.at_boundary
    return {
        "lambda_opt": lam_star * mu,
        "lambda_opt_numeric": numeric.argmax * mu,
        "capacity_at_opt": value * mu,
        "boundary": boundary,
        "method": method,
        "context": {"p_map": p_map.to_json(), "mu": mu, **extra},
    }


# ---------------------------------------------------------------------------
# code-test

def cmd_code_test(args) -> tuple:
    n = _checked("n", _count, args.n)
    trials = _checked("trials", _count, args.trials)
    mults = _checked("multipliers", _float_list, args.multipliers)
    if not mults or any(m < 0 for m in mults):
        raise InvalidInput("multipliers", "need a nonempty list of nonnegative multipliers")
    lam = _lambda(args)
    p_map = _p_map(args)
    service = _dist("service", args.service)
    _check_writable(args.output)
    _check_writable(args.json, "json")
    warmup = 10_000 if args.warmup is None else _checked("warmup", int, args.warmup)
    symbols = trials * n if args.symbols is None else _checked("symbols", _count, args.symbols)
    if symbols < n:
        raise InvalidInput("symbols", f"need at least n = {n} stationary symbols")
    config = _checked("lambda", qs.QueueConfig, lam, service=service, n_symbols=symbols + warmup, warmup=warmup,
                      seed=args.seed, convention=args.convention)
    model = DecoherenceModel(p_map, ERASURE, 2)
    trace = qs.simulate(config)
    reports = coding.rate_sweep(n, mults, trace, model, trials, seed=args.seed, workers=_threads())
    bound = cap.additive_upper_bound(lam, est.per_symbol_chi(trace, model))
    summary = {
        "n": n, "trials": trials, "lambda": lam, "mean_erasure": coding.mean_erasure(trace, model),
        "capacity_per_use": bound.value / lam, "upper_bound": bound.to_json(),
        "transition_midpoint": _nan_to_none(coding.transition_midpoint(reports)),
        "reports": [r.to_json() for r in reports],
    }
    return coding.reports_to_csv(reports), summary


def _nan_to_none(x):
    return None if x is None or (isinstance(x, float) and math.isnan(x)) else x


# ---------------------------------------------------------------------------
# simulate

def cmd_simulate(args) -> str:
    n = _checked("n", _count, args.n)
    service = _dist("service", args.service)
    if args.arrival is not None:
        arrival = _dist("arrival", args.arrival)
        lam = None
    else:
        lam = _lambda(args)
        arrival = None
    mu = _mu(args)
    _check_writable(args.output)
    warmup = 0 if args.warmup is None else _checked("warmup", int, args.warmup)
    config = _checked("arrival", qs.QueueConfig, lam, arrival, service, args.convention, n, warmup, args.seed)
    trace = qs.simulate(config)
    if mu != 1.0:
        trace = qs.EventTrace(trace.A / mu, trace.S / mu, trace.D / mu, trace.delay / mu, trace.convention,
                              trace.warmup, trace.arrival_rate * mu)
    return trace.to_csv()


# ---------------------------------------------------------------------------
# argument parsing

def _add_common(p, seed=True):
    p.add_argument("--config", help="JSON file with default flag values")
    p.add_argument("--mu", type=float, default=1.0, help="service rate used to rescale outputs")
    if seed:
        p.add_argument("--seed", type=int, default=0)


def _add_pmap(p):
    p.add_argument("--kappa", type=float)
    p.add_argument("--p-table", dest="p_table")
    p.add_argument("--p-const", dest="p_const", type=float)


def _add_queue(p):
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--service", default="exp")
    p.add_argument("--convention", choices=qs.CONVENTIONS, default=qs.DELAY)
    p.add_argument("--warmup", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qcap", description="Queue-channel capacity toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("capacity", help="analytic (or --mc) capacity as a JSON record")
    _add_common(p)
    _add_queue(p)
    _add_pmap(p)
    p.add_argument("--noise", choices=(ERASURE, DEPOLARIZING), default=ERASURE)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--timing", action=argparse.BooleanOptionalAction, default=True,
                   help="receiver knows arrival and departure times")
    p.add_argument("--waiting-law", dest="waiting_law", choices=sorted(WAITING_LAWS), default="delay",
                   help="M/M/1 waiting law used for quadrature when no closed form applies")
    p.add_argument("--mc", action="store_true", help="estimate from a simulated trace instead")
    p.add_argument("--symbols", default="1e6")
    p.add_argument("-o", "--output")

    p = sub.add_parser("sweep", help="capacity over an arrival-rate grid as CSV")
    _add_common(p)
    p.add_argument("--lambdas", default="0.01:0.99:99")
    p.add_argument("--kappas", default="0.01,0.1,0.5,1,2")
    p.add_argument("--service", default="exp")
    p.add_argument("--convention", choices=qs.CONVENTIONS, default=qs.DELAY)
    p.add_argument("--mc", action="store_true")
    p.add_argument("--symbols", default="1e6")
    p.add_argument("--warmup", type=int)
    p.add_argument("-o", "--output")
    p.add_argument("--summary", help="write per-kappa peak locations as JSON")

    p = sub.add_parser("optimize", help="capacity-maximising arrival rate as JSON")
    _add_common(p, seed=False)
    _add_pmap(p)
    p.add_argument("--service", default="exp")
    p.add_argument("-o", "--output")

    p = sub.add_parser("code-test", help="random linear code rate sweep as CSV")
    _add_common(p)
    _add_queue(p)
    _add_pmap(p)
    p.add_argument("--n", default="2000")
    p.add_argument("--multipliers", default="0.5,0.9,1.1")
    p.add_argument("--trials", default="100")
    p.add_argument("--symbols", help="stationary trace length (default trials * n)")
    p.add_argument("-o", "--output")
    p.add_argument("--json", help="also write the full JSON report here")
    p.set_defaults(lam=0.5, kappa=None)

    p = sub.add_parser("simulate", help="dump a queue trace as CSV")
    _add_common(p)
    _add_queue(p)
    p.add_argument("--n", default="1000")
    p.add_argument("--arrival", help="inter-arrival law (default Poisson at --lambda)")
    p.add_argument("-o", "--output")
    return parser


def _normalise_config(obj: dict) -> dict:
    out = {}
    for key, val in obj.items():
        k = key.replace("-", "_")
        out["lam" if k == "lambda" else k] = val
    return out


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    args = parser.parse_args(argv)
    if args.config:
        try:
            with open(args.config) as fh:
                file_cfg = _normalise_config(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidInput("config", str(exc)) from exc
        sub = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest for a in sub._actions}
        unknown = sorted(set(file_cfg) - known)
        if unknown:
            raise InvalidInput("config", f"unknown keys {unknown}")
        sub.set_defaults(**file_cfg)
        args = parser.parse_args(argv)
    if args.command == "code-test" and all(getattr(args, n) is None for n in ("kappa", "p_table", "p_const")):
        args.kappa = 1.0
    return args


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = parse_args(argv)
        if args.command == "capacity":
            _emit_json(cmd_capacity(args), args.output)
        elif args.command == "sweep":
            text, summary = cmd_sweep(args)
            _emit_text(text, args.output)
            if args.summary:
                _emit_json(summary, args.summary)
        elif args.command == "optimize":
            _emit_json(cmd_optimize(args), args.output)
        elif args.command == "code-test":
            text, summary = cmd_code_test(args)
            _emit_text(text, args.output)
            if args.json:
                _emit_json(summary, args.json)
        elif args.command == "simulate":
            _emit_text(cmd_simulate(args), args.output)
    except InvalidInput as exc:
        print(f"qcap: invalid {exc}", file=sys.stderr)
        return EXIT_INVALID
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_INVALID
    except (ValueError, TypeError) as exc:
        print(f"qcap: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as exc:  # noqa: BLE001
        print(f"qcap: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
