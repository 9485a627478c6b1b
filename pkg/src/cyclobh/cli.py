"""Batch command line front end: ``cyclobh <subcommand> [options]``.

Every output starts with a header (tool version, full configuration, seed).
JSON outputs are ``{"header": ..., "result": ...}``; CSV outputs begin with a
``# {...}`` comment line holding the header.

Exit codes: 0 success, 1 error, 2 a stated bound was numerically exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .bh import bh_constant_search, bh_quotient, bohr_check, bohr_radius_lower_bound, sidon_bound, sidon_quotient
from .decompose import full_splitting
from .errors import CyclobhError, DimensionMismatch
from .groups import GroupParams, degree, group_exponents
from .hw import HWObservable, hw_bh_quotient, random_observable
from .learning import chernoff_sample_size, junta_approximate, learn_from_samples
from .maxmod import gmp_partial_bound, hull_sup_estimate, n3_counterexample
from .polynomial import CyclicPolynomial, evaluate, fourier_analyze, random_polynomial, sup_norm, synthesize

EXIT_OK, EXIT_ERROR, EXIT_VIOLATION = 0, 1, 2


class Outcome:
    """What a subcommand produced: a result payload and whether a bound was exceeded."""

    def __init__(self, result, rows=None, columns=None, violation=False):
        self.result = result
        self.rows = rows
        self.columns = columns
        self.violation = violation


# -- input helpers -------------------------------------------------------------
def _read_json(path: str) -> dict:
    with open(path) as fh:
        text = fh.read()
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    obj = json.loads("\n".join(lines))
    if isinstance(obj, dict) and "result" in obj and "header" in obj:
        obj = obj["result"]
    return obj


def _check_params(obj: dict, args) -> None:
    for key in ("N", "n"):
        flag = getattr(args, key, None)
        if flag is not None and int(obj[key]) != flag:
            raise DimensionMismatch(f"file has {key}={obj[key]} but --{key} {flag} was given")


def _load_polynomial(args) -> CyclicPolynomial:
    obj = _read_json(args.input)
    _check_params(obj, args)
    try:
        return CyclicPolynomial.from_json(obj)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed polynomial file {args.input}: {exc}") from exc


def _params(args) -> GroupParams:
    if args.N is None or args.n is None:
        raise ValueError("--N and --n are required without --input")
    return GroupParams(args.N, args.n)


def _polynomial_or_random(args, d: int, homogeneous: bool = False) -> CyclicPolynomial:
    if args.input:
        return _load_polynomial(args)
    P = _params(args)
    f = random_polynomial(P, d, args.density, args.coeff_law, args.seed)
    if homogeneous:
        f = f.restrict(lambda a: degree(a) == d)
    if f.is_zero():
        raise ValueError("random polynomial came out zero; raise --density or change --seed")
    return f


def _num(x) -> str:
    return repr(float(x))


def _finite(x):
    return None if x is None or (isinstance(x, float) and not math.isfinite(x)) else x


# -- subcommands ------------------------------------------------------------------
def cmd_transform(args) -> Outcome:
    """Analyze a sample table into a polynomial or synthesize the table of a polynomial."""
    obj = _read_json(args.input)
    _check_params(obj, args)
    P = GroupParams.from_json(obj)
    if args.direction == "analyze":
        if "samples" not in obj:
            raise ValueError("analyze needs a sample table with a 'samples' list")
        samples = {}
        for s in obj["samples"]:
            samples[tuple(int(x) for x in s["k"])] = complex(s["re"], s["im"])
        f = fourier_analyze(samples, P)
        return Outcome(f.to_json())
    if "terms" not in obj:
        raise ValueError("synthesize needs a polynomial with a 'terms' list")
    f = CyclicPolynomial.from_json(obj)
    values = synthesize(f, args.budget).ravel()
    k = group_exponents(P, args.budget)
    table = dict(P.to_json())
    table["samples"] = [{"k": [int(x) for x in kk], "re": float(v.real), "im": float(v.imag)}
                        for kk, v in zip(k, values)]
    rows = [list(map(int, kk)) + [_num(float(v.real)), _num(float(v.imag))] for kk, v in zip(k, values)]
    cols = [f"k{j}" for j in range(P.nvars)] + ["re", "im"]
    return Outcome(table, rows, cols)


def cmd_bh_search(args) -> Outcome:
    P = _params(args)
    start = _load_polynomial(args) if args.input else None
    rep = bh_constant_search(P, args.d, args.iterations, args.strategy, args.seed, start, args.budget)
    rows = [[i, _num(q)] for i, q in rep.trajectory]
    return Outcome(rep.to_json(), rows, ["iteration", "quotient"], rep.violates_bound)


def cmd_sidon(args) -> Outcome:
    f = _polynomial_or_random(args, args.d)
    d = max(f.degree, 1) if args.d is None else args.d
    q = sidon_quotient(f, args.budget, args.seed)
    bound = sidon_bound(f.params, d, args.bh_constant)
    res = {"d": d, "sidon_quotient": q, "bound": _finite(bound), "certified": sup_norm(f, args.budget).certified}
    return Outcome(res, [[d, _num(q), _num(bound)]], ["d", "sidon_quotient", "bound"], q > bound)


def cmd_bohr(args) -> Outcome:
    f = _polynomial_or_random(args, args.d, homogeneous=True)
    d = f.degree
    radius = bohr_radius_lower_bound(f.params, d, args.bh_constant)
    rho = radius if args.rho is None else args.rho
    chk = bohr_check(f, rho, args.budget, args.seed)
    res = {"d": d, "rho": rho, "radius_lower_bound": radius, "weighted_l1": chk.weighted_l1,
           "sup": chk.sup.to_json(), "holds": chk.holds}
    violation = rho <= radius and not chk.holds
    return Outcome(res, [[d, _num(rho), _num(radius), _num(chk.weighted_l1), _num(chk.sup.value), chk.holds]],
                   ["d", "rho", "radius_lower_bound", "weighted_l1", "sup", "holds"], violation)


def cmd_split(args) -> Outcome:
    f = _polynomial_or_random(args, args.d)
    dec = full_splitting(f, args.method, True, args.budget, args.seed, args.d)
    ref = dec.source_sup_norm.value
    rows = [[j, len(p), _num(nr.value), _num(nr.value / ref), _num(b) if b is not None else ""]
            for j, (p, nr, b) in enumerate(zip(dec.parts, dec.part_sup_norms, dec.bounds))]
    res = dec.to_json()
    res["violations"] = dec.violations()
    return Outcome(res, rows, ["support_size", "terms", "sup_norm", "ratio", "bound"], bool(dec.violations()))


def cmd_maxmod(args) -> Outcome:
    cols = ["N", "n", "d", "seed", "group_sup", "hull_sup", "ratio"]
    if args.n3_counterexample:
        p, z0 = n3_counterexample()
        est = hull_sup_estimate(p, args.samples_per_edge, args.seed)
        hull = max(est.hull_sup, abs(evaluate(p, (z0,))))
        ratio = hull / est.group_sup.value
        row = [3, 1, 2, args.seed, _num(est.group_sup.value), _num(hull), _num(ratio)]
        res = {"polynomial": p.to_json(), "z0": [z0.real, z0.imag], "group_sup": est.group_sup.value,
               "hull_sup": hull, "ratio": ratio}
        return Outcome(res, [row], cols)
    P = _params(args)
    rows, results, violation = [], [], False
    seeds = np.random.SeedSequence(args.seed).spawn(args.trials)
    for child in seeds:
        s = int(child.generate_state(1)[0])
        f = random_polynomial(P, args.d, args.density, args.coeff_law, s)
        if f.is_zero():
            continue
        est = hull_sup_estimate(f, args.samples_per_edge, s, budget=args.budget)
        bound = None
        local = max((max(a) for a in f), default=0)
        if P.N % 2 == 1 and local <= (P.N - 1) // 2:
            bound = gmp_partial_bound(P.N, max(f.degree, 1))
            violation |= est.ratio > bound
        rows.append([P.N, P.n, args.d, s, _num(est.group_sup.value), _num(est.hull_sup), _num(est.ratio)])
        results.append({"seed": s, "group_sup": est.group_sup.value, "hull_sup": est.hull_sup,
                        "ratio": est.ratio, "partial_bound": bound})
    return Outcome({"trials": results}, rows, cols, violation)


def cmd_learn(args) -> Outcome:
    truth = _polynomial_or_random(args, args.d)
    s = sup_norm(truth, args.budget)
    if args.normalize and s.value > 0:
        truth = truth / s.value
    P, d = truth.params, args.d
    bh = args.bh_constant
    if bh is None:
        bh = max(bh_quotient(truth, d, args.budget).quotient, 1.0)
    sizes = chernoff_sample_size(args.epsilon, args.delta, d, P.N, P.n, bh)
    b = sizes.b if args.b is None else args.b
    M = sizes.M_b if args.M is None else args.M
    at_formula = args.b is None and args.M is None
    rows, errs = [], []
    for t, child in enumerate(np.random.SeedSequence(args.seed).spawn(args.trials)):
        seed = int(child.generate_state(1)[0])
        rep = learn_from_samples(truth, P, d, b, M, seed=seed, truth=truth)
        errs.append(rep.l2_error_sq)
        rows.append([t, seed, M, _num(b), _num(rep.a), len(rep.surviving), _num(rep.l2_error_sq),
                     int(rep.l2_error_sq <= args.epsilon)])
    fail = float(np.mean(np.array(errs) > args.epsilon))
    # failure rate above delta by more than three binomial standard deviations
    slack = 3 * math.sqrt(args.delta * (1 - args.delta) / args.trials)
    violation = at_formula and fail > args.delta + slack
    res = {"bh_constant": bh, "M": M, "M_b": sizes.M_b, "M_headline": sizes.M, "b": b, "epsilon": args.epsilon,
           "delta": args.delta, "trials": args.trials, "failure_rate": fail,
           "median_error": float(np.median(errs)), "truth": truth.to_json()}
    cols = ["trial", "seed", "M", "b", "a", "surviving", "l2_error_sq", "within_epsilon"]
    return Outcome(res, rows, cols, violation)


def cmd_junta(args) -> Outcome:
    f = _polynomial_or_random(args, args.d)
    if args.normalize:
        f = f / sup_norm(f, args.budget).value
    measured = bh_quotient(f, args.d, args.budget).quotient
    bh = max(measured, 1.0) if args.bh_constant is None else args.bh_constant
    rep = junta_approximate(f, args.d, args.epsilon, bh, args.budget)
    dominates = bh >= measured
    violation = dominates and (rep.l2_error > args.epsilon or rep.k > rep.k_bound)
    res = rep.to_json()
    res.update({"bh_constant": bh, "measured_quotient": measured})
    row = [args.d, _num(args.epsilon), _num(bh), _num(rep.lam), rep.kept, rep.k, _num(rep.k_bound),
           _num(rep.l2_error)]
    return Outcome(res, [row], ["d", "epsilon", "bh_constant", "lambda", "kept", "k", "k_bound", "l2_error"],
                   violation)


def cmd_hw(args) -> Outcome:
    if args.input:
        obj = _read_json(args.input)
        _check_params(obj, args)
        obs = HWObservable.from_json(obj)
    else:
        if args.N is None or args.n is None:
            raise ValueError("--N and --n are required without --input")
        obs = random_observable(args.N, args.n, args.d, args.density, args.seed)
    q = hw_bh_quotient(obs, args.d, args.seed)
    res = q.to_json()
    res["hw_degree"] = obs.hw_degree
    row = [obs.N, obs.n, q.d, _num(q.lhs), _num(q.norm), _num(q.quotient),
           _num(q.explicit_bound) if q.bound_applies else ""]
    return Outcome(res, [row], ["N", "n", "d", "lhs", "operator_norm", "quotient", "bound"], q.violates_bound)


COMMANDS = {
    "transform": cmd_transform, "bh-search": cmd_bh_search, "sidon": cmd_sidon, "bohr": cmd_bohr,
    "split": cmd_split, "maxmod": cmd_maxmod, "learn": cmd_learn, "junta": cmd_junta, "hw": cmd_hw,
}
DEFAULT_FORMAT = {"maxmod": "csv", "bh-search": "csv", "learn": "csv"}


# -- argument parsing -------------------------------------------------------------
def _common(p: argparse.ArgumentParser, d_default=2) -> None:
    p.add_argument("--N", type=int, default=None, help="cyclic group order")
    p.add_argument("--n", type=int, default=None, help="number of variables")
    p.add_argument("--d", type=int, default=d_default, help="degree")
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--out", default=None, help="output path (stdout if omitted)")
    p.add_argument("--format", choices=["json", "csv"], default=None)
    p.add_argument("--threads", type=int, default=1, help="worker cap (recorded; runs are single-threaded)")
    p.add_argument("--budget", type=int, default=None, help="enumeration budget (default CYCLOBH_BUDGET or 1e8)")
    p.add_argument("--input", default=None, help="input JSON file")


def _random_opts(p) -> None:
    p.add_argument("--density", type=float, default=1.0)
    p.add_argument("--coeff-law", choices=["complex_gaussian", "unit_circle"], default="complex_gaussian")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cyclobh", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"cyclobh {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transform", help="Fourier analysis or synthesis of a JSON file")
    _common(p, None)
    p.add_argument("--direction", choices=["analyze", "synthesize"], required=True)

    p = sub.add_parser("bh-search", help="search for large BH quotients")
    _common(p)
    p.add_argument("--iterations", type=int, default=10_000)
    p.add_argument("--strategy", choices=["coordinate_ascent", "random"], default="coordinate_ascent")

    for name, helptext in (("sidon", "Sidon quotient against its bound"), ("bohr", "Bohr radius check")):
        p = sub.add_parser(name, help=helptext)
        _common(p)
        _random_opts(p)
        p.add_argument("--bh-constant", type=float, default=None, help="BH constant (default: explicit bound)")
        if name == "bohr":
            p.add_argument("--rho", type=float, default=None, help="radius (default: the lower bound)")

    p = sub.add_parser("split", help="support-homogeneous splitting")
    _common(p)
    _random_opts(p)
    p.add_argument("--method", choices=["prime", "vandermonde"], default="prime")

    p = sub.add_parser("maxmod", help="hull versus group sup ratios")
    _common(p)
    _random_opts(p)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--samples-per-edge", type=int, default=16)
    p.add_argument("--n3-counterexample", action="store_true")

    for name in ("learn", "junta"):
        p = sub.add_parser(name, help=f"{name} a bounded low-degree polynomial")
        _common(p)
        _random_opts(p)
        p.add_argument("--epsilon", type=float, default=0.3)
        p.add_argument("--bh-constant", type=float, default=None,
                       help="BH constant (default: max(measured quotient, 1))")
        p.add_argument("--no-normalize", dest="normalize", action="store_false",
                       help="do not rescale the truth to sup norm 1")
        if name == "learn":
            p.add_argument("--delta", type=float, default=0.2)
            p.add_argument("--M", type=int, default=None, help="samples per trial (default: formula M_b)")
            p.add_argument("--b", type=float, default=None, help="accuracy b (default: formula b)")
            p.add_argument("--trials", type=int, default=10)

    p = sub.add_parser("hw", help="Heisenberg-Weyl BH quotient")
    _common(p)
    p.add_argument("--density", type=float, default=1.0)
    return parser


def _header(args) -> dict:
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("out",)}
    return {"tool": "cyclobh", "version": __version__, "command": args.command, "config": config,
            "seed": args.seed}


def render(args, outcome: Outcome, fmt: str) -> str:
    header = _header(args)
    if fmt == "csv" and outcome.rows is not None:
        buf = io.StringIO()
        buf.write("# " + json.dumps(header, sort_keys=True) + "\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(outcome.columns)
        w.writerows(outcome.rows)
        return buf.getvalue()
    return json.dumps({"header": header, "result": outcome.result}, indent=2, sort_keys=True,
                      default=_json_default) + "\n"


def _json_default(x):
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, np.ndarray):
        return [_json_default(v) if isinstance(v, complex) else v for v in x.tolist()]
    if isinstance(x, np.generic):
        return x.item()
    raise TypeError(f"cannot serialize {type(x).__name__}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    fmt = args.format or DEFAULT_FORMAT.get(args.command, "json")
    try:
        outcome = COMMANDS[args.command](args)
        text = render(args, outcome, fmt)
    except (CyclobhError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"cyclobh {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_VIOLATION if outcome.violation else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
