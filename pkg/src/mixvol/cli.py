"""Command line front end.  Reports are JSON on stdout.

Exit codes: 0 success, 1 route disagreement or invariant violation,
2 input error.
"""

from __future__ import annotations

import argparse
import itertools
import json
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import io, plotting
from ._exact import exponent_vectors
from .bernstein import DEFAULT_BUDGET, BoundViolation, verify_bernstein
from .geometry import convex_hull, mixed_volume_ie, mixed_volume_interp
from .groebner import DEFAULT_PRIME, is_prime, samuel_mixed_multiplicity
from .hilbert import (
    StabilizationError,
    configuration_from_polytopes,
    default_base,
    extract_mixed_multiplicity,
    hilbert_value,
    mixed_mults_via_diagonals,
    observed_degree,
    probe_af,
)

OK, DISAGREE, BAD_INPUT = 0, 1, 2

ROUTES_MV = ("geometric", "interp", "algebraic", "samuel")


class Timer:
    def __init__(self):
        self.times: dict[str, float] = {}

    def run(self, name, fn, *args, **kwargs):
        t = time.perf_counter()
        try:
            return fn(*args, **kwargs)
        finally:
            self.times[name] = round(time.perf_counter() - t, 6)


def _num(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else str(x)
    return x


def _alpha_key(a) -> str:
    return ",".join(str(x) for x in a)


def _parse_ints(text: str, what: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise io.InputError(f"{what}: expected comma-separated integers, got {text!r}") from None


def _read_input(args) -> object:
    if args.input in (None, "-"):
        text = sys.stdin.read()
    else:
        try:
            text = Path(args.input).read_text()
        except OSError as exc:
            raise io.InputError(f"cannot read {args.input}: {exc.strerror}") from None
    return io.loads(text)


def _figure_dir(args) -> Path | None:
    if not args.figures:
        return None
    d = Path(args.figures)
    d.mkdir(parents=True, exist_ok=True)
    return d


# ---------------------------------------------------------- commands


def cmd_mv(args, timer: Timer):
    polys = io.tuple_from_json(_read_input(args))
    routes = ROUTES_MV if args.route in (None, "all") else (args.route,)
    unknown = [r for r in routes if r not in ROUTES_MV]
    if unknown:
        raise io.InputError(f"unknown route for mv: {unknown[0]}")
    n = polys[0].ambient_dim
    alpha = (0,) + (1,) * n
    values, bases = {}, {}
    report = {"command": "mv", "dim": n, "seed": args.seed, "prime": args.prime}
    config = None
    if "algebraic" in routes or "samuel" in routes:
        config = configuration_from_polytopes(polys)
    for r in routes:
        if r == "geometric":
            values[r] = _num(timer.run(r, mixed_volume_ie, polys))
        elif r == "interp":
            values[r] = _num(timer.run(r, mixed_volume_interp, polys))
        elif r == "algebraic":
            ext = timer.run(r, extract_mixed_multiplicity, config, alpha, args.base)
            values[r], bases[r] = ext.value, ext.base
        else:
            res = timer.run(r, samuel_mixed_multiplicity, config, alpha, args.seed, args.prime)
            values[r] = res.value
            report["samuel"] = {"dim": res.dim, "seed_used": res.seed, "reseeded": res.reseeded}
    agree = len(set(values.values())) == 1
    report.update(routes=values, agreement=agree, bases=bases)
    if agree:
        report["value"] = next(iter(values.values()))
    figs = _figure_dir(args)
    if figs is not None:
        path = plotting.plot_tuple(polys, figs / "mv_polytopes.png")
        report["figures"] = [str(path)] if path else []
    return report, OK if agree else DISAGREE


def _alphas(args, config):
    r = config.degree_of_hilbert_polynomial
    if args.alpha:
        a = _parse_ints(args.alpha, "--alpha")
        if len(a) != config.s + 1 or sum(a) != r or min(a) < 0:
            raise io.InputError(f"--alpha must have {config.s + 1} non-negative entries summing to {r}")
        return [a]
    return exponent_vectors(config.s + 1, r)


def cmd_mixedmult(args, timer: Timer):
    config = io.configuration_from_json(_read_input(args))
    route = args.route or "both"
    if route not in ("fd", "diag", "both"):
        raise io.InputError(f"unknown route for mixedmult: {route}")
    alphas = _alphas(args, config)
    report = {"command": "mixedmult", "r": config.degree_of_hilbert_polynomial}
    fd, diag, bases = {}, {}, {}
    if route in ("fd", "both"):
        def run_fd():
            for a in alphas:
                ext = extract_mixed_multiplicity(config, a, args.base)
                fd[_alpha_key(a)] = ext.value
                bases[_alpha_key(a)] = ext.base
        timer.run("fd", run_fd)
        report["fd"] = fd
        report["bases"] = bases
    if route in ("diag", "both"):
        vec = timer.run("diag", mixed_mults_via_diagonals, config, args.base)
        diag = {_alpha_key(a): vec[a] for a in alphas}
        report["diag"] = diag
    agree = not (fd and diag) or fd == diag
    report["agreement"] = agree
    return report, OK if agree else DISAGREE


def cmd_hilbert(args, timer: Timer):
    config = io.configuration_from_json(_read_input(args))
    k = config.s + 1
    if args.u:
        points = [_parse_ints(u, "--u") for u in args.u]
        for u in points:
            if len(u) != k or min(u) < 0:
                raise io.InputError(f"--u needs {k} non-negative entries")
    else:
        points = [tuple(u) for u in itertools.product(range(3), repeat=k)]
    values = timer.run("values", lambda: {_alpha_key(u): hilbert_value(config, u) for u in points})
    n = config.num_vars - 1
    report = {"command": "hilbert", "values": values}
    try:
        r = timer.run("degree", observed_degree, config, args.base)
        report["degree"] = {"observed": r, "confirmed": True}
    except StabilizationError as exc:
        report["degree"] = {"observed": None, "confirmed": False, "detail": str(exc)}
    report["degree"]["candidates"] = {"n-1": n - 1, "n": n, "n+1": n + 1}
    report["degree"]["matches"] = [
        name for name, v in report["degree"]["candidates"].items() if v == report["degree"]["observed"]
    ]
    figs = _figure_dir(args)
    if figs is not None:
        top = args.base or default_base(config)
        dirs = [(1,) * k] + [tuple(int(i == j) for i in range(k)) for j in range(k)]
        series = {str(lam): [(t, hilbert_value(config, tuple(t * x for x in lam))) for t in range(top + 1)] for lam in dirs}
        report["figures"] = [str(plotting.plot_hilbert_diagonal(series, figs / "hilbert_diagonals.png"))]
    return report, OK if report["degree"]["confirmed"] else DISAGREE


def cmd_samuel(args, timer: Timer):
    config = io.configuration_from_json(_read_input(args))
    rows = {}
    agree = True
    for a in _alphas(args, config):
        res = timer.run(f"samuel {_alpha_key(a)}", samuel_mixed_multiplicity, config, a, args.seed, args.prime)
        row = {"dim": res.dim, "expected_dim": a[0] + 1, "value": res.value,
               "seed_used": res.seed, "reseeded": res.reseeded}
        if args.route != "samuel":
            ext = timer.run(f"fd {_alpha_key(a)}", extract_mixed_multiplicity, config, a, args.base)
            row["fd"] = ext.value
            row["agreement"] = ext.value == res.value
            agree &= row["agreement"]
        rows[_alpha_key(a)] = row
    return {"command": "samuel", "seed": args.seed, "prime": args.prime, "alphas": rows,
            "agreement": agree}, OK if agree else DISAGREE


def cmd_bernstein(args, timer: Timer):
    system = io.system_from_json(_read_input(args))
    qs = _parse_ints(args.exhaustive_q, "--exhaustive-q") if args.exhaustive_q else (5, 7)
    for q in qs:
        if not is_prime(q):
            raise io.InputError(f"--exhaustive-q: {q} is not prime")
    trials = 10 if args.trials is None else args.trials
    try:
        rep = timer.run("verify", verify_bernstein, system, args.prime, qs, trials, args.seed, args.budget)
        code = OK
        violation = None
    except BoundViolation as exc:
        rep, code, violation = exc.report, DISAGREE, str(exc)
    report = {
        "command": "bernstein",
        "seed": args.seed,
        "prime": args.prime,
        "bound": rep.bound,
        "multiplicity": rep.multiplicity,
        "fields": [
            {"q": c.q, "distinct": c.distinct, "bound": c.bound, "finite": c.finite,
             "asserted": c.asserted, **({"note": c.note} if c.note else {})}
            for c in rep.counts
        ],
        "attainment": {"trials": rep.trials, "attained": rep.attained},
        "flags": rep.flags(),
    }
    if rep.multiplicity_note:
        report["multiplicity_note"] = rep.multiplicity_note
    if violation:
        report["violation"] = violation
    figs = _figure_dir(args)
    if figs is not None:
        distinct = {c.q: c.distinct for c in rep.counts if c.distinct is not None}
        report["figures"] = [str(plotting.plot_bernstein(rep.bound, distinct, rep.multiplicity, figs / "bernstein.png"))]
    return report, code


def cmd_probe_af(args, timer: Timer):
    config = io.configuration_from_json(_read_input(args))
    rep = timer.run("probe", probe_af, config, args.base)
    mixed, first, second = rep.values
    return {
        "command": "probe-af",
        "lhs": rep.lhs,
        "rhs": rep.rhs,
        "relation": rep.relation,
        "e_mixed": mixed,
        "e_first_doubled": first,
        "e_second_doubled": second,
        "hypothesis_ok": rep.hypothesis_ok,
    }, OK


def _random_tuple(rng: random.Random, n: int, coord: int, max_pts: int = 5):
    return [
        convex_hull([tuple(rng.randint(0, coord) for _ in range(n)) for _ in range(rng.randint(1, max_pts))])
        for _ in range(n)
    ]


def cmd_crosscheck(args, timer: Timer):
    rng = random.Random(args.seed)
    trials = 20 if args.trials is None else args.trials
    n = args.dim
    coord = 5 if n <= 2 else 3
    failures, pairs = [], []
    for i in range(trials):
        polys = _random_tuple(rng, n, coord)
        config = configuration_from_polytopes(polys)
        alpha = (0,) + (1,) * n
        vals = {
            "geometric": _num(mixed_volume_ie(polys)),
            "interp": _num(mixed_volume_interp(polys)),
            "algebraic": extract_mixed_multiplicity(config, alpha, args.base).value,
            "samuel": samuel_mixed_multiplicity(config, alpha, args.seed + i, args.prime).value,
        }
        pairs.append((vals["geometric"], vals["algebraic"]))
        if len(set(vals.values())) != 1:
            failures.append({"trial": i, "tuple": io.tuple_to_json(polys), "routes": vals})
    report = {"command": "crosscheck", "seed": args.seed, "dim": n, "trials": trials,
              "agreed": trials - len(failures), "failures": failures}
    figs = _figure_dir(args)
    if figs is not None:
        report["figures"] = [str(plotting.plot_route_agreement(pairs, figs / "crosscheck.png"))]
    return report, OK if not failures else DISAGREE


COMMANDS = {
    "mv": cmd_mv,
    "mixedmult": cmd_mixedmult,
    "hilbert": cmd_hilbert,
    "samuel": cmd_samuel,
    "bernstein": cmd_bernstein,
    "probe-af": cmd_probe_af,
    "crosscheck": cmd_crosscheck,
}


# ------------------------------------------------------------ output


def render_pretty(obj, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(render_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}-")
                lines.append(render_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}- {v}")
    else:
        lines.append(f"{pad}{obj}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mixvol", description="Mixed volumes by geometric, Hilbert-function and Gröbner routes.")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--input", help="JSON input file ('-' or omitted: stdin)")
    parser.add_argument("--route", help="mv: geometric|interp|algebraic|samuel|all; mixedmult: fd|diag|both; samuel: samuel skips the fd comparison")
    parser.add_argument("--alpha", help="multi-index a0,a1,... (default: every alpha with |alpha| = r)")
    parser.add_argument("--u", action="append", help="hilbert: evaluation point u0,u1,... (repeatable)")
    parser.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--base", type=int, help="finite-difference base (default: derived from the input)")
    parser.add_argument("--exhaustive-q", help="bernstein: comma-separated primes for exhaustive counts (default 5,7)")
    parser.add_argument("--trials", type=int, help="crosscheck: random instances; bernstein: coefficient redraws")
    parser.add_argument("--dim", type=int, default=2, help="crosscheck: ambient dimension of the random tuples")
    parser.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="cap on exhaustive evaluations")
    parser.add_argument("--figures", help="directory for PNG figures")
    parser.add_argument("--pretty", action="store_true", help="human-readable output instead of JSON")
    parser.add_argument("--no-timings", action="store_true", help="omit timings so reports are byte-identical across runs")
    return parser


def _validate(args):
    if not is_prime(args.prime):
        raise io.InputError(f"--prime {args.prime} is not prime")
    if args.budget <= 0:
        raise io.InputError("--budget must be positive")
    if args.base is not None and args.base < 0:
        raise io.InputError("--base must be non-negative")
    if args.trials is not None and args.trials < 0:
        raise io.InputError("--trials must be non-negative")
    if not 1 <= args.dim <= 3:
        raise io.InputError("--dim must be 1, 2 or 3")


def _emit(report: dict, pretty: bool, stream) -> None:
    if pretty:
        stream.write(render_pretty(report) + "\n")
    else:
        stream.write(json.dumps(report, sort_keys=True) + "\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    timer = Timer()
    try:
        _validate(args)
        report, code = COMMANDS[args.command](args, timer)
    except StabilizationError as exc:
        # a user-forced base that is too small is an input problem;
        # failing to stabilise on our own schedule is not
        code = BAD_INPUT if args.base is not None else DISAGREE
        _emit({"command": args.command, "error": str(exc), "base": exc.base}, args.pretty, sys.stderr)
        return code
    except (io.InputError, ValueError) as exc:
        _emit({"command": args.command, "error": str(exc)}, args.pretty, sys.stderr)
        return BAD_INPUT
    if not args.no_timings:
        report["timings"] = timer.times
    _emit(report, args.pretty, sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
