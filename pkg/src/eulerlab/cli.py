"""Batch command line: ``eulerlab <command> [flags]``.

Reports go to stdout or ``--output``; JSON reports are sorted-key and carry
their wall time in ``runtime_ms`` only, so reruns differ in that field alone.
"""

from __future__ import annotations

import argparse
import cmath
import configparser
import csv
import io
import json
import math
import sys
import time
from dataclasses import dataclass
from typing import Callable

from . import goldbach, identities, primes, products, series
from .core import BaseSequence, SignSequence, TruncationPolicy, as_point
from .errors import ResourceLimitError

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_RESOURCE = 0, 1, 2, 3


class ConfigError(Exception):
    pass


# -- flag types ------------------------------------------------------------------

def finite_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"non-finite value: {text!r}")
    return v


def finite_complex(text: str) -> complex:
    try:
        v = complex(text.replace(" ", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}")
    if not (math.isfinite(v.real) and math.isfinite(v.imag)):
        raise argparse.ArgumentTypeError(f"non-finite value: {text!r}")
    return v


def label_arg(text: str) -> primes.SubseqLabel:
    try:
        i, j = (int(x) for x in text.strip("() ").split(","))
        return primes.SubseqLabel(i, j)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad label {text!r}: {exc}")


def float_list(text: str) -> list[float]:
    return [finite_float(x) for x in text.split(",") if x.strip()]


def int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}")


def sign_arg(text: str) -> str:
    if text in ("alt", "alt+", "alt-"):
        return text
    finite_float(text)
    return text


# -- shared builders -------------------------------------------------------------

def _s(args) -> complex:
    return as_point(complex(args.s_re, args.s_im))


def _policy(args, tail_model_default: bool = False) -> TruncationPolicy:
    tm = args.tail_model if args.tail_model is not None else tail_model_default
    return TruncationPolicy(args.max_terms, args.target_tail, tm)


def _table(limit: int) -> primes.PrimeTable:
    return primes.sieve(limit)


def _sequence(args) -> BaseSequence:
    if args.seq == "naturals":
        return BaseSequence.naturals(args.limit)
    if args.seq == "explicit":
        if not args.values:
            raise ConfigError("--seq explicit needs --values")
        return BaseSequence.explicit(args.values)
    table = _table(args.limit)
    if args.seq == "residue":
        return primes.residue_subsequence(table, args.label)
    return table.sequence()


def _signs(args) -> SignSequence:
    text = args.sign
    if text.startswith("alt"):
        sigma = -1 if text == "alt-" else 1
        if args.switch is not None:
            return SignSequence.tail_alternating(args.switch, sigma)
        return SignSequence.alternating(sigma)
    return SignSequence.constant(float(text))


def _cval(z) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


@dataclass
class Outcome:
    report: dict
    status: int = EXIT_OK
    table: tuple[list[str], list[list]] | None = None  # CSV header and rows


def _eval_outcome(rep, **extra) -> Outcome:
    body = {
        "value": _cval(rep.value),
        "terms_used": int(rep.terms_used),
        "tail_bound": float(rep.tail_bound),
        "converged": bool(rep.converged),
    }
    body.update(extra)
    return Outcome(body)


# -- commands --------------------------------------------------------------------

def cmd_primes(args) -> Outcome:
    table = _table(args.limit)
    seq = primes.residue_subsequence(table, args.label, args.count)
    details = {"count": table.count, "largest": int(table.primes[-1]) if table.count else None}
    if args.nth is not None:
        details["nth_prime"] = primes.nth_prime(table, args.nth)
    if args.mobius is not None:
        details["mobius"] = primes.mobius(args.mobius, table)
    details["subsequence_length"] = len(seq)
    rows = [[n + 1, int(p)] for n, p in enumerate(seq.elements)]
    return Outcome({"value": None, "details": details}, table=(["n", "prime"], rows))


def cmd_eval_dirichlet(args) -> Outcome:
    A, l, s, policy = _sequence(args), _signs(args), _s(args), _policy(args)
    if args.accelerate:
        return _eval_outcome(series.alternating_eval(A, l, s, policy))
    return _eval_outcome(series.dirichlet_eval(A, l, s, policy))


def cmd_eval_product(args) -> Outcome:
    A, l, s, policy = _sequence(args), _signs(args), _s(args), _policy(args)
    if args.factor is not None:
        g = products.GeneralFactor.parse(args.factor)
        params = products.derive_convergence_params(g, regularized=args.regularized)
        rep = products.general_product_eval(A, g, s, policy, regularized=args.regularized, l=l)
        return _eval_outcome(rep, details={"C": params.C, "delta": params.delta, "lambda": params.lambda_})
    if args.continued:
        return _eval_outcome(products.continued_product_eval(A, l, s, policy))
    return _eval_outcome(products.euler_product_eval(A, l, s, policy))


def cmd_prime_zeta(args) -> Outcome:
    s, policy = _s(args), _policy(args)
    if args.method == "mobius":
        return _eval_outcome(series.prime_zeta_mobius(s, args.n_max))
    if args.method == "zeta":
        return Outcome({"value": _cval(series.zeta_ref(s))})
    if args.method == "gamma":
        return Outcome({"value": _cval(series.gamma_ref(s))})
    table = _table(args.limit)
    if args.method == "deformed":
        return _eval_outcome(series.z_deformed_prime_zeta(table, args.z, s, policy))
    return _eval_outcome(series.prime_zeta_direct(table, s, policy))


# identity catalog ---------------------------------------------------------------

def _id_euler_vs_zeta(args, tol):
    s, table = _s(args), _table(args.limit or 10**6)
    v = products.euler_product_eval(table.sequence(), SignSequence.constant(1.0), s, _policy(args, True)).value
    z = series.zeta_ref(s)
    return identities.IdentityReport("euler-vs-zeta", {"s": s, "limit": table.limit}, v, z, abs(v - z), tol)


def _id_plus_quotient(args, tol):
    s, table = _s(args), _table(args.limit or 10**6)
    v = products.euler_product_eval(table.sequence(), SignSequence.constant(-1.0), s, _policy(args, True)).value
    lhs, rhs = v * series.zeta_ref(s), series.zeta_ref(2 * s)
    return identities.IdentityReport("plus-product-quotient", {"s": s, "limit": table.limit}, lhs, rhs, abs(lhs - rhs), tol)


def _id_exp_factorization(args, tol):
    s, table = _s(args), _table(args.limit or 10**6)
    policy = _policy(args, True)
    lhs, rhs = products.exp_identity_sides(table, s, policy)
    residual = products.regularized_exp_identity_residual(table, s, policy)
    return identities.IdentityReport("exp-factorization", {"s": s, "limit": table.limit}, lhs, rhs, residual, tol)


def _id_mobius_pair(args, tol):
    """Forward P(s) by inversion vs direct summation, plus log zeta(s) = sum_n P(ns)/n."""
    s, table = _s(args), _table(args.limit or 10**6)
    policy = _policy(args, True)
    lhs = series.prime_zeta_mobius(s, args.n_max).value
    rhs = series.prime_zeta_direct(table, s, policy).value
    inverse = sum(series.prime_zeta_direct(table, n * s, policy).value / n for n in range(1, 41))
    inv_res = abs(inverse - cmath.log(series.zeta_ref(s)))
    residual = max(abs(lhs - rhs), inv_res)
    inputs = {"s": s, "limit": table.limit, "inverse_residual": inv_res}
    return identities.IdentityReport("mobius-inversion-pair", inputs, lhs, rhs, residual, tol)


def _id_split(args, tol):
    s, table = _s(args), _table(args.limit or 10**6)
    policy = _policy(args)
    lhs, rhs = identities.split_factorization_sides(table, args.label, s, policy)
    residual = identities.split_factorization_residual(table, args.label, s, policy)
    return identities.IdentityReport("split-factorization", {"s": s, "label": args.label}, lhs, rhs, residual, tol)


def _id_truncation(args, tol):
    s, table = _s(args), _table(args.limit or 10**6)
    measured, bound = products.truncation_discrepancy_check(table, args.switch or 10, s, _policy(args, True))
    return identities.IdentityReport(
        "truncation-bound", {"s": s, "N": args.switch or 10}, measured, bound, max(0.0, measured - bound), tol
    )


def _id_assoc(args, tol):
    a, b, c = args.a, args.b, args.c
    defect, closed = identities.assoc_defect(a, b, c)
    scale = max(abs(a * c / b), abs(a / (b * c)), 1e-300)
    return identities.IdentityReport("assoc-defect", {"a": a, "b": b, "c": c}, defect, closed, abs(defect - closed) / scale, tol)


def _id_jacobi(args, tol):
    a, b, c = args.a, args.b, args.c
    lhs, derived, printed = identities.jacobi_defect(a, b, c)
    residual = abs(lhs - derived) / identities.jacobi_scale(a, b, c)
    return identities.IdentityReport(
        "jacobi-defect", {"a": a, "b": b, "c": c, "printed_form": printed}, lhs, derived, residual, tol
    )


def _id_mellin(args, tol):
    s, table = _s(args), _table(args.limit or 10**4)
    rep = goldbach.mellin_report(table, args.label, args.k, s, goldbach.QuadSpec(args.panels, args.order))
    return identities.IdentityReport(
        "mellin", {"s": s, "k": args.k, "label": args.label, "limit": table.limit},
        rep.series_side, rep.integral_side, rep.residual, tol,
    )


IDENTITY_CATALOG: dict[str, tuple[float, Callable]] = {
    "euler-vs-zeta": (1e-6, _id_euler_vs_zeta),
    "plus-product-quotient": (1e-8, _id_plus_quotient),
    "exp-factorization": (1e-8, _id_exp_factorization),
    "mobius-inversion-pair": (1e-10, _id_mobius_pair),
    "split-factorization": (1e-9, _id_split),
    "truncation-bound": (0.0, _id_truncation),
    "assoc-defect": (1e-13, _id_assoc),
    "jacobi-defect": (1e-13, _id_jacobi),
    "mellin": (1e-6, _id_mellin),
}


def list_identities() -> dict[str, float]:
    """Name -> default tolerance for every identity check."""
    return {name: tol for name, (tol, _) in IDENTITY_CATALOG.items()}


def cmd_identity(args) -> Outcome:
    if args.list:
        cat = list_identities()
        rows = [[k, repr(v)] for k, v in cat.items()]
        return Outcome({"value": None, "catalog": cat}, table=(["identity", "tolerance"], rows))
    if args.name is None:
        raise ConfigError("identity needs --name or --list")
    default_tol, fn = IDENTITY_CATALOG[args.name]
    tol = args.tol if args.tol is not None else default_tol
    rep = fn(args, tol)
    body = rep.to_dict()
    out = {
        "value": body["lhs"],
        "residual": body["residual"],
        "pass": body["pass"],
        "identity_report": body,
    }
    return Outcome(out, EXIT_OK if rep.passed else EXIT_FAIL)


def cmd_split(args) -> Outcome:
    s, policy = _s(args), _policy(args)
    table = _table(args.limit)
    tree = identities.SplitTree(args.depth)
    cutoff = table.count
    leaves = tree.leaf_indices(cutoff)
    union = set().union(*leaves.values())
    disjoint = sum(len(v) for v in leaves.values()) == len(union)
    missing = set(range(1, cutoff + 1)) - union
    partition_ok = disjoint and len(missing) <= 2**args.depth and union <= set(range(1, cutoff + 1))
    residual = identities.split_factorization_residual(table, args.label, s, policy, args.accelerated)
    quotient = identities.even_odd_quotient(table, args.label, s, policy)
    kids = identities.split_children(args.label)
    return Outcome(
        {
            "value": _cval(quotient),
            "residual": residual,
            "details": {
                "children": [str(k) for k in kids],
                "depth": args.depth,
                "leaves": [str(x) for x in tree.leaves()],
                "partition_ok": partition_ok,
            },
        }
    )


def cmd_algebra(args) -> Outcome:
    a, b, c = args.a, args.b, args.c
    op = args.op
    if op == "div":
        return Outcome({"value": _cval(identities.leibniz_div(a, b))})
    if op == "bracket":
        return Outcome({"value": _cval(identities.skew_bracket(a, b, args.bracket_sign))})
    if op == "assoc":
        defect, closed = identities.assoc_defect(a, b, c)
        return Outcome({"value": _cval(defect), "details": {"closed_form": _cval(closed)}})
    if op == "jacobi":
        lhs, derived, printed = identities.jacobi_defect(a, b, c)
        return Outcome(
            {"value": _cval(lhs), "details": {"derived_form": _cval(derived), "printed_form": _cval(printed)}}
        )
    if op == "catalan":
        return Outcome({"value": None, "details": {"n": args.n, "catalan": identities.catalan(args.n)}})
    # interlace
    table = _table(args.limit)
    A = primes.residue_subsequence(table, args.label)
    B = primes.residue_subsequence(table, args.label_b)
    res = identities.interlace_check(A, B)
    return Outcome(
        {
            "value": None,
            "details": {
                "interlaced": res.interlaced,
                "offset": res.offset,
                "checked": res.checked,
                "sufficient": res.sufficient,
            },
        }
    )


def cmd_goldbach(args) -> Outcome:
    N = args.n_max
    table = _table(max(N, 2))
    if args.scan:
        bad = goldbach.goldbach_scan(table, N)
        return Outcome({"value": None, "details": {"violations": bad}}, EXIT_OK if not bad else EXIT_FAIL)
    g = goldbach.gk_series(table, args.label, args.k, N)
    if args.probe:
        rows = goldbach.majorization_probe(g, args.m, args.x_grid)
        details = [{"x": r.x, "alpha": r.alpha, "threshold": r.threshold, "exceeds": r.exceeds} for r in rows]
        return Outcome(
            {"value": None, "details": {"probe": details}},
            table=(["x", "alpha", "threshold", "exceeds"], [[r.x, r.alpha, r.threshold, r.exceeds] for r in rows]),
        )
    rep = goldbach.power_counts(g, args.m)
    rows = [[n, int(c)] for n, c in enumerate(rep.counts)]
    body = {"value": None, "details": {"first_nonzero": rep.first_nonzero(), "total": int(rep.counts.sum())}}
    status = EXIT_OK
    if args.oracle:
        brute = goldbach.brute_force_counts(table, args.label, args.k, args.m, N)
        match = rep.equals(brute)
        body["pass"] = match
        status = EXIT_OK if match else EXIT_FAIL
    return Outcome(body, status, table=(["n", "count"], rows))


def cmd_mellin(args) -> Outcome:
    table = _table(args.limit)
    rep = goldbach.mellin_report(table, args.label, args.k, _s(args), goldbach.QuadSpec(args.panels, args.order))
    residual = goldbach.mellin_residual(table, args.label, args.k, _s(args), goldbach.QuadSpec(args.panels, args.order))
    return Outcome(
        {
            "value": _cval(rep.series_side),
            "residual": residual,
            "details": {"integral_side": _cval(rep.integral_side), "panels": rep.panels, "converged": rep.converged},
        }
    )


def cmd_scan(args) -> Outcome:
    A = _sequence(args)
    g = products.GeneralFactor.parse(args.factor)
    rows = products.convergence_scan(A, g, args.sigma_grid, args.ladder, args.rate_threshold)
    verdicts = products.scan_verdicts(rows)
    table = [[r.sigma, r.terms, r.abs_delta, r.rate, r.flag] for r in rows]
    return Outcome(
        {"value": None, "details": {"verdicts": {repr(k): v for k, v in verdicts.items()}}},
        table=(list(products.SCAN_HEADER), table),
    )


COMMANDS: dict[str, Callable] = {
    "primes": cmd_primes,
    "eval-dirichlet": cmd_eval_dirichlet,
    "eval-product": cmd_eval_product,
    "prime-zeta": cmd_prime_zeta,
    "identity": cmd_identity,
    "split": cmd_split,
    "algebra": cmd_algebra,
    "goldbach": cmd_goldbach,
    "mellin": cmd_mellin,
    "scan": cmd_scan,
}


# -- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--s-re", type=finite_float, default=2.0)
    common.add_argument("--s-im", type=finite_float, default=0.0)
    common.add_argument("--max-terms", type=int, default=10**6)
    common.add_argument("--target-tail", type=finite_float, default=1e-10)
    common.add_argument("--tail-model", action=argparse.BooleanOptionalAction, default=None,
                        help="prime-counting estimate of the omitted tail (default on for identity checks)")
    common.add_argument("--limit", type=int, default=None, help="sieve limit / sequence length")
    common.add_argument("--label", type=label_arg, default=primes.SubseqLabel(0, 0), help="subsequence label i,j")
    common.add_argument("--config", help="key=value file overriding defaults")
    common.add_argument("--output", help="report path (default stdout)")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    seq = argparse.ArgumentParser(add_help=False)
    seq.add_argument("--seq", choices=("primes", "naturals", "residue", "explicit"), default="primes")
    seq.add_argument("--values", type=int_list, default=None)
    seq.add_argument("--sign", type=sign_arg, default="1", help="constant c, alt, alt+ or alt-")
    seq.add_argument("--switch", type=int, default=None, help="index N where alternation starts")

    triple = argparse.ArgumentParser(add_help=False)
    triple.add_argument("--a", type=finite_complex, default=2 + 0j)
    triple.add_argument("--b", type=finite_complex, default=1 + 0j)
    triple.add_argument("--c", type=finite_complex, default=3 + 0j)

    quad = argparse.ArgumentParser(add_help=False)
    quad.add_argument("--k", type=int, default=1)
    quad.add_argument("--panels", type=finite_float, default=4.0)
    quad.add_argument("--order", type=int, default=16)

    p = argparse.ArgumentParser(prog="eulerlab", description="Euler products, prime zeta and Goldbach-Waring counts")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("primes", parents=[common])
    sp.add_argument("--nth", type=int)
    sp.add_argument("--count", type=int)
    sp.add_argument("--mobius", type=int)

    sp = sub.add_parser("eval-dirichlet", parents=[common, seq])
    sp.add_argument("--accelerate", action="store_true")

    sp = sub.add_parser("eval-product", parents=[common, seq])
    sp.add_argument("--factor", help="coefficients g_0,g_1,... of a general factor g")
    sp.add_argument("--regularized", action="store_true")
    sp.add_argument("--continued", action="store_true")

    sp = sub.add_parser("prime-zeta", parents=[common])
    sp.add_argument("--method", choices=("direct", "mobius", "deformed", "zeta", "gamma"), default="direct")
    sp.add_argument("--n-max", type=int, default=64)
    sp.add_argument("--z", type=finite_complex, default=1 + 0j)

    sp = sub.add_parser("identity", parents=[common, triple, quad])
    sp.add_argument("--name", choices=sorted(IDENTITY_CATALOG))
    sp.add_argument("--list", action="store_true")
    sp.add_argument("--tol", type=finite_float)
    sp.add_argument("--n-max", type=int, default=64)
    sp.add_argument("--switch", type=int, default=None)

    sp = sub.add_parser("split", parents=[common])
    sp.add_argument("--depth", type=int, default=2)
    sp.add_argument("--accelerated", action="store_true")

    sp = sub.add_parser("algebra", parents=[common, triple])
    sp.add_argument("--op", choices=("div", "assoc", "bracket", "jacobi", "catalan", "interlace"), required=True)
    sp.add_argument("--bracket-sign", choices=("+", "-"), default="-")
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--label-b", type=label_arg, default=primes.SubseqLabel(1, 1))

    sp = sub.add_parser("goldbach", parents=[common])
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--m", type=int, default=2)
    sp.add_argument("--n-max", type=int, default=2000)
    sp.add_argument("--oracle", action="store_true")
    sp.add_argument("--scan", action="store_true")
    sp.add_argument("--probe", action="store_true")
    sp.add_argument("--x-grid", type=float_list, default=[0.9, 0.99])

    sub.add_parser("mellin", parents=[common, quad])

    sp = sub.add_parser("scan", parents=[common, seq])
    sp.add_argument("--factor", default="0,1")
    sp.add_argument("--sigma-grid", type=float_list, default=[0.45, 0.75, 1.5])
    sp.add_argument("--ladder", type=int_list, default=[1000, 2000, 4000, 8000, 16000, 32000])
    sp.add_argument("--rate-threshold", type=finite_float, default=0.1)
    return p


LIMIT_DEFAULTS = {"mellin": 10**4, "goldbach": None, "identity": None}


def _subparser(parser: argparse.ArgumentParser, name: str) -> argparse.ArgumentParser:
    for action in parser._subparsers._group_actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[name]
    raise KeyError(name)


def read_config(path: str) -> dict[str, str]:
    cp = configparser.ConfigParser(interpolation=None)
    with open(path) as fh:
        cp.read_string("[run]\n" + fh.read())
    return {k.replace("-", "_"): v for k, v in cp["run"].items()}


def _apply_config(parser: argparse.ArgumentParser, command: str, cfg: dict[str, str]) -> None:
    sp = _subparser(parser, command)
    actions = {a.dest: a for a in sp._actions}
    defaults = {}
    for key, raw in cfg.items():
        action = actions.get(key)
        if action is None or key in ("config", "help"):
            raise ConfigError(f"unknown config key {key!r} for {command}")
        if action.nargs == 0 or isinstance(action, argparse.BooleanOptionalAction):
            val = raw.strip().lower()
            if val not in ("1", "0", "true", "false", "yes", "no", "on", "off"):
                raise ConfigError(f"{key}: expected a boolean, got {raw!r}")
            defaults[key] = val in ("1", "true", "yes", "on")
            continue
        try:
            value = action.type(raw) if action.type else raw
        except (argparse.ArgumentTypeError, ValueError) as exc:
            raise ConfigError(f"{key}: {exc}")
        if action.choices is not None and value not in action.choices:
            raise ConfigError(f"{key}: {value!r} not in {sorted(action.choices)}")
        defaults[key] = value
    sp.set_defaults(**defaults)


def parse(argv: list[str] | None = None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        try:
            cfg = read_config(args.config)
        except (OSError, configparser.Error) as exc:
            raise ConfigError(f"cannot read config: {exc}")
        _apply_config(parser, args.command, cfg)
        args = parser.parse_args(argv)
    if args.limit is None:
        args.limit = LIMIT_DEFAULTS.get(args.command, 10**6)
    if args.max_terms < 0 or (args.limit is not None and args.limit < 0):
        raise ConfigError("--max-terms and --limit must be non-negative")
    return args


# -- output ----------------------------------------------------------------------

def _params(args) -> dict:
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in ("output", "config"):
            continue
        if isinstance(v, complex):
            v = _cval(v)
        elif isinstance(v, primes.SubseqLabel):
            v = str(v)
        out[k] = v
    return out


def render(args, outcome: Outcome, runtime_ms: float) -> str:
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if outcome.table is not None:
            header, rows = outcome.table
            w.writerow(header)
            for r in rows:
                w.writerow([repr(x) if isinstance(x, float) else x for x in r])
        else:
            w.writerow(["key", "value"])
            flat = dict(outcome.report)
            v = flat.pop("value", None)
            if v is not None:
                w.writerow(["value_re", repr(v["re"])])
                w.writerow(["value_im", repr(v["im"])])
            for k in ("terms_used", "tail_bound", "residual", "pass"):
                if k in flat:
                    w.writerow([k, flat[k]])
        return buf.getvalue()
    report = {"command": args.command, "params": _params(args)}
    report.update({"value": None, "terms_used": None, "tail_bound": None})
    report.update(outcome.report)
    report["runtime_ms"] = round(runtime_ms, 3)
    return json.dumps(report, sort_keys=True, default=str) + "\n"


def run(argv: list[str] | None = None) -> int:
    try:
        args = parse(argv)
    except SystemExit as exc:  # argparse reports usage errors with status 2
        return int(exc.code or 0)
    except ConfigError as exc:
        print(f"eulerlab: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    start = time.perf_counter()
    try:
        outcome = COMMANDS[args.command](args)
    except ResourceLimitError as exc:
        print(f"eulerlab: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ConfigError, ValueError, IndexError, ZeroDivisionError, OverflowError, ArithmeticError) as exc:
        print(f"eulerlab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    text = render(args, outcome, 1000.0 * (time.perf_counter() - start))
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return outcome.status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
