"""
Command-line front end.

    python -m lambertkit <verb> [flags]

Exit status: 0 when the output was produced and every check held, 1 when a
verification failed (or a matrix turned out singular), 2 on usage errors.

Functions are given by registry name (`mu`, `sigma_1`, ...) or as `@file.json`
holding a JSON array [a_1, a_2, ...]: element 0 of the array is a_1.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable

from lambertkit import render
from lambertkit.arith import ArithFn, classical, dirichlet_convolve, dirichlet_inverse, registry, summatory
from lambertkit.config import get_scan_bound
from lambertkit.convolution import (
    application_identity_suite,
    b_recurrence_check,
    dirichlet_inverse_via_fact,
    ds_table,
    inverse_tilde_snk,
    phi_unit_expansion_at_four,
    convolution_factorization_check,
    rho_table,
    solve_convolution,
    tilde_snk,
)
from lambertkit.factorization import (
    FactorizationPair,
    IdentityResult,
    LambertParams,
    bar_a_closed,
    bar_a_sequence,
    c_series,
    c_series_names,
    compare_routes,
    example_identity_suite,
    factorization_check,
    shift_relation_check,
    snk_matrix,
)
from lambertkit.golden import TARGETS, compare, emit
from lambertkit.kernel import Ring, RingElement, SingularReport, coerce, encode, join, recurrence_check, tri_invert
from lambertkit.qseries import pochhammer
from lambertkit.utils import cached_json, configure_logging
from lambertkit.variants import (
    ConjectureReport,
    conjecture_degenerate,
    cross_alpha_report,
    pm_transform,
    pm_transform_check,
    recover_A,
    recover_a,
    s1_inverse,
    s1_matrix,
    s2_inverse,
    s2_matrix,
    tilde_a_conjecture_check,
    weighted_variant_check,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


# ───────────────────────────────────────── argument types ──
def _bound(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"bound must be >= 1, got {value}")
    return value


def _params(text: str) -> LambertParams:
    try:
        return LambertParams.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _ring(text: str) -> Ring:
    try:
        return Ring(text.upper())
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"unknown ring {text!r}; use one of {', '.join(r.value.lower() for r in Ring)}"
        ) from None


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _function(spec: str, ring: Ring | None = None) -> ArithFn:
    fn = ArithFn.from_json(spec[1:]) if spec.startswith("@") else classical(spec)
    if ring is None or ring is fn.ring:
        return fn
    target = join(fn.ring, ring)
    return ArithFn(fn.name, lambda n: coerce(fn(n), target), target)


# ───────────────────────────────────────── output ──
def _encoded(values: list[RingElement]) -> list:
    return [encode(x) for x in values]


def _emit(
    args: argparse.Namespace,
    *,
    payload: Any = None,
    rows: list[list[Any]] | None = None,
    text: str | None = None,
) -> None:
    if args.format == "json" and payload is not None:
        out = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    elif args.format == "csv" and rows is not None:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows([[str(x) for x in row] for row in rows])
        out = buf.getvalue()
    elif args.format == "md" and text is not None:
        out = text
    else:
        raise ValueError(f"{args.command} has no {args.format} output")

    if args.out:
        path = Path(args.out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(out)
        logger.info("wrote %s", path)
    else:
        sys.stdout.write(out)


def _summary_rows(payload: dict) -> list[list[Any]]:
    keys = [k for k in sorted(payload) if not isinstance(payload[k], (list, dict))]
    return [keys, [payload[k] for k in keys]]


def _identity_rows(results: list[IdentityResult]) -> list[list[Any]]:
    return [["name", "holds", "first_failure"]] + [
        [r.name, r.holds, "" if r.first_failure is None else r.first_failure] for r in results
    ]


def _status(ok: bool) -> int:
    return EXIT_OK if ok else EXIT_FAILED


# ───────────────────────────────────────── factorization verbs ──
def _pair(args: argparse.Namespace, N: int) -> FactorizationPair:
    return FactorizationPair(c_series(args.C, N), args.params, args.d_param)


def cmd_matrix(args: argparse.Namespace) -> int:
    N = get_scan_bound("matrix", args.N)
    s = snk_matrix(_pair(args, N), N)
    _emit(args, payload=s.to_json(), rows=s.to_csv_rows())
    return EXIT_OK


def cmd_invert(args: argparse.Namespace) -> int:
    N = get_scan_bound("invert", args.N)
    s = snk_matrix(_pair(args, N), N)
    inv = tri_invert(s)
    if isinstance(inv, SingularReport):
        _emit(args, payload=inv.to_json(), rows=[["singular", "row", "reason"], [True, inv.row, inv.reason]])
        return EXIT_FAILED
    ok = recurrence_check(s, inv)
    _emit(args, payload={"inverse": inv.to_json(), "recurrences_hold": ok}, rows=inv.to_csv_rows())
    return _status(ok)


def cmd_verify_factorization(args: argparse.Namespace) -> int:
    N = get_scan_bound("verify-factorization", args.N)
    if args.shift is not None:
        if len(args.shift) != 3:
            raise ValueError(f"--shift needs alpha,beta,delta, got {args.shift}")
        alpha, beta, delta = args.shift
        ok = shift_relation_check(alpha, beta, delta, N, c_series(args.C, N + max(0, -delta)))
        payload = {"check": "shift", "alpha": alpha, "beta": beta, "delta": delta, "C": args.C, "N": N}
    else:
        a = _function(args.a, args.ring)
        ok = factorization_check(a, _pair(args, N), N)
        payload = {
            "check": "factorization",
            "a": a.name,
            "params": str(args.params),
            "C": args.C,
            "d_param": args.d_param,
            "N": N,
        }
    payload["verified"] = ok
    _emit(args, payload=payload, rows=_summary_rows(payload))
    return _status(ok)


def cmd_bar_a(args: argparse.Namespace) -> int:
    N = get_scan_bound("bar-a", args.N)
    a, gamma = _function(args.a, args.ring), _function(args.gamma, args.ring)
    closed = [bar_a_closed(a, gamma, args.alpha, args.beta, n) for n in range(1, N + 1)]
    via_matrix = bar_a_sequence(a, gamma, args.alpha, args.beta, pochhammer(1, 1, N), N)
    result = compare_routes(f"bar_a({a.name}, {gamma.name})", [closed, via_matrix])
    payload = {
        "a": a.name,
        "gamma": gamma.name,
        "alpha": args.alpha,
        "beta": args.beta,
        "N": N,
        "values": _encoded(closed),
        "routes_agree": result.holds,
        "first_failure": result.first_failure,
    }
    rows = [["n", "closed", "matrix"]] + [[n, x, y] for n, (x, y) in enumerate(zip(closed, via_matrix), start=1)]
    _emit(args, payload=payload, rows=rows)
    return _status(result.holds)


# ───────────────────────────────────────── convolution verbs ──
def cmd_ds_table(args: argparse.Namespace) -> int:
    N = get_scan_bound("ds-table", args.N)
    g = _function(args.g, args.ring)
    table = ds_table(g, args.J, N, unsigned=not args.signed)
    payload = {"g": g.name, "unsigned": not args.signed, "J": args.J, "N": N, "rows": [_encoded(r) for r in table]}
    _emit(args, payload=payload, rows=table)
    return EXIT_OK


def cmd_rho_table(args: argparse.Namespace) -> int:
    N = get_scan_bound("rho-table", args.N)
    g = _function(args.g, args.ring)
    table = rho_table(args.k, g, N, args.cols)
    payload = {"g": g.name, "k": args.k, "rows": N, "cols": args.cols, "table": [_encoded(r) for r in table]}
    _emit(args, payload=payload, rows=table)
    return EXIT_OK


def cmd_dirichlet_inverse(args: argparse.Namespace) -> int:
    N = get_scan_bound("dirichlet-inverse", args.N)
    f = _function(args.f, args.ring)
    via_fact = dirichlet_inverse_via_fact(f, N).values(N)
    direct = dirichlet_inverse(f).values(N)
    result = compare_routes(f"inverse of {f.name}", [via_fact, direct])
    payload = {"f": f.name, "N": N, "values": _encoded(via_fact), "verified": result.holds}
    rows = [["n", "via_factorization", "recursive"]] + [
        [n, x, y] for n, (x, y) in enumerate(zip(via_fact, direct), start=1)
    ]
    _emit(args, payload=payload, rows=rows)
    return _status(result.holds)


def cmd_solve_convolution(args: argparse.Namespace) -> int:
    N = get_scan_bound("solve-convolution", args.N)
    f, h = _function(args.f, args.ring), _function(args.h, args.ring)
    g = solve_convolution(f, h, N)
    left = dirichlet_convolve(f, g).values(N)
    right = dirichlet_convolve(h, classical("mu")).values(N)
    result = compare_routes(f"{f.name} * g = {h.name} * mu", [left, right])
    values = g.values(N)
    payload = {"f": f.name, "h": h.name, "N": N, "g": _encoded(values), "verified": result.holds}
    _emit(args, payload=payload, rows=[["n", "g"]] + [[n, x] for n, x in enumerate(values, start=1)])
    return _status(result.holds)


# ───────────────────────────────────────── variants verbs ──
def _cache_key(**fields: Any) -> str:
    for name in ("a", "gamma"):
        spec = fields.get(name)
        if isinstance(spec, str) and spec.startswith("@"):
            fields[name] = spec + "\n" + Path(spec[1:]).read_text()
    return json.dumps(fields, sort_keys=True)


def cmd_conjecture(args: argparse.Namespace) -> int:
    use_cache = False if args.no_cache else None
    if args.mode == "cross-alpha":
        key = _cache_key(mode="cross-alpha", alphas=list(args.alphas))
        payload = cached_json("conjecture", key, lambda: cross_alpha_report(args.alphas), use_cache=use_cache)
        rows = [["alpha", "row", "vector"]] + [
            [alpha, entry["row"], json.dumps(entry["vector"])] for alpha, entry in sorted(payload["rows"].items())
        ]
        _emit(args, payload=payload, rows=rows)
        return _status(payload["agree"])

    N = get_scan_bound("conjecture", args.N)
    builder: Callable[[], dict]
    if args.mode == "degenerate":
        key = _cache_key(mode="degenerate", alpha=args.alpha, d_param=args.d_param, N=N)
        builder = lambda: conjecture_degenerate(args.alpha, args.d_param, N).to_json()  # noqa: E731
    else:
        key = _cache_key(mode="tilde-a", a=args.a, gamma=args.gamma, ring=str(args.ring), N=N)
        a, gamma = _function(args.a, args.ring), _function(args.gamma, args.ring)
        builder = lambda: tilde_a_conjecture_check(a, gamma, N).to_json()  # noqa: E731

    payload = cached_json("conjecture", key, builder, use_cache=use_cache)
    report = ConjectureReport.from_json(payload)
    rows = [["n", "k", "residual"]] + [[n, k, v] for (n, k), v in sorted(report.residuals.items())]
    text = render.conjecture_report(report) if args.format == "md" else None
    _emit(args, payload=payload, rows=rows, text=text)
    if report.singular is not None:
        return EXIT_FAILED
    if args.mode == "tilde-a":
        return _status(not report.residuals)
    return EXIT_OK


def cmd_recover(args: argparse.Namespace) -> int:
    N = get_scan_bound("recover", args.N)
    a = _function(args.a, args.ring)
    checks = {
        "s1_inverse": (s1_matrix(N) @ s1_inverse(N)).is_identity(),
        "s2_inverse": (s2_matrix(N) @ s2_inverse(N)).is_identity(),
        "recover_a": recover_a(a, N) == a.values(N),
        "recover_A": recover_A(a, N) == [summatory(a, n) for n in range(1, N + 1)],
    }
    for name in args.weights:
        checks[f"weighted[{name}]"] = weighted_variant_check(_function(name), N, a)
    ok = all(checks.values())
    payload = {"a": a.name, "N": N, "checks": checks, "verified": ok}
    _emit(args, payload=payload, rows=[["check", "holds"]] + [[k, v] for k, v in checks.items()])
    return _status(ok)


def cmd_pm_transform(args: argparse.Namespace) -> int:
    N = get_scan_bound("pm-transform", args.N)
    a = _function(args.a, args.ring)
    ok = pm_transform_check(a, N)
    values = pm_transform(a).values(N)
    payload = {"a": a.name, "N": N, "b": _encoded(values), "verified": ok}
    _emit(args, payload=payload, rows=[["n", "b"]] + [[n, x] for n, x in enumerate(values, start=1)])
    return _status(ok)


# ───────────────────────────────────────── tables, suites, listings ──
def cmd_golden(args: argparse.Namespace) -> int:
    if args.format == "csv":
        out_dir = Path(args.out or ".")
        paths = emit(args.target, out_dir)
        for path in paths:
            print(path)
        return EXIT_OK
    results = compare(args.target)
    ok = all(r.matches for r in results)
    text = render.golden_summary(results) if args.format == "md" else None
    _emit(args, payload={"results": [r.to_json() for r in results], "matches": ok}, text=text)
    return _status(ok)


def _convolution_suite(f: ArithFn, g: ArithFn, N: int) -> list[IdentityResult]:
    inverse_ok = (inverse_tilde_snk(g, N) @ tilde_snk(g, N)).is_identity()
    return [
        IdentityResult(f"closed-form inverse for {g.name}", inverse_ok, None),
        IdentityResult(f"convolution factorization ({f.name}, {g.name})", convolution_factorization_check(f, g, N), None),
        IdentityResult(f"b recurrence for {f.name}", b_recurrence_check(f, N), None),
    ]


def cmd_verify_identities(args: argparse.Namespace) -> int:
    N = get_scan_bound("verify-identities", args.N)
    suites = ("examples", "applications", "convolution") if args.suite == "all" else (args.suite,)
    results: list[IdentityResult] = []
    for suite in suites:
        if suite == "examples":
            results += example_identity_suite(N)
        elif suite == "applications":
            results += application_identity_suite(N)
            results.append(IdentityResult("phi expansion of 1 at n=4", phi_unit_expansion_at_four() == 1, None))
        else:
            results += _convolution_suite(_function(args.f, args.ring), _function(args.g, args.ring), N)
    ok = all(r.holds for r in results)
    _emit(args, payload={"N": N, "results": [r.to_json() for r in results], "verified": ok},
          rows=_identity_rows(results))
    return _status(ok)


def cmd_series(args: argparse.Namespace) -> int:
    N = get_scan_bound("series", args.N)
    series = c_series(args.C, N)
    payload = {"C": args.C, **series.to_json()}
    _emit(args, payload=payload, rows=[["n", "coeff"]] + [[n, c] for n, c in enumerate(series.coeffs)])
    return EXIT_OK


def cmd_functions(args: argparse.Namespace) -> int:
    payload = {"functions": registry(), "C": c_series_names()}
    rows = [["kind", "name"]] + [["function", x] for x in payload["functions"]] + [["C", x] for x in payload["C"]]
    _emit(args, payload=payload, rows=rows)
    return EXIT_OK


# ───────────────────────────────────────── parser ──
def _add_common(p: argparse.ArgumentParser, formats: tuple[str, ...] = ("json", "csv"), bound: bool = True) -> None:
    if bound:
        p.add_argument("--N", dest="N", type=_bound, default=None, help="truncation / scan bound (>= 1)")
    p.add_argument("--format", choices=formats, default=formats[0], help="output format")
    p.add_argument("--out", default=None, help="write to this path instead of stdout")
    p.add_argument("--ring", type=_ring, default=None, help="coerce input functions into this ring")


def _add_pair(p: argparse.ArgumentParser) -> None:
    p.add_argument("--params", type=_params, default=LambertParams.ordinary(), help="exponents a,b,c,d")
    p.add_argument("--C", default="euler", choices=c_series_names(), help="the series C(q)")
    p.add_argument("--d-param", action="store_true", help="weight the denominators by d (entries in Z[d])")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lambertkit",
        description="Exact factorization matrices for generalized Lambert series.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="verb")

    def verb(name: str, handler: Callable[[argparse.Namespace], int], help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        p.set_defaults(handler=handler)
        return p

    p = verb("matrix", cmd_matrix, "print s_{n,k} for a factorization pair")
    _add_common(p)
    _add_pair(p)

    p = verb("invert", cmd_invert, "invert s_{n,k} and check both recurrences")
    _add_common(p)
    _add_pair(p)

    p = verb("verify-factorization", cmd_verify_factorization, "check C(q)*L(q) against the matrix product")
    _add_common(p)
    _add_pair(p)
    p.add_argument("--a", default="mu", help="function name or @file.json")
    p.add_argument("--shift", type=_int_list, default=None, help="alpha,beta,delta: check the index-shift relation")

    p = verb("bar-a", cmd_bar_a, "the gamma-defined inverse read two ways")
    _add_common(p)
    p.add_argument("--a", default="one")
    p.add_argument("--gamma", default="id_1")
    p.add_argument("--alpha", type=_bound, default=2)
    p.add_argument("--beta", type=int, default=1)

    p = verb("ds-table", cmd_ds_table, "j-fold self-convolutions, rows n and columns j")
    _add_common(p)
    p.add_argument("--g", default="one")
    p.add_argument("--J", dest="J", type=_bound, default=21)
    p.add_argument("--signed", action="store_true", help="use the literal seed instead of the magnitude table")

    p = verb("rho-table", cmd_rho_table, "rho^{(i)}_{n,k}, rows n and columns i")
    _add_common(p)
    p.add_argument("--g", default="eps")
    p.add_argument("--k", type=_bound, default=1)
    p.add_argument("--cols", type=_bound, default=10)

    p = verb("dirichlet-inverse", cmd_dirichlet_inverse, "Dirichlet inverse through the convolution factorization")
    _add_common(p)
    p.add_argument("--f", default="one")

    p = verb("solve-convolution", cmd_solve_convolution, "solve f * g = h * mu for g")
    _add_common(p)
    p.add_argument("--f", default="one")
    p.add_argument("--h", default="sigma_1")

    p = verb("conjecture", cmd_conjecture, "residual reports for the conjectured closed forms")
    _add_common(p, formats=("json", "csv", "md"))
    p.add_argument("--mode", choices=("degenerate", "cross-alpha", "tilde-a"), default="degenerate")
    p.add_argument("--alpha", type=_bound, default=2)
    p.add_argument("--alphas", type=_int_list, default=(3, 4, 5))
    p.add_argument("--d-param", action="store_true")
    p.add_argument("--a", default="one")
    p.add_argument("--gamma", default="phi")
    p.add_argument("--no-cache", action="store_true", help="recompute even when a cached report exists")

    p = verb("recover", cmd_recover, "s1/s2 inverses, a and A recovery, weighted variants")
    _add_common(p)
    p.add_argument("--a", default="mu")
    p.add_argument("--weights", type=lambda s: [x for x in s.split(",") if x], default=[],
                   help="comma-separated weight functions for the weighted variant")

    p = verb("pm-transform", cmd_pm_transform, "rewrite q^n/(1+q^n) series as q^n/(1-q^n) series")
    _add_common(p)
    p.add_argument("--a", default="mu")

    p = verb("golden", cmd_golden, "recompute the published figures and tables")
    _add_common(p, formats=("json", "csv", "md"), bound=False)
    p.add_argument("--target", choices=TARGETS + ("all",), default="all")

    p = verb("verify-identities", cmd_verify_identities, "run the identity suites")
    _add_common(p)
    p.add_argument("--suite", choices=("examples", "applications", "convolution", "all"), default="all")
    p.add_argument("--f", default="id_1")
    p.add_argument("--g", default="one")

    p = verb("series", cmd_series, "coefficients of a C(q) construction")
    _add_common(p)
    p.add_argument("--C", default="euler", choices=c_series_names())

    p = verb("functions", cmd_functions, "list the named functions and C(q) constructions")
    _add_common(p, bound=False)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    configure_logging()
    try:
        return args.handler(args)
    except (ValueError, OSError) as exc:
        print(f"lambertkit {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
