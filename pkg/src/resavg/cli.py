"""Command-line entry point.

One subcommand per library operation, deterministic JSON on stdout
(sorted keys, no timestamps), an optional CSV projection for commands
that carry a tower table, and a small JSON interchange format for
towers and exponent tables.  Exit codes: 0 success, 1 domain error
(reported as a machine-readable error object), 2 usage error.

Exact rationals are emitted as {"exact": "num/den", "approx": "..."}
with the approximation rendered to --digits significant digits under
round-half-even.  Integers that can outgrow 64 bits (indices, orders,
lcm values, numerators) are emitted as decimal strings.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from decimal import Context, Decimal, ROUND_HALF_EVEN
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

from . import grigorchuk, integers, linear, primes, tower
from .errors import ResavgError, SchemaError
from .tower import IndexTower, as_fraction

SCHEMA = "resavg.report/1"


def decimal_str(value: Fraction | int, digits: int = 10) -> str:
    """Render an exact rational to `digits` significant digits.

    Correctly rounded (half-even), so the result differs from the exact
    value by well under one unit in the last rendered digit.
    """
    if digits < 1:
        raise ValueError("digits must be positive")
    fr = Fraction(value)
    ctx = Context(prec=digits, rounding=ROUND_HALF_EVEN)
    return str(ctx.divide(Decimal(fr.numerator), Decimal(fr.denominator)))


def rational_json(value: Fraction | int, digits: int) -> dict[str, str]:
    fr = Fraction(value)
    return {
        "exact": f"{fr.numerator}/{fr.denominator}",
        "approx": decimal_str(fr, digits),
    }


def tower_to_json(t: IndexTower) -> dict[str, Any]:
    return {"name": t.name, "d": [str(x) for x in t.d], "l": [str(x) for x in t.l]}


def _parse_big_int(raw: Any, where: str) -> int:
    if isinstance(raw, int) and not isinstance(raw, bool):
        return raw
    if isinstance(raw, str):
        text = raw.strip()
        if text.isdigit():
            return int(text)
    raise SchemaError(f"{where}: expected a decimal integer string, got {raw!r}")


def tower_from_json(obj: Any) -> IndexTower:
    """Parse the tower interchange object, with field-level diagnostics."""
    if not isinstance(obj, dict):
        raise SchemaError("tower file must contain a JSON object")
    missing = {"name", "d", "l"} - set(obj)
    if missing:
        raise SchemaError(f"tower object missing field(s): {sorted(missing)}")
    name = obj["name"]
    if not isinstance(name, str):
        raise SchemaError("field 'name': expected a string")
    for key in ("d", "l"):
        if not isinstance(obj[key], list):
            raise SchemaError(f"field '{key}': expected a list")
    d = [_parse_big_int(x, f"field 'd[{i + 1}]'") for i, x in enumerate(obj["d"])]
    l = [_parse_big_int(x, f"field 'l[{i + 1}]'") for i, x in enumerate(obj["l"])]
    if len(d) != len(l):
        raise SchemaError(f"field 'l': length {len(l)} does not match 'd' length {len(d)}")
    try:
        return IndexTower(name=name, d=tuple(d), l=tuple(l))
    except ValueError as exc:
        raise SchemaError(f"tower violates an index invariant: {exc}") from exc


def read_tower(path: str | Path) -> IndexTower:
    try:
        payload = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaError(f"cannot read tower file {path}: {exc}") from exc
    try:
        obj = json.loads(payload)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from exc
    return tower_from_json(obj)


def write_tower(t: IndexTower, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(tower_to_json(t), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def ell_table_from_json(obj: Any, n: int) -> linear.EllTable:
    if not isinstance(obj, dict):
        raise SchemaError("table file must contain a JSON object")
    missing = {"primes", "ell", "O"} - set(obj)
    if missing:
        raise SchemaError(f"table object missing field(s): {sorted(missing)}")
    try:
        return linear.EllTable(
            n=n,
            primes=tuple(int(p) for p in obj["primes"]),
            rows=tuple(tuple(int(e) for e in row) for row in obj["ell"]),
            orders=tuple(int(o) for o in obj["O"]),
        )
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"table violates the exponent-table schema: {exc}") from exc


@dataclass
class RunReport:
    """Self-describing result of one CLI invocation."""

    command: str
    parameters: dict[str, Any]
    results: dict[str, Any]
    warnings: list[str] = field(default_factory=list)

    def to_json(self) -> dict[str, Any]:
        return {
            "schema": SCHEMA,
            "command": self.command,
            "parameters": self.parameters,
            "results": self.results,
            "warnings": self.warnings,
        }


def tower_table_rows(t: IndexTower, digits: int) -> list[dict[str, Any]]:
    """Per-level table: coefficients, measure term, running average."""
    rows = []
    partial = Fraction(0)
    for j in range(1, len(t) + 1):
        dec = tower.decompose(t, j)
        term = tower.measure_term(t, j)
        partial += t.d_at(j) * term
        rows.append(
            {
                "j": j,
                "d": str(t.d_at(j)),
                "l": str(t.l_at(j)),
                "r": str(dec.r),
                "s": str(dec.s),
                "t": str(dec.t),
                "term_num": str(term.numerator),
                "term_den": str(term.denominator),
                "partial_num": str(partial.numerator),
                "partial_den": str(partial.denominator),
            }
        )
    return rows


CSV_COLUMNS = ("j", "d", "l", "r", "s", "t", "term_num", "term_den", "partial_num", "partial_den")


def _emit(report: RunReport, args: argparse.Namespace, table_tower: IndexTower | None) -> None:
    if getattr(args, "csv", False):
        if table_tower is None:
            raise ValueError("--csv applies only to commands that carry a tower table")
        print(",".join(CSV_COLUMNS))
        for row in tower_table_rows(table_tower, args.digits):
            print(",".join(str(row[c]) for c in CSV_COLUMNS))
        return
    payload: Any = report.results if getattr(args, "quiet", False) else report.to_json()
    print(json.dumps(payload, indent=2, sort_keys=True))


def _degenerate_warnings(t: IndexTower) -> list[str]:
    levels = tower.degenerate_levels(t)
    if not levels:
        return []
    return [f"levels {levels} have s = 1: they contribute no measure and no growth ratio"]


# ---------------------------------------------------------------------------
# subcommand handlers: each returns (results, warnings, tower-for-csv)

Handler = Callable[[argparse.Namespace], tuple[dict[str, Any], list[str], IndexTower | None]]


def _cmd_primes(args) -> tuple[dict, list, None]:
    seq = primes.primes_upto(args.upto)
    return {"bound": args.upto, "count": len(seq), "primes": list(seq.primes)}, [], None


def _cmd_bertrand(args) -> tuple[dict, list, None]:
    ratio, pair = primes.bertrand_verify(args.upto)
    return (
        {
            "bound": args.upto,
            "max_ratio": rational_json(ratio, args.digits),
            "witness": {"p": pair[0], "q": pair[1]},
            "holds": bool(ratio <= 2),
        },
        [],
        None,
    )


def _cmd_ave_z(args) -> tuple[dict, list, None]:
    value = integers.ave_z_partial(args.terms)
    return {"terms": args.terms, "value": rational_json(value, args.digits)}, [], None


def _cmd_ave_prime(args) -> tuple[dict, list, None]:
    value = integers.ave_prime_partial(args.terms)
    return {"terms": args.terms, "value": rational_json(value, args.digits)}, [], None


def _cmd_ave_p(args) -> tuple[dict, list, None]:
    value = integers.ave_p_partial(args.prime, args.terms)
    return (
        {"prime": args.prime, "terms": args.terms, "value": rational_json(value, args.digits)},
        [f"partial sums grow linearly: every term equals {args.prime - 1}"],
        None,
    )


def _cmd_density(args) -> tuple[dict, list, None]:
    exact = integers.level_set_measure(args.n).measure
    observed = integers.empirical_density(args.n, args.upto)
    bound = Fraction(2 * primes.lcm_upto(args.n), args.upto)
    return (
        {
            "n": args.n,
            "bound": args.upto,
            "empirical": observed,
            "exact": rational_json(exact, args.digits),
            "abs_error": abs(observed - float(exact)),
            "error_bound": rational_json(bound, args.digits),
        },
        [],
        None,
    )


def _cmd_div(args) -> tuple[dict, list, None]:
    if args.mode == "full":
        value = integers.d_full(args.m)
    elif args.mode == "prime":
        value = integers.d_prime(args.m)
    else:
        if args.prime is None:
            raise ValueError("--mode p requires --prime")
        value = integers.d_p(args.m, args.prime)
    out: dict[str, Any] = {"m": args.m, "mode": args.mode, "value": value}
    if args.mode == "p":
        out["prime"] = args.prime
    return out, [], None


def _cmd_sl_tower(args) -> tuple[dict, list, IndexTower]:
    t = linear.sl_prime_tower(args.n, args.primes)
    results: dict[str, Any] = {
        "tower": tower_to_json(t),
        "prime_system": tower.is_prime_system(t),
    }
    warnings = _degenerate_warnings(t)
    if args.classify:
        verdict = tower.classify(t, window=args.window)
        results["classification"] = verdict.value
        results["window"] = args.window
    if args.out:
        write_tower(t, args.out)
        results["written"] = str(args.out)
    return results, warnings, t


def _cmd_order(args) -> tuple[dict, list, None]:
    det_one = args.group == "sl"
    if args.mod_power is not None:
        value = linear.order_mod_pk(args.n, args.q, args.mod_power, det_one=det_one)
        extra = {"mod_power": args.mod_power}
    else:
        value = linear.sl_order(args.n, args.q) if det_one else linear.gl_order(args.n, args.q)
        extra = {}
    return {"group": args.group, "n": args.n, "q": args.q, "order": str(value), **extra}, [], None


def _parse_matrix(text: str) -> linear.IntMatrix:
    try:
        rows = tuple(
            tuple(int(cell) for cell in row.split(",")) for row in text.split(";")
        )
        return linear.IntMatrix(rows)
    except ValueError as exc:
        raise SchemaError(f"cannot parse matrix {text!r}: {exc}") from exc


def _cmd_matdiv(args) -> tuple[dict, list, None]:
    gamma = _parse_matrix(args.matrix)
    p, index = linear.divisibility_matrix(gamma, args.pmax)
    return {"matrix": args.matrix, "p": p, "index": str(index)}, [], None


def _cmd_select_powers(args) -> tuple[dict, list, IndexTower | None]:
    try:
        obj = json.loads(Path(args.table).read_text(encoding="utf-8"))
    except OSError as exc:
        raise SchemaError(f"cannot read table file {args.table}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{args.table}: invalid JSON: {exc.msg}") from exc
    table = ell_table_from_json(obj, args.n)
    epsilon = args.epsilon if args.epsilon is not None else args.delta / 2
    params = linear.PowerSelectionParams(
        n=args.n, N=args.N0, C=args.C, delta=args.delta, epsilon=epsilon
    )
    count = args.terms if args.terms is not None else len(table)
    ks = linear.select_powers(table, params, count)
    verified = linear.verify_power_windows(table, ks, params)
    j0 = linear.power_gap_start_index(params, primes=table.primes)
    results: dict[str, Any] = {
        "ks": list(ks),
        "ell": [table.ell(j, ks[j - 1]) for j in range(1, len(ks) + 1)],
        "windows_verified": verified,
        "gap_start_index": j0,
        "delta": str(params.delta),
        "epsilon": str(params.epsilon),
    }
    t: IndexTower | None = None
    warnings = []
    if args.emit_tower:
        t = linear.power_tower(table, ks)
        results["tower"] = tower_to_json(t)
        if j0 < len(t):
            results["gap_check_power"] = tower.gap_check_power(t, params.delta, start=j0)
        else:
            warnings.append("tower too short to test the power gap from the computed start index")
    return results, warnings, t


def _cmd_wieferich(args) -> tuple[dict, list, None]:
    return (
        {"p": args.p, "a": args.a, "wieferich": linear.wieferich_test(args.p, args.a)},
        [],
        None,
    )


def _cmd_grig(args) -> tuple[dict, list, IndexTower]:
    t = grigorchuk.grig_tower(args.levels)
    results: dict[str, Any] = {
        "tower": tower_to_json(t),
        "nested": tower.is_nested(t),
        "ave_partial": rational_json(tower.ave_partial(t, len(t)), args.digits),
    }
    warnings: list[str] = []
    if args.d1_series:
        terms = grigorchuk.d1_series_terms(t.d, max(0, args.levels - 3))
        results["d1_series"] = [rational_json(x, args.digits) for x in terms]
        trend = [terms[j] <= terms[j - 1] for j in range(1, len(terms))]
        if trend and all(trend):
            warnings.append(
                "d1 series terms are non-increasing over the computed range; "
                "no claim is made about their limit"
            )
    if args.out:
        write_tower(t, args.out)
        results["written"] = str(args.out)
    return results, warnings, t


def _cmd_slzp(args) -> tuple[dict, list, IndexTower]:
    t = grigorchuk.slnzp_tower(args.n, args.p, args.levels)
    results = {
        "tower": tower_to_json(t),
        "nested": tower.is_nested(t),
        "ave_partial": rational_json(tower.ave_partial(t, len(t)), args.digits),
    }
    if args.out:
        write_tower(t, args.out)
        results["written"] = str(args.out)
    return results, [], t


def _cmd_classify(args) -> tuple[dict, list, IndexTower]:
    t = read_tower(args.tower)
    verdict = tower.classify(t, window=args.window)
    return (
        {"tower": t.name, "window": args.window, "classification": verdict.value},
        _degenerate_warnings(t),
        t,
    )


def _cmd_ave(args) -> tuple[dict, list, IndexTower]:
    t = read_tower(args.tower)
    terms = args.terms if args.terms is not None else len(t)
    value = tower.ave_partial(t, terms)
    product_form = tower.ave_partial_product_form(t, terms)
    results = {
        "tower": t.name,
        "terms": terms,
        "ave_partial": rational_json(value, args.digits),
        "ave_partial_product_form": rational_json(product_form, args.digits),
        "forms_agree": value == product_form,
        "measure_telescope": rational_json(tower.measure_telescope(t, terms), args.digits),
    }
    warnings = _degenerate_warnings(t)
    if value != product_form:
        warnings.append("the two series forms disagree on this tower")
    return results, warnings, t


def _cmd_zeta(args) -> tuple[dict, list, None]:
    if (args.tower is None) == (args.indices is None):
        raise SchemaError("provide exactly one of --tower / --indices")
    if args.tower is not None:
        t = read_tower(args.tower)
        pool = sorted(set(t.d))
        source = t.name
    else:
        parts = [int(x) for x in args.indices.split(",") if x.strip()]
        if len(parts) != len(set(parts)):
            raise SchemaError("indices must be distinct")
        pool = sorted(parts)
        source = "explicit"
    terms = args.terms if args.terms is not None else len(pool)
    value = tower.zeta_partial(pool, args.s, terms)
    return (
        {
            "source": source,
            "s": str(as_fraction(args.s)),
            "terms": min(terms, len(pool)),
            "value": value,
        },
        [],
        None,
    )


def _cmd_tower_check(args) -> tuple[dict, list, IndexTower | None]:
    t = read_tower(args.tower)
    first_bad = None
    for j in range(1, len(t) + 1):
        try:
            tower.decompose(t, j)
        except ResavgError:
            first_bad = j
            break
    results: dict[str, Any] = {
        "tower": t.name,
        "levels": len(t),
        "consistent": first_bad is None,
        "first_inconsistent_level": first_bad,
        "recursion_check": tower.recursion_check(t),
    }
    warnings: list[str] = []
    if first_bad is None:
        results["prime_system"] = tower.is_prime_system(t)
        results["nested"] = tower.is_nested(t)
        results["measure_telescope"] = rational_json(
            tower.measure_telescope(t, len(t)), args.digits
        )
        warnings = _degenerate_warnings(t)
        return results, warnings, t
    return results, warnings, None


# ---------------------------------------------------------------------------


def _fraction_arg(text: str) -> Fraction:
    return as_fraction(text)


def build_parser() -> argparse.ArgumentParser:
    # The output flags are accepted both before and after the subcommand;
    # SUPPRESS keeps a later subparser from resetting a value parsed earlier.
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--digits", type=int, default=argparse.SUPPRESS,
        help="significant digits for decimal fields (default 10)",
    )
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="JSON output (the default)")
    common.add_argument("--csv", action="store_true", default=argparse.SUPPRESS,
                        help="CSV tower table instead of JSON")
    common.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS,
                        help="print only the results object")

    parser = argparse.ArgumentParser(
        prog="resavg",
        description="Exact residual averages and index-gap statistics for residual systems.",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, handler: Handler, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text, parents=[common])
        p.set_defaults(handler=handler)
        return p

    p = add("primes", _cmd_primes, "primes up to a bound")
    p.add_argument("--upto", type=int, required=True)

    p = add("bertrand", _cmd_bertrand, "max consecutive-prime ratio up to a bound")
    p.add_argument("--upto", type=int, required=True)

    p = add("ave-z", _cmd_ave_z, "partial average over all integer subgroups")
    p.add_argument("--terms", type=int, required=True)

    p = add("ave-prime", _cmd_ave_prime, "partial average over the prime subgroups")
    p.add_argument("--terms", type=int, required=True)

    p = add("ave-p", _cmd_ave_p, "partial average over powers of one prime (diverges)")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--terms", type=int, required=True)

    p = add("density", _cmd_density, "empirical density of a divisibility level set")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--upto", type=int, required=True)

    p = add("div", _cmd_div, "divisibility function of one integer")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--mode", choices=("full", "prime", "p"), default="full")
    p.add_argument("--prime", type=int)

    p = add("sl-tower", _cmd_sl_tower, "mod-p tower of the integral special linear group")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--primes", type=int, required=True)
    p.add_argument("--classify", action="store_true")
    p.add_argument("--window", type=int, default=10)
    p.add_argument("--out", help="also write the tower JSON to this file")

    p = add("order", _cmd_order, "group order over a finite field or a prime power ring")
    p.add_argument("--group", choices=("sl", "gl"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--mod-power", type=int, dest="mod_power")

    p = add("matdiv", _cmd_matdiv, "divisibility of an integer matrix via mod-p reduction")
    p.add_argument("--matrix", required=True, help='rows separated by ";", entries by ","')
    p.add_argument("--pmax", type=int, default=10**6)

    p = add("select-powers", _cmd_select_powers, "depth selection over an exponent table")
    p.add_argument("--table", required=True, help="JSON file with primes/ell/O")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--N0", type=int, required=True, dest="N0")
    p.add_argument("--C", type=int, required=True)
    p.add_argument("--delta", type=_fraction_arg, required=True)
    p.add_argument("--epsilon", type=_fraction_arg)
    p.add_argument("--terms", type=int)
    p.add_argument("--emit-tower", action="store_true", dest="emit_tower")

    p = add("wieferich", _cmd_wieferich, "does a**(p-1) = 1 hold mod p^2")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--a", type=int, default=2)

    p = add("grig", _cmd_grig, "level tower of the first Grigorchuk group")
    p.add_argument("--levels", type=int, required=True)
    p.add_argument("--d1-series", action="store_true", dest="d1_series")
    p.add_argument("--out", help="also write the tower JSON to this file")

    p = add("slzp", _cmd_slzp, "congruence tower of the p-adic special linear group")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--levels", type=int, required=True)
    p.add_argument("--out", help="also write the tower JSON to this file")

    p = add("classify", _cmd_classify, "ratio-test growth class of a tower file")
    p.add_argument("--tower", required=True)
    p.add_argument("--window", type=int, default=10)

    p = add("ave", _cmd_ave, "partial averages of a tower file (both series forms)")
    p.add_argument("--tower", required=True)
    p.add_argument("--terms", type=int)

    p = add("zeta", _cmd_zeta, "partial index zeta sum of a tower or explicit index set")
    p.add_argument("--tower")
    p.add_argument("--indices", help="comma-separated distinct indices")
    p.add_argument("--s", type=_fraction_arg, required=True)
    p.add_argument("--terms", type=int)

    p = add("tower-check", _cmd_tower_check, "consistency and structure report for a tower file")
    p.add_argument("--tower", required=True)

    return parser


def _parameters(args: argparse.Namespace) -> dict[str, Any]:
    skip = {"handler", "command", "digits", "json", "csv", "quiet"}
    out = {}
    for key, value in vars(args).items():
        if key in skip or value is None:
            continue
        out[key] = str(value) if isinstance(value, Fraction) else value
    return out


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    # The output flags live in a shared parent with SUPPRESS defaults so a
    # subcommand parse cannot reset values given before it; fill them here.
    for key, fallback in (("digits", 10), ("json", False), ("csv", False), ("quiet", False)):
        if not hasattr(args, key):
            setattr(args, key, fallback)
    if args.digits < 1:
        parser.print_usage(sys.stderr)
        print("resavg: error: --digits must be positive", file=sys.stderr)
        return 2
    try:
        results, warnings, table_tower = args.handler(args)
        report = RunReport(
            command=args.command,
            parameters=_parameters(args),
            results=results,
            warnings=warnings,
        )
        _emit(report, args, table_tower)
    except ResavgError as exc:
        print(
            json.dumps(
                {
                    "schema": SCHEMA,
                    "command": args.command,
                    "error": {"type": type(exc).__name__, "message": str(exc)},
                },
                indent=2,
                sort_keys=True,
            )
        )
        return 1
    except (ValueError, TypeError) as exc:
        print(
            json.dumps(
                {
                    "schema": SCHEMA,
                    "command": args.command,
                    "error": {"type": "UsageError", "message": str(exc)},
                },
                indent=2,
                sort_keys=True,
            )
        )
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
