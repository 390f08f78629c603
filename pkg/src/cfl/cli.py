"""Command-line entry point ``cfl``.

Exit codes: 0 success, 1 negative verdict under ``--strict-verdict``,
2 input error, 3 internal cross-check failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from typing import Sequence

from . import __version__
from .group import concat, equivalent_up_to, in_Xstar, inverse
from .integrals import iterated_integral, moment
from .io import (
    SCHEMA,
    InputError,
    load_equation,
    parse_field,
    render_equation,
    scalar_json,
)
from .polar import polar_reduce
from .returnmap import (
    CrossCheckError,
    NumericFailure,
    center_check,
    numeric_radius,
    return_coeffs_iterated,
    return_coeffs_transport,
    return_map_numeric,
)
from .verify import run_suite
from .words import MomentSpec, moment_specs, words_up_to

__all__ = ["main", "run_command", "build_parser"]

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(f"usage: {message}")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--order", type=int, default=8, help="truncation order N (default 8)")
    p.add_argument("--mode", choices=("exact", "float"), default="exact")
    p.add_argument("--pretty", action="store_true", help="human-readable output instead of JSON")
    p.add_argument("--strict-verdict", action="store_true", help="exit 1 on a negative verdict")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cfl", description="Center problem toolkit for dv/dx = sum a_i(x) v^(i+1).")
    parser.add_argument("--version", action="version", version=f"cfl {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("reduce", help="polar reduction of a planar polynomial field")
    p.add_argument("field")
    p.add_argument("--max-degree", type=int, default=12)
    _common(p)

    p = sub.add_parser("coeffs", help="return-map coefficients c_1..c_N")
    p.add_argument("equation")
    p.add_argument("--route", choices=("iterated", "transport", "both"), default="both")
    p.add_argument("--at", type=float, default=None, help="also evaluate P(a)(r) numerically at r")
    _common(p)

    p = sub.add_parser("center-check", help="order-N center / universal-center certificate")
    p.add_argument("equation")
    _common(p)

    p = sub.add_parser("moments", help="moments of the coefficients")
    p.add_argument("equation")
    p.add_argument("--spec", action="append", default=[], help="'i1,...,ik+1:n1,...,nk' (repeatable)")
    p.add_argument("--max-degree", type=int, default=3, help="all specs up to this degree when --spec is absent")
    _common(p)

    p = sub.add_parser("iterated", help="basic iterated integrals")
    p.add_argument("equation")
    p.add_argument("--word", action="append", default=[], help="comma-separated word (repeatable)")
    _common(p)

    p = sub.add_parser("group", help="concatenation, inverse, equivalence, X_* membership")
    p.add_argument("op", choices=("concat", "inverse", "equiv", "xstar"))
    p.add_argument("equations", nargs="+")
    _common(p)

    p = sub.add_parser("verify", help="randomized identity suites")
    p.add_argument("--suite", default="all")
    p.add_argument("--max-order", type=int, default=6)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    _common(p)
    return parser


# -- helpers --------------------------------------------------------------------


class _Inputs:
    """Reads named inputs (``-`` is stdin, read once) and digests them in order."""

    def __init__(self, stdin):
        self.stdin = stdin
        self._stdin_text = None
        self.digest = hashlib.sha256()

    def read(self, name: str) -> str:
        if name == "-":
            if self._stdin_text is None:
                self._stdin_text = self.stdin.read()
            text = self._stdin_text
        else:
            try:
                with open(name, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                raise InputError(f"{name}: {exc.strerror}") from None
        self.digest.update(text.encode())
        self.digest.update(b"\0")
        return text


def _parse_word(text: str) -> tuple[int, ...]:
    text = text.strip()
    if text in ("", "()"):
        return ()
    try:
        w = tuple(int(t) for t in text.strip("()").split(","))
    except ValueError:
        raise InputError(f"--word: cannot parse {text!r}") from None
    if any(i < 1 for i in w):
        raise InputError(f"--word: letters must be positive in {text!r}")
    return w


def _parse_spec(text: str) -> MomentSpec:
    idx, _, exps = text.partition(":")
    try:
        return MomentSpec(
            tuple(int(t) for t in idx.split(",")),
            tuple(int(t) for t in exps.split(",")) if exps.strip() else (),
        )
    except ValueError as exc:
        raise InputError(f"--spec {text!r}: {exc}") from None


def _series_json(series, mode):
    return [{"n": n, "value": scalar_json(series.c(n), mode)} for n in range(1, series.order + 1)]


def _ingestion(ing) -> dict:
    out = {"period": ing.period}
    if ing.scale != 1:
        out["rescaled_to_2pi"] = True
        out["time_scale"] = str(ing.scale)
        out["exact_rescale"] = ing.exact
    if ing.metadata:
        out["metadata"] = ing.metadata
    return out


# -- commands -------------------------------------------------------------------


def _cmd_reduce(args, inputs):
    fld = parse_field(inputs.read(args.field), mode=args.mode, max_degree=args.max_degree)
    a = polar_reduce(fld, args.order)
    meta = {"label": "polar reduction", "source": args.field}
    return {"equation": render_equation(a, meta), "degree": fld.degree}, {}, True


def _cmd_coeffs(args, inputs):
    ing = load_equation(inputs.read(args.equation), mode=args.mode)
    a = ing.coeffs
    results: dict = {"ingestion": _ingestion(ing)}
    routes = {}
    if args.route in ("iterated", "both"):
        routes["iterated"] = return_coeffs_iterated(a, args.order)
    if args.route in ("transport", "both"):
        routes["transport"] = return_coeffs_transport(a, args.order)
    if len(routes) == 2 and routes["iterated"] != routes["transport"]:
        raise CrossCheckError("iterated and transport routes disagree")
    series = next(iter(routes.values()))
    results["routes"] = sorted(routes)
    results["coefficients"] = _series_json(series, args.mode)
    if args.at is not None:
        radius = numeric_radius(a)
        num = return_map_numeric(a, args.at)
        ser = series(args.at)
        results["evaluation"] = {
            "r": args.at,
            "radius": radius,
            "within_radius": abs(args.at) <= radius,
            "series": _complex(ser),
            "numeric": _complex(num),
            "abs_difference": float(f"{abs(ser - num):.6g}"),
        }
    return results, {}, True


def _complex(z: complex) -> str:
    if z.imag == 0:
        return format(z.real, ".17g")
    return f"{z.real:.17g}{'+' if z.imag >= 0 else '-'}{abs(z.imag):.17g}j"


def _cmd_center(args, inputs):
    ing = load_equation(inputs.read(args.equation), mode=args.mode)
    v = center_check(ing.coeffs, args.order)
    verdicts = {
        "order_checked": v.order_checked,
        "is_center_up_to_N": v.is_center_up_to_N,
        "is_universal_up_to_N": v.is_universal_up_to_N,
        "first_nonzero": None
        if v.first_nonzero is None
        else {"n": v.first_nonzero[0], "value": scalar_json(v.first_nonzero[1], args.mode)},
    }
    results = {
        "ingestion": _ingestion(ing),
        "evidence": [{"quantity": k, "value": scalar_json(s, args.mode)} for k, s in v.evidence],
        "words_checked": v.words_checked,
        "routes_agree": True,
    }
    return results, verdicts, v.is_center_up_to_N


def _cmd_moments(args, inputs):
    ing = load_equation(inputs.read(args.equation), mode=args.mode)
    a = ing.coeffs
    specs = [_parse_spec(s) for s in args.spec] or moment_specs(args.max_degree, a.support)
    values = [{"spec": str(s), "indices": list(s.indices), "exponents": list(s.exponents),
               "value": scalar_json(moment(s, a), args.mode)} for s in specs]
    return {"ingestion": _ingestion(ing), "moments": values, "in_Xstar": in_Xstar(a)}, {}, True


def _cmd_iterated(args, inputs):
    ing = load_equation(inputs.read(args.equation), mode=args.mode)
    a = ing.coeffs
    words = [_parse_word(w) for w in args.word] or words_up_to(args.order, a.support)
    values = [{"word": list(w), "value": scalar_json(iterated_integral(w, a), args.mode)} for w in words]
    return {"ingestion": _ingestion(ing), "integrals": values}, {}, True


def _cmd_group(args, inputs):
    arity = {"concat": 2, "inverse": 1, "equiv": 2, "xstar": 1}[args.op]
    if len(args.equations) != arity:
        raise InputError(f"group {args.op} takes {arity} equation(s), got {len(args.equations)}")
    seqs = [load_equation(inputs.read(e), mode=args.mode).coeffs for e in args.equations]
    if args.op == "concat":
        g = concat(*seqs)
        return {"equation": render_equation(g, {"label": "concat"}), "pieces": g.piece_count}, {}, True
    if args.op == "inverse":
        g = inverse(seqs[0])
        return {"equation": render_equation(g, {"label": "inverse"}), "pieces": g.piece_count}, {}, True
    if args.op == "xstar":
        ok = in_Xstar(seqs[0])
        return {}, {"in_Xstar": ok}, ok
    eq = equivalent_up_to(seqs[0], seqs[1], args.order)
    verdicts = {
        "order_checked": args.order,
        "equivalent_up_to_N": eq.equivalent,
        "witness": None if eq.equivalent else {"word": list(eq.witness), "value": scalar_json(eq.value, args.mode)},
    }
    return {}, verdicts, eq.equivalent


def _cmd_verify(args, inputs):
    try:
        results = run_suite(args.suite, max_order=args.max_order, trials=args.trials, seed=args.seed)
    except KeyError as exc:
        raise InputError(str(exc.args[0])) from None
    out = [{"suite": r.name, "passed": r.passed, "failed": r.failed, "failures": r.failures} for r in results]
    if any(not r.ok for r in results):
        raise CrossCheckError(json.dumps(out))
    return {"suites": out, "seed": args.seed}, {"all_passed": True}, True


COMMANDS = {
    "reduce": _cmd_reduce,
    "coeffs": _cmd_coeffs,
    "center-check": _cmd_center,
    "moments": _cmd_moments,
    "iterated": _cmd_iterated,
    "group": _cmd_group,
    "verify": _cmd_verify,
}


def run_command(argv: Sequence[str], stdin=None) -> tuple[int, dict]:
    """Run one subcommand; returns ``(exit_code, report)`` without printing."""
    argv = list(argv)
    stdin = sys.stdin if stdin is None else stdin
    inputs = _Inputs(stdin)
    report: dict = {"schema": SCHEMA, "kind": "report", "command": argv}
    start = time.perf_counter()
    code = EXIT_OK
    try:
        args = build_parser().parse_args(argv)
        report["mode"] = args.mode
        results, verdicts, positive = COMMANDS[args.command](args, inputs)
        report["results"] = results
        report["verdicts"] = verdicts
        if args.strict_verdict and not positive:
            code = EXIT_NEGATIVE
    except InputError as exc:
        report["error"] = {"type": "input", "message": str(exc)}
        code = EXIT_INPUT
    except (CrossCheckError, NumericFailure) as exc:
        report["error"] = {"type": "internal", "message": str(exc)}
        code = EXIT_INTERNAL
    report["input_digest"] = inputs.digest.hexdigest()
    report["timing"] = {"seconds": round(time.perf_counter() - start, 6)}
    return code, report


def _pretty(report: dict) -> str:
    lines = [f"cfl {' '.join(report['command'])}"]
    if "error" in report:
        lines.append(f"error ({report['error']['type']}): {report['error']['message']}")
        return "\n".join(lines)
    for key, val in report.get("verdicts", {}).items():
        lines.append(f"  {key}: {_short(val)}")
    for key, val in report.get("results", {}).items():
        if isinstance(val, list):
            lines.append(f"  {key}:")
            lines.extend(f"    {_short(item)}" for item in val)
        elif key != "equation":
            lines.append(f"  {key}: {_short(val)}")
    if "equation" in report.get("results", {}):
        lines.append(json.dumps(report["results"]["equation"], indent=2))
    return "\n".join(lines)


def _short(val) -> str:
    if isinstance(val, dict) and "exact" in val:
        return f"{val['exact']}  (~{val['decimal']})"
    if isinstance(val, dict) and set(val) == {"decimal"}:
        return val["decimal"]
    if isinstance(val, dict):
        return ", ".join(f"{k}={_short(v)}" for k, v in val.items())
    return str(val)


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    code, report = run_command(argv)
    pretty = "--pretty" in argv
    sys.stdout.write((_pretty(report) if pretty else json.dumps(report, indent=2)) + "\n")
    if "error" in report and not pretty:
        sys.stderr.write(f"cfl: {report['error']['message']}\n")
    return code


if __name__ == "__main__":
    raise SystemExit(main())
