"""JSON documents: equations, planar fields, and report values.

Exact rationals travel as strings (``"3/2"``) so nothing passes through a
float. Every document carries ``"schema": "cfl-1"`` when written by this
package; on input the tag is optional but must match when present.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Any

from gmpy2 import mpq

from .coeffs import CoeffSeq, PiecewiseCoeff
from .exppoly import ExpPoly, ep_affine
from .polar import PlanarField
from .scalar import Scalar

__all__ = [
    "SCHEMA",
    "InputError",
    "Ingested",
    "parse_equation",
    "load_equation",
    "render_equation",
    "parse_field",
    "render_field",
    "scalar_json",
]

SCHEMA = "cfl-1"
DEFAULT_MAX_DEGREE = 12


class InputError(ValueError):
    """Malformed or unsupported input document; the message names the offending path."""


def _fail(path: str, msg: str):
    raise InputError(f"{path}: {msg}")


def _expect_keys(obj: Any, path: str, required: set[str], optional: set[str] = frozenset()):
    if not isinstance(obj, dict):
        _fail(path, f"expected an object, got {type(obj).__name__}")
    missing = required - obj.keys()
    if missing:
        _fail(path, f"missing field(s) {', '.join(sorted(missing))}")
    unknown = obj.keys() - required - optional
    if unknown:
        _fail(path, f"unknown field(s) {', '.join(sorted(unknown))}")


def _rational(text: Any, path: str, *, allow_decimal: bool) -> Fraction:
    if isinstance(text, bool):
        _fail(path, "expected a rational string")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        if not allow_decimal:
            _fail(path, "JSON numbers with a fraction part are only accepted in float mode")
        return Fraction(text)
    if not isinstance(text, str):
        _fail(path, f"expected a rational string, got {type(text).__name__}")
    s = text.strip()
    if re.fullmatch(r"[+-]?\d+(/\d+)?", s):
        return Fraction(s)
    if re.fullmatch(r"[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?", s):
        if not allow_decimal:
            _fail(path, f"decimal {s!r} is only accepted in float mode; use an exact rational like '3/2'")
        try:
            return Fraction(Decimal(s))
        except InvalidOperation:
            pass
    _fail(path, f"cannot parse {text!r} as a rational")


def _int(value: Any, path: str, *, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        _fail(path, f"expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        _fail(path, f"must be >= {minimum}")
    return value


# -- breakpoints and period -----------------------------------------------------

_BREAK_PATTERNS = (
    re.compile(r"^(?P<num>\d+)?\s*\*?\s*T(?:\s*/\s*(?P<den>\d+))?$"),
    re.compile(r"^(?P<num>\d+)\s*/\s*(?P<den>\d+)\s*\*?\s*T$"),
)


def parse_breakpoint(text: Any, path: str) -> mpq:
    """``"0"``, ``"T"``, ``"T/2"``, ``"3T/4"`` or ``"3/4*T"`` as a fraction of ``T``."""
    if not isinstance(text, str):
        _fail(path, "breakpoints are strings such as 'T/2'")
    s = text.strip()
    if s == "0":
        return mpq(0)
    for pat in _BREAK_PATTERNS:
        m = pat.match(s)
        if m:
            num = int(m["num"]) if m["num"] else 1
            den = int(m["den"]) if m["den"] else 1
            if den == 0:
                _fail(path, "zero denominator")
            q = mpq(num, den)
            if not 0 <= q <= 1:
                _fail(path, f"breakpoint {s} outside [0, T]")
            if int(q.denominator) & (int(q.denominator) - 1):
                _fail(path, f"breakpoint {s} is not a dyadic multiple of T")
            return q
    _fail(path, f"cannot parse breakpoint {text!r}")


def render_breakpoint(q: mpq) -> str:
    if q == 0:
        return "0"
    if q == 1:
        return "T"
    num = "" if q.numerator == 1 else str(q.numerator)
    return f"{num}T/{q.denominator}"


_PERIOD = re.compile(r"^(?:(?P<num>\d+)(?:/(?P<den>\d+))?)?\s*\*?\s*pi$")


def parse_period(text: Any, path: str, *, allow_decimal: bool) -> tuple[Fraction, bool]:
    """Return ``(s, exact)`` with ``T = s * 2*pi``.

    Rational multiples of pi (``"2pi"``, ``"pi"``, ``"3/2*pi"``) are exact.
    A plain number is a period in absolute units, accepted in float mode only,
    with ``T / (2*pi)`` rounded to the nearest double.
    """
    if not isinstance(text, str):
        _fail(path, "period must be a string such as '2pi'")
    s = text.strip().replace(" ", "")
    m = _PERIOD.match(s)
    if m:
        num = int(m["num"]) if m["num"] else 1
        den = int(m["den"]) if m["den"] else 1
        if num == 0 or den == 0:
            _fail(path, "period must be positive")
        return Fraction(num, 2 * den), True
    if not allow_decimal:
        _fail(path, f"period {text!r} is not a rational multiple of pi (allowed in float mode only)")
    T = _rational(s, path, allow_decimal=True)
    if T <= 0:
        _fail(path, "period must be positive")
    return Fraction(float(T) / (2 * math.pi)), False


# -- equations ------------------------------------------------------------------


@dataclass(frozen=True)
class Ingested:
    coeffs: CoeffSeq
    period: str
    scale: Fraction
    exact: bool
    metadata: dict


def _parse_terms(terms: Any, path: str, *, allow_decimal: bool) -> ExpPoly:
    if not isinstance(terms, list):
        _fail(path, "expected a list of terms")
    out = []
    for k, t in enumerate(terms):
        p = f"{path}[{k}]"
        _expect_keys(t, p, {"re", "xpow", "freq"}, {"im", "pipow"})
        re_ = _rational(t["re"], p + ".re", allow_decimal=allow_decimal)
        im_ = _rational(t.get("im", "0"), p + ".im", allow_decimal=allow_decimal)
        xpow = _int(t["xpow"], p + ".xpow", minimum=0)
        freq = _int(t["freq"], p + ".freq")
        pipow = _int(t.get("pipow", 0), p + ".pipow", minimum=0)
        out.append((Scalar.from_parts(re_, im_, pipow), xpow, freq))
    return ExpPoly.from_terms(out)


def parse_equation(text: str | dict, *, mode: str = "exact") -> CoeffSeq:
    """Validate an equation document into a :class:`CoeffSeq` on ``[0, 2*pi]``."""
    return load_equation(text, mode=mode).coeffs


def load_equation(text: str | dict, *, mode: str = "exact") -> Ingested:
    """Like :func:`parse_equation` but keeps the period bookkeeping.

    A report produced by ``reduce`` or ``group`` is accepted too; its embedded
    equation is used.
    """
    allow_decimal = mode == "float"
    doc = _load_json(text)
    if isinstance(doc, dict) and doc.get("kind") == "report":
        eq = doc.get("results", {}).get("equation") if isinstance(doc.get("results"), dict) else None
        if eq is None:
            _fail("$", "report does not contain an equation")
        doc = eq
    _expect_keys(doc, "$", {"coefficients"}, {"schema", "kind", "period", "metadata"})
    if "schema" in doc and doc["schema"] != SCHEMA:
        _fail("$.schema", f"unsupported schema {doc['schema']!r} (expected {SCHEMA!r})")
    if "kind" in doc and doc["kind"] != "equation":
        _fail("$.kind", f"expected 'equation', got {doc['kind']!r}")
    period = doc.get("period", "2pi")
    scale, exact = parse_period(period, "$.period", allow_decimal=allow_decimal)
    metadata = doc.get("metadata", {})
    if not isinstance(metadata, dict):
        _fail("$.metadata", "expected an object")
    coeffs = doc["coefficients"]
    if not isinstance(coeffs, list):
        _fail("$.coefficients", "expected a list")
    entries: dict[int, PiecewiseCoeff] = {}
    for j, c in enumerate(coeffs):
        p = f"$.coefficients[{j}]"
        _expect_keys(c, p, {"index", "pieces"})
        idx = _int(c["index"], p + ".index", minimum=1)
        if idx in entries:
            _fail(p + ".index", f"duplicate index {idx}")
        pieces = c["pieces"]
        if not isinstance(pieces, list) or not pieces:
            _fail(p + ".pieces", "expected a nonempty list")
        cuts, funcs = [mpq(0)], []
        for k, piece in enumerate(pieces):
            pp = f"{p}.pieces[{k}]"
            _expect_keys(piece, pp, {"from", "to", "terms"})
            lo = parse_breakpoint(piece["from"], pp + ".from")
            hi = parse_breakpoint(piece["to"], pp + ".to")
            if lo != cuts[-1]:
                _fail(pp + ".from", f"pieces must be contiguous from 0 (expected {render_breakpoint(cuts[-1])})")
            if hi <= lo:
                _fail(pp + ".to", "empty or reversed piece")
            f = _parse_terms(piece["terms"], pp + ".terms", allow_decimal=allow_decimal)
            if scale != 1:
                try:
                    f = ep_affine(f, scale, 0).scale(scale)
                except ValueError as exc:
                    _fail(pp + ".terms", f"unsupported frequency after period normalization ({exc})")
            cuts.append(hi)
            funcs.append(f)
        if cuts[-1] != 1:
            _fail(p + ".pieces", "pieces must end at T")
        try:
            entries[idx] = PiecewiseCoeff(cuts, funcs)
        except ValueError as exc:
            _fail(p, str(exc))
    try:
        seq = CoeffSeq(entries)
    except ValueError as exc:
        _fail("$.coefficients", str(exc))
    return Ingested(seq, period, scale, exact, metadata)


def _term_json(coeff: Scalar, xpow: int, freq: int) -> list[dict]:
    out = []
    for pw in range(coeff.pi_degree + 1):
        re_, im_ = coeff.coefficient(pw)
        if not re_ and not im_:
            continue
        t = {"re": _q(re_), "im": _q(im_), "xpow": xpow, "freq": freq}
        if pw:
            t["pipow"] = pw
        out.append(t)
    return out


def render_equation(a: CoeffSeq, metadata: dict | None = None) -> dict:
    """Equation document for ``a`` (period ``2pi``); :func:`parse_equation` inverts it."""
    coeffs = []
    for i, ai in a.entries.items():
        pieces = []
        for lo, hi, f in ai.intervals():
            terms = [t for c, p, m in f.terms() for t in _term_json(c, p, m)]
            pieces.append({"from": render_breakpoint(lo), "to": render_breakpoint(hi), "terms": terms})
        coeffs.append({"index": i, "pieces": pieces})
    doc = {"schema": SCHEMA, "kind": "equation", "period": "2pi", "coefficients": coeffs}
    if metadata:
        doc["metadata"] = metadata
    return doc


def _q(v) -> str:
    v = mpq(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


# -- planar fields --------------------------------------------------------------

_MONO_TOKEN = re.compile(r"^(?P<var>[xy])(?:\^(?P<exp>\d+))?$")


def parse_monomial(text: str, path: str) -> tuple[int, int]:
    """``"x^2 y"``, ``"x^1 y^2"``, ``"x*y"`` -> exponent pair."""
    if not isinstance(text, str) or not text.strip():
        _fail(path, "empty monomial")
    exps = {"x": 0, "y": 0}
    seen = set()
    for tok in re.split(r"[\s*]+", text.strip()):
        m = _MONO_TOKEN.match(tok)
        if m is None:
            _fail(path, f"cannot parse monomial factor {tok!r} in {text!r}")
        if m["var"] in seen:
            _fail(path, f"variable {m['var']} repeated in {text!r}")
        seen.add(m["var"])
        exps[m["var"]] = int(m["exp"]) if m["exp"] else 1
    return exps["x"], exps["y"]


def _coeff(value: Any, path: str, *, allow_decimal: bool) -> Scalar:
    if isinstance(value, list):
        if len(value) != 2:
            _fail(path, "complex coefficients are [re, im] pairs")
        return Scalar.from_parts(
            _rational(value[0], path + "[0]", allow_decimal=allow_decimal),
            _rational(value[1], path + "[1]", allow_decimal=allow_decimal),
        )
    if isinstance(value, dict):
        _expect_keys(value, path, {"re"}, {"im"})
        return Scalar.from_parts(
            _rational(value["re"], path + ".re", allow_decimal=allow_decimal),
            _rational(value.get("im", "0"), path + ".im", allow_decimal=allow_decimal),
        )
    return Scalar.from_parts(_rational(value, path, allow_decimal=allow_decimal))


def parse_field(text: str | dict, *, mode: str = "exact", max_degree: int = DEFAULT_MAX_DEGREE) -> PlanarField:
    """Validate a planar-field document ``{"F": {...}, "G": {...}}``."""
    allow_decimal = mode == "float"
    doc = _load_json(text)
    _expect_keys(doc, "$", set(), {"schema", "kind", "F", "G", "metadata"})
    if "schema" in doc and doc["schema"] != SCHEMA:
        _fail("$.schema", f"unsupported schema {doc['schema']!r}")
    if "kind" in doc and doc["kind"] != "field":
        _fail("$.kind", f"expected 'field', got {doc['kind']!r}")
    parts = {}
    for name in ("F", "G"):
        mons = doc.get(name, {})
        if not isinstance(mons, dict):
            _fail(f"$.{name}", "expected an object mapping monomials to coefficients")
        out: dict[tuple[int, int], Scalar] = {}
        for key, val in mons.items():
            p = f"$.{name}[{key!r}]"
            ex = parse_monomial(key, p)
            if sum(ex) < 2:
                _fail(p, "constant and linear terms are not allowed (x' = -y + F, y' = x + G)")
            if sum(ex) > max_degree:
                _fail(p, f"degree {sum(ex)} exceeds the cap {max_degree}")
            if ex in out:
                _fail(p, "monomial listed twice")
            out[ex] = _coeff(val, p, allow_decimal=allow_decimal)
        parts[name] = out
    return PlanarField(parts["F"], parts["G"])


def render_field(fld: PlanarField) -> dict:
    def mono(p, q):
        bits = []
        if p:
            bits.append(f"x^{p}")
        if q:
            bits.append(f"y^{q}")
        return " ".join(bits)

    def coeff(c: Scalar):
        re_, im_ = c.coefficient(0)
        return _q(re_) if not im_ else [_q(re_), _q(im_)]

    return {
        "schema": SCHEMA,
        "kind": "field",
        "F": {mono(*k): coeff(c) for k, c in sorted(fld.F.items())},
        "G": {mono(*k): coeff(c) for k, c in sorted(fld.G.items())},
    }


# -- report helpers -------------------------------------------------------------


def scalar_json(s: Scalar, mode: str = "exact") -> dict:
    if mode == "float":
        return {"decimal": s.decimal()}
    return {"exact": s.render(), "decimal": s.decimal()}


def _load_json(text: str | dict) -> Any:
    if isinstance(text, (dict, list)):
        return text
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"$: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
