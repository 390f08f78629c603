"""Exact scalars: polynomials in pi with Gaussian-rational coefficients.

A :class:`Scalar` is stored as a sparse map ``(pipow, ipow) -> mpq`` where
``ipow`` is 0 for the real part and 1 for the imaginary part. Because pi is
transcendental this representation is canonical once zero entries are
removed, so equality is exact and decidable.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational
from typing import Iterator, Union

from gmpy2 import mpq

__all__ = ["Scalar", "Q", "PI", "I", "ONE", "ZERO", "as_scalar", "parse_scalar"]

Q = mpq

Key = tuple[int, int]
ScalarLike = Union["Scalar", int, Fraction, "mpq"]


def _q(value) -> mpq:
    if isinstance(value, float):
        raise TypeError("floats are not exact; convert with Fraction(...) first")
    return mpq(value)


def mul_i_power(key_i: int, other_i: int) -> tuple[int, int]:
    """Return ``(ipow, sign)`` for ``i**key_i * i**other_i`` with ``ipow`` in {0, 1}."""
    s = key_i + other_i
    if s >= 2:
        return s - 2, -1
    return s, 1


class Scalar:
    __slots__ = ("_d", "_hash")

    def __init__(self, data: dict[Key, mpq] | None = None):
        # Callers hand over ownership of ``data``; zero entries are stripped.
        if data:
            self._d = {k: v for k, v in data.items() if v}
        else:
            self._d = {}
        self._hash = None

    @classmethod
    def from_parts(cls, re=0, im=0, pipow: int = 0) -> "Scalar":
        return cls({(pipow, 0): _q(re), (pipow, 1): _q(im)})

    @classmethod
    def _raw(cls, data: dict[Key, mpq]) -> "Scalar":
        obj = cls.__new__(cls)
        obj._d = data
        obj._hash = None
        return obj

    # -- inspection ---------------------------------------------------------

    def items(self) -> Iterator[tuple[Key, mpq]]:
        return iter(self._d.items())

    def is_zero(self) -> bool:
        return not self._d

    def __bool__(self) -> bool:
        return bool(self._d)

    @property
    def pi_degree(self) -> int:
        return max((k[0] for k in self._d), default=0)

    def coefficient(self, pipow: int) -> tuple[mpq, mpq]:
        """The Gaussian rational multiplying ``pi**pipow`` as ``(re, im)``."""
        return self._d.get((pipow, 0), mpq(0)), self._d.get((pipow, 1), mpq(0))

    def is_gaussian_rational(self) -> bool:
        return all(k[0] == 0 for k in self._d)

    def is_real(self) -> bool:
        return all(k[1] == 0 for k in self._d)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: ScalarLike) -> "Scalar":
        other = as_scalar(other)
        d = dict(self._d)
        for k, v in other._d.items():
            s = d.get(k, 0) + v
            if s:
                d[k] = s
            else:
                d.pop(k, None)
        return Scalar._raw(d)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar._raw({k: -v for k, v in self._d.items()})

    def __sub__(self, other: ScalarLike) -> "Scalar":
        return self + (-as_scalar(other))

    def __rsub__(self, other: ScalarLike) -> "Scalar":
        return as_scalar(other) - self

    def __mul__(self, other: ScalarLike) -> "Scalar":
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Rational)) or type(other) is type(mpq(0)):
                c = _q(other)
                if not c:
                    return ZERO
                return Scalar._raw({k: v * c for k, v in self._d.items()})
            return NotImplemented
        d: dict[Key, mpq] = {}
        for (p1, i1), v1 in self._d.items():
            for (p2, i2), v2 in other._d.items():
                ip, sign = mul_i_power(i1, i2)
                k = (p1 + p2, ip)
                d[k] = d.get(k, 0) + (v1 * v2 if sign > 0 else -(v1 * v2))
        return Scalar._raw({k: v for k, v in d.items() if v})

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Scalar":
        """Division by a nonzero Gaussian rational (no pi)."""
        other = as_scalar(other)
        if other.is_zero() or not other.is_gaussian_rational():
            raise ZeroDivisionError("can only divide by a nonzero Gaussian rational")
        a, b = other.coefficient(0)
        n = a * a + b * b
        return self * Scalar({(0, 0): a / n, (0, 1): -b / n})

    def __rtruediv__(self, other) -> "Scalar":
        return as_scalar(other) / self

    def __pow__(self, n: int) -> "Scalar":
        if n < 0:
            raise ValueError("negative powers are not supported")
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self) -> "Scalar":
        return Scalar._raw({k: (-v if k[1] else v) for k, v in self._d.items()})

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        try:
            other = as_scalar(other)
        except TypeError:
            return NotImplemented
        return self._d == other._d

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._d.items()))
        return self._hash

    # -- float views --------------------------------------------------------

    def __complex__(self) -> complex:
        re_, im_ = 0.0, 0.0
        for (p, i), v in self._d.items():
            t = float(v) * math.pi**p
            if i:
                im_ += t
            else:
                re_ += t
        return complex(re_, im_)

    def to_complex(self) -> complex:
        return complex(self)

    # -- text ---------------------------------------------------------------

    def render(self) -> str:
        """Render as a pi-polynomial, highest power first, e.g. ``2*pi^2 + (0+1i)*pi``."""
        if not self._d:
            return "0"
        parts = []
        for p in sorted({k[0] for k in self._d}, reverse=True):
            re_, im_ = self.coefficient(p)
            if im_:
                sign = "+" if im_ >= 0 else "-"
                coef = f"({_fmt(re_)}{sign}{_fmt(abs(im_))}i)"
            else:
                coef = _fmt(re_)
            if p == 0:
                parts.append(coef)
            elif p == 1:
                parts.append(f"{coef}*pi")
            else:
                parts.append(f"{coef}*pi^{p}")
        return " + ".join(parts)

    def decimal(self) -> str:
        z = complex(self)
        if all(k[1] == 0 for k in self._d):
            return format(z.real, ".17g")
        sign = "+" if z.imag >= 0 or math.isnan(z.imag) else "-"
        return f"{z.real:.17g}{sign}{abs(z.imag):.17g}j"

    def __repr__(self) -> str:
        return f"Scalar({self.render()!r})"

    __str__ = render


def _fmt(v: mpq) -> str:
    if v.denominator == 1:
        return str(v.numerator)
    return f"{v.numerator}/{v.denominator}"


def as_scalar(value: ScalarLike) -> Scalar:
    if isinstance(value, Scalar):
        return value
    if isinstance(value, bool):
        value = int(value)
    if isinstance(value, (int, Rational)) or type(value) is type(mpq(0)):
        return Scalar({(0, 0): _q(value)})
    raise TypeError(f"cannot convert {type(value).__name__} to an exact Scalar")


ZERO = Scalar()
ONE = Scalar({(0, 0): mpq(1)})
I = Scalar({(0, 1): mpq(1)})
PI = Scalar({(1, 0): mpq(1)})


_RAT = r"-?\d+(?:/\d+)?"
_TERM = re.compile(
    rf"^(?:(?P<real>{_RAT})|\((?P<re>{_RAT})(?P<sgn>[+-])(?P<im>\d+(?:/\d+)?)i\))"
    r"(?:\*pi(?:\^(?P<pow>\d+))?)?$"
)


def parse_scalar(text: str) -> Scalar:
    """Inverse of :meth:`Scalar.render`. Also accepts a bare ``pi`` factor."""
    text = text.strip()
    if not text:
        raise ValueError("empty scalar")
    out = ZERO
    for raw in _split_terms(text):
        term = raw.strip()
        if term == "pi" or term.startswith("pi^"):
            term = "1*" + term
        m = _TERM.match(term)
        if m is None:
            raise ValueError(f"malformed scalar term {raw!r}")
        pw = int(m["pow"]) if m["pow"] else (1 if "pi" in term else 0)
        if m["real"] is not None:
            out = out + Scalar.from_parts(Fraction(m["real"]), 0, pw)
        else:
            im_ = Fraction(m["im"])
            if m["sgn"] == "-":
                im_ = -im_
            out = out + Scalar.from_parts(Fraction(m["re"]), im_, pw)
    return out


def _split_terms(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and text.startswith(" + ", i):
            parts.append("".join(cur))
            cur = []
            i += 3
            continue
        cur.append(ch)
        i += 1
    parts.append("".join(cur))
    return parts
