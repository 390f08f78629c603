"""Exponential polynomials ``sum c * x**p * exp(i*m*x)`` with exact coefficients.

Internally a term is keyed by ``(xpow, freq, pipow, ipow)`` and maps to a
nonzero ``mpq``; the coefficient ``c`` of ``x**p e^{imx}`` is the
:class:`~cfl.scalar.Scalar` gathered from all keys sharing ``(p, m)``.
The flat layout keeps the inner multiplication loop to plain dict updates.
"""

from __future__ import annotations

import cmath
import math
from typing import Iterable, Iterator

from gmpy2 import mpq

from .scalar import ONE, Scalar, as_scalar

__all__ = ["ExpPoly", "ep_mul", "ep_antiderivative", "ep_affine"]

Key = tuple[int, int, int, int]


def _add(d: dict, key, value) -> None:
    s = d.get(key, 0) + value
    if s:
        d[key] = s
    else:
        d.pop(key, None)


def _rot(d: dict, p: int, m: int, pipow: int, ipow: int, value) -> None:
    """Accumulate ``value * i**ipow`` (any integer ``ipow``) into ``d``."""
    ipow %= 4
    if ipow >= 2:
        value = -value
        ipow -= 2
    _add(d, (p, m, pipow, ipow), value)


class ExpPoly:
    """Immutable exponential polynomial in one real variable."""

    __slots__ = ("_d", "_hash")

    def __init__(self, data: dict[Key, mpq] | None = None):
        self._d = {k: v for k, v in data.items() if v} if data else {}
        self._hash = None

    @classmethod
    def _raw(cls, d: dict[Key, mpq]) -> "ExpPoly":
        obj = cls.__new__(cls)
        obj._d = d
        obj._hash = None
        return obj

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[object, int, int]]) -> "ExpPoly":
        """Build from ``(coeff, xpow, freq)`` triples; repeated keys are summed."""
        d: dict[Key, mpq] = {}
        for coeff, p, m in terms:
            if p < 0:
                raise ValueError("xpow must be nonnegative")
            for (pw, ip), v in as_scalar(coeff).items():
                _add(d, (int(p), int(m), pw, ip), v)
        return cls._raw(d)

    @classmethod
    def constant(cls, c) -> "ExpPoly":
        return cls.from_terms([(c, 0, 0)])

    @classmethod
    def monomial(cls, c=1, xpow: int = 0, freq: int = 0) -> "ExpPoly":
        return cls.from_terms([(c, xpow, freq)])

    # -- inspection ---------------------------------------------------------

    def terms(self) -> list[tuple[Scalar, int, int]]:
        """Canonical ``(coeff, xpow, freq)`` list sorted by ``(xpow, freq)``."""
        grouped: dict[tuple[int, int], dict] = {}
        for (p, m, pw, ip), v in self._d.items():
            grouped.setdefault((p, m), {})[(pw, ip)] = v
        return [(Scalar(grouped[k]), k[0], k[1]) for k in sorted(grouped)]

    def raw_items(self) -> Iterator[tuple[Key, mpq]]:
        return iter(self._d.items())

    def is_zero(self) -> bool:
        return not self._d

    def __bool__(self) -> bool:
        return bool(self._d)

    def __len__(self) -> int:
        return len({(k[0], k[1]) for k in self._d})

    @property
    def frequencies(self) -> set[int]:
        return {k[1] for k in self._d}

    @property
    def max_xpow(self) -> int:
        return max((k[0] for k in self._d), default=0)

    # -- ring operations ----------------------------------------------------

    def __add__(self, other: "ExpPoly") -> "ExpPoly":
        if not isinstance(other, ExpPoly):
            other = ExpPoly.constant(other)
        if len(other._d) > len(self._d):
            self, other = other, self
        d = dict(self._d)
        for k, v in other._d.items():
            _add(d, k, v)
        return ExpPoly._raw(d)

    __radd__ = __add__

    def __neg__(self) -> "ExpPoly":
        return ExpPoly._raw({k: -v for k, v in self._d.items()})

    def __sub__(self, other: "ExpPoly") -> "ExpPoly":
        if not isinstance(other, ExpPoly):
            other = ExpPoly.constant(other)
        return self + (-other)

    def __rsub__(self, other) -> "ExpPoly":
        return ExpPoly.constant(other) - self

    def __mul__(self, other) -> "ExpPoly":
        if isinstance(other, ExpPoly):
            return ep_mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, c) -> "ExpPoly":
        c = as_scalar(c)
        if c.is_zero() or not self._d:
            return ZERO_EP
        items = list(c.items())
        if len(items) == 1 and items[0][0] == (0, 0):
            q = items[0][1]
            return ExpPoly._raw({k: v * q for k, v in self._d.items()})
        d: dict[Key, mpq] = {}
        for (p, m, pw, ip), v in self._d.items():
            for (cpw, cip), cv in items:
                _rot(d, p, m, pw + cpw, ip + cip, v * cv)
        return ExpPoly._raw(d)

    def __pow__(self, n: int) -> "ExpPoly":
        out = ONE_EP
        for _ in range(n):
            out = out * self
        return out

    # -- calculus -----------------------------------------------------------

    def derivative(self) -> "ExpPoly":
        d: dict[Key, mpq] = {}
        for (p, m, pw, ip), v in self._d.items():
            if p:
                _add(d, (p - 1, m, pw, ip), v * p)
            if m:
                _rot(d, p, m, pw, ip + 1, v * m)
        return ExpPoly._raw(d)

    def antiderivative(self) -> "ExpPoly":
        return ep_antiderivative(self)

    def affine(self, alpha, beta) -> "ExpPoly":
        return ep_affine(self, alpha, beta)

    # -- evaluation ---------------------------------------------------------

    def at_pi_multiple(self, c) -> Scalar:
        """Exact value at ``x = c*pi`` for rational ``c``.

        Needs ``exp(i*m*c*pi)`` to be a power of ``i``, i.e. ``2*m*c`` integral
        for every frequency ``m`` present.
        """
        c = mpq(c)
        out: dict[tuple[int, int], mpq] = {}
        for (p, m, pw, ip), v in self._d.items():
            val = v * c**p if p else v
            rot = 0
            if m:
                k = 2 * m * c
                if k.denominator != 1:
                    raise ValueError(
                        f"exp({m}i x) at x = {c}*pi is not a power of i; "
                        "breakpoint/frequency combination unsupported"
                    )
                rot = int(k.numerator)
            ipow = (ip + rot) % 4
            if ipow >= 2:
                val = -val
                ipow -= 2
            key = (pw + p, ipow)
            s = out.get(key, 0) + val
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return Scalar._raw(out)

    def __call__(self, x: float) -> complex:
        total = 0j
        for (p, m, pw, ip), v in self._d.items():
            t = float(v) * math.pi**pw * (x**p if p else 1.0)
            if ip:
                t = 1j * t
            if m:
                t = t * cmath.exp(1j * m * x)
            total += t
        return total

    def compiled(self):
        """Arrays ``(coef, xpow, freq)`` for fast vectorized float evaluation."""
        import numpy as np

        acc: dict[tuple[int, int], complex] = {}
        for (p, m, pw, ip), v in self._d.items():
            t = float(v) * math.pi**pw
            acc[(p, m)] = acc.get((p, m), 0j) + (1j * t if ip else t)
        keys = sorted(acc)
        return (
            np.array([acc[k] for k in keys], dtype=complex),
            np.array([k[0] for k in keys], dtype=float),
            np.array([k[1] for k in keys], dtype=float),
        )

    # -- misc ---------------------------------------------------------------

    def conjugate_reflected(self) -> "ExpPoly":
        """Pointwise complex conjugate for real ``x``: conj(c) x^p e^{-imx}."""
        return ExpPoly._raw(
            {(p, -m, pw, ip): (-v if ip else v) for (p, m, pw, ip), v in self._d.items()}
        )

    def is_real_valued(self) -> bool:
        return self == self.conjugate_reflected()

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExpPoly):
            return NotImplemented
        return self._d == other._d

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._d.items()))
        return self._hash

    def __repr__(self) -> str:
        if not self._d:
            return "ExpPoly(0)"
        parts = []
        for c, p, m in self.terms():
            s = f"({c.render()})"
            if p:
                s += f"*x^{p}" if p > 1 else "*x"
            if m:
                s += f"*e^({m}ix)"
            parts.append(s)
        return "ExpPoly(" + " + ".join(parts) + ")"


def ep_mul(f: ExpPoly, g: ExpPoly) -> ExpPoly:
    """Pointwise product."""
    if not f._d or not g._d:
        return ZERO_EP
    d: dict[Key, mpq] = {}
    get = d.get
    gi = list(g._d.items())
    for (p1, m1, w1, i1), v1 in f._d.items():
        for (p2, m2, w2, i2), v2 in gi:
            ip = i1 + i2
            if ip == 2:
                k = (p1 + p2, m1 + m2, w1 + w2, 0)
                d[k] = get(k, 0) - v1 * v2
            else:
                k = (p1 + p2, m1 + m2, w1 + w2, ip)
                d[k] = get(k, 0) + v1 * v2
    return ExpPoly._raw({k: v for k, v in d.items() if v})


def ep_antiderivative(f: ExpPoly) -> ExpPoly:
    """The antiderivative vanishing at ``x = 0``.

    For ``m != 0`` integration by parts gives
    ``int_0^x s^p e^{ims} ds = -sum_j i^{j+1} p!/(p-j)!/m^{j+1} x^{p-j} e^{imx}
    + i^{p+1} p!/m^{p+1}``.
    """
    d: dict[Key, mpq] = {}
    for (p, m, pw, ip), v in f._d.items():
        if m == 0:
            _add(d, (p + 1, 0, pw, ip), v / (p + 1))
            continue
        falling = 1
        for j in range(p + 1):
            if j:
                falling *= p - j + 1
            _rot(d, p - j, m, pw, ip + j + 1, -v * falling / mpq(m) ** (j + 1))
        _rot(d, 0, 0, pw, ip + p + 1, v * math.factorial(p) / mpq(m) ** (p + 1))
    return ExpPoly._raw(d)


def _beta_over_pi(beta) -> mpq:
    b = as_scalar(beta)
    if b.is_zero():
        return mpq(0)
    items = dict(b.items())
    if set(items) != {(1, 0)}:
        raise ValueError("shift must be a real rational multiple of pi")
    return items[(1, 0)]


def ep_affine(f: ExpPoly, alpha, beta) -> ExpPoly:
    """Return ``x -> f(alpha*x + beta)``; ``alpha`` rational, ``beta`` a rational multiple of pi."""
    alpha = mpq(alpha)
    b = _beta_over_pi(beta)
    d: dict[Key, mpq] = {}
    for (p, m, pw, ip), v in f._d.items():
        newm = alpha * m
        if newm.denominator != 1:
            raise ValueError(f"frequency {m} scaled by {alpha} is not an integer")
        newm = int(newm)
        rot = 0
        if m and b:
            k = 2 * m * b
            if k.denominator != 1:
                raise ValueError(
                    f"phase exp(i*{m}*{b}*pi) is not a power of i; unsupported shift"
                )
            rot = int(k.numerator)
        # (alpha x + b pi)^p = sum_j C(p, j) alpha^j x^j (b pi)^(p-j)
        for j in range(p + 1):
            if p - j and not b:
                continue
            c = v * math.comb(p, j) * alpha**j * b ** (p - j)
            if c:
                _rot(d, j, newm, pw + p - j, ip + rot, c)
    return ExpPoly._raw(d)


ZERO_EP = ExpPoly()
ONE_EP = ExpPoly.constant(ONE)
X_EP = ExpPoly.monomial(1, 1, 0)
