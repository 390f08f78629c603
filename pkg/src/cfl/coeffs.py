"""Piecewise exponential-polynomial coefficients on ``[0, 2*pi]``.

Breakpoints are stored as dyadic fractions of the period ``T = 2*pi`` (so the
cut ``1/2`` sits at ``x = pi``). Piece ``j`` covers the half-open interval
``(t_{j-1}, t_j]``; each piece is an :class:`ExpPoly` in the global variable
``x``, which keeps every operation a plain substitution.
"""

from __future__ import annotations

import bisect
from typing import Iterable, Mapping

import numpy as np
from gmpy2 import mpq

from .exppoly import ZERO_EP, ExpPoly, ep_antiderivative
from .scalar import PI, ZERO, Scalar

__all__ = [
    "PERIOD",
    "MAX_DEPTH",
    "PiecewiseCoeff",
    "CoeffSeq",
    "coeff_tilde",
    "coeff_integral",
    "coeff_eval",
]

PERIOD = 2 * PI
TWO_PI = 2 * np.pi
MAX_DEPTH = 16


def _is_dyadic(q: mpq) -> bool:
    den = int(q.denominator)
    return den & (den - 1) == 0


def _check_cuts(cuts: tuple[mpq, ...]) -> None:
    if len(cuts) < 2 or cuts[0] != 0 or cuts[-1] != 1:
        raise ValueError("breakpoints must start at 0 and end at T")
    for lo, hi in zip(cuts, cuts[1:]):
        if not lo < hi:
            raise ValueError("breakpoints must be strictly increasing (no empty pieces)")
    for c in cuts:
        if not _is_dyadic(c):
            raise ValueError(f"breakpoint {c}*T is not a dyadic multiple of T")
        if c.denominator > 2**MAX_DEPTH:
            raise ValueError(f"breakpoint {c}*T exceeds the dyadic depth limit {MAX_DEPTH}")


class PiecewiseCoeff:
    """One coefficient ``a_i``: an ExpPoly per interval of a dyadic lattice."""

    __slots__ = ("cuts", "pieces", "_hash")

    def __init__(self, cuts: Iterable, pieces: Iterable[ExpPoly]):
        cuts = tuple(mpq(c) for c in cuts)
        pieces = tuple(pieces)
        _check_cuts(cuts)
        if len(pieces) != len(cuts) - 1:
            raise ValueError("need exactly one piece per interval")
        # merge neighbours carrying the same function so equal coefficients compare equal
        mc, mp = [cuts[0]], []
        for hi, f in zip(cuts[1:], pieces):
            if mp and mp[-1] == f:
                mc[-1] = hi
            else:
                mp.append(f)
                mc.append(hi)
        self.cuts = tuple(mc)
        self.pieces = tuple(mp)
        self._hash = None

    @classmethod
    def single(cls, f: ExpPoly) -> "PiecewiseCoeff":
        return cls((0, 1), (f,))

    @classmethod
    def zero(cls) -> "PiecewiseCoeff":
        return cls.single(ZERO_EP)

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.pieces)

    def intervals(self):
        return zip(self.cuts, self.cuts[1:], self.pieces)

    # -- lattice handling ---------------------------------------------------

    def refine(self, cuts: tuple[mpq, ...]) -> tuple[ExpPoly, ...]:
        """Pieces restated on a finer lattice containing ``self.cuts``."""
        out = []
        j = 0
        for hi in cuts[1:]:
            while self.cuts[j + 1] < hi:
                j += 1
            out.append(self.pieces[j])
        return tuple(out)

    def _binary(self, other: "PiecewiseCoeff", op) -> "PiecewiseCoeff":
        if self.cuts == other.cuts:
            return PiecewiseCoeff(self.cuts, [op(f, g) for f, g in zip(self.pieces, other.pieces)])
        cuts = merge_cuts(self.cuts, other.cuts)
        return PiecewiseCoeff(
            cuts, [op(f, g) for f, g in zip(self.refine(cuts), other.refine(cuts))]
        )

    def __add__(self, other: "PiecewiseCoeff") -> "PiecewiseCoeff":
        return self._binary(other, lambda f, g: f + g)

    def __sub__(self, other: "PiecewiseCoeff") -> "PiecewiseCoeff":
        return self._binary(other, lambda f, g: f - g)

    def __neg__(self) -> "PiecewiseCoeff":
        return PiecewiseCoeff(self.cuts, [-f for f in self.pieces])

    def __mul__(self, other) -> "PiecewiseCoeff":
        if isinstance(other, PiecewiseCoeff):
            return self._binary(other, lambda f, g: f * g)
        return PiecewiseCoeff(self.cuts, [f.scale(other) for f in self.pieces])

    __rmul__ = __mul__

    def map_pieces(self, fn) -> "PiecewiseCoeff":
        return PiecewiseCoeff(self.cuts, [fn(f) for f in self.pieces])

    # -- exact values -------------------------------------------------------

    def value_at(self, cut) -> Scalar:
        """Exact value at the lattice point ``cut*T`` (left piece, or the first piece at 0)."""
        cut = mpq(cut)
        j = max(bisect.bisect_left(self.cuts, cut) - 1, 0)
        return self.pieces[j].at_pi_multiple(2 * cut)

    def tilde(self) -> "PiecewiseCoeff":
        return coeff_tilde(self)

    def integral(self) -> Scalar:
        return coeff_integral(self)

    def __call__(self, x: float) -> complex:
        return coeff_eval(self, x)

    def sup_bound(self) -> float:
        """Upper bound on ``sup |a(x)|`` from the triangle inequality, term by term."""
        best = 0.0
        for lo, hi, f in self.intervals():
            xmax = float(hi) * TWO_PI
            coef, xp, _ = f.compiled()
            best = max(best, float(np.sum(np.abs(coef) * xmax**xp)))
        return best

    def __eq__(self, other) -> bool:
        if not isinstance(other, PiecewiseCoeff):
            return NotImplemented
        return self.cuts == other.cuts and self.pieces == other.pieces

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.cuts, self.pieces))
        return self._hash

    def __repr__(self) -> str:
        if len(self.pieces) == 1:
            return f"PiecewiseCoeff({self.pieces[0]!r})"
        body = ", ".join(f"({lo},{hi}]T: {f!r}" for lo, hi, f in self.intervals())
        return f"PiecewiseCoeff({body})"


def merge_cuts(*lattices: tuple[mpq, ...]) -> tuple[mpq, ...]:
    return tuple(sorted(set().union(*lattices)))


def coeff_tilde(a: PiecewiseCoeff) -> PiecewiseCoeff:
    """Cumulative antiderivative ``x -> int_0^x a``, continuous across breakpoints."""
    out = []
    carry = ZERO
    for lo, hi, f in a.intervals():
        F = ep_antiderivative(f)
        if lo:
            shift = carry - F.at_pi_multiple(2 * lo)
            if shift:
                F = F + ExpPoly.constant(shift)
        out.append(F)
        carry = F.at_pi_multiple(2 * hi)
    return PiecewiseCoeff(a.cuts, out)


def coeff_integral(a: PiecewiseCoeff) -> Scalar:
    """``int_0^T a(s) ds`` exactly."""
    total = ZERO
    for lo, hi, f in a.intervals():
        F = ep_antiderivative(f)
        total = total + F.at_pi_multiple(2 * hi)
        if lo:
            total = total - F.at_pi_multiple(2 * lo)
    return total


def coeff_eval(a: PiecewiseCoeff, x: float) -> complex:
    """Numeric value at ``x`` in ``[0, 2*pi]``; breakpoints take the left piece."""
    if not 0.0 <= x <= TWO_PI * (1 + 1e-15):
        raise ValueError(f"x = {x} outside [0, 2*pi]")
    cuts = [float(c) * TWO_PI for c in a.cuts]
    j = max(bisect.bisect_left(cuts, x) - 1, 0)
    return a.pieces[min(j, len(a.pieces) - 1)](x)


class CoeffSeq:
    """Finitely supported coefficient sequence ``(a_1, a_2, ...)`` on ``[0, 2*pi]``.

    Zero coefficients are dropped, so ``support`` lists the nonzero indices.
    Construction checks that every exponential in every piece evaluates to a
    power of ``i`` at each lattice point inside that piece, which is what keeps
    all iterated integrals inside ``Q(i)[pi]``.
    """

    __slots__ = ("entries", "_hash")

    def __init__(self, entries: Mapping[int, PiecewiseCoeff | ExpPoly] | None = None):
        clean: dict[int, PiecewiseCoeff] = {}
        for i, a in sorted((entries or {}).items()):
            if int(i) < 1:
                raise ValueError(f"coefficient index must be >= 1, got {i}")
            if isinstance(a, ExpPoly):
                a = PiecewiseCoeff.single(a)
            if not a.is_zero():
                clean[int(i)] = a
        self.entries = clean
        self._hash = None
        self._validate()

    def _validate(self) -> None:
        lattice = self.lattice
        for i, a in self.entries.items():
            for lo, hi, f in a.intervals():
                freqs = f.frequencies - {0}
                if not freqs:
                    continue
                for c in lattice:
                    if lo <= c <= hi:
                        for m in freqs:
                            if (4 * m * c).denominator != 1:
                                raise ValueError(
                                    f"a_{i}: frequency {m} at breakpoint {c}*T is not "
                                    "representable exactly (need 4*m*t/T integral)"
                                )

    @property
    def support(self) -> list[int]:
        return list(self.entries)

    @property
    def lattice(self) -> tuple[mpq, ...]:
        return merge_cuts((mpq(0), mpq(1)), *(a.cuts for a in self.entries.values()))

    def __getitem__(self, i: int) -> PiecewiseCoeff:
        return self.entries.get(i) or PiecewiseCoeff.zero()

    def get(self, i: int) -> PiecewiseCoeff | None:
        return self.entries.get(i)

    def is_zero(self) -> bool:
        return not self.entries

    @property
    def depth(self) -> int:
        return max((int(c.denominator).bit_length() - 1 for c in self.lattice), default=0)

    @property
    def piece_count(self) -> int:
        return len(self.lattice) - 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, CoeffSeq):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self.entries.items()))
        return self._hash

    def __repr__(self) -> str:
        inner = ", ".join(f"a{i}={a!r}" for i, a in self.entries.items())
        return f"CoeffSeq({inner})"
