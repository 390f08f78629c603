"""Concatenation and inversion of coefficient sequences, and checks built on them.

``concat(a, b)`` runs ``a`` on the first half of ``[0, T]`` and ``b`` on the
second half, both at double speed; ``inverse(a)`` runs ``a`` backwards with a
sign flip. On the level of return maps ``P(a*b) = P(b) o P(a)``.
"""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from .coeffs import MAX_DEPTH, CoeffSeq, PiecewiseCoeff, coeff_integral
from .exppoly import ZERO_EP, ep_affine
from .integrals import _evaluator
from .scalar import PI, Scalar
from .words import Word, words_up_to

__all__ = ["concat", "inverse", "equivalent_up_to", "Equivalence", "in_Xstar"]

HALF = mpq(1, 2)


def _first_half(a: PiecewiseCoeff | None) -> tuple[list, list]:
    if a is None:
        return [mpq(0), HALF], [ZERO_EP]
    cuts = [c / 2 for c in a.cuts]
    return cuts, [ep_affine(f, 2, 0).scale(2) for f in a.pieces]


def _second_half(b: PiecewiseCoeff | None) -> tuple[list, list]:
    if b is None:
        return [HALF, mpq(1)], [ZERO_EP]
    cuts = [(1 + c) / 2 for c in b.cuts]
    return cuts, [ep_affine(f, 2, -2 * PI).scale(2) for f in b.pieces]


def concat(a: CoeffSeq, b: CoeffSeq, *, max_depth: int = MAX_DEPTH) -> CoeffSeq:
    """Per index: ``2 a_i(2t)`` on ``(0, T/2]``, ``2 b_i(2t - T)`` on ``(T/2, T]``."""
    depth = max(a.depth, b.depth) + 1
    if depth > max_depth:
        raise ValueError(f"concatenation would exceed the dyadic depth limit ({depth} > {max_depth})")
    out = {}
    for i in sorted(set(a.support) | set(b.support)):
        c1, p1 = _first_half(a.get(i))
        c2, p2 = _second_half(b.get(i))
        out[i] = PiecewiseCoeff(c1 + c2[1:], p1 + p2)
    return CoeffSeq(out)


def inverse(a: CoeffSeq) -> CoeffSeq:
    """Per index: ``-a_i(T - t)``, with the breakpoint lattice reflected."""
    out = {}
    for i, ai in a.entries.items():
        cuts = [1 - c for c in reversed(ai.cuts)]
        pieces = [-ep_affine(f, -1, 2 * PI) for f in reversed(ai.pieces)]
        out[i] = PiecewiseCoeff(cuts, pieces)
    return CoeffSeq(out)


@dataclass(frozen=True)
class Equivalence:
    equivalent: bool
    order: int
    witness: Word | None = None
    value: Scalar | None = None

    def __bool__(self) -> bool:
        return self.equivalent


def equivalent_up_to(a: CoeffSeq, b: CoeffSeq, N: int) -> Equivalence:
    """Check ``I_w(a * b^{-1}) = 0`` for every word of order ``<= N``.

    Returns the first failing word (by order, then lexicographically) as a witness.
    """
    g = concat(a, inverse(b))
    ev = _evaluator(g)
    for w in words_up_to(N, g.support):
        val = ev(w)
        if val:
            return Equivalence(False, N, w, val)
    return Equivalence(True, N)


def in_Xstar(a: CoeffSeq) -> bool:
    """True iff every coefficient has zero mean over the period."""
    return all(coeff_integral(ai).is_zero() for ai in a.entries.values())
