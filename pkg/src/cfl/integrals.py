"""Exact basic iterated integrals and moments.

Index order matters: for a word ``(i_1, ..., i_k)`` the letter ``i_1`` is
attached to the *earliest* time ``s_1``. The evaluation runs the recursion

    N_0 = 1,   N_m(x) = int_0^x a_{i_m}(s) N_{m-1}(s) ds,

and returns ``N_k(T)``, which equals the simplex integral over
``0 <= s_1 <= ... <= s_k <= T`` of ``a_{i_k}(s_k) ... a_{i_1}(s_1)``.
"""

from __future__ import annotations

from collections import Counter
from functools import lru_cache, reduce
from typing import Sequence

from .coeffs import CoeffSeq, PiecewiseCoeff, coeff_integral, coeff_tilde
from .exppoly import ONE_EP
from .scalar import ONE, ZERO, Scalar
from .words import MomentSpec, Word

__all__ = ["IteratedIntegrals", "iterated_integral", "moment", "integrate_words"]


class IteratedIntegrals:
    """Prefix-memoized evaluator of ``I_w(a)`` for one coefficient sequence."""

    def __init__(self, a: CoeffSeq):
        self.a = a
        self._N: dict[Word, PiecewiseCoeff | None] = {(): PiecewiseCoeff.single(ONE_EP)}
        self._values: dict[Word, Scalar] = {(): ONE}

    def running(self, w: Word) -> PiecewiseCoeff | None:
        """``N_w`` as a function of the upper limit; ``None`` when identically zero."""
        if w in self._N:
            return self._N[w]
        prev = self.running(w[:-1])
        coeff = self.a.get(w[-1])
        if prev is None or coeff is None:
            out = None
        else:
            out = coeff_tilde(coeff * prev)
            if out.is_zero():
                out = None
        self._N[w] = out
        return out

    def __call__(self, w: Sequence[int]) -> Scalar:
        w = tuple(w)
        if w in self._values:
            return self._values[w]
        if not w:
            return ONE
        prev = self.running(w[:-1])
        coeff = self.a.get(w[-1])
        if prev is None or coeff is None:
            val = ZERO
        elif len(w) == 1:
            val = coeff_integral(coeff)
        else:
            # the last step only needs the value at T, not the whole antiderivative
            val = coeff_integral(coeff * prev)
        self._values[w] = val
        return val


@lru_cache(maxsize=32)
def _evaluator(a: CoeffSeq) -> IteratedIntegrals:
    return IteratedIntegrals(a)


def iterated_integral(w: Sequence[int], a: CoeffSeq) -> Scalar:
    """Exact ``I_w(a)``; the empty word gives 1 and absent coefficients give 0."""
    return _evaluator(a)(w)


def integrate_words(words: Counter | dict, a: CoeffSeq) -> Scalar:
    """``sum_w mult(w) * I_w(a)`` over a multiset of words."""
    ev = _evaluator(a)
    total = ZERO
    for w, k in words.items():
        total = total + ev(w) * k
    return total


def moment(spec: MomentSpec, a: CoeffSeq) -> Scalar:
    """``int_0^T tilde(a_{i_1})^{n_1} ... tilde(a_{i_k})^{n_k} a_{i_{k+1}} ds`` exactly."""
    last = a.get(spec.indices[-1])
    if last is None:
        return ZERO
    factors = [last]
    for i, n in zip(spec.indices, spec.exponents):
        ai = a.get(i)
        if ai is None:
            return ZERO
        t = coeff_tilde(ai)
        factors.extend([t] * n)
    return coeff_integral(reduce(lambda f, g: f * g, factors))
