"""Words over the positive integers and their shuffle combinatorics."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

__all__ = [
    "Word",
    "MomentSpec",
    "order",
    "compositions",
    "words_up_to",
    "shuffle",
    "moment_shuffle_expand",
]

Word = tuple[int, ...]


def order(w: Sequence[int]) -> int:
    return sum(w)


@lru_cache(maxsize=None)
def _compositions(n: int) -> tuple[Word, ...]:
    out = []
    # a cut after position j of 1..n-1 starts a new part; bit order gives lexicographic output
    for cuts in product((True, False), repeat=n - 1):
        word, run = [], 1
        for cut in cuts:
            if cut:
                word.append(run)
                run = 1
            else:
                run += 1
        word.append(run)
        out.append(tuple(word))
    return tuple(sorted(out))


def compositions(n: int) -> list[Word]:
    """All ``2**(n-1)`` ordered compositions of ``n`` in lexicographic order."""
    if n < 1:
        raise ValueError("compositions are defined for n >= 1")
    return list(_compositions(n))


def words_up_to(max_order: int, alphabet: Iterable[int] | None = None) -> list[Word]:
    """Nonempty words of order <= ``max_order``, sorted by order then lexicographically.

    With ``alphabet`` given, only words whose letters all lie in it are returned.
    """
    allowed = None if alphabet is None else set(alphabet)
    out = []
    for n in range(1, max_order + 1):
        for w in _compositions(n):
            if allowed is None or allowed.issuperset(w):
                out.append(w)
    return out


@lru_cache(maxsize=4096)
def _shuffle(u: Word, v: Word) -> tuple[tuple[Word, int], ...]:
    if not u:
        return ((v, 1),)
    if not v:
        return ((u, 1),)
    acc: Counter = Counter()
    for w, k in _shuffle(u[:-1], v):
        acc[w + (u[-1],)] += k
    for w, k in _shuffle(u, v[:-1]):
        acc[w + (v[-1],)] += k
    return tuple(sorted(acc.items()))


def shuffle(u: Sequence[int], v: Sequence[int]) -> Counter:
    """Shuffle product as a multiset ``{word: multiplicity}``.

    Multiplicities sum to ``C(len(u)+len(v), len(u))``.
    """
    return Counter(dict(_shuffle(tuple(u), tuple(v))))


@dataclass(frozen=True)
class MomentSpec:
    """Indices ``i_1..i_{k+1}`` and positive exponents ``n_1..n_k`` of a moment.

    The moment is ``int_0^T tilde(a_{i_1})^{n_1} ... tilde(a_{i_k})^{n_k} a_{i_{k+1}}``.
    """

    indices: tuple[int, ...]
    exponents: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(int(i) for i in self.indices))
        object.__setattr__(self, "exponents", tuple(int(n) for n in self.exponents))
        if len(self.indices) != len(self.exponents) + 1:
            raise ValueError("a moment needs one more index than exponents")
        if any(i < 1 for i in self.indices) or any(n < 1 for n in self.exponents):
            raise ValueError("moment indices and exponents must be positive")

    @property
    def degree(self) -> int:
        """Number of coefficient factors, ``n_1 + ... + n_k + 1``."""
        return sum(self.exponents) + 1

    def __str__(self) -> str:
        idx = ",".join(map(str, self.indices))
        if not self.exponents:
            return f"m[{idx}]"
        return f"m^[{','.join(map(str, self.exponents))}]_[{idx}]"


def moment_shuffle_expand(spec: MomentSpec) -> Counter:
    """Words ``w`` with multiplicities such that ``moment(spec, a) == sum I_w(a)``.

    ``tilde(a_i)**n`` is ``n!`` times the length-``n`` iterated integral of ``a_i``,
    so the prefix is the full shuffle of the single letters and the last letter
    is ``i_{k+1}``.
    """
    acc: Counter = Counter({(): 1})
    for i, n in zip(spec.indices, spec.exponents):
        for _ in range(n):
            nxt: Counter = Counter()
            for w, k in acc.items():
                for s, m in _shuffle(w, (i,)):
                    nxt[s] += k * m
            acc = nxt
    last = spec.indices[-1]
    return Counter({w + (last,): k for w, k in acc.items()})


def moment_specs(max_degree: int, alphabet: Iterable[int]) -> list[MomentSpec]:
    """All moment specs of degree <= ``max_degree`` over ``alphabet``.

    Repeated leading indices are allowed, matching the general definition.
    """
    letters = sorted(set(alphabet))
    out = []

    def exps(k: int, budget: int):
        if k == 0:
            yield ()
            return
        for n in range(1, budget - (k - 1) + 1):
            for rest in exps(k - 1, budget - n):
                yield (n,) + rest

    for k in range(0, max_degree):
        for ex in exps(k, max_degree - 1):
            for idx in product(letters, repeat=k + 1):
                out.append(MomentSpec(idx, ex))
    return out
