"""Randomized self-test suites for the algebraic identities.

Each suite draws exact random inputs from a seeded ``random.Random`` and
counts how many checks pass. The same generators back the test-suite.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .coeffs import CoeffSeq, PiecewiseCoeff
from .exppoly import ExpPoly
from .group import concat, inverse
from .integrals import integrate_words, iterated_integral, moment
from .returnmap import (
    numeric_radius,
    return_coeffs_iterated,
    return_coeffs_transport,
    return_map_numeric,
)
from .scalar import Scalar
from .series import series_compose
from .words import moment_shuffle_expand, moment_specs, shuffle, words_up_to

__all__ = [
    "random_scalar",
    "random_exppoly",
    "random_coeff",
    "random_coeffseq",
    "random_zero_mean_coeffseq",
    "SuiteResult",
    "SUITES",
    "run_suite",
]


def random_scalar(rng: random.Random, *, complex_: bool = True) -> Scalar:
    re = Fraction(rng.randint(-3, 3), rng.choice((1, 2)))
    im = Fraction(rng.randint(-3, 3), rng.choice((1, 2))) if complex_ and rng.random() < 0.5 else 0
    if not re and not im:
        re = Fraction(1)
    return Scalar.from_parts(re, im)


def random_exppoly(
    rng: random.Random, *, max_terms: int = 2, max_xpow: int = 1, max_freq: int = 2
) -> ExpPoly:
    terms = []
    for _ in range(rng.randint(1, max_terms)):
        p = 0 if rng.random() < 0.7 else rng.randint(0, max_xpow)
        terms.append((random_scalar(rng), p, rng.randint(-max_freq, max_freq)))
    return ExpPoly.from_terms(terms)


_CUTS = ((Fraction(1, 2),), (Fraction(1, 4),), (Fraction(3, 4),))


def random_coeff(rng: random.Random, *, max_pieces: int = 2, **kw) -> PiecewiseCoeff:
    if max_pieces > 1 and rng.random() < 0.5:
        mid = rng.choice(_CUTS)
        return PiecewiseCoeff((0, *mid, 1), [random_exppoly(rng, **kw) for _ in range(len(mid) + 1)])
    return PiecewiseCoeff.single(random_exppoly(rng, **kw))


def random_coeffseq(
    rng: random.Random, *, max_support: int = 3, max_index: int = 3, **kw
) -> CoeffSeq:
    k = rng.randint(1, max_support)
    idx = rng.sample(range(1, max_index + 1), min(k, max_index))
    return CoeffSeq({i: random_coeff(rng, **kw) for i in idx})


def random_zero_mean_coeffseq(
    rng: random.Random, *, max_support: int = 3, max_index: int = 3
) -> CoeffSeq:
    """Random sequence in ``X_*`` (every coefficient has zero mean).

    Single pieces use nonzero harmonics; two-piece coefficients use even
    harmonics on each half plus a step ``+c, -c`` that cancels exactly.
    """

    def harmonics(freqs):
        n = rng.randint(1, 2)
        return ExpPoly.from_terms((random_scalar(rng), 0, rng.choice(freqs)) for _ in range(n))

    k = rng.randint(1, max_support)
    idx = rng.sample(range(1, max_index + 1), min(k, max_index))
    out = {}
    for i in idx:
        if rng.random() < 0.5:
            c = ExpPoly.constant(random_scalar(rng))
            f, g = harmonics((-2, 2)), harmonics((-2, 2))
            out[i] = PiecewiseCoeff((0, Fraction(1, 2), 1), [f + c, g - c])
        else:
            out[i] = PiecewiseCoeff.single(harmonics((-2, -1, 1, 2)))
    return CoeffSeq(out)


@dataclass
class SuiteResult:
    name: str
    passed: int = 0
    failed: int = 0
    failures: list[str] = field(default_factory=list)

    def record(self, ok: bool, label: Callable[[], str]) -> None:
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if len(self.failures) < 10:
                self.failures.append(label())

    @property
    def ok(self) -> bool:
        return self.failed == 0


def suite_shuffle(rng, max_order: int, trials: int) -> SuiteResult:
    res = SuiteResult("shuffle")
    for _ in range(trials):
        a = random_coeffseq(rng)
        words = words_up_to(max_order - 1, range(1, 4))
        for u in words:
            for v in words:
                if sum(u) + sum(v) > max_order:
                    continue
                lhs = iterated_integral(u, a) * iterated_integral(v, a)
                rhs = integrate_words(shuffle(u, v), a)
                res.record(lhs == rhs, lambda: f"{u} x {v} on {a!r}")
    return res


def suite_moments(rng, max_order: int, trials: int) -> SuiteResult:
    res = SuiteResult("moments")
    for _ in range(trials):
        a = random_coeffseq(rng)
        for spec in moment_specs(min(max_order, 5), a.support):
            ok = moment(spec, a) == integrate_words(moment_shuffle_expand(spec), a)
            res.record(ok, lambda: f"{spec} on {a!r}")
    return res


def suite_pipelines(rng, max_order: int, trials: int) -> SuiteResult:
    res = SuiteResult("pipelines")
    for _ in range(trials):
        a = random_coeffseq(rng)
        ok = return_coeffs_iterated(a, max_order) == return_coeffs_transport(a, max_order)
        res.record(ok, lambda: repr(a))
    return res


def suite_group(rng, max_order: int, trials: int) -> SuiteResult:
    res = SuiteResult("group")
    N = min(max_order, 6)
    for _ in range(trials):
        a, b = random_coeffseq(rng), random_coeffseq(rng)
        lhs = return_coeffs_iterated(concat(a, b), N)
        rhs = series_compose(return_coeffs_iterated(b, N), return_coeffs_iterated(a, N))
        res.record(lhs == rhs, lambda: f"composition law on {a!r}, {b!r}")
        res.record(
            return_coeffs_iterated(concat(a, inverse(a)), N).is_identity(),
            lambda: f"inverse law on {a!r}",
        )
    return res


def suite_antipode(rng, max_order: int, trials: int) -> SuiteResult:
    res = SuiteResult("antipode")
    for _ in range(trials):
        a = random_coeffseq(rng)
        ai = inverse(a)
        for w in words_up_to(max_order, a.support):
            if len(w) > 4:
                continue
            ok = iterated_integral(w, ai) == iterated_integral(w[::-1], a) * (-1) ** len(w)
            res.record(ok, lambda: f"{w} on {a!r}")
    return res


def suite_chen(rng, max_order: int, trials: int) -> SuiteResult:
    res = SuiteResult("chen")
    for _ in range(trials):
        a, b = random_coeffseq(rng), random_coeffseq(rng)
        ab = concat(a, b)
        for w in words_up_to(max_order, sorted(set(a.support) | set(b.support))):
            if len(w) > 5:
                continue
            rhs = sum(
                (iterated_integral(w[:k], a) * iterated_integral(w[k:], b) for k in range(len(w) + 1)),
                Scalar(),
            )
            res.record(iterated_integral(w, ab) == rhs, lambda: f"{w} on {a!r}, {b!r}")
    return res


def suite_characters(rng, max_order: int, trials: int) -> SuiteResult:
    res = SuiteResult("characters")
    for _ in range(trials):
        a, b = random_zero_mean_coeffseq(rng), random_zero_mean_coeffseq(rng)
        ab = concat(a, b)
        for spec in moment_specs(min(max_order, 4), sorted(set(a.support) | set(b.support))):
            ok = moment(spec, ab) == moment(spec, a) + moment(spec, b)
            res.record(ok, lambda: f"{spec} on {a!r}, {b!r}")
    return res


def suite_numeric(rng, max_order: int, trials: int) -> SuiteResult:
    res = SuiteResult("numeric")
    for _ in range(trials):
        a = random_coeffseq(rng)
        series = return_coeffs_iterated(a, max_order)
        r = numeric_radius(a) / 4 * rng.uniform(0.1, 1.0)
        err = abs(series(r) - return_map_numeric(a, r))
        res.record(err <= 1e-8, lambda: f"|err| = {err:.3e} at r = {r:.3e} on {a!r}")
    return res


SUITES: dict[str, Callable[[random.Random, int, int], SuiteResult]] = {
    "shuffle": suite_shuffle,
    "moments": suite_moments,
    "pipelines": suite_pipelines,
    "group": suite_group,
    "antipode": suite_antipode,
    "chen": suite_chen,
    "characters": suite_characters,
    "numeric": suite_numeric,
}


def run_suite(name: str, *, max_order: int = 6, trials: int = 20, seed: int = 0) -> list[SuiteResult]:
    names = list(SUITES) if name == "all" else [name]
    out = []
    for n in names:
        if n not in SUITES:
            raise KeyError(f"unknown suite {n!r}; choose from {', '.join(SUITES)} or all")
        out.append(SUITES[n](random.Random(f"{seed}:{n}"), max_order, trials))
    return out
