import random
from fractions import Fraction

import pytest

from cfl.coeffs import CoeffSeq, PiecewiseCoeff
from cfl.exppoly import ExpPoly
from cfl.scalar import I

E = lambda m: ExpPoly.monomial(1, 0, m)  # noqa: E731
COS = (E(1) + E(-1)).scale(Fraction(1, 2))
SIN = (E(1) - E(-1)).scale(-I / 2)
ONE = ExpPoly.constant(1)
X = ExpPoly.monomial(1, 1, 0)


def seq(**entries) -> CoeffSeq:
    """``seq(a1=f, a2=g)`` with ExpPoly or PiecewiseCoeff values."""
    return CoeffSeq({int(k[1:]): v for k, v in entries.items()})


def step(*pieces, cuts=None) -> PiecewiseCoeff:
    cuts = cuts or [Fraction(j, len(pieces)) for j in range(len(pieces) + 1)]
    return PiecewiseCoeff(cuts, pieces)


def composition_condition_data() -> CoeffSeq:
    """a_i = q_i'(sin x) cos x with q_1 = u, q_2 = u^2, q_3 = u^3."""
    return seq(a1=COS, a2=SIN * COS * 2, a3=SIN * SIN * COS * 3)


@pytest.fixture
def rng():
    return random.Random(20261018)


_ACCEPTANCE: list[str] = []


@pytest.fixture
def acceptance_log():
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
