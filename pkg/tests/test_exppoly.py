import cmath
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from cfl.coeffs import CoeffSeq, PiecewiseCoeff, coeff_eval, coeff_integral, coeff_tilde
from cfl.exppoly import ExpPoly, ep_affine, ep_antiderivative, ep_mul
from cfl.scalar import I, ONE, PI, ZERO, Scalar, parse_scalar
from cfl.verify import random_coeff

from conftest import COS, E, SIN, X, step

rationals = st.builds(Fraction, st.integers(-5, 5), st.integers(1, 6))
scalars = st.builds(
    lambda re, im, pw: Scalar.from_parts(re, im, pw), rationals, rationals, st.integers(0, 3)
)
terms = st.tuples(scalars, st.integers(0, 3), st.integers(-3, 3))
exppolys = st.lists(terms, max_size=4).map(ExpPoly.from_terms)


# -- Scalar -------------------------------------------------------------------


def test_scalar_arithmetic_is_exact():
    assert (PI + 1) * (PI - 1) == PI * PI - 1
    assert I * I == -ONE
    assert (2 * PI * I) / (2 * I) == PI
    assert ZERO.is_zero() and not PI.is_zero()


@given(st.lists(scalars, max_size=4))
def test_scalar_render_round_trip(parts):
    s = sum(parts, ZERO)
    assert parse_scalar(s.render()) == s


def test_scalar_render_format():
    s = 2 * PI * PI + I * PI
    assert s.render() == "2*pi^2 + (0+1i)*pi"
    assert parse_scalar("2*pi^2 + (0+1i)*pi") == s
    assert Scalar.from_parts(Fraction(-3, 2)).render() == "-3/2"
    assert (2 * PI * PI).decimal() == format(2 * math.pi**2, ".17g")


def test_float_view_uses_full_precision_pi():
    assert complex(2 * PI * PI) == 2 * math.pi**2


# -- ep_mul -------------------------------------------------------------------


def test_mul_single_terms():
    assert ep_mul(X, E(1)) == ExpPoly.monomial(1, 1, 1)


def test_mul_difference_of_squares():
    assert ep_mul(E(1) + E(-1), E(1) - E(-1)) == E(2) - E(-2)


def test_mul_by_zero():
    assert ep_mul(COS, ExpPoly()).is_zero()


# -- ep_antiderivative --------------------------------------------------------


def test_antiderivative_of_one():
    assert ep_antiderivative(ExpPoly.constant(1)) == X


def test_antiderivative_of_exponential():
    expected = (E(1) - ExpPoly.constant(1)).scale(-I)
    assert ep_antiderivative(E(1)) == expected


def test_antiderivative_x_exp_matches_integration_by_parts():
    f = ExpPoly.monomial(1, 1, 1)
    F = ep_antiderivative(f)
    # oracle: -i x e^{ix} + (e^{ix} - 1), checked by differentiation and F(0) = 0
    expected = ExpPoly.monomial(-I, 1, 1) + E(1) - ExpPoly.constant(1)
    assert F == expected
    assert F.derivative() == f
    assert F.at_pi_multiple(0) == 0


@given(exppolys)
@settings(max_examples=60, deadline=None)
def test_derivative_inverts_antiderivative(f):
    F = ep_antiderivative(f)
    assert F.derivative() == f
    assert F.at_pi_multiple(0).is_zero()


# -- ep_affine ----------------------------------------------------------------


def test_affine_examples():
    assert ep_affine(E(1), 2, 0) == E(2)
    assert ep_affine(E(1), -1, 2 * PI) == E(-1)
    assert ep_affine(X, 2, -2 * PI) == X.scale(2) - ExpPoly.constant(2 * PI)


def test_affine_rejects_fractional_frequency():
    with pytest.raises(ValueError):
        ep_affine(E(1), Fraction(1, 2), 0)


def test_affine_rejects_non_quarter_phase():
    with pytest.raises(ValueError):
        ep_affine(E(1), 1, PI / 4)


@given(
    exppolys,
    st.sampled_from([1, -1, 2, -2]),
    st.sampled_from([1, -1, 2, -2]),
    st.sampled_from([Fraction(k, 2) for k in range(-4, 5)]),
    st.sampled_from([Fraction(k, 2) for k in range(-4, 5)]),
)
@settings(max_examples=60, deadline=None)
def test_affine_composition(f, a1, a2, b1, b2):
    lhs = ep_affine(ep_affine(f, a1, b1 * PI), a2, b2 * PI)
    rhs = ep_affine(f, a1 * a2, (a1 * b2 + b1) * PI)
    assert lhs == rhs


@given(exppolys, st.floats(0, 6.28))
@settings(max_examples=40)
def test_float_evaluation_matches_terms(f, x):
    direct = sum(
        complex(c) * x**p * cmath.exp(1j * m * x) for c, p, m in f.terms()
    )
    assert f(x) == pytest.approx(direct, rel=1e-12, abs=1e-12)


# -- piecewise coefficients ---------------------------------------------------


def test_tilde_examples():
    assert coeff_tilde(PiecewiseCoeff.single(COS)) == PiecewiseCoeff.single(SIN)
    assert coeff_tilde(PiecewiseCoeff.single(ExpPoly.constant(1))) == PiecewiseCoeff.single(X)
    sq = step(ExpPoly.constant(1), ExpPoly.constant(-1))
    expected = step(X, ExpPoly.constant(2 * PI) - X)
    assert coeff_tilde(sq) == expected


def test_tilde_is_continuous_and_vanishes_at_zero(rng):
    for _ in range(30):
        a = random_coeff(rng)
        t = coeff_tilde(a)
        assert t.pieces[0].at_pi_multiple(0).is_zero()
        for j in range(1, len(t.cuts) - 1):
            c = t.cuts[j]
            assert t.pieces[j - 1].at_pi_multiple(2 * c) == t.pieces[j].at_pi_multiple(2 * c)


def test_integral_examples():
    assert coeff_integral(PiecewiseCoeff.single(E(1))).is_zero()
    assert coeff_integral(PiecewiseCoeff.single(ExpPoly.constant(1))) == 2 * PI
    assert coeff_integral(PiecewiseCoeff.single(X)) == 2 * PI * PI


def test_eval_examples():
    assert coeff_eval(PiecewiseCoeff.single(COS), math.pi) == pytest.approx(-1)
    sq = step(ExpPoly.constant(1), ExpPoly.constant(-1))
    assert coeff_eval(sq, math.pi) == 1
    z = coeff_eval(PiecewiseCoeff.single(ExpPoly.monomial(1, 1, 1)), math.pi / 2)
    assert z == pytest.approx(complex(0, math.pi / 2), abs=1e-15)


def test_eval_rejects_points_outside_period():
    with pytest.raises(ValueError):
        coeff_eval(PiecewiseCoeff.single(COS), -0.1)
    with pytest.raises(ValueError):
        coeff_eval(PiecewiseCoeff.single(COS), 7.0)


def test_exact_antiderivative_matches_quadrature():
    rng = random.Random(7)
    for _ in range(100):
        a = random_coeff(rng, max_terms=3, max_xpow=2, max_freq=3)
        t = coeff_tilde(a)
        x = rng.uniform(0.0, 2 * math.pi)
        pts = [float(c) * 2 * math.pi for c in a.cuts[1:-1] if float(c) * 2 * math.pi < x]
        re = quad(lambda s: coeff_eval(a, s).real, 0, x, points=pts or None, epsabs=1e-13, epsrel=1e-12, limit=200)[0]
        im = quad(lambda s: coeff_eval(a, s).imag, 0, x, points=pts or None, epsabs=1e-13, epsrel=1e-12, limit=200)[0]
        exact = coeff_eval(t, x)
        assert abs(exact - complex(re, im)) <= 1e-10 * max(abs(exact), 1.0)


# -- lattice invariants -------------------------------------------------------


def test_breakpoints_must_be_dyadic():
    with pytest.raises(ValueError, match="dyadic"):
        PiecewiseCoeff([0, Fraction(1, 3), 1], [COS, SIN])


def test_zero_length_pieces_are_forbidden():
    with pytest.raises(ValueError):
        PiecewiseCoeff([0, Fraction(1, 2), Fraction(1, 2), 1], [COS, SIN, COS])


def test_unrepresentable_phase_at_breakpoint_is_rejected():
    with pytest.raises(ValueError, match="representable"):
        CoeffSeq({1: PiecewiseCoeff([0, Fraction(1, 8), 1], [E(1), E(1) + E(2)])})


def test_identical_neighbours_merge():
    a = PiecewiseCoeff([0, Fraction(1, 2), 1], [COS, COS])
    assert a == PiecewiseCoeff.single(COS)
