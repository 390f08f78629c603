from fractions import Fraction

import pytest

from cfl.coeffs import PiecewiseCoeff, coeff_integral
from cfl.exppoly import ExpPoly
from cfl.group import concat, equivalent_up_to, in_Xstar, inverse
from cfl.integrals import iterated_integral, moment
from cfl.returnmap import return_coeffs_iterated
from cfl.scalar import PI, Scalar
from cfl.series import series_compose
from cfl.verify import random_coeffseq, random_zero_mean_coeffseq
from cfl.words import moment_specs, words_up_to

from conftest import COS, E, composition_condition_data, seq, step

HALF = Fraction(1, 2)


def test_concat_constant():
    ab = concat(seq(a1=ExpPoly.constant(1)), seq(a1=ExpPoly.constant(1)))
    assert ab[1] == PiecewiseCoeff.single(ExpPoly.constant(2))
    assert coeff_integral(ab[1]) == 4 * PI


def test_concat_substitutes_double_time():
    ab = concat(seq(a1=COS), seq())
    expected = PiecewiseCoeff([0, HALF, 1], [(E(2) + E(-2)), ExpPoly()])
    assert ab[1] == expected


def test_concat_zero_is_right_unit_up_to_integrals(rng):
    a = random_coeffseq(rng)
    a0 = concat(a, seq())
    for w in words_up_to(6, a.support):
        if len(w) <= 4:
            assert iterated_integral(w, a0) == iterated_integral(w, a)


def test_concat_support_is_union():
    ab = concat(seq(a1=COS), seq(a3=COS))
    assert ab.support == [1, 3]


def test_inverse_examples():
    assert inverse(seq(a1=ExpPoly.constant(1))) == seq(a1=ExpPoly.constant(-1))
    assert inverse(seq(a1=E(1))) == seq(a1=-E(-1))


def test_inverse_reflects_breakpoints():
    a = seq(a1=step(ExpPoly.constant(1), ExpPoly.constant(2), ExpPoly.constant(3), cuts=[0, Fraction(1, 4), HALF, 1]))
    ai = inverse(a)
    assert ai[1].cuts == (0, HALF, Fraction(3, 4), 1)
    assert ai[1].pieces == tuple(ExpPoly.constant(-c) for c in (3, 2, 1))


def test_inverse_is_involution(rng):
    for _ in range(20):
        a = random_coeffseq(rng)
        assert inverse(inverse(a)) == a


def test_depth_limit():
    a = seq(a1=COS)
    for _ in range(4):
        a = concat(a, seq(a1=ExpPoly.constant(1)))
    assert a.depth == 4
    with pytest.raises(ValueError, match="depth"):
        concat(a, a, max_depth=4)


def test_composition_law(rng):
    for _ in range(6):
        a, b = random_coeffseq(rng), random_coeffseq(rng)
        lhs = return_coeffs_iterated(concat(a, b), 5)
        assert lhs == series_compose(return_coeffs_iterated(b, 5), return_coeffs_iterated(a, 5))


def test_inverse_law(rng):
    for _ in range(6):
        a = random_coeffseq(rng)
        assert return_coeffs_iterated(concat(a, inverse(a)), 6).is_identity()


def test_chen_deconcatenation(rng):
    for _ in range(4):
        a, b = random_coeffseq(rng), random_coeffseq(rng)
        ab = concat(a, b)
        for w in words_up_to(5, [1, 2, 3]):
            rhs = sum(
                (iterated_integral(w[:k], a) * iterated_integral(w[k:], b) for k in range(len(w) + 1)),
                Scalar(),
            )
            assert iterated_integral(w, ab) == rhs


def test_reversal_antipode(rng):
    for _ in range(6):
        a = random_coeffseq(rng)
        ai = inverse(a)
        for w in words_up_to(6, a.support):
            if len(w) <= 4:
                assert iterated_integral(w, ai) == (-1) ** len(w) * iterated_integral(w[::-1], a)


def test_moment_additivity_on_xstar(rng):
    for _ in range(4):
        a, b = random_zero_mean_coeffseq(rng), random_zero_mean_coeffseq(rng)
        ab = concat(a, b)
        for spec in moment_specs(4, sorted(set(a.support) | set(b.support))):
            assert moment(spec, ab) == moment(spec, a) + moment(spec, b)


def test_moment_additivity_needs_zero_mean():
    a = b = seq(a1=ExpPoly.constant(1))
    from cfl.words import MomentSpec

    spec = MomentSpec((1, 1), (1,))
    assert moment(spec, concat(a, b)) != moment(spec, a) + moment(spec, b)


def test_equivalent_to_self(rng):
    for _ in range(4):
        a = random_coeffseq(rng)
        assert equivalent_up_to(a, a, 6)


def test_equivalence_witness():
    eq = equivalent_up_to(seq(a2=ExpPoly.constant(1)), seq(), 4)
    assert not eq
    assert eq.witness == (2,)
    assert eq.value == 2 * PI


def test_universal_center_factor_is_invisible(rng):
    u = composition_condition_data()
    a = random_coeffseq(rng, max_pieces=1)
    assert equivalent_up_to(a, concat(a, u), 5)


def test_in_xstar_examples():
    assert in_Xstar(seq(a1=COS))
    assert not in_Xstar(seq(a1=ExpPoly.constant(1)))
    assert in_Xstar(seq(a1=E(1), a2=E(-2)))
