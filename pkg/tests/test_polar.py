import math
from fractions import Fraction

import pytest

from cfl.coeffs import CoeffSeq
from cfl.exppoly import ExpPoly
from cfl.polar import (
    AlphaWeight,
    PlanarField,
    check_alpha_homogeneous,
    param_count,
    planar_return,
    polar_reduce,
    trig_restrict,
)
from cfl.returnmap import center_check, numeric_radius, return_coeffs_iterated, return_map_numeric
from cfl.scalar import I, PI

from conftest import COS, E, SIN

HAMILTONIAN = PlanarField(G={(2, 0): 1})
FOCUS = PlanarField(F={(3, 0): 1, (1, 2): 1}, G={(2, 1): 1, (0, 3): 1})


# -- trig_restrict ---------------------------------------------------------------


def test_restrict_x_squared():
    assert trig_restrict({(2, 0): 1}) == (E(2) + E(-2)).scale(Fraction(1, 4)) + ExpPoly.constant(Fraction(1, 2))


def test_restrict_xy():
    assert trig_restrict({(1, 1): 1}) == (E(2) - E(-2)).scale(1 / (4 * I))


def test_restrict_x_cubed_binomial():
    # ((e + 1/e)/2)^3 = (e^3 + 3e + 3/e + e^-3)/8
    expected = ExpPoly.from_terms([(Fraction(1, 8), 0, 3), (Fraction(3, 8), 0, 1), (Fraction(3, 8), 0, -1), (Fraction(1, 8), 0, -3)])
    got = trig_restrict({(3, 0): 1})
    assert got == expected
    assert got.frequencies == {-3, -1, 1, 3}


def test_restrict_matches_numeric_evaluation():
    h = {(3, 1): 2, (1, 3): Fraction(-1, 3), (0, 4): 5}
    f = trig_restrict(h)
    for phi in (0.1, 1.3, 2.9, 5.0):
        direct = sum(float(c) * math.cos(phi) ** p * math.sin(phi) ** q for (p, q), c in h.items())
        assert f(phi) == pytest.approx(direct, abs=1e-13)


def test_restrict_rejects_non_homogeneous():
    with pytest.raises(ValueError, match="homogeneous"):
        trig_restrict({(2, 0): 1, (1, 2): 1})


# -- polar_reduce ------------------------------------------------------------------


def test_zero_field_reduces_to_zero():
    assert polar_reduce(PlanarField(), 5).is_zero()


def test_cubic_focus_field():
    a = polar_reduce(FOCUS, 5)
    assert a == CoeffSeq({2: ExpPoly.constant(1)})


def test_hamiltonian_coefficients():
    N = 5
    a = polar_reduce(HAMILTONIAN, N)
    for i in range(1, N + 1):
        # independent construction: (-1)^{i-1} sin(phi) cos(phi)^{3i-1}
        expected = (SIN * COS ** (3 * i - 1)).scale((-1) ** (i - 1))
        assert a[i].pieces == (expected,)


def test_hamiltonian_first_orders_by_hand():
    a = polar_reduce(HAMILTONIAN, 2)
    # p = r^2 sin cos^2, q = r cos^3: a_1 = sin cos^2, a_2 = -sin cos^5
    assert a[1].pieces[0] == SIN * COS * COS
    assert a[2].pieces[0] == -(SIN * COS**5)


def test_reduced_hamiltonian_is_universal_center():
    v = center_check(polar_reduce(HAMILTONIAN, 5), 5)
    assert v.is_universal_up_to_N and v.is_center_up_to_N


def test_realness_for_real_fields():
    fld = PlanarField(F={(2, 0): 1, (1, 1): Fraction(-2, 3), (0, 3): 2}, G={(0, 2): Fraction(1, 2), (2, 1): -1})
    a = polar_reduce(fld, 5)
    for i in a.support:
        assert a[i].pieces[0].is_real_valued()


def test_frequency_bound():
    fld = PlanarField(F={(2, 0): 1, (1, 2): 3}, G={(0, 2): -1, (3, 0): Fraction(1, 2)})
    d = fld.degree
    a = polar_reduce(fld, 6)
    for i in a.support:
        assert max(abs(m) for m in a[i].pieces[0].frequencies) <= (i + 1) * d


def test_complex_coefficients_allowed():
    fld = PlanarField(G={(2, 0): I})
    a = polar_reduce(fld, 3)
    assert not a[1].pieces[0].is_real_valued()


def test_field_validation():
    with pytest.raises(ValueError):
        PlanarField(F={(1, 0): 1})
    with pytest.raises(ValueError):
        PlanarField(G={(0, 0): 1})


# -- planar numerics ----------------------------------------------------------------


def test_hamiltonian_orbit_closes():
    x0 = 0.05
    ret = planar_return(HAMILTONIAN, x0)
    assert abs(ret.gap) <= 1e-6
    a = polar_reduce(HAMILTONIAN, 5)
    r = min(numeric_radius(a) / 2, x0)
    assert abs(return_map_numeric(a, r) - r) <= 1e-8


def test_focus_spirals_outward():
    x0 = 0.05
    ret = planar_return(FOCUS, x0)
    c2 = return_coeffs_iterated(polar_reduce(FOCUS, 3), 3).c(2)
    assert c2 == 2 * PI
    assert ret.gap > 0
    # r' = r^3 exactly: after angle 2 pi, r = x0 (1 - 4 pi x0^2)^(-1/2)
    assert ret.x_return == pytest.approx(x0 / math.sqrt(1 - 4 * math.pi * x0**2), rel=1e-9)


# -- parameters and weights -------------------------------------------------------------


@pytest.mark.parametrize("d, k", [(2, 6), (3, 14), (4, 24)])
def test_param_count(d, k):
    assert param_count(d) == k
    # cross-check: monomials of degree 2..d in F and G
    assert 2 * sum(j + 1 for j in range(2, d + 1)) == k


def test_param_count_rejects_small_degree():
    with pytest.raises(ValueError):
        param_count(1)


def test_alpha_homogeneous_examples():
    assert check_alpha_homogeneous({(1, 1): 1}, (1, 1)) == (True, 2)
    assert check_alpha_homogeneous({(2, 0): 1, (0, 1): 1}, AlphaWeight((1, 2))) == (True, 2)
    assert check_alpha_homogeneous({(1,): 1, (2,): 1}, (1,)) == (False, None)


def test_alpha_arity_mismatch():
    with pytest.raises(ValueError):
        check_alpha_homogeneous({(1, 1): 1}, (1,))


def test_alpha_weights_positive():
    with pytest.raises(ValueError):
        AlphaWeight((0, 1))
