import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from charpolycount.asymptotic import (
    Branch,
    archimedean_constants,
    bernoulli,
    c_t_coefficient,
    completed_zeta,
    ems_constant,
    predict,
    prediction,
    unit_ball_volume,
    zeta,
)
from charpolycount.errors import InvalidInputError
from charpolycount.numberfield import FieldInvariants, NumberField, field_invariants
from charpolycount.orbital import LocalGammaData, OrbitalSource, local_data
from charpolycount.poly import IntPolynomial


@pytest.mark.parametrize("s", range(2, 13))
def test_zeta_against_mpmath(s):
    assert zeta(s) == pytest.approx(float(mpmath.zeta(s)), rel=1e-14)


def test_special_values():
    assert abs(zeta(2) - math.pi**2 / 6) <= 1e-14
    assert abs(math.gamma(0.5) - math.sqrt(math.pi)) <= 1e-14
    assert bernoulli(1) == Fraction(-1, 2) and bernoulli(12) == Fraction(-691, 2730)
    assert completed_zeta(1) == pytest.approx(math.pi / 6, rel=1e-15)
    assert unit_ball_volume(1) == pytest.approx(2.0) and unit_ball_volume(3) == pytest.approx(4 * math.pi / 3)
    with pytest.raises(InvalidInputError):
        zeta(1)


def test_orthogonal_volume():
    # 2^n pi^(n(n+1)/4) / prod Gamma(i/2)
    assert archimedean_constants(1 + 1).orthogonal_volume == pytest.approx(4 * math.pi ** 1.5 / math.sqrt(math.pi))
    with pytest.raises(InvalidInputError):
        archimedean_constants(1)


def test_c_t_examples():
    golden = math.log((1 + math.sqrt(5)) / 2)
    assert c_t_coefficient(2, golden / math.sqrt(5)) == pytest.approx(1.6441, abs=5e-4)
    r13 = math.log((3 + math.sqrt(13)) / 2)
    assert c_t_coefficient(2, r13 / math.sqrt(13)) == pytest.approx(2.533, abs=2e-3)
    assert c_t_coefficient(2, 1.0) == pytest.approx(24 / math.pi, rel=1e-14)
    assert ems_constant(2, 1, golden, 5) == pytest.approx(1.6441, abs=5e-4)
    # h R / sqrt(D) = 1/4 leaves 2^(n-1) w_1 / (4 Lambda(1)) with w_1 = 2
    assert ems_constant(2, 1, 1 / 4, 1) == pytest.approx(6 / math.pi, rel=1e-14)
    with pytest.raises(InvalidInputError):
        c_t_coefficient(2, FieldInvariants(5, 1, (2, 0)))


@given(st.integers(2, 6), st.integers(1, 100), st.floats(1e-3, 1e3), st.floats(1.0, 1e9))
@settings(max_examples=200, deadline=None)
def test_c_t_equals_ems(n, h, R, D):
    assert c_t_coefficient(n, h * R / math.sqrt(D)) == pytest.approx(ems_constant(n, h, R, D), rel=1e-10)


def _golden():
    nf = NumberField(IntPolynomial((1, -3, 1)))
    return field_invariants(nf), local_data(nf)


def test_predict_example_and_homogeneity():
    inv, locs = _golden()
    assert predict(2, inv, locs, Branch.CASE1, 5) == pytest.approx(8.22, abs=5e-3)
    pred = prediction(2, inv, locs)
    assert pred.exponent == 1 and pred.euler_product == 1
    base = pred.at(1.0)
    for T in (3.5, 10.0, 1e6):
        assert pred.at(T) / T**pred.exponent == pytest.approx(base, rel=1e-15)


def test_case2_rejected_over_Q():
    inv, locs = _golden()
    with pytest.raises(InvalidInputError, match="only case"):
        predict(2, inv, locs, "case2", 10)
    v1 = predict(2, inv, locs, "case1", 10)
    v2 = predict(2, inv, locs, "case2", 10, formula_evaluation_mode=True)
    assert v2 == 2 * v1


def test_euler_product_enters_exactly():
    st = NumberField(IntPolynomial((1, -11, 1))).splitting_type(3)
    locs = [LocalGammaData(3, 2, st, 5, OrbitalSource.USER_SUPPLIED)]
    inv = FieldInvariants(13, 9, (2, 0), residue_combination=0.3)
    pred = prediction(2, inv, locs)
    assert pred.euler_product == Fraction(5, 9)
    assert pred.leading == c_t_coefficient(2, 0.3) * (5 / 9)
    case2 = prediction(2, inv, locs, Branch.CASE2, formula_evaluation_mode=True)
    assert case2.leading == c_t_coefficient(2, 0.3) * float(Fraction(5, 9) + 1)


def test_x2_11x_1_prediction():
    nf = NumberField(IntPolynomial((1, -11, 1)))
    pred = prediction(2, field_invariants(nf), local_data(nf))
    assert pred.euler_product == 1
    assert pred.at(1.0) == pytest.approx(2.531, abs=2e-3)
