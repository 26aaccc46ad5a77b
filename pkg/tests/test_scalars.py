"""Exact ordered-field arithmetic: construction, ring axioms, signs.

Floating point (via math.cos) is the independent oracle for the real
embedding: every exact sign or value claim is cross-checked against a
double-precision approximation with a comfortable error margin.
"""

import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from soergel.scalars import Rat, ScalarField


def _approx(field: ScalarField, a: tuple, bits: int = 80) -> float:
    lo, hi = field._root_lo, field._root_hi
    for _ in range(bits):
        lo, hi = field._bisect(lo, hi)
    u = (Fraction(lo.numerator, lo.denominator) + Fraction(hi.numerator, hi.denominator)) / 2
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * u + Fraction(c.numerator, c.denominator)
    return float(acc)


def test_field_selection_rule():
    # labels 2 and 3 cost nothing; a single hard label is its own conductor
    assert ScalarField.for_bond_labels(set()).degree == 1
    assert ScalarField.for_bond_labels({2, 3}).degree == 1
    assert ScalarField.for_bond_labels({3, 5}).conductor == 5
    assert ScalarField.for_bond_labels({4}).conductor == 4
    assert ScalarField.for_bond_labels({4, 5}).conductor == 20
    assert ScalarField.for_bond_labels({7, 3, 2}).conductor == 7


@pytest.mark.parametrize(
    "N,degree",
    [(4, 2), (5, 2), (6, 2), (7, 3), (8, 4), (12, 4), (20, 8)],
)
def test_generator_is_two_cos_pi_over_conductor(N, degree):
    field = ScalarField.for_conductor(N)
    assert field.degree == degree
    u = field.generator
    assert abs(_approx(field, u) - 2 * math.cos(math.pi / N)) < 1e-12


def test_two_cos_values_inside_a_composite_field():
    field = ScalarField.for_conductor(20)
    for m in (2, 3, 4, 5, 10, 20):
        got = field.two_cos_pi_over(m)
        assert abs(_approx(field, got) - 2 * math.cos(math.pi / m)) < 1e-12
    with pytest.raises(ValueError):
        field.two_cos_pi_over(7)  # 7 does not divide 20


def test_rational_fast_paths():
    field = ScalarField.for_conductor(5)
    two = field.from_int(2)
    assert field.is_rational(two) and field.as_rat(two) == 2
    assert field.two_cos_pi_over(2) == field.zero
    assert field.two_cos_pi_over(3) == field.one
    half = field.from_rat(Rat(1, 2))
    assert field.as_rat(field.add(half, half)) == 1


_FIELDS = [ScalarField.for_conductor(N) for N in (1, 4, 5, 7, 12)]


@st.composite
def _field_and_elements(draw, count=1):
    field = draw(st.sampled_from(_FIELDS))
    coeff = st.integers(-9, 9)
    els = [
        tuple(Rat(draw(coeff), draw(st.integers(1, 4))) for _ in range(field.degree))
        for _ in range(count)
    ]
    return field, els


@given(_field_and_elements(count=3))
def test_ring_axioms(fe):
    field, (a, b, c) = fe
    assert field.add(a, b) == field.add(b, a)
    assert field.mul(a, b) == field.mul(b, a)
    assert field.mul(a, field.add(b, c)) == field.add(field.mul(a, b), field.mul(a, c))
    assert field.mul(field.mul(a, b), c) == field.mul(a, field.mul(b, c))
    assert field.sub(a, a) == field.zero
    assert field.mul(a, field.one) == a


@given(_field_and_elements())
def test_inverse_round_trip(fe):
    field, (a,) = fe
    if field.is_zero(a):
        with pytest.raises(ZeroDivisionError):
            field.inv(a)
    else:
        assert field.mul(a, field.inv(a)) == field.one


@given(_field_and_elements())
def test_sign_matches_float_embedding(fe):
    field, (a,) = fe
    x = _approx(field, a)
    got = field.sign(a)
    if abs(x) > 1e-9:  # the float oracle is only trustworthy away from 0
        assert got == (1 if x > 0 else -1)
    else:
        assert field.is_zero(a) == (got == 0)


def test_sign_on_tight_differences():
    field = ScalarField.for_conductor(4)
    root2 = field.generator
    # 1393/985 and 1414/1000 straddle sqrt(2) very closely
    assert field.sign(field.sub(root2, field.from_rat(Rat(1393, 985)))) == 1
    assert field.sign(field.sub(root2, field.from_rat(Rat(1414, 1000)))) == 1
    assert field.sign(field.sub(root2, field.from_rat(Rat(141422, 100000)))) == -1
    assert field.cmp(field.mul(root2, root2), field.from_int(2)) == 0


def test_format_is_loss_free_enough_to_eyeball():
    field = ScalarField.for_conductor(5)
    u = field.generator
    text = field.format(field.add(u, field.from_rat(Rat(-1, 2))))
    assert "u" in text and "1/2" in text
