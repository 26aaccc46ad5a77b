"""Laurent polynomials in v: arithmetic, bar, quantum-number calculus."""

import doctest

import pytest
from hypothesis import given
from hypothesis import strategies as st

import soergel.laurent
from soergel.laurent import (
    Laurent,
    is_unimodal,
    parse,
    quantum,
    quantum_decompose,
)

laurents = st.builds(
    Laurent,
    st.dictionaries(st.integers(-6, 6), st.integers(-9, 9), max_size=6),
)


def test_doctests():
    failures, _ = doctest.testmod(soergel.laurent)
    assert failures == 0


def test_parse_format_round_trip_examples():
    f = parse("v^-2 + 2 + v^2")
    assert f.coeff(-2) == 1 and f.coeff(0) == 2 and f.coeff(2) == 1
    assert parse(f.format()) == f
    assert parse("-v + 3*v^4 - 2v^-3") == Laurent({1: -1, 4: 3, -3: -2})
    assert parse("0") == Laurent({})
    assert Laurent({}).format() == "0"
    for bad in ("v^", "2 +", "v**3", "w"):
        with pytest.raises(ValueError):
            parse(bad)


@given(laurents)
def test_parse_format_round_trip(f):
    assert parse(f.format()) == f


@given(laurents, laurents, laurents)
def test_ring_axioms(f, g, h):
    assert f + g == g + f
    assert f * g == g * f
    assert (f + g) * h == f * h + g * h
    assert (f * g) * h == f * (g * h)
    assert f - f == Laurent({})
    assert f * Laurent({0: 1}) == f


@given(laurents, laurents)
def test_bar_is_a_ring_involution(f, g):
    assert f.bar().bar() == f
    assert (f * g).bar() == f.bar() * g.bar()
    assert (f + g).bar() == f.bar() + g.bar()


@given(laurents, st.integers(-4, 4))
def test_shift_and_valuation(f, k):
    g = f.shift(k)
    assert g == f * Laurent({k: 1})
    if f:
        assert g.degree == f.degree + k
        assert g.valuation == f.valuation + k
    assert f.at_one() == sum(f.coeffs.values())


def test_quantum_numbers():
    assert quantum(0) == Laurent({})
    assert quantum(1) == Laurent({0: 1})
    assert quantum(2) == parse("v^-1 + v")
    assert quantum(3) == parse("v^-2 + 1 + v^2")
    for m in range(1, 8):
        assert quantum(m).bar() == quantum(m)
        assert quantum(m).at_one() == m
        # Clebsch-Gordan step: [m][2] = [m-1] + [m+1]
        assert quantum(m) * quantum(2) == quantum(m - 1) + quantum(m + 1)


@given(
    st.dictionaries(st.integers(1, 7), st.integers(0, 5), max_size=4),
)
def test_quantum_decompose_reconstructs_nonnegative_combinations(mults):
    f = Laurent({})
    for m, c in mults.items():
        f = f + quantum(m) * c
    dec = quantum_decompose(f)
    assert dec.reconstruct() == f
    assert dec.unimodal
    assert is_unimodal(f)
    for m, c in mults.items():
        assert dec.multiplicities.get(m, 0) == c
    parities = {m % 2 for m, c in mults.items() if c}
    assert dec.mixed_parity == (len(parities) == 2)


def test_non_unimodal_witness():
    f = parse("v^-2 + v^2")
    dec = quantum_decompose(f)
    assert dec.multiplicities == {1: -1, 3: 1}
    assert not dec.unimodal
    assert not is_unimodal(f)
    assert is_unimodal(Laurent({}))
    assert is_unimodal(quantum(1))


def test_quantum_decompose_rejects_asymmetric_input():
    with pytest.raises(ValueError):
        quantum_decompose(parse("v"))


@given(laurents)
def test_quantum_decompose_round_trips_every_symmetric_poly(f):
    sym = f + f.bar()
    dec = quantum_decompose(sym)
    assert dec.reconstruct() == sym


def test_json_round_trip():
    f = parse("v^-2 + 2 + v^2")
    blob = f.to_json()
    assert blob == {"coeffs": {"-2": 1, "0": 2, "2": 1}}
    assert Laurent.from_json(blob) == f
