"""Coxeter layer: normal forms, arithmetic, enumeration, Bruhat order.

The independent oracle here is the geometric reflection representation
over an exact ordered field: s acts on the root basis by
s(a_t) = a_t + 2cos(pi/m_st) a_s (t != s), s(a_s) = -a_s.  That
representation is faithful for every Coxeter system, so group closure
counts and product identities can be checked without trusting the word
rewriting under test.
"""

import doctest
import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import soergel.coxeter
from soergel.coxeter import (
    INF,
    CapExceeded,
    CoxeterMatrix,
    CoxeterSystem,
    format_word,
    make_system,
    parse_word,
    preset,
)
from soergel.scalars import ScalarField


# -- exact reflection-representation oracle -------------------------------


def _rep_matrices(matrix: CoxeterMatrix):
    field = ScalarField.for_bond_labels(matrix.bond_labels())
    n = matrix.rank
    zero, one = field.zero, field.one
    mats = []
    for s in range(n):
        rows = []
        for i in range(n):
            if i != s:
                rows.append(tuple(one if j == i else zero for j in range(n)))
            else:
                row = []
                for j in range(n):
                    if j == s:
                        row.append(field.neg(one))
                    else:
                        m = matrix.entry(s, j)
                        row.append(
                            zero if m == INF else field.two_cos_pi_over(int(m))
                        )
                rows.append(tuple(row))
        mats.append(tuple(rows))
    return field, mats


def _mat_mul(field, a, b):
    n = len(a)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = field.zero
            for k in range(n):
                acc = field.add(acc, field.mul(a[i][k], b[k][j]))
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def _rep_of_word(field, mats, word, n):
    acc = tuple(
        tuple(field.one if i == j else field.zero for j in range(n))
        for i in range(n)
    )
    for s in word:
        acc = _mat_mul(field, acc, mats[s])
    return acc


@pytest.mark.parametrize(
    "name,order",
    [("A2", 6), ("A3", 24), ("B3", 48), ("I2:7", 14), ("H3", 120), ("I2:8", 16)],
)
def test_group_order_against_matrix_closure(name, order):
    matrix = preset(name)
    field, mats = _rep_matrices(matrix)
    n = matrix.rank
    identity = _rep_of_word(field, mats, (), n)
    seen = {identity}
    frontier = [identity]
    while frontier:
        fresh = []
        for g in frontier:
            for s in range(n):
                h = _mat_mul(field, g, mats[s])
                if h not in seen:
                    seen.add(h)
                    fresh.append(h)
        frontier = fresh
    assert len(seen) == order
    assert len(make_system(name).enumerate()) == order


@pytest.mark.parametrize("name", ["A3", "B3", "H3", "I2:5"])
def test_multiply_agrees_with_matrix_representation(name):
    W = make_system(name)
    field, mats = _rep_matrices(W.matrix)
    n = W.rank
    els = W.enumerate()
    # deterministic skip keeps this near-exhaustive for the small groups
    step = max(1, len(els) // 16)
    sample = els[::step]
    for x in sample:
        for y in sample:
            lhs = _rep_of_word(field, mats, x.word + y.word, n)
            rhs = _rep_of_word(field, mats, (x * y).word, n)
            assert lhs == rhs


# -- stated examples -------------------------------------------------------


def test_normal_form_examples():
    W = make_system("A2")
    assert W.element("11").is_identity  # s^2 = e
    assert W.element("121") == W.element("212")
    assert W.element("121").word == (0, 1, 0)  # ShortLex-minimal pick
    I5 = make_system("I2:5")
    assert I5.element("12121") == I5.element("21212")


def test_multiply_examples():
    W = make_system("A2")
    s, t = W.simple(0), W.simple(1)
    assert (s * t).word == (0, 1)
    assert W.multiply(W.element("12"), W.element("21")).is_identity
    for x in W.enumerate():
        assert x * W.identity == x
        assert x * x.inverse() == W.identity


def test_descent_examples():
    W = make_system("A2")
    assert W.descents(W.identity, "right") == frozenset()
    assert W.descents(W.element("121"), "right") == frozenset({0, 1})
    assert W.descents(W.element("12"), "right") == frozenset({1})
    assert W.descents(W.element("12"), "left") == frozenset({0})


def test_enumerate_ordering_and_level_profile():
    W = make_system("A3")
    els = W.enumerate()
    keys = [(x.length, x.word) for x in els]
    assert keys == sorted(keys)
    by_len = [sum(1 for x in els if x.length == k) for k in range(7)]
    assert by_len == [1, 3, 5, 6, 5, 3, 1]  # Poincare counts of A3
    B = make_system("B3")
    counts = [sum(1 for x in B.enumerate() if x.length == k) for k in range(10)]
    assert counts == [1, 3, 5, 7, 8, 8, 7, 5, 3, 1]


def test_enumerate_infinite_requires_bound():
    W = make_system("I2:inf")
    with pytest.raises(CapExceeded):
        W.enumerate()
    assert [str(g) for g in W.enumerate(2)] == ["e", "1", "2", "12", "21"]
    assert len(W.enumerate(3)) == 7


# -- Bruhat order ----------------------------------------------------------


def _bruhat_subword(W: CoxeterSystem, x, y) -> bool:
    # subword criterion on the fixed reduced word of y, brute force
    if x.length > y.length:
        return False
    for pos in itertools.combinations(range(y.length), x.length):
        if W.normal_form(y.word[i] for i in pos) == x:
            return True
    return False


@pytest.mark.parametrize("name", ["A2", "I2:5", "A3"])
def test_bruhat_matches_subword_oracle_exhaustively(name):
    W = make_system(name)
    els = W.enumerate()
    for x in els:
        for y in els:
            assert W.bruhat_leq(x, y) == _bruhat_subword(W, x, y), (x, y)


def test_bruhat_examples_and_axioms():
    W = make_system("A2")
    st_, ts = W.element("12"), W.element("21")
    for x in W.enumerate():
        assert W.bruhat_leq(W.identity, x)
    assert W.bruhat_leq(W.element("1"), st_)
    assert W.bruhat_leq(W.element("2"), st_)
    assert not W.bruhat_leq(st_, ts)
    A3 = make_system("A3")
    els = A3.enumerate()
    for x in els:
        for y in els:
            if A3.bruhat_leq(x, y):
                assert x.length <= y.length
                if A3.bruhat_leq(y, x):
                    assert x == y


# -- randomized structural properties --------------------------------------

_SYSTEMS = {name: make_system(name) for name in ["A2", "A3", "B3", "I2:7"]}


@st.composite
def _system_and_words(draw, count=1):
    name = draw(st.sampled_from(sorted(_SYSTEMS)))
    W = _SYSTEMS[name]
    words = [
        tuple(draw(st.lists(st.integers(0, W.rank - 1), max_size=12)))
        for _ in range(count)
    ]
    return W, words


@given(_system_and_words())
def test_length_changes_by_one_under_right_multiplication(sw):
    W, (word,) = sw
    x = W.normal_form(word)
    for s in range(W.rank):
        y = x * W.simple(s)
        assert abs(y.length - x.length) == 1


@given(_system_and_words(count=3))
def test_associativity_and_inverse_antihomomorphism(sw):
    W, (a, b, c) = sw
    x, y, z = (W.normal_form(w) for w in (a, b, c))
    assert (x * y) * z == x * (y * z)
    assert (x * y).inverse() == y.inverse() * x.inverse()
    assert x.inverse().inverse() == x


@given(_system_and_words(), st.data())
def test_normal_form_invariant_under_braid_and_nil_moves(sw, data):
    W, (word,) = sw
    reference = W.normal_form(word)
    current = word
    for _ in range(6):
        moves = [("nil", p, s) for p in range(len(current) + 1) for s in range(W.rank)]
        moves += [("braid", i, 0) for i in range(len(W._braid_neighbors(current)))]
        kind, a, b = data.draw(st.sampled_from(moves))
        if kind == "nil":
            current = current[:a] + (b, b) + current[a:]
        else:
            current = W._braid_neighbors(current)[a]
        assert W.normal_form(current) == reference


@given(_system_and_words())
def test_descents_match_definition(sw):
    W, (word,) = sw
    x = W.normal_form(word)
    for s in range(W.rank):
        assert (s in W.descents(x, "right")) == ((x * W.simple(s)).length < x.length)
        assert (s in W.descents(x, "left")) == ((W.simple(s) * x).length < x.length)


# -- serialization, presets, validation -------------------------------------


def test_matrix_json_round_trip():
    m = preset("B3")
    assert CoxeterMatrix.from_json(m.to_json()) == m
    free = CoxeterMatrix([[1, INF], [INF, 1]])
    blob = free.to_json()
    assert blob["m"] == [[1, 0], [0, 1]]
    assert CoxeterMatrix.from_json(blob) == free
    # null and "inf" spellings are accepted on input
    for spelled in (None, "inf"):
        data = {"version": 1, "rank": 2, "m": [[1, spelled], [spelled, 1]]}
        assert CoxeterMatrix.from_json(data) == free


def test_matrix_validation_errors():
    with pytest.raises(ValueError):
        CoxeterMatrix([[1, 2], [3, 1]])  # asymmetric
    with pytest.raises(ValueError):
        CoxeterMatrix([[2]])  # bad diagonal
    with pytest.raises(ValueError):
        CoxeterMatrix([[1, 1], [1, 1]])  # off-diagonal below 2
    with pytest.raises(ValueError):
        CoxeterMatrix.from_json({"version": 2, "rank": 1, "m": [[1]]})
    with pytest.raises(ValueError):
        CoxeterMatrix.from_json({"version": 1, "rank": 3, "m": [[1]]})


def test_presets_and_aliases():
    assert preset("B2") == preset("I2:4")
    assert preset("G2") == preset("I2:6")
    assert preset("I2:3") == preset("A2")
    assert preset("I2:inf").has_infinite_bond()
    for bad in ("Z9", "I2:1", "I2:x"):
        with pytest.raises(ValueError):
            preset(bad)


def test_word_parsing_and_errors():
    assert parse_word("1 2 1", 2) == (0, 1, 0)
    assert parse_word("e", 2) == ()
    assert format_word(()) == "e"
    assert format_word((0, 1, 0)) == "121"
    with pytest.raises(ValueError):
        parse_word("13", 2)
    with pytest.raises(ValueError):
        parse_word("1x", 2)
    W = make_system("A2")
    with pytest.raises(ValueError):
        W.normal_form((0, 5))
    other = make_system("B3")
    with pytest.raises(ValueError):
        W.multiply(W.identity, other.identity)


def test_doctests():
    failures, _ = doctest.testmod(soergel.coxeter)
    assert failures == 0
