"""Dense exact linear algebra: solves, kernels, congruence signatures.

numpy's floating eigenvalue routine serves as the independent oracle
for signatures on integer matrices, where eigenvalues of random small
matrices are comfortably separated from zero.
"""

import random

import numpy as np
import pytest

from soergel import exactlin
from soergel.scalars import Rat, ScalarField

Q = ScalarField.for_conductor(1)
Q2 = ScalarField.for_conductor(4)


def _lift(field, rows):
    return [[field.from_rat(Rat(x)) for x in row] for row in rows]


def test_solve_and_inverse_known_case():
    a = _lift(Q, [[2, 1], [1, 1]])
    b = [Q.from_int(3), Q.from_int(2)]
    x = exactlin.solve(Q, a, b)
    assert x == [Q.from_int(1), Q.from_int(1)]
    inv = exactlin.inverse(Q, a)
    assert exactlin.matmul(Q, a, inv) == exactlin.identity(Q, 2)
    singular = _lift(Q, [[1, 2], [2, 4]])
    assert exactlin.solve(Q, singular, b) is None
    with pytest.raises(ZeroDivisionError):
        exactlin.inverse(Q, singular)


def test_rank_and_nullspace():
    a = _lift(Q, [[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    assert exactlin.rank(Q, a) == 2
    basis = exactlin.nullspace(Q, a)
    assert len(basis) == 1
    vec = basis[0]
    prod = exactlin.matmul(Q, a, [[c] for c in vec])
    assert all(entry == Q.zero for row in prod for entry in row)


def test_signature_known_values():
    diag = _lift(Q, [[2, 0, 0], [0, -3, 0], [0, 0, 0]])
    assert exactlin.signature(Q, diag) == (1, 1, 1)
    hollow = _lift(Q, [[0, 1], [1, 0]])
    assert exactlin.signature(Q, hollow) == (1, 1, 0)
    assert exactlin.signature(Q, _lift(Q, [[0]])) == (0, 0, 1)


def test_signature_matches_numpy_on_random_integer_matrices():
    rng = random.Random(11)
    for _ in range(40):
        n = rng.randrange(1, 6)
        raw = [[rng.randrange(-5, 6) for _ in range(n)] for _ in range(n)]
        sym = [[raw[i][j] + raw[j][i] for j in range(n)] for i in range(n)]
        eig = np.linalg.eigvalsh(np.array(sym, dtype=float))
        if min(abs(e) for e in eig) < 1e-8 and any(abs(e) > 1e-8 for e in eig):
            continue  # float oracle can't certify near-singular spectra
        want = (
            int(sum(e > 1e-8 for e in eig)),
            int(sum(e < -1e-8 for e in eig)),
            int(sum(abs(e) <= 1e-8 for e in eig)),
        )
        assert exactlin.signature(Q, _lift(Q, sym)) == want


def test_signature_is_a_congruence_invariant_over_a_quadratic_field():
    rng = random.Random(23)
    root2 = Q2.generator

    def rand_elt():
        return Q2.add(
            Q2.from_int(rng.randrange(-3, 4)),
            Q2.scale(Rat(rng.randrange(-2, 3)), root2),
        )

    for _ in range(20):
        n = rng.randrange(1, 5)
        raw = [[rand_elt() for _ in range(n)] for _ in range(n)]
        sym = [
            [Q2.add(raw[i][j], raw[j][i]) for j in range(n)] for i in range(n)
        ]
        while True:
            p = [[rand_elt() for _ in range(n)] for _ in range(n)]
            if exactlin.rank(Q2, p) == n:
                break
        congruent = exactlin.matmul(
            Q2, exactlin.transpose(p), exactlin.matmul(Q2, sym, p)
        )
        assert exactlin.signature(Q2, congruent) == exactlin.signature(Q2, sym)


def test_rref_shape_and_pivots():
    a = _lift(Q, [[0, 1, 2], [0, 2, 4]])
    reduced, pivots = exactlin.rref(Q, a)
    assert pivots == [1]
    assert reduced[0][1] == Q.one and reduced[0][2] == Q.from_int(2)
