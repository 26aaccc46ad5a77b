"""Certified modular linear algebra against directly-checkable systems.

Every expected dimension here is forced by construction (explicit
parametrized kernels, full-rank chains), so the oracle is the build of
the system itself, not the solver.
"""

import random

from soergel import exactlin, modsolve
from soergel.scalars import Rat, ScalarField


def test_explicit_kernel_dimension_and_membership():
    F = ScalarField.for_conductor(1)
    random.seed(7)
    n = 60
    sols = [[Rat(random.randint(-9, 9), random.randint(1, 5)) for _ in range(n)] for _ in range(3)]
    # x_i + sum_k sols[k][i] * x_{57+k} = 0: kernel is exactly 3-dimensional,
    # parametrized by the last three coordinates
    rows = []
    for i in range(57):
        row = {i: F.one}
        for k in range(3):
            row[57 + k] = F.from_rat(sols[k][i])
        rows.append(row)
    out = modsolve.field_nullspace(F, rows, n)
    assert len(out) == 3
    for v in out:
        assert modsolve._verify(F, rows, v)


def test_extension_field_kernel_has_field_dimension():
    F5 = ScalarField.for_conductor(5)
    g = F5.generator
    out = modsolve.field_nullspace(F5, [{0: F5.one, 1: F5.neg(g)}], 2)
    # over the field this line is one-dimensional even though restriction
    # of scalars sees two rational solutions
    assert len(out) == 1
    v = out[0]
    assert F5.eq(v[1], F5.mul(F5.inv(g), v[0]))


def test_unique_solve_over_extension():
    F5 = ScalarField.for_conductor(5)
    g = F5.generator
    rows = [{0: F5.one}, {0: g, 1: F5.one}]
    sol = modsolve.field_solve_unique(F5, rows, 2, [g, F5.from_rat(Rat(3))])
    assert F5.eq(sol[0], g)
    assert F5.eq(sol[1], F5.sub(F5.from_rat(Rat(3)), F5.mul(g, g)))


def test_unique_solve_rejects_inconsistent_and_underdetermined():
    F = ScalarField.for_conductor(1)
    one = F.one
    try:
        modsolve.field_solve_unique(F, [{0: one}, {0: one}], 1, [one, F.neg(one)])
        assert False, "expected no-solution error"
    except ValueError:
        pass
    try:
        modsolve.field_solve_unique(F, [{0: one}], 2, [one])
        assert False, "expected underdetermined error"
    except ValueError:
        pass


def test_sketch_path_zero_kernel():
    # 40 copies of a full-rank chain with per-row random ratios: far more
    # rows than columns, so the sketching branch is exercised
    F = ScalarField.for_conductor(1)
    random.seed(11)
    n = 40
    rows = []
    for _rep in range(40):
        for i in range(n - 1):
            w = Rat(random.randint(1, 9))
            rows.append({i: F.one, i + 1: F.from_rat(-w)})
    rows.append({0: F.one})
    assert modsolve.field_nullspace(F, rows, n) == []


def test_sketch_path_geometric_chain():
    # duplicated consistent chain x_i = 2 x_{i+1}: kernel dim 1 with
    # genuinely large reconstructed numerators
    F = ScalarField.for_conductor(1)
    n = 40
    base = [{i: F.one, i + 1: F.from_rat(Rat(-2))} for i in range(n - 1)]
    rows = [dict(r) for r in base * 40]
    out = modsolve.field_nullspace(F, rows, n)
    assert len(out) == 1
    v = out[0]
    for i in range(n - 1):
        assert F.eq(v[i], F.scale(Rat(2), v[i + 1]))


def test_empty_system_is_full_space():
    F = ScalarField.for_conductor(1)
    out = modsolve.field_nullspace(F, [], 4)
    assert len(out) == 4
    assert exactlin.rank(F, [list(v) for v in out]) == 4
