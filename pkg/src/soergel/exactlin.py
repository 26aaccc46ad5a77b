"""Dense exact linear algebra over a :class:`~soergel.scalars.ScalarField`.

Matrices are lists of lists of field elements (coefficient tuples).  Sizes in
this project stay in the low hundreds, so classical Gaussian elimination with
exact arithmetic is the right tool; no pivoting heuristics beyond "first
nonzero" are needed because there is no rounding to fight.

Signatures of symmetric matrices are computed by congruence diagonalization
(symmetric row/column elimination), which is Sylvester-stable: the returned
``(positive, negative, zero)`` inertia is basis-independent.
"""

from __future__ import annotations

from typing import Sequence

from .scalars import ScalarField

__all__ = [
    "rref",
    "rank",
    "nullspace",
    "solve",
    "inverse",
    "signature",
    "matmul",
    "mat_sub",
    "identity",
    "transpose",
]


def matmul(field: ScalarField, a: Sequence[Sequence[tuple]], b: Sequence[Sequence[tuple]]):
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    zero = field.zero
    out = [[zero] * m for _ in range(n)]
    for i in range(n):
        arow = a[i]
        orow = out[i]
        for t in range(k):
            x = arow[t]
            if x == zero:
                continue
            brow = b[t]
            for j in range(m):
                y = brow[j]
                if y != zero:
                    orow[j] = field.add(orow[j], field.mul(x, y))
    return out


def mat_sub(field: ScalarField, a, b):
    return [[field.sub(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def identity(field: ScalarField, n: int):
    return [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]


def transpose(rows):
    return [list(col) for col in zip(*rows)] if rows else []


def rref(field: ScalarField, rows) -> tuple[list, list[int]]:
    """Reduced row echelon form (copy) and its pivot columns."""
    m = [list(r) for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if not field.is_zero(m[i][c])), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = field.inv(m[r][c])
        m[r] = [field.mul(inv, x) for x in m[r]]
        for i in range(len(m)):
            if i != r and not field.is_zero(m[i][c]):
                f = m[i][c]
                m[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(field: ScalarField, rows) -> int:
    return len(rref(field, rows)[1])


def nullspace(field: ScalarField, rows) -> list[list[tuple]]:
    """Basis of the right kernel; empty list means injective."""
    if not rows:
        return []
    ncols = len(rows[0])
    red, pivots = rref(field, rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [field.zero] * ncols
        vec[fc] = field.one
        for r, pc in enumerate(pivots):
            vec[pc] = field.neg(red[r][fc])
        basis.append(vec)
    return basis


def solve(field: ScalarField, a, b: Sequence[tuple]) -> list[tuple] | None:
    """One solution of ``a x = b`` or ``None`` if inconsistent."""
    if not a:
        return [] if all(field.is_zero(x) for x in b) else None
    aug = [list(row) + [rhs] for row, rhs in zip(a, b)]
    red, pivots = rref(field, aug)
    ncols = len(a[0])
    if ncols in pivots:
        return None
    x = [field.zero] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][ncols]
    return x


def inverse(field: ScalarField, a) -> list[list[tuple]]:
    n = len(a)
    aug = [list(row) + ident_row for row, ident_row in zip(a, identity(field, n))]
    red, pivots = rref(field, aug)
    if pivots != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in red]


def signature(field: ScalarField, sym) -> tuple[int, int, int]:
    """Inertia ``(n_plus, n_minus, n_zero)`` of a symmetric matrix, exact.

    Works over any ordered subfield the scalar field embeds in; signs of the
    diagonal after congruence elimination are certified by the field's
    interval machinery.
    """
    n = len(sym)
    m = [list(r) for r in sym]
    for i in range(n):
        for j in range(i):
            if not field.eq(m[i][j], m[j][i]):
                raise ValueError("matrix is not symmetric")
    pos = neg = zero = 0
    for i in range(n):
        if field.is_zero(m[i][i]):
            j = next((k for k in range(i + 1, n) if not field.is_zero(m[k][k])), None)
            if j is not None:
                m[i], m[j] = m[j], m[i]
                for row in m:
                    row[i], row[j] = row[j], row[i]
            else:
                j = next((k for k in range(i + 1, n) if not field.is_zero(m[i][k])), None)
                if j is None:
                    zero += 1
                    continue
                # Diagonal block is hollow: fold row/col j into i, giving
                # diagonal entry 2*m[i][j] (characteristic zero).
                for c in range(n):
                    m[i][c] = field.add(m[i][c], m[j][c])
                for r in range(n):
                    m[r][i] = field.add(m[r][i], m[r][j])
        piv = m[i][i]
        inv = field.inv(piv)
        for r in range(i + 1, n):
            if field.is_zero(m[r][i]):
                continue
            f = field.mul(m[r][i], inv)
            for c in range(i, n):
                m[r][c] = field.sub(m[r][c], field.mul(f, m[i][c]))
            for rr in range(i, n):
                m[rr][r] = field.sub(m[rr][r], field.mul(f, m[rr][i]))
        if field.sign(piv) > 0:
            pos += 1
        else:
            neg += 1
    return pos, neg, zero
