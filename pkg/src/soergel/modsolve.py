"""Certified exact linear algebra through modular images.

Dense elimination runs mod p in numpy float64 with panel-blocked
updates: multipliers are accumulated inside a 64-column panel and the
trailing block receives one matmul per panel.  A prime below 2**20
keeps a 64-term product accumulation under 2**47, so trailing blocks
may even skip reduction between panels (up to 128 panels' worth stays
under the 53-bit mantissa) and every float operation is exact.
Candidate nullspace vectors are lifted by CRT and Wang rational
reconstruction, then verified against the original exact rows.  A bad
prime or an over-aggressive row sketch can therefore cost a retry but
never a wrong answer: solutions are only ever returned after exact
verification, and their count matches a mod-p nullity, which can only
overestimate the true dimension.

Systems over a real cyclotomic-style extension are flattened to the
rationals by restriction of scalars before any numerics happen.
"""

from __future__ import annotations

import numpy as np

from .scalars import Rat, ScalarField

_PRIME0 = 1048573  # largest prime below 2**20

_RETRIES = 6

_BLOCK = 64


def _next_primes():
    import sympy

    p = _PRIME0
    while True:
        yield p
        p = int(sympy.prevprime(p))


def _mod_rref(a: np.ndarray, p: int):
    """In-place rref mod p. Returns ordered pivot column list."""
    n, m = a.shape
    # trailing blocks stay unreduced between panels only while the
    # accumulated magnitude provably fits the float64 mantissa
    lazy = m <= 128 * _BLOCK
    pivots: list[int] = []
    r = 0
    c0 = 0
    while r < n and c0 < m:
        c1 = min(c0 + _BLOCK, m)
        a[r:n, c0:c1] %= p  # reduce the activating panel
        loc: list[int] = []
        invs: list[float] = []
        for cc in range(c0, c1):
            rr = r + len(loc)
            if rr >= n:
                break
            nz = np.nonzero(a[rr:n, cc])[0]
            if nz.size == 0:
                continue
            if nz[0] != 0:
                i = rr + int(nz[0])
                a[[rr, i]] = a[[i, rr]]
            inv = float(pow(int(a[rr, cc]), p - 2, p))
            # update only from the pivot column on, so multiplier stashes
            # parked in earlier pivot columns stay intact
            prow = a[rr, cc:c1]
            prow *= inv
            prow %= p
            mults = a[rr + 1 : n, cc].copy()
            if mults.size and np.any(mults):
                a[rr + 1 : n, cc:c1] -= np.outer(mults, prow)
                a[rr + 1 : n, cc:c1] %= p
            a[rr + 1 : n, cc] = mults  # stash multipliers for the deferred update
            loc.append(cc)
            invs.append(inv)
            pivots.append(cc)
        k = len(loc)
        if k and c1 < m:
            t = a[r : r + k, c1:]
            t %= p
            for i in range(k):
                li = a[r + i, loc[:i]]
                if i and np.any(li):
                    t[i] -= li @ t[:i]
                    t[i] %= p
                t[i] *= invs[i]
                t[i] %= p
            lb = a[r + k : n, loc]
            if lb.size and np.any(lb):
                a[r + k : n, c1:] -= lb @ t
                if not lazy:
                    a[r + k : n, c1:] %= p
        for j, cc in enumerate(loc):
            a[r + j + 1 : n, cc] = 0.0
        r += k
        c0 = c1
    # backward pass: clear entries above every pivot, block by block
    npv = len(pivots)
    g1 = npv
    while g1 > 0:
        g0 = max(0, g1 - _BLOCK)
        cols_g = pivots[g0:g1]
        for i in range(g1 - 2, g0 - 1, -1):
            li = a[i, cols_g[i - g0 + 1 :]]
            if np.any(li):
                a[i] -= li @ a[i + 1 : g1]
                a[i] %= p
        if g0 > 0:
            m_up = a[0:g0, cols_g]
            if np.any(m_up):
                a[0:g0] -= m_up @ a[g0:g1]
                a[0:g0] %= p
        g1 = g0
    return pivots


def _mod_nullspace(a: np.ndarray, p: int):
    """Basis of the mod-p nullspace as columns of an int matrix."""
    pivots = _mod_rref(a, p)
    cols = a.shape[1]
    pivset = set(pivots)
    free = [c for c in range(cols) if c not in pivset]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for k, fc in enumerate(free):
        basis[fc, k] = 1
        for r, pc in enumerate(pivots):
            basis[pc, k] = (-int(a[r, fc])) % p
    return basis, pivots


def _crt_pair(a1: int, m1: int, a2: int, m2: int) -> int:
    # m1, m2 coprime; combine residues
    t = ((a2 - a1) * pow(m1 % m2, m2 - 2, m2)) % m2
    return (a1 + m1 * t) % (m1 * m2)


def _rat_reconstruct(x: int, m: int):
    """Wang reconstruction: n/d = x mod m with |n|, d <= sqrt(m/2)."""
    from math import gcd, isqrt

    bound = isqrt(m // 2)
    r0, r1 = m, x % m
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or r1 > bound or abs(t1) > bound:
        return None
    n, d = (r1, t1) if t1 > 0 else (-r1, -t1)
    if gcd(d, m) != 1 or gcd(abs(n), d) != 1:
        return None
    return Rat(n, d)


def _flatten_rows(field: ScalarField, rows, ncols: int):
    """Restriction of scalars: field-linear rows to rational rows."""
    deg = field.degree
    if deg == 1:
        return [{j: c[0] for j, c in row.items() if c[0]} for row in rows], ncols
    # multiplication-by-c matrices in the power basis, built on demand
    basis = [tuple(Rat(1) if i == k else Rat(0) for i in range(deg)) for k in range(deg)]
    out = []
    for row in rows:
        qrows = [dict() for _ in range(deg)]
        for j, c in row.items():
            for k in range(deg):
                prod = field.mul(c, basis[k])
                for i in range(deg):
                    if prod[i]:
                        qrows[i][j * deg + k] = prod[i]
        out.extend(q for q in qrows if q)
    return out, ncols * deg


def _integerize(qrows):
    """COO form with each row scaled to integers; solutions unchanged."""
    from math import lcm

    row_idx, col_idx, vals = [], [], []
    for i, row in enumerate(qrows):
        den = 1
        for q in row.values():
            den = lcm(den, int(q.denominator))
        for j, q in row.items():
            row_idx.append(i)
            col_idx.append(j)
            vals.append(int(q.numerator) * (den // int(q.denominator)))
    return (
        np.asarray(row_idx, dtype=np.int64),
        np.asarray(col_idx, dtype=np.int64),
        vals,
    )


def _mod_sketch(coo, nrows: int, ncols: int, p: int, target: int, seed: int):
    """Reduce the system mod p, sketching down to `target` rows.

    Each row lands in two pseudo-random buckets with weights < 2**7;
    residues are < 2**25 and there are < 2**20 rows, so every float64
    accumulation stays below 2**53 and the arithmetic is exact.  The
    sketch can lose rank only with negligible probability, and the
    caller's exact verification catches that case anyway.
    """
    row_idx, col_idx, vals = coo
    vm = np.asarray([v % p for v in vals], dtype=np.float64)
    if nrows <= target:
        a = np.zeros((nrows, ncols), dtype=np.float64)
        np.add.at(a, (row_idx, col_idx), vm)
        return a
    rng = np.random.default_rng(seed)
    a = np.zeros((target, ncols), dtype=np.float64)
    for _ in range(2):
        b = rng.integers(0, target, size=nrows)
        w = rng.integers(1, 128, size=nrows).astype(np.float64)
        np.add.at(a, (b[row_idx], col_idx), w[row_idx] * vm)
    a %= p
    return a


def _unflatten(field: ScalarField, vec, ncols: int):
    deg = field.degree
    if deg == 1:
        return [(q,) for q in vec]
    return [tuple(vec[j * deg + k] for k in range(deg)) for j in range(ncols)]


def _verify(field: ScalarField, rows, sol) -> bool:
    for row in rows:
        acc = field.zero
        for j, c in row.items():
            acc = field.add(acc, field.mul(c, sol[j]))
        if not field.is_zero(acc):
            return False
    return True


def _field_basis(field: ScalarField, vectors, ncols: int):
    """Reduce a rational-spanning set of a field subspace to a field basis."""
    if field.degree == 1 or not vectors:
        return vectors
    from . import exactlin

    reduced, pivots = exactlin.rref(field, [list(v) for v in vectors])
    if len(vectors) != field.degree * len(pivots):
        raise RuntimeError("restriction of scalars produced a torn solution space")
    return [reduced[i] for i in range(len(pivots))]


def field_nullspace(field: ScalarField, rows, ncols: int):
    """Exact nullspace basis of sparse field-linear rows.

    rows: iterable of {column: field element}.  Returns a list of
    solution vectors (lists of field elements), certified complete.
    """
    rows = [row for row in rows if row]
    qrows, nq = _flatten_rows(field, rows, ncols)
    if not qrows:
        return [
            [field.one if i == k else field.zero for i in range(ncols)]
            for k in range(ncols)
        ]
    coo = _integerize(qrows)
    nrows = len(qrows)
    gen = _next_primes()
    for attempt in range(_RETRIES):
        # each retry widens the sketch, degrading to no sketch at all
        target = min(nrows, (2 * nq + 64) << attempt)
        state = _null_image(coo, nrows, nq, gen, target, 0xC0FFEE + attempt)
        residues, modulus, pivots = state
        dim = residues.shape[1]
        if dim == 0:
            return []
        batch, broken = 1, False
        for _ in range(24):
            cand = _try_reconstruct(residues, modulus)
            if cand is not None:
                sols, good = [], True
                for k in range(dim):
                    vec = _unflatten(field, [cand[j][k] for j in range(nq)], ncols)
                    if not _verify(field, rows, vec):
                        good = False
                        break
                    sols.append(list(vec))
                if good:
                    return _field_basis(field, sols, ncols)
                # honest reconstruction that fails the exact rows means the
                # sketch lost rank; more primes cannot mend that
                break
            added = 0
            while added < batch:
                res2, p2, piv2 = _null_image(
                    coo, nrows, nq, gen, target, 0xC0FFEE + attempt
                )
                if piv2 != pivots or res2.shape != residues.shape:
                    broken = True
                    break
                for idx in np.ndindex(residues.shape):
                    residues[idx] = _crt_pair(
                        int(residues[idx]), modulus, int(res2[idx]), p2
                    )
                modulus *= p2
                added += 1
            if broken:
                break
            batch = min(2 * batch, 16)
    raise RuntimeError("modular nullspace failed to certify after several primes")


def _null_image(coo, nrows, nq, gen, target, seed):
    """One prime's nullspace image: (object residue matrix, p, pivots)."""
    p = next(gen)
    a = _mod_sketch(coo, nrows, nq, p, target, seed)
    basis, pivots = _mod_nullspace(a, p)
    return basis.astype(object), p, pivots


def _try_reconstruct(residues, modulus):
    """All-entry rational lift; None as soon as any entry fails."""
    nrow, ncol = residues.shape
    out = [[None] * ncol for _ in range(nrow)]
    for i in range(nrow):
        for k in range(ncol):
            q = _rat_reconstruct(int(residues[i, k]), modulus)
            if q is None:
                return None
            out[i][k] = q
    return out


class _BadPrime(Exception):
    pass


def _flat_vec_mod(field: ScalarField, vec, p: int) -> np.ndarray:
    deg = field.degree
    out = np.zeros(len(vec) * deg, dtype=np.float64)
    for j, c in enumerate(vec):
        for i, q in enumerate(c):
            num = int(q.numerator) % p
            den = int(q.denominator) % p
            if den == 0:
                raise _BadPrime
            out[j * deg + i] = (num * pow(den, p - 2, p)) % p
    return out


def _echelon_insert(pivots: list, row: np.ndarray, p: int) -> bool:
    """Reduce row against the echelon; append and report True if it extends it."""
    for pc, prow in pivots:
        f = row[pc]
        if f:
            row = (row - f * prow) % p
    nz = np.nonzero(row)[0]
    if len(nz) == 0:
        return False
    c = int(nz[0])
    row = (row * pow(int(row[c]), p - 2, p)) % p
    pivots.append((c, row))
    return True


def independent_tail(field: ScalarField, base, cands, skip: int = 0):
    """Indices of candidate vectors extending the field span of the base.

    Works on one modular image: mod-p independence is an exact witness,
    so the result can only under-select on a bad prime, which callers
    detect by dimension accounting and retry via `skip`.
    """
    gen = _next_primes()
    for _ in range(skip):
        next(gen)
    for _ in range(_RETRIES):
        p = next(gen)
        try:
            return _independent_tail_mod(field, base, cands, p)
        except _BadPrime:
            continue
    raise RuntimeError("no usable prime for the independence filter")


def _spread(field: ScalarField, vec):
    """The generator multiples of vec: their rational span is its field span."""
    out = [list(vec)]
    for _ in range(field.degree - 1):
        out.append([field.mul(field.generator, c) for c in out[-1]])
    return out


def _independent_tail_mod(field: ScalarField, base, cands, p: int):
    pivots: list = []
    for vec in base:
        for v in _spread(field, vec):
            _echelon_insert(pivots, _flat_vec_mod(field, v, p), p)
    kept = []
    for idx, vec in enumerate(cands):
        spread = _spread(field, vec)
        if _echelon_insert(pivots, _flat_vec_mod(field, spread[0], p), p):
            kept.append(idx)
            for v in spread[1:]:
                _echelon_insert(pivots, _flat_vec_mod(field, v, p), p)
    return kept


def field_solve_unique(field: ScalarField, rows, ncols: int, rhs):
    """Solve row.x = rhs for the unique solution, or raise.

    rows are sparse {col: elem}; rhs aligns with rows.  Uniqueness (an
    injective system) is part of the contract and is certified.
    """
    return field_solve_columns(field, rows, ncols, [rhs])[0]


def field_solve_columns(field: ScalarField, rows, ncols: int, rhs_cols):
    """Solve row.x = rhs for several right-hand sides with one elimination.

    Each rhs in rhs_cols aligns with rows.  The coefficient matrix must
    be injective; full mod-p column rank witnesses that exactly, and
    every returned solution is verified against the exact rows.
    """
    rows = list(rows)
    nrhs = len(rhs_cols)
    aug = []
    for i, row in enumerate(rows):
        r = dict(row)
        for k, col in enumerate(rhs_cols):
            if not field.is_zero(col[i]):
                r[ncols + k] = col[i]
        aug.append(r)
    qrows, nq = _flatten_rows(field, aug, ncols + nrhs)
    deg = field.degree
    nunk = ncols * deg
    if not qrows:
        if any(not field.is_zero(c) for col in rhs_cols for c in col):
            raise ValueError("no solution")
        if ncols:
            raise ValueError("system is underdetermined")
        return [[] for _ in range(nrhs)]
    coo = _integerize(qrows)
    nrows = len(qrows)
    gen = _next_primes()
    for attempt in range(_RETRIES):
        target = min(nrows, (2 * nq + 64) << attempt)
        p = next(gen)
        a = _mod_sketch(coo, nrows, nq, p, target, 0xC0FFEE + attempt)
        pivots = _mod_rref(a, p)
        if pivots[:nunk] != list(range(nunk)) or len(pivots) > nunk:
            # rank-deficient or inconsistent image: bad prime, a thin
            # sketch, or a genuine failure -- only retries can tell
            continue
        # solution residues for rhs k sit in the trailing columns
        res = np.array(
            [[int(a[r, nunk + k * deg]) for k in range(nrhs)] for r in range(nunk)],
            dtype=object,
        )
        modulus = p
        batch = 1
        for _ in range(24):
            cand = _try_reconstruct(res, modulus)
            if cand is not None:
                sols, good = [], True
                for k in range(nrhs):
                    vec = _unflatten(field, [cand[j][k] for j in range(nunk)], ncols)
                    if not _verify_solve(field, rows, vec, rhs_cols[k]):
                        good = False
                        break
                    sols.append(list(vec))
                if good:
                    return sols
                # exact mismatch: with certified pivots the sketch solution
                # equals the true solution mod p, so a full-but-wrong lift
                # only means the modulus is still too small -- keep adding
                # primes (a poisoned prime falls through to the next attempt)
            added = 0
            broken = False
            while added < batch:
                p2 = next(gen)
                a2 = _mod_sketch(coo, nrows, nq, p2, target, 0xC0FFEE + attempt)
                piv2 = _mod_rref(a2, p2)
                if piv2 != pivots:
                    broken = True
                    break
                for r in range(nunk):
                    for k in range(nrhs):
                        res[r, k] = _crt_pair(
                            int(res[r, k]), modulus, int(a2[r, nunk + k * deg]), p2
                        )
                modulus *= p2
                added += 1
            if broken:
                break
            batch = min(2 * batch, 16)
    raise ValueError("system is underdetermined or modular solve failed to certify")


def _verify_solve(field: ScalarField, rows, sol, rhs) -> bool:
    for row, b in zip(rows, rhs):
        acc = field.zero
        for j, c in row.items():
            acc = field.add(acc, field.mul(c, sol[j]))
        if not field.eq(acc, b):
            return False
    return True
