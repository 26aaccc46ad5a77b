"""Products of indecomposable summands: decomposition and sign data.

Tensor words for interesting products overrun the polynomial letter cap
quickly, so nothing here concatenates factor words.  A product is kept
in *factored coordinates*: one graded free span per factor, with right
multiplication closed over the column set by crossing coefficients
leftward one factor at a time (`ProductSpan`).

Decomposition is assembled, not solved at product scale.  Splitting
(summand) (x) (one letter) is a genuinely small problem, done once per
(element, letter) by `hom_solve` plus a pairing-normalized peel; a
product then grows one letter at a time through exact stage
isomorphisms, and a retraction folds the standard chain of each factor
onto its top summand.  Every step keeps two-sided inclusion/projection
pairs composing to the identity, and the running complement must come
out exactly zero, so a decomposition certifies itself and is checked
against the graded structure constants before being returned.

The sign data needs scalar values of the invariant pairing, never its
polynomial values.  The pairing folds the concatenated word left to
right - divided difference, then multiply in the junction coefficient -
which on the orbit of a generic regular point is plain field arithmetic
(`PointFrame`, `FormEngine`).  Lefschetz ranks come cheaper still, from
composites of slot-level scalar matrices, with no pairing involved.
Signatures are exact inertia computations over the scalar field.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from . import exactlin, modsolve
from .bimodule import BSModule
from .coxeter import CoxElt, format_word
from .hecke import mu
from .laurent import Laurent
from .realization import PolyElt, Realization
from .scalars import Rat
from .tower import SpanBasis, Tower, _monomials

__all__ = [
    "MAX_PRODUCT_LETTERS",
    "ProductSpan",
    "hom_solve",
    "product_guide",
    "Slot",
    "Decomposition",
    "Decomposer",
    "PointFrame",
    "FormEngine",
    "ProductAnalysis",
    "RankLine",
    "SignatureLine",
    "LefschetzReport",
    "SignatureReport",
    "ScanLine",
    "ConservationReport",
    "BlockSignatureReport",
    "block_signature_check",
]

# The factored representation never builds the concatenated word, so the
# only cost of a long product is linear algebra; this cap bounds that.
MAX_PRODUCT_LETTERS = 12


# -- polynomial-valued coordinate matrices ----------------------------------
#
# A map phi: A -> B between spans is stored row-wise: m[j][c] is the left
# coefficient of B's column c in phi(A's column j).  Composition in
# diagram order is therefore a plain matrix product.


def _pm_identity(real: Realization, n: int) -> list[list[PolyElt]]:
    one, zero = real.one, real.zero
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def _pm_compose(real: Realization, first, then) -> list[list[PolyElt]]:
    """Coordinates of (then o first); first: A->B, then: B->C."""
    zero = real.zero
    nc = len(then[0]) if then else 0
    out = []
    for row in first:
        acc: list[PolyElt] = [zero] * nc
        for c, f in enumerate(row):
            if f.is_zero:
                continue
            for d, g in enumerate(then[c]):
                if g.is_zero:
                    continue
                acc[d] = acc[d] + f * g
        out.append(acc)
    return out


def _pm_add(a, b) -> list[list[PolyElt]]:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _pm_sub(a, b) -> list[list[PolyElt]]:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _pm_scaled(mat, c: tuple) -> list[list[PolyElt]]:
    return [[f.scaled(c) for f in row] for row in mat]


def _pm_is_zero(mat) -> bool:
    return all(f.is_zero for row in mat for f in row)


def _vec_apply(real: Realization, vec, mat) -> list[PolyElt]:
    """Image coordinates of an element with left coefficients vec."""
    zero = real.zero
    acc: list[PolyElt] = [zero] * (len(mat[0]) if mat else 0)
    for j, f in enumerate(vec):
        if f.is_zero:
            continue
        for c, g in enumerate(mat[j]):
            if g.is_zero:
                continue
            acc[c] = acc[c] + f * g
    return acc


def _constant_of(field, f: PolyElt):
    """The scalar of a constant polynomial, or None if it is not one."""
    if f.is_zero:
        return field.zero
    if len(f.terms) != 1:
        return None
    ((e, c),) = f.terms.items()
    return c if not any(e) else None


# -- graded maps between spans, in column coordinates ------------------------


def hom_solve(a, b, k: int) -> list[list[list[PolyElt]]]:
    """Basis of degree-k two-sided maps from span a to span b.

    Both spans are graded free left modules whose right action closes
    over the columns; the unknowns are slice coordinates of the column
    images, and commutation with right multiplication by each variable
    is one linear condition per (column, variable), keyed on (target
    column, exponent).  Any object with rank/degs/slice_gens/ra works,
    so factored product spans are as good a target as concrete ones.
    """
    real = a.real
    field = real.field
    rank = real.rank
    gens: list[list[tuple[int, tuple]]] = []
    offs = [0]
    for j in range(a.rank):
        g = b.slice_gens(a.degs[j] + k)
        gens.append(g)
        offs.append(offs[-1] + len(g))
    n_unk = offs[-1]
    if n_unk == 0:
        return []

    rows: list[dict[int, tuple]] = []
    for j in range(a.rank):
        for t in range(rank):
            bucket: dict[tuple, dict[int, tuple]] = {}
            # phi(col_j) * x_t, through b's right action on the unknowns
            row_b = b.ra(t)
            for pos, (i, mono) in enumerate(gens[j]):
                u = offs[j] + pos
                for c2, f in enumerate(row_b[i]):
                    if f.is_zero:
                        continue
                    for e, cf in f.terms.items():
                        key = (c2, tuple(x + y for x, y in zip(e, mono)))
                        slot = bucket.setdefault(key, {})
                        slot[u] = field.add(slot[u], cf) if u in slot else cf
            # minus phi(col_j * x_t), through a's right action
            for i, f in enumerate(a.ra(t)[j]):
                if f.is_zero:
                    continue
                for pos, (c2, mono) in enumerate(gens[i]):
                    u = offs[i] + pos
                    for e, cf in f.terms.items():
                        key = (c2, tuple(x + y for x, y in zip(e, mono)))
                        slot = bucket.setdefault(key, {})
                        slot[u] = (
                            field.sub(slot[u], cf) if u in slot else field.neg(cf)
                        )
            rows.extend(r for r in bucket.values() if r)

    out = []
    for vec in modsolve.field_nullspace(field, rows, n_unk):
        img = []
        for j in range(a.rank):
            acc: list[dict] = [dict() for _ in range(b.rank)]
            for pos, (i, mono) in enumerate(gens[j]):
                c = vec[offs[j] + pos]
                if field.is_zero(c):
                    continue
                d = acc[i]
                d[mono] = field.add(d[mono], c) if mono in d else c
            img.append([PolyElt(real, d) for d in acc])
        out.append(img)
    return out


# -- products in factored coordinates ----------------------------------------


class ProductSpan:
    """A product of graded free spans over one realization.

    Columns are tuples of factor columns; coordinates are far-left
    polynomial coefficients.  Right multiplication by any polynomial
    closes over the columns after crossing coefficients through the
    earlier factors, which is how the concatenated tensor word is
    avoided entirely.
    """

    def __init__(self, factors: Sequence, left: "ProductSpan | None" = None):
        self.factors = list(factors)
        if not self.factors:
            raise ValueError("a product needs at least one factor")
        head = self.factors[0]
        self.real = head.real
        self.field = head.field
        self.letters = sum(len(f.module.word) for f in self.factors)
        if self.letters > MAX_PRODUCT_LETTERS:
            raise ValueError(
                f"product carries {self.letters} letters, over the cap of "
                f"{MAX_PRODUCT_LETTERS}"
            )
        if len(self.factors) == 1:
            self._left = None
        else:
            self._left = left if left is not None else ProductSpan(self.factors[:-1])
        self._last = self.factors[-1]
        if self._left is None:
            self.index = [(i,) for i in range(self._last.rank)]
        else:
            self.index = [
                i + (j,) for i in self._left.index for j in range(self._last.rank)
            ]
        self.pos = {idx: n for n, idx in enumerate(self.index)}
        self.degs = [
            sum(f.degs[i] for f, i in zip(self.factors, idx)) for idx in self.index
        ]
        self._ra: dict[int, list] = {}
        self._cross: dict[tuple, list] = {}
        self._slices: dict[int, list] = {}
        self._junctions: list | None = None

    def extended(self, factor) -> "ProductSpan":
        """The product with one more factor, reusing this one's caches."""
        return ProductSpan(self.factors + [factor], left=self)

    @property
    def rank(self) -> int:
        return len(self.index)

    def word(self) -> tuple[int, ...]:
        out: tuple[int, ...] = ()
        for f in self.factors:
            out += f.module.word
        return out

    def slice_gens(self, d: int) -> list[tuple[int, tuple]]:
        hit = self._slices.get(d)
        if hit is None:
            hit = []
            rank = self.real.rank
            for i, di in enumerate(self.degs):
                gap = d - di
                if gap >= 0 and gap % 2 == 0:
                    hit.extend((i, mono) for mono in _monomials(rank, gap // 2))
            self._slices[d] = hit
        return hit

    def _lift(self, last_rows) -> list[list[PolyElt]]:
        """Extend a coefficient matrix on the last factor to the product."""
        left = self._left
        zero = self.real.zero
        out = [[zero] * self.rank for _ in range(self.rank)]
        n_last = self._last.rank
        for j in range(n_last):
            for j2 in range(n_last):
                f = last_rows[j][j2]
                if f.is_zero:
                    continue
                crow = left.cross(f)
                for lpos, lrow in enumerate(crow):
                    src = lpos * n_last + j
                    orow = out[src]
                    for lpos2, g in enumerate(lrow):
                        if not g.is_zero:
                            dst = lpos2 * n_last + j2
                            orow[dst] = orow[dst] + g
        return out

    def ra(self, t: int) -> list[list[PolyElt]]:
        """ra[j][i]: column_j * x_t = sum_i ra[j][i] * column_i."""
        hit = self._ra.get(t)
        if hit is None:
            last = self._last.ra(t)
            hit = last if self._left is None else self._lift(last)
            self._ra[t] = hit
        return hit

    def cross(self, f: PolyElt) -> list[list[PolyElt]]:
        """cross[j][i]: column_j * f = sum_i cross[j][i] * column_i."""
        key = tuple(sorted(f.terms.items()))
        hit = self._cross.get(key)
        if hit is None:
            last = self._last.cross(f)
            hit = last if self._left is None else self._lift(last)
            self._cross[key] = hit
        return hit

    # -- junction operators ----------------------------------------------

    def junction_ops(self) -> list[list[list[PolyElt]]]:
        """Coordinate matrices of rho inserted at each internal junction."""
        if self._junctions is None:
            nodes: list[ProductSpan] = []
            node: ProductSpan | None = self
            while node is not None:
                nodes.append(node)
                node = node._left
            nodes.reverse()  # nodes[g] covers factors[: g + 1]
            zero = self.real.zero
            ops = []
            for g in range(len(self.factors) - 1):
                pre = nodes[g]
                crow = pre.cross(self.real.rho)
                op = [[zero] * self.rank for _ in range(self.rank)]
                for n, idx in enumerate(self.index):
                    suffix = idx[g + 1 :]
                    for pn, f in enumerate(crow[pre.pos[idx[: g + 1]]]):
                        if not f.is_zero:
                            op[n][self.pos[pre.index[pn] + suffix]] = f
                ops.append(op)
            self._junctions = ops
        return self._junctions

    def lefschetz(self, a: Sequence) -> list[list[PolyElt]]:
        """Sum of junction operators with the given scalar coefficients."""
        ops = self.junction_ops()
        if len(a) != len(ops):
            raise ValueError(f"expected {len(ops)} junction coefficients")
        zero = self.real.zero
        out = [[zero] * self.rank for _ in range(self.rank)]
        for coeff, op in zip(a, ops):
            c = self.field.from_rat(Rat(coeff))
            if self.field.is_zero(c):
                continue
            for n in range(self.rank):
                row, orow = out[n], op[n]
                for m2 in range(self.rank):
                    f = orow[m2]
                    if not f.is_zero:
                        row[m2] = row[m2] + f.scaled(c)
        return out

    # -- concrete embedding, for small words only --------------------------

    def embed(self):
        """The concatenated tensor module and the embedded columns.

        Subject to the polynomial-level letter cap; meant for oracles
        and small cross-checks, not for production sizes.
        """
        module = BSModule(self.real, self.word())
        if self._left is None:
            cols = [module.element(dict(c.terms)) for c in self._last.columns]
            return module, cols
        _, lcols = self._left.embed()
        cols = []
        for lc in lcols:
            for c in self._last.columns:
                acc = module.zero()
                for bits, f in c.terms.items():
                    moved = lc.right_mul(f)
                    for lbits, g in moved.terms.items():
                        acc = acc + module.basis_elt(lbits + bits, g)
                cols.append(acc)
        return module, cols


def product_guide(table, elements: Sequence[CoxElt]) -> dict[CoxElt, Laurent]:
    """Graded multiplicities of a product of canonical basis elements."""
    acc: dict[CoxElt, Laurent] | None = None
    identity: CoxElt | None = None
    for x in elements:
        if x.length == 0:
            identity = x
            continue
        if acc is None:
            acc = {x: Laurent({0: 1})}
            continue
        nxt: dict[CoxElt, Laurent] = {}
        for z, c in acc.items():
            for w, m in mu(table, z, x).items():
                cm = c * m
                nxt[w] = nxt[w] + cm if w in nxt else cm
        acc = {w: c for w, c in nxt.items() if c}
    if acc is None:
        if identity is None:
            raise ValueError("empty product")
        acc = {identity: Laurent({0: 1})}
    return acc


# -- decompositions ----------------------------------------------------------


@dataclass
class Slot:
    """One summand occurrence: element z at grading level k.

    `incl` maps the z-span into the product, `proj` back out; the pair
    composes to the identity on the z-span, and maps of distinct slots
    compose to zero.  Levels follow the exponent of the multiplicity
    Laurent polynomial, so the bottom copy of a doubled summand sits at
    level -1 and its partner at +1.
    """

    element: CoxElt
    shift: int
    incl: list[list[PolyElt]]
    proj: list[list[PolyElt]]


@dataclass
class Decomposition:
    span: ProductSpan
    slots: list[Slot]

    def multiset(self) -> dict[tuple[CoxElt, int], int]:
        out: dict[tuple[CoxElt, int], int] = {}
        for s in self.slots:
            key = (s.element, s.shift)
            out[key] = out.get(key, 0) + 1
        return out

    def slots_at(self, z: CoxElt, k: int) -> list[Slot]:
        return [s for s in self.slots if s.element == z and s.shift == k]

    def elements(self) -> list[CoxElt]:
        seen = {s.element for s in self.slots}
        return sorted(seen, key=lambda z: (z.length, z.word))


# -- generic-point evaluation -------------------------------------------------


class PointFrame:
    """The orbit of a generic regular point, with pointwise operators.

    Divided differences and reflections act on value vectors indexed by
    the group: the reflection action permutes orbit points, so one
    permutation table per generator turns the whole polynomial fold
    into field arithmetic.  Regularity (no root vanishes anywhere on
    the orbit) makes the divided differences well defined pointwise.
    """

    def __init__(self, real: Realization):
        self.real = real
        self.field = real.field
        system = real.system
        self.elems = list(system.enumerate())
        field = self.field
        alphas = [real.alpha(t) for t in range(real.rank)]
        points = None
        for attempt in range(10):
            base = [
                field.from_rat(Rat(3 + 2 * i + 5 * attempt, 1 + (i + attempt) % 3))
                for i in range(real.rank)
            ]
            pts = [real.apply_to_point(w, base) for w in self.elems]
            if all(not field.is_zero(a.evaluate(p)) for a in alphas for p in pts):
                points = pts
                break
        if points is None:
            raise RuntimeError("no regular base point found for the orbit frame")
        self.points = points
        pos = {w: n for n, w in enumerate(self.elems)}
        self.perm = [
            [pos[system.multiply(system.simple(t), w)] for w in self.elems]
            for t in range(real.rank)
        ]
        self.inv_alpha = [
            [field.inv(alphas[t].evaluate(p)) for p in points]
            for t in range(real.rank)
        ]
        self._vals: dict[tuple, tuple] = {}
        rho_vals = tuple(real.rho.evaluate(p) for p in points)
        self._rho_pows: list[tuple] = [(field.one,) * len(points), rho_vals]

    @property
    def size(self) -> int:
        return len(self.points)

    def vals(self, f: PolyElt) -> tuple:
        key = tuple(sorted(f.terms.items()))
        hit = self._vals.get(key)
        if hit is None:
            hit = tuple(f.evaluate(p) for p in self.points)
            self._vals[key] = hit
        return hit

    def rho_pow(self, k: int) -> tuple:
        field = self.field
        while len(self._rho_pows) <= k:
            last, base = self._rho_pows[-1], self._rho_pows[1]
            self._rho_pows.append(tuple(field.mul(x, y) for x, y in zip(last, base)))
        return self._rho_pows[k]

    def demazure(self, t: int, vec: Sequence) -> list:
        field = self.field
        perm, inv = self.perm[t], self.inv_alpha[t]
        return [
            field.mul(field.sub(v, vec[perm[n]]), inv[n]) for n, v in enumerate(vec)
        ]


class FormEngine:
    """Scalar values of the invariant pairing on one product span.

    Flattens columns over the concatenated word with all polynomial
    coefficients replaced by their orbit value vectors, then folds each
    bit-sum pattern: seed with the pointwise product of the slot-zero
    coefficients, and per letter apply the divided difference followed
    by the junction power of rho.  A pairing of complementary degrees
    folds to a constant vector, which is asserted and collapsed.
    """

    def __init__(self, frame: PointFrame, span: ProductSpan):
        self.frame = frame
        self.span = span
        self.field = span.field
        nodes: list[ProductSpan] = []
        node: ProductSpan | None = span
        while node is not None:
            nodes.append(node)
            node = node._left
        nodes.reverse()  # nodes[d - 1] covers factors[:d]
        self.nodes = nodes
        self.letters = span.word()
        self._flats: dict[tuple[int, int], dict[tuple, list]] = {}

    def _flat(self, depth: int, n: int) -> dict[tuple, list]:
        """Column n of the depth-factor prefix, as bits -> value vector."""
        key = (depth, n)
        hit = self._flats.get(key)
        if hit is not None:
            return hit
        field = self.field
        vals = self.frame.vals
        node = self.nodes[depth - 1]
        out: dict[tuple, list] = {}
        if depth == 1:
            for bits, p in node.factors[0].columns[n].terms.items():
                out[bits] = list(vals(p))
        else:
            left = self.nodes[depth - 2]
            idx = node.index[n]
            lpos = left.pos[idx[:-1]]
            for cbits, f in node._last.columns[idx[-1]].terms.items():
                crow = left.cross(f)[lpos]
                for k2, g in enumerate(crow):
                    if g.is_zero:
                        continue
                    gv = vals(g)
                    for lbits, lv in self._flat(depth - 1, k2).items():
                        bkey = lbits + cbits
                        acc = out.get(bkey)
                        if acc is None:
                            out[bkey] = [field.mul(x, y) for x, y in zip(gv, lv)]
                        else:
                            for m2, (x, y) in enumerate(zip(gv, lv)):
                                acc[m2] = field.add(acc[m2], field.mul(x, y))
        self._flats[key] = out
        return out

    def vec_flat(self, coords: Sequence[PolyElt]) -> dict[tuple, list]:
        """Flat value coordinates of an element given over span columns."""
        field = self.field
        vals = self.frame.vals
        depth = len(self.span.factors)
        out: dict[tuple, list] = {}
        for n, f in enumerate(coords):
            if f.is_zero:
                continue
            fv = vals(f)
            for bits, bv in self._flat(depth, n).items():
                acc = out.get(bits)
                if acc is None:
                    out[bits] = [field.mul(x, y) for x, y in zip(fv, bv)]
                else:
                    for m2, (x, y) in enumerate(zip(fv, bv)):
                        acc[m2] = field.add(acc[m2], field.mul(x, y))
        return out

    def value_vec(self, u: Sequence[PolyElt], w: Sequence[PolyElt]) -> list:
        field = self.field
        npts = self.frame.size
        uf = self.vec_flat(u)
        wf = self.vec_flat(w)
        conv: dict[tuple, list] = {}
        for bu, uv in uf.items():
            for bw, wv in wf.items():
                kpat = tuple(x + y for x, y in zip(bu, bw))
                acc = conv.get(kpat)
                if acc is None:
                    conv[kpat] = [field.mul(x, y) for x, y in zip(uv, wv)]
                else:
                    for m2, (x, y) in enumerate(zip(uv, wv)):
                        acc[m2] = field.add(acc[m2], field.mul(x, y))
        total = [field.zero] * npts
        for kpat, vec in conv.items():
            cur = list(vec)
            for i, t in enumerate(self.letters):
                cur = self.frame.demazure(t, cur)
                if kpat[i]:
                    rp = self.frame.rho_pow(kpat[i])
                    cur = [field.mul(x, y) for x, y in zip(cur, rp)]
            total = [field.add(x, y) for x, y in zip(total, cur)]
        return total

    def value(self, u: Sequence[PolyElt], w: Sequence[PolyElt]) -> tuple:
        """The scalar pairing value; the fold must come out constant."""
        vec = self.value_vec(u, w)
        field = self.field
        first = vec[0]
        if any(not field.eq(v, first) for v in vec[1:]):
            raise RuntimeError("pairing value is not constant on the orbit")
        return first


# -- the decomposer -----------------------------------------------------------


class Decomposer:
    """Splits products of indecomposable summands and runs sign checks.

    Owns every reusable piece: one-letter splits per (element, letter),
    retractions of standard chains onto their top summands, the generic
    orbit frame, and the intrinsic pairing normalizers.  One instance
    per realization; scans share it across many products.
    """

    def __init__(self, tower: Tower):
        self.tower = tower
        self.real = tower.real
        self.field = tower.real.field
        self.system = tower.system
        self.table = tower.table
        self._pair2: dict[tuple, list[Slot]] = {}
        self._retract: dict[tuple, tuple] = {}
        self._frame: PointFrame | None = None
        self._zengines: dict[tuple, FormEngine] = {}
        self._nu: dict[tuple, tuple] = {}
        self._rho_pow: list[PolyElt] = [self.real.one]

    def span_of(self, z: CoxElt) -> SpanBasis:
        return self.tower.summand(z).span

    @property
    def frame(self) -> PointFrame:
        if self._frame is None:
            self._frame = PointFrame(self.real)
        return self._frame

    def rho_power(self, k: int) -> PolyElt:
        while len(self._rho_pow) <= k:
            self._rho_pow.append(self._rho_pow[-1] * self.real.rho)
        return self._rho_pow[k]

    def _mu_pairs(self, z: CoxElt, t: int) -> dict[CoxElt, Laurent]:
        if z.length == 0:
            return {self.system.simple(t): Laurent({0: 1})}
        return mu(self.table, z, self.system.simple(t))

    # -- the one-letter split, solved once per (element, letter) ------------

    def pair_slots(self, z: CoxElt, t: int) -> list[Slot]:
        """Exact slot maps of (z summand) tensor (letter t)."""
        key = (z.word, t)
        hit = self._pair2.get(key)
        if hit is None:
            span = ProductSpan(
                [self.span_of(z), SpanBasis.standard(BSModule(self.real, (t,)))]
            )
            fams = {}
            mults = {}
            for w, lau in self._mu_pairs(z, t).items():
                wspan = self.span_of(w)
                for k, m in lau.coeffs.items():
                    fams[(w, k)] = (
                        hom_solve(wspan, span, k),
                        hom_solve(span, wspan, -k),
                    )
                    mults[(w, k)] = m
            hit = self._peel(span, fams, mults)
            self._pair2[key] = hit
        return hit

    # -- retraction of a standard chain onto its top summand -----------------

    def retraction(self, y: CoxElt) -> tuple:
        """(incl, proj) between the y-span and the standard span of its word.

        incl expands the summand columns over the standard basis; proj
        is any degree-zero map splitting it, normalized so the round
        trip is exactly the identity.
        """
        hit = self._retract.get(y.word)
        if hit is None:
            yspan = self.span_of(y)
            std = SpanBasis.standard(BSModule(self.real, y.word))
            incl = std.expand_many(yspan.columns)
            ident = _pm_identity(self.real, yspan.rank)
            proj = None
            for cand in hom_solve(std, yspan, 0):
                comp = _pm_compose(self.real, incl, cand)
                c = _constant_of(self.field, comp[0][0])
                if c is None or self.field.is_zero(c):
                    continue
                cand = _pm_scaled(cand, self.field.inv(c))
                if _pm_is_zero(_pm_sub(_pm_compose(self.real, incl, cand), ident)):
                    proj = cand
                    break
            if proj is None:
                raise RuntimeError(
                    f"no retraction splits the summand of {format_word(y.word)}"
                )
            hit = (incl, proj)
            self._retract[y.word] = hit
        return hit

    # -- pairing-normalized peel ---------------------------------------------

    def _peel(self, span: ProductSpan, families, mults) -> list[Slot]:
        """Select exact slot maps out of candidate map families.

        families[(z, k)] holds candidate inclusions and projections
        whose span contains the true slot maps.  Peeling longer
        elements first and lower levels first, corrected by the running
        complement, the candidate pairing is forced to be scalar on the
        bottom generator with rank exactly the multiplicity; anything
        else signals a bug upstream and raises.
        """
        real, field = self.real, self.field
        e = _pm_identity(real, span.rank)
        slots: list[Slot] = []
        order = sorted(mults, key=lambda zk: (-zk[0].length, zk[0].word, zk[1]))
        for z, k in order:
            m = mults[(z, k)]
            cin, cout = families[(z, k)]
            label = f"({format_word(z.word)}, {k:+d})"
            if len(cin) < m or len(cout) < m:
                raise RuntimeError(
                    f"slot {label}: {len(cin)}/{len(cout)} candidate maps for "
                    f"multiplicity {m}"
                )
            cin = [_pm_compose(real, ci, e) for ci in cin]
            cout = [_pm_compose(real, e, co) for co in cout]
            pairing = []
            for co in cout:
                row = []
                for ci in cin:
                    img = _vec_apply(real, ci[0], co)
                    c = _constant_of(field, img[0])
                    if c is None or any(not f.is_zero for f in img[1:]):
                        raise RuntimeError(
                            f"slot {label}: candidate pairing is not scalar "
                            "on the bottom generator"
                        )
                    row.append(c)
                pairing.append(row)
            _, piv_a = exactlin.rref(field, [list(r) for r in pairing])
            _, piv_b = exactlin.rref(field, exactlin.transpose(pairing))
            if len(piv_a) != m or len(piv_b) != m:
                raise RuntimeError(
                    f"slot {label}: pairing rank {min(len(piv_a), len(piv_b))}, "
                    f"expected {m}"
                )
            sel = [[pairing[b][a] for a in piv_a] for b in piv_b]
            inv = exactlin.inverse(field, sel)
            for j in range(m):
                incl = cin[piv_a[j]]
                proj = None
                for i2, b in enumerate(piv_b):
                    part = _pm_scaled(cout[b], inv[j][i2])
                    proj = part if proj is None else _pm_add(proj, part)
                slots.append(Slot(z, k, incl, proj))
                e = _pm_sub(e, _pm_compose(real, proj, incl))
        if not _pm_is_zero(e):
            raise RuntimeError("decomposition incomplete: nonzero complement")
        return slots

    # -- staged decomposition of a product -------------------------------------

    def decompose(self, elements: Sequence[CoxElt]) -> Decomposition:
        """Split a product of summands into exact slots, stage by stage.

        Grows the product one letter at a time through the cached
        one-letter splits (exactness propagates through composition),
        then after each factor's letters retracts the standard chain
        onto the factor's summand span and re-selects slots through the
        pairing.  The result is certified against the graded structure
        constants of the product.
        """
        elements = [self.system.element(x.word) for x in elements]
        total = sum(x.length for x in elements)
        if total > MAX_PRODUCT_LETTERS:
            raise ValueError(
                f"total word length {total} is over the cap of "
                f"{MAX_PRODUCT_LETTERS}"
            )
        real = self.real
        ambient = ProductSpan([self.span_of(elements[0])])
        ident = _pm_identity(real, ambient.rank)
        slots = [Slot(elements[0], 0, ident, ident)]
        for fi in range(1, len(elements)):
            y = elements[fi]
            if y.length == 0:
                # the trivial factor is transparent: a rank-one extension
                # keeps every column position, so slot maps stay valid
                ambient = ambient.extended(self.span_of(y))
                continue
            prefix = ambient
            for t in y.word:
                tspan = SpanBasis.standard(BSModule(real, (t,)))
                grown = ambient.extended(tspan)
                slots = self._stage(ambient, slots, t)
                ambient = grown
            ambient, slots = self._restrict(
                prefix, ambient, slots, y, elements[: fi + 1]
            )
        guide = product_guide(self.table, elements)
        want = {(z, k): c for z, lau in guide.items() for k, c in lau.coeffs.items()}
        got: dict[tuple, int] = {}
        for s in slots:
            got[(s.element, s.shift)] = got.get((s.element, s.shift), 0) + 1
        if want != got:
            raise RuntimeError(
                "decomposition disagrees with the graded structure constants"
            )
        return Decomposition(ambient, slots)

    def _stage(self, ambient: ProductSpan, slots, t: int) -> list[Slot]:
        """Compose current slot maps with the one-letter splits.

        Grown column order interleaves the new letter innermost, so the
        ambient column ac paired with letter bit b lands at 2 ac + b.
        """
        real = self.real
        zero = real.zero
        arank = ambient.rank
        out: list[Slot] = []
        for s in slots:
            zrank = len(s.incl)
            for p in self.pair_slots(s.element, t):
                wrank = len(p.incl)
                incl = []
                for wj in range(wrank):
                    row = [zero] * (2 * arank)
                    prow = p.incl[wj]
                    for zi in range(zrank):
                        srow = s.incl[zi]
                        for b in (0, 1):
                            f = prow[2 * zi + b]
                            if f.is_zero:
                                continue
                            for ac, g in enumerate(srow):
                                if not g.is_zero:
                                    row[2 * ac + b] = row[2 * ac + b] + g * f
                    incl.append(row)
                proj = []
                for ac in range(arank):
                    srow = s.proj[ac]
                    for b in (0, 1):
                        row = [zero] * wrank
                        for zi, g in enumerate(srow):
                            if g.is_zero:
                                continue
                            prow = p.proj[2 * zi + b]
                            for wj, f in enumerate(prow):
                                if not f.is_zero:
                                    row[wj] = row[wj] + g * f
                        proj.append(row)
                out.append(Slot(p.element, s.shift + p.shift, incl, proj))
        return out

    def _restrict(self, prefix, ambient, slots, y: CoxElt, partial):
        """Fold the trailing standard letter chain onto the summand of y.

        The identity of the target factors through the candidate maps,
        so the peel below is guaranteed a full-rank pairing at every
        slot the partial product predicts; slots the guide does not
        mention are junk killed by the restriction and are skipped.
        """
        real = self.real
        yspan = self.span_of(y)
        target = prefix.extended(yspan)
        yinc, yproj = self.retraction(y)
        std_bits = list(BSModule(real, y.word).basis_bits())
        bitpos = {b: i for i, b in enumerate(std_bits)}
        npre = len(prefix.factors)
        zero = real.zero

        # embedding target -> ambient: middle coefficients cross the prefix
        emb = [[zero] * ambient.rank for _ in range(target.rank)]
        for n, idx in enumerate(target.index):
            pre_idx, j = idx[:-1], idx[-1]
            lpos = prefix.pos[pre_idx]
            row = emb[n]
            for i, f in enumerate(yinc[j]):
                if f.is_zero:
                    continue
                bits = std_bits[i]
                for pn, g in enumerate(prefix.cross(f)[lpos]):
                    if not g.is_zero:
                        m2 = ambient.pos[prefix.index[pn] + bits]
                        row[m2] = row[m2] + g
        # retraction ambient -> target
        ret = [[zero] * target.rank for _ in range(ambient.rank)]
        for m2, aidx in enumerate(ambient.index):
            pre_idx, bits = aidx[:npre], aidx[npre:]
            lpos = prefix.pos[pre_idx]
            row = ret[m2]
            for j, f in enumerate(yproj[bitpos[bits]]):
                if f.is_zero:
                    continue
                for pn, g in enumerate(prefix.cross(f)[lpos]):
                    if not g.is_zero:
                        n = target.pos[prefix.index[pn] + (j,)]
                        row[n] = row[n] + g
        guide = product_guide(self.table, partial)
        fams = {}
        mults = {}
        for z, lau in guide.items():
            for k, m in lau.coeffs.items():
                group = [s for s in slots if s.element == z and s.shift == k]
                fams[(z, k)] = (
                    [_pm_compose(real, s.incl, ret) for s in group],
                    [_pm_compose(real, emb, s.proj) for s in group],
                )
                mults[(z, k)] = m
        return target, self._peel(target, fams, mults)

    # -- intrinsic pairing normalizers ----------------------------------------

    def _zengine(self, z: CoxElt) -> FormEngine:
        hit = self._zengines.get(z.word)
        if hit is None:
            hit = FormEngine(self.frame, ProductSpan([self.span_of(z)]))
            self._zengines[z.word] = hit
        return hit

    def nu(self, z: CoxElt) -> tuple:
        """Pairing of the bottom generator against rho^length times it.

        The intrinsic normalizer dividing every reference pairing; it
        must be nonzero, which the fold certifies at first use.
        """
        hit = self._nu.get(z.word)
        if hit is None:
            eng = self._zengine(z)
            rank = eng.span.rank
            bot = [self.real.one] + [self.real.zero] * (rank - 1)
            ref = [self.rho_power(z.length)] + [self.real.zero] * (rank - 1)
            hit = eng.value(bot, ref)
            if self.field.is_zero(hit):
                raise RuntimeError(
                    f"degenerate bottom pairing for {format_word(z.word)}"
                )
            self._nu[z.word] = hit
        return hit

    def top_reference(self, z: CoxElt) -> tuple[list[PolyElt], tuple]:
        """An alternative reference: the top column and its bottom pairing."""
        span = self.span_of(z)
        top = max(span.degs)
        idxs = [i for i, d in enumerate(span.degs) if d == top]
        if len(idxs) != 1:
            raise RuntimeError("top degree slice is not one-dimensional")
        coords = [
            self.real.one if i == idxs[0] else self.real.zero
            for i in range(span.rank)
        ]
        eng = self._zengine(z)
        bot = [self.real.one] + [self.real.zero] * (span.rank - 1)
        val = eng.value(bot, coords)
        if self.field.is_zero(val):
            raise RuntimeError(
                f"top column pairs to zero against the bottom of "
                f"{format_word(z.word)}"
            )
        return coords, val

    # -- analyses and reports --------------------------------------------------

    def analyze(
        self,
        elements: Sequence[CoxElt],
        a: Sequence | None = None,
        dec: Decomposition | None = None,
        forms: "_FormData | None" = None,
    ) -> "ProductAnalysis":
        elements = [self.system.element(x.word) for x in elements]
        if dec is None:
            dec = self.decompose(elements)
        njunc = len(dec.span.factors) - 1
        avals = [Rat(1)] * njunc if a is None else [Rat(q) for q in a]
        if len(avals) != njunc:
            raise ValueError(f"expected {njunc} junction coefficients")
        return ProductAnalysis(self, elements, dec, avals, forms)

    @staticmethod
    def _require_positive(a: Sequence) -> None:
        for q in a:
            if not Rat(q) > 0:
                raise ValueError("junction coefficients must be positive")

    def check_rhl(self, x: CoxElt, y: CoxElt, a: Sequence | None = None):
        """Relative hard Lefschetz ranks for a two-factor product."""
        if a is not None:
            self._require_positive(a)
        return self.analyze([x, y], a).lefschetz_report()

    def check_rhr(self, x: CoxElt, y: CoxElt, a: Sequence | None = None):
        """Level-form signatures for a two-factor product."""
        if a is not None:
            self._require_positive(a)
        return self.analyze([x, y], a).signature_report()

    def check_rhr_multi(self, elements: Sequence[CoxElt], a: Sequence | None = None):
        """Level-form signatures for a many-factor product, recorded."""
        if a is not None:
            self._require_positive(a)
        return self.analyze(elements, a).signature_report()

    def pair_report(self, x: CoxElt, y: CoxElt, a: Sequence | None = None):
        """Both two-factor reports off one decomposition and form pass."""
        if a is not None:
            self._require_positive(a)
        analysis = self.analyze([x, y], a)
        return analysis.lefschetz_report(), analysis.signature_report()

    def conservation_scan(
        self,
        elements: Sequence[CoxElt],
        a_start: Sequence,
        a_end: Sequence,
        samples: int,
    ) -> "ConservationReport":
        """Signatures of the level forms along a segment of operators.

        The decomposition and the reference pairings are computed once;
        each sample only rebuilds the scalar chain matrices.  Samples
        where some level form degenerates are reported with their
        parameter value, and constancy is judged on the others.
        """
        if samples < 1:
            raise ValueError("need at least one sample")
        elements = [self.system.element(x.word) for x in elements]
        dec = self.decompose(elements)
        start = [Rat(q) for q in a_start]
        end = [Rat(q) for q in a_end]
        forms: _FormData | None = None
        keys: list[tuple[CoxElt, int]] | None = None
        per_sample: list[list[tuple[int, int, int]]] = []
        ts: list[Rat] = []
        avals: list[list[Rat]] = []
        for j in range(samples):
            tau = Rat(j, samples - 1) if samples > 1 else Rat(0)
            a_j = [p + tau * (q - p) for p, q in zip(start, end)]
            analysis = self.analyze(elements, a_j, dec=dec, forms=forms)
            forms = analysis.forms
            if keys is None:
                keys = analysis.level_keys()
            per_sample.append(
                [
                    exactlin.signature(self.field, analysis.form(z, d))
                    for z, d in keys
                ]
            )
            ts.append(tau)
            avals.append(a_j)
        lines = []
        degenerate: list[tuple[int, Rat]] = []
        assert keys is not None
        for col, (z, d) in enumerate(keys):
            trips = [per_sample[j][col] for j in range(samples)]
            bad = [j for j, (_, _, zr) in enumerate(trips) if zr > 0]
            sigs = {
                (p + n, p - n)
                for j, (p, n, zr) in enumerate(trips)
                if j not in bad
            }
            lines.append(
                ScanLine(
                    z=z,
                    d=d,
                    ranks=[p + n for p, n, _ in trips],
                    signatures=[p - n for p, n, _ in trips],
                    degenerate=bad,
                    constant=len(sigs) <= 1,
                )
            )
            degenerate.extend((j, ts[j]) for j in bad)
        return ConservationReport(
            factors=elements,
            ts=ts,
            a_values=avals,
            lines=lines,
            constant=all(ln.constant for ln in lines),
            degenerate=sorted(set(degenerate)),
        )


# -- per-product analysis ------------------------------------------------------


class _FormData:
    """Reference pairings of one decomposition; operator-independent."""

    def __init__(self, dec: Decomposer, decomposition: Decomposition):
        self.dec = dec
        self.decomposition = decomposition
        self.engine = FormEngine(dec.frame, decomposition.span)
        self._pairings: dict[tuple, list] = {}

    def pairing(self, z: CoxElt, d: int, groups) -> list[list[tuple]]:
        """P[b][c]: bottom of slot b at level -d against the rho-power
        reference pushed through slot c at level +d, over nu."""
        key = (z.word, d)
        hit = self._pairings.get(key)
        if hit is None:
            low = groups.get(-d, [])
            high = groups.get(d, [])
            field = self.dec.field
            nu = self.dec.nu(z)
            rho_l = self.dec.rho_power(z.length)
            refs = [[rho_l * g for g in s.incl[0]] for s in high]
            hit = [
                [field.div(self.engine.value(sb.incl[0], ref), nu) for ref in refs]
                for sb in low
            ]
            self._pairings[key] = hit
        return hit


class ProductAnalysis:
    """Slot-level operator data for one product and one operator choice."""

    def __init__(self, dec: Decomposer, elements, decomposition, a, forms=None):
        self.dec = dec
        self.field = dec.field
        self.elements = list(elements)
        self.decomposition = decomposition
        self.span = decomposition.span
        self.a = list(a)
        self.total_length = sum(x.length for x in self.elements)
        self.operator = self.span.lefschetz(self.a)
        self.groups: dict[CoxElt, dict[int, list[Slot]]] = {}
        for s in decomposition.slots:
            self.groups.setdefault(s.element, {}).setdefault(s.shift, []).append(s)
        self.forms = forms if forms is not None else _FormData(dec, decomposition)
        self._lam: dict[tuple, list] = {}
        self._chain: dict[tuple, list] = {}
        self._form: dict[tuple, list] = {}

    def level_keys(self) -> list[tuple[CoxElt, int]]:
        """(z, d) pairs with slots at level -d, in report order."""
        out = []
        for z in self.decomposition.elements():
            ds = sorted(-k for k in self.groups[z] if k <= 0)
            out.extend((z, d) for d in ds)
        return out

    def multiplicity(self, z: CoxElt, k: int) -> int:
        return len(self.groups.get(z, {}).get(k, []))

    def slot_operator(
        self, z: CoxElt, k: int, k2: int, apply_fn: Callable | None = None
    ) -> list[list[tuple]]:
        """Scalar matrix of an operator between the (z, k) and (z, k2)
        slot families; defaults to the configured junction operator.

        The composite projection o operator o inclusion is an
        endomorphism of the summand in degree zero, so it must act as a
        scalar on the bottom generator; anything else raises.
        """
        real, field = self.dec.real, self.field
        src = self.groups.get(z, {}).get(k, [])
        dst = self.groups.get(z, {}).get(k2, [])
        out = []
        for sb in dst:
            row = []
            for sa in src:
                vec = (
                    apply_fn(sa.incl[0])
                    if apply_fn is not None
                    else _vec_apply(real, sa.incl[0], self.operator)
                )
                img = _vec_apply(real, vec, sb.proj)
                c = _constant_of(field, img[0])
                if c is None or any(not f.is_zero for f in img[1:]):
                    raise RuntimeError(
                        "slot operator is not scalar on the bottom generator"
                    )
                row.append(c)
            out.append(row)
        return out

    def lam(self, z: CoxElt, k: int) -> list[list[tuple]]:
        """The junction operator from level k to level k + 2, as scalars."""
        key = (z.word, k)
        hit = self._lam.get(key)
        if hit is None:
            hit = self.slot_operator(z, k, k + 2)
            self._lam[key] = hit
        return hit

    def chain(self, z: CoxElt, d: int) -> list[list[tuple]]:
        """The d-fold operator composite from level -d up to level +d."""
        key = (z.word, d)
        hit = self._chain.get(key)
        if hit is None:
            hit = exactlin.identity(self.field, self.multiplicity(z, -d))
            for k in range(-d, d, 2):
                hit = exactlin.matmul(self.field, self.lam(z, k), hit)
            self._chain[key] = hit
        return hit

    def pairing(self, z: CoxElt, d: int) -> list[list[tuple]]:
        return self.forms.pairing(z, d, self.groups.get(z, {}))

    def form(self, z: CoxElt, d: int) -> list[list[tuple]]:
        """The level-d form: reference pairing times the operator chain."""
        key = (z.word, d)
        hit = self._form.get(key)
        if hit is None:
            field = self.field
            hit = exactlin.matmul(field, self.pairing(z, d), self.chain(z, d))
            for i in range(len(hit)):
                for j in range(i):
                    if not field.eq(hit[i][j], hit[j][i]):
                        raise RuntimeError("level form is not symmetric")
            self._form[key] = hit
        return hit

    def primitive_basis(self, z: CoxElt, d: int) -> list[list[tuple]]:
        """Rows spanning the kernel of one more operator step past +d."""
        m = self.multiplicity(z, -d)
        if self.multiplicity(z, d + 2) == 0:
            return exactlin.identity(self.field, m)
        ext = exactlin.matmul(self.field, self.lam(z, d), self.chain(z, d))
        return exactlin.nullspace(self.field, ext)

    def epsilon(self, z: CoxElt, d: int) -> int:
        gap = self.total_length - z.length - d
        if gap % 2:
            raise RuntimeError("level parity violates the length grading")
        return gap // 2

    # -- reports ---------------------------------------------------------

    def lefschetz_report(self) -> "LefschetzReport":
        lines = []
        for z, d in self.level_keys():
            dim = self.multiplicity(z, -d)
            rank = exactlin.rank(self.field, self.chain(z, d))
            lines.append(
                RankLine(
                    z=z,
                    d=d,
                    dim=dim,
                    rank=rank,
                    passed=rank == dim == self.multiplicity(z, d),
                )
            )
        return LefschetzReport(
            factors=self.elements,
            a=self.a,
            lines=lines,
            passed=all(ln.passed for ln in lines),
        )

    def signature_report(self) -> "SignatureReport":
        field = self.field
        lines = []
        for z, d in self.level_keys():
            v = self.primitive_basis(z, d)
            q = exactlin.matmul(
                field,
                exactlin.matmul(field, v, self.form(z, d)),
                exactlin.transpose(v),
            )
            pos, neg, zer = exactlin.signature(field, q)
            eps = self.epsilon(z, d)
            definite = neg == 0 if eps % 2 == 0 else pos == 0
            lines.append(
                SignatureLine(
                    z=z,
                    d=d,
                    rank=pos + neg,
                    signature=pos - neg,
                    epsilon=eps,
                    passed=zer == 0 and definite,
                )
            )
        return SignatureReport(
            factors=self.elements,
            a=self.a,
            lines=lines,
            passed=all(ln.passed for ln in lines),
        )


# -- reports -------------------------------------------------------------------


def _rat_json(q: Rat):
    return int(q) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _factor_fields(factors: list[CoxElt]) -> dict:
    if len(factors) == 2:
        return {
            "x": format_word(factors[0].word),
            "y": format_word(factors[1].word),
        }
    return {"factors": [format_word(x.word) for x in factors]}


@dataclass
class RankLine:
    z: CoxElt
    d: int
    dim: int
    rank: int
    passed: bool


@dataclass
class LefschetzReport:
    factors: list[CoxElt]
    a: list[Rat]
    lines: list[RankLine]
    passed: bool

    def to_json(self) -> dict:
        out = _factor_fields(self.factors)
        out["a"] = [_rat_json(q) for q in self.a]
        out["results"] = [
            {
                "z": format_word(ln.z.word),
                "d": ln.d,
                "dim": ln.dim,
                "rank": ln.rank,
                "pass": ln.passed,
            }
            for ln in self.lines
        ]
        return out


@dataclass
class SignatureLine:
    z: CoxElt
    d: int
    rank: int
    signature: int
    epsilon: int
    passed: bool


@dataclass
class SignatureReport:
    factors: list[CoxElt]
    a: list[Rat]
    lines: list[SignatureLine]
    passed: bool

    def to_json(self) -> dict:
        out = _factor_fields(self.factors)
        out["a"] = [_rat_json(q) for q in self.a]
        out["results"] = [
            {
                "z": format_word(ln.z.word),
                "d": ln.d,
                "rank": ln.rank,
                "signature": ln.signature,
                "epsilon": ln.epsilon,
                "pass": ln.passed,
            }
            for ln in self.lines
        ]
        return out


@dataclass
class ScanLine:
    z: CoxElt
    d: int
    ranks: list[int]
    signatures: list[int]
    degenerate: list[int]
    constant: bool


@dataclass
class ConservationReport:
    factors: list[CoxElt]
    ts: list[Rat]
    a_values: list[list[Rat]]
    lines: list[ScanLine]
    constant: bool
    degenerate: list[tuple[int, Rat]]

    def to_json(self) -> dict:
        return {
            "factors": [format_word(x.word) for x in self.factors],
            "samples": [
                {"t": _rat_json(t), "a": [_rat_json(q) for q in a]}
                for t, a in zip(self.ts, self.a_values)
            ],
            "results": [
                {
                    "z": format_word(ln.z.word),
                    "d": ln.d,
                    "ranks": ln.ranks,
                    "signatures": ln.signatures,
                    "degenerate_samples": ln.degenerate,
                    "constant": ln.constant,
                }
                for ln in self.lines
            ],
            "constant": self.constant,
            "degenerate": [
                {"sample": j, "t": _rat_json(t)} for j, t in self.degenerate
            ],
        }


# -- two-sided block signature identities --------------------------------------


@dataclass
class BlockSignatureReport:
    n: int
    m: int
    hyperbolic_signature: tuple[int, int, int]
    extended_signature: tuple[int, int, int]
    base_signature: tuple[int, int, int]
    passed: bool

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "hyperbolic_signature": list(self.hyperbolic_signature),
            "extended_signature": list(self.extended_signature),
            "base_signature": list(self.base_signature),
            "pass": self.passed,
        }


def block_signature_check(field, r_mat, q_mat) -> BlockSignatureReport:
    """Signature identities of hyperbolic block extensions.

    With R symmetric invertible, [[R, R], [R, 0]] has signature zero,
    and padding it with an orthogonal Q block leaves exactly the
    signature of Q.  Singular R is rejected: the cancellation argument
    needs the off-diagonal block to have full rank.
    """
    n = len(r_mat)
    m = len(q_mat)
    zero = field.zero
    for mat, sz, name in ((r_mat, n, "R"), (q_mat, m, "Q")):
        for i in range(sz):
            if len(mat[i]) != sz:
                raise ValueError(f"{name} must be square")
            for j in range(sz):
                if not field.eq(mat[i][j], mat[j][i]):
                    raise ValueError(f"{name} must be symmetric")
    try:
        exactlin.inverse(field, [list(row) for row in r_mat])
    except ZeroDivisionError:
        raise ValueError("R is singular") from None

    hyper = [
        [
            r_mat[i % n][j % n] if (i // n) + (j // n) < 2 else zero
            for j in range(2 * n)
        ]
        for i in range(2 * n)
    ]
    sig_h = exactlin.signature(field, hyper)
    ext = [
        [hyper[i][j] if j < 2 * n else zero for j in range(2 * n + m)]
        for i in range(2 * n)
    ] + [
        [zero] * (2 * n) + list(q_mat[i]) for i in range(m)
    ]
    sig_e = exactlin.signature(field, ext)
    sig_q = exactlin.signature(field, q_mat)
    passed = sig_h[0] == sig_h[1] and (sig_e[0] - sig_e[1]) == (
        sig_q[0] - sig_q[1]
    )
    return BlockSignatureReport(
        n=n,
        m=m,
        hyperbolic_signature=sig_h,
        extended_signature=sig_e,
        base_signature=sig_q,
        passed=passed,
    )
