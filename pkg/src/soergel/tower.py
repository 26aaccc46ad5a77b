"""Indecomposable summands carved out of tensor words, one letter at a time.

The summand attached to a group element z lives inside (summand of the
parent of z) tensor one elementary factor.  Maps in and out of the
product are solved for every shorter summand predicted at the Hecke
level; composing them on bottom generators gives invertible scalar
pairings, so the complementary idempotent is explicit and its image is
the top summand.  Free generators of that image are selected degree by
degree and certified by dimension count against the graded character.

Hom spaces between left spans are exact finite linear systems: a graded
left-linear map between free left spans commutes with the two-sided
structure iff it commutes with right multiplication by each polynomial
generator, one equation per (domain column, variable).
"""

from __future__ import annotations

from functools import lru_cache

from . import exactlin, modsolve
from .bimodule import BSElt, BSModule, _embed
from .coxeter import CoxElt
from .hecke import KLTable, kl_basis, mu
from .realization import PolyElt, Realization

__all__ = [
    "SpanBasis",
    "Summand",
    "PairPart",
    "PairSplit",
    "Tower",
    "graded_hom",
    "graded_character",
]


@lru_cache(maxsize=None)
def _monomials(rank: int, deg: int) -> tuple[tuple[int, ...], ...]:
    """All exponent tuples of total degree deg, lexicographic."""
    if deg < 0:
        return ()
    if rank == 1:
        return ((deg,),)
    out = []
    for k in range(deg, -1, -1):
        out.extend((k,) + rest for rest in _monomials(rank - 1, deg - k))
    return tuple(out)


def _flat(x: BSElt) -> dict:
    """Coordinates of x over (bit pattern, exponent tuple) keys."""
    out = {}
    for bits, p in x.terms.items():
        for e, c in p.terms.items():
            out[(bits, e)] = c
    return out


def _shift_exps(flat: dict, mono: tuple) -> dict:
    if not any(mono):
        return flat
    return {
        (bits, tuple(a + b for a, b in zip(e, mono))): c for (bits, e), c in flat.items()
    }


class SpanBasis:
    """A graded free left span inside an enveloping tensor module.

    Columns must be homogeneous; left-independence is certified on the
    fly because `expand` refuses non-unique expansions.
    """

    def __init__(self, module: BSModule, columns, standard: bool = False):
        self.module = module
        self.real = module.real
        self.field = module.real.field
        self.columns = list(columns)
        self.degs = []
        for c in self.columns:
            dd = c.soergel_degrees()
            if len(dd) != 1:
                raise ValueError("span columns must be homogeneous")
            self.degs.append(dd[0])
        self._flat_cols = [_flat(c) for c in self.columns]
        self._std_index = (
            {bits: i for i, bits in enumerate(module.basis_bits())} if standard else None
        )
        self._slices: dict[int, tuple] = {}
        self._ra: dict[int, list] = {}
        self._rm_flat: dict[tuple, dict] = {}
        self._cross: dict[tuple, list] = {}

    @classmethod
    def standard(cls, module: BSModule) -> "SpanBasis":
        cols = [module.basis_elt(bits) for bits in module.basis_bits()]
        return cls(module, cols, standard=True)

    @property
    def rank(self) -> int:
        return len(self.columns)

    def graded_rank(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for d in self.degs:
            out[d] = out.get(d, 0) + 1
        return out

    # -- degree slices -------------------------------------------------------

    def slice_gens(self, d: int) -> list[tuple[int, tuple]]:
        """Free generators of the degree-d slice: (column index, monomial)."""
        return self._slice(d)[0]

    def _slice(self, d: int):
        hit = self._slices.get(d)
        if hit is not None:
            return hit
        gens: list[tuple[int, tuple]] = []
        flats: list[dict] = []
        for i, di in enumerate(self.degs):
            gap = d - di
            if gap < 0 or gap % 2:
                continue
            for mono in _monomials(self.real.rank, gap // 2):
                gens.append((i, mono))
                flats.append(_shift_exps(self._flat_cols[i], mono))
        self._slices[d] = (gens, flats)
        return self._slices[d]

    def slice_element(self, gen: tuple[int, tuple]) -> BSElt:
        i, mono = gen
        if not any(mono):
            return self.columns[i]
        return self.columns[i].left_mul(PolyElt(self.real, {mono: self.field.one}))

    def combine(self, gens, vec) -> BSElt:
        """Sum of vec[k] times the k-th listed generator."""
        out = self.module.zero()
        for g, c in zip(gens, vec):
            if not self.field.is_zero(c):
                out = out + self.slice_element(g).scaled(c)
        return out

    # -- expansion and right action -------------------------------------------

    def expand(self, x: BSElt) -> list[PolyElt]:
        """Left coefficients of x over the columns; unique or ValueError."""
        return self.expand_many([x])[0]

    def expand_many(self, xs) -> list[list[PolyElt]]:
        """Expand several elements, sharing one elimination per degree."""
        if self._std_index is not None:
            out = []
            for x in xs:
                coeffs = [self.real.zero] * len(self.columns)
                for bits, p in x.terms.items():
                    coeffs[self._std_index[bits]] = p
                out.append(coeffs)
            return out
        field = self.field
        out = [[self.real.zero] * len(self.columns) for _ in xs]
        groups: dict[int, list[int]] = {}
        for n, x in enumerate(xs):
            for d in x.soergel_degrees():
                groups.setdefault(d, []).append(n)
        for d, members in sorted(groups.items()):
            gens, flats = self._slice(d)
            rhs_flats = [_flat(xs[n].component(d)) for n in members]
            keys = {k for fl in flats for k in fl}
            for rf in rhs_flats:
                keys.update(rf)
            keys = sorted(keys)
            rows = []
            for key in keys:
                row = {}
                for pos, fl in enumerate(flats):
                    c = fl.get(key)
                    if c is not None:
                        row[pos] = c
                rows.append(row)
            rhs_cols = [
                [rf.get(key, field.zero) for key in keys] for rf in rhs_flats
            ]
            sols = modsolve.field_solve_columns(field, rows, len(gens), rhs_cols)
            for n, sol in zip(members, sols):
                for (i, mono), c in zip(gens, sol):
                    if not field.is_zero(c):
                        out[n][i] = out[n][i] + PolyElt(self.real, {mono: c})
        return out

    def ra(self, t: int) -> list[list[PolyElt]]:
        """ra[j][i]: column_j * x_t = sum_i ra[j][i] * column_i."""
        hit = self._ra.get(t)
        if hit is None:
            var = self.real.variable(t)
            hit = self.expand_many([c.right_mul(var) for c in self.columns])
            self._ra[t] = hit
        return hit

    def rm_flat(self, i: int, t: int) -> dict:
        """Flat coordinates of column_i * x_t."""
        key = (i, t)
        hit = self._rm_flat.get(key)
        if hit is None:
            hit = _flat(self.columns[i].right_mul(self.real.variable(t)))
            self._rm_flat[key] = hit
        return hit

    def cross(self, f: PolyElt) -> list[list[PolyElt]]:
        """cross[j][i]: column_j * f = sum_i cross[j][i] * column_i."""
        key = tuple(sorted(f.terms.items()))
        hit = self._cross.get(key)
        if hit is None:
            hit = self.expand_many([c.right_mul(f) for c in self.columns])
            self._cross[key] = hit
        return hit


def graded_hom(a: SpanBasis, b: SpanBasis, k: int) -> list[list[BSElt]]:
    """Basis of degree-k two-sided maps from span a to span b.

    Each map is returned as the list of images of a's columns.  The
    unknowns are slice coordinates of those images; the equations force
    commutation with right multiplication by every variable.
    """
    field = a.field
    rank = a.real.rank
    unk_of: dict[tuple[int, int], int] = {}
    gens_of: list = []
    for j in range(a.rank):
        gens, _ = b._slice(a.degs[j] + k)
        gens_of.append(gens)
        for pos in range(len(gens)):
            unk_of[(j, pos)] = len(unk_of)
    n_unk = len(unk_of)
    if n_unk == 0:
        return []
    rows = []
    for j in range(a.rank):
        for t in range(rank):
            bucket: dict = {}
            for i, f in enumerate(a.ra(t)[j]):
                if f.is_zero:
                    continue
                _, flats_i = b._slice(a.degs[i] + k)
                for pos, fl in enumerate(flats_i):
                    u = unk_of[(i, pos)]
                    for e_f, c_f in f.terms.items():
                        for (bits, e), c in fl.items():
                            key = (bits, tuple(x + y for x, y in zip(e, e_f)))
                            row = bucket.setdefault(key, {})
                            prod = field.mul(c_f, c)
                            row[u] = field.add(row[u], prod) if u in row else prod
            for pos, (ci, mono) in enumerate(gens_of[j]):
                u = unk_of[(j, pos)]
                for (bits, e), c in b.rm_flat(ci, t).items():
                    key = (bits, tuple(x + y for x, y in zip(e, mono)))
                    row = bucket.setdefault(key, {})
                    row[u] = field.sub(row[u], c) if u in row else field.neg(c)
            rows.extend(r for r in bucket.values() if r)
    sols = modsolve.field_nullspace(field, rows, n_unk)
    out = []
    for vec in sols:
        images = []
        for j in range(a.rank):
            img = b.module.zero()
            for pos, g in enumerate(gens_of[j]):
                c = vec[unk_of[(j, pos)]]
                if not field.is_zero(c):
                    img = img + b.slice_element(g).scaled(c)
            images.append(img)
        out.append(images)
    return out


def graded_character(table: KLTable, z: CoxElt) -> dict[int, int]:
    """Graded rank of the summand attached to z as a free left module."""
    total: dict[int, int] = {}
    for x, h in kl_basis(table, z).terms.items():
        for e, c in h.bar().shift(x.length).coeffs.items():
            total[e] = total.get(e, 0) + c
    return {e: c for e, c in total.items() if c}


class Summand:
    """An indecomposable summand realized inside its ambient tensor word."""

    __slots__ = ("element", "word", "span", "char")

    def __init__(self, element: CoxElt, word: tuple, span: SpanBasis, char: dict):
        self.element = element
        self.word = word
        self.span = span
        self.char = char

    @property
    def bottom(self) -> BSElt:
        return self.span.columns[0]


class PairPart:
    """One isotypic slot of a two-factor split.

    homs: maps into the product, as images of the part's canonical span
    columns.  projs: maps out of the product, as images of the product's
    span columns inside the part's canonical ambient.  Both are solution
    bases, not yet normalized against each other; for folded splits they
    are candidate spaces that later stages prune by pairing rank.
    """

    __slots__ = ("element", "shift", "mult", "homs", "projs")

    def __init__(self, element: CoxElt, shift: int, mult: int, homs: list, projs: list):
        self.element = element
        self.shift = shift
        self.mult = mult
        self.homs = homs
        self.projs = projs


class PairSplit:
    __slots__ = ("element", "letter", "module", "span", "parts", "reduced")

    def __init__(self, element, letter, module, span, parts, reduced):
        self.element = element
        self.letter = letter
        self.module = module
        self.span = span
        self.parts = parts
        self.reduced = reduced


class Tower:
    """Per-system cache of summands and two-factor splits."""

    def __init__(self, real: Realization):
        self.real = real
        self.system = real.system
        self.table = KLTable(real.system)
        self._summands: dict[tuple, Summand] = {}
        self._pairs: dict[tuple, PairSplit] = {}

    # -- summands --------------------------------------------------------------

    def summand(self, z: CoxElt) -> Summand:
        key = z.word
        hit = self._summands.get(key)
        if hit is not None:
            return hit
        if z.is_identity:
            mod = BSModule(self.real, ())
            out = Summand(z, (), SpanBasis(mod, [mod.generator()]), {0: 1})
            self._summands[key] = out
            return out
        parent = self.system.element(z.word[:-1])
        s = z.word[-1]
        split = self.pair(parent, s)
        if not split.reduced:
            raise RuntimeError("canonical step of a reduced word cannot fold back")
        for part in split.parts:
            if part.element == z:
                break
        else:
            raise RuntimeError("top summand missing from its own tower step")
        out = self._summands[key]  # pair() registers the freshly carved top
        return out

    def _carve_top(self, z: CoxElt, module: BSModule, span: SpanBasis, junk):
        """Carve the top summand as the image of a split idempotent.

        Each lower summand arrives with solved maps in and out of the
        product.  Pairing them on bottom generators gives an invertible
        scalar matrix per lower element, so ``id - sum incl P^-1 proj``
        projects onto a complement of everything lower.  Free left-module
        generators of the image are then selected degree by degree and the
        counts are certified against the graded character.  Returns the
        summand together with the projected images of every product column
        (the retraction onto the carved copy).
        """
        char = graded_character(self.table, z)
        degrees = sorted(char)
        if char[degrees[0]] != 1 or degrees[0] != -z.length:
            raise RuntimeError("character must start with a single bottom generator")
        field = span.field
        ncols = span.rank
        zero_poly = PolyElt(self.real, {})
        ecoef = [[zero_poly] * ncols for _ in range(ncols)]
        unit = self.real.from_scalar(field.one)
        for j in range(ncols):
            ecoef[j][j] = unit
        for low, homs, projs in junk:
            m = len(homs)
            zspan = low.span
            homcoef = [span.expand_many(h) for h in homs]
            projcoef = [zspan.expand_many(p) for p in projs]
            bottoms = span.expand_many([h[0] for h in homs])
            pairing = []
            for a in range(m):
                row = []
                for b in range(m):
                    acc = [zero_poly] * zspan.rank
                    for jj, f in enumerate(bottoms[b]):
                        if f.is_zero:
                            continue
                        for i, g in enumerate(projcoef[a][jj]):
                            if not g.is_zero:
                                acc[i] = acc[i] + f * g
                    for i in range(1, zspan.rank):
                        if not acc[i].is_zero:
                            raise RuntimeError("pairing failed to be scalar on a bottom generator")
                    if any(e != (0,) * self.real.rank for e in acc[0].terms):
                        raise RuntimeError("pairing failed to be scalar on a bottom generator")
                    row.append(acc[0].constant())
                pairing.append(row)
            pinv = exactlin.inverse(field, pairing)
            for j in range(ncols):
                tgt = ecoef[j]
                for a in range(m):
                    for b in range(m):
                        c = pinv[b][a]
                        if field.is_zero(c):
                            continue
                        for i in range(zspan.rank):
                            g = projcoef[a][j][i]
                            if g.is_zero:
                                continue
                            g = g.scaled(c)
                            row = homcoef[b][i]
                            for jj in range(ncols):
                                if not row[jj].is_zero:
                                    tgt[jj] = tgt[jj] - g * row[jj]
        vecs = []
        for j in range(ncols):
            gens, _ = span._slice(span.degs[j])
            pos_of = {g: p for p, g in enumerate(gens)}
            vec = [field.zero] * len(gens)
            for i, f in enumerate(ecoef[j]):
                for e, c in f.terms.items():
                    p = pos_of.get((i, e))
                    if p is None:
                        raise RuntimeError("projected column is not homogeneous")
                    vec[p] = field.add(vec[p], c)
            vecs.append(vec)
        picked: list[tuple[int, list]] = []  # (degree, slice vector)
        picked_js: list[int] = []
        for d in sorted(set(span.degs)):
            gens, _ = span._slice(d)
            pos_of = {g: p for p, g in enumerate(gens)}
            lower = []
            for d0, vec0 in picked:
                gens0, _ = span._slice(d0)
                for mshift in _monomials(self.real.rank, (d - d0) // 2):
                    shifted = [field.zero] * len(gens)
                    for (i, mono), c in zip(gens0, vec0):
                        if field.is_zero(c):
                            continue
                        tgt = (i, tuple(x + y for x, y in zip(mono, mshift)))
                        shifted[pos_of[tgt]] = field.add(shifted[pos_of[tgt]], c)
                    lower.append(shifted)
            cand = [j for j in range(ncols) if span.degs[j] == d]
            kept = modsolve.independent_tail(field, lower, [vecs[j] for j in cand])
            if len(kept) != char.get(d, 0):
                raise RuntimeError("projected columns disagree with the graded character")
            for k in kept:
                picked.append((d, vecs[cand[k]]))
                picked_js.append(cand[k])
        eimgs = []
        for j in range(ncols):
            col = module.zero()
            for i, f in enumerate(ecoef[j]):
                if not f.is_zero:
                    col = col + span.columns[i].left_mul(f)
            eimgs.append(col)
        out = Summand(z, module.word, SpanBasis(module, [eimgs[j] for j in picked_js]), char)
        return out, eimgs

    # -- two-factor splits -------------------------------------------------------

    def pair(self, w: CoxElt, t: int) -> PairSplit:
        key = (w.word, t)
        hit = self._pairs.get(key)
        if hit is not None:
            return hit
        base = self.summand(w)
        word = base.word + (t,)
        module = BSModule(self.real, word)
        cols = []
        for c in base.span.columns:
            cols.append(_embed(module, c, 0))
            cols.append(_embed(module, c, 1))
        span = SpanBasis(module, cols)
        t_elt = self.system.simple(t)
        top = self.system.multiply(w, t_elt)
        reduced = top.length == w.length + 1
        parts: list[PairPart] = []
        if reduced:
            guide = mu(self.table, w, t_elt)
            if guide.get(top) is None or guide[top].coeffs != {0: 1}:
                raise RuntimeError("reduced product lost its top term")
            junk: list[tuple[Summand, list, list]] = []
            for zp, m in sorted(guide.items(), key=lambda kv: (-kv[0].length, kv[0].word)):
                if zp == top:
                    continue
                if set(m.coeffs) != {0}:
                    raise RuntimeError("reduced split with a shifted lower term")
                low = self.summand(zp)
                homs = graded_hom(low.span, span, 0)
                if len(homs) != m.coeffs[0]:
                    raise RuntimeError(
                        f"hom count {len(homs)} disagrees with predicted "
                        f"multiplicity {m.coeffs[0]} at {zp.word}"
                    )
                projs = graded_hom(span, low.span, 0)
                if len(projs) != m.coeffs[0]:
                    raise RuntimeError(
                        f"projection count {len(projs)} disagrees with predicted "
                        f"multiplicity {m.coeffs[0]} at {zp.word}"
                    )
                junk.append((low, homs, projs))
                parts.append(PairPart(zp, 0, len(homs), homs, projs))
            if top.word == word and top.word not in self._summands:
                carved, eimgs = self._carve_top(top, module, span, junk)
                self._summands[top.word] = carved
                top_homs = [list(carved.span.columns)]
                top_projs = [eimgs]
            else:
                top_summ = self.summand(top)
                top_homs = graded_hom(top_summ.span, span, 0)
                if len(top_homs) != 1:
                    raise RuntimeError("top summand must map in along one direction")
                top_projs = graded_hom(span, top_summ.span, 0)
                if len(top_projs) != 1:
                    raise RuntimeError("top summand must split off along one direction")
            parts.insert(0, PairPart(top, 0, 1, top_homs, top_projs))
            total = self.summand(top).span.rank + sum(
                p.mult * self.summand(p.element).span.rank for p in parts[1:]
            )
            if total != span.rank:
                raise RuntimeError("graded rank accounting failed on a reduced split")
        else:
            homs_up = graded_hom(base.span, span, -1)
            if len(homs_up) != 1:
                raise RuntimeError("folded split must embed one raised copy")
            homs_down = graded_hom(base.span, span, 1)
            if not homs_down:
                raise RuntimeError("folded split lost its lowered copy")
            projs_up = graded_hom(span, base.span, 1)
            projs_down = graded_hom(span, base.span, -1)
            if len(projs_down) != 1:
                raise RuntimeError("folded split must retract onto one lowered copy")
            if len(projs_up) != len(homs_down):
                raise RuntimeError("folded split candidate spaces are unbalanced")
            parts.append(PairPart(w, 1, 1, homs_up, projs_up))
            parts.append(PairPart(w, -1, 1, homs_down, projs_down))
        out = PairSplit(w, t, module, span, parts, reduced)
        self._pairs[key] = out
        return out
