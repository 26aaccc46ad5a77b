"""Hecke algebra arithmetic and the Kazhdan-Lusztig basis.

Conventions.  The standard basis {H_x} multiplies by

    H_x H_s = H_{xs}                      if l(xs) > l(x),
    H_x H_s = H_{xs} + (v^{-1} - v) H_x   otherwise,

so H_s^2 = H_e + (v^{-1} - v)H_s, and the self-dual generator is
b_s = H_s + v H_e.  The bar involution sends v to v^{-1} and H_x to
(H_{x^{-1}})^{-1}; the KL basis element b_x is the unique bar-invariant

    b_x = H_x + sum_{y < x} h_{y,x} H_y,      h_{y,x} in v Z[v],

computed by the classical induction: multiply b_{x'} b_s for a right
descent s of x = x's and strip lower KL terms, whose coefficients are
exposed as degree-0 constants.

Products in the KL basis,

    b_x b_y = sum_z  mu_{x,y}^z  b_z,

are the structure constants everything downstream consumes: their
coefficient in v^{-i} is the dimension of the degree-i multiplicity
space of the summand indexed by z inside the tensor product of
indecomposables indexed by x and y.

`KLTable` caches rows h_{.,x} (fill-on-demand, then optionally frozen
for read-only sharing across workers); `KLScan` is the flat int-indexed
engine used for exhaustive (x, y) sweeps over a whole finite group.
"""

from __future__ import annotations

import json
from typing import Iterable, Iterator

from .coxeter import CoxElt, CoxeterMatrix, CoxeterSystem, format_word
from .laurent import Laurent

_V = Laurent({1: 1})
_VINV = Laurent({-1: 1})
_GAP = Laurent({-1: 1, 1: -1})  # v^{-1} - v, the quadratic defect
_GAP_BAR = Laurent({1: 1, -1: -1})  # v - v^{-1}, from H_s^{-1} = H_s + (v - v^{-1})
_Q2 = Laurent({-1: 1, 1: 1})  # v + v^{-1}


class HeckeElt:
    """Finitely supported map CoxElt -> Laurent; zero values never stored."""

    __slots__ = ("system", "terms")

    def __init__(self, system: CoxeterSystem, terms: dict[CoxElt, Laurent]):
        self.system = system
        self.terms = {x: c for x, c in terms.items() if c}

    @classmethod
    def unit(cls, system: CoxeterSystem) -> "HeckeElt":
        return cls(system, {system.identity: Laurent({0: 1})})

    @classmethod
    def std(cls, system: CoxeterSystem, x: CoxElt) -> "HeckeElt":
        return cls(system, {system.element(x): Laurent({0: 1})})

    def coeff(self, x: CoxElt) -> Laurent:
        return self.terms.get(x, Laurent({}))

    def support(self) -> list[CoxElt]:
        return sorted(self.terms)

    def __add__(self, other: "HeckeElt") -> "HeckeElt":
        out = dict(self.terms)
        for x, c in other.terms.items():
            out[x] = out.get(x, Laurent({})) + c
        return HeckeElt(self.system, out)

    def __sub__(self, other: "HeckeElt") -> "HeckeElt":
        out = dict(self.terms)
        for x, c in other.terms.items():
            out[x] = out.get(x, Laurent({})) - c
        return HeckeElt(self.system, out)

    def scaled(self, c: Laurent | int) -> "HeckeElt":
        return HeckeElt(self.system, {x: f * c for x, f in self.terms.items()})

    def __mul__(self, other: "HeckeElt") -> "HeckeElt":
        return std_mul(self, other)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, HeckeElt)
            and self.system.matrix == other.system.matrix
            and self.terms == other.terms
        )

    def __bool__(self) -> bool:
        return bool(self.terms)

    def bar(self) -> "HeckeElt":
        """The v -> v^{-1}, H_x -> (H_{x^{-1}})^{-1} ring involution."""
        W = self.system
        out = HeckeElt(W, {})
        for x, c in self.terms.items():
            acc = HeckeElt(W, {W.identity: c.bar()})
            # bar(H_x) = H_{s_1}^{-1} ... H_{s_k}^{-1} along a reduced word,
            # and H_s^{-1} = H_s + (v - v^{-1}) H_e.
            for s in x.word:
                acc = _rmul_gen(acc, s) + acc.scaled(_GAP_BAR)
            out = out + acc
        return out

    def format(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for x in self.support():
            bits.append(f"({self.terms[x].format()})*H({format_word(x.word)})")
        return " + ".join(bits)

    def __repr__(self) -> str:
        return f"HeckeElt({self.format()})"


def _rmul_gen(a: HeckeElt, s: int) -> HeckeElt:
    """Right multiplication by the standard generator H_s."""
    W = a.system
    gen = W.simple(s)
    out: dict[CoxElt, Laurent] = {}
    for x, c in a.terms.items():
        xs = W.multiply(x, gen)
        if xs.length > x.length:
            out[xs] = out.get(xs, Laurent({})) + c
        else:
            out[xs] = out.get(xs, Laurent({})) + c
            out[x] = out.get(x, Laurent({})) + c * _GAP
    return HeckeElt(W, out)


def std_mul(a: HeckeElt, b: HeckeElt) -> HeckeElt:
    """Product in the standard basis."""
    if a.system.matrix != b.system.matrix:
        raise ValueError("operands live in different Hecke algebras")
    out = HeckeElt(a.system, {})
    for y, c in b.terms.items():
        cur = a
        for s in y.word:
            cur = _rmul_gen(cur, s)
        out = out + cur.scaled(c)
    return out


class KLTable:
    """Cached rows h_{., x}; build phase mutates, frozen phase is read-only."""

    VERSION = 1

    def __init__(self, system: CoxeterSystem):
        self.system = system
        self.rows: dict[tuple[int, ...], dict[tuple[int, ...], Laurent]] = {}
        self.frozen = False

    # -- row computation ---------------------------------------------------

    def row(self, x: CoxElt) -> dict[tuple[int, ...], Laurent]:
        """The map y.word -> h_{y,x}, computing and caching it if needed."""
        w = self.system.element(x).word
        got = self.rows.get(w)
        if got is not None:
            return got
        if self.frozen:
            raise RuntimeError("KL table is frozen; row was never filled")
        self._fill(w)
        return self.rows[w]

    def _fill(self, w: tuple[int, ...]) -> None:
        W = self.system
        if not w:
            self.rows[w] = {(): Laurent({0: 1})}
            return
        s = w[-1]
        shorter = W.normal_form(w[:-1])
        prev = self.row(shorter)
        # b_{x'} b_s in the standard basis, term by term:
        #   y b_s -> H_{ys} + v^{+-1} H_y  (sign by whether s raises y)
        acc: dict[tuple[int, ...], Laurent] = {}
        gen = W.simple(s)
        for yw, h in prev.items():
            y = W.element(CoxElt(W, yw))
            ys = W.multiply(y, gen)
            _acc(acc, ys.word, h)
            _acc(acc, yw, h * (_V if ys.length > y.length else _VINV))
        # strip lower KL terms: their footprint is a degree-0 constant
        for uw in sorted(acc, key=lambda t: (-len(t), t)):
            if uw == w:
                continue
            c0 = acc[uw].coeff(0)
            if c0 == 0:
                continue
            for zw, h in self.row(CoxElt(W, uw)).items():
                _acc(acc, zw, h * (-c0))
        row = {yw: h for yw, h in acc.items() if h}
        assert row.get(w) == Laurent({0: 1}), "KL recursion lost monicity"
        for yw, h in row.items():
            if yw != w:
                assert h.valuation >= 1, "stripped row kept a constant term"
        self.rows[w] = row

    def fill_all(self) -> None:
        for x in self.system.enumerate():
            self.row(x)

    def freeze(self) -> "KLTable":
        self.frozen = True
        return self

    # -- scalars off the rows ----------------------------------------------

    def kl_mu(self, y: CoxElt, x: CoxElt) -> int:
        """mu(y, x): the coefficient of v in h_{y,x}."""
        h = self.row(x).get(self.system.element(y).word)
        return h.coeff(1) if h is not None else 0

    # -- persistence ---------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "version": self.VERSION,
            "coxeter": self.system.matrix.to_json(),
            "rows": {
                format_word(w): {
                    format_word(yw): h.format() for yw, h in sorted(row.items())
                }
                for w, row in sorted(self.rows.items())
            },
        }

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh, indent=1)

    @classmethod
    def from_json(cls, data: dict, system: CoxeterSystem | None = None) -> "KLTable":
        if data.get("version") != cls.VERSION:
            raise ValueError(f"unsupported KL cache version {data.get('version')!r}")
        matrix = CoxeterMatrix.from_json(data["coxeter"])
        if system is None:
            system = CoxeterSystem(matrix)
        elif system.matrix != matrix:
            raise ValueError("KL cache was computed for a different Coxeter matrix")
        from .laurent import parse as parse_laurent
        from .coxeter import parse_word

        table = cls(system)
        for xs, row in data["rows"].items():
            xw = system.normal_form(parse_word(xs, system.rank)).word
            table.rows[xw] = {
                system.normal_form(parse_word(ys, system.rank)).word: parse_laurent(text)
                for ys, text in row.items()
            }
        return table

    @classmethod
    def load(cls, path: str, system: CoxeterSystem | None = None) -> "KLTable":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh), system)


def _acc(store: dict, key, val: Laurent) -> None:
    cur = store.get(key)
    store[key] = val if cur is None else cur + val


def kl_basis(table: KLTable, x: CoxElt) -> HeckeElt:
    """The self-dual basis element b_x as a standard-basis combination."""
    W = table.system
    return HeckeElt(W, {CoxElt(W, yw): h for yw, h in table.row(x).items()})


def expand_in_kl(table: KLTable, elt: HeckeElt) -> dict[CoxElt, Laurent]:
    """Expansion in the KL basis by top-down peeling; exact, asserts it lands."""
    W = table.system
    rest = {x.word: c for x, c in elt.terms.items()}
    out: dict[CoxElt, Laurent] = {}
    while rest:
        top = max(rest, key=lambda t: (len(t), t))
        m = rest.pop(top)
        if not m:
            continue
        out[CoxElt(W, top)] = m
        for yw, h in table.row(CoxElt(W, top)).items():
            if yw == top:
                continue
            cur = rest.get(yw, Laurent({})) - m * h
            if cur:
                rest[yw] = cur
            else:
                rest.pop(yw, None)
    return {z: c for z, c in out.items() if c}


def mu(table: KLTable, x: CoxElt, y: CoxElt) -> dict[CoxElt, Laurent]:
    """Structure constants mu_{x,y}^z of b_x b_y in the KL basis."""
    product = std_mul(kl_basis(table, x), kl_basis(table, y))
    return expand_in_kl(table, product)


def graded_multiplicities(
    table: KLTable, x: CoxElt, y: CoxElt
) -> dict[CoxElt, dict[int, int]]:
    """Per summand z: {degree i: dim}, where dim of degree i is the
    v^{-i} coefficient of mu_{x,y}^z."""
    out = {}
    for z, m in mu(table, x, y).items():
        out[z] = {-e: c for e, c in sorted(m.coeffs.items())}
    return out


def verify_positivity(table: KLTable, pairs: Iterable[tuple[CoxElt, CoxElt]]) -> list[dict]:
    """Check h_{y,x} in Z_{>=0}[v] and mu_{x,y}^z in Z_{>=0}[v^{+-1}].

    Returns a list of violation records; empty means all positive."""
    bad = []
    seen_rows = set()
    for x, y in pairs:
        for xe in (x, y):
            if xe.word in seen_rows:
                continue
            seen_rows.add(xe.word)
            for yw, h in table.row(xe).items():
                if not h.has_nonnegative_coeffs() or h.coeffs and min(h.coeffs) < 0:
                    bad.append(
                        {
                            "check": "kl-coefficient-positivity",
                            "scope": f"h[{format_word(yw)},{format_word(xe.word)}]",
                            "status": "violated",
                            "witness": h.format(),
                        }
                    )
        for z, m in mu(table, x, y).items():
            if not m.has_nonnegative_coeffs():
                bad.append(
                    {
                        "check": "structure-constant-positivity",
                        "scope": f"mu[{format_word(x.word)},{format_word(y.word)}]"
                        f"^{format_word(z.word)}",
                        "status": "violated",
                        "witness": m.format(),
                    }
                )
    return bad


class KLScan:
    """Flat int-indexed sweep engine over a fully enumerated finite group.

    Build once against a filled, frozen table (single-threaded), then
    `sweep(y)` streams KL expansions of b_x b_y for every x, via the
    left-descent recursion

        b_x b_y = b_s (b_{x'} b_y) - sum_{w : sw < w} mu(w, x') b_w b_y

    with x = s x'.  All Laurent data inside is raw {exponent: int}
    dicts keyed by element index; nothing here mutates shared state, so
    a built instance forks cleanly across worker processes.
    """

    def __init__(self, table: KLTable):
        W = table.system
        els = W.enumerate()
        n = len(els)
        self.system = W
        self.n = n
        self.length = [x.length for x in els]
        self.words = [x.word for x in els]
        index = {x.word: i for i, x in enumerate(els)}
        self.index = index
        rank = W.rank
        # left multiplication table: lmul[i][s] = index of s * x_i
        inv = [index[W.inverse(x).word] for x in els]
        self.inv = inv
        self.lmul = [
            [inv[W.rmul_index(inv[i], s)] for s in range(rank)] for i in range(n)
        ]
        table.fill_all()
        # mu-lists per element: all (w, mu(w, z)) with mu nonzero, plus
        # the full integer mu matrix for correction terms
        self.mu_list: list[list[tuple[int, int]]] = []
        for i, x in enumerate(els):
            row = table.row(x)
            pairs = []
            for yw, h in row.items():
                m = h.coeff(1)
                if m and yw != x.word:
                    pairs.append((index[yw], m))
            self.mu_list.append(pairs)

    def left_descents(self, i: int) -> list[int]:
        li = self.length[i]
        return [s for s in range(self.system.rank) if self.length[self.lmul[i][s]] < li]

    def _apply_left_gen(self, s: int, expansion: dict[int, dict[int, int]]):
        """b_s * (sum_z m_z b_z), all in KL coordinates."""
        lmul, length, mu_list = self.lmul, self.length, self.mu_list
        out: dict[int, dict[int, int]] = {}
        for z, m in expansion.items():
            sz = lmul[z][s]
            if length[sz] > length[z]:
                _racc(out, sz, m, 1)
                for w, c in mu_list[z]:
                    if length[lmul[w][s]] < length[w]:
                        _racc(out, w, m, c)
            else:
                # b_s b_z = (v + v^{-1}) b_z
                tgt = out.setdefault(z, {})
                for e, c in m.items():
                    for shift in (1, -1):
                        key = e + shift
                        nc = tgt.get(key, 0) + c
                        if nc:
                            tgt[key] = nc
                        else:
                            tgt.pop(key, None)
        return out

    def sweep(self, y: int) -> Iterator[tuple[int, dict[int, dict[int, int]]]]:
        """Yield (x, {z: raw mu_{x,y}^z}) for every x, ascending by length."""
        cache: list[dict[int, dict[int, int]] | None] = [None] * self.n
        cache[0] = {y: {0: 1}}
        yield 0, cache[0]
        for x in range(1, self.n):
            s = self.left_descents(x)[0]
            xp = self.lmul[x][s]
            acc = self._apply_left_gen(s, cache[xp])
            for w, c in self.mu_list[xp]:
                if self.length[self.lmul[w][s]] < self.length[w]:
                    for z, m in cache[w].items():
                        _racc(acc, z, m, -c)
            expansion = {z: m for z, m in acc.items() if m}
            cache[x] = expansion
            yield x, expansion


def _racc(store: dict[int, dict[int, int]], z: int, m: dict[int, int], scale: int):
    tgt = store.setdefault(z, {})
    for e, c in m.items():
        nc = tgt.get(e, 0) + c * scale
        if nc:
            tgt[e] = nc
        else:
            tgt.pop(e, None)
