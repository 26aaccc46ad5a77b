"""Coxeter systems over arbitrary Coxeter matrices.

Elements live as ShortLex-minimal reduced words.  The word problem is
solved by exhaustive braid-class search: a word is reduced exactly when
no sequence of braid moves produces an adjacent equal pair, and two
reduced words represent the same element exactly when they are
connected by braid moves alone.  This is exponential in the worst case
but correct for *every* Coxeter matrix (infinite bonds included) and
entirely adequate at rank <= 4 with bond labels <= 8.

Once a finite group has been fully enumerated, a Cayley table is built
and group arithmetic degenerates to table lookups.

Generator indices are 0-based in code.  The text form of a word uses
1-based digits ("121" reads s1 s2 s1), which is what the CLI and cache
files speak.

>>> W = CoxeterSystem(preset("A2"))
>>> W.element("121") == W.element("212")
True
>>> [len(W.enumerate(k)) for k in range(4)]
[1, 3, 5, 6]
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

INF = math.inf  # Coxeter matrix entry for an unbraided (infinite) bond

_DEFAULT_CAP = 200_000
_DEFAULT_LENGTH_CAP = 500  # far past any finite group at supported ranks


class CapExceeded(RuntimeError):
    """Raised when an enumeration or size guard overruns its cap."""


def format_word(word: Sequence[int]) -> str:
    """Render a word over 0-based indices as 1-based digits; "e" if empty."""
    if not word:
        return "e"
    return "".join(str(s + 1) for s in word)


def parse_word(text: str, rank: int) -> tuple[int, ...]:
    """Parse "121" / "1 2 1" / "e" into a 0-based index tuple."""
    if rank > 9:
        raise ValueError("text word input is only defined for rank <= 9")
    stripped = text.replace(" ", "")
    if stripped in ("", "e"):
        return ()
    word = []
    for ch in stripped:
        if not ch.isdigit() or ch == "0":
            raise ValueError(f"bad generator letter {ch!r} in word {text!r}")
        s = int(ch) - 1
        if s >= rank:
            raise ValueError(f"generator {ch} out of range for rank {rank}")
        word.append(s)
    return tuple(word)


class CoxeterMatrix:
    """Symmetric bond-label matrix: diagonal 1, off-diagonal >= 2 or INF."""

    __slots__ = ("rank", "rows")

    def __init__(self, rows: Iterable[Iterable[float]]):
        table = tuple(tuple(row) for row in rows)
        n = len(table)
        if n == 0:
            raise ValueError("empty Coxeter matrix")
        for i, row in enumerate(table):
            if len(row) != n:
                raise ValueError("Coxeter matrix must be square")
            for j, m in enumerate(row):
                if i == j:
                    if m != 1:
                        raise ValueError("diagonal entries must equal 1")
                elif m == INF:
                    pass
                elif not isinstance(m, int) or m < 2:
                    raise ValueError(
                        f"off-diagonal entry m[{i}][{j}]={m!r} must be an "
                        "integer >= 2 or INF"
                    )
                if m != table[j][i]:
                    raise ValueError("Coxeter matrix must be symmetric")
        self.rank = n
        self.rows = table

    def entry(self, i: int, j: int) -> float:
        return self.rows[i][j]

    def bond_labels(self) -> set[int]:
        """All finite off-diagonal labels (the data that fixes a base field)."""
        return {
            m
            for i, row in enumerate(self.rows)
            for j, m in enumerate(row)
            if i != j and m != INF
        }

    def has_infinite_bond(self) -> bool:
        return any(INF in row for row in self.rows)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CoxeterMatrix) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        return f"CoxeterMatrix({[list(r) for r in self.rows]})"

    def to_json(self) -> dict:
        # infinity is serialized as 0 (not a legal bond label, so unambiguous)
        return {
            "version": 1,
            "rank": self.rank,
            "m": [[0 if m == INF else m for m in row] for row in self.rows],
        }

    @classmethod
    def from_json(cls, data: dict) -> "CoxeterMatrix":
        if not isinstance(data, dict):
            raise ValueError("Coxeter matrix JSON must be an object")
        if data.get("version") != 1:
            raise ValueError(f"unsupported matrix version {data.get('version')!r}")
        raw = data.get("m")
        if raw is None:
            raise ValueError("matrix JSON missing 'm'")

        def decode(x):
            if x in (0, None, "inf"):
                return INF
            return x

        matrix = cls([[decode(x) for x in row] for row in raw])
        if "rank" in data and data["rank"] != matrix.rank:
            raise ValueError("matrix JSON 'rank' disagrees with 'm'")
        return matrix


_PRESETS: dict[str, list[list[int]]] = {
    "A1": [[1]],
    "A2": [[1, 3], [3, 1]],
    "A3": [[1, 3, 2], [3, 1, 3], [2, 3, 1]],
    "B3": [[1, 3, 2], [3, 1, 4], [2, 4, 1]],
    "H3": [[1, 5, 2], [5, 1, 3], [2, 3, 1]],
}
_DIHEDRAL_ALIASES = {"B2": 4, "G2": 6, "H2": 5}


def preset(name: str) -> CoxeterMatrix:
    """Expand a preset name ("A2", "B3", "H3", "I2:m", ...) to its matrix."""
    key = name.strip()
    if key in _PRESETS:
        return CoxeterMatrix(_PRESETS[key])
    if key in _DIHEDRAL_ALIASES:
        return preset(f"I2:{_DIHEDRAL_ALIASES[key]}")
    if key.startswith("I2:"):
        label = key[3:]
        if label == "inf":
            m: float = INF
        else:
            try:
                m = int(label)
            except ValueError:
                raise ValueError(f"bad dihedral label in preset {name!r}") from None
            if m < 2:
                raise ValueError("dihedral label must be >= 2")
        return CoxeterMatrix([[1, m], [m, 1]])
    raise ValueError(f"unknown Coxeter preset {name!r}")


class CoxElt:
    """A group element: its ShortLex-minimal reduced word, plus caches."""

    __slots__ = ("system", "word", "_rdesc", "_ldesc")

    def __init__(self, system: "CoxeterSystem", word: tuple[int, ...]):
        self.system = system
        self.word = word
        self._rdesc: frozenset[int] | None = None
        self._ldesc: frozenset[int] | None = None

    @property
    def length(self) -> int:
        return len(self.word)

    @property
    def is_identity(self) -> bool:
        return not self.word

    def inverse(self) -> "CoxElt":
        return self.system.inverse(self)

    def __mul__(self, other: "CoxElt") -> "CoxElt":
        return self.system.multiply(self, other)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, CoxElt)
            and self.word == other.word
            and self.system.matrix == other.system.matrix
        )

    def __hash__(self) -> int:
        return hash(self.word)

    def __lt__(self, other: "CoxElt") -> bool:
        return (len(self.word), self.word) < (len(other.word), other.word)

    def __str__(self) -> str:
        return format_word(self.word)

    def __repr__(self) -> str:
        return f"CoxElt({format_word(self.word)!r})"


class CoxeterSystem:
    """A Coxeter matrix together with memoized word-problem machinery.

    Systems are immutable once constructed; every public operation is a
    pure function of the matrix, so instances are safe to share
    read-only across threads after the element table is built.
    """

    def __init__(
        self,
        matrix: CoxeterMatrix,
        element_cap: int = _DEFAULT_CAP,
        length_cap: int = _DEFAULT_LENGTH_CAP,
    ):
        self.matrix = matrix
        self.rank = matrix.rank
        self.element_cap = element_cap
        self.length_cap = length_cap
        self._nf_memo: dict[tuple[int, ...], tuple[int, ...]] = {(): ()}
        self._levels: list[list[tuple[int, ...]]] = [[()]]
        self._count = 1
        self._complete = False
        # Cayley-table backend, populated once a finite group is closed.
        self._elements: list[CoxElt] | None = None
        self._index: dict[tuple[int, ...], int] | None = None
        self._rmul: list[list[int]] | None = None
        self._inv: list[int] | None = None
        self._bruhat_memo: dict[tuple[tuple[int, ...], tuple[int, ...]], bool] = {}

    # -- construction helpers -------------------------------------------

    @property
    def identity(self) -> CoxElt:
        return CoxElt(self, ())

    def simple(self, s: int) -> CoxElt:
        if not 0 <= s < self.rank:
            raise ValueError(f"generator index {s} out of range")
        return CoxElt(self, (s,))

    def element(self, word) -> CoxElt:
        """Coerce a word (text, index sequence, or CoxElt) to normal form."""
        if isinstance(word, CoxElt):
            self._check_system(word)
            return word
        if isinstance(word, str):
            return self.normal_form(parse_word(word, self.rank))
        return self.normal_form(word)

    def normal_form(self, word: Iterable[int]) -> CoxElt:
        letters = tuple(word)
        for s in letters:
            if not 0 <= s < self.rank:
                raise ValueError(f"generator index {s} out of range")
        return CoxElt(self, self._canonical(letters))

    # -- the Tits rewriting core ----------------------------------------

    def _braid_neighbors(self, w: tuple[int, ...]) -> list[tuple[int, ...]]:
        rows = self.matrix.rows
        out = []
        n = len(w)
        for p in range(n - 1):
            a, b = w[p], w[p + 1]
            if a == b:
                continue
            m = rows[a][b]
            if m == INF or p + m > n:
                continue
            m = int(m)
            if all(w[p + i] == (a if i % 2 == 0 else b) for i in range(m)):
                repl = tuple(b if i % 2 == 0 else a for i in range(m))
                out.append(w[:p] + repl + w[p + m :])
        return out

    def _canonical(self, word: tuple[int, ...]) -> tuple[int, ...]:
        memo = self._nf_memo
        cached = memo.get(word)
        if cached is not None:
            return cached
        # Breadth-first over the braid class.  Reaching a word with an
        # adjacent equal pair proves the input non-reduced: delete the
        # pair and recurse.  Exhausting the class proves it reduced, and
        # the class *is* the set of reduced words, so take its lex-min.
        seen = {word}
        frontier = [word]
        result: tuple[int, ...] | None = None
        while frontier and result is None:
            fresh = []
            for w in frontier:
                for i in range(len(w) - 1):
                    if w[i] == w[i + 1]:
                        result = self._canonical(w[:i] + w[i + 2 :])
                        break
                if result is not None:
                    break
                for u in self._braid_neighbors(w):
                    if u in seen:
                        continue
                    cached = memo.get(u)
                    if cached is not None:
                        result = cached
                        break
                    seen.add(u)
                    fresh.append(u)
                if result is not None:
                    break
            frontier = fresh
        if result is None:
            result = min(seen)
        for u in seen:
            memo[u] = result
        return result

    # -- group arithmetic -------------------------------------------------

    def _check_system(self, x: CoxElt) -> None:
        if x.system is not self and x.system.matrix != self.matrix:
            raise ValueError("element belongs to a different Coxeter system")

    def multiply(self, x: CoxElt, y: CoxElt) -> CoxElt:
        self._check_system(x)
        self._check_system(y)
        if self._index is not None:
            i = self._index[x.word]
            rmul = self._rmul
            for s in y.word:
                i = rmul[i][s]
            return self._elements[i]
        w = x.word
        for s in y.word:  # fold letters to keep intermediate words short
            w = self._canonical(w + (s,))
        return CoxElt(self, w)

    def inverse(self, x: CoxElt) -> CoxElt:
        self._check_system(x)
        if self._index is not None:
            return self._elements[self._inv[self._index[x.word]]]
        return CoxElt(self, self._canonical(x.word[::-1]))

    def descents(self, x: CoxElt, side: str = "right") -> frozenset[int]:
        """Generators s with l(xs) < l(x) (or l(sx) < l(x) for side="left")."""
        self._check_system(x)
        if side == "left":
            if x._ldesc is None:
                x._ldesc = self.descents(self.inverse(x), "right")
            return x._ldesc
        if side != "right":
            raise ValueError(f"side must be 'left' or 'right', not {side!r}")
        if x._rdesc is None:
            x._rdesc = frozenset(
                s
                for s in range(self.rank)
                if len(self._canonical(x.word + (s,))) < len(x.word)
            )
        return x._rdesc

    # -- enumeration -------------------------------------------------------

    def _extend_levels(self, bound: int | None) -> None:
        while not self._complete and (bound is None or len(self._levels) <= bound):
            frontier = self._levels[-1]
            grown = len(self._levels)
            if grown > self.length_cap:
                # Thin infinite groups (e.g. I2(inf)) grow too slowly to
                # trip the element cap at a sane cost; bound the length too.
                raise CapExceeded(
                    f"enumeration passed length {self.length_cap} without the "
                    "group closing; the group is likely infinite"
                    + ("" if bound is None else " — lower max_length")
                )
            nxt = set()
            for w in frontier:
                for s in range(self.rank):
                    u = self._canonical(w + (s,))
                    if len(u) == grown:
                        nxt.add(u)
            if not nxt:
                self._complete = True
                self._build_table()
                return
            self._count += len(nxt)
            if self._count > self.element_cap:
                hint = (
                    "; the group is likely infinite — pass max_length"
                    if bound is None
                    else ""
                )
                raise CapExceeded(
                    f"enumeration exceeded the cap of {self.element_cap} elements"
                    + hint
                )
            self._levels.append(sorted(nxt))

    def _build_table(self) -> None:
        words = [w for level in self._levels for w in level]
        self._elements = [CoxElt(self, w) for w in words]
        self._index = {w: i for i, w in enumerate(words)}
        self._rmul = [
            [self._index[self._canonical(w + (s,))] for s in range(self.rank)]
            for w in words
        ]
        self._inv = [self._index[self._canonical(w[::-1])] for w in words]

    def enumerate(self, max_length: int | None = None) -> list[CoxElt]:
        """All elements of length <= max_length (whole group if None),
        sorted by (length, ShortLex)."""
        self._extend_levels(max_length)
        if max_length is None:
            return list(self._elements)
        if self._complete:
            return [x for x in self._elements if x.length <= max_length]
        take = self._levels[: max_length + 1]
        return [CoxElt(self, w) for level in take for w in level]

    def is_finite_cached(self) -> bool:
        """True once closure has terminated (never forces enumeration)."""
        return self._complete

    def order(self) -> int:
        return len(self.enumerate())

    def longest_element(self) -> CoxElt:
        return self.enumerate()[-1]

    # -- indexed accessors for hot loops ----------------------------------

    def element_index(self, x: CoxElt) -> int:
        self.enumerate()
        return self._index[x.word]

    def element_at(self, i: int) -> CoxElt:
        self.enumerate()
        return self._elements[i]

    def rmul_index(self, i: int, s: int) -> int:
        return self._rmul[i][s]

    def inverse_index(self, i: int) -> int:
        return self._inv[i]

    # -- Bruhat order ------------------------------------------------------

    def bruhat_leq(self, x: CoxElt, y: CoxElt) -> bool:
        """x <= y in Bruhat order, by the descent-lifting recursion:
        for s a right descent of y, x <= y iff (xs <= ys when xs < x,
        else x <= ys)."""
        self._check_system(x)
        self._check_system(y)
        return self._bruhat(x.word, y.word)

    def _bruhat(self, xw: tuple[int, ...], yw: tuple[int, ...]) -> bool:
        if not xw:
            return True
        if len(xw) > len(yw):
            return False
        if xw == yw:
            return True
        key = (xw, yw)
        memo = self._bruhat_memo
        cached = memo.get(key)
        if cached is not None:
            return cached
        s = yw[-1]  # the last letter of a reduced word is a right descent
        ys = self._canonical(yw + (s,))
        xs = self._canonical(xw + (s,))
        if len(xs) < len(xw):
            res = self._bruhat(xs, ys)
        else:
            res = self._bruhat(xw, ys)
        memo[key] = res
        return res


def make_system(spec, element_cap: int = _DEFAULT_CAP) -> CoxeterSystem:
    """Build a system from a preset name, a matrix, or decoded matrix JSON."""
    if isinstance(spec, CoxeterSystem):
        return spec
    if isinstance(spec, CoxeterMatrix):
        return CoxeterSystem(spec, element_cap)
    if isinstance(spec, str):
        return CoxeterSystem(preset(spec), element_cap)
    if isinstance(spec, dict):
        return CoxeterSystem(CoxeterMatrix.from_json(spec), element_cap)
    raise TypeError(f"cannot build a Coxeter system from {spec!r}")
