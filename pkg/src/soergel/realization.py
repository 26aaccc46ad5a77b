"""Exact polynomials on the reflection representation.

The group acts on the span of the coroots.  Coordinates x1..xn are dual
to the coroot basis, so each simple root is the linear form whose row of
⟨alpha_s, alpha_t^vee⟩ pairings is a row of the Cartan matrix, with
off-diagonal entries -2cos(pi/m_st) living in the scalar field picked by
the bond labels.  Everything downstream counts a linear form as sitting
in degree 2, so `soergel_degree` is twice the naive degree.

>>> from soergel.coxeter import make_system
>>> R = Realization(make_system("A2"))
>>> print(R.alpha(0))
2*x1 - x2
>>> print(R.apply_gen(0, R.alpha(1)))
x1 + x2
>>> print(R.demazure(0, R.rho))
1
"""

from __future__ import annotations

from typing import Iterable, Sequence

from . import exactlin
from .coxeter import CoxElt, CoxeterSystem
from .scalars import Rat, ScalarField

__all__ = ["PolyElt", "Realization"]

_HALF = Rat(1, 2)


class PolyElt:
    """One polynomial: a map from exponent tuples to field elements.

    Zero coefficients are never stored, so equality is plain dict
    equality.  Instances are immutable by convention; every operation
    returns a fresh element tied to the same realization.
    """

    __slots__ = ("real", "terms")

    def __init__(self, real: "Realization", terms: dict):
        fld = real.field
        self.real = real
        self.terms = {e: c for e, c in terms.items() if not fld.is_zero(c)}

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, exponents: Sequence[int]) -> tuple:
        return self.terms.get(tuple(exponents), self.real.field.zero)

    def constant(self) -> tuple:
        return self.terms.get((0,) * self.real.rank, self.real.field.zero)

    def soergel_degree(self) -> int:
        if not self.terms:
            raise ValueError("the zero polynomial has no degree")
        return 2 * max(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def component(self, soergel_degree: int) -> "PolyElt":
        """The slice of this polynomial sitting in one internal degree."""
        if soergel_degree % 2:
            return self.real.zero
        d = soergel_degree // 2
        return PolyElt(self.real, {e: c for e, c in self.terms.items() if sum(e) == d})

    def soergel_degrees(self) -> list[int]:
        return sorted({2 * sum(e) for e in self.terms})

    # -- ring operations -------------------------------------------------

    def __add__(self, other: "PolyElt") -> "PolyElt":
        fld = self.real.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = fld.add(out[e], c) if e in out else c
        return PolyElt(self.real, out)

    def __sub__(self, other: "PolyElt") -> "PolyElt":
        return self + (-other)

    def __neg__(self) -> "PolyElt":
        fld = self.real.field
        return PolyElt(self.real, {e: fld.neg(c) for e, c in self.terms.items()})

    def __mul__(self, other):
        fld = self.real.field
        if isinstance(other, int):
            return self.scaled(fld.from_int(other))
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = fld.mul(c1, c2)
                out[e] = fld.add(out[e], c) if e in out else c
        return PolyElt(self.real, out)

    def __rmul__(self, other: int) -> "PolyElt":
        return self * other

    def scaled(self, c: tuple) -> "PolyElt":
        fld = self.real.field
        return PolyElt(self.real, {e: fld.mul(c, x) for e, x in self.terms.items()})

    def __pow__(self, n: int) -> "PolyElt":
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        out = self.real.one
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, PolyElt) and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def evaluate(self, point: Sequence[tuple]) -> tuple:
        """Value at a point of the coroot space, given in coordinates."""
        fld = self.real.field
        total = fld.zero
        pows: list[dict[int, tuple]] = [{0: fld.one} for _ in range(self.real.rank)]

        def power(i: int, k: int) -> tuple:
            cache = pows[i]
            if k not in cache:
                cache[k] = fld.mul(power(i, k - 1), point[i])
            return cache[k]

        for e, c in self.terms.items():
            val = c
            for i, k in enumerate(e):
                if k:
                    val = fld.mul(val, power(i, k))
            total = fld.add(total, val)
        return total

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        fld = self.real.field
        bits = []
        for e in sorted(self.terms, key=lambda t: (sum(t), tuple(-v for v in t))):
            mono = "*".join(
                f"x{i + 1}" if k == 1 else f"x{i + 1}^{k}"
                for i, k in enumerate(e)
                if k
            )
            cs = fld.format(self.terms[e])
            if any(ch in cs for ch in " /u") and mono:
                cs = f"({cs})"
            if not mono:
                bits.append(cs)
            elif cs == "1":
                bits.append(mono)
            elif cs == "-1":
                bits.append(f"-{mono}")
            else:
                bits.append(f"{cs}*{mono}")
        return " + ".join(bits).replace("+ -", "- ")

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"<poly {self}>"


class Realization:
    """Cartan data plus the operators the bimodule layer needs.

    Rejects infinite bonds outright and refuses a singular Cartan matrix
    (the affine degenerations), since exact division by roots and the
    nondegenerate pairing both break there.
    """

    def __init__(self, system: CoxeterSystem):
        matrix = system.matrix
        if matrix.has_infinite_bond():
            raise ValueError("infinite bond labels admit no 2cos Cartan matrix")
        self.system = system
        self.rank = matrix.rank
        self.field = ScalarField.for_bond_labels(matrix.bond_labels())
        fld = self.field
        n = self.rank
        rows = []
        for s in range(n):
            row = [
                fld.from_int(2) if s == t else fld.neg(fld.two_cos_pi_over(matrix.entry(s, t)))
                for t in range(n)
            ]
            rows.append(tuple(row))
        self.cartan = tuple(rows)
        if exactlin.rank(fld, [list(r) for r in rows]) < n:
            raise ValueError("singular Cartan matrix: realization would be degenerate")
        self.zero = PolyElt(self, {})
        self.one = PolyElt(self, {(0,) * n: fld.one})
        self.rho = PolyElt(self, {self._unit_exp(t): fld.one for t in range(n)})
        self._gen_pows: list[list[PolyElt]] = [[self.one] for _ in range(n)]
        self._demazure_cache: dict = {}

    def _unit_exp(self, i: int) -> tuple:
        return tuple(1 if t == i else 0 for t in range(self.rank))

    def variable(self, i: int) -> PolyElt:
        return PolyElt(self, {self._unit_exp(i): self.field.one})

    def alpha(self, i: int) -> PolyElt:
        """The i-th simple root as a linear form on the coroot space."""
        return PolyElt(
            self, {self._unit_exp(t): self.cartan[i][t] for t in range(self.rank)}
        )

    def from_rat(self, q) -> PolyElt:
        return PolyElt(self, {(0,) * self.rank: self.field.from_rat(Rat(q))})

    def from_scalar(self, c: tuple) -> PolyElt:
        return PolyElt(self, {(0,) * self.rank: c})

    # -- group action ------------------------------------------------------

    def _gen_power(self, i: int, k: int) -> PolyElt:
        # cached powers of s_i(x_i) = x_i - alpha_i
        cache = self._gen_pows[i]
        base = self.variable(i) - self.alpha(i)
        while len(cache) <= k:
            cache.append(cache[-1] * base)
        return cache[k]

    def apply_gen(self, i: int, f: PolyElt) -> PolyElt:
        """Act by the i-th simple reflection: only x_i moves."""
        fld = self.field
        out: dict = {}
        for e, c in f.terms.items():
            k = e[i]
            if k == 0:
                out[e] = fld.add(out[e], c) if e in out else c
                continue
            rest = tuple(0 if t == i else v for t, v in enumerate(e))
            for e2, c2 in self._gen_power(i, k).terms.items():
                key = tuple(a + b for a, b in zip(rest, e2))
                v = fld.mul(c, c2)
                out[key] = fld.add(out[key], v) if key in out else v
        return PolyElt(self, out)

    def apply(self, w, f: PolyElt) -> PolyElt:
        """Act by a group element, or by an explicit word of generators."""
        word = w.word if isinstance(w, CoxElt) else tuple(w)
        for letter in reversed(word):
            f = self.apply_gen(letter, f)
        return f

    def apply_gen_to_point(self, i: int, point: Sequence[tuple]) -> list[tuple]:
        """Reflect a coroot-space point: only the i-th coordinate moves."""
        fld = self.field
        pairing = fld.zero
        for t, c in enumerate(self.cartan[i]):
            pairing = fld.add(pairing, fld.mul(c, point[t]))
        out = list(point)
        out[i] = fld.sub(out[i], pairing)
        return out

    def apply_to_point(self, w, point: Sequence[tuple]) -> list[tuple]:
        word = w.word if isinstance(w, CoxElt) else tuple(w)
        pt = list(point)
        for letter in reversed(word):
            pt = self.apply_gen_to_point(letter, pt)
        return pt

    # -- Demazure operator and the rank-one splitting ------------------------

    def _divide_by_alpha(self, i: int, f: PolyElt) -> PolyElt:
        """Exact division by alpha_i, eliminating x_i-degree level by level."""
        fld = self.field
        cur = dict(f.terms)
        quo: dict = {}
        while cur:
            level = max(e[i] for e in cur)
            if level == 0:
                if any(not fld.is_zero(c) for c in cur.values()):
                    raise ValueError("polynomial is not divisible by the root")
                break
            for e in [e for e in cur if e[i] == level]:
                c = cur.pop(e)
                if fld.is_zero(c):
                    continue
                low = tuple(v - 1 if t == i else v for t, v in enumerate(e))
                qc = fld.scale(_HALF, c)
                quo[low] = fld.add(quo[low], qc) if low in quo else qc
                # subtract qc * x^low * alpha_i; the x_i-term cancels c exactly
                for u in range(self.rank):
                    if u == i or fld.is_zero(self.cartan[i][u]):
                        continue
                    key = tuple(v + (1 if t == u else 0) for t, v in enumerate(low))
                    delta = fld.neg(fld.mul(qc, self.cartan[i][u]))
                    cur[key] = fld.add(cur[key], delta) if key in cur else delta
        return PolyElt(self, quo)

    def demazure(self, i: int, f: PolyElt) -> PolyElt:
        """(f - s_i(f)) / alpha_i; drops internal degree by 2."""
        # linear over the scalars, so assemble from per-monomial images
        cache = self._demazure_cache
        fld = self.field
        acc: dict = {}
        for e, c in f.terms.items():
            hit = cache.get((i, e))
            if hit is None:
                mono = PolyElt(self, {e: fld.one})
                hit = self._divide_by_alpha(i, mono - self.apply_gen(i, mono))
                cache[(i, e)] = hit
            for e2, c2 in hit.terms.items():
                v = fld.mul(c, c2)
                acc[e2] = fld.add(acc[e2], v) if e2 in acc else v
        return PolyElt(self, acc)

    def split_rs(self, i: int, f: PolyElt) -> tuple[PolyElt, PolyElt]:
        """Write f = g0 + g1*rho with both g_j invariant under s_i."""
        g1 = self.demazure(i, f)
        return f - g1 * self.rho, g1
