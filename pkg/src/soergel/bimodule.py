"""Bott-Samelson bimodules with exact polynomial coefficients.

A word (s_1, ..., s_d) names the tensor product of the elementary
bimodules attached to its letters.  As a left module over the
polynomial ring this is free on the 2^d vectors v_bits, where bit i
picks 1 or rho in the i-th right-hand slot; v_bits is homogeneous of
degree sum(2*bits) - d.  Every product from the right is performed by
the straightening cascade: the incoming polynomial is split into
invariant components at each slot and the invariant parts slide left,
branching on the 1/rho choice, until they reach the coefficient.

Polynomial-level work is capped at 10 letters; the evaluated engine
takes over beyond that.
"""

from __future__ import annotations

import random
from typing import Iterable, Sequence

from .coxeter import CapExceeded
from .realization import PolyElt, Realization
from .scalars import Rat

__all__ = ["BSElt", "BSModule", "split_check"]

MAX_LETTERS = 10


class BSElt:
    """Sparse element: bit tuples mapped to left polynomial coefficients."""

    __slots__ = ("module", "terms")

    def __init__(self, module: "BSModule", terms: dict):
        self.module = module
        self.terms = {b: c for b, c in terms.items() if not c.is_zero}

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, bits: Sequence[int]) -> PolyElt:
        return self.terms.get(tuple(bits), self.module.real.zero)

    def __add__(self, other: "BSElt") -> "BSElt":
        out = dict(self.terms)
        for b, c in other.terms.items():
            out[b] = out[b] + c if b in out else c
        return BSElt(self.module, out)

    def __sub__(self, other: "BSElt") -> "BSElt":
        return self + (-other)

    def __neg__(self) -> "BSElt":
        return BSElt(self.module, {b: -c for b, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BSElt)
            and self.module.word == other.module.word
            and self.terms == other.terms
        )

    __hash__ = None  # type: ignore[assignment]

    def left_mul(self, f: PolyElt) -> "BSElt":
        return BSElt(self.module, {b: f * c for b, c in self.terms.items()})

    def right_mul(self, f: PolyElt) -> "BSElt":
        return self.module.internal_mul(self, self.module.d, f)

    def scaled(self, c: tuple) -> "BSElt":
        return BSElt(self.module, {b: p.scaled(c) for b, p in self.terms.items()})

    def basis_degree(self, bits: Sequence[int]) -> int:
        return 2 * sum(bits) - self.module.d

    def soergel_degrees(self) -> list[int]:
        out: set[int] = set()
        for b, c in self.terms.items():
            base = 2 * sum(b) - self.module.d
            out.update(base + d for d in c.soergel_degrees())
        return sorted(out)

    def is_homogeneous(self) -> bool:
        return len(self.soergel_degrees()) <= 1

    def component(self, degree: int) -> "BSElt":
        out = {}
        for b, c in self.terms.items():
            piece = c.component(degree - (2 * sum(b) - self.module.d))
            if not piece.is_zero:
                out[b] = piece
        return BSElt(self.module, out)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        bits_order = sorted(self.terms)
        return " + ".join(
            f"({self.terms[b]})*v[{''.join(map(str, b))}]" for b in bits_order
        )

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"<bs {self}>"


class BSModule:
    """One tensor word over a fixed realization."""

    def __init__(self, real: Realization, word: Iterable[int], max_letters: int = MAX_LETTERS):
        word = tuple(word)
        if any(not (0 <= s < real.rank) for s in word):
            raise ValueError(f"letters must index generators, got {word}")
        if len(word) > max_letters:
            raise CapExceeded(
                f"{len(word)} tensor factors exceeds the polynomial-level cap of "
                f"{max_letters}; this scale needs the evaluated engine"
            )
        self.real = real
        self.word = word
        self.d = len(word)
        self._rho_pow = [real.one, real.rho, real.rho * real.rho]

    def zero(self) -> BSElt:
        return BSElt(self, {})

    def element(self, terms: dict) -> BSElt:
        clean = {}
        for bits, c in terms.items():
            bits = tuple(bits)
            if len(bits) != self.d or any(b not in (0, 1) for b in bits):
                raise ValueError(f"bad bit pattern {bits} for {self.d} factors")
            clean[bits] = c
        return BSElt(self, clean)

    def basis_elt(self, bits: Sequence[int], coeff: PolyElt | None = None) -> BSElt:
        return self.element({tuple(bits): self.real.one if coeff is None else coeff})

    def generator(self) -> BSElt:
        """The element 1 (x) 1 (x) ... (x) 1, degree -d."""
        return self.basis_elt((0,) * self.d)

    def basis_bits(self) -> list[tuple]:
        out = [()]
        for _ in range(self.d):
            out = [b + (x,) for b in out for x in (0, 1)]
        return sorted(out)

    # -- straightening -----------------------------------------------------

    def _pushed(self, bits: tuple, gap: int, f: PolyElt) -> dict:
        """Let f enter slot `gap` of v_bits; map resulting bits to slot-0 factors."""
        real = self.real
        out: dict = {}
        stack = [(bits, gap, f)]
        while stack:
            b, j, g = stack.pop()
            if g.is_zero:
                continue
            if j == 0:
                out[b] = out[b] + g if b in out else g
                continue
            content = g * real.rho if b[j - 1] else g
            g0, g1 = real.split_rs(self.word[j - 1], content)
            stack.append((b[: j - 1] + (0,) + b[j:], j - 1, g0))
            stack.append((b[: j - 1] + (1,) + b[j:], j - 1, g1))
        return out

    def internal_mul(self, x: BSElt, gap: int, f: PolyElt) -> BSElt:
        """Multiply by f inserted at a gap: 0 is the far left, d the far right."""
        if not (0 <= gap <= self.d):
            raise ValueError(f"gap must lie in 0..{self.d}")
        out = self.zero()
        for bits, c in x.terms.items():
            for nb, g in self._pushed(bits, gap, f).items():
                out = out + BSElt(self, {nb: c * g})
        return out

    # -- intersection form ---------------------------------------------------

    def intersection_form(self, x: BSElt, y: BSElt) -> PolyElt:
        """Iterated slotwise pairing; on one factor <f(x)g, f'(x)g'> is d_s(ff')gg'."""
        real = self.real
        total = real.zero
        for bx, p in x.terms.items():
            for by, q in y.terms.items():
                r = p * q
                for i, s in enumerate(self.word):
                    r = real.demazure(s, r)
                    k = bx[i] + by[i]
                    if k:
                        r = r * self._rho_pow[k]
                total = total + r
        return total

    def gram(self, elts: Sequence[BSElt]) -> list[list[PolyElt]]:
        n = len(elts)
        rows = [[self.real.zero] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                val = self.intersection_form(elts[i], elts[j])
                rows[i][j] = val
                rows[j][i] = val
        return rows

    # -- junction operators ---------------------------------------------------

    def junction_gaps(self, blocks: Sequence[int]) -> list[int]:
        blocks = tuple(blocks)
        if any(b <= 0 for b in blocks) or sum(blocks) != self.d:
            raise ValueError(f"blocks {blocks} do not tile a {self.d}-letter word")
        if len(blocks) == 1:
            raise ValueError("a single factor has no junction to act on")
        gaps, acc = [], 0
        for b in blocks[:-1]:
            acc += b
            gaps.append(acc)
        return gaps

    def lefschetz(self, x: BSElt, blocks: Sequence[int], a: Sequence = ()) -> BSElt:
        """Sum of a_i times rho inserted at the i-th junction between blocks."""
        gaps = self.junction_gaps(blocks)
        coeffs = [Rat(q) for q in (a if a else (1,) * len(gaps))]
        if len(coeffs) != len(gaps):
            raise ValueError(f"{len(gaps)} junctions but {len(coeffs)} coefficients")
        if any(q <= 0 for q in coeffs):
            raise ValueError("junction coefficients must be positive")
        out = self.zero()
        for gap, q in zip(gaps, coeffs):
            out = out + self.internal_mul(x, gap, self.real.rho.scaled(self.real.field.from_rat(q)))
        return out


def _bit_split(x: BSElt, prefix: BSModule) -> tuple[BSElt, BSElt]:
    parts: list[dict] = [{}, {}]
    for bits, c in x.terms.items():
        parts[bits[-1]][bits[:-1]] = c
    return BSElt(prefix, parts[0]), BSElt(prefix, parts[1])


def _embed(full: BSModule, x: BSElt, last_bit: int) -> BSElt:
    return BSElt(full, {bits + (last_bit,): c for bits, c in x.terms.items()})


def _random_poly(real: Realization, rng: random.Random, max_deg: int = 2) -> PolyElt:
    f = real.zero
    for _ in range(rng.randrange(1, 4)):
        e = tuple(rng.randrange(0, max_deg + 1) for _ in range(real.rank))
        f = f + PolyElt(real, {e: real.field.from_int(rng.randrange(-5, 6))})
    return f


def split_check(real: Realization, word: Sequence[int], samples: int = 3, seed: int = 0) -> list[dict]:
    """Two-route consistency for the last tensor slot of a word.

    Route one computes right multiplication by rho and the full
    intersection form with the straightening cascade.  Route two only
    uses the length-(d-1) prefix plus the 2x2 splitting data of the last
    letter: the block matrix [[0, g0], [id, g1]] with (g0, g1) the split
    of rho^2, and one Demazure step folding the prefix form.  Both must
    agree on every basis vector and on random polynomial elements.
    """
    word = tuple(word)
    if not word:
        raise ValueError("need at least one letter to split off")
    full = BSModule(real, word)
    prefix = BSModule(real, word[:-1])
    s = word[-1]
    rho = real.rho
    g0, g1 = real.split_rs(s, rho * rho)
    rng = random.Random(seed)

    probes = [full.basis_elt(bits) for bits in full.basis_bits()]
    for _ in range(samples):
        bits = tuple(rng.randrange(2) for _ in range(full.d))
        probes.append(full.basis_elt(bits, _random_poly(real, rng)))

    report: list[dict] = []
    scope = "".join(str(t + 1) for t in word)

    bad = None
    base0, base1 = real.split_rs(s, rho)
    if not base0.is_zero or base1 != real.one:
        bad = "split of rho is not (0, 1)"
    else:
        for x in probes:
            direct = x.right_mul(rho)
            x0, x1 = _bit_split(x, prefix)
            pred = _embed(full, x1.right_mul(g0), 0) + _embed(
                full, x0 + x1.right_mul(g1), 1
            )
            if direct != pred:
                bad = f"junction matrix mismatch on {x}"
                break
    report.append(
        {
            "check": "junction-matrix",
            "scope": scope,
            "status": "ok" if bad is None else "fail",
            "witness": bad,
        }
    )

    bad = None
    pairs = [(x, y) for x in probes[: 2 ** full.d] for y in probes[: 2 ** full.d]]
    pairs += [
        (probes[rng.randrange(len(probes))], probes[rng.randrange(len(probes))])
        for _ in range(samples)
    ]
    for x, y in pairs:
        direct = full.intersection_form(x, y)
        x0, x1 = _bit_split(x, prefix)
        y0, y1 = _bit_split(y, prefix)
        folded = real.zero
        for a, xa in ((0, x0), (1, x1)):
            for b, yb in ((0, y0), (1, y1)):
                inner = prefix.intersection_form(xa, yb)
                piece = real.demazure(s, inner)
                for _ in range(a + b):
                    piece = piece * rho
                folded = folded + piece
        if direct != folded:
            bad = f"form does not fold through the last slot on ({x}, {y})"
            break
    report.append(
        {
            "check": "split-form",
            "scope": scope,
            "status": "ok" if bad is None else "fail",
            "witness": bad,
        }
    )
    return report
