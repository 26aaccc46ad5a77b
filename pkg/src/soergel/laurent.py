r"""Sparse Laurent polynomials in one variable ``v`` over the integers.

This is the coefficient ring of everything downstream: Hecke structure
constants, graded multiplicities, a-function weights.  Three conventions are
load-bearing and worth stating once:

* ``bar`` is the ring involution ``v -> v^{-1}`` (exponent negation).
* ``quantum(m)`` is the balanced quantum integer
  ``[m] = v^{-m+1} + v^{-m+3} + ... + v^{m-1}``; ``quantum(0) = 0``.
* a bar-symmetric ``f`` decomposes uniquely as ``sum_m a_m * quantum(m)`` with
  ``a_m = c_{m-1} - c_{m+1}`` (telescoping along each parity class), and ``f``
  is *unimodal* exactly when every ``a_m >= 0``.  ``v^-2 + v^2`` is the
  canonical non-unimodal bar-symmetric example: ``a_1 = -1``.

>>> (quantum(2) * quantum(2)) == quantum(1) + quantum(3)
True
>>> quantum_decompose(parse("v^-2 + v^2")).multiplicities
{1: -1, 3: 1}
"""

from __future__ import annotations

import re
from dataclasses import dataclass

__all__ = [
    "Laurent",
    "ZERO",
    "ONE",
    "V",
    "quantum",
    "quantum_decompose",
    "QuantumDecomposition",
    "is_unimodal",
    "parse",
]


class Laurent:
    """Immutable sparse Laurent polynomial; ``coeffs`` maps exponent -> int."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: dict[int, int] | None = None):
        self.coeffs = {e: c for e, c in (coeffs or {}).items() if c}
        self._hash = None

    # -- ring structure ----------------------------------------------------

    def __add__(self, other: "Laurent") -> "Laurent":
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return Laurent(out)

    def __sub__(self, other: "Laurent") -> "Laurent":
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) - c
        return Laurent(out)

    def __neg__(self) -> "Laurent":
        return Laurent({e: -c for e, c in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return Laurent({e: c * other for e, c in self.coeffs.items()})
        out: dict[int, int] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                out[e] = out.get(e, 0) + c1 * c2
        return Laurent(out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, Laurent) and self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.coeffs.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    # -- involution and shape ------------------------------------------------

    def bar(self) -> "Laurent":
        """The ring involution v -> 1/v."""
        return Laurent({-e: c for e, c in self.coeffs.items()})

    def is_bar_symmetric(self) -> bool:
        return all(self.coeffs.get(-e) == c for e, c in self.coeffs.items())

    def shift(self, k: int) -> "Laurent":
        """Multiply by v^k."""
        return Laurent({e + k: c for e, c in self.coeffs.items()})

    def coeff(self, e: int) -> int:
        return self.coeffs.get(e, 0)

    @property
    def degree(self) -> int:
        """Largest exponent; -1 placeholder degree conventions are avoided:
        raises on zero, whose degree is not needed anywhere."""
        if not self.coeffs:
            raise ValueError("zero polynomial has no degree")
        return max(self.coeffs)

    @property
    def valuation(self) -> int:
        if not self.coeffs:
            raise ValueError("zero polynomial has no valuation")
        return min(self.coeffs)

    def at_one(self) -> int:
        return sum(self.coeffs.values())

    def only_positive_exponents(self) -> bool:
        return all(e >= 1 for e in self.coeffs)

    def has_nonnegative_coeffs(self) -> bool:
        return all(c >= 0 for c in self.coeffs.values())

    # -- serialization ---------------------------------------------------------

    def format(self) -> str:
        """Canonical text form, ascending exponents: ``v^-2 + 2 + v^2``."""
        if not self.coeffs:
            return "0"
        parts: list[str] = []
        for e in sorted(self.coeffs):
            c = self.coeffs[e]
            if e == 0:
                body = str(abs(c))
            else:
                mono = "v" if e == 1 else f"v^{e}"
                body = mono if abs(c) == 1 else f"{abs(c)}*{mono}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    def to_json(self) -> dict:
        return {"coeffs": {str(e): c for e, c in sorted(self.coeffs.items())}}

    @classmethod
    def from_json(cls, obj: dict) -> "Laurent":
        return cls({int(e): int(c) for e, c in obj["coeffs"].items()})

    def __repr__(self) -> str:
        return f"Laurent({self.format()!r})"


ZERO = Laurent()
ONE = Laurent({0: 1})
V = Laurent({1: 1})

_TERM = re.compile(
    r"""(?P<sign>[+-])?\s*
        (?:
            (?P<coeff>\d+)\s*(?:\*?\s*(?P<monoc>v(?:\^(?P<expc>-?\d+))?))?
          | (?P<mono>v(?:\^(?P<exp>-?\d+))?)
        )\s*""",
    re.VERBOSE,
)


def parse(text: str) -> Laurent:
    """Inverse of :meth:`Laurent.format`; accepts ``2v^3`` and ``2*v^3`` alike.

    >>> parse("v^-2 + 2 + v^2").format()
    'v^-2 + 2 + v^2'
    >>> parse("0")
    Laurent('0')
    """
    text = text.strip()
    if text in ("0", ""):
        return ZERO
    coeffs: dict[int, int] = {}
    pos = 0
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse Laurent polynomial at {text[pos:]!r}")
        sign = -1 if m.group("sign") == "-" else 1
        if m.group("coeff") is not None:
            c = sign * int(m.group("coeff"))
            if m.group("monoc"):
                e = int(m.group("expc")) if m.group("expc") else 1
            else:
                e = 0
        else:
            c = sign
            e = int(m.group("exp")) if m.group("exp") else 1
        coeffs[e] = coeffs.get(e, 0) + c
        pos = m.end()
    return Laurent(coeffs)


def quantum(m: int) -> Laurent:
    """Balanced quantum integer [m]; [0] = 0, [1] = 1, [2] = v^-1 + v."""
    if m < 0:
        raise ValueError("quantum integers are indexed by m >= 0")
    return Laurent({e: 1 for e in range(-m + 1, m, 2)})


@dataclass(frozen=True)
class QuantumDecomposition:
    """Multiplicities of ``f = sum a_m [m]`` plus a mixed-parity marker.

    Both parity classes always reconstruct exactly; ``mixed_parity`` merely
    records that they were decomposed independently.
    """

    multiplicities: dict[int, int]
    mixed_parity: bool

    def reconstruct(self) -> Laurent:
        out = ZERO
        for m, a in self.multiplicities.items():
            out = out + quantum(m) * a
        return out

    @property
    def unimodal(self) -> bool:
        return all(a >= 0 for a in self.multiplicities.values())


def quantum_decompose(f: Laurent) -> QuantumDecomposition:
    """Expand a bar-symmetric ``f`` over quantum integers: a_m = c_{m-1} - c_{m+1}."""
    if not f.is_bar_symmetric():
        raise ValueError("quantum_decompose requires a bar-symmetric input")
    mults: dict[int, int] = {}
    if f.coeffs:
        top = max(f.coeffs)
        for m in range(1, top + 2):
            a = f.coeff(m - 1) - f.coeff(m + 1)
            if a:
                mults[m] = a
    parities = {e & 1 for e in f.coeffs}
    return QuantumDecomposition(mults, mixed_parity=len(parities) > 1)


def is_unimodal(f: Laurent) -> bool:
    """True iff every quantum multiplicity of (bar-symmetric) ``f`` is >= 0."""
    return quantum_decompose(f).unimodal
