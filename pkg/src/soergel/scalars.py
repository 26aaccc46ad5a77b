r"""Exact scalar fields for geometric representations of Coxeter groups.

A symmetric Cartan matrix with entries ``-2cos(pi/m_st)`` lives in the real
cyclotomic field ``Q(2cos(pi/N))``.  Which ``N`` is needed depends only on the
set ``M`` of finite bond labels ``m_st >= 3``:

* ``m = 2`` contributes ``2cos(pi/2) = 0`` and ``m = 3`` contributes
  ``2cos(pi/3) = 1``; both are rational and force no extension.
* a single remaining label ``m`` needs exactly ``Q(2cos(pi/m))`` — this covers
  every classical and exceptional finite type (``sqrt 2`` for tetravalent
  bonds, ``sqrt 3`` for hexavalent, the golden field for pentavalent).
* mixed labels are handled by ``N = lcm(M \ {2,3})``; the single generator
  ``2cos(pi/N)`` may generate slightly more than the compositum, which is
  harmless for exact arithmetic.

Elements are coefficient tuples over ``Q`` in the power basis ``1, u, ...,
u^{d-1}`` where ``u`` is the *largest* real root of the minimal polynomial of
``2cos(pi/N)`` (cosine is decreasing on ``(0, pi)``, so the smallest angle is
the largest root).  Rational arithmetic uses ``gmpy2.mpq`` when available.

Signs are certified, never floated: the embedded root is kept inside a shrinking
rational interval ``[lo, hi]`` with ``p(lo) < 0 < p(hi)``; a nonzero element is
evaluated by interval Horner and the interval is bisected until zero is
excluded.  Termination is guaranteed because the minimal polynomial is
irreducible: a nonzero residue cannot vanish at the root.
"""

from __future__ import annotations

import functools
from typing import Iterable, Sequence

try:
    from gmpy2 import mpq as Rat
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as Rat

__all__ = ["Rat", "ScalarField", "RAT_ZERO", "RAT_ONE"]

RAT_ZERO = Rat(0)
RAT_ONE = Rat(1)


def _minimal_polynomial_of_two_cos(N: int) -> tuple[Rat, ...]:
    """Monic minimal polynomial of 2cos(pi/N) over Q, low degree first."""
    import sympy

    x = sympy.Symbol("x")
    poly = sympy.minimal_polynomial(2 * sympy.cos(sympy.pi / N), x, polys=True)
    coeffs = list(reversed(poly.all_coeffs()))  # constant term first
    lead = coeffs[-1]
    out = []
    for c in coeffs:
        q = sympy.Rational(c, lead)
        out.append(Rat(int(q.p), int(q.q)))
    return tuple(out)


def _isolate_largest_root(modulus: Sequence[Rat]) -> tuple[Rat, Rat]:
    """Rational interval around the largest real root, certified by sympy."""
    import sympy

    x = sympy.Symbol("x")
    poly = sympy.Poly([sympy.Rational(str(c)) for c in reversed(modulus)], x)
    intervals = poly.intervals()  # disjoint isolating intervals, sorted
    (lo, hi), _mult = intervals[-1]
    lo, hi = Rat(str(lo)), Rat(str(hi))
    # Endpoints cannot be roots (irreducible of degree >= 2 has no rational
    # root), and the largest root of a monic polynomial has p < 0 on its left.
    if not _eval_rat_poly(modulus, lo) < 0 < _eval_rat_poly(modulus, hi):
        raise ArithmeticError("root isolation produced an unusable interval")
    return lo, hi


def _eval_rat_poly(coeffs: Sequence[Rat], t: Rat) -> Rat:
    acc = RAT_ZERO
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


class ScalarField:
    """``Q[u]/(p(u))`` with ``u`` embedded as the largest real root of ``p``.

    Field elements are tuples of ``Rat`` of length ``self.degree``; the tuples
    are plain data, all arithmetic goes through the field object.  Degree one
    is ordinary ``Q`` (modulus ``u - 1``, so the basis is the constant ``1``).
    """

    def __init__(self, modulus: Sequence[Rat], conductor: int = 1):
        self.modulus = tuple(Rat(c) for c in modulus)
        if self.modulus[-1] != 1:
            raise ValueError("modulus must be monic")
        self.degree = len(self.modulus) - 1
        if self.degree < 1:
            raise ValueError("modulus must be non-constant")
        self.conductor = conductor
        self.zero = (RAT_ZERO,) * self.degree
        self.one = (RAT_ONE,) + (RAT_ZERO,) * (self.degree - 1)
        d = self.degree
        # u^(d+k) = sum_j reduction[k][j] u^j, precomputed for k < d - 1.
        self._reduction: list[tuple[Rat, ...]] = []
        if d > 1:
            row = tuple(-c for c in self.modulus[:-1])
            self._reduction.append(row)
            for _ in range(d - 2):
                shifted = (RAT_ZERO,) + self._reduction[-1][:-1]
                top = self._reduction[-1][-1]
                row = tuple(shifted[j] + top * self._reduction[0][j] for j in range(d))
                self._reduction.append(row)
            self._root_lo, self._root_hi = _isolate_largest_root(self.modulus)
            if d == 2:
                self._red2 = self._reduction[0]
        else:
            # Q itself: the "root" is the rational root of the linear modulus.
            self._root_lo = self._root_hi = -self.modulus[0]

    # -- construction -----------------------------------------------------

    @classmethod
    @functools.lru_cache(maxsize=None)
    def for_conductor(cls, N: int) -> "ScalarField":
        if N <= 3:
            return cls((Rat(-1), Rat(1)), conductor=max(N, 1))
        return cls(_minimal_polynomial_of_two_cos(N), conductor=N)

    @classmethod
    def for_bond_labels(cls, labels: Iterable[int]) -> "ScalarField":
        """Smallest supported field containing 2cos(pi/m) for all finite m."""
        hard = sorted({m for m in labels if m not in (1, 2, 3)})
        if not hard:
            return cls.for_conductor(1)
        if len(hard) == 1:
            return cls.for_conductor(hard[0])
        N = 1
        for m in hard:
            N = N * m // _gcd(N, m)
        return cls.for_conductor(N)

    # -- element construction ---------------------------------------------

    def from_rat(self, q) -> tuple:
        return (Rat(q),) + (RAT_ZERO,) * (self.degree - 1)

    def from_int(self, n: int) -> tuple:
        return self.from_rat(Rat(n))

    @property
    def generator(self) -> tuple:
        if self.degree == 1:
            return (-self.modulus[0],)
        return (RAT_ZERO, RAT_ONE) + (RAT_ZERO,) * (self.degree - 2)

    @functools.lru_cache(maxsize=None)
    def two_cos_pi_over(self, m: int) -> tuple:
        """The element 2cos(pi/m); requires a compatible conductor."""
        if m == 2:
            return self.zero
        if m == 3:
            return self.one
        if m == 1:
            return self.from_int(2)
        if self.conductor % m:
            raise ValueError(f"2cos(pi/{m}) does not live in conductor-{self.conductor} field")
        k = self.conductor // m
        # 2cos(k*theta) as a polynomial in 2cos(theta): the Dickson recursion.
        prev, cur = self.from_int(2), self.generator
        for _ in range(k - 1):
            prev, cur = cur, self.sub(self.mul(self.generator, cur), prev)
        return cur

    # -- arithmetic --------------------------------------------------------

    def add(self, a: tuple, b: tuple) -> tuple:
        if len(a) == 2:
            return (a[0] + b[0], a[1] + b[1])
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a: tuple, b: tuple) -> tuple:
        if len(a) == 2:
            return (a[0] - b[0], a[1] - b[1])
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a: tuple) -> tuple:
        return tuple(-x for x in a)

    def scale(self, q: Rat, a: tuple) -> tuple:
        return tuple(q * x for x in a)

    def mul(self, a: tuple, b: tuple) -> tuple:
        d = self.degree
        if d == 1:
            return (a[0] * b[0],)
        if d == 2:
            a0, a1 = a
            b0, b1 = b
            t = a1 * b1
            if t:
                r0, r1 = self._red2
                return (a0 * b0 + t * r0, a0 * b1 + a1 * b0 + t * r1)
            return (a0 * b0, a0 * b1 + a1 * b0)
        prod = [RAT_ZERO] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        out = prod[:d]
        for k in range(d - 1):
            top = prod[d + k]
            if top:
                row = self._reduction[k]
                for j in range(d):
                    if row[j]:
                        out[j] += top * row[j]
        return tuple(out)

    def inv(self, a: tuple) -> tuple:
        if self.degree == 1:
            if not a[0]:
                raise ZeroDivisionError("scalar field inversion of zero")
            return (1 / a[0],)
        # Extended Euclid in Q[x] against the modulus.
        r0, r1 = list(self.modulus), list(a)
        s0, s1 = [RAT_ZERO], [RAT_ONE]
        while any(r1):
            while r1 and not r1[-1]:
                r1.pop()
            if not r1:
                break
            q, rem = _poly_divmod(r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        while r0 and not r0[-1]:
            r0.pop()
        if len(r0) != 1:
            raise ZeroDivisionError("element is not invertible (zero divisor?)")
        c = r0[0]
        out = [x / c for x in s0]
        out += [RAT_ZERO] * (self.degree - len(out))
        return tuple(out[: self.degree])

    def div(self, a: tuple, b: tuple) -> tuple:
        return self.mul(a, self.inv(b))

    def is_zero(self, a: tuple) -> bool:
        return not any(a)

    def eq(self, a: tuple, b: tuple) -> bool:
        return all(x == y for x, y in zip(a, b))

    def is_rational(self, a: tuple) -> bool:
        return not any(a[1:])

    def as_rat(self, a: tuple) -> Rat:
        if not self.is_rational(a):
            raise ValueError(f"{a} is irrational")
        return a[0]

    # -- certified signs ----------------------------------------------------

    def sign(self, a: tuple) -> int:
        """Sign of the element under the real embedding; exact."""
        if self.degree == 1 or not any(a[1:]):
            q = a[0]
            return (q > 0) - (q < 0)
        lo, hi = self._root_lo, self._root_hi
        while True:
            vlo, vhi = _interval_horner(a, lo, hi)
            if vlo > 0:
                return 1
            if vhi < 0:
                return -1
            lo, hi = self._bisect(lo, hi)

    def _bisect(self, lo: Rat, hi: Rat) -> tuple[Rat, Rat]:
        mid = (lo + hi) / 2
        if _eval_rat_poly(self.modulus, mid) > 0:
            return lo, mid
        return mid, hi

    def cmp(self, a: tuple, b: tuple) -> int:
        return self.sign(self.sub(a, b))

    # -- formatting ----------------------------------------------------------

    def format(self, a: tuple) -> str:
        if self.degree == 1 or not any(a[1:]):
            return str(a[0])
        parts = []
        for i, c in enumerate(a):
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                mono = "u" if i == 1 else f"u^{i}"
                if c == 1:
                    parts.append(mono)
                elif c == -1:
                    parts.append(f"-{mono}")
                else:
                    parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"ScalarField(conductor={self.conductor}, degree={self.degree})"


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _poly_divmod(num: list, den: list) -> tuple[list, list]:
    num = list(num)
    q = [RAT_ZERO] * max(1, len(num) - len(den) + 1)
    for k in range(len(num) - len(den), -1, -1):
        c = num[k + len(den) - 1] / den[-1]
        q[k] = c
        if c:
            for j, dcoef in enumerate(den):
                num[k + j] -= c * dcoef
    return q, num[: len(den) - 1]


def _poly_mul(a: list, b: list) -> list:
    out = [RAT_ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_sub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    a = a + [RAT_ZERO] * (n - len(a))
    b = b + [RAT_ZERO] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


def _interval_horner(coeffs: Sequence[Rat], lo: Rat, hi: Rat) -> tuple[Rat, Rat]:
    """Interval evaluation of a polynomial on [lo, hi]."""
    alo = ahi = RAT_ZERO
    for c in reversed(coeffs):
        candidates = (alo * lo, alo * hi, ahi * lo, ahi * hi)
        alo, ahi = min(candidates) + c, max(candidates) + c
    return alo, ahi
