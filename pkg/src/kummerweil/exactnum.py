"""Exact arithmetic in Q and in a number field Q(theta) of degree 2 or 3.

Rationals are :class:`fractions.Fraction`; number field elements are kept in
power-basis coordinates and reduced eagerly modulo the minimal polynomial.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Rat = Fraction


class StructuralError(ValueError):
    """Operands live in incompatible structures (different fields, arities)."""


def as_rat(x) -> Fraction:
    """Coerce an int, Fraction or ``"num/den"`` string to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as a rational")


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small = [k for k in range(1, int(n**0.5) + 1) if n % k == 0]
    return sorted(set(small + [n // k for k in small]))


class MinPoly:
    """Monic irreducible integer polynomial of degree 2 or 3 (ascending coefficients)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[int]):
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) not in (3, 4):
            raise StructuralError("minimal polynomial must have degree 2 or 3")
        if coeffs[-1] != 1:
            raise StructuralError("minimal polynomial must be monic")
        object.__setattr__(self, "coeffs", coeffs)
        if self._has_rational_root():
            raise StructuralError(f"{self} is reducible over Q")

    def __setattr__(self, name, value):
        raise AttributeError("MinPoly is immutable")

    def __reduce__(self):
        return (MinPoly, (self.coeffs,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def _has_rational_root(self) -> bool:
        c0 = self.coeffs[0]
        if c0 == 0:
            return True
        # monic: any rational root is an integer dividing c0
        for r in _divisors(c0):
            for s in (r, -r):
                if self(s) == 0:
                    return True
        return False

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def discriminant(self) -> int:
        if self.degree == 2:
            c, b, _ = self.coeffs
            return b * b - 4 * c
        d, c, b, _ = self.coeffs
        return b * b * c * c - 4 * c**3 - 4 * b**3 * d - 27 * d * d + 18 * b * c * d

    def __eq__(self, other):
        return isinstance(other, MinPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"MinPoly({list(self.coeffs)})"

    def __str__(self):
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mon = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if mon and abs(c) == 1:
                coef = "-" if c < 0 else "+"
            else:
                coef = f"{c:+d}"
            terms.append(f"{coef}{mon}")
        return "".join(terms).lstrip("+")


def _poly_trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _poly_trim(out)


def _poly_sub(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _poly_trim([Fraction(x) for x in out])


def _poly_divmod(a: Sequence[Fraction], b: Sequence[Fraction]):
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = a[-1] / lead
        q[shift] = c
        for i, y in enumerate(b):
            a[i + shift] -= c * y
        _poly_trim(a)
    return _poly_trim(q), a


class NFElem:
    """Element c0 + c1*theta + ... of Q(theta), theta a root of ``minpoly``."""

    __slots__ = ("minpoly", "coords")

    def __init__(self, minpoly: MinPoly, coords: Iterable = ()):
        coords = [as_rat(c) for c in coords]
        n = minpoly.degree
        if len(coords) > n:
            coords = _reduce_coords(minpoly, coords)
        coords = coords + [Fraction(0)] * (n - len(coords))
        object.__setattr__(self, "minpoly", minpoly)
        object.__setattr__(self, "coords", tuple(coords))

    def __setattr__(self, name, value):
        raise AttributeError("NFElem is immutable")

    def __reduce__(self):
        return (NFElem, (self.minpoly, self.coords))

    @classmethod
    def from_rational(cls, minpoly: MinPoly, c) -> NFElem:
        return cls(minpoly, [c])

    @classmethod
    def generator(cls, minpoly: MinPoly) -> NFElem:
        return cls(minpoly, [0, 1])

    @property
    def degree(self) -> int:
        return self.minpoly.degree

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def _coerce(self, other) -> NFElem:
        if isinstance(other, NFElem):
            if other.minpoly != self.minpoly:
                raise StructuralError(f"field mismatch: {self.minpoly} vs {other.minpoly}")
            return other
        if isinstance(other, (int, Fraction)):
            return NFElem(self.minpoly, [other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return NFElem(self.minpoly, [a + b for a, b in zip(self.coords, other.coords)])

    __radd__ = __add__

    def __neg__(self):
        return NFElem(self.minpoly, [-a for a in self.coords])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return NFElem(self.minpoly, [a - b for a, b in zip(self.coords, other.coords)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return NFElem(self.minpoly, [a * other for a in self.coords])
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        prod = _poly_mul(self.coords, other.coords)
        return NFElem(self.minpoly, _reduce_coords(self.minpoly, prod))

    __rmul__ = __mul__

    def inverse(self) -> NFElem:
        """Inverse via the extended Euclidean algorithm against the minimal polynomial."""
        a = _poly_trim(list(self.coords))
        if not a:
            raise ZeroDivisionError("inverse of zero in number field")
        m = [Fraction(c) for c in self.minpoly.coeffs]
        # invariant: s*a == r0 (mod m)
        r0, r1 = a, m
        s0, s1 = [Fraction(1)], []
        while r1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        # r0 is a nonzero constant because m is irreducible
        assert len(r0) == 1
        return NFElem(self.minpoly, [c / r0[0] for c in _reduce_coords(self.minpoly, s0)])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return NFElem(self.minpoly, [a / other for a in self.coords])
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = NFElem(self.minpoly, [1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, NFElem):
            return self.minpoly == other.minpoly and self.coords == other.coords
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coords[0] == other
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.coords[0])
        return hash((self.minpoly, self.coords))

    def __bool__(self):
        return any(self.coords)

    def __repr__(self):
        return f"NFElem({self.minpoly!r}, {[str(c) for c in self.coords]})"

    def __str__(self):
        parts = []
        for k, c in enumerate(self.coords):
            if c == 0:
                continue
            mon = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            parts.append(f"({c}){mon}" if mon else f"({c})")
        return " + ".join(parts) or "0"

    def mult_matrix(self) -> list[list[Fraction]]:
        return mult_matrix(self)

    def norm(self) -> Fraction:
        return det(mult_matrix(self))

    def trace(self) -> Fraction:
        m = mult_matrix(self)
        return sum((m[i][i] for i in range(len(m))), Fraction(0))


def _reduce_coords(minpoly: MinPoly, coords: Sequence[Fraction]) -> list[Fraction]:
    """Reduce a coefficient list modulo the monic minimal polynomial."""
    n = minpoly.degree
    c = list(coords)
    mc = minpoly.coeffs
    for k in range(len(c) - 1, n - 1, -1):
        top = c[k]
        if top == 0:
            continue
        c[k] = Fraction(0)
        # theta^k = -sum_i mc[i] theta^(k-n+i)
        for i in range(n):
            c[k - n + i] -= top * mc[i]
    c = c[:n]
    return c + [Fraction(0)] * (n - len(c))


def nf_add(a: NFElem, b: NFElem) -> NFElem:
    return a + b


def nf_mul(a: NFElem, b: NFElem) -> NFElem:
    return a * b


def nf_inv(a: NFElem) -> NFElem:
    return a.inverse()


def mult_matrix(a: NFElem) -> list[list[Fraction]]:
    """Matrix of x -> a*x on the power basis; column k holds a*theta^k."""
    n = a.degree
    theta = NFElem.generator(a.minpoly)
    cols = []
    cur = a
    for _ in range(n):
        cols.append(cur.coords)
        cur = cur * theta
    return [[cols[k][i] for k in range(n)] for i in range(n)]


def det(m: Sequence[Sequence]):
    """Determinant by cofactor expansion; entries need only ring operations."""
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if n == 3:
        return (
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        )
    total = None
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        term = m[0][j] * det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total
