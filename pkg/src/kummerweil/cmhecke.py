"""Imaginary quadratic ideals, Hecke characters and CM newform coefficients.

Ideals of O_K (K of discriminant d < 0) are lattices
``scale * (a Z + (b + sqrt(d))/2 Z)``, i.e. primitive binary quadratic forms
(a, b, c) with b^2 - 4ac = d, times a positive rational scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import partial
from typing import Callable

from .exactnum import as_rat
from .fpcount import RamifiedPrimeError, check_prime, is_prime


class DomainError(ValueError):
    """Requested value lies outside the domain where it is defined here."""


class ClassExponentError(ArithmeticError):
    pass


class InconsistencyError(ArithmeticError):
    pass


# -- Kronecker symbol ---------------------------------------------------------


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a|n) for odd positive n, by quadratic reciprocity."""
    if n <= 0 or n % 2 == 0:
        raise ValueError("n must be odd and positive")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n) for arbitrary integers."""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    return result * jacobi(a, n)


def legendre_rat(x, p: int) -> int:
    """(x|p) for a rational x whose denominator is prime to p."""
    x = as_rat(x)
    if x.denominator % p == 0:
        raise ValueError(f"denominator of {x} divisible by {p}")
    return kronecker(x.numerator * pow(x.denominator, -1, p) % p, p)


# -- orders and elements ------------------------------------------------------


def _squarefree(n: int) -> bool:
    n = abs(n)
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


def is_fundamental(d: int) -> bool:
    if d % 4 == 1:
        return _squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and _squarefree(m)
    return False


@dataclass(frozen=True)
class QuadOrder:
    disc: int

    def __post_init__(self):
        if self.disc >= 0 or not is_fundamental(self.disc):
            raise ValueError(f"{self.disc} is not a negative fundamental discriminant")

    @property
    def class_number(self) -> int:
        return len(class_group(self))

    def unit_ideal(self) -> QuadIdeal:
        return QuadIdeal(1, self.disc % 2, self.disc)


@dataclass(frozen=True)
class KElem:
    """x + y*sqrt(d) with rational x, y."""

    x: Fraction
    y: Fraction
    d: int

    def __post_init__(self):
        object.__setattr__(self, "x", as_rat(self.x))
        object.__setattr__(self, "y", as_rat(self.y))

    @classmethod
    def half(cls, x: int, y: int, d: int) -> KElem:
        """(x + y*sqrt(d))/2."""
        return cls(Fraction(x, 2), Fraction(y, 2), d)

    def _coerce(self, other) -> KElem:
        if isinstance(other, KElem):
            if other.d != self.d:
                raise ValueError("elements of different quadratic fields")
            return other
        if isinstance(other, (int, Fraction)):
            return KElem(other, 0, self.d)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return KElem(self.x + o.x, self.y + o.y, self.d)

    __radd__ = __add__

    def __neg__(self):
        return KElem(-self.x, -self.y, self.d)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return KElem(self.x * o.x + self.d * self.y * o.y, self.x * o.y + self.y * o.x, self.d)

    __rmul__ = __mul__

    def conj(self) -> KElem:
        return KElem(self.x, -self.y, self.d)

    def norm(self) -> Fraction:
        return self.x * self.x - self.d * self.y * self.y

    def trace(self) -> Fraction:
        return 2 * self.x

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in K")
        num = self * o.conj()
        return KElem(num.x / n, num.y / n, self.d)

    def __pow__(self, k: int):
        result = KElem(1, 0, self.d)
        for _ in range(k):
            result = result * self
        return result

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def is_integral(self) -> bool:
        tx, ty = 2 * self.x, 2 * self.y
        if tx.denominator != 1 or ty.denominator != 1:
            return False
        return (tx.numerator - ty.numerator * self.d) % 2 == 0 and (tx * tx - self.d * ty * ty) % 4 == 0

    def __str__(self):
        if self.y == 0:
            return str(self.x)
        return f"{self.x}{'+' if self.y > 0 else '-'}{abs(self.y)}*sqrt({self.d})"


# -- forms / ideals -----------------------------------------------------------


@dataclass(frozen=True)
class QuadIdeal:
    """scale * (a Z + (b + sqrt(disc))/2 Z); b is kept in (-a, a]."""

    a: int
    b: int
    disc: int
    scale: Fraction = Fraction(1)

    def __post_init__(self):
        a, b = self.a, self.b
        if a <= 0:
            raise ValueError("a must be positive")
        if (b * b - self.disc) % (4 * a):
            raise ValueError(f"b^2 != d mod 4a for ({a}, {b}) in disc {self.disc}")
        b = (b + a - 1) % (2 * a) - a + 1  # representative in (-a, a]
        object.__setattr__(self, "b", b)
        scale = as_rat(self.scale)
        if scale <= 0:
            raise ValueError("scale must be positive")
        object.__setattr__(self, "scale", scale)

    @property
    def c(self) -> int:
        return (self.b * self.b - self.disc) // (4 * self.a)

    @property
    def form(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def norm(self) -> Fraction:
        return self.scale * self.scale * self.a

    def conj(self) -> QuadIdeal:
        return QuadIdeal(self.a, -self.b, self.disc, self.scale)

    def primitive(self) -> QuadIdeal:
        return QuadIdeal(self.a, self.b, self.disc)

    def scaled(self, s) -> QuadIdeal:
        return QuadIdeal(self.a, self.b, self.disc, self.scale * as_rat(s))

    def contains(self, z: KElem) -> bool:
        """Membership of z = (x + y sqrt(d))/2 in the lattice."""
        w = KElem(z.x / self.scale, z.y / self.scale, z.d)
        tx, ty = 2 * w.x, 2 * w.y
        if tx.denominator != 1 or ty.denominator != 1:
            return False
        x, y = tx.numerator, ty.numerator
        return (x - y * self.b) % (2 * self.a) == 0

    def __mul__(self, other: QuadIdeal) -> QuadIdeal:
        return ideal_mul(self, other)

    def __pow__(self, k: int) -> QuadIdeal:
        return ideal_pow(self, k)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def compose_forms(f1: tuple[int, int, int], f2: tuple[int, int, int]) -> tuple[tuple[int, int, int], int]:
    """Gauss composition of primitive forms; returns (form, content).

    The ideal product of the primitive ideals is ``content * [a3, (b3+sqrt d)/2]``.
    """
    a1, b1, c1 = f1
    a2, b2, c2 = f2
    if b1 * b1 - 4 * a1 * c1 != b2 * b2 - 4 * a2 * c2:
        raise ValueError("forms of different discriminants")
    if a1 > a2:
        a1, b1, c1, a2, b2, c2 = a2, b2, c2, a1, b1, c1
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        d, u, _ = _xgcd(a2, a1)
        y1 = u
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        d1, x2, y2 = _xgcd(s, d)
        y2 = -y2
    v1, v2 = a1 // d1, a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3 = (c2 * d1 + r * (b2 + v2 * r)) // v1
    return (a3, b3, c3), d1


def ideal_mul(I: QuadIdeal, J: QuadIdeal) -> QuadIdeal:
    if I.disc != J.disc:
        raise ValueError("ideals of different orders")
    (a, b, _), content = compose_forms(I.form, J.form)
    return QuadIdeal(a, b, I.disc, I.scale * J.scale * content)


def ideal_pow(I: QuadIdeal, k: int) -> QuadIdeal:
    if k < 0:
        raise ValueError("negative ideal power")
    result = QuadIdeal(1, I.disc % 2, I.disc)
    for _ in range(k):
        result = ideal_mul(result, I)
    return result


def reduce_form(a: int, b: int, c: int) -> tuple[int, int, int]:
    """Reduced representative of a positive definite form."""
    while True:
        if b > a or b <= -a:
            k = (a - b) // (2 * a)
            b, c = b + 2 * k * a, a * k * k + b * k + c
        if a > c:
            a, b, c = c, -b, a
            continue
        if a == c and b < 0:
            b = -b
        return a, b, c


def ideal_reduce(I: QuadIdeal) -> QuadIdeal:
    """Reduced primitive ideal in the class of I."""
    a, b, _ = reduce_form(*I.form)
    return QuadIdeal(a, b, I.disc)


def class_group(order: QuadOrder) -> list[tuple[int, int, int]]:
    """All reduced forms of discriminant order.disc, sorted."""
    d = order.disc
    forms = []
    a = 1
    while 3 * a * a <= -d:
        for b in range(-a + 1, a + 1):
            if (b * b - d) % (4 * a):
                continue
            c = (b * b - d) // (4 * a)
            if c < a:
                continue
            if b < 0 and (a == c):
                continue
            forms.append((a, b, c))
        a += 1
    return sorted(forms)


def is_principal(I: QuadIdeal) -> bool:
    return ideal_reduce(I).a == 1


def class_order(I: QuadIdeal) -> int:
    """Order of the ideal class of I."""
    k, J = 1, I
    while not is_principal(J):
        J = ideal_mul(J, I)
        k += 1
    return k


def _reduced_basis(I: QuadIdeal) -> tuple[KElem, KElem, tuple[int, int, int]]:
    """Reduce the norm form of the primitive part of I, carrying the Z-basis along."""
    d = I.disc
    a, b, c = I.form
    w1, w2 = KElem(a, 0, d), KElem.half(b, 1, d)
    while True:
        if b > a or b <= -a:
            k = (a - b) // (2 * a)
            b, c = b + 2 * k * a, a * k * k + b * k + c
            w2 = w2 + k * w1
        if a > c:
            a, b, c = c, -b, a
            w1, w2 = w2, -w1
            continue
        if a == c and b < 0:
            b = -b
            w1, w2 = w2, -w1
        return w1, w2, (a, b, c)


def _generator_by_search(I: QuadIdeal) -> KElem | None:
    d = I.disc
    N = I.a
    best = None
    ymax = math.isqrt(4 * N // -d)
    for y in range(-ymax, ymax + 1):
        t = 4 * N + d * y * y
        if t < 0:
            continue
        x = math.isqrt(t)
        if x * x != t:
            continue
        for xs in {x, -x}:
            z = KElem.half(xs, y, d)
            if I.primitive().contains(z):
                if best is None or (z.x, z.y) > (best.x, best.y):
                    best = z
    return best


def principal_generator(I: QuadIdeal) -> KElem | None:
    """A generator of I if principal (canonical sign: x > 0, or x = 0 and y > 0)."""
    if I.disc in (-3, -4):
        # extra units: pick the canonical associate by scanning elements of norm N(I)
        best = _generator_by_search(I)
    else:
        w1, _, form = _reduced_basis(I)
        if form[0] != 1:
            return None
        best = max(w1, -w1, key=lambda z: (z.x, z.y))
    if best is None:
        return None
    return best * I.scale


def principal_ideal(beta: KElem) -> QuadIdeal:
    """The ideal beta*O_K of a nonzero algebraic integer beta."""
    d = beta.d
    if beta.is_zero() or not beta.is_integral():
        raise ValueError(f"{beta} is not a nonzero algebraic integer")
    x, y = int(2 * beta.x), int(2 * beta.y)
    # beta = m + n*omega with omega = (d + sqrt d)/2; strip the rational content
    n = y
    m = (x - y * d) // 2
    content = math.gcd(m, n)
    m, n = m // content, n // content
    x, y = 2 * m + n * d, n
    N = (x * x - d * y * y) // 4
    for b in range(2 * N):
        if (b * b - d) % (4 * N) == 0 and (x - y * b) % (2 * N) == 0:
            return QuadIdeal(N, b, d, content)
    raise InconsistencyError(f"no primitive ideal of norm {N} contains {beta}")


@dataclass(frozen=True)
class SplitRecord:
    p: int
    kind: str  # "split", "inert" or "ramified"
    primes: tuple[QuadIdeal, ...]


def prime_above(order: QuadOrder, p: int) -> SplitRecord:
    check_prime(p)
    d = order.disc
    k = kronecker(d, p)
    if k == -1:
        return SplitRecord(p, "inert", (QuadIdeal(1, d % 2, d, p),))
    # smallest b >= 0 with b^2 = d mod 4p
    b = next(b for b in range(2 * p) if (b * b - d) % (4 * p) == 0)
    P = QuadIdeal(p, b, d)
    if k == 0:
        return SplitRecord(p, "ramified", (P,))
    return SplitRecord(p, "split", (P, P.conj()))


def frobenius_degree(order: QuadOrder, p: int) -> int:
    """Residue degree over Q of a prime of the Hilbert class field above p."""
    rec = prime_above(order, p)
    if rec.kind == "ramified":
        raise RamifiedPrimeError(p, f"ramified in disc {order.disc}")
    if rec.kind == "inert":
        return 2
    return class_order(rec.primes[0])


# -- Hecke characters ---------------------------------------------------------


def _coprime_to(I: QuadIdeal, q: int) -> bool:
    n = I.norm()
    return n.numerator % q != 0 and n.denominator % q != 0


def hecke_w4(order: QuadOrder, I: QuadIdeal) -> KElem:
    """phi(I) = (Re(alpha) | p0) * alpha where I^3 = (alpha), p0 = -disc.

    Ideals not coprime to p0 map to 0.
    """
    d = order.disc
    p0 = -d
    if not (p0 > 4 and is_prime(p0) and d % 4 == 1):
        raise DomainError(f"cube character needs -disc an odd prime > 3, got {d}")
    if not _coprime_to(I, p0):
        return KElem(0, 0, d)
    cube = ideal_pow(I, 3)
    alpha = principal_generator(cube)
    if alpha is None:
        raise ClassExponentError(f"cube of {I.form} is not principal")
    return legendre_rat(alpha.x, p0) * alpha


def hecke_w3_15(I: QuadIdeal, twisted: bool = True) -> KElem:
    """Infinity-type 2 character of Q(sqrt(-15)): (alpha) -> alpha^2 and
    the prime above 3 -> 3, or -3 when ``twisted``."""
    d = -15
    if I.disc != d:
        raise ValueError("ideal is not in Q(sqrt(-15))")
    p3_value = -3 if twisted else 3
    gen = principal_generator(I)
    if gen is not None:
        return gen * gen
    p3 = prime_above(QuadOrder(d), 3).primes[0]
    gen = principal_generator(ideal_mul(I, p3))
    if gen is None:
        raise InconsistencyError("class group of Q(sqrt(-15)) should have order 2")
    value = gen * gen / p3_value
    if value.norm() != I.norm() ** 2:
        raise InconsistencyError("character value has the wrong absolute value")
    return value


@dataclass(frozen=True)
class HeckeCharacter:
    """A Hecke character of an imaginary quadratic field with its weight.

    ``weight`` is infinity type + 1; ``bad`` lists primes where a_p is not computed.
    """

    name: str
    order: QuadOrder
    weight: int
    evaluate: Callable[[QuadIdeal], KElem]
    bad: frozenset = frozenset()

    def __call__(self, I: QuadIdeal) -> KElem:
        return self.evaluate(I)


def cube_character(disc: int) -> HeckeCharacter:
    order = QuadOrder(disc)
    return HeckeCharacter(f"cube-twist({disc})", order, 4, partial(hecke_w4, order), frozenset({-disc}))


def sqrt15_character(twisted: bool = True) -> HeckeCharacter:
    name = "phi'(-15)" if twisted else "phi(-15)"
    return HeckeCharacter(name, QuadOrder(-15), 3, partial(hecke_w3_15, twisted=twisted), frozenset({3, 5}))


def newform_ap(character: HeckeCharacter, p: int) -> int:
    rec = prime_above(character.order, p)
    if rec.kind == "ramified" or p in character.bad:
        raise DomainError(f"a_{p} is not computed at a ramified or conductor prime")
    if rec.kind == "inert":
        return 0
    P, Q = rec.primes
    v = character(P) + character(Q)
    if v.y != 0 or v.x.denominator != 1:
        raise InconsistencyError(f"a_{p} = {v} is not a rational integer")
    return int(v.x)


def deligne_ok(ap: int, p: int, weight: int) -> bool:
    """|a_p| <= 2 p^((k-1)/2), compared after squaring."""
    return ap * ap <= 4 * p ** (weight - 1)


def resolve_ap_sign(abs_ap: int, count: int, p: int) -> tuple[int, int]:
    """Signed a_p and l_p from #S(F_p) = a_p + p*l_p + p^2."""
    abs_ap = abs(abs_ap)
    candidates = [abs_ap] if abs_ap == 0 else [abs_ap, -abs_ap]
    matches = [a for a in candidates if (count - a) % p == 0]
    if len(matches) != 1:
        raise InconsistencyError(f"count {count} does not single out a sign for |a_{p}| = {abs_ap}")
    a = matches[0]
    l = (count - a - p * p) // p
    if l not in (-2, 0, 2):
        raise InconsistencyError(f"l_{p} = {l} outside {{-2, 0, 2}}")
    return a, l
