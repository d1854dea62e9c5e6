"""Prime fields, quadratic characters and point counts of double covers y^2 = g(u)."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

# largest prime accepted; trial division stays cheap and residue tables small
MAX_PRIME = 10**6


class BadPrimeError(ValueError):
    """Raised when an object has bad (or undefined) reduction at ``p``."""

    def __init__(self, p: int, reason: str = ""):
        super().__init__(f"bad prime {p}" + (f": {reason}" if reason else ""))
        self.p = p


class RamifiedPrimeError(ValueError):
    def __init__(self, p: int, reason: str = ""):
        super().__init__(f"ramified prime {p}" + (f": {reason}" if reason else ""))
        self.p = p


@lru_cache(maxsize=4096)
def is_prime(n: int) -> bool:
    """Deterministic trial division."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for k in range(3, math.isqrt(n) + 1, 2):
        if n % k == 0:
            return False
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"{p!r} is not a prime")
    if p > MAX_PRIME:
        raise ValueError(f"prime {p} exceeds supported range {MAX_PRIME}")
    return p


def check_odd_prime(p: int) -> int:
    check_prime(p)
    if p == 2:
        raise ValueError("p = 2 is not supported")
    return p


def primes_up_to(n: int) -> list[int]:
    return [p for p in range(2, n + 1) if is_prime(p)]


class FpElem:
    """Residue class modulo a prime p."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        if not is_prime(p):
            raise ValueError(f"modulus {p} is not prime")
        self.value = int(value) % p
        self.p = p

    def _lift(self, other) -> int:
        if isinstance(other, FpElem):
            if other.p != self.p:
                raise ValueError(f"mixing F_{self.p} and F_{other.p}")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        v = self._lift(other)
        if v is NotImplemented:
            return v
        return FpElem(self.value + v, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._lift(other)
        if v is NotImplemented:
            return v
        return FpElem(self.value - v, self.p)

    def __rsub__(self, other):
        return FpElem(other - self.value, self.p)

    def __neg__(self):
        return FpElem(-self.value, self.p)

    def __mul__(self, other):
        v = self._lift(other)
        if v is NotImplemented:
            return v
        return FpElem(self.value * v, self.p)

    __rmul__ = __mul__

    def inverse(self) -> FpElem:
        if self.value == 0:
            raise ZeroDivisionError(f"inverse of 0 in F_{self.p}")
        return FpElem(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        v = self._lift(other)
        if v is NotImplemented:
            return v
        return self * FpElem(v, self.p).inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return FpElem(pow(self.value, k, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, FpElem):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return (self.value - other) % self.p == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"FpElem({self.value}, {self.p})"

    def __str__(self):
        return str(self.value)


@lru_cache(maxsize=64)
def residue_table(p: int) -> np.ndarray:
    """chi[a] for a in [0, p): 0, +1 on nonzero squares, -1 otherwise."""
    check_odd_prime(p)
    chi = np.full(p, -1, dtype=np.int8)
    chi[0] = 0
    squares = (np.arange(1, p, dtype=np.int64) ** 2) % p
    chi[squares] = 1
    chi.setflags(write=False)
    return chi


def quadratic_character(a: FpElem) -> int:
    return int(residue_table(a.p)[a.value])


@dataclass(frozen=True)
class CountResult:
    p: int
    count: int
    character_sum: int
    nvars: int

    def __post_init__(self):
        total = self.p**self.nvars
        if self.count != total + self.character_sum:
            raise AssertionError("count and character sum disagree")
        if abs(self.character_sum) > total:
            raise AssertionError("character sum exceeds the number of points")


def _poly_modulus(g) -> int | None:
    for c in g.terms.values():
        if isinstance(c, FpElem):
            return c.p
    return None


def dense_coefficients(g, p: int) -> np.ndarray:
    """Coefficient tensor of g mod p; axis i indexes the degree in variable i."""
    n = g.nvars
    degs = [max(g.degree_in(i), 0) for i in range(n)]
    coef = np.zeros([d + 1 for d in degs], dtype=np.int64)
    for e, c in g.terms.items():
        coef[e] = int(c.value if isinstance(c, FpElem) else c) % p
    return coef


def _power_matrix(p: int, deg: int, xs: np.ndarray) -> np.ndarray:
    """P[x, k] = x^k mod p for x in xs."""
    P = np.ones((len(xs), deg + 1), dtype=np.int64)
    for k in range(1, deg + 1):
        P[:, k] = (P[:, k - 1] * xs) % p
    return P


def _value_histogram(coef: np.ndarray, p: int, first: range) -> np.ndarray:
    """Histogram of g(u) mod p over u in first x F_p^(n-1)."""
    T = coef
    full = np.arange(p, dtype=np.int64)
    for axis in range(coef.ndim):
        xs = np.asarray(first, dtype=np.int64) if axis == 0 else full
        P = _power_matrix(p, coef.shape[axis] - 1, xs)
        # contract the leading (degree) axis; the evaluated axis is appended last
        T = np.tensordot(T, P.T, axes=([0], [0])) % p
    return np.bincount(T.ravel(), minlength=p)


def _shards(p: int, nvars: int, workers: int) -> list[range]:
    # bound memory of one dense evaluation block to ~2M residues
    per_row = p ** (nvars - 1)
    rows = max(1, min(p, 2_000_000 // max(per_row, 1)))
    if workers > 1:
        rows = max(1, min(rows, -(-p // workers)))
    return [range(s, min(s + rows, p)) for s in range(0, p, rows)]


def count_double_cover(g, p: int | None = None, workers: int = 1) -> CountResult:
    """Number of affine points (u, y) in F_p^(n+1) with y^2 = g(u).

    The first coordinate is split into shards; with ``workers > 1`` shards are
    evaluated in separate processes. Histograms are summed in shard order, so
    the result does not depend on ``workers``.
    """
    if p is None:
        p = _poly_modulus(g)
        if p is None:
            raise ValueError("modulus required for a polynomial without F_p coefficients")
    check_odd_prime(p)
    n = g.nvars
    if n == 0:
        raise ValueError("need at least one variable")
    chi = residue_table(p)
    coef = dense_coefficients(g, p)
    shards = _shards(p, n, workers)
    if workers > 1 and len(shards) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            hists = list(pool.map(_value_histogram, [coef] * len(shards), [p] * len(shards), shards))
    else:
        hists = [_value_histogram(coef, p, s) for s in shards]
    hist = np.zeros(p, dtype=np.int64)
    for h in hists:
        hist += h
    character_sum = int(np.dot(hist, chi.astype(np.int64)))
    # independent tally: one point over a zero, two over a nonzero square
    tally = int(hist[0]) + 2 * int(hist[chi == 1].sum())
    if int(hist.sum()) != p**n:
        raise AssertionError("evaluation grid has the wrong size")
    return CountResult(p=p, count=tally, character_sum=character_sum, nvars=n)


def count_double_cover_reference(g, p: int | None = None) -> CountResult:
    """Pure-Python count; partial evaluations are cached as univariate
    polynomials in the innermost variable and finished by Horner."""
    if p is None:
        p = _poly_modulus(g)
    check_odd_prime(p)
    n = g.nvars
    chi = [int(c) for c in residue_table(p)]
    terms = [(e, int(c.value if isinstance(c, FpElem) else c) % p) for e, c in g.terms.items()]
    deg_last = max((e[-1] for e, _ in terms), default=0)
    total = 0
    for outer in product(range(p), repeat=n - 1):
        inner = [0] * (deg_last + 1)
        for e, c in terms:
            v = c
            for x, k in zip(outer, e[:-1]):
                if k:
                    v = v * pow(x, k, p) % p
            inner[e[-1]] = (inner[e[-1]] + v) % p
        for w in range(p):
            acc = 0
            for c in reversed(inner):
                acc = (acc * w + c) % p
            total += chi[acc]
    return CountResult(p=p, count=p**n + total, character_sum=total, nvars=n)


def _cubic_coeffs(f) -> tuple[list[int], int]:
    if hasattr(f, "terms"):
        if f.nvars != 1:
            raise ValueError("elliptic_trace needs a univariate cubic")
        p = _poly_modulus(f)
        coeffs = [0] * 4
        for (k,), c in f.terms.items():
            if k > 3:
                raise ValueError("polynomial degree exceeds 3")
            coeffs[k] = int(c)
        return coeffs, p
    raise TypeError("expected a univariate MPoly over F_p")


def cubic_discriminant(c: list[int]) -> int:
    d, cc, b, a = c
    return b * b * cc * cc - 4 * a * cc**3 - 4 * b**3 * d - 27 * a * a * d * d + 18 * a * b * cc * d


def elliptic_trace(f, p: int | None = None) -> int:
    """Frobenius trace p + 1 - #E(F_p) of y^2 = f(x), f a cubic over F_p."""
    coeffs, fp = _cubic_coeffs(f)
    p = p or fp
    if p is None:
        raise ValueError("modulus unknown")
    check_odd_prime(p)
    coeffs = [c % p for c in coeffs]
    if coeffs[3] == 0 or cubic_discriminant(coeffs) % p == 0:
        raise BadPrimeError(p, "singular reduction")
    chi = residue_table(p)
    xs = np.arange(p, dtype=np.int64)
    vals = np.zeros(p, dtype=np.int64)
    for c in reversed(coeffs):
        vals = (vals * xs + c) % p
    trace = -int(chi[vals].astype(np.int64).sum())
    if trace * trace > 4 * p:
        raise AssertionError(f"Hasse bound violated: b_{p} = {trace}")
    return trace


def minpoly_roots_mod_p(m, p: int) -> list[int]:
    """All roots of the minimal polynomial in F_p, ascending."""
    check_prime(p)
    if m.discriminant() % p == 0:
        raise RamifiedPrimeError(p, f"{p} divides disc({m}) = {m.discriminant()}")
    return [x for x in range(p) if m(x) % p == 0]


def root_pattern(m, p: int) -> str:
    """'split_complete', 'partial' or 'inert' for the factorization of m mod p."""
    roots = minpoly_roots_mod_p(m, p)
    if len(roots) == m.degree:
        return "split_complete"
    return "partial" if roots else "inert"
