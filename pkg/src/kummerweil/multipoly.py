"""Sparse multivariate polynomials over an exact coefficient ring.

Coefficients may be Fractions, :class:`NFElem` values or :class:`FpElem`
residues; the polynomial only relies on ``+``, ``*`` and comparison with 0.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .exactnum import MinPoly, NFElem, StructuralError, as_rat, det
from .fpcount import BadPrimeError, FpElem, check_prime

Exp = tuple[int, ...]


def _grlex_key(e: Exp):
    return (sum(e), e)


class MPoly:
    """Polynomial in ``nvars`` variables stored as {exponent tuple: nonzero coefficient}."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Exp, object] | None = None):
        self.nvars = nvars
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(k) for k in e)
            if len(e) != nvars or any(k < 0 for k in e):
                raise StructuralError(f"bad exponent {e} for {nvars} variables")
            if c != 0:
                clean[e] = c
        self.terms = clean

    # constructors -----------------------------------------------------

    @classmethod
    def const(cls, nvars: int, c) -> MPoly:
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, i: int, nvars: int, one=Fraction(1)) -> MPoly:
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): one})

    @classmethod
    def univariate(cls, coeffs: Sequence) -> MPoly:
        """Univariate polynomial from ascending coefficients."""
        return cls(1, {(k,): c for k, c in enumerate(coeffs)})

    # basic queries ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def coeff(self, e: Exp, default=0):
        return self.terms.get(tuple(e), default)

    def sorted_terms(self) -> list[tuple[Exp, object]]:
        """Terms in descending graded-lexicographic order."""
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def map_coeffs(self, fn: Callable) -> MPoly:
        return MPoly(self.nvars, {e: fn(c) for e, c in self.terms.items()})

    def homogeneous_part(self, d: int) -> MPoly:
        return MPoly(self.nvars, {e: c for e, c in self.terms.items() if sum(e) == d})

    # arithmetic -------------------------------------------------------

    def _check(self, other: MPoly):
        if other.nvars != self.nvars:
            raise StructuralError(f"nvars mismatch: {self.nvars} vs {other.nvars}")

    def __add__(self, other):
        if not isinstance(other, MPoly):
            other = MPoly.const(self.nvars, other)
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            if e in out:
                s = out[e] + c
                if s == 0:
                    del out[e]
                else:
                    out[e] = s
            else:
                out[e] = c
        return MPoly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, MPoly):
            other = MPoly.const(self.nvars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            return self.scale(other)
        self._check(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                prod = c1 * c2
                if e in out:
                    out[e] = out[e] + prod
                else:
                    out[e] = prod
        return MPoly(self.nvars, out)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> MPoly:
        return MPoly(self.nvars, {e: v * c for e, v in self.terms.items()})

    def __pow__(self, k: int) -> MPoly:
        if k < 0:
            raise ValueError("negative power of a polynomial")
        one = next(iter(self.terms.values()), Fraction(1))
        result = MPoly.const(self.nvars, one * 0 + 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return f"MPoly({self.nvars}, {len(self.terms)} terms)"

    def __str__(self):
        names = "uvwz" if self.nvars <= 4 else None
        parts = []
        for e, c in self.sorted_terms():
            mon = "*".join(
                (names[i] if names else f"x{i}") + (f"^{k}" if k > 1 else "")
                for i, k in enumerate(e)
                if k
            )
            parts.append(f"({c})*{mon}" if mon else f"({c})")
        return " + ".join(parts) or "0"

    # evaluation / substitution ---------------------------------------

    def __call__(self, *point):
        return mp_evaluate(self, point)


def mp_add(p: MPoly, q: MPoly) -> MPoly:
    return p + q


def mp_mul(p: MPoly, q: MPoly) -> MPoly:
    return p * q


def mp_scale(p: MPoly, c) -> MPoly:
    return p.scale(c)


def mp_evaluate(p: MPoly, point: Sequence):
    if len(point) != p.nvars:
        raise StructuralError(f"expected {p.nvars} coordinates, got {len(point)}")
    total = 0
    for e, c in p.terms.items():
        term = c
        for x, k in zip(point, e):
            if k:
                term = term * x**k
        total = term + total
    return total


def mp_substitute_linear(p: MPoly, images: Sequence[MPoly]) -> MPoly:
    """Replace variable i of ``p`` by ``images[i]`` and expand.

    The images may be arbitrary polynomials, not only linear forms; all must
    share one variable count.
    """
    if len(images) != p.nvars:
        raise StructuralError(f"need {p.nvars} images, got {len(images)}")
    if not images:
        return p
    m = images[0].nvars
    for img in images:
        if img.nvars != m:
            raise StructuralError("images disagree on the number of variables")
    # cache powers of each image
    powers: list[dict[int, MPoly]] = [{} for _ in images]

    def power(i: int, k: int) -> MPoly:
        cache = powers[i]
        if k not in cache:
            cache[k] = images[i] if k == 1 else power(i, k - 1) * images[i]
        return cache[k]

    out = MPoly(m)
    for e, c in p.terms.items():
        term = MPoly.const(m, c)
        for i, k in enumerate(e):
            if k:
                term = term * power(i, k)
        out = out + term
    return out


def nf_components(F: MPoly) -> tuple[list[MPoly], MinPoly]:
    """Split F = F_0 + F_1*theta + ... into rational-coefficient polynomials F_j."""
    minpoly = None
    for c in F.terms.values():
        if isinstance(c, NFElem):
            if minpoly is None:
                minpoly = c.minpoly
            elif c.minpoly != minpoly:
                raise StructuralError("coefficients from different number fields")
    if minpoly is None:
        raise StructuralError("polynomial has no number-field coefficients")
    n = minpoly.degree
    comps = [dict() for _ in range(n)]
    for e, c in F.terms.items():
        coords = c.coords if isinstance(c, NFElem) else (as_rat(c),) + (Fraction(0),) * (n - 1)
        for j in range(n):
            if coords[j] != 0:
                comps[j][e] = coords[j]
    return [MPoly(F.nvars, comp) for comp in comps], minpoly


def galois_norm_poly(F: MPoly) -> MPoly:
    """Product of all conjugates of F, as a rational-coefficient polynomial.

    Computed as det of multiplication-by-F on the power basis over Q[u],
    so the splitting field never appears.
    """
    comps, minpoly = nf_components(F)
    n = minpoly.degree
    mc = [Fraction(c) for c in minpoly.coeffs]
    cols = [comps]
    for _ in range(n - 1):
        prev = cols[-1]
        top = prev[n - 1]
        # multiply by theta: theta^n = -sum mc[i] theta^i
        cur = [(-top).scale(mc[0])]
        for i in range(1, n):
            cur.append(prev[i - 1] - top.scale(mc[i]))
        cols.append(cur)
    matrix = [[cols[k][i] for k in range(n)] for i in range(n)]
    g = det(matrix)
    for c in g.terms.values():
        if not isinstance(c, Fraction):
            raise AssertionError("norm polynomial has a non-rational coefficient")
    return g


def mp_reduce_mod_p(p: MPoly, prime: int) -> MPoly:
    """Map rational coefficients into F_prime; denominators divisible by prime are bad."""
    check_prime(prime)
    out = {}
    for e, c in p.terms.items():
        c = as_rat(c)
        if c.denominator % prime == 0:
            raise BadPrimeError(prime, f"coefficient denominator {c.denominator} divisible by {prime}")
        r = c.numerator * pow(c.denominator, -1, prime) % prime
        if r:
            out[e] = FpElem(r, prime)
    return MPoly(p.nvars, out)


def mp_specialize_mod_p(F: MPoly, root: int, prime: int) -> MPoly:
    """Reduce F over Q(theta) to F_prime by sending theta to ``root``."""
    check_prime(prime)
    out = {}
    for e, c in F.terms.items():
        coords = c.coords if isinstance(c, NFElem) else (as_rat(c),)
        v = 0
        for j, q in enumerate(coords):
            if q.denominator % prime == 0:
                raise BadPrimeError(prime, f"coefficient denominator {q.denominator} divisible by {prime}")
            v += q.numerator * pow(q.denominator, -1, prime) * pow(root, j, prime)
        if v % prime:
            out[e] = FpElem(v, prime)
    return MPoly(F.nvars, out)


# serialization ----------------------------------------------------------


def _rat_str(c) -> str:
    c = as_rat(c)
    return f"{c.numerator}/{c.denominator}"


def poly_to_dict(p: MPoly) -> dict:
    return {
        "nvars": p.nvars,
        "terms": [{"exp": list(e), "coeff": _rat_str(c)} for e, c in p.sorted_terms()],
    }


def poly_from_dict(obj: Mapping) -> MPoly:
    try:
        nvars = int(obj["nvars"])
        terms = {tuple(t["exp"]): as_rat(t["coeff"]) for t in obj["terms"]}
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise StructuralError(f"malformed polynomial JSON: {exc}") from exc
    return MPoly(nvars, terms)


def poly_to_json(p: MPoly) -> str:
    return json.dumps(poly_to_dict(p), sort_keys=True)


def poly_from_json(text: str) -> MPoly:
    return poly_from_dict(json.loads(text))


def linear_form(coeffs: Iterable, nvars: int | None = None) -> MPoly:
    """sum_j coeffs[j] * u_j as an MPoly."""
    coeffs = list(coeffs)
    n = nvars if nvars is not None else len(coeffs)
    terms = {}
    for j, c in enumerate(coeffs):
        e = [0] * n
        e[j] = 1
        terms[tuple(e)] = c
    return MPoly(n, terms)
