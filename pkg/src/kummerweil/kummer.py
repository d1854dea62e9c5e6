"""Descended generalised Kummer polynomial of a Weil restriction.

For E: y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over Q(theta) of degree n,
complete the square to y^2 = f(x), substitute x -> u_1 + theta u_2 + ... and
take the norm down to Q. The double cover y^2 = g(u_1, ..., u_n) is an affine
model over Q of the quotient of E_1 x ... x E_n by the even sign changes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exactnum import MinPoly, NFElem, StructuralError, as_rat
from .multipoly import MPoly, galois_norm_poly, linear_form, mp_substitute_linear, poly_from_dict, poly_to_dict


@dataclass(frozen=True)
class WeierstrassCurve:
    minpoly: MinPoly
    a1: NFElem
    a2: NFElem
    a3: NFElem
    a4: NFElem
    a6: NFElem
    label: str = ""

    def __post_init__(self):
        for name in ("a1", "a2", "a3", "a4", "a6"):
            v = getattr(self, name)
            if not isinstance(v, NFElem):
                v = NFElem(self.minpoly, [as_rat(v)])
                object.__setattr__(self, name, v)
            elif v.minpoly != self.minpoly:
                raise StructuralError(f"{name} lives in a different field")
        if self.discriminant() == 0:
            raise StructuralError("singular Weierstrass equation")

    @property
    def b2(self) -> NFElem:
        return self.a1 * self.a1 + 4 * self.a2

    @property
    def b4(self) -> NFElem:
        return 2 * self.a4 + self.a1 * self.a3

    @property
    def b6(self) -> NFElem:
        return self.a3 * self.a3 + 4 * self.a6

    @property
    def b8(self) -> NFElem:
        a1, a2, a3, a4, a6 = self.a1, self.a2, self.a3, self.a4, self.a6
        return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4

    def discriminant(self) -> NFElem:
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        return -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    @classmethod
    def from_dict(cls, obj: dict) -> WeierstrassCurve:
        try:
            minpoly = MinPoly(obj["minpoly"])
            coeffs = obj["a"]
            kw = {
                name: NFElem(minpoly, [as_rat(c) for c in coeffs.get(name, ["0"])])
                for name in ("a1", "a2", "a3", "a4", "a6")
            }
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise StructuralError(f"malformed curve spec: {exc}") from exc
        return cls(minpoly=minpoly, label=str(obj.get("label", "")), **kw)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "minpoly": list(self.minpoly.coeffs),
            "a": {
                name: [f"{c.numerator}/{c.denominator}" for c in getattr(self, name).coords]
                for name in ("a1", "a2", "a3", "a4", "a6")
            },
        }


def complete_square(curve: WeierstrassCurve) -> MPoly:
    """Monic cubic f with (y + (a1 x + a3)/2)^2 = f(x) on the curve."""
    return MPoly.univariate([curve.b6 / 4, curve.b4 / 2, curve.b2 / 4, NFElem(curve.minpoly, [1])])


def prime_factors(n: int) -> set[int]:
    """Prime divisors of a nonzero integer by trial division."""
    n = abs(n)
    if n == 0:
        raise ValueError("0 has no finite factorization")
    out = set()
    k = 2
    while k * k <= n:
        if n % k == 0:
            out.add(k)
            while n % k == 0:
                n //= k
        k += 1 if k == 2 else 2
    if n > 1:
        out.add(n)
    return out


@dataclass(frozen=True)
class KummerModel:
    n: int
    g: MPoly
    curve: WeierstrassCurve | None
    bad_primes: frozenset = field(default_factory=frozenset)

    def is_bad(self, p: int) -> bool:
        return p in self.bad_primes

    def to_dict(self) -> dict:
        out = poly_to_dict(self.g)
        out["bad_primes"] = sorted(self.bad_primes)
        if self.curve is not None and self.curve.label:
            out["label"] = self.curve.label
        return out

    @classmethod
    def from_dict(cls, obj: dict) -> KummerModel:
        g = poly_from_dict(obj)
        return cls(n=g.nvars, g=g, curve=None, bad_primes=frozenset(int(p) for p in obj.get("bad_primes", [])))


def descent_images(minpoly: MinPoly) -> list[MPoly]:
    """x -> u_1 + theta u_2 + ... + theta^(n-1) u_n, as a polynomial over Q(theta)."""
    n = minpoly.degree
    theta = NFElem.generator(minpoly)
    return [linear_form([theta**j for j in range(n)])]


def compute_bad_primes(curve: WeierstrassCurve, g: MPoly) -> frozenset:
    bad = {2}
    bad |= prime_factors(curve.minpoly.discriminant())
    norm = curve.discriminant().norm()
    bad |= prime_factors(norm.numerator) | prime_factors(norm.denominator)
    for c in g.terms.values():
        if c.denominator > 1:
            bad |= prime_factors(c.denominator)
    return frozenset(bad)


def build_kummer(curve: WeierstrassCurve) -> KummerModel:
    n = curve.minpoly.degree
    if n not in (2, 3):
        raise StructuralError(f"degree {n} extensions are not supported")
    f = complete_square(curve)
    F = mp_substitute_linear(f, descent_images(curve.minpoly))
    g = galois_norm_poly(F)
    if not all(isinstance(c, Fraction) for c in g.terms.values()):
        raise AssertionError("descended polynomial is not rational")
    if g.total_degree() != 3 * n:
        raise AssertionError(f"expected total degree {3 * n}, got {g.total_degree()}")
    return KummerModel(n=n, g=g, curve=curve, bad_primes=compute_bad_primes(curve, g))


# topological invariants of the crepant resolution in dimension three
_CY3_INVARIANTS = {
    "euler": 96,
    "b0": 1,
    "b1": 0,
    "b2": 51,
    "b3": 8,
    "b4": 51,
    "b5": 0,
    "b6": 1,
    "hodge": {"h11": 51, "h21": 3},
}


def expected_invariants(n: int = 3) -> dict:
    if n != 3:
        raise NotImplementedError(f"invariants are only recorded for n = 3, not n = {n}")
    out = dict(_CY3_INVARIANTS)
    out["hodge"] = dict(out["hodge"])
    return out


def check_euler(inv: dict) -> bool:
    """Alternating Betti sum equals the Euler number and 2(h11 - h21)."""
    betti = sum((-1) ** k * inv[f"b{k}"] for k in range(7))
    h = inv["hodge"]
    return betti == inv["euler"] == 2 * (h["h11"] - h["h21"]) and inv["b3"] == 2 + 2 * h["h21"]


__all__ = [
    "WeierstrassCurve",
    "KummerModel",
    "complete_square",
    "build_kummer",
    "expected_invariants",
    "prime_factors",
]
