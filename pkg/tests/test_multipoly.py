import json
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from kummerweil.exactnum import MinPoly, NFElem, StructuralError
from kummerweil.fpcount import BadPrimeError, FpElem, count_double_cover, minpoly_roots_mod_p, primes_up_to
from kummerweil.multipoly import (
    MPoly,
    galois_norm_poly,
    linear_form,
    mp_evaluate,
    mp_reduce_mod_p,
    mp_scale,
    mp_specialize_mod_p,
    mp_substitute_linear,
    poly_from_json,
    poly_to_json,
)

SQRT5 = MinPoly([-5, 0, 1])
CUBIC = MinPoly([-1, -1, 0, 1])

u = MPoly.var(0, 2)
v = MPoly.var(1, 2)


@st.composite
def polys(draw, nvars=2, max_terms=6, max_deg=3):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        e = tuple(draw(st.integers(0, max_deg)) for _ in range(nvars))
        terms[e] = draw(st.fractions(min_value=-20, max_value=20, max_denominator=6))
    return MPoly(nvars, terms)


@st.composite
def nf_polys(draw, m, nvars=2, max_terms=4, max_deg=2):
    n = draw(st.integers(1, max_terms))
    terms = {}
    for _ in range(n):
        e = tuple(draw(st.integers(0, max_deg)) for _ in range(nvars))
        cs = [draw(st.fractions(min_value=-9, max_value=9, max_denominator=4)) for _ in range(m.degree)]
        terms[e] = NFElem(m, cs)
    return MPoly(nvars, terms)


def test_basic_examples():
    assert (u + v) * (u - v) == u * u - v * v
    p = u * u + 3 * v
    assert p + MPoly(2) == p
    assert mp_scale(u * u, Fraction(1, 4)) == MPoly(2, {(2, 0): Fraction(1, 4)})


def test_zero_coefficients_are_dropped():
    p = (u + v) - v
    assert p.terms == {(1, 0): 1}
    assert (u - u).is_zero()


def test_nvars_mismatch():
    with pytest.raises(StructuralError):
        u + MPoly.var(0, 3)


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), polys())
def test_ring_axioms(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert (p - q) + q == p


def test_substitute_binomial():
    d = 7
    m = MinPoly([-d, 0, 1])
    theta = NFElem.generator(m)
    x2 = MPoly(1, {(2,): NFElem(m, [1])})
    image = linear_form([NFElem(m, [1]), theta])
    out = mp_substitute_linear(x2, [image])
    assert out == MPoly(2, {(2, 0): NFElem(m, [1]), (1, 1): 2 * theta, (0, 2): NFElem(m, [d])})


def test_substitute_identity_and_rename():
    x = MPoly.var(0, 1)
    assert mp_substitute_linear(x, [x]) == x
    w = MPoly.var(0, 1)
    assert mp_substitute_linear(x**3, [w]) == w**3
    with pytest.raises(StructuralError):
        mp_substitute_linear(u, [x])


def test_norm_examples():
    theta = NFElem.generator(SQRT5)
    one = NFElem(SQRT5, [1])
    F = MPoly(1, {(1,): one, (0,): theta})
    assert galois_norm_poly(F) == MPoly(1, {(2,): Fraction(1), (0,): Fraction(-5)})
    c = Fraction(-2, 3)
    G = MPoly.const(2, NFElem(CUBIC, [c]))
    assert galois_norm_poly(G) == MPoly.const(2, c**3)


def test_norm_rejects_mixed_fields():
    F = MPoly(1, {(1,): NFElem.generator(SQRT5), (0,): NFElem.generator(CUBIC)})
    with pytest.raises(StructuralError):
        galois_norm_poly(F)


def _product_over_roots(F, roots, p):
    out = None
    for r in roots:
        Fr = mp_specialize_mod_p(F, r, p)
        out = Fr if out is None else out * Fr
    return out


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_norm_reduction_compatibility(data):
    m = data.draw(st.sampled_from([SQRT5, CUBIC]))
    F = data.draw(nf_polys(m))
    assume(not F.is_zero())
    g = galois_norm_poly(F)
    assert all(isinstance(c, Fraction) for c in g.terms.values())
    checked = 0
    for p in primes_up_to(400):
        if p == 2 or m.discriminant() % p == 0:
            continue
        roots = minpoly_roots_mod_p(m, p)
        if len(roots) != m.degree:
            continue
        try:
            lhs = mp_reduce_mod_p(g, p)
            rhs = _product_over_roots(F, roots, p)
        except BadPrimeError:
            continue
        assert lhs == rhs
        checked += 1
        if checked == 4:
            break
    assert checked >= 1


def test_reduce_mod_p_examples():
    q = mp_scale(u * u, Fraction(1, 4))
    assert mp_reduce_mod_p(q, 7) == MPoly(2, {(2, 0): FpElem(2, 7)})
    with pytest.raises(BadPrimeError):
        mp_reduce_mod_p(q, 2)
    r = 10 * u - 3 * v + 14
    assert mp_reduce_mod_p(r, 7) == MPoly(2, {(1, 0): FpElem(3, 7), (0, 1): FpElem(4, 7)})


def test_evaluate_examples():
    q = u * u - v * v
    assert mp_evaluate(q, (3, 2)) == 5
    p = u**3 + 7 * u * v - Fraction(5, 2)
    assert mp_evaluate(p, (0, 0)) == Fraction(-5, 2)
    with pytest.raises(StructuralError):
        mp_evaluate(p, (1,))


def test_evaluate_over_fp_grid_matches_brute_force():
    p = 7
    q = mp_reduce_mod_p(u**3 - 2 * u * v + v**2 + 5, p)
    squares = {x * x % p for x in range(1, p)}
    total = 0
    for a, b in product(range(p), repeat=2):
        val = int(mp_evaluate(q, (FpElem(a, p), FpElem(b, p))))
        total += 1 if val == 0 else (2 if val in squares else 0)
    assert count_double_cover(q).count == total


@settings(max_examples=40, deadline=None)
@given(polys(nvars=3, max_terms=8, max_deg=4))
def test_json_round_trip(p):
    text = poly_to_json(p)
    back = poly_from_json(text)
    assert back == p
    assert poly_to_json(back) == text
    exps = [tuple(t["exp"]) for t in json.loads(text)["terms"]]
    keys = [(sum(e), e) for e in exps]
    assert keys == sorted(keys, reverse=True)


def test_json_coefficients_are_num_over_den():
    text = poly_to_json(MPoly(1, {(1,): Fraction(-3, 4), (0,): Fraction(2)}))
    coeffs = [t["coeff"] for t in json.loads(text)["terms"]]
    assert coeffs == ["-3/4", "2/1"]


def test_json_malformed():
    with pytest.raises(StructuralError):
        poly_from_json('{"nvars": 2, "terms": [{"exp": [1], "coeff": "1/1"}]}')
    with pytest.raises(StructuralError):
        poly_from_json('{"terms": []}')
