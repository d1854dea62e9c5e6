"""Acceptance gate: one test per criterion, each with its runtime limit.

The conftest hook prints a PASS/FAIL line per criterion at the end of the run.
"""

import json
import random
import time
from fractions import Fraction

from kummerweil.cli import main
from kummerweil.cmhecke import (
    KElem,
    QuadIdeal,
    QuadOrder,
    class_group,
    deligne_ok,
    hecke_w4,
    ideal_mul,
    kronecker,
    legendre_rat,
    principal_generator,
    principal_ideal,
)
from kummerweil.fpcount import FpElem, count_double_cover, elliptic_trace, minpoly_roots_mod_p, primes_up_to
from kummerweil.kummer import build_kummer, complete_square, descent_images
from kummerweil.multipoly import (
    MPoly,
    galois_norm_poly,
    linear_form,
    mp_reduce_mod_p,
    mp_scale,
    mp_specialize_mod_p,
    mp_substitute_linear,
)
from kummerweil.verify import PASS, get_scenario, run_cy3, run_k3

u = MPoly.var(0, 2)
v = MPoly.var(1, 2)


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def test_criterion_1_surface_polynomial():
    reference = (
        u**6
        + (-15 * v**2 - 30) * u**4
        + (-84 + 240 * v) * u**3
        + (75 * v**4 + 840 * v - 495) * u**2
        + (-1260 * v**2 - 2100 - 1200 * v**3) * u
        + 1400 * v**3
        + 750 * v**4
        + 2475 * v**2
        + 840 * v
        - 2156
        - 125 * v**6
    )
    with Timer() as t:
        g = build_kummer(get_scenario("k3-15").curve).g
    assert g.terms == reference.terms
    assert t.elapsed < 1.0


def test_criterion_2_surface_table():
    primes = [7, 11, 13, 17, 19, 23, 29, 31, 37]
    with Timer() as t:
        rows = run_k3(get_scenario("k3-15"), primes=primes)
    assert [r.ap for r in rows] == [0, 0, 0, -14, -22, 34, 0, 2, 0]
    assert [r.lp for r in rows] == [-2, 0, -2, 0, 2, 0, 0, 2, -2]
    assert all(r.status == PASS for r in rows)
    assert t.elapsed < 5.0


def test_criterion_3_lp_law():
    with Timer() as t:
        rows = run_k3(get_scenario("k3-15"), pmax=200)
    good = [r for r in rows if not r.status.startswith("skipped")]
    assert len(good) == len(primes_up_to(200)) - 3
    for r in good:
        assert r.status == PASS
        assert r.lp == kronecker(5, r.p) + kronecker(-15, r.p)
    assert t.elapsed < 30.0


def test_criterion_4_threefold_relations():
    scenario = get_scenario("cy3-23")
    with Timer() as t1:
        rows = run_cy3(scenario, pmax=97, workers=1)
    with Timer() as t8:
        rows8 = run_cy3(scenario, pmax=97, workers=8)
    good = [r for r in rows if not r.status.startswith("skipped")]
    assert {r.p for r in rows if r.status.startswith("skipped")} == {2, 23}
    assert all(r.status == PASS for r in good)
    # both branches are exercised
    assert any(r.bp is not None for r in good) and any(r.bp is None for r in good)
    assert rows8 == rows
    assert t1.elapsed <= 60.0
    assert t8.elapsed <= 15.0


def test_criterion_5_class_groups():
    assert class_group(QuadOrder(-23)) == sorted([(1, 1, 6), (2, 1, 3), (2, -1, 3)])
    assert len(class_group(QuadOrder(-15))) == 2
    # oracle: scan all triples with |b| <= a <= c directly
    for d, h in ((-23, 3), (-15, 2)):
        forms = set()
        for a in range(1, 30):
            for b in range(-a, a + 1):
                for c in range(a, 60):
                    if b * b - 4 * a * c != d:
                        continue
                    if (abs(b) == a or a == c) and b < 0:
                        continue
                    forms.add((a, b, c))
        assert len(forms) == h
        assert forms == set(class_group(QuadOrder(d)))


def _norm_reduction_compatibility(name, count):
    curve = get_scenario(name).curve
    model = build_kummer(curve)
    F = mp_substitute_linear(complete_square(curve), descent_images(curve.minpoly))
    g = galois_norm_poly(F)
    checked = 0
    p = 2
    while checked < count:
        p += 1
        if not all(p % q for q in range(2, int(p**0.5) + 1)) or model.is_bad(p):
            continue
        roots = minpoly_roots_mod_p(curve.minpoly, p)
        if len(roots) < model.n:
            continue
        direct = None
        for r in roots:
            image = linear_form([FpElem(pow(r, j, p), p) for j in range(model.n)])
            fr = mp_substitute_linear(mp_specialize_mod_p(complete_square(curve), r, p), [image])
            direct = fr if direct is None else direct * fr
        assert mp_reduce_mod_p(g, p) == direct
        checked += 1
    return checked


def _hasse_on_completely_split(name, count):
    curve = get_scenario(name).curve
    model = build_kummer(curve)
    f = complete_square(curve)
    seen = 0
    for p in primes_up_to(2000):
        if model.is_bad(p):
            continue
        roots = minpoly_roots_mod_p(curve.minpoly, p)
        if len(roots) < model.n:
            continue
        for r in roots:
            b = elliptic_trace(mp_specialize_mod_p(f, r, p))
            assert b * b <= 4 * p
        seen += 1
        if seen == count:
            return seen
    return seen


def _random_ideal(rng, d, amax):
    while True:
        a = rng.randint(1, amax)
        bs = [b for b in range(2 * a) if (b * b - d) % (4 * a) == 0]
        if bs and a % 23:
            return QuadIdeal(a, rng.choice(bs), d)


def test_criterion_6_property_suites():
    with Timer() as t:
        # norm-reduction compatibility at 20 completely split primes
        assert _norm_reduction_compatibility("cy3-23", 20) == 20
        assert _norm_reduction_compatibility("k3-15", 20) == 20

        # Hasse bound on every b_p (all roots at 20 completely split primes)
        assert _hasse_on_completely_split("cy3-23", 20) == 20
        for r in run_cy3(get_scenario("cy3-23")):
            if r.bp is not None:
                assert r.bp * r.bp <= 4 * r.p

        # Deligne bound on every computed a_p
        for rows, k in ((run_cy3(get_scenario("cy3-23")), 4), (run_k3(get_scenario("k3-15"), pmax=200), 3)):
            for r in rows:
                if r.ap is not None:
                    assert deligne_ok(r.ap, r.p, k)

        # unit invariance and well-definedness of the weight 4 character
        order = QuadOrder(-23)
        rng = random.Random(4)
        done = 0
        while done < 50:
            I = _random_ideal(rng, -23, 100)
            x, y = rng.randint(-20, 20), rng.randint(-20, 20)
            if (x - y) % 2 or (x * x + 23 * y * y) % 23 == 0:
                continue
            beta = KElem.half(x, y, -23)
            alpha = principal_generator(I**3)
            phi = hecke_w4(order, I)
            assert legendre_rat(alpha.x, 23) * alpha == legendre_rat(-alpha.x, 23) * (-alpha) == phi
            cube = beta**3
            phi_beta = legendre_rat(cube.x, 23) * cube
            assert hecke_w4(order, principal_ideal(beta)) == phi_beta
            assert hecke_w4(order, ideal_mul(I, principal_ideal(beta))) == phi * phi_beta
            done += 1

        # square-scaling count invariance on 10 random (g, c, p) triples
        models = [build_kummer(get_scenario(n).curve) for n in ("k3-15", "cy3-23")]
        rng = random.Random(6)
        for _ in range(10):
            model = rng.choice(models)
            p = rng.choice([q for q in primes_up_to(50) if not model.is_bad(q)])
            while True:
                c = Fraction(rng.randint(-40, 40), rng.randint(1, 40))
                if c.numerator % p and c.denominator % p:
                    break
            a = count_double_cover(mp_reduce_mod_p(model.g, p))
            b = count_double_cover(mp_reduce_mod_p(mp_scale(model.g, c * c), p))
            assert a == b

        # parallel vs sequential counts
        for model, p in ((models[0], 199), (models[1], 53), (models[1], 97)):
            gp = mp_reduce_mod_p(model.g, p)
            assert count_double_cover(gp, workers=4) == count_double_cover(gp, workers=1)
    assert t.elapsed < 60.0


def test_criterion_7_info_metadata(capsys):
    assert main(["info", "--format", "json"]) == 0
    inv = json.loads(capsys.readouterr().out)
    assert inv["euler"] == 96
    assert inv["b3"] == 8
    assert inv["b2"] == inv["b4"] == 51
    assert (inv["hodge"]["h11"], inv["hodge"]["h21"]) == (51, 3)
