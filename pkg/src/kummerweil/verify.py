"""Prime-by-prime checks of the point-count relations for the embedded scenarios.

k3-15
    Kummer surface of E x E^sigma, E with CM by Q(sqrt(-15)) defined over
    Q(sqrt(5)). Relation: #S(F_p) = a_p + p*l_p + p^2 with a_p from the
    twisted weight 3 character and l_p = (5|p) + (-15|p).
cy3-23
    Generalised Kummer threefold of the Weil restriction of E over
    Q(alpha), alpha^3 = alpha + 1, E with CM by Q(sqrt(-23)). Relation:
    a_p = p^3 - #X(F_p), minus 3*p*b_p when x^3 - x - 1 splits completely.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from functools import lru_cache, partial
from typing import Callable, Iterable

from .cmhecke import (
    HeckeCharacter,
    InconsistencyError,
    cube_character,
    deligne_ok,
    frobenius_degree,
    kronecker,
    newform_ap,
    resolve_ap_sign,
    sqrt15_character,
)
from .exactnum import MinPoly, NFElem
from .fpcount import count_double_cover, elliptic_trace, minpoly_roots_mod_p, primes_up_to
from .kummer import KummerModel, WeierstrassCurve, build_kummer, complete_square
from .multipoly import mp_reduce_mod_p, mp_specialize_mod_p

PASS = "pass"
FAIL = "fail"
SKIP_BAD = "skipped-bad-prime"
SKIP_RAMIFIED = "skipped-ramified"


def _lp_law_15(p: int) -> int:
    return kronecker(5, p) + kronecker(-15, p)


@dataclass(frozen=True)
class Scenario:
    name: str
    curve: WeierstrassCurve
    character: HeckeCharacter
    kind: str  # "K3" or "CY3"
    lp_law: Callable[[int], int] | None = None

    @property
    def cm_disc(self) -> int:
        return self.character.order.disc

    @property
    def weight(self) -> int:
        return self.character.weight

    def with_curve(self, curve: WeierstrassCurve) -> Scenario:
        if curve.minpoly.degree != self.curve.minpoly.degree:
            raise ValueError("replacement curve lives over a field of a different degree")
        return replace(self, curve=curve)


def _k3_15() -> Scenario:
    m = MinPoly([-5, 0, 1])
    e = partial(NFElem, m)
    curve = WeierstrassCurve(m, e([0]), e([0]), e([0]), e([-15, -12]), e([-42, -28]), label="k3-15")
    return Scenario("k3-15", curve, sqrt15_character(twisted=True), "K3", _lp_law_15)


def _cy3_23() -> Scenario:
    m = MinPoly([-1, -1, 0, 1])
    e = partial(NFElem, m)
    curve = WeierstrassCurve(
        m,
        a1=e([1, 1]),
        a2=e([2]),
        a3=e([2, 1]),
        a4=e([-16, -27, -12]),
        a6=e([-62, -99, -73]),
        label="cy3-23",
    )
    return Scenario("cy3-23", curve, cube_character(-23), "CY3")


SCENARIOS: dict[str, Callable[[], Scenario]] = {"k3-15": _k3_15, "cy3-23": _cy3_23}


def get_scenario(name: str) -> Scenario:
    if name not in SCENARIOS:
        raise ValueError(f"unknown scenario {name!r}; choose from {sorted(SCENARIOS)}")
    return SCENARIOS[name]()


@lru_cache(maxsize=16)
def _model(curve: WeierstrassCurve) -> KummerModel:
    return build_kummer(curve)


@dataclass(frozen=True)
class VerifyRow:
    p: int
    status: str
    f: int | None = None
    roots: int | None = None
    count: int | None = None
    ap: int | None = None
    bp: int | None = None
    lp: int | None = None
    note: str = ""

    def to_dict(self, kind: str) -> dict:
        out = {"p": self.p, "f": self.f, "roots": self.roots, "count": self.count, "ap": self.ap}
        if kind == "CY3":
            out["bp"] = self.bp
        else:
            out["lp"] = self.lp
        out["status"] = self.status
        return out


def _skip_status(scenario: Scenario, model: KummerModel, p: int) -> str | None:
    if kronecker(scenario.cm_disc, p) == 0 or p in scenario.character.bad:
        return SKIP_RAMIFIED
    if p in model.bad_primes:
        return SKIP_BAD
    return None


def _cy3_row(scenario: Scenario, model: KummerModel, p: int) -> VerifyRow:
    skip = _skip_status(scenario, model, p)
    if skip:
        return VerifyRow(p, skip)
    ap = newform_ap(scenario.character, p)
    count = count_double_cover(mp_reduce_mod_p(model.g, p)).count
    roots = minpoly_roots_mod_p(scenario.curve.minpoly, p)
    f = frobenius_degree(scenario.character.order, p)
    bp = None
    expected = p**3 - count
    if len(roots) == model.n:
        bp = elliptic_trace(mp_specialize_mod_p(complete_square(scenario.curve), roots[0], p))
        expected -= 3 * p * bp
    ok = ap == expected and deligne_ok(ap, p, scenario.weight)
    note = "" if ok else f"relation gives {expected}"
    return VerifyRow(p, PASS if ok else FAIL, f, len(roots), count, ap, bp, None, note)


def _k3_row(scenario: Scenario, model: KummerModel, p: int) -> VerifyRow:
    skip = _skip_status(scenario, model, p)
    if skip:
        return VerifyRow(p, skip)
    ap = newform_ap(scenario.character, p)
    count = count_double_cover(mp_reduce_mod_p(model.g, p)).count
    roots = len(minpoly_roots_mod_p(scenario.curve.minpoly, p))
    f = frobenius_degree(scenario.character.order, p)
    try:
        resolved, lp = resolve_ap_sign(abs(ap), count, p)
    except InconsistencyError as exc:
        return VerifyRow(p, FAIL, f, roots, count, ap, note=str(exc))
    ok = resolved == ap and deligne_ok(ap, p, scenario.weight)
    if scenario.lp_law is not None:
        ok = ok and lp == scenario.lp_law(p)
    note = "" if ok else f"count resolves a_p = {resolved}, l_p = {lp}"
    return VerifyRow(p, PASS if ok else FAIL, f, roots, count, ap, None, lp, note)


def _row(scenario: Scenario, model: KummerModel, p: int) -> VerifyRow:
    return (_cy3_row if scenario.kind == "CY3" else _k3_row)(scenario, model, p)


def run(scenario: Scenario, primes: Iterable[int], workers: int = 1) -> list[VerifyRow]:
    """Rows in ascending prime order; ``workers`` only changes the speed."""
    primes = sorted(set(primes))
    model = _model(scenario.curve)
    if workers > 1 and len(primes) > 1:
        # largest primes first so the slow rows start early
        order = sorted(primes, reverse=True)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = dict(zip(order, pool.map(partial(_row, scenario, model), order)))
        return [rows[p] for p in primes]
    return [_row(scenario, model, p) for p in primes]


def run_cy3(scenario: Scenario, pmax: int = 97, primes: Iterable[int] | None = None, workers: int = 1):
    if scenario.kind != "CY3":
        raise ValueError(f"{scenario.name} is not a threefold scenario")
    return run(scenario, primes if primes is not None else primes_up_to(pmax), workers)


def run_k3(scenario: Scenario, pmax: int = 37, primes: Iterable[int] | None = None, workers: int = 1):
    if scenario.kind != "K3":
        raise ValueError(f"{scenario.name} is not a surface scenario")
    return run(scenario, primes if primes is not None else primes_up_to(pmax), workers)


def summarize(rows: list[VerifyRow]) -> dict:
    return {
        "pass": sum(r.status == PASS for r in rows),
        "fail": sum(r.status == FAIL for r in rows),
        "skipped": sum(r.status.startswith("skipped") for r in rows),
    }


def report(scenario: Scenario, rows: list[VerifyRow]) -> dict:
    return {
        "scenario": scenario.name,
        "rows": [r.to_dict(scenario.kind) for r in rows],
        "summary": summarize(rows),
    }


def _cell(v) -> str:
    return "-" if v is None else str(v)


def format_table(scenario: Scenario, rows: list[VerifyRow]) -> str:
    last = "b_p" if scenario.kind == "CY3" else "l_p"
    lines = ["\t".join(["p", "f", "count", "a_p", last, "status"])]
    for r in rows:
        extra = r.bp if scenario.kind == "CY3" else r.lp
        lines.append("\t".join(_cell(v) for v in (r.p, r.f, r.count, r.ap, extra, r.status)))
    return "\n".join(lines)
