"""Command line entry point: ``kummerweil {build,count,ap,verify,info}``.

Exit codes: 0 success (all rows pass), 1 some verification row failed,
2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import verify
from .cmhecke import DomainError, newform_ap
from .exactnum import StructuralError
from .fpcount import BadPrimeError, check_odd_prime, check_prime, count_double_cover, primes_up_to
from .kummer import KummerModel, WeierstrassCurve, build_kummer, expected_invariants
from .multipoly import mp_reduce_mod_p


class UsageError(Exception):
    pass


def _prime_list(text: str) -> list[int]:
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        try:
            p = int(tok)
            check_prime(p)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{tok!r} is not a prime") from None
        out.append(p)
    if not out:
        raise argparse.ArgumentTypeError("empty prime list")
    return out


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kummerweil", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["table", "json"], default="table")
    common.add_argument("--out", type=Path, help="write output here instead of stdout")
    common.add_argument("--workers", type=_positive, default=1, help="parallel processes (speed only)")

    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", parents=[common], help="curve JSON -> Kummer polynomial JSON")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--curve", type=Path)
    src.add_argument("--scenario", choices=sorted(verify.SCENARIOS))

    p = sub.add_parser("count", parents=[common], help="count points on y^2 = g over F_p")
    p.add_argument("--poly", type=Path, required=True)
    p.add_argument("--primes", type=_prime_list, required=True)

    p = sub.add_parser("ap", parents=[common], help="newform coefficients of a scenario")
    p.add_argument("--scenario", required=True, choices=sorted(verify.SCENARIOS))
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--primes", type=_prime_list)
    grp.add_argument("--pmax", type=_positive)

    p = sub.add_parser("verify", parents=[common], help="check the point-count relations prime by prime")
    p.add_argument("--scenario", required=True, choices=sorted(verify.SCENARIOS))
    p.add_argument("--curve", type=Path, help="replace the scenario's curve (same field degree)")
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--primes", type=_prime_list)
    grp.add_argument("--pmax", type=_positive)

    sub.add_parser("info", parents=[common], help="topological invariants of the resolved threefold")
    return ap


def _load_json(path: Path):
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: malformed JSON ({exc})") from None


def _emit(args, text: str) -> None:
    if args.out:
        args.out.write_text(text + "\n", encoding="utf-8")
    else:
        sys.stdout.write(text + "\n")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def cmd_build(args) -> int:
    if args.curve:
        curve = WeierstrassCurve.from_dict(_load_json(args.curve))
    else:
        curve = verify.get_scenario(args.scenario).curve
    model = build_kummer(curve)
    _emit(args, _dump(model.to_dict()))
    return 0


def cmd_count(args) -> int:
    model = KummerModel.from_dict(_load_json(args.poly))
    results = []
    for p in args.primes:
        check_odd_prime(p)
        if p in model.bad_primes:
            print(f"warning: {p} is listed as a bad prime of this model", file=sys.stderr)
        results.append(count_double_cover(mp_reduce_mod_p(model.g, p), p=p, workers=args.workers))
    if args.format == "json":
        _emit(args, _dump([{"p": r.p, "count": r.count, "character_sum": r.character_sum} for r in results]))
    else:
        lines = ["p\tcount\tcharacter_sum"] + [f"{r.p}\t{r.count}\t{r.character_sum}" for r in results]
        _emit(args, "\n".join(lines))
    return 0


def cmd_ap(args) -> int:
    scenario = verify.get_scenario(args.scenario)
    primes = args.primes or primes_up_to(args.pmax or 97)
    rows = []
    for p in primes:
        try:
            rows.append({"p": p, "ap": newform_ap(scenario.character, p)})
        except DomainError:
            rows.append({"p": p, "ap": None})
    if args.format == "json":
        _emit(args, _dump({"scenario": scenario.name, "weight": scenario.weight, "coefficients": rows}))
    else:
        lines = ["p\ta_p"] + [f"{r['p']}\t{'-' if r['ap'] is None else r['ap']}" for r in rows]
        _emit(args, "\n".join(lines))
    return 0


def cmd_verify(args) -> int:
    scenario = verify.get_scenario(args.scenario)
    if args.curve:
        scenario = scenario.with_curve(WeierstrassCurve.from_dict(_load_json(args.curve)))
    default_pmax = 97 if scenario.kind == "CY3" else 37
    primes = args.primes or primes_up_to(args.pmax or default_pmax)
    rows = verify.run(scenario, primes, workers=args.workers)
    if args.format == "json":
        _emit(args, _dump(verify.report(scenario, rows)))
    else:
        s = verify.summarize(rows)
        text = verify.format_table(scenario, rows)
        _emit(args, text + f"\n# pass {s['pass']}  fail {s['fail']}  skipped {s['skipped']}")
    return 1 if any(r.status == verify.FAIL for r in rows) else 0


def cmd_info(args) -> int:
    inv = expected_invariants(3)
    if args.format == "json":
        _emit(args, _dump(inv))
    else:
        lines = [f"{k}\t{v}" for k, v in inv.items() if k != "hodge"]
        lines += [f"{k}\t{v}" for k, v in inv["hodge"].items()]
        _emit(args, "\n".join(lines))
    return 0


COMMANDS = {"build": cmd_build, "count": cmd_count, "ap": cmd_ap, "verify": cmd_verify, "info": cmd_info}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        return COMMANDS[args.command](args)
    except (UsageError, StructuralError, BadPrimeError, ValueError) as exc:
        print(f"kummerweil {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
