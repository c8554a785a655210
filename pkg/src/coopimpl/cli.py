"""Command-line front end.

Exit status: 0 when the checked property holds, 1 when it fails, 2 on
input or usage errors.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import combinatorics as cb
from .construction import (GammaGame, PASS, auto_theta, theta_bar, verify_implementation)
from .errors import InputError, OracleError
from .normal_form import CompositeGame
from .numerics import format_rational, parse_rational
from .oligopoly import (bertrand_characteristic, cournot_worth, market_from_strings,
                        maximin_worth)
from .serialization import (dumps, game_to_json, load_game, load_worth, rational_list,
                            worth_to_json, write_json)
from .solutions import (CORE_VARIANTS, DELTA, PLAIN, check_convexity, core_feasible,
                        delta_singleton_sum_test, gamma_characteristic, shapley,
                        sqrt_supermodularity_report)
from .solvers import CONCEPTS, NASH, solve
from .worth import (GENERATOR_CLASSES, NONE, CharacteristicFunctionGame, as_pfg,
                    classify_superadditivity, externality_report, generate_random)


class Output:
    """Collects a report as a JSON object and as aligned ``key  value`` lines."""

    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.data: dict = {}
        self.lines: list[tuple[str, str]] = []

    def put(self, key: str, value, text: str | None = None) -> None:
        self.data[key] = value
        self.lines.append((key, text if text is not None else _plain(value)))

    def note(self, key: str, text: str) -> None:
        self.lines.append((key, text))

    def emit(self, stream=None) -> None:
        stream = stream or sys.stdout
        if self.as_json:
            print(dumps(self.data), file=stream)
            return
        width = max((len(k) for k, _ in self.lines), default=0)
        for k, v in self.lines:
            print(f"{k.ljust(width)}  {v}", file=stream)


def _plain(value) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, list):
        return ", ".join(_plain(v) for v in value)
    return str(value)


def _coalition(mask: int) -> str:
    return cb.format_coalition(mask, one_based=True)


def _write_or_print(data, out: str | None) -> None:
    if out:
        write_json(out, data)
    else:
        print(dumps(data))


# --- verbs ------------------------------------------------------------------


def cmd_check(args) -> int:
    game = load_worth(args.file)
    sa = classify_superadditivity(game)
    ext = externality_report(game)
    if ext.positive and ext.negative:
        kind = "mixed"
    elif ext.positive:
        kind = "positive only"
    elif ext.negative:
        kind = "negative only"
    else:
        kind = "none"
    out = Output(args.json)
    out.put("players", game.n)
    out.put("superadditivity", sa.cls)
    out.put("violations", [m.to_json() for m in sa.violations],
            f"{len(sa.violations)}" + (f" (first: {sa.violations[0].to_json()})" if sa.violations else ""))
    out.put("equalities", len(sa.equalities))
    out.put("externalities", kind)
    out.put("positive_witnesses", len(ext.positive))
    out.put("negative_witnesses", [w.to_json() for w in ext.negative], str(len(ext.negative)))
    if ext.positive:
        out.put("example_positive", ext.positive[0].to_json())
    out.emit()
    return 1 if sa.cls == NONE else 0


def cmd_implement(args) -> int:
    worth = load_worth(args.file)
    bar = theta_bar(worth)
    theta = auto_theta(worth) if args.theta == "auto" else parse_rational(args.theta)
    game = GammaGame(worth, theta)
    data = game_to_json(game.to_dense() if args.dense else game)
    if args.out:
        write_json(args.out, data)
    out = Output(args.json)
    out.put("theta_bar", format_rational(bar))
    out.put("theta", format_rational(theta))
    out.put("above_threshold", theta > bar)
    out.put("strategies_per_player", 1 << (worth.n - 1))
    out.put("written", args.out or "")
    if args.out:
        out.emit()
    else:
        print(dumps(data))
    return 0


def cmd_verify(args) -> int:
    game = load_game(args.gamma)
    worth = load_worth(args.game)
    report = verify_implementation(game, worth, args.concept)
    if args.json:
        print(dumps(report.to_json()))
    else:
        out = Output(False)
        out.note("concept", report.concept)
        out.note("verdict", report.verdict)
        if report.bijection is not None:
            out.note("bijection", _plain(report.bijection))
        out.note("equilibria", str(report.equilibrium_count))
        for e in report.entries:
            cells = ", ".join(f"{_coalition(c.coalition)}="
                              f"{'-' if c.payoff is None else format_rational(c.payoff)}"
                              f"{'' if c.match else '!=' + format_rational(c.worth)}" for c in e.checks)
            out.note(str(e.partition), f"{len(e.solution.profiles)} solution(s)  {cells}")
        for w in report.witnesses:
            out.note("witness", str(w))
        out.emit()
    return 0 if report.verdict == PASS else 1


def cmd_equilibria(args) -> int:
    game = load_game(args.file)
    rows = []
    for p in cb.enumerate_partitions(game.n):
        sol = solve(CompositeGame(game, p), args.concept)
        rows.append({"partition": p.to_json(),
                     "profiles": [[str(x) for x in game.labels(prof)] for prof in sol.profiles],
                     "payoffs": [rational_list(u) for u in sol.payoffs],
                     "payoff_unique": sol.payoff_unique})
    if args.json:
        print(dumps({"concept": args.concept, "partitions": rows}))
    else:
        out = Output(False)
        for r in rows:
            key = str(r["partition"]).replace(" ", "")
            if not r["profiles"]:
                out.note(key, "none")
            for prof, pay in zip(r["profiles"], r["payoffs"]):
                out.note(key, f"({', '.join(prof)})  block payoffs ({', '.join(pay)})")
                key = ""
        out.emit()
    return 0


def _market(args):
    return market_from_strings(args.a, args.b, args.costs)


def cmd_cournot(args) -> int:
    _write_or_print(worth_to_json(cournot_worth(_market(args))), args.out)
    return 0


def cmd_bertrand(args) -> int:
    cf = bertrand_characteristic(_market(args))
    _write_or_print(worth_to_json(cf if args.characteristic else cf.lift()), args.out)
    return 0


def cmd_maximin(args) -> int:
    _write_or_print(worth_to_json(maximin_worth(_market(args))), args.out)
    return 0


def _characteristic(game, reduce: str | None) -> CharacteristicFunctionGame:
    if reduce == "gamma":
        return gamma_characteristic(game).game
    if isinstance(game, CharacteristicFunctionGame):
        return game
    if not game.is_characteristic():
        raise InputError("game is partition-dependent; pass --reduce gamma")
    return game.to_characteristic()


def cmd_shapley(args) -> int:
    game = _characteristic(load_worth(args.file), args.reduce)
    phi = shapley(game)
    out = Output(args.json)
    out.put("shapley", rational_list(phi))
    out.put("total", format_rational(sum(phi, Fraction(0))))
    out.emit()
    return 0


def cmd_core(args) -> int:
    game = load_worth(args.file)
    if args.variant == PLAIN:
        game = _characteristic(game, None)
    res = core_feasible(game, args.variant)
    out = Output(args.json)
    out.put("variant", args.variant)
    out.put("core", "nonempty" if res.feasible else "empty")
    if res.feasible:
        out.put("witness", rational_list(res.witness))
    else:
        out.put("farkas_certificate", rational_list(res.certificate))
    if args.variant == DELTA:
        t = delta_singleton_sum_test(game)
        out.put("singleton_sum", format_rational(t.lhs))
        out.put("grand_worth", format_rational(t.rhs))
        out.put("singleton_sum_certifies_empty", t.empty_certified)
    out.emit()
    return 0 if res.feasible else 1


def cmd_convexity(args) -> int:
    market = None
    if args.file:
        game = load_worth(args.file)
    else:
        if args.a is None or args.costs is None:
            raise InputError("give a worth file or --a, --b and --costs")
        market = _market(args)
        game = cournot_worth(market)
        args.reduce = "gamma"
    if args.sqrt_report and market is None:
        raise InputError("--sqrt-report needs market flags (--a --b --costs)")
    cf = gamma_characteristic(game, market) if args.reduce == "gamma" else None
    target = cf.game if cf else _characteristic(game, None)
    rep = check_convexity(target)
    out = Output(args.json)
    out.put("convex", rep.convex)
    if not rep.convex:
        s, t = rep.witness
        out.put("witness", {"S": list(cb.members(s)), "T": list(cb.members(t)),
                            "excess": format_rational(rep.gap)},
                f"{_coalition(s)} and {_coalition(t)} (excess {format_rational(rep.gap)})")
    if args.sqrt_report:
        sq = sqrt_supermodularity_report(cf)
        out.put("sqrt_pairs", [p.to_json() for p in sq.pairs], f"{len(sq.pairs)} checked")
        out.put("sqrt_failures", [p.to_json() for p in sq.failures], str(len(sq.failures)))
        for p in sq.pairs:
            out.note(f"{_coalition(p.s)} {_coalition(p.t)}",
                     f"{format_rational(p.lhs)} vs {format_rational(p.rhs)}  "
                     f"{'holds' if p.holds else 'fails'}")
    out.emit()
    return 0 if rep.convex else 1


def cmd_gen(args) -> int:
    game = generate_random(args.n, args.cls, args.seed)
    _write_or_print(worth_to_json(game), args.out)
    return 0


# --- parser ------------------------------------------------------------------


def _market_flags(p, required: bool = True) -> None:
    p.add_argument("--a", required=required, help="demand intercept")
    p.add_argument("--b", default="1", help="demand slope (default 1)")
    p.add_argument("--costs", required=required, help="comma-separated increasing costs")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coopimpl", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("check", parents=[common], help="superadditivity and externalities")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("implement", parents=[common], help="build the tag-strategy game")
    p.add_argument("file")
    p.add_argument("--theta", default="auto", help="'auto' or a positive rational")
    p.add_argument("--out")
    p.add_argument("--dense", action="store_true", help="write the full payoff table")
    p.set_defaults(func=cmd_implement)

    p = sub.add_parser("verify", parents=[common], help="check a game implements a worth function")
    p.add_argument("gamma")
    p.add_argument("game")
    p.add_argument("--concept", choices=CONCEPTS, default=NASH)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("equilibria", parents=[common], help="solutions of every composite game")
    p.add_argument("file")
    p.add_argument("--concept", choices=CONCEPTS, default=NASH)
    p.set_defaults(func=cmd_equilibria)

    for verb, func, helptext in (("cournot", cmd_cournot, "quantity-competition worth"),
                                 ("bertrand", cmd_bertrand, "price-competition worth"),
                                 ("maximin", cmd_maximin, "maximin worth")):
        p = sub.add_parser(verb, parents=[common], help=helptext)
        _market_flags(p)
        p.add_argument("--out")
        if verb == "bertrand":
            p.add_argument("--characteristic", action="store_true",
                           help="write the characteristic-form view")
        p.set_defaults(func=func)

    p = sub.add_parser("shapley", parents=[common], help="Shapley value")
    p.add_argument("file")
    p.add_argument("--reduce", choices=["gamma"])
    p.set_defaults(func=cmd_shapley)

    p = sub.add_parser("core", parents=[common], help="core feasibility")
    p.add_argument("file")
    p.add_argument("--variant", choices=CORE_VARIANTS, default=PLAIN)
    p.set_defaults(func=cmd_core)

    p = sub.add_parser("convexity", parents=[common], help="convexity check")
    p.add_argument("file", nargs="?")
    _market_flags(p, required=False)
    p.add_argument("--reduce", choices=["gamma"])
    p.add_argument("--sqrt-report", action="store_true",
                   help="per-pair margin comparison for Cournot games")
    p.set_defaults(func=cmd_convexity)

    p = sub.add_parser("gen", parents=[common], help="random superadditive game")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--class", dest="cls", choices=GENERATOR_CLASSES, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OracleError as exc:
        print(f"oracle failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
