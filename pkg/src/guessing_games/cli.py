"""Command-line entry point.

    guessing-games solve --rule pir --players 3 --out pir3.json
    guessing-games verify pir3.json
    guessing-games approx --rule pir --players 3 --trajectory traj.csv
    guessing-games payoff --rule cw --guesses 0.2,0.5,0.9 [--r 0.4]
    guessing-games transform pir2.json --target table.csv

Exit codes: 0 success / PASS, 1 verification FAIL, 2 bad usage or input.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path


from . import analytic, discrete, documents, series
from .errors import GuessingGameError
from .game import GameRule, GameSpec, expected_payoffs, realized_payoffs
from .strategies import DiscreteStrategy, SeriesStrategy
from .verify import certify, certify_monte_carlo

ANALYTIC_GAMES = {("pir", 2), ("pir", 3), ("cw", 2), ("cw", 3), ("cw", 4)}

CONFIG_KEYS = {
    "order": int,
    "tol": float,
    "resolution": int,
    "grid": int,
    "samples": int,
    "seed": int,
    "N": int,
    "epsilon": float,
    "iterations": int,
    "log_every": int,
}


class UsageError(GuessingGameError):
    pass


def read_config(path) -> dict:
    """``key = value`` lines; ``#`` starts a comment."""
    values = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip().replace("-", "_"), value.strip().strip("\"'")
        if not sep or key not in CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: unrecognised config line {line!r}")
        try:
            values[key] = CONFIG_KEYS[key](value)
        except ValueError:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {value!r}") from None
    return values


def _emit(text: str, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_document(doc: dict, args):
    if args.format == "csv":
        _emit(documents.samples_csv(doc["samples"]), args.out)
    else:
        _emit(documents.dumps(doc), args.out)


def _load_document(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    return documents.read_document(documents.loads(text))


def cmd_solve(args) -> int:
    rule = GameRule.parse(args.rule)
    key = (rule.value, args.players)
    if key not in ANALYTIC_GAMES:
        raise UsageError(
            f"no analytic solution for rule={rule.value} with {args.players} players; "
            f"use `approx --rule {rule.value} --players {args.players}` for the discrete approximation"
        )
    game = GameSpec(args.players, rule)
    extra = {}
    if key == ("pir", 2):
        F = analytic.two_player_pir_cdf().strategy
    elif key == ("cw", 2):
        F = analytic.two_player_cw_strategy().strategy
    elif key == ("cw", 3):
        F = analytic.three_player_cw_strategy().strategy
    elif key == ("pir", 3):
        sol = series.solve_pir3(order=args.order or series.PIR3_DEFAULT_ORDER, tol=args.tol or 1e-9)
        F = series.pir3_strategy(sol)
        extra["solution"] = {"truncation_order": sol.truncation_order, "support_upper": sol.support_upper}
    else:
        fhat, const, F = series.solve_cw4(order=args.order or series.CW4_DEFAULT_TERMS, tol=args.tol or 1e-12)
        extra["solution"] = {
            "truncation_order": fhat.truncation_order,
            "folded_coefficients": fhat.coefficients.tolist(),
            "a": const.a,
            "t_star": const.t_star,
            "u": const.u,
        }
    doc = documents.strategy_document(F, game, args.resolution, **extra)
    _emit_document(doc, args)
    return 0


def cmd_verify(args) -> int:
    F, game, target = _load_document(args.strategy)
    base = getattr(F, "base", F)
    F = analytic.pull_back(F, target)
    tol = args.tol
    if tol is None:
        tol = 1e-3 if isinstance(base, (SeriesStrategy, DiscreteStrategy)) else 1e-6
    if args.method == "montecarlo":
        report = certify_monte_carlo(
            F, game, tol, grid_size=args.grid or 32, samples=args.samples or 200_000, seed=args.seed or 0
        )
    else:
        report = certify(F, game, tol, grid_size=args.grid or 512)
    text = json.dumps(report.to_dict(), indent=2) + "\n"
    _emit(text, args.out)
    status = "PASS" if report.passed else "FAIL"
    print(
        f"{status}: max |v| on support {report.max_abs_on_support:.3e}, "
        f"max v off support {report.max_positive_off_support:.3e}, tol {tol:g}",
        file=sys.stderr,
    )
    return 0 if report.passed else 1


def cmd_approx(args) -> int:
    cfg = discrete.ApproxConfig(
        N=args.N,
        epsilon=args.epsilon,
        iterations=args.iterations,
        players=args.players,
        rule=GameRule.parse(args.rule),
        log_every=args.log_every,
    )
    result = discrete.run(cfg, record_trajectory=bool(args.trajectory))
    game = GameSpec(cfg.players, cfg.rule)
    doc = documents.strategy_document(
        result.profile.as_strategy(),
        game,
        args.resolution,
        run={
            "N": cfg.N,
            "epsilon": cfg.epsilon,
            "iterations": result.profile.iteration,
            "max_value_history": [[it, v] for it, v in result.history],
        },
    )
    _emit_document(doc, args)
    if args.trajectory:
        Path(args.trajectory).write_text(documents.trajectory_csv(result.trajectory))
    return 0


def cmd_payoff(args) -> int:
    try:
        guesses = [float(g) for g in args.guesses.split(",") if g.strip()]
    except ValueError:
        raise UsageError(f"cannot parse guesses {args.guesses!r}") from None
    game = GameSpec(len(guesses), GameRule.parse(args.rule))
    if args.r is None:
        values = expected_payoffs(game, guesses)
    else:
        values = realized_payoffs(game, guesses, args.r)
    lines = ["player\tguess\tpayoff"]
    lines += [f"{k + 1}\t{g!r}\t{float(v)!r}" for k, (g, v) in enumerate(zip(guesses, values))]
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_transform(args) -> int:
    F, game, prior = _load_document(args.strategy)
    if prior.knots is not None:
        raise UsageError("strategy is already composed with a target; transform the base document")
    try:
        table = Path(args.target).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {args.target}: {exc}") from exc
    target = documents.read_target_table(table)
    composed = analytic.compose_with_target(F, target)
    doc = documents.strategy_document(composed, game, args.resolution)
    _emit_document(doc, args)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="guessing-games", description=__doc__.split("\n")[0])
    parser.add_argument("--config", help="key=value file with default option values")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def shared(p, fmt=True):
        p.add_argument("--out", help="output path (default: stdout)")
        if fmt:
            p.add_argument("--format", choices=("json", "csv"), default="json")
            p.add_argument("--resolution", type=int, default=documents.DEFAULT_RESOLUTION)

    p = sub.add_parser("solve", help="closed-form or series solution")
    p.add_argument("--rule", required=True)
    p.add_argument("--players", type=int, required=True)
    p.add_argument("--order", type=int)
    p.add_argument("--tol", type=float)
    shared(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="certify a strategy document")
    p.add_argument("strategy")
    p.add_argument("--tol", type=float)
    p.add_argument("--grid", type=int)
    p.add_argument("--method", choices=("quadrature", "montecarlo"), default="quadrature")
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    shared(p, fmt=False)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("approx", help="discrete fictitious-play style approximation")
    p.add_argument("--rule", required=True)
    p.add_argument("--players", type=int, required=True)
    p.add_argument("--N", type=int, default=50)
    p.add_argument("--epsilon", type=float, default=0.001)
    p.add_argument("--iterations", type=int, default=5000)
    p.add_argument("--log-every", dest="log_every", type=int, default=100)
    p.add_argument("--trajectory", help="CSV path for per-iteration diagnostics")
    shared(p)
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("payoff", help="realized or expected payoffs of a guess profile")
    p.add_argument("--rule", required=True)
    p.add_argument("--guesses", required=True, help="comma-separated guesses in [0, 1]")
    p.add_argument("--r", type=float, help="target value (omit for the expectation)")
    shared(p, fmt=False)
    p.set_defaults(func=cmd_payoff)

    p = sub.add_parser("transform", help="compose a strategy with a target CDF table")
    p.add_argument("strategy")
    p.add_argument("--target", required=True, help="CSV of x,G(x) rows")
    shared(p)
    p.set_defaults(func=cmd_transform)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    pre, _ = parser.parse_known_args(argv)
    try:
        if pre.config:
            config = read_config(pre.config)
            for action in parser._subparsers._group_actions[0].choices.values():
                known = {a.dest for a in action._actions}
                action.set_defaults(**{k: v for k, v in config.items() if k in known})
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
        return args.func(args)
    except (GuessingGameError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
