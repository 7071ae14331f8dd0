"""Command-line front end.

Every subcommand prints one report (JSON by default) and exits with 0 on
success, 2 when an input file cannot be parsed and 3 when parsed data fails
validation.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import equilibrium, oracle, strategy
from .errors import ValidationError
from .game import Game, game_stats, is_generic
from .response import best_response_set, payoff_form
from .strategy import MixedStrategy

SCHEMA_VERSION = "1"
ZERO_SUM_CHECK_TOL = 1e-8


class ParseError(Exception):
    pass


def _load_json(path: str, what: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"{what}: cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{what}: malformed JSON in {path} at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def load_game(path: str) -> Game:
    data = _load_json(path, "game")
    try:
        return Game.from_dict(data)
    except ValidationError as exc:
        raise ValidationError(f"game {path}: {exc}", field=exc.field) from None


def load_strategy(path: str, what: str) -> MixedStrategy:
    data = _load_json(path, what)
    try:
        return MixedStrategy.from_dict(data)
    except ValidationError as exc:
        raise ValidationError(f"{what} {path}: {exc}", field=exc.field) from None


def _need(args, name):
    value = getattr(args, name)
    if value is None:
        flag = "--" + name.replace("_", "-")
        raise ValidationError(f"{args.command} requires {flag}", field=flag)
    return value


def _genericity_warning(g: Game, report: dict) -> None:
    gen = is_generic(g)
    if not gen:
        report["warning"] = f"game is not generic ({gen.witness}); classification theorems assume genericity"


# --- subcommands ----------------------------------------------------------

def cmd_payoff(args):
    g = load_game(_need(args, "game"))
    nu = load_strategy(_need(args, "p1"), "p1")
    mu = load_strategy(_need(args, "p2"), "p2")
    return {"payoffs": list(strategy.mixed_payoff(g, nu, mu))}


def cmd_reduce(args):
    mu = load_strategy(_need(args, "p1"), "p1")
    red = strategy.reduce(mu)
    return {
        "strategy": red.to_dict(),
        "moment_distance": strategy.moment_distance(mu, red),
        "second_moment": strategy.second_moment(red).tolist(),
    }


def cmd_equivalent(args):
    a = load_strategy(_need(args, "p1"), "p1")
    b = load_strategy(_need(args, "p2"), "p2")
    dist = strategy.moment_distance(a, b)
    return {"equivalent": dist <= args.tol_equiv, "moment_distance": dist, "tolerance": args.tol_equiv}


def cmd_best_response(args):
    g = load_game(_need(args, "game"))
    player = _need(args, "player")
    key = "p2" if player in ("one", "1") else "p1"
    opp = load_strategy(_need(args, key), key)
    br = best_response_set(g, player, opp)
    form = payoff_form(g, player, opp)
    return {
        "player": player,
        "value": br.value,
        "basis": [q.to_list() for q in br.basis],
        "dimension": br.dimension,
        "trace_bound": br.trace / 4.0,
        "form": form.M.tolist(),
    }


def cmd_verify(args):
    g = load_game(_need(args, "game"))
    nu = load_strategy(_need(args, "p1"), "p1")
    mu = load_strategy(_need(args, "p2"), "p2")
    return equilibrium.verify_equilibrium(g, nu, mu, args.tol_eq).to_dict()


def cmd_classify(args):
    g = load_game(_need(args, "game"))
    nu = load_strategy(_need(args, "p1"), "p1")
    mu = load_strategy(_need(args, "p2"), "p2")
    report = equilibrium.classify(g, nu, mu, eq_tol=args.tol_eq).to_dict()
    _genericity_warning(g, report)
    return report


def cmd_find(args):
    g = load_game(_need(args, "game"))
    found = equilibrium.find_equilibria(g, seed=args.seed, eq_tol=args.tol_eq)
    report = {
        "seed": args.seed,
        "count": len(found),
        "equilibria": [
            {"p1": nu.to_dict(), "p2": mu.to_dict(), "classification": cls.to_dict()}
            for nu, mu, cls in found
        ],
    }
    _genericity_warning(g, report)
    return report


def cmd_genericity(args):
    g = load_game(_need(args, "game"))
    gen = is_generic(g)
    return {"generic": gen.generic, "witness": gen.witness}


def cmd_oracle(args):
    n = args.samples
    dev = oracle.sample_product_rule(n, args.seed)
    uni = oracle.sample_opt_out(n, args.seed)
    rng = np.random.default_rng(args.seed)
    ratio = oracle.amplitude_ratio(oracle.random_unit(rng), oracle.random_unit(rng))
    return {
        "samples": n,
        "seed": args.seed,
        "product_rule_max_deviation": dev,
        "product_rule_ok": dev <= 1e-10,
        "amplitude_ratio": ratio,
        "opt_out_max_deviation": uni,
        "opt_out_uniform": uni <= 1e-12,
        "player_two_action": oracle.PLAYER_TWO_ACTION,
    }


def cmd_zero_sum_check(args):
    g = load_game(_need(args, "game"))
    nu = load_strategy(_need(args, "p1"), "p1")
    mu = load_strategy(_need(args, "p2"), "p2")
    stats = game_stats(g)
    rep = equilibrium.verify_equilibrium(g, nu, mu, args.tol_eq)
    out = {
        "is_zero_sum": stats.is_zero_sum,
        "is_equilibrium": rep.is_equilibrium,
        "payoffs": list(rep.payoffs),
        "expected": [stats.mean_X, stats.mean_Y],
        "applicable": stats.is_zero_sum and rep.is_equilibrium,
    }
    if out["applicable"]:
        gap = max(abs(rep.payoffs[0] - stats.mean_X), abs(rep.payoffs[1] - stats.mean_Y))
        out["max_gap"] = gap
        out["confirmed"] = gap <= ZERO_SUM_CHECK_TOL
    else:
        out["confirmed"] = None
    return out


COMMANDS = {
    "payoff": cmd_payoff,
    "reduce": cmd_reduce,
    "equivalent": cmd_equivalent,
    "best-response": cmd_best_response,
    "verify": cmd_verify,
    "classify": cmd_classify,
    "find": cmd_find,
    "genericity": cmd_genericity,
    "oracle": cmd_oracle,
    "zero-sum-check": cmd_zero_sum_check,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ewlquat", description="Equilibria of quaternionic quantum games")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--game")
        p.add_argument("--p1")
        p.add_argument("--p2")
        p.add_argument("--player", choices=["one", "two", "1", "2"])
        p.add_argument("--samples", type=int, default=1000)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol-eq", type=float, default=equilibrium.EQ_TOL)
        p.add_argument("--tol-equiv", type=float, default=strategy.EQUIV_TOL)
        p.add_argument("--format", choices=["json", "text"], default="json")
    return parser


# --- output ---------------------------------------------------------------

def _fmt_num(x) -> str:
    return f"{x:.9g}"


def _is_matrix(v) -> bool:
    return (isinstance(v, list) and v and all(isinstance(r, list) for r in v)
            and all(isinstance(x, (int, float)) and not isinstance(x, bool) for r in v for x in r))


def render_text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _is_flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif _is_matrix(obj):
        for row in obj:
            lines.append(pad + "  ".join(_fmt_num(x) for x in row))
    elif isinstance(obj, list):
        for n, v in enumerate(obj):
            if isinstance(v, (dict, list)) and not _is_flat(v):
                lines.append(f"{pad}[{n}]")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}[{n}] {_scalar(v)}")
    else:
        lines.append(pad + _scalar(obj))
    return "\n".join(lines)


def _is_flat(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _scalar(v) -> str:
    if isinstance(v, bool) or v is None:
        return json.dumps(v)
    if isinstance(v, float):
        return _fmt_num(v)
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    return str(v)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def dispatch(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        report = COMMANDS[args.command](args)
    except ParseError as exc:
        print(json.dumps({"schema_version": SCHEMA_VERSION, "error": "parse", "message": str(exc)}), file=err)
        return 2
    except ValidationError as exc:
        print(json.dumps({"schema_version": SCHEMA_VERSION, "error": "validation",
                          "field": exc.field, "message": str(exc)}), file=err)
        return 3
    report = _jsonable({"schema_version": SCHEMA_VERSION, "command": args.command, **report})
    if args.format == "json":
        out.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
    else:
        out.write(render_text(report) + "\n")
    return 0


def main(argv=None) -> None:
    sys.exit(dispatch(argv))


if __name__ == "__main__":
    main()
