"""Command-line front end: ``mugames solve|translate|eval|count|check|selftest|play``.

Reports are JSON on stdout with sorted keys and a ``schema`` field.
Diagnostics go to stderr.  Exit codes: 0 success, 1 failed check, 2 parse
error, 3 validation error, 4 budget or size limit.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .bekic import gaussian_eliminate
from .bridge import game_to_term, simplify, term_to_game
from .finiteness import UnboundVariable
from .games import (
    ADAM,
    EVA,
    GameError,
    GameValidationError,
    ParityGame,
    PGParseError,
    Player,
    dump_pg,
    max_priority,
    parse_pg,
    zielonka_solve,
)
from .generators import random_acyclic_game, random_game, random_term
from .oracle import (
    Finite,
    TooManyPrefixes,
    count_strategies_acyclic,
    is_acyclic,
    prefix_counts,
    stabilized_count,
)
from .semantics import BudgetExhausted, evaluate, simultaneous_fixpoint
from .terms import (
    Mu,
    MuSyntaxError,
    Nu,
    SystemError_,
    dump,
    free_vars,
    parse,
    parse_system,
    size,
    subterms,
)

SCHEMA = 1
OK, CHECK_FAILED, PARSE_ERROR, VALIDATION_ERROR, BUDGET_ERROR = 0, 1, 2, 3, 4


class CliError(Exception):
    def __init__(self, code: int, kind: str, message: str):
        super().__init__(message)
        self.code = code
        self.kind = kind


def emit(report: dict, stream=None) -> None:
    stream = stream or sys.stdout
    stream.write(json.dumps({"schema": SCHEMA, **report}, sort_keys=True, indent=2) + "\n")


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CliError(PARSE_ERROR, "io", f"{path}: {exc.strerror}") from None


def load_game(path: str) -> ParityGame:
    text = _read(path)
    try:
        return parse_pg(text)
    except PGParseError as exc:
        raise CliError(PARSE_ERROR, "parse", f"{path}: {exc}") from None
    except GameValidationError as exc:
        raise CliError(VALIDATION_ERROR, "validation", f"{path}: {exc}") from None


def load_term(path: str):
    text = _read(path)
    try:
        return parse(text)
    except MuSyntaxError as exc:
        raise CliError(PARSE_ERROR, "parse", f"{path}: {exc}") from None


def load_system(path: str):
    text = _read(path)
    try:
        return parse_system(text)
    except MuSyntaxError as exc:
        raise CliError(PARSE_ERROR, "parse", f"{path}: {exc}") from None
    except SystemError_ as exc:
        raise CliError(VALIDATION_ERROR, "validation", f"{path}: {exc}") from None


def _pairs(items: list[str] | None, what: str) -> dict[str, str]:
    out = {}
    for item in items or []:
        name, sep, value = item.partition("=")
        if not sep or not name:
            raise CliError(VALIDATION_ERROR, "usage", f"{what} must look like NAME=VALUE, got {item!r}")
        out[name] = value
    return out


def parse_env(items: list[str] | None) -> dict[str, int]:
    out = {}
    for name, value in _pairs(items, "--env").items():
        if not value.isdigit():
            raise CliError(VALIDATION_ERROR, "usage", f"--env size for {name} must be a natural number")
        out[name] = int(value)
    return out


def _player(name: str) -> Player:
    return EVA if name == "eva" else ADAM


def _strategy_targets(g: ParityGame, strategy) -> dict[str, int]:
    return {str(v): g.arena.tgt[m] for v, m in sorted(strategy.items())}


# ------------------------------------------------------------------ commands

def cmd_solve(args) -> int:
    g = load_game(args.file)
    assumption = _pairs(args.assume, "--assume")
    try:
        w = zielonka_solve(g, assumption)
    except GameError as exc:
        raise CliError(VALIDATION_ERROR, "validation", str(exc)) from None
    emit({
        "command": "solve",
        "initial": g.initial,
        "winner": str(w.winner(g.initial)),
        "eva_region": sorted(w.eva_region),
        "adam_region": sorted(w.adam_region),
        "eva_strategy": _strategy_targets(g, w.eva_strategy),
        "adam_strategy": _strategy_targets(g, w.adam_strategy),
    })
    return OK


def _binder_summary(t) -> dict:
    mus = sum(isinstance(s, Mu) for s in subterms(t))
    nus = sum(isinstance(s, Nu) for s in subterms(t))
    return {"mu_binders": mus, "nu_binders": nus}


def cmd_translate(args) -> int:
    if args.to_term:
        g = load_game(args.to_term)
        t = simplify(game_to_term(g))
        out = Path(args.output) if args.output else Path(args.to_term).with_suffix(".mu")
        out.write_text(dump(t))
        emit({
            "command": "translate",
            "direction": "game-to-term",
            "input": args.to_term,
            "output": str(out),
            "positions": len(g.vertices),
            "max_priority": max_priority(g),
            "term_size": size(t),
            "free_variables": list(free_vars(t)),
            **_binder_summary(t),
        })
    else:
        t = load_term(args.to_game)
        g = term_to_game(t)
        out = Path(args.output) if args.output else Path(args.to_game).with_suffix(".pg")
        out.write_text(dump_pg(g))
        emit({
            "command": "translate",
            "direction": "term-to-game",
            "input": args.to_game,
            "output": str(out),
            "term_size": size(t),
            "positions": len(g.vertices),
            "max_priority": max_priority(g),
            "priorities": {str(v): g.priority[v] for v in g.vertices if g.priority[v]},
            "leaves": {str(v): n for v, n in sorted(g.var_label.items())},
            **_binder_summary(t),
        })
    return OK


def _evaluate(t, env, budget):
    try:
        return evaluate(t, env, budget)
    except UnboundVariable as exc:
        raise CliError(VALIDATION_ERROR, "validation", f"no --env size for {exc.args[0]}") from None
    except BudgetExhausted as exc:
        raise CliError(BUDGET_ERROR, "budget", str(exc)) from None


def cmd_eval(args) -> int:
    env = parse_env(args.env)
    if args.file.endswith(".eqs"):
        sys_ = load_system(args.file)
        solved = gaussian_eliminate(sys_)
        emit({
            "command": "eval",
            "input": args.file,
            "components": {v: _evaluate(t, env, args.budget).to_json(args.cap)
                           for v, t in solved.solutions},
        })
        return OK
    t = load_term(args.file)
    emit({"command": "eval", "input": args.file, **_evaluate(t, env, args.budget).to_json(args.cap)})
    return OK


def _verdict_json(v) -> dict:
    if isinstance(v, Finite):
        return {"verdict": "stabilized", "count": v.count, "stable_from_depth": v.depth}
    return {"verdict": "not-stabilized", "tail": list(v.tail),
            "certified_divergent": v.certified_divergent}


def cmd_count(args) -> int:
    g = load_game(args.file)
    player = _player(args.player)
    try:
        counts = prefix_counts(g, args.depth, player)
        verdict = stabilized_count(g, args.depth, player)
    except GameError as exc:
        raise CliError(VALIDATION_ERROR, "validation", str(exc)) from None
    emit({
        "command": "count",
        "input": args.file,
        "player": args.player.capitalize(),
        "depth": args.depth,
        "counts": counts,
        **_verdict_json(verdict),
    })
    return OK


# --------------------------------------------------------------------- check

def _check_game(g: ParityGame, budget: int, depth: int) -> list[dict]:
    """Coherence checks on a closed game; returns the failures."""
    fails = []
    win = zielonka_solve(g).winner(g.initial) == EVA
    t = game_to_term(g)
    v = evaluate(t, {}, budget)
    nonempty = (not v.is_finite) or v.cardinality > 0
    if win != nonempty:
        fails.append({"check": "winner-iff-nonempty", "winner_eva": win, "nonempty": nonempty})
    s = stabilized_count(g, depth)
    if isinstance(s, Finite):
        if v.cardinality != s.count:
            fails.append({"check": "count-equals-cardinality", "count": s.count,
                          "cardinality": v.cardinality})
    elif v.is_finite:
        fails.append({"check": "divergent-count-is-infinite", "cardinality": v.cardinality})
    if is_acyclic(g):
        n = count_strategies_acyclic(g)
        if v.cardinality != n:
            fails.append({"check": "acyclic-enumeration", "strategies": n, "cardinality": v.cardinality})
    back = evaluate(game_to_term(term_to_game(t)), {}, budget)
    if back.cardinality != v.cardinality:
        fails.append({"check": "round-trip", "before": v.cardinality, "after": back.cardinality})
    return fails


def _check_term(t, env: dict, budget: int, depth: int) -> list[dict]:
    fails = []
    v = evaluate(t, env, budget)
    g = term_to_game(t)
    back = evaluate(game_to_term(g), env, budget)
    if back.cardinality != v.cardinality:
        fails.append({"check": "round-trip", "before": v.cardinality, "after": back.cardinality})
    assumption = {x: "win" if env[x] > 0 else "lose" for x in free_vars(t)}
    win = zielonka_solve(g, assumption).winner(g.initial) == EVA
    nonempty = (not v.is_finite) or v.cardinality > 0
    if win != nonempty:
        fails.append({"check": "winner-iff-nonempty", "winner_eva": win, "nonempty": nonempty})
    if g.is_closed():
        fails += _check_game(g, budget, depth)
    return fails


def _check_system(sys_, env: dict, budget: int) -> list[dict]:
    fails = []
    solved = gaussian_eliminate(sys_)
    values = {x: evaluate(t, env, budget) for x, t in solved.solutions}
    kinds = {e.kind for e in sys_.equations}
    if len(kinds) == 1 and all(v.is_finite for v in values.values()):
        ref = simultaneous_fixpoint({e.var: e.rhs for e in sys_.equations}, kinds.pop(), env, budget)
        for x, v in values.items():
            if len(ref[x]) != v.cardinality:
                fails.append({"check": "nested-equals-simultaneous", "variable": x,
                              "simultaneous": len(ref[x]), "nested": v.cardinality})
    return fails


def check_one(path: str, env: dict, budget: int, depth: int) -> dict:
    try:
        if path.endswith(".pg"):
            g = load_game(path)
            if not g.is_closed():
                raise CliError(VALIDATION_ERROR, "validation", f"{path}: check needs a closed game")
            fails = _check_game(g, budget, depth)
        elif path.endswith(".eqs"):
            sys_ = load_system(path)
            env = {p: env.get(p, 1) for p in sys_.params}
            fails = _check_system(sys_, env, budget)
        else:
            t = load_term(path)
            env = {x: env.get(x, 1) for x in free_vars(t)}
            fails = _check_term(t, env, budget, depth)
    except CliError as exc:
        return {"input": path, "error": exc.kind, "message": str(exc), "code": exc.code}
    except (BudgetExhausted, TooManyPrefixes) as exc:
        return {"input": path, "error": "budget", "message": str(exc), "code": BUDGET_ERROR}
    return {"input": path, "passed": not fails, "failures": fails}


def _check_job(job):
    return check_one(*job)


def cmd_check(args) -> int:
    env = parse_env(args.env)
    jobs = [(f, env, args.budget, args.depth) for f in args.files]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_check_job, jobs))
    else:
        results = [_check_job(j) for j in jobs]
    emit({"command": "check", "results": results,
          "passed": all(r.get("passed") for r in results)})
    errors = [r["code"] for r in results if "code" in r]
    if errors:
        return max(errors)
    return OK if all(r["passed"] for r in results) else CHECK_FAILED


# ------------------------------------------------------------------ selftest

def cmd_selftest(args) -> int:
    rng = random.Random(args.seed)
    failures = []
    for i in range(args.rounds):
        g = random_game(rng, max_vertices=6) if i % 2 else random_acyclic_game(rng, max_vertices=6)
        for f in _check_game(g, args.budget, 12):
            failures.append({"round": i, "kind": "game", "game": dump_pg(g), **f})
        t = random_term(rng, depth=3)
        for f in _check_term(t, {}, args.budget, 12):
            failures.append({"round": i, "kind": "term", "term": dump(t).strip(), **f})
    emit({"command": "selftest", "seed": args.seed, "rounds": args.rounds,
          "passed": not failures, "failures": failures})
    return OK if not failures else CHECK_FAILED


# ---------------------------------------------------------------------- play

def cmd_play(args, stdin=None, stdout=None) -> int:
    """Human plays Adam against Eva's computed strategy (or the reverse if
    Eva loses the initial position)."""
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    g = load_game(args.file)
    if not g.is_closed():
        raise CliError(VALIDATION_ERROR, "validation", "play needs a closed game")
    w = zielonka_solve(g)
    machine = w.winner(g.initial)
    human = machine.opponent
    print(f"You play {human}; the computer plays {machine} and wins from here.", file=stdout)
    v, seen = g.initial, []
    for _ in range(args.moves):
        seen.append(v)
        moves = g.moves(v)
        if not moves:
            print(f"Position {v} is a dead end: {g.owner[v].opponent} wins.", file=stdout)
            return OK
        if g.owner[v] == human:
            options = ", ".join(str(g.arena.tgt[m]) for m in moves)
            print(f"At {v} (priority {g.priority[v]}); your move [{options}]: ", end="", file=stdout)
            line = stdin.readline()
            if not line:
                return OK
            choice = line.strip()
            targets = [g.arena.tgt[m] for m in moves]
            if not choice.isdigit() or int(choice) not in targets:
                print("not a legal move", file=stdout)
                seen.pop()
                continue
            v = int(choice)
        else:
            m = w.strategy(machine).get(v, moves[0])
            v = g.arena.tgt[m]
            print(f"{machine} moves to {v}", file=stdout)
    print(f"Stopped after {args.moves} moves; positions visited: {seen}", file=stdout)
    return OK


# ---------------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mugames", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="winning regions of a .pg game")
    s.add_argument("file")
    s.add_argument("--assume", action="append", metavar="LABEL=win|lose",
                   help="outcome of a labelled leaf, from Eva's point of view")
    s.set_defaults(run=cmd_solve)

    s = sub.add_parser("translate", help="game to term or term to game")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--to-term", metavar="FILE.pg")
    g.add_argument("--to-game", metavar="FILE.mu")
    s.add_argument("-o", "--output", help="where to write the result (default: input with new suffix)")
    s.set_defaults(run=cmd_translate)

    s = sub.add_parser("eval", help="set semantics of a .mu term or .eqs system")
    s.add_argument("file")
    s.add_argument("--env", action="append", metavar="NAME=SIZE")
    s.add_argument("--budget", type=int, default=64)
    s.add_argument("--cap", type=int, default=1000, help="list elements only up to this many")
    s.set_defaults(run=cmd_eval)

    s = sub.add_parser("count", help="winning strategy prefix counts of a closed game")
    s.add_argument("file")
    s.add_argument("--depth", type=int, default=12)
    s.add_argument("--player", choices=("eva", "adam"), default="eva")
    s.set_defaults(run=cmd_count)

    s = sub.add_parser("check", help="cross-check semantics, solver and oracle on inputs")
    s.add_argument("files", nargs="+")
    s.add_argument("--env", action="append", metavar="NAME=SIZE")
    s.add_argument("--budget", type=int, default=64)
    s.add_argument("--depth", type=int, default=12)
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(run=cmd_check)

    s = sub.add_parser("selftest", help="cross-checks on seeded random inputs")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--rounds", type=int, default=50)
    s.add_argument("--budget", type=int, default=64)
    s.set_defaults(run=cmd_selftest)

    s = sub.add_parser("play", help="play against the computed strategy")
    s.add_argument("file")
    s.add_argument("--moves", type=int, default=20)
    s.set_defaults(run=cmd_play)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "budget", 1) < 1 or getattr(args, "depth", 0) < 0:
        print("error: --budget must be positive and --depth non-negative", file=sys.stderr)
        return VALIDATION_ERROR
    try:
        return args.run(args)
    except CliError as exc:
        emit({"error": exc.kind, "message": str(exc)}, sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
