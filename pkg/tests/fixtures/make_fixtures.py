"""Regenerate the fixture corpus: ``python tests/fixtures/make_fixtures.py``.

Writes canonical ``.pg`` games, ``.mu`` terms and ``.eqs`` systems next to
this script, plus ``golden_regions.json`` holding each game's winning
regions as found by exhaustive positional-strategy search.  Output is fully
determined by the fixed seed.
"""
from __future__ import annotations

import json
import random
import sys
from pathlib import Path

HERE = Path(__file__).resolve().parent
sys.path.insert(0, str(HERE.parent))

from oracles import brute_force_regions  # noqa: E402

from mugames.games import ADAM, EVA, ParityGame, dump_pg  # noqa: E402
from mugames.generators import random_acyclic_game, random_game, random_term  # noqa: E402
from mugames.terms import MU, NU, Equation, EquationSystem, dump, dump_system, parse  # noqa: E402

SEED = 20240
RANDOM_GAMES = 24
RANDOM_ACYCLIC = 8
RANDOM_TERMS = 20

HAND_GAMES = {
    "eva_odd_loop": ParityGame.build({0: (1, EVA)}, [(0, 0)], 0),
    "adam_even_loop": ParityGame.build({0: (0, ADAM)}, [(0, 0)], 0),
    "nat": ParityGame.build({0: (1, EVA), 1: (0, ADAM)}, [(0, 1), (0, 0)], 0),
    "adam_dead_end": ParityGame.build({0: (0, ADAM)}, [], 0),
    "eva_dead_end": ParityGame.build({0: (0, EVA)}, [], 0),
    "binary_stream": ParityGame.build({0: (0, ADAM)}, [(0, 0), (0, 0)], 0),
}

HAND_TERMS = {
    "mu_identity": "(mu X (var X))",
    "nu_identity": "(nu X (var X))",
    "nat": "(mu X (sum (prod) (var X)))",
    "nu_square": "(nu X (prod (var X) (var X)))",
    "six": "(prod (sum (prod) (prod)) (sum (prod) (prod) (prod)))",
    "unit": "(prod)",
    "empty": "(sum)",
    "option": "(sum (prod) (var Y))",
}

HAND_SYSTEMS = {
    "mutual": EquationSystem((
        Equation("X", MU, 1, parse("(sum (prod) (var Y))")),
        Equation("Y", MU, 1, parse("(var X)")),
    )),
    "mixed": EquationSystem((
        Equation("X", NU, 2, parse("(prod (var Y) (var Y))")),
        Equation("Y", MU, 1, parse("(sum (var X) (prod))")),
    )),
}


def main() -> None:
    rng = random.Random(SEED)
    games = dict(HAND_GAMES)
    for i in range(RANDOM_GAMES):
        games[f"random_{i:02d}"] = random_game(rng, max_vertices=6)
    for i in range(RANDOM_ACYCLIC):
        games[f"acyclic_{i:02d}"] = random_acyclic_game(rng, max_vertices=6)
    terms = {name: parse(text) for name, text in HAND_TERMS.items()}
    for i in range(RANDOM_TERMS):
        terms[f"random_{i:02d}"] = random_term(rng, depth=3)

    for old in HERE.glob("*.pg"):
        old.unlink()
    for old in HERE.glob("*.mu"):
        old.unlink()
    golden = {}
    for name, g in games.items():
        (HERE / f"{name}.pg").write_text(dump_pg(g))
        eva, adam = brute_force_regions(g)
        golden[name] = {"eva_region": sorted(eva), "adam_region": sorted(adam)}
    for name, t in terms.items():
        (HERE / f"{name}.mu").write_text(dump(t))
    for name, s in HAND_SYSTEMS.items():
        (HERE / f"{name}.eqs").write_text(dump_system(s))
    (HERE / "golden_regions.json").write_text(json.dumps(golden, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
