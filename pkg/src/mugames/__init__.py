"""mu-terms and parity games: translations, set semantics, and a
strategy-counting oracle that checks one against the other."""
from .bekic import bekic_nest, gaussian_eliminate, pairing_backward, pairing_forward
from .bridge import game_to_system, game_to_term, simplify, term_to_game
from .finiteness import finiteness_analysis
from .games import ADAM, EVA, ParityGame, Player, dump_pg, parse_pg, validate, zielonka_solve
from .oracle import count_prefixes, enumerate_prefixes, stabilized_count
from .semantics import (
    FiniteFunction,
    SetValue,
    eval_on_morphism,
    evaluate,
    fold,
    unfold,
)
from .terms import Coprod, EquationSystem, Mu, Nu, Prod, Var, dump, parse, parse_system

__all__ = [
    "ADAM", "EVA", "Coprod", "EquationSystem", "FiniteFunction", "Mu", "Nu",
    "ParityGame", "Player", "Prod", "SetValue", "Var", "bekic_nest",
    "count_prefixes", "dump", "dump_pg", "enumerate_prefixes", "eval_on_morphism",
    "evaluate", "finiteness_analysis", "fold", "game_to_system", "game_to_term",
    "gaussian_eliminate", "pairing_backward", "pairing_forward", "parse",
    "parse_pg", "parse_system", "simplify", "stabilized_count", "term_to_game",
    "unfold", "validate", "zielonka_solve",
]
