"""Seeded random games, terms, systems and finite functions for testing."""
from __future__ import annotations

import random

from .games import ADAM, EVA, ParityGame
from .semantics import FiniteFunction
from .terms import MU, NU, Coprod, Equation, EquationSystem, Mu, MuTerm, Nu, Prod, Var


def random_game(rng: random.Random, max_vertices: int = 6, max_priority: int = 4,
                max_degree: int = 3, dead_ends: bool = True) -> ParityGame:
    n = rng.randint(1, max_vertices)
    vertices = {v: (rng.randint(0, max_priority), rng.choice((EVA, ADAM))) for v in range(n)}
    low = 0 if dead_ends else 1
    moves = [(v, rng.randrange(n)) for v in range(n) for _ in range(rng.randint(low, max_degree))]
    return ParityGame.build(vertices, moves, 0)


def random_acyclic_game(rng: random.Random, max_vertices: int = 8, max_priority: int = 4,
                        max_degree: int = 3) -> ParityGame:
    """Edges only go from lower to higher ids."""
    n = rng.randint(1, max_vertices)
    vertices = {v: (rng.randint(0, max_priority), rng.choice((EVA, ADAM))) for v in range(n)}
    moves = [(v, rng.randrange(v + 1, n)) for v in range(n - 1)
             for _ in range(rng.randint(0, max_degree))]
    return ParityGame.build(vertices, moves, 0)


def random_term(rng: random.Random, depth: int = 4, params: tuple[str, ...] = (),
                bound: tuple[str, ...] = (), max_width: int = 3) -> MuTerm:
    """Random term over ``params``; binders are named apart along each path."""
    names = params + bound
    if depth <= 0:
        if names and rng.random() < 0.7:
            return Var(rng.choice(names))
        return rng.choice((Prod(), Coprod(), Prod((Coprod((Prod(), Prod())),))))
    r = rng.random()
    if r < 0.2 and names:
        return Var(rng.choice(names))
    if r < 0.45:
        kids = tuple(random_term(rng, depth - 1, params, bound, max_width)
                     for _ in range(rng.randint(0, max_width)))
        return Prod(kids)
    if r < 0.7:
        kids = tuple(random_term(rng, depth - 1, params, bound, max_width)
                     for _ in range(rng.randint(0, max_width)))
        return Coprod(kids)
    x = f"X{len(bound)}"
    body = random_term(rng, depth - 1, params, bound + (x,), max_width)
    return (Mu if rng.random() < 0.5 else Nu)(x, body)


def random_system(rng: random.Random, kind: str, n_eqs: int, params: tuple[str, ...] = (),
                  depth: int = 2) -> EquationSystem:
    """One-kind system: every equation has the same binder and priority."""
    lhs = tuple(f"X{i}" for i in range(n_eqs))
    prio = 1 if kind == MU else 0
    eqs = tuple(Equation(x, kind, prio, random_term(rng, depth, params + lhs))
                for x in lhs)
    return EquationSystem(eqs, params)


def random_mixed_system(rng: random.Random, n_eqs: int, params: tuple[str, ...] = (),
                        max_priority: int = 3, depth: int = 2) -> EquationSystem:
    lhs = tuple(f"X{i}" for i in range(n_eqs))
    eqs = []
    for x in lhs:
        p = rng.randint(0, max_priority)
        eqs.append(Equation(x, NU if p % 2 == 0 else MU, p, random_term(rng, depth, params + lhs)))
    return EquationSystem(tuple(eqs), params)


def random_function(rng: random.Random, domain, codomain) -> FiniteFunction:
    domain, codomain = tuple(domain), tuple(codomain)
    return FiniteFunction(domain, codomain, {x: rng.choice(codomain) for x in domain})
