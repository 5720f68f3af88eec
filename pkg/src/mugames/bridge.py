"""Translations between parity games and mu-terms.

A game becomes one equation per position: Eva positions are coproducts of
their successors, Adam positions products, and the priority's parity picks
the binder (even nu, odd mu).  Solving the system by nested elimination
gives a term.  Conversely a term becomes a game with a position per product
or coproduct occurrence and a back edge for every bound variable.
"""
from __future__ import annotations

from dataclasses import dataclass

from .bekic import gaussian_eliminate
from .games import ADAM, EVA, ParityGame, reachable, restrict, validate
from .terms import (
    MU,
    NU,
    Coprod,
    Equation,
    EquationSystem,
    Mu,
    MuTerm,
    Nu,
    Prod,
    Var,
    free_vars,
    fresh_name,
)

DEAD_ADAM_PRIORITY = 0
DEAD_EVA_PRIORITY = 1


def _kind(priority: int) -> str:
    return NU if priority % 2 == 0 else MU


def position_names(g: ParityGame) -> dict[int, str]:
    """Equation variable for each unlabelled position, avoiding leaf labels."""
    taken = set(g.var_label.values())
    out = {}
    for v in g.vertices:
        if v not in g.var_label:
            out[v] = fresh_name(f"X{v}", taken)
            taken.add(out[v])
    return out


def game_to_system(g: ParityGame) -> EquationSystem:
    validate(g)
    names = position_names(g)

    def ref(w):
        return Var(g.var_label[w]) if w in g.var_label else Var(names[w])

    eqs = []
    for v in g.vertices:
        if v in g.var_label:
            continue
        succ = g.successors(v)
        if not succ:
            if g.owner[v] == ADAM:
                eqs.append(Equation(names[v], NU, DEAD_ADAM_PRIORITY, Prod()))
            else:
                eqs.append(Equation(names[v], MU, DEAD_EVA_PRIORITY, Coprod()))
            continue
        items = tuple(ref(w) for w in succ)
        rhs = Coprod(items) if g.owner[v] == EVA else Prod(items)
        eqs.append(Equation(names[v], _kind(g.priority[v]), g.priority[v], rhs))
    return EquationSystem(tuple(eqs), g.labels())


def game_to_term(g: ParityGame, tie_break=None) -> MuTerm:
    """The term at the initial position, after dropping unreachable ones."""
    validate(g)
    sub = restrict(g, reachable(g))
    names = position_names(sub)
    if g.initial in sub.var_label:
        return Var(sub.var_label[g.initial])
    solved = gaussian_eliminate(game_to_system(sub), tie_break)
    return solved[names[g.initial]]


def simplify(t: MuTerm) -> MuTerm:
    """Drop binders whose variable does not occur in the body."""
    match t:
        case Var():
            return t
        case Prod(items):
            return Prod(tuple(simplify(s) for s in items))
        case Coprod(items):
            return Coprod(tuple(simplify(s) for s in items))
        case Mu(v, b) | Nu(v, b):
            b = simplify(b)
            return type(t)(v, b) if v in free_vars(b) else b
    raise TypeError(t)


@dataclass
class _Builder:
    vertices: dict
    moves: list
    labels: dict
    names: dict

    def new(self, prio, owner, name) -> int:
        v = len(self.vertices)
        self.vertices[v] = (prio, owner)
        self.names[v] = name
        return v


def binder_priority(kind: str, inner: int) -> int:
    """Smallest priority of the right parity above ``inner``."""
    p = inner + 1
    if (p % 2 == 0) != (kind == NU):
        p += 1
    return p


def term_to_game(t: MuTerm) -> ParityGame:
    """Game whose positions are the product and coproduct occurrences of ``t``.

    A binder shares the position of its body when that body is a product or
    coproduct, and otherwise gets a one-move Eva position of its own.  Bound
    variables are edges back to their binder's position; free variables are
    labelled leaves.
    """
    b = _Builder({}, [], {}, {})

    def node(t, pos, env) -> tuple[int, int]:
        """Create the position for ``t``; returns it and the largest binder
        priority inside ``t`` (or -1)."""
        match t:
            case Var(n):
                v = b.new(0, EVA, pos)
                b.labels[v] = n
                return v, -1
            case Prod(items) | Coprod(items):
                v = b.new(0, ADAM if isinstance(t, Prod) else EVA, pos)
                top = -1
                for i, s in enumerate(items):
                    top = max(top, child(v, s, f"{pos}.{i}", env))
                return v, top
            case Mu(x, body) | Nu(x, body):
                fused = isinstance(body, (Prod, Coprod))
                owner = ADAM if isinstance(body, Prod) else EVA
                v = b.new(0, owner, pos)
                inner_env = {**env, x: v}
                top = -1
                if fused:
                    for i, s in enumerate(body.items):
                        top = max(top, child(v, s, f"{pos}.0.{i}", inner_env))
                else:
                    top = child(v, body, f"{pos}.0", inner_env)
                p = binder_priority(MU if isinstance(t, Mu) else NU, top)
                b.vertices[v] = (p, owner)
                return v, p
        raise TypeError(t)

    def child(parent, s, pos, env) -> int:
        if isinstance(s, Var) and s.name in env:
            b.moves.append((parent, env[s.name]))
            return -1
        w, top = node(s, pos, env)
        b.moves.append((parent, w))
        return top

    root, _ = node(t, "root", {})
    g = ParityGame.build(b.vertices, _ordered(b.moves), root, b.labels, b.names)
    validate(g)
    return g


def _ordered(moves):
    by_src: dict = {}
    for p, q in moves:
        by_src.setdefault(p, []).append(q)
    return [(p, q) for p in sorted(by_src) for q in by_src[p]]


__all__ = [
    "binder_priority",
    "game_to_system",
    "game_to_term",
    "position_names",
    "simplify",
    "term_to_game",
]
