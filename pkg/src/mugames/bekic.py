"""Solving systems of fixed-point equations by nesting binders.

Two simultaneous least fixed points can be computed one variable at a time:
solve the first equation with the second variable as a parameter, plug the
result into the second, and solve that.  Repeating this in priority order
(lowest first) eliminates any number of equations, mixing mu and nu.  All
transformations here are syntactic; ``tests/test_bekic.py`` checks them
against simultaneous Kleene iteration in Set.
"""
from __future__ import annotations

from dataclasses import dataclass

from .terms import (
    MU,
    EquationSystem,
    Mu,
    MuTerm,
    Nu,
    SystemError_,
    free_vars,
    substitute,
)


class ShapeError(ValueError):
    """Input does not have the shape an operation expects."""


@dataclass(frozen=True)
class SolvedSystem:
    solutions: tuple[tuple[str, MuTerm], ...]
    params: tuple[str, ...] = ()

    def __post_init__(self):
        allowed = set(self.params)
        for v, t in self.solutions:
            extra = set(free_vars(t)) - allowed
            if extra:
                raise ShapeError(f"solution for {v} mentions {sorted(extra)}")

    def __getitem__(self, var: str) -> MuTerm:
        for v, t in self.solutions:
            if v == var:
                return t
        raise KeyError(var)

    def as_dict(self) -> dict[str, MuTerm]:
        return dict(self.solutions)


def _binder(kind: str):
    return Mu if kind == MU else Nu


def elimination_order(sys: EquationSystem, tie_break=None) -> list[int]:
    """Equation indices by ascending priority; ``tie_break`` permutes ties."""
    idx = list(range(len(sys.equations)))
    key = (lambda i: i) if tie_break is None else tie_break
    return sorted(idx, key=lambda i: (sys.equations[i].priority, key(i)))


def gaussian_eliminate(sys: EquationSystem, tie_break=None) -> SolvedSystem:
    """Solve every equation; the highest priority ends outermost."""
    errs = sys.violations()
    if errs:
        raise SystemError_("; ".join(errs))
    rhs = {e.var: e.rhs for e in sys.equations}
    partial: list[tuple[str, MuTerm]] = []
    for i in elimination_order(sys, tie_break):
        eq = sys.equations[i]
        sol = _binder(eq.kind)(eq.var, rhs.pop(eq.var))
        for other in rhs:
            rhs[other] = substitute(rhs[other], eq.var, sol)
        partial.append((eq.var, sol))

    final: dict[str, MuTerm] = {}
    for var, sol in reversed(partial):
        for later, closed in final.items():
            sol = substitute(sol, later, closed)
        final[var] = sol
    return SolvedSystem(tuple((v, final[v]) for v in sys.variables), sys.params)


def bekic_nest(sys: EquationSystem) -> SolvedSystem:
    """Two simultaneous least fixed points as nested single ones."""
    if len(sys.equations) != 2 or any(e.kind != MU for e in sys.equations):
        raise ShapeError("bekic_nest needs exactly two mu-equations")
    (x, f), (y, g) = ((e.var, e.rhs) for e in sys.equations)
    mu_x = Mu(x, f)
    y_sol = Mu(y, substitute(g, x, mu_x))
    x_sol = substitute(mu_x, y, y_sol)
    return SolvedSystem(((x, x_sol), (y, y_sol)), sys.params)


def _check_pair(f: MuTerm, g: MuTerm, x: str, y: str):
    if x == y:
        raise ShapeError("the two variables must differ")
    if x in free_vars(f):
        raise ShapeError(f"{x} must not occur free in the first component")


def pairing_forward(f: MuTerm, g: MuTerm, x: str = "X", y: str = "Y") -> SolvedSystem:
    """Solve ``x = f(y)``, ``y =mu g(x, y)`` where ``x`` carries no recursion."""
    _check_pair(f, g, x, y)
    y_sol = Mu(y, substitute(g, x, f))
    x_sol = substitute(f, y, y_sol)
    params = tuple(n for n in dict.fromkeys(free_vars(x_sol) + free_vars(y_sol)))
    return SolvedSystem(((x, x_sol), (y, y_sol)), params)


def pairing_backward(
    f: MuTerm, g: MuTerm, nested: SolvedSystem, x: str = "X", y: str = "Y"
) -> MuTerm:
    """The single initial algebra of ``g(f(-), -)`` recovered from a pair."""
    _check_pair(f, g, x, y)
    names = {v for v, _ in nested.solutions}
    if names != {x, y}:
        raise ShapeError(f"expected solutions for {x} and {y}, got {sorted(names)}")
    return Mu(y, substitute(g, x, f))
