"""Counting Eva's deterministic winning strategies by brute force.

A strategy prefix of depth ``d`` fixes one move at every Eva history of
length below ``d`` consistent with it, and follows every Adam move.  It is
winning-extendable when every play that ends before depth ``d`` ends at an
Adam dead end and every history of length ``d`` ends in Eva's winning
region.  Because the parity condition ignores finite prefixes, the subtrees
below distinct histories can be completed independently, so this test is
exact: the prefixes counted are precisely the truncations of winning
strategies, and the number of winning strategies is the limit of the counts.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import prod

from .games import ADAM, EVA, GameError, ParityGame, Player, dual, validate, zielonka_solve

PREFIX_LIMIT = 10**6


class TooManyPrefixes(RuntimeError):
    """Exact enumeration would exceed the configured limit."""


def _closed(g: ParityGame, player: Player = EVA) -> ParityGame:
    validate(g)
    if not g.is_closed():
        raise GameError("strategy counting needs a closed game (no labelled leaves)")
    return g if player == EVA else dual(g)


def winning_moves(g: ParityGame, region) -> dict:
    """Eva's moves that stay in her winning region, per winning Eva vertex;
    the subgraph on which all winning strategies live."""
    return {v: [w for w in g.successors(v) if w in region]
            for v in region if g.owner[v] == EVA}


def count_prefixes(g: ParityGame, depth: int, player: Player = EVA) -> int:
    """Number of winning-extendable strategy prefixes of the given depth."""
    return prefix_counts(g, depth, player)[depth]


def prefix_counts(g: ParityGame, depth: int, player: Player = EVA) -> list[int]:
    """``count_prefixes`` for every depth from 0 to ``depth``."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    g = _closed(g, player)
    region = zielonka_solve(g).eva_region
    n = {v: int(v in region) for v in g.vertices}
    out = [n[g.initial]]
    for _ in range(depth):
        n = {v: _step(g, v, n) for v in g.vertices}
        out.append(n[g.initial])
    return out


def _step(g, v, prev) -> int:
    succ = g.successors(v)
    if not succ:
        return 1 if g.owner[v] == ADAM else 0
    if g.owner[v] == EVA:
        return sum(prev[w] for w in succ)
    return prod(prev[w] for w in succ)


@dataclass(frozen=True)
class StrategyPrefixTree:
    """A depth-bounded strategy prefix: Eva's chosen edge at each of her
    histories, keyed by the history's edge sequence."""

    root: int
    depth: int
    choices: tuple[tuple[tuple[int, ...], int], ...]

    def choice(self, history: tuple[int, ...]) -> int:
        return dict(self.choices)[history]


def enumerate_prefixes(g: ParityGame, depth: int, limit: int = PREFIX_LIMIT) -> list[StrategyPrefixTree]:
    """All winning-extendable prefixes, built explicitly."""
    g = _closed(g)
    total = count_prefixes(g, depth)
    if total > limit:
        raise TooManyPrefixes(f"{total} prefixes at depth {depth} exceed the limit {limit}")
    region = zielonka_solve(g).eva_region

    def grow(v, hist, r):
        """Alternatives for the subtree below ``hist``, each a list of choices."""
        if r == 0:
            return [[]] if v in region else []
        moves = g.moves(v)
        if not moves:
            return [[]] if g.owner[v] == ADAM else []
        if g.owner[v] == EVA:
            out = []
            for m in moves:
                for rest in grow(g.arena.tgt[m], hist + (m,), r - 1):
                    out.append([(hist, m)] + rest)
            return out
        out = [[]]
        for m in moves:
            sub = grow(g.arena.tgt[m], hist + (m,), r - 1)
            out = [a + b for a in out for b in sub]
        return out

    trees = [StrategyPrefixTree(g.initial, depth, tuple(c)) for c in grow(g.initial, (), depth)]
    assert len(trees) == total, "explicit enumeration disagrees with the count"
    return trees


@dataclass(frozen=True)
class Finite:
    count: int
    depth: int


@dataclass(frozen=True)
class NotStabilized:
    tail: tuple[int, ...]
    certified_divergent: bool = field(default=False)


def stabilized_count(g: ParityGame, max_depth: int, player: Player = EVA) -> Finite | NotStabilized:
    """The number of winning strategies if the prefix counts provably stop
    growing by ``max_depth``.

    Counts grow from depth ``d`` to ``d + 1`` exactly when some history of
    length ``d`` inside the winning subgraph ends at an Eva vertex with two
    winning moves.  The sets of such endpoints evolve deterministically, so
    they become periodic; if the periodic part has no branching vertex the
    count is final.  Otherwise the counts diverge and the tail is returned.
    """
    g = _closed(g, player)
    region = zielonka_solve(g).eva_region
    counts = prefix_counts(g, max_depth)
    if g.initial not in region:
        return Finite(0, 0)
    moves = winning_moves(g, region)

    def branching(v):
        return len(moves.get(v, ())) >= 2

    def advance(front):
        nxt = set()
        for v in front:
            nxt.update(moves[v] if g.owner[v] == EVA else g.successors(v))
        return frozenset(nxt)

    fronts = [frozenset({g.initial})]
    seen = {fronts[0]: 0}
    while True:
        nxt = advance(fronts[-1])
        if nxt in seen:
            start = seen[nxt]
            break
        seen[nxt] = len(fronts)
        fronts.append(nxt)
    if any(branching(v) for f in fronts[start:] for v in f):
        tail = tuple(counts[-3:])
        return NotStabilized(tail, certified_divergent=True)
    last = max((d for d, f in enumerate(fronts) if any(branching(v) for v in f)), default=-1)
    settle = last + 1
    if settle > max_depth:
        return NotStabilized(tuple(counts[-3:]))
    return Finite(counts[settle], settle)


def count_strategies_acyclic(g: ParityGame, limit: int = PREFIX_LIMIT) -> int:
    """Enumerate Eva's winning strategies on a game without cycles.

    Every play is finite, so a strategy is a finite tree and is listed
    outright; the result is the length of that list.
    """
    g = _closed(g)
    order = _topological(g)
    if order is None:
        raise GameError("game has a cycle")

    def strategies(v, hist):
        moves = g.moves(v)
        if not moves:
            return [()] if g.owner[v] == ADAM else []
        if g.owner[v] == EVA:
            out = []
            for m in moves:
                out.extend(((hist, m),) + s for s in strategies(g.arena.tgt[m], hist + (m,)))
                if len(out) > limit:
                    raise TooManyPrefixes(f"more than {limit} strategies")
            return out
        out = [()]
        for m in moves:
            sub = strategies(g.arena.tgt[m], hist + (m,))
            out = [a + b for a in out for b in sub]
            if len(out) > limit:
                raise TooManyPrefixes(f"more than {limit} strategies")
        return out

    return len(strategies(g.initial, ()))


def _topological(g: ParityGame):
    indeg = {v: 0 for v in g.vertices}
    for v in g.vertices:
        for w in g.successors(v):
            indeg[w] += 1
    queue = [v for v, d in indeg.items() if d == 0]
    out = []
    while queue:
        v = queue.pop()
        out.append(v)
        for w in g.successors(v):
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    return out if len(out) == len(indeg) else None


def is_acyclic(g: ParityGame) -> bool:
    return _topological(g) is not None
