"""Independent reference implementations used only by the tests."""
from __future__ import annotations

import itertools

from mugames.games import ADAM, EVA, ParityGame


def _play_winner(g: ParityGame, v, choice) -> int:
    """Winner of the unique play from ``v`` when every vertex follows
    ``choice`` (vertex -> successor)."""
    order = []
    index = {}
    while v not in index:
        index[v] = len(order)
        order.append(v)
        if v not in choice:
            return int(g.owner[v].opponent)
        v = choice[v]
    top = max(g.priority[u] for u in order[index[v]:])
    return EVA if top % 2 == 0 else ADAM


def brute_force_regions(g: ParityGame) -> tuple[frozenset, frozenset]:
    """Eva's region: vertices from which some positional Eva strategy beats
    every positional Adam strategy.  Exact by positional determinacy."""
    def options(owner):
        vs = [v for v in g.vertices if g.owner[v] == owner and g.successors(v)]
        return vs, [sorted(set(g.successors(v))) for v in vs]

    eva_vs, eva_opts = options(EVA)
    adam_vs, adam_opts = options(ADAM)
    adam_all = [dict(zip(adam_vs, c)) for c in itertools.product(*adam_opts)]
    eva = set()
    for pick in itertools.product(*eva_opts):
        sigma = dict(zip(eva_vs, pick))
        for v in g.vertices:
            if v in eva:
                continue
            if all(_play_winner(g, v, {**sigma, **tau}) == EVA for tau in adam_all):
                eva.add(v)
    return frozenset(eva), frozenset(set(g.vertices) - eva)


def naive_prefix_count(g: ParityGame, depth: int, eva_region) -> int:
    """Generate-and-test count of winning-extendable prefixes.

    Every assignment of a move to every Eva history of length below
    ``depth`` is tried; assignments are identified when they agree on the
    histories they actually reach.
    """
    def histories(v, hist, r):
        yield v, hist
        if r == 0:
            return
        for m in g.moves(v):
            yield from histories(g.arena.tgt[m], hist + (m,), r - 1)

    eva_hist = [] if depth == 0 else [
        (v, h) for v, h in histories(g.initial, (), depth - 1)
        if g.owner[v] == EVA and g.moves(v)]
    found = set()
    for pick in itertools.product(*(g.moves(v) for v, _ in eva_hist)):
        choice = {h: m for (_, h), m in zip(eva_hist, pick)}
        reached = []
        ok = True
        stack = [(g.initial, ())]
        while stack and ok:
            v, h = stack.pop()
            if len(h) == depth:
                ok = v in eva_region
                continue
            moves = g.moves(v)
            if not moves:
                ok = g.owner[v] == ADAM
                continue
            if g.owner[v] == EVA:
                m = choice[h]
                reached.append((h, m))
                stack.append((g.arena.tgt[m], h + (m,)))
            else:
                stack.extend((g.arena.tgt[m], h + (m,)) for m in moves)
        if ok:
            found.add(frozenset(reached))
    return len(found)
