"""Finite parity games between Eva and Adam.

Winning convention: an infinite play is won by Eva iff the largest priority
seen infinitely often is even; a play that gets stuck is lost by the owner
of the stuck position.  Leaves labelled with a variable have no moves and
are decided by an explicit assumption when solving.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .graph import Graph


class Player(enum.IntEnum):
    EVA = 0
    ADAM = 1

    @property
    def opponent(self) -> "Player":
        return Player(1 - self)

    def __str__(self):
        return self.name.capitalize()


EVA, ADAM = Player.EVA, Player.ADAM


class GameError(ValueError):
    pass


class GameValidationError(GameError):
    def __init__(self, diagnostics: list[str]):
        super().__init__("; ".join(diagnostics))
        self.diagnostics = diagnostics


class PGParseError(GameError):
    def __init__(self, msg: str, line: int):
        super().__init__(f"line {line}: {msg}")
        self.line = line


@dataclass(frozen=True)
class ParityGame:
    arena: Graph
    owner: Mapping[int, Player]
    priority: Mapping[int, int]
    initial: int | None
    var_label: Mapping[int, str] = field(default_factory=dict)
    names: Mapping[int, str] = field(default_factory=dict)

    @classmethod
    def build(
        cls,
        vertices: Mapping[int, tuple[int, Player]],
        moves: Iterable[tuple[int, int]],
        initial: int,
        var_label: Mapping[int, str] | None = None,
        names: Mapping[int, str] | None = None,
    ) -> "ParityGame":
        """``vertices`` maps id -> (priority, owner); moves become edges
        0, 1, 2, ... in the order given."""
        edges = [(k, p, q) for k, (p, q) in enumerate(moves)]
        return cls(
            Graph.from_edges(vertices, edges),
            {v: Player(o) for v, (_, o) in vertices.items()},
            {v: p for v, (p, _) in vertices.items()},
            initial,
            dict(var_label or {}),
            dict(names or {}),
        )

    @property
    def vertices(self) -> tuple:
        return self.arena.vertices

    def moves(self, v) -> tuple:
        return self.arena.out_edges(v)

    def successors(self, v) -> tuple:
        return self.arena.successors(v)

    def is_closed(self) -> bool:
        return not self.var_label

    def labels(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(self.var_label[v] for v in sorted(self.var_label)))


def validate(g: ParityGame, max_priority: int | None = None) -> None:
    diags = []
    if not g.vertices or g.initial is None:
        diags.append("no initial position")
    elif g.initial not in g.owner:
        diags.append(f"initial position {g.initial} is not a vertex")
    for v in g.vertices:
        if v not in g.owner or v not in g.priority:
            diags.append(f"vertex {v}: missing owner or priority")
            continue
        p = g.priority[v]
        if not isinstance(p, int) or p < 0:
            diags.append(f"vertex {v}: priority {p!r} is not a natural number")
        elif max_priority is not None and p > max_priority:
            diags.append(f"vertex {v}: priority {p} exceeds declared maximum {max_priority}")
        if v in g.var_label and g.moves(v):
            diags.append(f"vertex {v}: labelled leaf {g.var_label[v]!r} has outgoing edge {g.moves(v)[0]}")
    for v in g.var_label:
        if v not in g.owner:
            diags.append(f"label on unknown vertex {v}")
    if diags:
        raise GameValidationError(diags)


def max_priority(g: ParityGame) -> int:
    return max((g.priority[v] for v in g.vertices), default=0)


def restrict(g: ParityGame, keep: Iterable) -> ParityGame:
    """Subgame on ``keep``; edges leaving it are dropped."""
    keep = set(keep)
    vs = [v for v in g.vertices if v in keep]
    es = [(m, g.arena.src[m], g.arena.tgt[m]) for m in g.arena.edges
          if g.arena.src[m] in keep and g.arena.tgt[m] in keep]
    init = g.initial if g.initial in keep else (vs[0] if vs else None)
    return ParityGame(
        Graph.from_edges(vs, es),
        {v: g.owner[v] for v in vs},
        {v: g.priority[v] for v in vs},
        init,
        {v: n for v, n in g.var_label.items() if v in keep},
        {v: n for v, n in g.names.items() if v in keep},
    )


def reachable(g: ParityGame, start=None) -> set:
    start = g.initial if start is None else start
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in g.successors(v):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def attractor(g: ParityGame, player: Player, target: Iterable) -> set:
    return attractor_with_strategy(g, player, target)[0]


def attractor_with_strategy(g: ParityGame, player: Player, target: Iterable):
    """Least set containing ``target`` into which ``player`` can force play.

    Returns the set and a positional strategy (vertex -> edge) for ``player``
    on the attracted vertices outside ``target``.  Dead ends are not forced
    vacuously; callers seed them explicitly.
    """
    attr = set(target)
    strategy: dict = {}
    preds: dict = {v: [] for v in g.vertices}
    for m in g.arena.edges:
        preds[g.arena.tgt[m]].append(m)
    remaining = {v: len(g.moves(v)) for v in g.vertices}
    queue = sorted(attr)
    while queue:
        w = queue.pop()
        for m in preds[w]:
            u = g.arena.src[m]
            if u in attr:
                continue
            if g.owner[u] == player:
                attr.add(u)
                strategy[u] = m
                queue.append(u)
            else:
                remaining[u] -= 1
                if remaining[u] == 0:
                    attr.add(u)
                    queue.append(u)
    return attr, strategy


@dataclass(frozen=True)
class WinningRegions:
    eva_region: frozenset
    adam_region: frozenset
    eva_strategy: Mapping
    adam_strategy: Mapping

    def region(self, player: Player) -> frozenset:
        return self.eva_region if player == EVA else self.adam_region

    def strategy(self, player: Player) -> Mapping:
        return self.eva_strategy if player == EVA else self.adam_strategy

    def winner(self, v) -> Player:
        return EVA if v in self.eva_region else ADAM


def _leaf_winner(g: ParityGame, v, assumption: Mapping[str, str]) -> Player | None:
    if v in g.var_label:
        return EVA if assumption[g.var_label[v]] == "win" else ADAM
    if not g.moves(v):
        return g.owner[v].opponent
    return None


def zielonka_solve(g: ParityGame, assumption: Mapping[str, str] | None = None) -> WinningRegions:
    """Winning regions and positional winning strategies for both players.

    ``assumption`` maps every leaf label to ``"win"`` or ``"lose"`` (from
    Eva's point of view).  The returned strategies are re-verified by an
    independent cycle check before returning.
    """
    assumption = dict(assumption or {})
    missing = sorted(set(g.var_label.values()) - set(assumption))
    if missing:
        raise GameError(f"no assumption for labels {missing}")
    bad = {k: a for k, a in assumption.items() if a not in ("win", "lose")}
    if bad:
        raise GameError(f"assumptions must be 'win' or 'lose': {bad}")

    # Stuck positions are settled by reachability first; what remains has no
    # dead ends and is solved by the classic recursion.
    stuck = {v: _leaf_winner(g, v, assumption) for v in g.vertices}
    wins = {p: {v for v, w in stuck.items() if w == p} for p in Player}
    a_eva, s_eva = attractor_with_strategy(g, EVA, wins[EVA])
    a_adam, s_adam = attractor_with_strategy(g, ADAM, wins[ADAM])
    rest = restrict(g, set(g.vertices) - a_eva - a_adam)
    w, strat = _zielonka(rest)
    regions = {EVA: frozenset(a_eva | w[EVA]), ADAM: frozenset(a_adam | w[ADAM])}
    strategies = {EVA: {**s_eva, **strat[EVA]}, ADAM: {**s_adam, **strat[ADAM]}}
    out = WinningRegions(regions[EVA], regions[ADAM],
                         _own(g, EVA, strategies[EVA], regions[EVA]),
                         _own(g, ADAM, strategies[ADAM], regions[ADAM]))
    for p in Player:
        problems = check_strategy(g, p, out.region(p), out.strategy(p), assumption)
        if problems:
            raise AssertionError(f"solver produced a non-winning strategy for {p}: {problems}")
    return out


def _own(g, player, strategy, region):
    return {v: m for v, m in sorted(strategy.items())
            if v in region and g.owner[v] == player and g.moves(v)}


def _zielonka(g: ParityGame):
    if not g.vertices:
        return {EVA: set(), ADAM: set()}, {EVA: {}, ADAM: {}}
    d = max_priority(g)
    me = Player(d % 2)
    top = {v for v in g.vertices if g.priority[v] == d}
    a, s_a = attractor_with_strategy(g, me, top)
    w1, st1 = _zielonka(restrict(g, set(g.vertices) - a))
    if not w1[me.opponent]:
        strat_me = {**st1[me], **s_a}
        for v in top:
            if g.owner[v] == me:
                strat_me[v] = g.moves(v)[0]
        return ({me: set(g.vertices), me.opponent: set()},
                {me: strat_me, me.opponent: {}})
    b, s_b = attractor_with_strategy(g, me.opponent, w1[me.opponent])
    w2, st2 = _zielonka(restrict(g, set(g.vertices) - b))
    strat_opp = {**st2[me.opponent], **s_b, **st1[me.opponent]}
    return ({me: w2[me], me.opponent: w2[me.opponent] | b},
            {me: st2[me], me.opponent: strat_opp})


def check_strategy(g: ParityGame, player: Player, region, strategy: Mapping,
                   assumption: Mapping[str, str] | None = None) -> list[str]:
    """Problems with ``strategy`` as a winning strategy for ``player`` from
    every vertex of ``region``; empty list if it is winning."""
    assumption = assumption or {}
    region = set(region)
    problems = []
    succ: dict = {}
    for v in sorted(region):
        if v in g.var_label:
            w = EVA if assumption.get(g.var_label[v]) == "win" else ADAM
            if w != player:
                problems.append(f"{v}: leaf lost under the assumption")
            succ[v] = ()
            continue
        if not g.moves(v):
            if g.owner[v] == player:
                problems.append(f"{v}: stuck at own dead end")
            succ[v] = ()
            continue
        if g.owner[v] == player:
            m = strategy.get(v)
            if m is None or m not in g.moves(v):
                problems.append(f"{v}: no move chosen")
                succ[v] = ()
                continue
            targets = (g.arena.tgt[m],)
        else:
            targets = g.successors(v)
        for w in targets:
            if w not in region:
                problems.append(f"{v}: play escapes the region to {w}")
        succ[v] = tuple(w for w in targets if w in region)
    bad = 1 - int(player)
    for p in sorted({g.priority[v] for v in region if g.priority[v] % 2 == bad}):
        low = {v for v in region if g.priority[v] <= p}
        for v in sorted(low):
            if g.priority[v] == p and _on_cycle(v, low, succ):
                problems.append(f"{v}: opponent can loop through priority {p}")
    return problems


def _on_cycle(v, allowed: set, succ: Mapping) -> bool:
    seen = set()
    stack = [w for w in succ[v] if w in allowed]
    while stack:
        u = stack.pop()
        if u == v:
            return True
        if u in seen:
            continue
        seen.add(u)
        stack.extend(w for w in succ[u] if w in allowed)
    return False


def dual(g: ParityGame) -> ParityGame:
    """Swap the players: owners flipped, priorities shifted by one."""
    if g.var_label:
        raise GameError("dual is defined for closed games only")
    return ParityGame(g.arena, {v: o.opponent for v, o in g.owner.items()},
                      {v: p + 1 for v, p in g.priority.items()}, g.initial, {}, dict(g.names))


# ------------------------------------------------------------- PGSolver text

_LINE = re.compile(r'^(\d+)\s+(\d+)\s+([01])(?:\s+([0-9,\s]*?))?\s*(?:"([^"]*)")?\s*$')


def parse_pg(text: str) -> ParityGame:
    """Read the PGSolver-style format.

    ``ID PRIORITY OWNER SUCC,SUCC ["NAME"];`` with owner 0 = Eva, 1 = Adam.  A
    name ``"var:X"`` on a vertex without successors marks a variable leaf.
    """
    vertices: dict = {}
    moves: list = []
    labels: dict = {}
    names: dict = {}
    order: list = []
    start = None
    declared = None
    stmts = []
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        for part in line.split(";"):
            if part.strip():
                stmts.append((ln, part.strip()))
    for ln, s in stmts:
        if s.startswith("parity"):
            m = re.fullmatch(r"parity\s+(\d+)", s)
            if not m:
                raise PGParseError("malformed header", ln)
            declared = int(m.group(1))
            continue
        if s.startswith("start"):
            m = re.fullmatch(r"start\s+(\d+)", s)
            if not m:
                raise PGParseError("malformed start line", ln)
            start = int(m.group(1))
            continue
        m = _LINE.match(s)
        if not m:
            raise PGParseError(f"cannot read vertex line {s!r}", ln)
        vid, prio, own, succ, name = m.groups()
        vid = int(vid)
        if vid in vertices:
            raise PGParseError(f"vertex {vid} declared twice", ln)
        vertices[vid] = (int(prio), Player(int(own)))
        order.append(vid)
        succ = (succ or "").replace(" ", "")
        targets = [int(x) for x in succ.split(",") if x] if succ else []
        if succ and (succ.startswith(",") or succ.endswith(",") or ",," in succ):
            raise PGParseError("empty successor in list", ln)
        moves.extend((vid, q) for q in targets)
        if name is not None:
            if name.startswith("var:"):
                labels[vid] = name[4:]
            else:
                names[vid] = name
    for p, q in moves:
        if q not in vertices:
            raise GameValidationError([f"vertex {p}: successor {q} is not declared"])
    if declared is not None and vertices and max(vertices) > declared:
        raise GameValidationError([f"vertex id {max(vertices)} exceeds declared maximum {declared}"])
    initial = start if start is not None else (order[0] if order else None)
    g = ParityGame.build(vertices, moves, initial, labels, names) if vertices else ParityGame(
        Graph.from_edges([], []), {}, {}, None)
    validate(g)
    return g


def dump_pg(g: ParityGame) -> str:
    """Canonical text: header, optional start line, vertices by id."""
    lines = [f"parity {max(g.vertices)};"]
    if g.initial != min(g.vertices):
        lines.append(f"start {g.initial};")
    for v in g.vertices:
        parts = [str(v), str(g.priority[v]), str(int(g.owner[v]))]
        succ = g.successors(v)
        if succ:
            parts.append(",".join(str(w) for w in succ))
        if v in g.var_label:
            parts.append(f'"var:{g.var_label[v]}"')
        elif v in g.names:
            parts.append(f'"{g.names[v]}"')
        lines.append(" ".join(parts) + ";")
    return "\n".join(lines) + "\n"
