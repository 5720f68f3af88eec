"""Decide whether a mu-term denotes an empty, finite, or infinite set.

Emptiness is the boolean reading of the term: 0 is false, products are
conjunctions, coproducts disjunctions, and binders least/greatest boolean
fixed points.

Finiteness works on the occurrence graph of the term: one node per subterm
occurrence, tree edges, plus a back edge from each bound variable to its
binder.  Keep only inhabited nodes and, below a coproduct, only inhabited
branches.  A node *branches* if it is a coproduct with at least two
inhabited branches or a parameter with at least two elements.  The set is
infinite exactly when, from the root, one can reach a back edge whose binder
can in turn reach a branching node: going round that cycle k times before
branching gives a different member for every k.  Otherwise every member is
determined by finitely many choices made at bounded depth.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Mapping

from .terms import Coprod, Mu, MuTerm, Nu, Prod, Var

EMPTY = "empty"
NONEMPTY_FINITE = "nonempty-finite"
INFINITE = "infinite"


class UnboundVariable(KeyError):
    pass


@dataclass(frozen=True)
class Certificate:
    kind: str
    binder: str
    binder_at: str
    cycle: tuple[str, ...]
    branch_at: str
    branch: str

    def __str__(self):
        return (
            f"{self.kind}-binder {self.binder} at {self.binder_at} lies on the cycle "
            f"{' -> '.join(self.cycle)} -> {self.binder_at} and reaches {self.branch} at "
            f"{self.branch_at}"
        )

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "binder": self.binder,
            "binder_at": self.binder_at,
            "cycle": list(self.cycle),
            "branch_at": self.branch_at,
            "branch": self.branch,
        }


@dataclass(frozen=True)
class Analysis:
    verdict: str
    certificate: Certificate | None = None


class _Bool:
    """Boolean semantics with memoisation on (subterm, relevant env)."""

    def __init__(self):
        self.memo: dict = {}
        self.fv: dict = {}

    def free(self, t) -> frozenset:
        k = id(t)
        if k not in self.fv:
            match t:
                case Var(n):
                    out = frozenset((n,))
                case Prod(items) | Coprod(items):
                    out = frozenset().union(*(self.free(s) for s in items))
                case Mu(v, b) | Nu(v, b):
                    out = self.free(b) - {v}
            self.fv[k] = (out, t)
        return self.fv[k][0]

    def val(self, t: MuTerm, env: Mapping[str, bool]) -> bool:
        key = (id(t), tuple(sorted((v, env[v]) for v in self.free(t))))
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        match t:
            case Var(n):
                out = env[n]
            case Prod(items):
                out = all(self.val(s, env) for s in items)
            case Coprod(items):
                out = any(self.val(s, env) for s in items)
            case Mu(v, b) | Nu(v, b):
                # On booleans the chain from false (true) settles in one step.
                out = self.val(b, {**env, v: isinstance(t, Nu)})
        self.memo[key] = out
        return out


def inhabited(t: MuTerm, env: Mapping[str, bool]) -> bool:
    return _Bool().val(t, env)


class _Node:
    __slots__ = ("term", "pos", "children", "binder", "value")

    def __init__(self, term, pos):
        self.term = term
        self.pos = pos
        self.children: list[int] = []
        self.binder: int | None = None
        self.value = False


def _pos(p: tuple) -> str:
    return "root" if not p else "root." + ".".join(map(str, p))


def _occurrences(t: MuTerm, sizes: Mapping[str, int]) -> list[_Node]:
    b = _Bool()
    nodes: list[_Node] = []
    base = {v: n > 0 for v, n in sizes.items()}
    stack = [(t, (), base, {}, None)]
    while stack:
        s, pos, ctx, bound, parent = stack.pop()
        idx = len(nodes)
        node = _Node(s, pos)
        nodes.append(node)
        if parent is not None:
            nodes[parent].children.append(idx)
        node.value = b.val(s, ctx)
        match s:
            case Var(n) if n in bound:
                node.binder = bound[n]
            case Prod(items) | Coprod(items):
                for i in reversed(range(len(items))):
                    stack.append((items[i], pos + (i,), ctx, bound, idx))
            case Mu(v, body) | Nu(v, body):
                stack.append((body, pos + (0,), {**ctx, v: node.value}, {**bound, v: idx}, idx))
    for n in nodes:
        n.children.sort(key=lambda c: nodes[c].pos)
    return nodes


def finiteness_analysis(t: MuTerm, sizes: Mapping[str, int]) -> Analysis:
    """Classify ``t`` under parameters of the given sizes."""
    from .terms import free_vars

    missing = [v for v in free_vars(t) if v not in sizes]
    if missing:
        raise UnboundVariable(", ".join(missing))
    nodes = _occurrences(t, sizes)
    if not nodes[0].value:
        return Analysis(EMPTY)

    def succ(i):
        n = nodes[i]
        match n.term:
            case Prod():
                return n.children
            case Coprod():
                return [c for c in n.children if nodes[c].value]
            case Mu() | Nu():
                return n.children
            case Var():
                return [] if n.binder is None else [n.binder]
        return []

    def branches(i) -> str | None:
        n = nodes[i]
        match n.term:
            case Coprod() if sum(nodes[c].value for c in n.children) >= 2:
                return "a choice between inhabited branches"
            case Var(name) if n.binder is None and sizes[name] >= 2:
                return f"a choice among {sizes[name]} elements of {name}"
        return None

    reach = _bfs([0], succ)
    pred: dict[int, list[int]] = {i: [] for i in reach}
    for i in reach:
        for j in succ(i):
            pred[j].append(i)
    sinks = [i for i in reach if branches(i)]
    co = _bfs(sinks, lambda i: pred[i])
    for u in sorted(reach, key=lambda i: nodes[i].pos):
        n = nodes[u]
        if n.binder is None or n.binder not in co:
            continue
        b = n.binder
        cycle_path = _path(b, {u}, succ)
        branch_path = _path(b, set(sinks), succ)
        tip = branch_path[-1]
        return Analysis(
            INFINITE,
            Certificate(
                kind="mu" if isinstance(nodes[b].term, Mu) else "nu",
                binder=nodes[b].term.var,
                binder_at=_pos(nodes[b].pos),
                cycle=tuple(_pos(nodes[i].pos) for i in cycle_path),
                branch_at=_pos(nodes[tip].pos),
                branch=branches(tip),
            ),
        )
    return Analysis(NONEMPTY_FINITE)


def _bfs(starts, succ) -> dict[int, int | None]:
    seen: dict[int, int | None] = {s: None for s in starts}
    queue = deque(starts)
    while queue:
        i = queue.popleft()
        for j in succ(i):
            if j not in seen:
                seen[j] = i
                queue.append(j)
    return seen


def _path(start: int, goals: set[int], succ) -> list[int]:
    parent = {start: None}
    queue = deque([start])
    while queue:
        i = queue.popleft()
        if i in goals:
            out = [i]
            while parent[out[-1]] is not None:
                out.append(parent[out[-1]])
            return out[::-1]
        for j in succ(i):
            if j not in parent:
                parent[j] = i
                queue.append(j)
    raise AssertionError("goal not reachable")
