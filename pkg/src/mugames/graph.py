"""Finite directed multigraphs, paths in their free categories, lassos.

Vertex and edge ids are opaque but totally ordered; every iteration in the
package goes through sorted ids so results are reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping


class GraphError(ValueError):
    """Malformed graph, path or morphism."""


class CompositionError(GraphError):
    """Paths whose endpoints do not meet."""


@dataclass(frozen=True)
class Graph:
    vertices: tuple
    edges: tuple
    src: Mapping[Hashable, Hashable]
    tgt: Mapping[Hashable, Hashable]
    _out: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphError("duplicate vertex id")
        if len(set(self.edges)) != len(self.edges):
            raise GraphError("duplicate edge id")
        vs = set(self.vertices)
        out = {v: [] for v in self.vertices}
        for m in self.edges:
            if m not in self.src or m not in self.tgt:
                raise GraphError(f"edge {m!r} has no endpoints")
            if self.src[m] not in vs or self.tgt[m] not in vs:
                raise GraphError(f"edge {m!r} leaves the vertex set")
            out[self.src[m]].append(m)
        object.__setattr__(self, "_out", {v: tuple(ms) for v, ms in out.items()})

    @classmethod
    def from_edges(cls, vertices: Iterable, edges: Iterable[tuple]) -> "Graph":
        """Build from ``(edge_id, src, tgt)`` triples; ids are sorted."""
        triples = sorted(edges, key=lambda e: e[0])
        return cls(
            vertices=tuple(sorted(vertices)),
            edges=tuple(m for m, _, _ in triples),
            src={m: p for m, p, _ in triples},
            tgt={m: q for m, _, q in triples},
        )

    def out_edges(self, v) -> tuple:
        return self._out[v]

    def successors(self, v) -> tuple:
        return tuple(self.tgt[m] for m in self._out[v])

    def identity(self, p) -> "Path":
        if p not in self._out:
            raise GraphError(f"unknown vertex {p!r}")
        return Path(p, (), p)

    def path(self, start, steps: Iterable = ()) -> "Path":
        """Validated path from ``start`` along ``steps``."""
        if start not in self._out:
            raise GraphError(f"unknown vertex {start!r}")
        steps = tuple(steps)
        here = start
        for i, m in enumerate(steps):
            if m not in self.src:
                raise GraphError(f"unknown edge {m!r}")
            if self.src[m] != here:
                raise GraphError(f"step {i}: edge {m!r} does not leave {here!r}")
            here = self.tgt[m]
        return Path(start, steps, here)

    def lasso(self, stem: "Path", cycle: "Path") -> "LassoPath":
        self.path(stem.start, stem.steps)
        self.path(cycle.start, cycle.steps)
        return LassoPath(stem, cycle)

    def is_valid_path(self, p: "Path") -> bool:
        try:
            return self.path(p.start, p.steps).end == p.end
        except GraphError:
            return False


@dataclass(frozen=True)
class Path:
    """A finite path; the empty path at ``p`` is the identity on ``p``."""

    start: Hashable
    steps: tuple
    end: Hashable

    def __len__(self):
        return len(self.steps)

    def vertices(self, graph: Graph) -> tuple:
        out = [self.start]
        for m in self.steps:
            out.append(graph.tgt[m])
        return tuple(out)


@dataclass(frozen=True)
class LassoPath:
    """The eventually periodic infinite path ``stem * cycle * cycle * ...``."""

    stem: Path
    cycle: Path

    def __post_init__(self):
        if not self.cycle.steps:
            raise GraphError("lasso cycle must be nonempty")
        if not (self.stem.end == self.cycle.start == self.cycle.end):
            raise GraphError("lasso cycle must close at the end of its stem")

    @property
    def start(self):
        return self.stem.start

    def step(self, i: int):
        """The ``i``-th edge of the infinite path."""
        n = len(self.stem.steps)
        if i < n:
            return self.stem.steps[i]
        return self.cycle.steps[(i - n) % len(self.cycle.steps)]


def compose_paths(d: Path, g: Path) -> Path:
    if d.end != g.start:
        raise CompositionError(f"cannot compose: {d.end!r} != {g.start!r}")
    return Path(d.start, d.steps + g.steps, g.end)


def compose_lasso(d: Path, g: LassoPath) -> LassoPath:
    return LassoPath(compose_paths(d, g.stem), g.cycle)


def is_prefix(d: Path, g: Path | LassoPath) -> bool:
    if isinstance(g, LassoPath):
        if d.start != g.start:
            return False
        return all(g.step(i) == m for i, m in enumerate(d.steps))
    return (
        d.start == g.start
        and len(d.steps) <= len(g.steps)
        and g.steps[: len(d.steps)] == d.steps
    )


@dataclass(frozen=True)
class GraphMorphism:
    source: Graph
    target: Graph
    vertex_map: Mapping
    edge_map: Mapping

    def violations(self) -> list[str]:
        errs = []
        tv = set(self.target.vertices)
        for v in self.source.vertices:
            if v not in self.vertex_map:
                errs.append(f"vertex {v!r} unmapped")
            elif self.vertex_map[v] not in tv:
                errs.append(f"vertex {v!r} maps outside the target")
        for m in self.source.edges:
            if m not in self.edge_map:
                errs.append(f"edge {m!r} unmapped")
                continue
            n = self.edge_map[m]
            if n not in self.target.src:
                errs.append(f"edge {m!r} maps outside the target")
                continue
            for end, name in ((self.source.src, "source"), (self.source.tgt, "target")):
                tend = self.target.src if name == "source" else self.target.tgt
                if self.vertex_map.get(end[m]) != tend[n]:
                    errs.append(f"edge {m!r}: {name} not preserved")
        return errs

    def validate(self) -> None:
        errs = self.violations()
        if errs:
            raise GraphError("; ".join(errs))

    @classmethod
    def identity(cls, g: Graph) -> "GraphMorphism":
        return cls(g, g, {v: v for v in g.vertices}, {m: m for m in g.edges})


def apply_morphism(phi: GraphMorphism, g: Path | LassoPath) -> Path | LassoPath:
    phi.validate()
    if isinstance(g, LassoPath):
        return LassoPath(apply_morphism(phi, g.stem), apply_morphism(phi, g.cycle))
    return Path(
        phi.vertex_map[g.start],
        tuple(phi.edge_map[m] for m in g.steps),
        phi.vertex_map[g.end],
    )
