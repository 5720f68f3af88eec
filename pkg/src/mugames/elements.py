"""Element trees: the concrete members of sets denoted by mu-terms.

``Atom`` is a parameter element, ``Tup`` a product element, ``Inj`` a
coproduct injection and ``Fold`` one layer of a least fixed point.  Members
of greatest fixed points may be infinite trees; in the finite case they are
rational, and ``NuElem`` stores the cyclic part of one as a minimal
automaton: a tuple of layers, state 0 the root, with ``NuRef(i)`` pointing
at state ``i``.  Subtrees that are finite are written out as plain trees,
layers never contain a nested ``NuElem``, and states are numbered
breadth-first in order of first reference, so equal trees have equal
representations.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence


class Element:
    __slots__ = ()


def _cached(tag, *parts):
    return hash((tag, *parts))


@dataclass(frozen=True, slots=True)
class Atom(Element):
    var: str
    index: int
    _h: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_h", _cached("a", self.var, self.index))

    def __hash__(self):
        return self._h


@dataclass(frozen=True, slots=True)
class Tup(Element):
    items: tuple
    _h: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_h", _cached("t", self.items))

    def __hash__(self):
        return self._h


@dataclass(frozen=True, slots=True)
class Inj(Element):
    index: int
    item: Element
    _h: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_h", _cached("i", self.index, self.item))

    def __hash__(self):
        return self._h


@dataclass(frozen=True, slots=True)
class Fold(Element):
    item: Element
    _h: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_h", _cached("f", self.item))

    def __hash__(self):
        return self._h


@dataclass(frozen=True, slots=True)
class NuRef(Element):
    index: int
    _h: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_h", _cached("r", self.index))

    def __hash__(self):
        return self._h


@dataclass(frozen=True, slots=True)
class NuElem(Element):
    layers: tuple
    _h: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_h", _cached("n", self.layers))

    def __hash__(self):
        return self._h


def elem_key(e: Element):
    """Total order: by constructor, then lexicographically by contents."""
    match e:
        case Atom(v, i):
            return (0, v, i)
        case Tup(items):
            return (1, len(items), tuple(elem_key(x) for x in items))
        case Inj(i, x):
            return (2, i, elem_key(x))
        case Fold(x):
            return (3, elem_key(x))
        case NuElem(layers):
            return (4, len(layers), tuple(elem_key(x) for x in layers))
        case NuRef(i):
            return (5, i)
    raise TypeError(e)


def sort_elements(es) -> tuple:
    return tuple(sorted(set(es), key=elem_key))


def to_json(e: Element):
    match e:
        case Atom(v, i):
            return ["atom", v, i]
        case Tup(items):
            return ["tuple", [to_json(x) for x in items]]
        case Inj(i, x):
            return ["inj", i, to_json(x)]
        case Fold(x):
            return ["fold", to_json(x)]
        case NuElem(layers):
            return ["nu", [to_json(x) for x in layers]]
        case NuRef(i):
            return ["ref", i]
    raise TypeError(e)


def from_json(data) -> Element:
    match data:
        case ["atom", v, i]:
            return Atom(v, i)
        case ["tuple", items]:
            return Tup(tuple(from_json(x) for x in items))
        case ["inj", i, x]:
            return Inj(i, from_json(x))
        case ["fold", x]:
            return Fold(from_json(x))
        case ["nu", layers]:
            return NuElem(tuple(from_json(x) for x in layers))
        case ["ref", i]:
            return NuRef(i)
    raise ValueError(f"not an element: {data!r}")


def show(e: Element) -> str:
    match e:
        case Atom(v, i):
            return f"{v}{i}"
        case Tup(items):
            return "(" + ", ".join(show(x) for x in items) + ")"
        case Inj(i, x):
            return f"in{i} {show(x)}"
        case Fold(x):
            return f"[{show(x)}]"
        case NuElem(layers):
            return "nu{" + "; ".join(f"{k}: {show(x)}" for k, x in enumerate(layers)) + "}"
        case NuRef(i):
            return f"@{i}"
    raise TypeError(e)


def _rebuild(e: Element, f: Callable[[Element], Element]) -> Element:
    """Apply ``f`` to the immediate children of a finite constructor."""
    match e:
        case Tup(items):
            new = tuple(f(x) for x in items)
            return e if all(a is b for a, b in zip(new, items)) else Tup(new)
        case Inj(i, x):
            y = f(x)
            return e if y is x else Inj(i, y)
        case Fold(x):
            y = f(x)
            return e if y is x else Fold(y)
    return e


# ------------------------------------------------------------ rational graphs
#
# A rational tree is handled as an automaton whose states each carry one
# constructor; children are references to states, or inline subtrees that
# contain no references.  Bisimilar states denote equal trees, so Moore
# partition refinement yields the minimal automaton, which is unique.


def _has_ref(e: Element) -> bool:
    return bool(_refs(e))


def _split(layers: Sequence[Element], hook) -> list[Element]:
    """States for ``layers`` (state ``i`` is layer ``i``), with embedded
    graphs flattened and every referencing constructor in its own state."""
    states: list = [None] * len(layers)

    def child(e, shift):
        match e:
            case Atom():
                r = hook(e) if hook else None
                return e if r is None else r
            case NuRef(i):
                return NuRef(i + shift)
            case NuElem(ls):
                off = len(states)
                states.extend([None] * len(ls))
                for k, x in enumerate(ls):
                    states[off + k] = root(x, off)
                return NuRef(off)
        new = _rebuild(e, lambda x: child(x, shift))
        if not _has_ref(new):
            return new
        k = len(states)
        states.append(new)
        return NuRef(k)

    def root(e, shift):
        if isinstance(e, (Tup, Inj, Fold)):
            return _rebuild(e, lambda x: child(x, shift))
        return child(e, shift)

    for i, x in enumerate(layers):
        states[i] = root(x, 0)
    return states


def _resolve_epsilon(states: list) -> None:
    """Replace bare-reference states by their targets' contents; a loop of
    bare references becomes a single self-referencing state."""
    target: dict = {}
    for i in range(len(states)):
        path = []
        j = i
        while isinstance(states[j], NuRef) and j not in target and j not in path:
            path.append(j)
            j = states[j].index
        if j in target:
            end = target[j]
        elif j in path:
            end = j
            states[j] = NuRef(j)
        else:
            end = j
        for k in path:
            target[k] = end
    for k, end in target.items():
        if k != end:
            states[k] = states[end]
    for i, s in enumerate(states):
        if not isinstance(s, NuRef):
            states[i] = _map_refs(s, lambda r: NuRef(target.get(r, r)))


def _map_refs(e: Element, f: Callable[[int], Element]) -> Element:
    if isinstance(e, NuRef):
        return f(e.index)
    return _rebuild(e, lambda x: _map_refs(x, f))


def _refs(e: Element) -> list[int]:
    out = []
    stack = [e]
    while stack:
        x = stack.pop()
        match x:
            case NuRef(i):
                out.append(i)
            case Tup(items):
                stack.extend(items)
            case Inj(_, y) | Fold(y):
                stack.append(y)
    return out


def _acyclic_part(succ: Mapping[int, set]) -> set:
    """Nodes from which no cycle is reachable."""
    done: set = set()
    pending = {c: len(s) for c, s in succ.items()}
    preds: dict = {c: [] for c in succ}
    for c, s in succ.items():
        for d in s:
            preds[d].append(c)
    queue = [c for c, n in pending.items() if n == 0]
    while queue:
        c = queue.pop()
        done.add(c)
        for p in preds[c]:
            pending[p] -= 1
            if pending[p] == 0:
                queue.append(p)
    return done


def _on_cycles(succ: Mapping[int, set]) -> set:
    """Nodes lying on some cycle (iterative Tarjan)."""
    index: dict = {}
    low: dict = {}
    stack: list = []
    on_stack: set = set()
    out: set = set()
    for start in succ:
        if start in index:
            continue
        index[start] = low[start] = len(index)
        stack.append(start)
        on_stack.add(start)
        work = [(start, iter(sorted(succ[start])))]
        while work:
            v, it = work[-1]
            w = next(it, None)
            if w is not None:
                if w not in index:
                    index[w] = low[w] = len(index)
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(sorted(succ[w]))))
                elif w in on_stack:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                if len(comp) > 1 or v in succ[v]:
                    out.update(comp)
    return out


class _Automaton:
    """Minimal automaton of a family of states; extracts canonical members.

    A state that reaches no cycle denotes a finite tree and is written out
    as a plain tree.  A state on a cycle becomes a ``NuElem`` graph whose
    states are numbered breadth-first from the root; any other state is a
    plain constructor over the canonical members it points to.
    """

    def __init__(self, states: list, minimal: bool = False):
        succ = {i: set(_refs(s)) for i, s in enumerate(states)}
        finite = _acyclic_part(succ)
        trees: dict = {}

        def plain(i):
            if i not in trees:
                trees[i] = _map_refs(states[i], plain)
            return trees[i]

        self.trees = {i: plain(i) for i in finite}
        rest = [i for i in range(len(states)) if i not in finite]
        body = {i: _map_refs(states[i], lambda j: self.trees.get(j, NuRef(j))) for i in rest}
        cls = {i: i for i in rest} if minimal else _partition(body)
        self.cls = cls
        self.rep: dict = {}
        for i in rest:
            self.rep.setdefault(cls[i], i)
        self.content = {c: _map_refs(body[i], lambda j: NuRef(cls[j])) for c, i in self.rep.items()}
        self.cyclic = _on_cycles({c: set(_refs(s)) for c, s in self.content.items()})
        self.members: dict = {}

    def member(self, i: int) -> Element:
        if i in self.trees:
            return self.trees[i]
        return self._of_class(self.cls[i])

    def _of_class(self, c: int) -> Element:
        if c not in self.members:
            if c in self.cyclic:
                self.members[c] = self._graph(c)
            else:
                self.members[c] = _map_refs(self.content[c], self._of_class)
        return self.members[c]

    def _graph(self, root: int) -> NuElem:
        order = {root: 0}
        queue = [root]

        def renumber(k):
            if k not in order:
                order[k] = len(order)
                queue.append(k)
            return NuRef(order[k])

        out = []
        while len(out) < len(queue):
            out.append(_map_refs(self.content[queue[len(out)]], renumber))
        return NuElem(tuple(out))


def _partition(body: Mapping[int, Element]) -> dict:
    cls = {i: 0 for i in body}
    count = 1
    while True:
        sigs: dict = {}
        new = {i: sigs.setdefault((cls[i], _map_refs(s, lambda j: NuRef(cls[j]))), len(sigs))
               for i, s in body.items()}
        if len(sigs) == count:
            return new
        cls, count = new, len(sigs)


def close_graph(layers: Sequence[Element], hook=None) -> list[Element]:
    """Canonical member for each state of a coalgebra given by layers.

    Layers may reference each other with ``NuRef``, embed other ``NuElem``
    values, and contain atoms that ``hook`` turns into references.  A state
    whose unfolding is finite comes back as a plain tree.
    """
    states = _split(layers, hook)
    _resolve_epsilon(states)
    a = _Automaton(states)
    return [a.member(i) for i in range(len(layers))]


def extract_state(e: NuElem, index: int) -> Element:
    """The member rooted at state ``index`` of a canonical ``e``."""
    if index == 0:
        return e
    return _Automaton(list(e.layers), minimal=True).member(index)


def node(e: Element) -> Element:
    """Canonical form of a constructor applied to canonical members.  It
    can denote a cyclic tree only through a direct ``NuElem`` child."""
    match e:
        case Tup(items) if any(isinstance(x, NuElem) for x in items):
            return canonical(e)
        case Inj(_, x) | Fold(x) if isinstance(x, NuElem):
            return canonical(e)
    return e


def unfold_element(e: Element) -> Element:
    """Expose the root layer, with references turned back into members.  A
    plain tree is its own unfolding."""
    if not isinstance(e, NuElem):
        return e
    cache: dict = {}

    def walk(x):
        if isinstance(x, NuRef):
            if x.index not in cache:
                cache[x.index] = extract_state(e, x.index)
            return cache[x.index]
        return _rebuild(x, walk)

    return walk(e.layers[0])


def canonical(e: Element) -> Element:
    """The canonical form of any element, which may embed non-minimal
    ``NuElem`` graphs or expose a cyclic root as a plain constructor."""
    return close_graph([e])[0]


def fold_element(layer: Element) -> Element:
    """Inverse of :func:`unfold_element`: wrap a layer as a new root."""
    return canonical(layer)


def relabel(e: Element, mapping: Mapping[Atom, Element]) -> Element:
    """Replace atoms by elements; rational members are re-minimised."""
    match e:
        case Atom():
            return mapping.get(e, e)
        case NuRef():
            return e
        case NuElem(layers):
            new = [relabel(x, mapping) for x in layers]
            if all(a is b for a, b in zip(new, layers)):
                return e
            return close_graph(new)[0]
    return node(_rebuild(e, lambda x: relabel(x, mapping)))


def atoms_of(e: Element) -> set[Atom]:
    out = set()
    stack = [e]
    while stack:
        x = stack.pop()
        match x:
            case Atom():
                out.add(x)
            case Tup(items):
                stack.extend(items)
            case Inj(_, y) | Fold(y):
                stack.append(y)
            case NuElem(layers):
                stack.extend(layers)
    return out
