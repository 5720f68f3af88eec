"""mu-terms as functors on finite sets.

``evaluate`` interprets a term under an environment of finite sets.  Least
fixed points are reached by the Kleene chain from the empty set; greatest
fixed points by the chain from the one-point set, following the projections
between consecutive stages until one is a bijection.  Whether the answer is
finite is settled beforehand by :mod:`mugames.finiteness`, so evaluation
never chases an infinite chain.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from .elements import (
    Atom,
    Element,
    Fold,
    Inj,
    NuElem,
    NuRef,
    Tup,
    canonical,
    close_graph,
    elem_key,
    fold_element,
    node,
    relabel,
    sort_elements,
    to_json,
    unfold_element,
)
from .finiteness import (
    INFINITE,
    Analysis,
    Certificate,
    UnboundVariable,
    _Bool,
    finiteness_analysis,
)
from .terms import Coprod, Mu, MuTerm, Nu, Prod, Var, free_vars, substitute

DEFAULT_BUDGET = 64
DEFAULT_MAX_ELEMENTS = 200_000


class BudgetExhausted(RuntimeError):
    """A fixed-point chain did not settle within the iteration budget."""


class Unsupported(ValueError):
    """Operation needs a finite semantics."""


@dataclass(frozen=True)
class SetValue:
    elements: tuple | None
    certificate: Certificate | None = None

    @classmethod
    def finite(cls, elements) -> "SetValue":
        return cls(sort_elements(elements))

    @classmethod
    def infinite(cls, certificate: Certificate) -> "SetValue":
        return cls(None, certificate)

    @property
    def is_finite(self) -> bool:
        return self.elements is not None

    @property
    def verdict(self) -> str:
        return "finite" if self.is_finite else "infinite"

    @property
    def cardinality(self) -> int | None:
        return None if self.elements is None else len(self.elements)

    def __len__(self):
        if self.elements is None:
            raise Unsupported("infinite set has no len()")
        return len(self.elements)

    def __iter__(self):
        if self.elements is None:
            raise Unsupported("cannot enumerate an infinite set")
        return iter(self.elements)

    def __contains__(self, e):
        return self.elements is not None and e in set(self.elements)

    def to_json(self, cap: int = 1000) -> dict:
        out: dict = {"verdict": self.verdict}
        if self.is_finite:
            out["cardinality"] = len(self.elements)
            if len(self.elements) <= cap:
                out["elements"] = [to_json(e) for e in self.elements]
            else:
                out["elements_truncated"] = True
        else:
            out["cardinality"] = "infinite"
            out["certificate"] = str(self.certificate)
        return out


def atoms(var: str, n: int) -> tuple[Atom, ...]:
    return tuple(Atom(var, i) for i in range(n))


def normalize_env(env: Mapping | None) -> dict[str, tuple]:
    """Accept sizes or explicit element collections."""
    out = {}
    for v, s in (env or {}).items():
        out[v] = atoms(v, s) if isinstance(s, int) else tuple(dict.fromkeys(s))
    return out


class _Overflow(Exception):
    pass


class _Evaluator:
    def __init__(self, budget: int, max_elements: int):
        self.budget = budget
        self.max_elements = max_elements
        self.bools = _Bool()
        self.fresh = itertools.count()

    def nonempty(self, t, env) -> bool:
        return self.bools.val(t, {v: bool(env[v]) for v in self.bools.free(t)})

    def ev(self, t: MuTerm, env: Mapping[str, tuple]) -> tuple:
        match t:
            case Var(n):
                try:
                    return env[n]
                except KeyError:
                    raise UnboundVariable(n) from None
            case Prod(items):
                # An empty factor short-circuits before any sibling is built.
                if not all(self.nonempty(s, env) for s in items):
                    return ()
                parts = [self.ev(s, env) for s in items]
                total = 1
                for p in parts:
                    total *= len(p)
                if total > self.max_elements:
                    raise _Overflow
                return tuple(node(Tup(c)) for c in itertools.product(*parts))
            case Coprod(items):
                out = []
                for i, s in enumerate(items):
                    out.extend(node(Inj(i, e)) for e in self.ev(s, env))
                if len(out) > self.max_elements:
                    raise _Overflow
                return tuple(out)
            case Mu(v, b):
                return self.mu_chain({v: b}, env)[v]
            case Nu(v, b):
                if v not in self.bools.free(b):
                    return self.ev(b, env)
                return self.nu_chain({v: b}, env)[v]
        raise TypeError(t)

    def mu_chain(self, bodies: Mapping[str, MuTerm], env) -> dict[str, tuple]:
        cur = {x: () for x in bodies}
        for _ in range(self.budget + 1):
            scope = {**env, **cur}
            nxt = {}
            for x, b in bodies.items():
                nxt[x] = tuple(dict.fromkeys(node(Fold(e)) for e in self.ev(b, scope)))
            same = True
            for x in bodies:
                old, new = set(cur[x]), set(nxt[x])
                if not old <= new:
                    raise AssertionError(f"Kleene chain for {x} is not increasing")
                same &= old == new
            if same:
                return cur
            cur = nxt
        raise BudgetExhausted(f"mu-chain for {sorted(bodies)} exceeded {self.budget} steps")

    def nu_chain(self, bodies: Mapping[str, MuTerm], env) -> dict[str, tuple]:
        uid = next(self.fresh)

        def name(x, n):
            return f"{x}#{uid}.{n}"

        prev = {x: (None,) for x in bodies}  # stage 0 is the one-point set
        tokens = {x: (Atom(name(x, 0), 0),) for x in bodies}
        cur = {x: tuple(dict.fromkeys(self.ev(b, {**env, **tokens}))) for x, b in bodies.items()}
        proj = {x: [0] * len(cur[x]) for x in bodies}
        level = 0
        while not all(len(cur[x]) == len(prev[x]) == len(set(proj[x])) for x in bodies):
            level += 1
            if level > self.budget:
                raise BudgetExhausted(f"nu-chain for {sorted(bodies)} exceeded {self.budget} steps")
            tokens = {x: tuple(Atom(name(x, level), i) for i in range(len(cur[x]))) for x in bodies}
            back = {
                Atom(name(x, level), i): Atom(name(x, level - 1), proj[x][i])
                for x in bodies
                for i in range(len(cur[x]))
            }
            index = {x: {e: i for i, e in enumerate(cur[x])} for x in bodies}
            nxt, nproj = {}, {}
            for x, b in bodies.items():
                nxt[x] = tuple(dict.fromkeys(self.ev(b, {**env, **tokens})))
                try:
                    nproj[x] = [index[x][relabel(e, back)] for e in nxt[x]]
                except KeyError:
                    raise AssertionError(f"stage projection for {x} left the previous stage") from None
            prev, cur, proj = cur, nxt, nproj

        # cur[x] = F(prev) and proj is a bijection cur -> prev: read it backwards
        # as a coalgebra on the tokens of ``prev``.
        order = list(bodies)
        offset, k = {}, 0
        for x in order:
            offset[x] = k
            k += len(prev[x])
        layers: list = [None] * k
        for x in order:
            for i, j in enumerate(proj[x]):
                layers[offset[x] + j] = cur[x][i]
        stage = {name(x, level): x for x in order}

        def hook(a: Atom):
            x = stage.get(a.var)
            return None if x is None else NuRef(offset[x] + a.index)

        members = close_graph(layers, hook)
        out = {}
        for x in order:
            mine = members[offset[x]: offset[x] + len(prev[x])]
            if len(set(mine)) != len(mine):
                raise AssertionError(f"stabilised stage for {x} is not a final coalgebra")
            out[x] = tuple(mine)
        return out


def _sizes(env: Mapping[str, tuple]) -> dict[str, int]:
    return {v: len(s) for v, s in env.items()}


def evaluate(
    t: MuTerm,
    env: Mapping | None = None,
    budget: int = DEFAULT_BUDGET,
    *,
    certify: bool = True,
    max_elements: int = DEFAULT_MAX_ELEMENTS,
) -> SetValue:
    """The set denoted by ``t``.

    ``env`` maps each free variable to a size or to a collection of elements.
    With ``certify`` (the default) infinite sets are recognised by the
    finiteness analysis and returned with its certificate; without it the
    raw chains run and :class:`BudgetExhausted` signals non-termination.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    env = normalize_env(env)
    missing = [v for v in free_vars(t) if v not in env]
    if missing:
        raise UnboundVariable(", ".join(missing))
    if certify:
        verdict = finiteness_analysis(t, _sizes(env))
        if verdict.verdict == INFINITE:
            return SetValue.infinite(verdict.certificate)
    try:
        return SetValue.finite(_Evaluator(budget, max_elements).ev(t, env))
    except _Overflow:
        raise BudgetExhausted(f"more than {max_elements} elements") from None


def analyse(t: MuTerm, env: Mapping | None = None) -> Analysis:
    return finiteness_analysis(t, _sizes(normalize_env(env)))


def simultaneous_fixpoint(
    bodies: Mapping[str, MuTerm],
    kind: str,
    env: Mapping | None = None,
    budget: int = DEFAULT_BUDGET,
    max_elements: int = DEFAULT_MAX_ELEMENTS,
) -> dict[str, tuple]:
    """Reference semantics of an all-mu or all-nu system: every component's
    chain advances in lockstep.  Raises BudgetExhausted if it never settles."""
    env = normalize_env(env)
    ev = _Evaluator(budget, max_elements)
    try:
        chain = ev.mu_chain(bodies, env) if kind == "mu" else ev.nu_chain(bodies, env)
    except _Overflow:
        raise BudgetExhausted(f"more than {max_elements} elements") from None
    return {x: sort_elements(s) for x, s in chain.items()}


# ------------------------------------------------------------------ functions

@dataclass(frozen=True)
class FiniteFunction:
    domain: tuple
    codomain: tuple
    mapping: Mapping = field(hash=False)

    def __post_init__(self):
        dom, cod = set(self.domain), set(self.codomain)
        if set(self.mapping) != dom:
            raise ValueError("mapping is not total on the domain")
        for x, y in self.mapping.items():
            if y not in cod:
                raise ValueError(f"image of {x!r} lies outside the codomain")

    @classmethod
    def identity(cls, elements: Sequence) -> "FiniteFunction":
        es = tuple(elements)
        return cls(es, es, {e: e for e in es})

    @classmethod
    def from_callable(cls, domain: Sequence, codomain: Sequence, f: Callable) -> "FiniteFunction":
        return cls(tuple(domain), tuple(codomain), {x: f(x) for x in domain})

    def __call__(self, x):
        return self.mapping[x]

    def then(self, g: "FiniteFunction") -> "FiniteFunction":
        """``g`` after ``self``."""
        if set(self.codomain) != set(g.domain):
            raise ValueError("functions do not compose")
        return FiniteFunction(self.domain, g.codomain, {x: g(y) for x, y in self.mapping.items()})

    def is_injective(self) -> bool:
        return len(set(self.mapping.values())) == len(self.mapping)

    def is_bijection(self) -> bool:
        return self.is_injective() and len(self.domain) == len(set(self.codomain))

    def inverse(self) -> "FiniteFunction":
        if not self.is_bijection():
            raise ValueError("not a bijection")
        return FiniteFunction(self.codomain, self.domain, {y: x for x, y in self.mapping.items()})

    def same_as(self, other: "FiniteFunction") -> bool:
        return (set(self.domain) == set(other.domain)
                and set(self.codomain) == set(other.codomain)
                and dict(self.mapping) == dict(other.mapping))


class _GraphVar:
    """A nu-bound variable while a rational member is being mapped."""

    __slots__ = ("binder", "fns")

    def __init__(self, binder, fns):
        self.binder = binder
        self.fns = fns


class _Graph:
    """Coalgebra under construction: one state per (member, nu-binder)."""

    def __init__(self):
        self.layers: list = []
        self.memo: dict = {}
        self.work: list = []

    def ref(self, member: Element, binder: Nu, fns) -> NuRef:
        key = (member, id(binder))
        if key not in self.memo:
            self.memo[key] = len(self.layers)
            self.layers.append(None)
            self.work.append((member, binder, fns, self.memo[key]))
        return NuRef(self.memo[key])


def fmap(t: MuTerm, e: Element, fns: Mapping[str, Callable[[Element], Element]]) -> Element:
    """Action of ``t`` on functions: ``e`` is a member of ``t`` at the domains
    of ``fns``; the result is its image at the codomains.  Variables absent
    from ``fns`` are mapped by the identity."""
    return _walk(t, e, fns, None)


def _walk(t, e, fns, graph: _Graph | None):
    match t:
        case Var(x):
            f = fns.get(x)
            if isinstance(f, _GraphVar):
                return graph.ref(e, f.binder, f.fns)
            return e if f is None else f(e)
        case Nu():
            if graph is None:
                return _map_rational(t, e, fns)
            return graph.ref(e, t, fns)
    # A rational member is read one layer at a time.
    e = unfold_element(e)
    match t:
        case Prod(items):
            return node(Tup(tuple(_walk(s, x, fns, graph) for s, x in zip(items, e.items, strict=True))))
        case Coprod(items):
            return node(Inj(e.index, _walk(items[e.index], e.item, fns, graph)))
        case Mu(x, b):
            def rec(el):
                return _walk(t, el, fns, graph)
            return node(Fold(_walk(b, e.item, {**fns, x: rec}, graph)))
    raise TypeError(t)


def _map_rational(t: Nu, e: Element, fns) -> Element:
    g = _Graph()
    g.ref(e, t, fns)
    while g.work:
        member, binder, bfns, slot = g.work.pop()
        inner = {**bfns, binder.var: _GraphVar(binder, bfns)}
        g.layers[slot] = _walk(binder.body, unfold_element(member), inner, g)
    return close_graph(g.layers)[0]


def eval_on_morphism(
    t: MuTerm, fs: Mapping[str, FiniteFunction], budget: int = DEFAULT_BUDGET
) -> FiniteFunction:
    """The function ``t(fs)`` between ``t`` at the domains and the codomains."""
    missing = [v for v in free_vars(t) if v not in fs]
    if missing:
        raise UnboundVariable(", ".join(missing))
    dom = evaluate(t, {v: f.domain for v, f in fs.items()}, budget)
    cod = evaluate(t, {v: f.codomain for v, f in fs.items()}, budget)
    if not (dom.is_finite and cod.is_finite):
        raise Unsupported("functorial action needs finite semantics on both sides")
    calls = {v: f.__call__ for v, f in fs.items()}
    return FiniteFunction(dom.elements, cod.elements, {e: fmap(t, e, calls) for e in dom.elements})


def fold(t: Mu, env: Mapping | None = None, budget: int = DEFAULT_BUDGET) -> FiniteFunction:
    """Structure map of the initial algebra: ``b[t/X] -> t``."""
    if not isinstance(t, Mu):
        raise TypeError("fold needs a mu-term")
    unrolled = evaluate(substitute(t.body, t.var, t), env, budget)
    whole = evaluate(t, env, budget)
    if not (unrolled.is_finite and whole.is_finite):
        raise Unsupported("fold needs finite semantics")
    return FiniteFunction(unrolled.elements, whole.elements, {e: node(Fold(e)) for e in unrolled.elements})


def unfold(t: Nu, env: Mapping | None = None, budget: int = DEFAULT_BUDGET) -> FiniteFunction:
    """Structure map of the final coalgebra: ``t -> b[t/X]``."""
    if not isinstance(t, Nu):
        raise TypeError("unfold needs a nu-term")
    whole = evaluate(t, env, budget)
    unrolled = evaluate(substitute(t.body, t.var, t), env, budget)
    if not (unrolled.is_finite and whole.is_finite):
        raise Unsupported("unfold needs finite semantics")
    # Members are canonical trees, so the exposed layer is re-canonicalised.
    return FiniteFunction(whole.elements, unrolled.elements,
                          {e: canonical(unfold_element(e)) for e in whole.elements})


def unfold_inverse(t: Nu, env: Mapping | None = None, budget: int = DEFAULT_BUDGET) -> FiniteFunction:
    """``b[t/X] -> t``, built independently of :func:`unfold`."""
    whole = evaluate(t, env, budget)
    unrolled = evaluate(substitute(t.body, t.var, t), env, budget)
    if not (unrolled.is_finite and whole.is_finite):
        raise Unsupported("needs finite semantics")
    return FiniteFunction(unrolled.elements, whole.elements,
                          {e: fold_element(e) for e in unrolled.elements})


def unfold_layer(t: Mu, e: Element) -> Element:
    """Strip one ``Fold``; the inverse of the structure map on one member."""
    layer = unfold_element(e)
    if not isinstance(layer, Fold):
        raise ValueError("not a member of a least fixed point")
    return layer.item


def comparison_maps(
    bodies: Mapping[str, MuTerm],
    kind: str,
    solutions: Mapping[str, MuTerm],
    env: Mapping | None = None,
    budget: int = DEFAULT_BUDGET,
) -> dict[str, FiniteFunction]:
    """Canonical maps between the simultaneous fixed point of a one-kind
    system and the sets denoted by its closed ``solutions``.

    For mu-systems this is the unique algebra morphism out of the
    simultaneous initial algebra, defined by recursion on ``Fold`` layers.
    For nu-systems it is the unique coalgebra morphism from the solutions
    into the simultaneous final coalgebra, built as a rational graph.
    """
    env = normalize_env(env)
    simul = simultaneous_fixpoint(bodies, kind, env, budget)
    solved = {x: evaluate(solutions[x], env, budget) for x in bodies}
    if not all(v.is_finite for v in solved.values()):
        raise Unsupported("comparison needs finite solutions")
    if kind == "mu":
        memo: dict = {}

        def phi(x):
            def go(e):
                key = (x, e)
                if key not in memo:
                    memo[key] = node(Fold(fmap(bodies[x], unfold_element(e).item, fns)))
                return memo[key]
            return go

        fns = {x: phi(x) for x in bodies}
        return {x: FiniteFunction.from_callable(simul[x], solved[x].elements, fns[x]) for x in bodies}

    states: dict = {}
    layers: list = []
    work: list = []

    def register(x):
        def go(e):
            key = (x, e)
            if key not in states:
                states[key] = len(layers)
                layers.append(None)
                work.append(key)
            return Atom(_STATE, states[key])
        return go

    fns = {x: register(x) for x in bodies}
    roots = {(x, e): fns[x](e) for x in bodies for e in solved[x].elements}
    while work:
        x, e = work.pop()
        layers[states[(x, e)]] = fmap(bodies[x], unfold_element(e), fns)

    def hook(a: Atom):
        return NuRef(a.index) if a.var == _STATE else None

    image = close_graph(layers, hook)
    return {
        x: FiniteFunction(solved[x].elements, simul[x],
                          {e: image[roots[(x, e)].index] for e in solved[x].elements})
        for x in bodies
    }


_STATE = "#state"


__all__ = [
    "BudgetExhausted",
    "DEFAULT_BUDGET",
    "FiniteFunction",
    "SetValue",
    "UnboundVariable",
    "Unsupported",
    "analyse",
    "atoms",
    "comparison_maps",
    "elem_key",
    "eval_on_morphism",
    "evaluate",
    "fmap",
    "fold",
    "normalize_env",
    "simultaneous_fixpoint",
    "unfold",
    "unfold_inverse",
]
