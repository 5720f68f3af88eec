"""mu-terms: variables, n-ary products and coproducts, mu and nu binders.

A term in a context ``[X1, ..., Xn]`` denotes an n-ary functor; variables
double as projections.  ``Prod()`` is the terminal object 1 and
``Coprod()`` the initial object 0.

Textual form (``.mu`` files)::

    (var X) | (prod t*) | (sum t*) | (mu X t) | (nu X t)     ; comment

Equation systems (``.eqs`` files) hold one equation per line::

    param Y;
    X =mu[1] (sum (prod) (var X))
"""
from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union


class MuSyntaxError(ValueError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {msg}")
        self.line = line
        self.col = col


class SystemError_(ValueError):
    """Ill-formed equation system."""


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Prod:
    items: tuple = ()


@dataclass(frozen=True)
class Coprod:
    items: tuple = ()


@dataclass(frozen=True)
class Mu:
    var: str
    body: "MuTerm"


@dataclass(frozen=True)
class Nu:
    var: str
    body: "MuTerm"


MuTerm = Union[Var, Prod, Coprod, Mu, Nu]
Binder = (Mu, Nu)

ONE = Prod()
ZERO = Coprod()


def prod(*items: MuTerm) -> Prod:
    return Prod(tuple(items))


def coprod(*items: MuTerm) -> Coprod:
    return Coprod(tuple(items))


def free_vars(t: MuTerm) -> tuple[str, ...]:
    """Free variables in order of first occurrence."""
    seen: dict[str, None] = {}

    def go(t, bound):
        match t:
            case Var(n):
                if n not in bound:
                    seen.setdefault(n)
            case Prod(items) | Coprod(items):
                for s in items:
                    go(s, bound)
            case Mu(v, b) | Nu(v, b):
                go(b, bound | {v})

    go(t, frozenset())
    return tuple(seen)


def all_names(t: MuTerm) -> set[str]:
    out = set()
    for s in subterms(t):
        match s:
            case Var(n):
                out.add(n)
            case Mu(v, _) | Nu(v, _):
                out.add(v)
    return out


def subterms(t: MuTerm) -> Iterator[MuTerm]:
    stack = [t]
    while stack:
        s = stack.pop()
        yield s
        match s:
            case Prod(items) | Coprod(items):
                stack.extend(reversed(items))
            case Mu(_, b) | Nu(_, b):
                stack.append(b)


def size(t: MuTerm) -> int:
    return sum(1 for _ in subterms(t))


_SUFFIX = re.compile(r"^(.*?)(\d*)$")


def fresh_name(base: str, avoid: set[str]) -> str:
    stem = _SUFFIX.match(base).group(1) or base
    if base not in avoid:
        return base
    k = 1
    while f"{stem}{k}" in avoid:
        k += 1
    return f"{stem}{k}"


def rename_free(t: MuTerm, old: str, new: str) -> MuTerm:
    """Rename free occurrences of ``old``; the caller guarantees no capture."""
    match t:
        case Var(n):
            return Var(new) if n == old else t
        case Prod(items):
            return Prod(tuple(rename_free(s, old, new) for s in items))
        case Coprod(items):
            return Coprod(tuple(rename_free(s, old, new) for s in items))
        case Mu(v, b) | Nu(v, b):
            if v == old:
                return t
            return type(t)(v, rename_free(b, old, new))
    raise TypeError(t)


def freshen(t: MuTerm, avoid: Iterable[str] = ()) -> MuTerm:
    """Rename binders so none clashes with ``avoid``, a free variable, or an
    enclosing binder.  Binders on disjoint branches may share a name."""
    avoid = set(avoid) | set(free_vars(t))

    def go(t, scope: frozenset):
        match t:
            case Var():
                return t
            case Prod(items):
                return Prod(tuple(go(s, scope) for s in items))
            case Coprod(items):
                return Coprod(tuple(go(s, scope) for s in items))
            case Mu(v, b) | Nu(v, b):
                if v in scope:
                    used = scope | all_names(b)
                    nv = fresh_name(v, set(used))
                    b = rename_free(b, v, nv)
                    v = nv
                return type(t)(v, go(b, scope | {v}))
        raise TypeError(t)

    return go(t, frozenset(avoid))


def substitute(t: MuTerm, var: str, s: MuTerm) -> MuTerm:
    """Capture-avoiding ``t[s/var]`` that keeps binder names distinct along
    every binder path."""
    fv_s = set(free_vars(s))
    outer = frozenset(free_vars(t)) - {var}
    names = all_names(t) | all_names(s) | {var}

    def go(t, scope: frozenset):
        match t:
            case Var(n):
                return freshen(s, scope | outer) if n == var else t
            case Prod(items):
                return Prod(tuple(go(u, scope) for u in items))
            case Coprod(items):
                return Coprod(tuple(go(u, scope) for u in items))
            case Mu(v, b) | Nu(v, b):
                if v == var:
                    return t
                if v in fv_s:
                    nv = fresh_name(v, names | scope)
                    names.add(nv)
                    b = rename_free(b, v, nv)
                    v = nv
                return type(t)(v, go(b, scope | {v}))
        raise TypeError(t)

    return go(t, frozenset())


def substitute_many(t: MuTerm, sub: dict[str, MuTerm]) -> MuTerm:
    """Sequential substitution; intended for closed-in-parameter images."""
    for v, s in sub.items():
        t = substitute(t, v, s)
    return t


def alpha_eq(a: MuTerm, b: MuTerm) -> bool:
    def go(a, b, ea: dict, eb: dict, depth: int) -> bool:
        match a, b:
            case Var(x), Var(y):
                if x in ea or y in eb:
                    return ea.get(x) == eb.get(y)
                return x == y
            case (Prod(xs), Prod(ys)) | (Coprod(xs), Coprod(ys)):
                if type(a) is not type(b) or len(xs) != len(ys):
                    return False
                return all(go(x, y, ea, eb, depth) for x, y in zip(xs, ys))
            case (Mu(x, s), Mu(y, u)) | (Nu(x, s), Nu(y, u)):
                if type(a) is not type(b):
                    return False
                return go(s, u, {**ea, x: depth}, {**eb, y: depth}, depth + 1)
        return False

    return go(a, b, {}, {}, 0)


def binder_path_ok(t: MuTerm) -> bool:
    """Barendregt check: no binder repeats an enclosing binder or a free name."""
    fv = set(free_vars(t))

    def go(t, scope):
        match t:
            case Var():
                return True
            case Prod(items) | Coprod(items):
                return all(go(s, scope) for s in items)
            case Mu(v, b) | Nu(v, b):
                return v not in scope and v not in fv and go(b, scope | {v})
        return False

    return go(t, frozenset())


# ---------------------------------------------------------------- text format

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_TOKEN = re.compile(r"\s+|;[^\n]*|\(|\)|[^\s();]+")


def _tokens(text: str):
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        tok = m.group(0)
        if not tok.isspace() and not tok.startswith(";"):
            yield tok, line, col
        nl = tok.count("\n")
        if nl:
            line += nl
            col = len(tok) - tok.rfind("\n")
        else:
            col += len(tok)
        pos = m.end()
    yield None, line, col


class _Parser:
    def __init__(self, text: str):
        self.toks = list(_tokens(text))
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def next(self):
        tok = self.toks[self.i]
        if tok[0] is not None:
            self.i += 1
        return tok

    def expect(self, want: str):
        tok, line, col = self.next()
        if tok != want:
            found = "end of input" if tok is None else repr(tok)
            raise MuSyntaxError(f"expected {want!r}, found {found} (unbalanced?)", line, col)

    def name(self) -> str:
        tok, line, col = self.next()
        if tok is None or not _NAME.match(tok):
            raise MuSyntaxError(f"expected a variable name, found {tok!r}", line, col)
        return tok

    def term(self) -> MuTerm:
        self.expect("(")
        head, line, col = self.next()
        match head:
            case "var":
                t = Var(self.name())
            case "prod" | "sum":
                items = []
                while self.peek()[0] == "(":
                    items.append(self.term())
                t = (Prod if head == "prod" else Coprod)(tuple(items))
            case "mu" | "nu":
                v = self.name()
                t = (Mu if head == "mu" else Nu)(v, self.term())
            case None:
                raise MuSyntaxError("unexpected end of input (unbalanced)", line, col)
            case _:
                raise MuSyntaxError(f"unknown form {head!r}", line, col)
        self.expect(")")
        return t


def parse(text: str) -> MuTerm:
    """Parse one term; duplicate binder names are freshened with a warning."""
    p = _Parser(text)
    t = p.term()
    tok, line, col = p.peek()
    if tok is not None:
        raise MuSyntaxError(f"trailing input {tok!r}", line, col)
    if not binder_path_ok(t):
        warnings.warn("duplicate binder names renamed apart", stacklevel=2)
        t = freshen(t)
    return t


def to_text(t: MuTerm) -> str:
    parts: list[str] = []

    def go(t):
        match t:
            case Var(n):
                parts.append(f"(var {n})")
            case Prod(items) | Coprod(items):
                parts.append("(prod" if isinstance(t, Prod) else "(sum")
                for s in items:
                    parts.append(" ")
                    go(s)
                parts.append(")")
            case Mu(v, b) | Nu(v, b):
                parts.append(f"({'mu' if isinstance(t, Mu) else 'nu'} {v} ")
                go(b)
                parts.append(")")

    go(t)
    return "".join(parts)


def dump(t: MuTerm) -> str:
    """Canonical ``.mu`` file contents."""
    return to_text(t) + "\n"


# ----------------------------------------------------------- equation systems

MU, NU = "mu", "nu"


@dataclass(frozen=True)
class Equation:
    var: str
    kind: str
    priority: int
    rhs: MuTerm


@dataclass(frozen=True)
class EquationSystem:
    equations: tuple[Equation, ...]
    params: tuple[str, ...] = ()
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {e.var: e for e in self.equations})
        errs = self.violations()
        if errs:
            raise SystemError_("; ".join(errs))

    def violations(self) -> list[str]:
        errs = []
        lhs = [e.var for e in self.equations]
        if len(set(lhs)) != len(lhs):
            errs.append("duplicate left-hand side")
        if len(set(self.params)) != len(self.params):
            errs.append("duplicate parameter")
        clash = set(lhs) & set(self.params)
        if clash:
            errs.append(f"parameter also defined by an equation: {sorted(clash)}")
        known = set(lhs) | set(self.params)
        for e in self.equations:
            if e.kind not in (MU, NU):
                errs.append(f"{e.var}: unknown binder kind {e.kind!r}")
            elif e.priority < 0 or (e.priority % 2 == 1) != (e.kind == MU):
                errs.append(f"{e.var}: kind {e.kind} does not match priority {e.priority}")
            for n in free_vars(e.rhs):
                if n not in known:
                    errs.append(f"{e.var}: dangling variable {n}")
        return errs

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(e.var for e in self.equations)

    def __getitem__(self, var: str) -> Equation:
        return self._index[var]


def equation(var: str, kind: str, rhs: MuTerm, priority: int | None = None) -> Equation:
    """Convenience constructor; default priority 1 for mu and 0 for nu."""
    if priority is None:
        priority = 1 if kind == MU else 0
    return Equation(var, kind, priority, rhs)


_EQ = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(mu|nu)\[(\d+)\]\s*(.*)$")
_PARAM = re.compile(r"^\s*param\s+([A-Za-z_][A-Za-z0-9_]*)\s*;")


def parse_system(text: str) -> EquationSystem:
    eqs, params = [], []
    for ln, raw in enumerate(text.splitlines(), 1):
        if m := _PARAM.match(raw):
            params.append(m.group(1))
            continue
        body = raw.split(";", 1)[0]
        if not body.strip():
            continue
        m = _EQ.match(body)
        if not m:
            raise MuSyntaxError("expected 'X =mu[P] TERM', 'X =nu[P] TERM' or 'param X;'", ln, 1)
        var, kind, prio, rhs = m.groups()
        try:
            term = parse(rhs)
        except MuSyntaxError as exc:
            raise MuSyntaxError(str(exc).split(": ", 1)[1], ln, m.start(4) + exc.col) from None
        eqs.append(Equation(var, kind, int(prio), term))
    return EquationSystem(tuple(eqs), tuple(params))


def dump_system(sys: EquationSystem) -> str:
    lines = [f"param {p};" for p in sys.params]
    lines += [f"{e.var} ={e.kind}[{e.priority}] {to_text(e.rhs)}" for e in sys.equations]
    return "\n".join(lines) + "\n"
