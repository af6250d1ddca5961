"""First-order formulas over {K, =} as s-expressions.

Grammar::

    F := (K v1 ... vn) | (= v w) | (not F) | (and F ...) | (or F ...)
       | (implies F G) | (exists v F) | (forall v F)
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import count
from typing import Iterator, Union

from ..errors import ArityError, ParseError

KEYWORDS = frozenset({"K", "=", "not", "and", "or", "implies", "exists", "forall"})
_TOKEN = re.compile(r"\s*(?:(?P<open>\()|(?P<close>\))|(?P<sym>[^\s()]+))")
_VARIABLE = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")


@dataclass(frozen=True)
class K:
    args: tuple[str, ...]

    def __str__(self) -> str:
        return "(K " + " ".join(self.args) + ")"


@dataclass(frozen=True)
class Eq:
    left: str
    right: str

    def __str__(self) -> str:
        return f"(= {self.left} {self.right})"


@dataclass(frozen=True)
class Not:
    body: Formula

    def __str__(self) -> str:
        return f"(not {self.body})"


@dataclass(frozen=True)
class And:
    parts: tuple[Formula, ...]

    def __str__(self) -> str:
        return "(and" + "".join(" " + str(p) for p in self.parts) + ")"


@dataclass(frozen=True)
class Or:
    parts: tuple[Formula, ...]

    def __str__(self) -> str:
        return "(or" + "".join(" " + str(p) for p in self.parts) + ")"


@dataclass(frozen=True)
class Implies:
    left: Formula
    right: Formula

    def __str__(self) -> str:
        return f"(implies {self.left} {self.right})"


@dataclass(frozen=True)
class Exists:
    var: str
    body: Formula

    def __str__(self) -> str:
        return f"(exists {self.var} {self.body})"


@dataclass(frozen=True)
class Forall:
    var: str
    body: Formula

    def __str__(self) -> str:
        return f"(forall {self.var} {self.body})"


Formula = Union[K, Eq, Not, And, Or, Implies, Exists, Forall]
Quantifier = (Exists, Forall)


def free_variables(phi: Formula) -> frozenset[str]:
    if isinstance(phi, K):
        return frozenset(phi.args)
    if isinstance(phi, Eq):
        return frozenset((phi.left, phi.right))
    if isinstance(phi, Not):
        return free_variables(phi.body)
    if isinstance(phi, (And, Or)):
        return frozenset().union(*(free_variables(p) for p in phi.parts))
    if isinstance(phi, Implies):
        return free_variables(phi.left) | free_variables(phi.right)
    if isinstance(phi, Quantifier):
        return free_variables(phi.body) - {phi.var}
    raise TypeError(f"not a formula: {phi!r}")


def all_variables(phi: Formula) -> frozenset[str]:
    if isinstance(phi, (K, Eq)):
        return free_variables(phi)
    if isinstance(phi, Not):
        return all_variables(phi.body)
    if isinstance(phi, (And, Or)):
        return frozenset().union(*(all_variables(p) for p in phi.parts))
    if isinstance(phi, Implies):
        return all_variables(phi.left) | all_variables(phi.right)
    return all_variables(phi.body) | {phi.var}


def is_quantifier_free(phi: Formula) -> bool:
    return quantifier_depth(phi) == 0


def quantifier_depth(phi: Formula) -> int:
    """Largest number of quantifiers nested along one branch."""
    if isinstance(phi, (K, Eq)):
        return 0
    if isinstance(phi, Not):
        return quantifier_depth(phi.body)
    if isinstance(phi, (And, Or)):
        return max((quantifier_depth(p) for p in phi.parts), default=0)
    if isinstance(phi, Implies):
        return max(quantifier_depth(phi.left), quantifier_depth(phi.right))
    return 1 + quantifier_depth(phi.body)


def k_arities(phi: Formula) -> Iterator[int]:
    if isinstance(phi, K):
        yield len(phi.args)
    elif isinstance(phi, Not):
        yield from k_arities(phi.body)
    elif isinstance(phi, (And, Or)):
        for p in phi.parts:
            yield from k_arities(p)
    elif isinstance(phi, Implies):
        yield from k_arities(phi.left)
        yield from k_arities(phi.right)
    elif isinstance(phi, Quantifier):
        yield from k_arities(phi.body)


def check_arity(phi: Formula, n: int) -> None:
    for a in k_arities(phi):
        if a != n:
            raise ArityError(f"K takes {n} arguments, found an atom with {a}")


def rename_bound(phi: Formula, avoid: frozenset[str] = frozenset()) -> Formula:
    """Alpha-rename so that every binder introduces a fresh, distinct variable."""
    used = set(avoid) | set(all_variables(phi))
    fresh = (f"v{i}" for i in count())

    def new_name() -> str:
        for name in fresh:
            if name not in used:
                used.add(name)
                return name
        raise AssertionError("unreachable")

    def go(f: Formula, env: dict[str, str]) -> Formula:
        if isinstance(f, K):
            return K(tuple(env.get(v, v) for v in f.args))
        if isinstance(f, Eq):
            return Eq(env.get(f.left, f.left), env.get(f.right, f.right))
        if isinstance(f, Not):
            return Not(go(f.body, env))
        if isinstance(f, And):
            return And(tuple(go(p, env) for p in f.parts))
        if isinstance(f, Or):
            return Or(tuple(go(p, env) for p in f.parts))
        if isinstance(f, Implies):
            return Implies(go(f.left, env), go(f.right, env))
        name = new_name()
        return type(f)(name, go(f.body, {**env, f.var: name}))

    return go(phi, {})


# -- parser -----------------------------------------------------------------------


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind is None:
            break
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str, n: int | None):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.n = n

    def peek(self):
        if self.i >= len(self.tokens):
            return ("eof", "", len(self.text))
        return self.tokens[self.i]

    def take(self, kind: str):
        tok = self.peek()
        if tok[0] != kind:
            what = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise ParseError(f"expected {'(' if kind == 'open' else ')' if kind == 'close' else 'a symbol'}, got {what}", tok[2])
        self.i += 1
        return tok

    def variable(self) -> str:
        _, name, pos = self.take("sym")
        if name in KEYWORDS or not _VARIABLE.fullmatch(name):
            raise ParseError(f"{name!r} is not a variable name", pos)
        return name

    def formula(self) -> Formula:
        self.take("open")
        _, head, pos = self.take("sym")
        if head == "K":
            args = []
            while self.peek()[0] == "sym":
                args.append(self.variable())
            if not args:
                raise ParseError("K needs arguments", pos)
            self.take("close")
            if self.n is not None and len(args) != self.n:
                raise ArityError(f"K takes {self.n} arguments, got {len(args)} at position {pos}")
            return K(tuple(args))
        if head == "=":
            node: Formula = Eq(self.variable(), self.variable())
        elif head == "not":
            node = Not(self.formula())
        elif head in ("and", "or"):
            parts = []
            while self.peek()[0] == "open":
                parts.append(self.formula())
            node = And(tuple(parts)) if head == "and" else Or(tuple(parts))
        elif head == "implies":
            node = Implies(self.formula(), self.formula())
        elif head in ("exists", "forall"):
            var = self.variable()
            body = self.formula()
            node = Exists(var, body) if head == "exists" else Forall(var, body)
        else:
            raise ParseError(f"unknown operator {head!r}", pos)
        self.take("close")
        return node


def parse(text: str, n: int | None = None) -> Formula:
    """Parse an s-expression formula; with ``n`` set, K atoms must have n arguments."""
    p = _Parser(text, n)
    phi = p.formula()
    tok = p.peek()
    if tok[0] != "eof":
        raise ParseError(f"trailing input {tok[1]!r}", tok[2])
    return phi


# -- builders --------------------------------------------------------------------


def conj(*parts: Formula) -> Formula:
    return parts[0] if len(parts) == 1 else And(tuple(parts))


def disj(*parts: Formula) -> Formula:
    return parts[0] if len(parts) == 1 else Or(tuple(parts))


def forall(variables, body: Formula) -> Formula:
    for v in reversed(list(variables)):
        body = Forall(v, body)
    return body


def exists(variables, body: Formula) -> Formula:
    for v in reversed(list(variables)):
        body = Exists(v, body)
    return body
