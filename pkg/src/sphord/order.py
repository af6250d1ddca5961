"""Finite n-spherical orders.

A structure is an n-ary relation ``K`` on a finite labelled domain.  Tuples
with a repeated entry are members by convention and are never stored; only
the all-distinct member tuples are kept.

The canonical finite order on a linearly ordered domain contains exactly the
all-distinct tuples whose order pattern is an even permutation.  For odd
``n`` this set is closed under cyclic rotation; for even ``n`` a rotation is
an odd permutation, so rotation maps members to non-members (see
``check_axioms(..., signed_rotation=True)``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from math import perm
from typing import Any, Hashable, Iterable, Sequence

from .errors import ArityError, BudgetExceeded, DomainError, default_budget

Label = Hashable

AXIOMS = ("nso1", "nso2", "nso3", "nso4")


def pattern_parity(values: Sequence) -> int:
    """Parity (0 even, 1 odd) of the permutation sorting ``values``."""
    inv = 0
    k = len(values)
    for i in range(k):
        vi = values[i]
        for j in range(i + 1, k):
            if vi > values[j]:
                inv ^= 1
    return inv


def is_identification(t: Sequence) -> bool:
    """True iff some two coordinates of ``t`` coincide."""
    return any(t[i] == t[j] for i, j in combinations(range(len(t)), 2))


@dataclass(frozen=True)
class FiniteSphericalOrder:
    n: int
    domain: tuple
    tuples: frozenset = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 2:
            raise ArityError(f"arity must be an integer >= 2, got {self.n!r}")
        domain = tuple(self.domain)
        object.__setattr__(self, "domain", domain)
        pos = {}
        for i, x in enumerate(domain):
            if x in pos:
                raise DomainError(f"duplicate label {x!r}")
            pos[x] = i
        members = set()
        for t in self.tuples:
            t = tuple(t)
            if len(t) != self.n:
                raise ArityError(f"tuple {t!r} has length {len(t)}, expected {self.n}")
            try:
                idx = tuple(pos[x] for x in t)
            except KeyError as exc:
                raise DomainError(f"unknown label {exc.args[0]!r} in {t!r}") from None
            if len(set(idx)) < self.n:
                raise DomainError(f"tuple {t!r} has a repeated entry; those are implied")
            members.add(idx)
        object.__setattr__(self, "tuples", frozenset(tuple(domain[i] for i in t) for t in members))
        object.__setattr__(self, "_pos", pos)
        object.__setattr__(self, "_members", frozenset(members))

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_index_tuples(cls, n: int, domain: Sequence, members: Iterable[tuple]) -> FiniteSphericalOrder:
        domain = tuple(domain)
        return cls(n, domain, frozenset(tuple(domain[i] for i in t) for t in members))

    # -- queries --------------------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.domain)

    @property
    def index_members(self) -> frozenset:
        """Member tuples as tuples of domain positions."""
        return self._members

    def index_of(self, label: Label) -> int:
        try:
            return self._pos[label]
        except KeyError:
            raise DomainError(f"unknown label {label!r}") from None

    def __contains__(self, t: Sequence) -> bool:
        return membership(self, t)

    def member_index(self, t: tuple) -> bool:
        """Membership for a tuple of domain positions (no validation)."""
        return len(set(t)) < len(t) or t in self._members

    def relation_size(self) -> int:
        return relation_size(self)

    def representatives(self) -> list[tuple]:
        """Member tuples whose first entry is their domain-minimal entry."""
        reps = [t for t in self._members if t[0] == min(t)]
        return [tuple(self.domain[i] for i in t) for t in sorted(reps)]

    def restrict(self, subset: Iterable[Label]) -> FiniteSphericalOrder:
        keep = set(subset)
        for x in keep:
            self.index_of(x)
        domain = tuple(x for x in self.domain if x in keep)
        return FiniteSphericalOrder(self.n, domain, frozenset(t for t in self.tuples if keep.issuperset(t)))

    def relabel(self, mapping: dict) -> FiniteSphericalOrder:
        """Image under an injective relabelling of the domain (order of domain kept)."""
        domain = tuple(mapping[x] for x in self.domain)
        return FiniteSphericalOrder(self.n, domain, frozenset(tuple(mapping[x] for x in t) for t in self.tuples))

    # -- serialization ---------------------------------------------------------

    def to_dict(self) -> dict[str, Any]:
        rows = sorted(self._members)
        return {
            "n": self.n,
            "elements": [str(x) for x in self.domain],
            "tuples": [[str(self.domain[i]) for i in t] for t in rows],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=None)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> FiniteSphericalOrder:
        try:
            n = data["n"]
            elements = [str(x) for x in data["elements"]]
            rows = [tuple(str(x) for x in t) for t in data["tuples"]]
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed structure: {exc}") from None
        return cls(n, tuple(elements), frozenset(rows))

    @classmethod
    def from_json(cls, text: str) -> FiniteSphericalOrder:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DomainError(f"invalid JSON: {exc}") from None
        return cls.from_dict(data)


def derive(n: int, domain: Sequence[Label]) -> FiniteSphericalOrder:
    """The finite n-spherical order on ``domain`` (listed in increasing order).

    Members are the all-distinct n-tuples whose pattern is an even
    permutation of the domain order; for ``len(domain) < n`` there are none.
    """
    if not isinstance(n, int) or n < 2:
        raise ArityError(f"arity must be an integer >= 2, got {n!r}")
    domain = tuple(domain)
    if len(set(domain)) != len(domain):
        raise DomainError("labels must be distinct")
    members = []
    for combo in combinations(range(len(domain)), n):
        for p in permutations(combo):
            if not pattern_parity(p):
                members.append(p)
    return FiniteSphericalOrder.from_index_tuples(n, domain, members)


def membership(order: FiniteSphericalOrder, t: Sequence) -> bool:
    t = tuple(t)
    if len(t) != order.n:
        raise ArityError(f"expected a {order.n}-tuple, got length {len(t)}")
    idx = tuple(order.index_of(x) for x in t)
    return order.member_index(idx)


def cardinality_formula(n: int, m: int) -> int:
    """``m**n - m!/(m-n)!/2``: size of the canonical order on m points."""
    if n < 2:
        raise ArityError(f"arity must be >= 2, got {n}")
    if m < n:
        raise DomainError(f"need m >= n, got m={m}, n={n}")
    return m**n - perm(m, n) // 2


def relation_size(order: FiniteSphericalOrder) -> int:
    """Total number of member n-tuples, repeated-entry tuples included."""
    m, n = order.m, order.n
    distinct_total = perm(m, n) if m >= n else 0
    return m**n - distinct_total + len(order.index_members)


# -- axioms -------------------------------------------------------------------


@dataclass
class AxiomResult:
    name: str
    passed: bool
    examined: int
    counterexample: tuple | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "passed": self.passed,
            "examined": self.examined,
            "counterexample": _jsonable(self.counterexample),
        }


@dataclass
class AxiomReport:
    n: int
    m: int
    results: dict[str, AxiomResult]
    signed_rotation: bool = False

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results.values())

    def __getitem__(self, name: str) -> AxiomResult:
        return self.results[name]

    def failed(self) -> list[str]:
        return [k for k, r in self.results.items() if not r.passed]

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "m": self.m,
            "ok": self.ok,
            "rotation_law": "signed" if self.signed_rotation else "literal",
            "axioms": {k: r.to_dict() for k, r in self.results.items()},
        }


def _jsonable(x: Any) -> Any:
    if isinstance(x, tuple):
        return [_jsonable(y) for y in x]
    if isinstance(x, (int, str, bool)) or x is None:
        return x
    return str(x)


def check_axioms(
    order: FiniteSphericalOrder,
    budget: int | None = None,
    signed_rotation: bool = False,
) -> AxiomReport:
    """Exhaustively test nso1-nso4 over all m**n tuples.

    With ``signed_rotation`` the rotation axiom is replaced by its
    orientation-aware form: for all-distinct tuples a cyclic shift preserves
    membership when n is odd and reverses it when n is even.
    """
    n, m = order.n, order.m
    budget = default_budget() if budget is None else budget
    needed = m**n * (1 + n * (n - 1) + m * n)
    if needed > budget:
        raise BudgetExceeded(needed, budget, "check_axioms")

    mem = order.member_index
    lab = order.domain
    pairs = list(combinations(range(n), 2))
    flip = signed_rotation and n % 2 == 0

    def show(t):
        return tuple(lab[i] for i in t)

    cex: dict[str, tuple | None] = dict.fromkeys(AXIOMS)
    examined = dict.fromkeys(AXIOMS, 0)

    for t in product(range(m), repeat=n):
        inside = mem(t)
        repeated = len(set(t)) < n

        examined["nso1"] += 1
        rot = t[1:] + t[:1]
        if signed_rotation and not repeated:
            ok1 = mem(rot) == (inside ^ flip)
        else:
            ok1 = not inside or mem(rot)
        if not ok1 and cex["nso1"] is None:
            cex["nso1"] = (show(t), show(rot))

        for i, j in pairs:
            s = list(t)
            s[i], s[j] = s[j], s[i]
            s = tuple(s)
            swapped = mem(s)
            examined["nso2"] += 1
            examined["nso4"] += 1
            if (inside and swapped) != repeated and cex["nso2"] is None:
                cex["nso2"] = (show(t), (i + 1, j + 1))
            if not (inside or swapped) and cex["nso4"] is None:
                cex["nso4"] = (show(t), (i + 1, j + 1))

        if inside:
            for x in range(m):
                examined["nso3"] += 1
                if not any(mem(t[:i] + (x,) + t[i + 1 :]) for i in range(n)):
                    if cex["nso3"] is None:
                        cex["nso3"] = (show(t), lab[x])

    results = {
        name: AxiomResult(name, cex[name] is None, examined[name], cex[name])
        for name in AXIOMS
    }
    return AxiomReport(n, m, results, signed_rotation)


# -- isomorphism ----------------------------------------------------------------


def _signatures(order: FiniteSphericalOrder) -> list[tuple[int, ...]]:
    # per element: how many member tuples carry it in each coordinate
    sig = [[0] * order.n for _ in range(order.m)]
    for t in order.index_members:
        for pos, x in enumerate(t):
            sig[x][pos] += 1
    return [tuple(s) for s in sig]


def are_isomorphic(a: FiniteSphericalOrder, b: FiniteSphericalOrder) -> dict | None:
    """A relation-preserving bijection ``a.domain -> b.domain``, or ``None``.

    Backtracking; candidate images are pruned by per-coordinate occurrence
    counts, which any isomorphism must preserve.
    """
    if a.n != b.n:
        raise ArityError(f"arity mismatch: {a.n} vs {b.n}")
    if a.m != b.m or len(a.index_members) != len(b.index_members):
        return None
    n, m = a.n, a.m
    sa, sb = _signatures(a), _signatures(b)
    if sorted(sa) != sorted(sb):
        return None
    order = sorted(range(m), key=lambda x: (sum(1 for y in sa if y == sa[x]), x))
    amem, bmem = a.index_members, b.index_members
    image: dict[int, int] = {}
    used: set[int] = set()

    def consistent(x: int) -> bool:
        placed = list(image)
        others = [y for y in placed if y != x]
        for rest in permutations(others, n - 1):
            for pos in range(n):
                t = rest[:pos] + (x,) + rest[pos:]
                u = tuple(image[y] for y in t)
                if (t in amem) != (u in bmem):
                    return False
        return True

    def search(k: int) -> bool:
        if k == m:
            return True
        x = order[k]
        for y in range(m):
            if y in used or sb[y] != sa[x]:
                continue
            image[x] = y
            used.add(y)
            if consistent(x) and search(k + 1):
                return True
            del image[x]
            used.discard(y)
        return False

    if not search(0):
        return None
    return {a.domain[x]: b.domain[y] for x, y in image.items()}


# -- enumeration of all orders --------------------------------------------------


class _ParityUnionFind:
    """Union-find tracking the XOR of boolean values along each link."""

    def __init__(self, size: int):
        self.parent = list(range(size))
        self.rel = [0] * size  # value(x) XOR value(parent(x))

    def find(self, x: int) -> tuple[int, int]:
        path = []
        while self.parent[x] != x:
            path.append(x)
            x = self.parent[x]
        root, acc = x, 0
        for y in reversed(path):
            acc ^= self.rel[y]
            self.parent[y] = root
            self.rel[y] = acc
        return root, acc if path else 0

    def union(self, x: int, y: int, diff: int) -> bool:
        rx, px = self.find(x)
        ry, py = self.find(y)
        if rx == ry:
            return (px ^ py) == diff
        self.parent[rx] = ry
        self.rel[rx] = px ^ py ^ diff
        return True


def enumerate_all_orders(
    n: int,
    m: int,
    budget: int | None = None,
    signed_rotation: bool = False,
) -> list[list[FiniteSphericalOrder]]:
    """All relations on ``m`` points satisfying nso1-nso4, grouped by isomorphism.

    Each all-distinct tuple is a boolean unknown.  The rotation and swap
    axioms are XOR constraints and are solved exactly with a parity
    union-find; the slot axiom (nso3) is then enforced by backtracking over
    the remaining free components.  Domain labels are ``1..m``.
    """
    if n < 2:
        raise ArityError(f"arity must be >= 2, got {n}")
    if m < 1:
        raise DomainError("need at least one point")
    budget = default_budget() if budget is None else budget
    domain = tuple(range(1, m + 1))
    tuples = list(permutations(range(m), n))
    index = {t: i for i, t in enumerate(tuples)}
    uf = _ParityUnionFind(len(tuples))
    flip = 1 if (signed_rotation and n % 2 == 0) else 0

    for t in tuples:
        if not uf.union(index[t], index[t[1:] + t[:1]], flip):
            return []
        for i, j in combinations(range(n), 2):
            s = list(t)
            s[i], s[j] = s[j], s[i]
            if not uf.union(index[t], index[tuple(s)], 1):
                return []

    roots: dict[int, int] = {}
    lit = []  # tuple index -> (component, parity)
    for k in range(len(tuples)):
        r, p = uf.find(k)
        comp = roots.setdefault(r, len(roots))
        lit.append((comp, p))
    ncomp = len(roots)

    # nso3 clauses: not K(t) or some K(t[i:=x]); literals are (comp, parity)
    clauses_by_last: dict[int, list] = {}
    for t in product(range(m), repeat=n):
        t_repeated = len(set(t)) < n
        for x in range(m):
            body = []
            satisfied = False
            for i in range(n):
                u = t[:i] + (x,) + t[i + 1 :]
                if len(set(u)) < n:
                    satisfied = True
                    break
                body.append(lit[index[u]])
            if satisfied:
                continue
            head = None if t_repeated else lit[index[t]]
            comps = [c for c, _ in body] + ([head[0]] if head else [])
            last = max(comps) if comps else -1
            clauses_by_last.setdefault(last, []).append((head, tuple(body)))
    if clauses_by_last.get(-1):
        return []

    value = [0] * ncomp
    solutions = []
    visited = 0

    def holds(clause) -> bool:
        head, body = clause
        if head is not None and not (value[head[0]] ^ head[1]):
            return True
        return any(value[c] ^ p for c, p in body)

    def dfs(k: int) -> None:
        nonlocal visited
        if k == ncomp:
            solutions.append(list(value))
            return
        for bit in (0, 1):
            visited += 1
            if visited > budget:
                raise BudgetExceeded(visited, budget, "enumerate_all_orders")
            value[k] = bit
            if all(holds(c) for c in clauses_by_last.get(k, ())):
                dfs(k + 1)

    dfs(0)

    classes: list[list[FiniteSphericalOrder]] = []
    for sol in solutions:
        members = [t for t, (c, p) in zip(tuples, lit) if sol[c] ^ p]
        order = FiniteSphericalOrder.from_index_tuples(n, domain, members)
        for cls in classes:
            if are_isomorphic(cls[0], order) is not None:
                cls.append(order)
                break
        else:
            classes.append([order])
    return classes
