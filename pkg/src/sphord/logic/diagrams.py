"""Complete atomic diagrams: an equality partition plus an order on the classes.

A diagram on variables ``V`` fixes which variables are equal and, for the
resulting classes, which tuples of classes are in K.  It is consistent when
the class order is isomorphic to ``derive(n, classes)``; every consistent
class order is a relabelling of the canonical one, which is how they are
generated here.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Iterable, Iterator

from ..errors import BudgetExceeded, DomainError
from ..order import FiniteSphericalOrder, are_isomorphic, derive

DEFAULT_VARIABLE_BUDGET = 7


@dataclass(frozen=True)
class Diagram:
    n: int
    classes: tuple[frozenset, ...]
    order: FiniteSphericalOrder

    @classmethod
    def build(cls, n: int, classes: Iterable[Iterable[str]], tuples: Iterable[tuple] = ()) -> Diagram:
        """``tuples`` name classes by any of their members."""
        cl = sorted((frozenset(c) for c in classes), key=min)
        if any(not c for c in cl):
            raise DomainError("empty class")
        label = {}
        for c in cl:
            for v in c:
                if v in label:
                    raise DomainError(f"variable {v!r} in two classes")
                label[v] = min(c)
        rel = frozenset(tuple(label[v] for v in t) for t in tuples)
        return cls(n, tuple(cl), FiniteSphericalOrder(n, tuple(min(c) for c in cl), rel))

    @classmethod
    def empty(cls, n: int) -> Diagram:
        return cls(n, (), FiniteSphericalOrder(n, ()))

    @property
    def variables(self) -> frozenset:
        return frozenset().union(*self.classes)

    @property
    def labels(self) -> tuple:
        return self.order.domain

    def label_of(self, var: str) -> str:
        for c in self.classes:
            if var in c:
                return min(c)
        raise DomainError(f"variable {var!r} not in diagram")

    def eq_holds(self, x: str, y: str) -> bool:
        return self.label_of(x) == self.label_of(y)

    def k_holds(self, args: tuple[str, ...]) -> bool:
        return tuple(self.label_of(v) for v in args) in self.order

    def restrict(self, variables: Iterable[str]) -> Diagram:
        keep = set(variables)
        classes = [c & keep for c in self.classes]
        relabel = {min(c): min(k) for c, k in zip(self.classes, classes) if k}
        tuples = [tuple(relabel[x] for x in t) for t in self.order.tuples if all(x in relabel for x in t)]
        return Diagram.build(self.n, [k for k in classes if k], tuples)

    def is_consistent(self) -> bool:
        return are_isomorphic(self.order, derive(self.n, range(len(self.classes)))) is not None

    def to_dict(self) -> dict:
        return {
            "classes": [sorted(c) for c in self.classes],
            "tuples": sorted(list(t) for t in self.order.tuples),
        }

    def __str__(self) -> str:
        cls = " ".join("{" + ",".join(sorted(c)) + "}" for c in self.classes)
        rel = " ".join("(" + " ".join(t) + ")" for t in sorted(self.order.tuples))
        return f"[{cls}] K: {rel or '-'}"


# -- canonical class orders ------------------------------------------------------


@lru_cache(maxsize=None)
def labeled_orders(n: int, r: int) -> tuple[frozenset, ...]:
    """Every relation on ``range(r)`` isomorphic to ``derive(n, range(r))``."""
    base = derive(n, range(r)).index_members
    seen = set()
    for p in permutations(range(r)):
        seen.add(frozenset(tuple(p[i] for i in t) for t in base))
    return tuple(sorted(seen, key=sorted))


@lru_cache(maxsize=None)
def _extension_table(n: int, r: int) -> dict[frozenset, tuple[frozenset, ...]]:
    table: dict[frozenset, list] = {}
    for rel in labeled_orders(n, r + 1):
        old = frozenset(t for t in rel if r not in t)
        table.setdefault(old, []).append(rel)
    return {k: tuple(v) for k, v in table.items()}


def set_partitions(items: list) -> Iterator[list[list]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]


def _from_index_relation(n: int, classes: list[frozenset], rel: frozenset) -> Diagram:
    labels = [min(c) for c in classes]
    order = FiniteSphericalOrder(n, tuple(labels), frozenset(tuple(labels[i] for i in t) for t in rel))
    return Diagram(n, tuple(classes), order)


def enumerate_diagrams(n: int, variables: Iterable[str], budget: int = DEFAULT_VARIABLE_BUDGET) -> list[Diagram]:
    """All consistent diagrams on ``variables``, in a fixed order."""
    vs = sorted(set(variables))
    if len(vs) > budget:
        raise BudgetExceeded(len(vs), budget, "enumerate_diagrams (variables)")
    out = []
    for part in set_partitions(vs):
        classes = sorted((frozenset(c) for c in part), key=min)
        for rel in labeled_orders(n, len(classes)):
            out.append(_from_index_relation(n, classes, rel))
    return out


def extend_diagrams(d: Diagram, v: str) -> list[Diagram]:
    """Consistent diagrams on ``d.variables | {v}`` restricting to ``d``."""
    if v in d.variables:
        raise DomainError(f"variable {v!r} already in the diagram")
    out = []
    for i, c in enumerate(d.classes):
        classes = list(d.classes)
        classes[i] = c | {v}
        tuples = [tuple(v if x == min(c) and v < x else x for x in t) for t in d.order.tuples]
        out.append(Diagram.build(d.n, classes, tuples))

    r = len(d.classes)
    labels = list(d.labels)
    index = {x: i for i, x in enumerate(labels)}
    rel = frozenset(tuple(index[x] for x in t) for t in d.order.tuples)
    for full in _extension_table(d.n, r).get(rel, ()):
        names = labels + [v]
        tuples = [tuple(names[i] for i in t) for t in full]
        out.append(Diagram.build(d.n, list(d.classes) + [frozenset({v})], tuples))
    return out
