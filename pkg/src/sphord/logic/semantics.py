"""Truth in finite structures, satisfiability, and deciding sentences in the dense order.

Two independent deciders are provided.  :func:`decide` recurses over
complete atomic diagrams: a quantifier over ``v`` ranges over the consistent
one-variable extensions of the current diagram.  This is exact when every
such extension is realised in the dense order, which holds for ``n <= 3``.

:func:`decide_by_order_types` works in the concrete model on Q instead.
Membership there depends only on the relative order of the entries, so an
assignment is described by an ordered partition of the variables and a new
variable either joins a block or opens a new one in any gap.  This is exact
for every ``n``.
"""

from __future__ import annotations

from typing import Any, Callable

from ..dense import k_rel_values
from ..errors import BudgetExceeded, FormulaError, UnboundVariable
from ..order import FiniteSphericalOrder
from .diagrams import Diagram, enumerate_diagrams, extend_diagrams
from .syntax import (
    And,
    Eq,
    Exists,
    Formula,
    Implies,
    K,
    Not,
    Or,
    check_arity,
    free_variables,
    is_quantifier_free,
    quantifier_depth,
    rename_bound,
)

DEFAULT_MAX_QUANTIFIERS = 6


def _evaluate(phi: Formula, state: Any, atom: Callable, extensions: Callable) -> bool:
    """Shared connective logic; ``atom`` decides K/Eq, ``extensions`` lists quantifier branches."""
    if isinstance(phi, (K, Eq)):
        return atom(phi, state)
    if isinstance(phi, Not):
        return not _evaluate(phi.body, state, atom, extensions)
    if isinstance(phi, And):
        return all(_evaluate(p, state, atom, extensions) for p in phi.parts)
    if isinstance(phi, Or):
        return any(_evaluate(p, state, atom, extensions) for p in phi.parts)
    if isinstance(phi, Implies):
        return not _evaluate(phi.left, state, atom, extensions) or _evaluate(phi.right, state, atom, extensions)
    branches = (_evaluate(phi.body, s, atom, extensions) for s in extensions(state, phi.var))
    return any(branches) if isinstance(phi, Exists) else all(branches)


# -- finite structures ---------------------------------------------------------------


def eval_finite(order: FiniteSphericalOrder, phi: Formula, assignment: dict | None = None) -> bool:
    """Truth of ``phi`` in ``order`` under ``assignment`` (variable -> domain label)."""
    asg = dict(assignment or {})
    missing = free_variables(phi) - set(asg)
    if missing:
        raise UnboundVariable(f"unbound variable(s): {', '.join(sorted(missing))}")
    check_arity(phi, order.n)
    idx = {v: order.index_of(x) for v, x in asg.items()}

    def atom(f, s):
        if isinstance(f, Eq):
            return s[f.left] == s[f.right]
        return order.member_index(tuple(s[v] for v in f.args))

    def extensions(s, var):
        for i in range(order.m):
            yield {**s, var: i}

    return _evaluate(phi, idx, atom, extensions)


def models(order: FiniteSphericalOrder, sentence: Formula) -> bool:
    return eval_finite(order, sentence, {})


# -- diagrams ---------------------------------------------------------------------------


def _diagram_atom(f, d: Diagram) -> bool:
    if isinstance(f, Eq):
        return d.eq_holds(f.left, f.right)
    return d.k_holds(f.args)


def holds_in_diagram(d: Diagram, phi: Formula) -> bool:
    """Truth of a quantifier-free ``phi`` under diagram ``d``."""
    if not is_quantifier_free(phi):
        raise FormulaError("holds_in_diagram needs a quantifier-free formula")
    missing = free_variables(phi) - d.variables
    if missing:
        raise UnboundVariable(f"unbound variable(s): {', '.join(sorted(missing))}")
    return _evaluate(phi, d, _diagram_atom, None)


def qf_sat(n: int, phi: Formula) -> Diagram | None:
    """A consistent diagram satisfying the quantifier-free ``phi``, or None.

    The first satisfying diagram in :func:`enumerate_diagrams` order is
    returned, so the answer is deterministic.
    """
    if not is_quantifier_free(phi):
        raise FormulaError("qf_sat needs a quantifier-free formula")
    check_arity(phi, n)
    for d in enumerate_diagrams(n, free_variables(phi)):
        if _evaluate(phi, d, _diagram_atom, None):
            return d
    return None


def _prepare(n: int, sigma: Formula, max_quantifiers: int) -> Formula:
    free = free_variables(sigma)
    if free:
        raise FormulaError(f"not a sentence; free variable(s): {', '.join(sorted(free))}")
    check_arity(sigma, n)
    depth = quantifier_depth(sigma)
    if depth > max_quantifiers:
        raise BudgetExceeded(depth, max_quantifiers, "decide (quantifier depth)")
    return rename_bound(sigma)


def decide(n: int, sigma: Formula, max_quantifiers: int = DEFAULT_MAX_QUANTIFIERS) -> bool:
    """Truth of ``sigma`` by recursion over complete diagrams."""
    psi = _prepare(n, sigma, max_quantifiers)
    cache: dict = {}

    def extensions(d: Diagram, var: str):
        key = (d, var)
        if key not in cache:
            cache[key] = extend_diagrams(d, var)
        return cache[key]

    return _evaluate(psi, Diagram.empty(n), _diagram_atom, extensions)


def decide_by_order_types(n: int, sigma: Formula, max_quantifiers: int = DEFAULT_MAX_QUANTIFIERS) -> bool:
    """Truth of ``sigma`` in the dense order on Q, via ordered partitions."""
    psi = _prepare(n, sigma, max_quantifiers)

    def atom(f, blocks: tuple):
        where = {v: i for i, b in enumerate(blocks) for v in b}
        if isinstance(f, Eq):
            return where[f.left] == where[f.right]
        return k_rel_values([where[v] for v in f.args])

    def extensions(blocks: tuple, var: str):
        for i, b in enumerate(blocks):
            yield blocks[:i] + (b | {var},) + blocks[i + 1 :]
        for i in range(len(blocks) + 1):
            yield blocks[:i] + (frozenset({var}),) + blocks[i:]

    return _evaluate(psi, (), atom, extensions)


def eval_in_dense(n: int, phi: Formula, assignment: dict) -> bool:
    """Truth of ``phi`` in Q under a rational assignment to its free variables."""
    missing = free_variables(phi) - set(assignment)
    if missing:
        raise UnboundVariable(f"unbound variable(s): {', '.join(sorted(missing))}")
    check_arity(phi, n)
    values = sorted(set(assignment.values()))
    blocks = tuple(frozenset(v for v, x in assignment.items() if x == val) for val in values)

    def atom(f, bl: tuple):
        where = {v: i for i, b in enumerate(bl) for v in b}
        if isinstance(f, Eq):
            return where[f.left] == where[f.right]
        return k_rel_values([where[v] for v in f.args])

    def extensions(bl: tuple, var: str):
        bl = tuple(b - {var} for b in bl)
        bl = tuple(b for b in bl if b)
        for i, b in enumerate(bl):
            yield bl[:i] + (b | {var},) + bl[i + 1 :]
        for i in range(len(bl) + 1):
            yield bl[:i] + (frozenset({var}),) + bl[i:]

    return _evaluate(phi, blocks, atom, extensions)


__all__ = [
    "decide",
    "decide_by_order_types",
    "eval_finite",
    "eval_in_dense",
    "holds_in_diagram",
    "models",
    "qf_sat",
]
