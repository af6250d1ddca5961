"""Ready-made sentences: the four order axioms and the density axiom."""

from __future__ import annotations

from itertools import combinations

from .syntax import And, Eq, Exists, Formula, Implies, K, Not, conj, disj, exists, forall


def _xs(n: int) -> list[str]:
    return [f"x{i}" for i in range(1, n + 1)]


def _swap(xs: list[str], i: int, j: int) -> tuple[str, ...]:
    s = list(xs)
    s[i], s[j] = s[j], s[i]
    return tuple(s)


def _some_equal(xs: list[str]) -> Formula:
    return disj(*(Eq(a, b) for a, b in combinations(xs, 2)))


def _iff(a: Formula, b: Formula) -> Formula:
    return And((Implies(a, b), Implies(b, a)))


def rotation_axiom(n: int) -> Formula:
    xs = _xs(n)
    return forall(xs, Implies(K(tuple(xs)), K(tuple(xs[1:] + xs[:1]))))


def swap_axiom(n: int, i: int | None = None, j: int | None = None) -> Formula:
    """Both a tuple and its (i, j)-swap are members iff some entries coincide.

    Positions are 1-based; without ``i, j`` the conjunction over all pairs.
    """
    xs = _xs(n)
    pairs = [(i - 1, j - 1)] if i is not None else list(combinations(range(n), 2))
    body = conj(*(_iff(And((K(tuple(xs)), K(_swap(xs, a, b)))), _some_equal(xs)) for a, b in pairs))
    return forall(xs, body)


def slot_axiom(n: int) -> Formula:
    xs = _xs(n)
    options = [K(tuple(xs[:i] + ["t"] + xs[i + 1 :])) for i in range(n)]
    return forall(xs, Implies(K(tuple(xs)), forall(["t"], disj(*options))))


def totality_axiom(n: int) -> Formula:
    xs = _xs(n)
    body = conj(*(disj(K(tuple(xs)), K(_swap(xs, a, b))) for a, b in combinations(range(n), 2)))
    return forall(xs, body)


def axiom_sentences(n: int) -> dict[str, Formula]:
    return {
        "nso1": rotation_axiom(n),
        "nso2": swap_axiom(n),
        "nso3": slot_axiom(n),
        "nso4": totality_axiom(n),
    }


def density_sentence(n: int) -> Formula:
    xs = _xs(n)
    rest = tuple(xs[2:])
    witness = conj(
        *(Not(Eq("b", x)) for x in xs),
        K((xs[0], "b") + rest),
        K(("b", xs[1]) + rest),
    )
    hyp = And((K(tuple(xs)), Not(Eq(xs[0], xs[1]))))
    return forall(xs, Implies(hyp, Exists("b", witness)))


def swap_pair_sentence(n: int) -> Formula:
    """Some pairwise distinct tuple lies in K together with its first-two swap."""
    xs = _xs(n)
    distinct = [Not(Eq(a, b)) for a, b in combinations(xs, 2)]
    return exists(xs, conj(*distinct, K(tuple(xs)), K(_swap(xs, 0, 1))))
