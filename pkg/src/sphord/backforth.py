"""Back-and-forth construction of an isomorphism between two dense oracles.

A :class:`PartialIso` is grown one pair at a time.  Even stages go forth:
the least-index unmapped source element is matched with the first target
element (in enumeration order) that keeps every K_n fact.  Odd stages go
back with the roles exchanged.

Membership in a :class:`~sphord.dense.DenseOracle` depends only on the
order pattern of the tuple, so all candidates lying in the same gap of the
current image are interchangeable; each gap is tested once per stage.
"""

from __future__ import annotations

import bisect
import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product
from typing import Iterator

import numpy as np

from .dense import DenseOracle, format_rational, k_rel_rows
from .errors import ArityError, SearchExhausted

DEFAULT_SEARCH_BOUND = 10**5
_PREFILTER_ROWS = 2048


def _extend_combos(combos: np.ndarray, lower: np.ndarray, new_index: int) -> np.ndarray:
    """combinations(k+1, r) from combinations(k, r) and combinations(k, r-1)."""
    tail = np.full((lower.shape[0], 1), new_index, dtype=combos.dtype)
    return np.concatenate([combos, np.concatenate([lower, tail], axis=1)], axis=0)


class _Side:
    """Insertion-ordered points of one structure plus their sorted view."""

    def __init__(self) -> None:
        self.points: list[Fraction] = []
        self.sorted: list[Fraction] = []

    def add(self, x: Fraction) -> None:
        self.points.append(x)
        bisect.insort(self.sorted, x)

    def ranks(self) -> np.ndarray:
        pos = {x: i for i, x in enumerate(self.sorted)}
        return np.fromiter((pos[x] for x in self.points), dtype=np.int32, count=len(self.points))

    def gap(self, x: Fraction) -> int:
        return bisect.bisect_left(self.sorted, x)


@dataclass
class PartialIso:
    source: DenseOracle
    target: DenseOracle
    forward: dict = field(default_factory=dict)
    backward: dict = field(default_factory=dict)
    steps: int = 0
    history: list = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.source.n != self.target.n:
            raise ArityError(f"arity mismatch: {self.source.n} vs {self.target.n}")
        n = self.source.n
        self._src = _Side()
        self._dst = _Side()
        for a, b in self.forward.items():
            self._src.add(a)
            self._dst.add(b)
        # _combos[r] holds every r-subset of insertion indices, r < n
        self._combos = [np.zeros((1, 0), dtype=np.int16)] + [
            np.zeros((0, r), dtype=np.int16) for r in range(1, n)
        ]
        for k in range(len(self._src.points)):
            self._grow_combos(k)
        self._next = [0, 0]

    @property
    def n(self) -> int:
        return self.source.n

    def __len__(self) -> int:
        return len(self.forward)

    @property
    def pairs(self) -> list[tuple[Fraction, Fraction]]:
        return list(zip(self._src.points, self._dst.points))

    def _grow_combos(self, new_index: int) -> None:
        for r in range(len(self._combos) - 1, 0, -1):
            self._combos[r] = _extend_combos(self._combos[r], self._combos[r - 1], new_index)

    def subsets(self, size: int) -> np.ndarray:
        """All ``size``-subsets of the current domain, as insertion indices."""
        return self._combos[size]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "seed_a": self.source.seed,
            "seed_b": self.target.seed,
            "steps": self.steps,
            "pairs": [[format_rational(a), format_rational(b)] for a, b in self.pairs],
        }


def _front_parity(combos: np.ndarray, ranks: np.ndarray, new_rank_above: np.ndarray) -> np.ndarray:
    """Inversion parity of (new, s_1, ..., s_r) for every row of ``combos``.

    ``new_rank_above[i]`` tells whether the new element exceeds point ``i``.
    """
    rows = combos.shape[0]
    r = combos.shape[1]
    parity = np.zeros(rows, dtype=np.int8)
    for c in range(r):
        parity ^= new_rank_above[combos[:, c]].astype(np.int8)
    for c1 in range(r):
        for c2 in range(c1 + 1, r):
            parity ^= (ranks[combos[:, c1]] > ranks[combos[:, c2]]).astype(np.int8)
    return parity


def step(p: PartialIso, search_bound: int = DEFAULT_SEARCH_BOUND) -> PartialIso:
    """Add one pair to ``p`` (in place) and return it."""
    forth = len(p) % 2 == 0
    if forth:
        home, away = p.source, p.target
        home_side, away_side = p._src, p._dst
        home_map, away_map = p.forward, p.backward
    else:
        home, away = p.target, p.source
        home_side, away_side = p._dst, p._src
        home_map, away_map = p.backward, p.forward

    slot = 0 if forth else 1
    i = p._next[slot]
    while home.element_at(i) in home_map:
        i += 1
    p._next[slot] = i
    a = home.element_at(i)
    a_index = i

    r = p.n - 1
    combos = p.subsets(r)
    home_ranks = home_side.ranks()
    away_ranks = away_side.ranks()
    k = len(home_side.points)
    above_a = np.fromiter((a > x for x in home_side.points), dtype=bool, count=k)
    want = _front_parity(combos, home_ranks, above_a)
    base = _front_parity(combos, away_ranks, np.zeros(k, dtype=bool))

    rng = np.random.default_rng(len(p))
    sample = rng.permutation(combos.shape[0])[:_PREFILTER_ROWS] if combos.shape[0] > _PREFILTER_ROWS else None
    gap_ok: dict[int, bool] = {}

    def gap_valid(g: int) -> bool:
        # the candidate exceeds exactly the image points of sorted rank < g
        above = away_ranks < g
        if sample is not None:
            sub = combos[sample]
            got = base[sample].copy()
            for c in range(r):
                got ^= above[sub[:, c]].astype(np.int8)
            if not np.array_equal(got, want[sample]):
                return False
        got = base.copy()
        for c in range(r):
            got ^= above[combos[:, c]].astype(np.int8)
        return bool(np.array_equal(got, want))

    for j in range(search_bound):
        b = away.element_at(j)
        if b in away_map:
            continue
        g = away_side.gap(b)
        if g not in gap_ok:
            gap_ok[g] = gap_valid(g)
        if gap_ok[g]:
            break
    else:
        raise SearchExhausted(search_bound, f"stage {len(p)}, {'forth' if forth else 'back'}")

    if forth:
        src_x, dst_x = a, b
    else:
        src_x, dst_x = b, a
    p._grow_combos(len(p._src.points))
    p._src.add(src_x)
    p._dst.add(dst_x)
    p.forward[src_x] = dst_x
    p.backward[dst_x] = src_x
    p.steps += 1
    p.history.append(
        {
            "step": p.steps,
            "direction": "forth" if forth else "back",
            "index": a_index,
            "a": src_x,
            "b": dst_x,
        }
    )
    return p


def run(
    a: DenseOracle,
    b: DenseOracle,
    steps: int,
    search_bound: int = DEFAULT_SEARCH_BOUND,
    on_step=None,
) -> PartialIso:
    if a.n != b.n:
        raise ArityError(f"arity mismatch: {a.n} vs {b.n}")
    p = PartialIso(a, b)
    for _ in range(steps):
        step(p, search_bound)
        if on_step is not None:
            on_step(p)
    return p


def iter_run(a: DenseOracle, b: DenseOracle, steps: int, search_bound: int = DEFAULT_SEARCH_BOUND) -> Iterator[PartialIso]:
    p = PartialIso(a, b)
    for _ in range(steps):
        yield step(p, search_bound)


# -- verification ----------------------------------------------------------------


def is_partial_iso(p: PartialIso) -> bool:
    """Brute force over all |dom|**n tuples with the oracles' scalar k_rel."""
    if len(set(p.forward.values())) != len(p.forward):
        return False
    dom = list(p.forward)
    for t in product(dom, repeat=p.n):
        if p.source.k_rel(t) != p.target.k_rel(tuple(p.forward[x] for x in t)):
            return False
    return True


def verify_last_pair(p: PartialIso) -> int:
    """Check every all-distinct n-tuple that involves the newest pair.

    All n! arrangements of each n-set are evaluated on both sides, so the
    check does not rely on any symmetry of the relation.  Tuples with a
    repeated entry are members on both sides because the map is injective.
    Returns the number of tuples compared; raises ``AssertionError`` on a
    violation.
    """
    n = p.n
    k = len(p)
    if k == 0:
        return 0
    if len(p.backward) != k:
        raise AssertionError("map is not injective")
    src_r = p._src.ranks()
    dst_r = p._dst.ranks()
    newest = k - 1
    if k < n:
        return 0
    # (n-1)-subsets of the older points, completed by the newest one
    older = p.subsets(n - 1)
    older = older[(older < newest).all(axis=1)] if older.size else older
    rows = np.concatenate([older, np.full((older.shape[0], 1), newest, dtype=older.dtype)], axis=1)
    if rows.shape[0] <= 4096:
        compared = 0
        for perm in permutations(range(n)):
            cols = rows[:, list(perm)]
            lhs = k_rel_rows(src_r[cols])
            rhs = k_rel_rows(dst_r[cols])
            if not np.array_equal(lhs, rhs):
                _report(p, cols[int(np.argmax(lhs != rhs))])
            compared += cols.shape[0]
        return compared
    # same computation with the pairwise comparisons hoisted out of the loop
    sv, dv = src_r[rows], dst_r[rows]
    sgt = {(i, j): sv[:, i] > sv[:, j] for i in range(n) for j in range(n) if i != j}
    dgt = {(i, j): dv[:, i] > dv[:, j] for i in range(n) for j in range(n) if i != j}
    compared = 0
    for perm in permutations(range(n)):
        lhs = np.zeros(rows.shape[0], dtype=bool)
        rhs = np.zeros(rows.shape[0], dtype=bool)
        for x in range(n):
            for y in range(x + 1, n):
                lhs ^= sgt[perm[x], perm[y]]
                rhs ^= dgt[perm[x], perm[y]]
        if not np.array_equal(lhs, rhs):
            _report(p, rows[int(np.argmax(lhs != rhs))][list(perm)])
        compared += rows.shape[0]
    return compared


def _report(p: PartialIso, idx) -> None:
    pts = [format_rational(p._src.points[x]) for x in idx]
    raise AssertionError(f"K_n not preserved on {pts}")


def coverage_ok(p: PartialIso) -> bool:
    """After 2m stages the first m elements of both enumerations are used."""
    m = len(p) // 2
    return all(p.source.element_at(i) in p.forward for i in range(m)) and all(
        p.target.element_at(i) in p.backward for i in range(m)
    )


def trace_line(entry: dict) -> str:
    return json.dumps(
        {
            "step": entry["step"],
            "direction": entry["direction"],
            "a": format_rational(entry["a"]),
            "b": format_rational(entry["b"]),
        },
        sort_keys=True,
    )
