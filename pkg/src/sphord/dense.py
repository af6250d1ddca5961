"""The countable dense n-spherical order over the rationals.

Membership uses the same rule as :func:`sphord.order.derive`, applied to the
usual order of Q: an all-distinct tuple is a member iff its order pattern is
an even permutation.  Elements are exact :class:`fractions.Fraction` values.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import ArityError, DomainError, NoWitness
from .order import FiniteSphericalOrder, pattern_parity


def k_rel_values(t: Sequence) -> bool:
    """Membership of a tuple of mutually comparable values."""
    if len(set(t)) < len(t):
        return True
    return pattern_parity(t) == 0


def k_rel_rows(ranks: np.ndarray) -> np.ndarray:
    """Vectorised membership for an ``(N, n)`` array of all-distinct rows."""
    ranks = np.asarray(ranks)
    parity = np.zeros(ranks.shape[0], dtype=np.int8)
    n = ranks.shape[1]
    for i in range(n):
        for j in range(i + 1, n):
            parity ^= (ranks[:, i] > ranks[:, j]).astype(np.int8)
    return parity == 0


def calkin_wilf(j: int) -> Fraction:
    """The j-th positive rational (j >= 1) in Calkin-Wilf order."""
    a = b = 1
    for bit in bin(j)[3:]:
        if bit == "0":
            b = a + b
        else:
            a = a + b
    return Fraction(a, b)


def default_element(i: int) -> Fraction:
    """0, 1, -1, 1/2, -1/2, 2, -2, ... -- a bijection from N onto Q."""
    if i < 0:
        raise DomainError(f"index must be non-negative, got {i}")
    if i == 0:
        return Fraction(0)
    q = calkin_wilf((i + 1) // 2)
    return q if i % 2 else -q


@lru_cache(maxsize=256)
def _block_permutation(seed: int, level: int) -> tuple[int, ...]:
    size = 1 << level
    perm = list(range(size))
    random.Random(f"sphord:{seed}:{level}").shuffle(perm)
    return tuple(perm)


@lru_cache(maxsize=None)
def _dyadic_shift(seed: int) -> tuple[Fraction, Fraction]:
    rng = random.Random(f"sphord-affine:{seed}")
    scale = Fraction(2) ** rng.randint(-3, 3)
    offset = Fraction(rng.randint(-64, 64), 2 ** rng.randint(0, 6))
    return scale, offset


@dataclass(frozen=True)
class DenseOracle:
    """Countable dense n-spherical order on Q with a fixed enumeration.

    ``seed=None`` enumerates Q as :func:`default_element`.  A seed shuffles
    the default enumeration inside dyadic blocks ``[2**j - 1, 2**(j+1) - 1)``
    and applies a seeded order-preserving dyadic affine map, so the image is
    still all of Q.
    """

    n: int
    seed: int | None = None
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 2:
            raise ArityError(f"arity must be an integer >= 2, got {self.n!r}")

    def element_at(self, i: int) -> Fraction:
        if i < 0:
            raise DomainError(f"index must be non-negative, got {i}")
        if self.seed is None:
            return default_element(i)
        hit = self._cache.get(i)
        if hit is not None:
            return hit
        level = (i + 1).bit_length() - 1
        start = (1 << level) - 1
        src = start + _block_permutation(self.seed, level)[i - start]
        scale, offset = _dyadic_shift(self.seed)
        value = scale * default_element(src) + offset
        self._cache[i] = value
        return value

    def elements(self, count: int) -> list[Fraction]:
        return [self.element_at(i) for i in range(count)]

    def k_rel(self, t: Sequence) -> bool:
        if len(t) != self.n:
            raise ArityError(f"expected a {self.n}-tuple, got length {len(t)}")
        return k_rel_values(tuple(t))

    def induced(self, points: Sequence[Fraction]) -> FiniteSphericalOrder:
        """Finite substructure on ``points`` read off through :meth:`k_rel`."""
        from itertools import permutations

        pts = tuple(points)
        members = [t for t in permutations(range(len(pts)), self.n) if self.k_rel([pts[i] for i in t])]
        return FiniteSphericalOrder.from_index_tuples(self.n, pts, members)


@dataclass(frozen=True)
class WitnessRequest:
    oracle: DenseOracle
    tuple: tuple

    def __post_init__(self) -> None:
        t = tuple(Fraction(x) for x in self.tuple)
        object.__setattr__(self, "tuple", t)
        if len(t) != self.oracle.n:
            raise ArityError(f"expected a {self.oracle.n}-tuple, got length {len(t)}")
        if t[0] == t[1]:
            raise DomainError("density needs a_1 != a_2")
        if not self.oracle.k_rel(t):
            raise DomainError(f"{format_tuple(t)} is not in K_{self.oracle.n}")


def witness_candidates(points: Sequence[Fraction]) -> list[Fraction]:
    """One representative of every position relative to ``points``."""
    s = sorted(set(points))
    cands = [(a + b) / 2 for a, b in zip(s, s[1:])]
    return cands + [s[0] - 1, s[-1] + 1]


def density_witness(oracle: DenseOracle, request: WitnessRequest | Sequence) -> Fraction:
    """An element ``b`` outside the tuple with K(a1,b,a3..) and K(b,a2,a3..)."""
    if not isinstance(request, WitnessRequest):
        request = WitnessRequest(oracle, tuple(request))
    a = request.tuple
    rest = a[2:]
    for b in witness_candidates(a):
        if b in a:
            continue
        if oracle.k_rel((a[0], b) + rest) and oracle.k_rel((b, a[1]) + rest):
            return b
    raise NoWitness(f"no density witness for {format_tuple(a)}")


def format_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise DomainError(f"not a rational: {text!r}") from None


def format_tuple(t: Sequence[Fraction]) -> str:
    return "(" + ", ".join(format_rational(Fraction(x)) for x in t) + ")"
