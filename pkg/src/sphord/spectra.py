"""Countable spectra of constant and unary expansions, model catalogs, Hasse diagrams.

Nothing here builds an infinite model.  The counts are closed formulas:

* the Ehrenfeucht-style expansion with ``m`` predicates has ``m`` models;
* a constant expansion with ``r_k`` independent nonisolated 1-types driven by
  ``k`` moving constant sequences has ``prod (2**k + 2)**r_k`` models, or
  continuum many when there are infinitely many such types.

For ``n`` in {2, 3} the admissible ``k`` are 0 and 2 (factors 3 and 6); for
``n >= 4`` they are 0 and 2..n-1 (factors 3, 6, 10, 18, ...).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from math import prod
from typing import Mapping, Sequence

from .errors import SpectrumError


class _Continuum:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "CONTINUUM"

    def __str__(self) -> str:
        return "2^omega"

    def __reduce__(self):
        return (_Continuum, ())


CONTINUUM = _Continuum()


def admissible_keys(n: int) -> tuple[int, ...]:
    if not isinstance(n, int) or n < 2:
        raise SpectrumError(f"arity must be an integer >= 2, got {n!r}")
    if n <= 3:
        return (0, 2)
    return (0,) + tuple(range(2, n))


def factor(k: int) -> int:
    return 2**k + 2


@dataclass(frozen=True)
class ExpansionSpec:
    n: int
    mode: str
    m: int | None = None
    counts: tuple[tuple[int, int], ...] = ()
    infinitely_many_types: bool = False

    @classmethod
    def ehrenfeucht(cls, n: int, m: int) -> ExpansionSpec:
        return cls(n, "ehrenfeucht", m=m)

    @classmethod
    def constants(
        cls,
        n: int,
        counts: Mapping[int, int] | Sequence[int] = (),
        infinitely_many_types: bool = False,
    ) -> ExpansionSpec:
        """``counts`` is either ``{k: r_k}`` or a list aligned with :func:`admissible_keys`."""
        keys = admissible_keys(n)
        if isinstance(counts, Mapping):
            items = dict(counts)
        else:
            counts = list(counts)
            if len(counts) > len(keys):
                raise SpectrumError(f"n={n} takes at most {len(keys)} counts (k in {list(keys)}), got {len(counts)}")
            items = dict(zip(keys, counts))
        for k, r in items.items():
            if k not in keys:
                raise SpectrumError(f"k={k} is not admissible for n={n}; allowed: {list(keys)}")
            if not isinstance(r, int) or r < 0:
                raise SpectrumError(f"r_{k} must be a natural number, got {r!r}")
        return cls(n, "constants", counts=tuple(sorted(items.items())), infinitely_many_types=infinitely_many_types)

    def __post_init__(self) -> None:
        admissible_keys(self.n)
        if self.mode not in ("ehrenfeucht", "constants"):
            raise SpectrumError(f"unknown mode {self.mode!r}")


@dataclass(frozen=True)
class SpectrumResult:
    value: int | _Continuum

    @property
    def is_continuum(self) -> bool:
        return self.value is CONTINUUM

    def __str__(self) -> str:
        return str(self.value)

    def to_json(self):
        return "2^omega" if self.is_continuum else self.value


def spectrum(spec: ExpansionSpec) -> SpectrumResult:
    if spec.mode == "ehrenfeucht":
        m = spec.m
        if not isinstance(m, int) or m < 1:
            raise SpectrumError(f"m must be a positive integer, got {m!r}")
        if m == 2:
            raise SpectrumError("no complete theory has exactly 2 countable models")
        # m == 1 is the unexpanded, countably categorical theory
        return SpectrumResult(m)
    if spec.infinitely_many_types:
        return SpectrumResult(CONTINUUM)
    return SpectrumResult(prod(factor(k) ** r for k, r in spec.counts))


# -- Ehrenfeucht catalog -----------------------------------------------------------


@dataclass(frozen=True)
class ModelEntry:
    kind: str
    description: str
    type_label: str
    index: int | None = None

    def to_dict(self) -> dict:
        return {"kind": self.kind, "index": self.index, "description": self.description, "type": self.type_label}


@dataclass(frozen=True)
class ModelCatalog:
    n: int
    m: int
    entries: tuple[ModelEntry, ...] = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.entries)

    def kinds(self) -> list[str]:
        return [e.kind for e in self.entries]

    def to_dict(self) -> dict:
        return {"n": self.n, "m": self.m, "count": len(self), "models": [e.to_dict() for e in self.entries]}


def ehrenfeucht_catalog(n: int, m: int) -> ModelCatalog:
    """The ``m`` countable models of the expansion with predicates P_0..P_{m-3}."""
    admissible_keys(n)
    if not isinstance(m, int) or m < 3:
        raise SpectrumError(f"the expansion needs m >= 3 (predicates P_0..P_(m-3)), got {m!r}")
    entries = [ModelEntry("prime", "constants c_k have no limit; p_inf is omitted", "p_inf")]
    for i in range(m - 2):
        entries.append(
            ModelEntry(
                "prime-over-realization",
                f"prime over one realization of p_inf^{i}, which is a limit of the c_k",
                f"p_inf^{i}",
                index=i,
            )
        )
    entries.append(
        ModelEntry("saturated", "every p_inf^i realized, no limit element for the c_k", "p_inf")
    )
    return ModelCatalog(n, m, tuple(entries))


# -- limit models and Hasse diagrams -------------------------------------------------


def limit_count(k: int) -> tuple[int, int, int]:
    """(almost prime, limit, total) models attached to a type with k moving sequences."""
    if not isinstance(k, int) or k < 2:
        raise SpectrumError(f"k must be an integer >= 2, got {k!r}")
    return (3, 2**k - 1, 2**k + 2)


_KIND = re.compile(r"\s*(?:(T1|T2)|limit\(\s*(\d+)\s*\)|limit:(\d+))\s*$")


def parse_kind(kind: str) -> list[tuple[str, int | None]]:
    """Split ``"T1*T2*limit(3)"`` into factors ``[("T1", None), ("T2", None), ("limit", 3)]``."""
    parts = kind.split("*") if kind else []
    if not parts or any(not p.strip() for p in parts):
        raise SpectrumError(f"invalid Hasse kind {kind!r}")
    out = []
    for p in parts:
        mt = _KIND.match(p)
        if mt is None:
            raise SpectrumError(f"invalid Hasse kind {p.strip()!r}; use T1, T2 or limit(k)")
        if mt.group(1):
            out.append((mt.group(1), None))
        else:
            k = int(mt.group(2) or mt.group(3))
            limit_count(k)
            out.append(("limit", k))
    return out


def chain(name: str, k: int | None = None) -> list[int]:
    """IL labels along one chain, bottom to top."""
    if name == "T1":
        return [0, 1]
    if name == "T2":
        return [0, 0, 3]
    if name == "limit":
        return [0, 0, limit_count(k)[1]]
    raise SpectrumError(f"unknown chain {name!r}")


def hasse_chains(kind: str) -> list[list[int]]:
    return [chain(name, k) for name, k in parse_kind(kind)]


def hasse(kind: str) -> str:
    """DOT text for the RK Hasse diagram; products become disjoint clusters."""
    factors = parse_kind(kind)
    lines = ["digraph hasse {", "  rankdir=BT;", "  node [shape=circle];"]
    for ci, (name, k) in enumerate(factors):
        title = name if k is None else f"limit({k})"
        labels = chain(name, k)
        lines.append(f"  subgraph cluster_{ci} {{")
        lines.append(f'    label="{title}";')
        for j, il in enumerate(labels):
            lines.append(f'    c{ci}_{j} [label="{il}"];')
        for j in range(len(labels) - 1):
            lines.append(f"    c{ci}_{j} -> c{ci}_{j + 1};")
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"
