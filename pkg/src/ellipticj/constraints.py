"""Constraint multisets, dimension bookkeeping and constraint distributions.

A constraint H^j is a codimension-j linear subspace of P^n; a point is H^n
and a line is H^(n-1). Multisets are stored as a tuple of multiplicities
indexed by codimension, ``counts[j]`` for j = 0..n, which makes the
canonical form and hashing trivial.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Mapping

from .arith import binomial


class ConstraintParseError(ValueError):
    pass


class ConstraintRangeError(ValueError):
    pass


@dataclass(frozen=True)
class ConstraintMultiset:
    """Multiset of hyperplane-class codimensions in P^n."""

    n: int
    counts: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ConstraintRangeError(f"ambient dimension must be positive, got {self.n}")
        if len(self.counts) != self.n + 1:
            raise ValueError("counts must have length n + 1")
        if self.counts[0]:
            raise ConstraintRangeError("codimension 0 is not a constraint")
        if any(m < 0 for m in self.counts):
            raise ValueError("multiplicities must be nonnegative")

    @classmethod
    def from_mapping(cls, n: int, entries: Mapping[int, int]) -> "ConstraintMultiset":
        counts = [0] * (n + 1)
        for j, m in entries.items():
            if not 1 <= j <= n:
                raise ConstraintRangeError(f"codimension {j} outside 1..{n}")
            if m < 0:
                raise ValueError(f"negative multiplicity for codimension {j}")
            counts[j] += m
        return cls(n, tuple(counts))

    @classmethod
    def empty(cls, n: int) -> "ConstraintMultiset":
        return cls(n, (0,) * (n + 1))

    @property
    def entries(self) -> dict[int, int]:
        return {j: m for j, m in enumerate(self.counts) if m}

    def __len__(self) -> int:
        return sum(self.counts)

    def __iter__(self) -> Iterator[int]:
        """Codimensions in descending order, repeated by multiplicity."""
        for j in range(self.n, 0, -1):
            yield from itertools.repeat(j, self.counts[j])

    def add(self, j: int, m: int = 1) -> "ConstraintMultiset":
        if not 1 <= j <= self.n:
            raise ConstraintRangeError(f"codimension {j} outside 1..{self.n}")
        counts = list(self.counts)
        counts[j] += m
        return ConstraintMultiset(self.n, tuple(counts))

    def union(self, other: "ConstraintMultiset") -> "ConstraintMultiset":
        if other.n != self.n:
            raise ValueError("multisets live in different ambient spaces")
        return ConstraintMultiset(self.n, tuple(a + b for a, b in zip(self.counts, other.counts)))

    def weight(self) -> int:
        """Sum of (j - 1): the number of conditions the constraints impose on curves."""
        return constraint_weight(self.counts)

    def to_text(self) -> str:
        """Render in the canonical ``token:count`` grammar (points first)."""
        parts = []
        for j in range(self.n, 0, -1):
            m = self.counts[j]
            if not m:
                continue
            if j == self.n:
                tok = "p"
            elif j == self.n - 1:
                tok = "l"
            else:
                tok = f"H{j}"
            parts.append(f"{tok}:{m}")
        return ",".join(parts)

    def __str__(self) -> str:
        return self.to_text() or "-"


@dataclass(frozen=True)
class Distribution:
    left: ConstraintMultiset
    right: ConstraintMultiset
    multiplicity: int


def constraint_weight(counts: tuple[int, ...]) -> int:
    return sum((j - 1) * m for j, m in enumerate(counts))


def sigma_dimension_defect(n: int, d: int, c: ConstraintMultiset) -> int:
    """Conditions imposed minus the dimension (n+1)d + n - 3 of unmarked rational curves."""
    return c.weight() - ((n + 1) * d + n - 3)


def tau_dimension_defect(n: int, d: int, c: ConstraintMultiset) -> int:
    """Conditions imposed minus the dimension (n+1)d of unmarked elliptic curves with fixed j."""
    return c.weight() - ((n + 1) * d - 1)


def marked_dimension(n: int, d: int, counts: tuple[int, ...]) -> int:
    """Dimension of the space of 1-marked rational curves through ``counts``."""
    return (n + 1) * d + n - 2 - constraint_weight(counts)


@lru_cache(maxsize=None)
def splits(counts: tuple[int, ...]) -> tuple[tuple[tuple[int, ...], tuple[int, ...], int], ...]:
    """All ordered splits of ``counts`` as (left, right, multiplicity)."""
    out = []
    for left in itertools.product(*(range(m + 1) for m in counts)):
        mult = 1
        for m, a in zip(counts, left):
            mult *= binomial(m, a)
        right = tuple(m - a for m, a in zip(counts, left))
        out.append((left, right, mult))
    return tuple(out)


@lru_cache(maxsize=None)
def splits_by_weight(counts: tuple[int, ...]) -> dict[int, tuple[tuple[tuple[int, ...], tuple[int, ...], int], ...]]:
    """Ordered splits of ``counts`` grouped by the weight of the left part.

    The recursions only need splits whose left factor has one prescribed
    dimension, so grouping lets them skip the rest without looking.
    """
    grouped: dict[int, list] = {}
    for left, right, mult in splits(counts):
        grouped.setdefault(constraint_weight(left), []).append((left, right, mult))
    return {w: tuple(v) for w, v in grouped.items()}


def distributions(c: ConstraintMultiset) -> list[Distribution]:
    n = c.n
    return [
        Distribution(ConstraintMultiset(n, left), ConstraintMultiset(n, right), mult)
        for left, right, mult in splits(c.counts)
    ]


_TOKEN = re.compile(r"^(p|l|H(\d+))$")


def symbolic_parse(text: str, n: int) -> ConstraintMultiset:
    """Parse ``"p:1,l:17"`` style constraint text for P^n.

    ``p`` is a point (codimension n), ``l`` a line (codimension n - 1) and
    ``Hk`` a codimension-k linear subspace. Repeated tokens accumulate.
    """
    if n < 2:
        raise ConstraintRangeError(f"ambient dimension must be at least 2, got {n}")
    text = re.sub(r"\s+", "", text)
    counts = [0] * (n + 1)
    if not text:
        return ConstraintMultiset(n, tuple(counts))
    for item in text.split(","):
        tok, sep, num = item.partition(":")
        if not sep or not num.isdigit() or int(num) <= 0:
            raise ConstraintParseError(f"malformed constraint item {item!r}; expected token:count")
        match = _TOKEN.match(tok)
        if match is None:
            raise ConstraintParseError(f"unknown constraint token {tok!r}")
        if tok == "p":
            j = n
        elif tok == "l":
            j = n - 1
        else:
            j = int(match.group(2))
        if not 1 <= j <= n:
            raise ConstraintRangeError(f"codimension {j} outside 1..{n} in {item!r}")
        counts[j] += int(num)
    return ConstraintMultiset(n, tuple(counts))
