"""Genus-0 enumerative invariants of P^n.

``sigma(n, d, c)`` counts degree-d rational curves in P^n meeting the linear
spaces in ``c``. The recursion peels the three largest codimensions
j1 >= j2 >= j3 >= 2 off the constraint list using associativity of the
quantum product with a hyperplane inserted:

    s(j1, j2, j3) = d s(j1+j3-1, j2) - d s(j1+j2, j3-1) + s(j1, j2+1, j3-1)
        + sum_{d1+d2=d} sum_{e+f=n} d2 [ s_d1(j1, j3-1, H^e) s_d2(H^f, j2)
                                       - s_d1(j1, j2, H^e) s_d2(H^f, j3-1) ]

with the remaining constraints distributed over both factors in all ways.
The recursion bottoms out at a line through two points.
"""
from __future__ import annotations

import sys
from typing import Iterable, Sequence

from .cache import Cache, SigmaKey, default_cache
from .constraints import (
    ConstraintMultiset,
    ConstraintRangeError,
    constraint_weight,
    splits_by_weight,
)

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))


def _check(n: int, d: int) -> None:
    if n < 2:
        raise ValueError(f"ambient dimension must be at least 2, got {n}")
    if d < 1:
        raise ValueError(f"degree must be positive, got {d}")


def sigma(n: int, d: int, c: ConstraintMultiset, cache: Cache | None = None) -> int:
    """Number of degree-d rational curves in P^n through ``c``.

    Returns 0 when the constraints do not cut the space of curves down to
    finitely many.
    """
    _check(n, d)
    if c.n != n:
        raise ValueError(f"constraints are for P^{c.n}, not P^{n}")
    return sigma_counts(cache or default_cache(n), d, c.counts)


def sigma_counts(cache: Cache, d: int, counts: Sequence[int]) -> int:
    """``sigma`` on a raw count vector which may contain codimensions 0 and 1.

    A fundamental-class insertion gives 0; each hyperplane insertion
    contributes a factor d.
    """
    if counts[0]:
        return 0
    factor = d ** counts[1] if counts[1] else 1
    if counts[1]:
        counts = (0, 0) + tuple(counts[2:])
    return factor * _sigma(cache, d, tuple(counts))


def sigma_with(cache: Cache, d: int, rest: tuple[int, ...], extra: Iterable[int]) -> int:
    """``sigma`` of ``rest`` with the codimensions in ``extra`` inserted."""
    n = cache.n
    counts = list(rest)
    factor = 1
    for e in extra:
        if e <= 0 or e > n:
            return 0
        if e == 1:
            factor *= d
        else:
            counts[e] += 1
    if counts[0]:
        return 0
    if counts[1]:
        factor *= d ** counts[1]
        counts[1] = 0
    return factor * _sigma(cache, d, tuple(counts))


def _sigma(cache: Cache, d: int, counts: tuple[int, ...]) -> int:
    n = cache.n
    if constraint_weight(counts) != (n + 1) * d + n - 3:
        return 0
    key = SigmaKey(n, d, counts)
    hit = cache.sigma.lookup(key)
    if hit is not None:
        cache.stats.cache_hits += 1
        return hit
    cache.stats.sigma_evals += 1

    picked = []
    rest = list(counts)
    for j in range(n, 1, -1):
        while rest[j] and len(picked) < 3:
            rest[j] -= 1
            picked.append(j)
    if len(picked) < 3:
        # only a line through two points survives the dimension check here
        value = 1
    else:
        j1, j2, j3 = picked
        rest_t = tuple(rest)
        value = (
            d * sigma_with(cache, d, rest_t, (j1 + j3 - 1, j2))
            - d * sigma_with(cache, d, rest_t, (j1 + j2, j3 - 1))
            + sigma_with(cache, d, rest_t, (j1, j2 + 1, j3 - 1))
        )
        groups = splits_by_weight(rest_t)
        for d1 in range(1, d):
            d2 = d - d1
            top = (n + 1) * d1 + n - 3
            for e in range(1, n):
                f = n - e
                value += d2 * _split_term(cache, groups, d1, d2, top, (j1, j3 - 1, e), (f, j2))
                value -= d2 * _split_term(cache, groups, d1, d2, top, (j1, j2, e), (f, j3 - 1))
    cache.store(key, value)
    return value


def _split_term(cache, groups, d1, d2, top, left_extra, right_extra) -> int:
    if any(e > cache.n for e in left_extra) or any(e > cache.n for e in right_extra):
        return 0
    need = top - sum(e - 1 for e in left_extra)
    total = 0
    for left, right, mult in groups.get(need, ()):
        a = sigma_with(cache, d1, left, left_extra)
        if a:
            total += mult * a * sigma_with(cache, d2, right, right_extra)
    return total


def sigma_p2_oracle(d: int) -> int:
    """Rational plane curves of degree d through 3d - 1 points, by Kontsevich's formula.

    Deliberately self-contained: shares nothing with :func:`sigma`.
    """
    if d < 1:
        raise ValueError(f"degree must be positive, got {d}")
    from math import comb

    n_d = [0, 1]
    for k in range(2, d + 1):
        total = 0
        for k1 in range(1, k):
            k2 = k - k1
            total += (
                comb(3 * k - 4, 3 * k1 - 2) * k1 ** 2 * k2 ** 2
                - comb(3 * k - 4, 3 * k1 - 1) * k1 ** 3 * k2
            ) * n_d[k1] * n_d[k2]
        n_d.append(total)
    return n_d[d]


def rt_genus0(
    n: int,
    d: int,
    alphas: Sequence[int],
    betas: Sequence[int],
    cache: Cache | None = None,
) -> int:
    """Genus-0 perturbed invariant with three fixed marked points.

    In P^n it agrees with ``sigma`` of all constraints together. An alpha of
    codimension 0 leaves its marked point unconstrained and is dropped.
    """
    if len(alphas) != 3:
        raise ValueError(f"exactly three fixed-point constraints are required, got {len(alphas)}")
    entries: dict[int, int] = {}
    for j in [a for a in alphas if a != 0] + list(betas):
        if not 1 <= j <= n:
            raise ConstraintRangeError(f"codimension {j} outside 1..{n}")
        entries[j] = entries.get(j, 0) + 1
    return sigma(n, d, ConstraintMultiset.from_mapping(n, entries), cache)
