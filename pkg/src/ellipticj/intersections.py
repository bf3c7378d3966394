"""Top intersections on the space U_d of 1-marked rational curves.

Notation: x = c1(L*) for the relative tangent sheaf L at the marked point,
y = ev*(H) at the marked point. ``phi(n, d, i, j, c)`` is x^i y^j [U_d(c)].
The recursion expresses x through the divisor of curves meeting an extra
codimension-2 space, y, and the boundary strata where the curve splits into
a marked degree-d1 component and an unmarked degree-d2 component:

    phi_d(i+1, j) = -(2/d) phi_d(i, j+1) + (1/d^2) phi_d(i, j | H^2)
        + sum_{d1+d2=d, i1+i2=n}   (d2/d)^2 phi_d1(i, j | H^i1) sigma_d2(H^i2)
        + sum_{d1+d2=d, i1+i2=n+j} (d2/d)^2 phi_d1(i-1, i1) sigma_d2(H^i2)

with the last sum absent for i = 0 and constraints distributed over the two
components in every way.

``tilde_intersection`` gives x~^i y^(n-1-i) on the blow-up of U_d along the
stratum of curves with a ghost component carrying two nodes. For n <= 4
only that one stratum matters, and the correction is a split sum.
"""
from __future__ import annotations

from fractions import Fraction

from .cache import Cache, PhiKey, default_cache
from .constraints import ConstraintMultiset, marked_dimension, splits_by_weight
from .sigma import sigma_counts, sigma_with

SUPPORTED_N = (2, 3, 4)


class UnsupportedAmbientError(ValueError):
    """The blow-up corrections are only implemented for n <= 4."""


def phi(n: int, d: int, i: int, j: int, c: ConstraintMultiset, cache: Cache | None = None) -> Fraction:
    if n < 2:
        raise ValueError(f"ambient dimension must be at least 2, got {n}")
    if d < 1:
        raise ValueError(f"degree must be positive, got {d}")
    if i < 0 or j < 0:
        raise ValueError("exponents must be nonnegative")
    if c.n != n:
        raise ValueError(f"constraints are for P^{c.n}, not P^{n}")
    return phi_counts(cache or default_cache(n), d, i, j, c.counts)


def phi_counts(cache: Cache, d: int, i: int, j: int, counts: tuple[int, ...]) -> Fraction:
    # an unconstrained extra point kills every term of the recursion
    if counts[0] or i < 0 or j < 0 or j > cache.n:
        return Fraction(0)
    if i + j != marked_dimension(cache.n, d, counts):
        return Fraction(0)
    if i == 0:
        return Fraction(sigma_with(cache, d, counts, (j,)))
    key = PhiKey(cache.n, d, i, j, counts)
    hit = cache.phi.lookup(key)
    if hit is not None:
        cache.stats.cache_hits += 1
        return hit
    cache.stats.phi_evals += 1
    value = _phi_step(cache, d, i - 1, j, counts)
    cache.store(key, value)
    return value


def _with(counts: tuple[int, ...], e: int) -> tuple[int, ...] | None:
    if e < 0 or e >= len(counts):
        return None
    out = list(counts)
    out[e] += 1
    return tuple(out)


def _phi_step(cache: Cache, d: int, i: int, j: int, counts: tuple[int, ...]) -> Fraction:
    """phi_d(i+1, j) from lower terms."""
    n = cache.n
    value = Fraction(-2, d) * phi_counts(cache, d, i, j + 1, counts)
    value += Fraction(1, d * d) * phi_counts(cache, d, i, j, _with(counts, 2))

    groups = splits_by_weight(counts)
    split_sum = 0
    for d1 in range(1, d):
        d2 = d - d1
        marked_top = (n + 1) * d1 + n - 2
        part = Fraction(0)
        # marked point on the d1 component away from the node
        for i1 in range(1, n + 1):
            i2 = n - i1
            if i2 < 1:
                continue
            # dim U_d1(A + H^i1) = i + j
            need = marked_top - (i1 - 1) - (i + j)
            for left, right, mult in groups.get(need, ()):
                s = sigma_with(cache, d2, right, (i2,))
                if s:
                    part += mult * s * phi_counts(cache, d1, i, j, _with(left, i1))
        # marked point bubbled off together with the node
        if i >= 1:
            for i1 in range(0, n + 1):
                i2 = n + j - i1
                if not 1 <= i2 <= n:
                    continue
                need = marked_top - (i - 1 + i1)
                for left, right, mult in groups.get(need, ()):
                    s = sigma_with(cache, d2, right, (i2,))
                    if s:
                        part += mult * s * phi_counts(cache, d1, i - 1, i1, left)
        split_sum += d2 * d2 * part
    return value + Fraction(split_sum) / (d * d)


def tilde_intersection(n: int, d: int, i: int, c: ConstraintMultiset, cache: Cache | None = None) -> Fraction:
    """x~^i y^(n-1-i) on the blown-up space of 1-marked curves through ``c``."""
    if n not in SUPPORTED_N:
        raise UnsupportedAmbientError(
            f"blow-up corrections are implemented for n in 2..4 only, got n={n}; "
            "the general multi-stratum blow-up is out of scope"
        )
    if not 0 <= i <= n - 1:
        raise ValueError(f"exponent i must lie in 0..{n - 1}, got {i}")
    if c.n != n:
        raise ValueError(f"constraints are for P^{c.n}, not P^{n}")
    if d < 1:
        raise ValueError(f"degree must be positive, got {d}")
    return tilde_counts(cache or default_cache(n), d, i, c.counts)


def tilde_counts(cache: Cache, d: int, i: int, counts: tuple[int, ...]) -> Fraction:
    n = cache.n
    base = phi_counts(cache, d, i, n - 1 - i, counts)
    if n == 2 or i <= 1:
        return base
    groups = splits_by_weight(counts)
    correction = 0
    for d1 in range(1, d):
        d2 = d - d1
        if i == 2:
            # ordered splits count each ghost-stratum point twice; halved below
            for i1 in range(1, n + 1):
                i2 = 2 * n - 3 - i1
                if not 1 <= i2 <= n:
                    continue
                need = (n + 1) * d1 + n - 3 - (i1 - 1)
                for left, right, mult in groups.get(need, ()):
                    a = sigma_with(cache, d1, left, (i1,))
                    if a:
                        correction += mult * a * sigma_with(cache, d2, right, (i2,))
        else:
            # n == 4, i == 3
            for i1 in range(0, n + 1):
                i2 = 4 - i1
                if not 1 <= i2 <= n:
                    continue
                need = (n + 1) * d1 + n - 2 - (1 + i1)
                for left, right, mult in groups.get(need, ()):
                    s = sigma_with(cache, d2, right, (i2,))
                    if s:
                        correction += mult * s * phi_counts(cache, d1, 1, i1, left)
    if i == 2:
        return base - Fraction(correction, 2)
    return base - correction
