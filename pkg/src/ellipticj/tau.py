"""Genus-1 enumerative invariants with fixed j-invariant.

The general assembly for n <= 4 is

    n_j tau_d(c) = sum_{i1+i2=n} sigma_d(H^i1, H^i2, c)
                   - sum_{i=0}^{n-1} C(n+1, i+2) x~^i y^(n-1-i) [U~_d(c)]

where the first sum is the genus-1 perturbed invariant obtained by
degenerating the torus to a nodal rational curve, and the second removes
the contribution of maps with a ghost base at the marked point. The
right-hand side does not depend on j, so ``n_j * tau`` is the same number
for every j-class and the three invariants differ only by the division.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .arith import IntegralityError, as_integer, binomial, exact_div
from .cache import Cache, default_cache
from .constraints import ConstraintMultiset, tau_dimension_defect
from .intersections import SUPPORTED_N, UnsupportedAmbientError, tilde_counts
from .sigma import sigma, sigma_with


class DimensionError(ValueError):
    """Constraints do not cut the relevant moduli space to dimension 0."""

    def __init__(self, message: str, defect: int):
        super().__init__(message)
        self.defect = defect


class JClass(enum.Enum):
    GENERIC = ("generic", 2)
    J0 = ("0", 6)
    J1728 = ("1728", 4)

    def __init__(self, label: str, n_j: int):
        self.label = label
        self.n_j = n_j

    @classmethod
    def parse(cls, text: str) -> "JClass":
        for member in cls:
            if member.label == text:
                return member
        raise ValueError(f"unknown j-class {text!r}; expected generic, 0 or 1728")


@dataclass(frozen=True)
class TauResult:
    value: int
    nj_times_tau: int
    path: str
    j: JClass = JClass.GENERIC

    @property
    def n_j(self) -> int:
        return self.j.n_j


def _require_dimension(n: int, d: int, c: ConstraintMultiset) -> None:
    defect = tau_dimension_defect(n, d, c)
    if defect:
        raise DimensionError(
            f"constraints {c} impose {c.weight()} conditions on degree-{d} elliptic curves "
            f"in P^{n}, which need {(n + 1) * d - 1} (defect {defect:+d})",
            defect,
        )


def _finish(nj_tau: Fraction | int, j: JClass, path: str) -> TauResult:
    total = as_integer(nj_tau, f"n_j*tau ({path})")
    value = exact_div(total, j.n_j, f"tau for j={j.label} ({path})")
    return TauResult(value=value, nj_times_tau=total, path=path, j=j)


def rt_genus1(n: int, d: int, beta1: int, rest: ConstraintMultiset, cache: Cache | None = None) -> int:
    """Genus-1 perturbed invariant with ``beta1`` at the fixed marked point."""
    c = rest.add(beta1)
    _require_dimension(n, d, c)
    cache = cache or default_cache(n)
    return sum(sigma_with(cache, d, c.counts, (i1, n - i1)) for i1 in range(n + 1))


def tau_general(
    n: int, d: int, c: ConstraintMultiset, j: JClass = JClass.GENERIC, cache: Cache | None = None
) -> TauResult:
    if n not in SUPPORTED_N:
        raise UnsupportedAmbientError(f"tau is supported for 2 <= n <= 4 only, got n={n}")
    if d < 1:
        raise ValueError(f"degree must be positive, got {d}")
    if c.n != n:
        raise ValueError(f"constraints are for P^{c.n}, not P^{n}")
    if not len(c):
        raise ValueError("at least one constraint is required")
    _require_dimension(n, d, c)
    cache = cache or default_cache(n)
    perturbed = sum(sigma_with(cache, d, c.counts, (i1, n - i1)) for i1 in range(n + 1))
    correction = sum(binomial(n + 1, i + 2) * tilde_counts(cache, d, i, c.counts) for i in range(n))
    return _finish(perturbed - correction, j, "general")


def tau_p2(d: int, j: JClass = JClass.GENERIC, cache: Cache | None = None) -> TauResult:
    """Plane curves through 3d - 1 points: tau = (2 / n_j) C(d-1, 2) sigma_d."""
    if d < 1:
        raise ValueError(f"degree must be positive, got {d}")
    s = sigma(2, d, ConstraintMultiset.from_mapping(2, {2: 3 * d - 1}), cache)
    return _finish(2 * binomial(d - 1, 2) * s, j, "p2-closed")


def tau_p3(d: int, a: int, b: int, j: JClass = JClass.GENERIC, cache: Cache | None = None) -> TauResult:
    """Space curves through ``a`` points and ``b`` lines, from genus-0 counts only."""
    if d < 1:
        raise ValueError(f"degree must be positive, got {d}")
    if a < 0 or b < 0:
        raise ValueError("point and line counts must be nonnegative")
    defect = 2 * a + b - (4 * d - 1)
    if defect:
        raise DimensionError(f"need 2a + b = {4 * d - 1}, got {2 * a + b} (defect {defect:+d})", defect)
    cache = cache or default_cache(3)

    def s(dd: int, pts: int, lines: int) -> int:
        return sigma(3, dd, ConstraintMultiset.from_mapping(3, {3: pts, 2: lines}), cache)

    total = Fraction(2 * (d - 1) * (d - 2), d) * s(d, a, b + 1)
    split = 0
    for d1 in range(1, d):
        d2 = d - d1
        weight = d2 * (2 * d1 * d2 - d)
        for a1 in range(a + 1):
            for b1 in range(b + 1):
                left = s(d1, a1, b1 + 1)
                if left:
                    split += binomial(a, a1) * binomial(b, b1) * weight * left * s(d2, a - a1, b - b1)
    total -= Fraction(2 * split, d)
    return _finish(total, j, "p3-closed")


def tau_rescale(base: TauResult, target: JClass) -> TauResult:
    """Convert a generic-j invariant to another j-class."""
    if base.j is not JClass.GENERIC:
        raise ValueError("rescaling starts from a generic-j result")
    factor = {JClass.GENERIC: 1, JClass.J0: 3, JClass.J1728: 2}[target]
    value = exact_div(base.value, factor, f"tau for j={target.label}")
    return TauResult(value=value, nj_times_tau=target.n_j * value, path=base.path, j=target)


__all__ = [
    "DimensionError",
    "IntegralityError",
    "JClass",
    "TauResult",
    "UnsupportedAmbientError",
    "rt_genus1",
    "tau_general",
    "tau_p2",
    "tau_p3",
    "tau_rescale",
]
