from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ellipticj.constraints import ConstraintMultiset, marked_dimension, symbolic_parse
from ellipticj.intersections import UnsupportedAmbientError, phi, tilde_intersection
from ellipticj.sigma import sigma, sigma_p2_oracle


def points(n, k):
    return ConstraintMultiset.from_mapping(n, {n: k})


@pytest.mark.parametrize("d", range(1, 7))
def test_p2_marked_point_classes(d):
    c = points(2, 3 * d - 1)
    s = sigma_p2_oracle(d)
    assert phi(2, d, 0, 1, c) == d * s
    assert phi(2, d, 1, 0, c) == -2 * s
    assert isinstance(phi(2, d, 1, 0, c), Fraction)


def test_p2_cubic_value():
    assert phi(2, 3, 1, 0, points(2, 8)) == -24


@pytest.mark.parametrize("d", range(2, 7))
def test_p2_closed_form_chain(d):
    # sigma(l, l, p^(3d-1)) - 3 ev*(H) - c1(L*) = (d^2 - 3d + 2) sigma_d
    c = points(2, 3 * d - 1)
    s = sigma(2, d, c)
    lhs = sigma(2, d, c.add(1, 2)) - 3 * phi(2, d, 0, 1, c) - phi(2, d, 1, 0, c)
    assert lhs == (d * d - 3 * d + 2) * s


def _p3_split(d, a, b, weight):
    """sum over d1 + d2 = d and constraint splits of weight(d1, d2) sigma_d1(l, .) sigma_d2(.)"""
    total = 0
    for d1 in range(1, d):
        d2 = d - d1
        for a1 in range(a + 1):
            for b1 in range(b + 1):
                left = sigma(3, d1, ConstraintMultiset.from_mapping(3, {3: a1, 2: b1 + 1}))
                right = sigma(3, d2, ConstraintMultiset.from_mapping(3, {3: a - a1, 2: b - b1}))
                total += comb(a, a1) * comb(b, b1) * weight(d1, d2) * left * right
    return total


P3_MIXES = [(d, a, 4 * d - 1 - 2 * a) for d in range(2, 6) for a in range(0, 2 * d)]


@pytest.mark.parametrize("d, a, b", P3_MIXES)
def test_p3_closed_forms(d, a, b):
    """The P^3 intersections expressed through genus-0 counts alone."""
    c = ConstraintMultiset.from_mapping(3, {3: a, 2: b})
    s_l = sigma(3, d, c.add(2))
    assert phi(3, d, 0, 2, c) == s_l
    xy = Fraction(-s_l, d) + Fraction(_p3_split(d, a, b, lambda d1, d2: d1 * d2 * d2), d)
    assert phi(3, d, 1, 1, c) == xy
    assert tilde_intersection(3, d, 1, c) == xy
    split = _p3_split(d, a, b, lambda d1, d2: d2)
    assert phi(3, d, 2, 0, c) == -split
    assert tilde_intersection(3, d, 2, c) == -2 * split


def test_degree_two_blowup_value():
    # -2 * C(7,3) * sigma_1(l^4) * sigma_1(l^4) * d2, the value that makes tau_2 vanish
    assert tilde_intersection(3, 2, 2, symbolic_parse("l:7", 3)) == -280


@pytest.mark.parametrize("d", range(1, 6))
def test_tilde_low_rows(d):
    c = ConstraintMultiset.from_mapping(3, {2: 4 * d - 1})
    assert tilde_intersection(3, d, 0, c) == sigma(3, d, c.add(2))


def _marked_keys(n, max_d):
    keys = []
    for d in range(1, max_d + 1):
        top = (n + 1) * d + n - 2
        for c3 in range(top + 1):
            for c2 in range(top + 2):
                for c1 in range(2):
                    entries = {1: c1, 2: c2}
                    if n >= 3:
                        entries[3] = c3
                    elif c3:
                        continue
                    c = ConstraintMultiset.from_mapping(n, entries)
                    dim = marked_dimension(n, d, c.counts)
                    if 0 <= dim <= n + 2:
                        keys.append((d, c, dim))
    return keys


@pytest.mark.parametrize("n, max_d", [(2, 5), (3, 4)])
def test_base_case_and_denominators(n, max_d):
    for d, c, dim in _marked_keys(n, max_d):
        if 1 <= dim <= n:
            assert phi(n, d, 0, dim, c) == sigma(n, d, c.add(dim))
        for i in range(0, dim + 1):
            v = phi(n, d, i, dim - i, c)
            assert d ** (4 * (i + 1)) % v.denominator == 0, (d, c, i, v)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 4), st.integers(1, 3), st.lists(st.integers(0, 5), min_size=4, max_size=4),
       st.integers(0, 6), st.integers(0, 6))
def test_dimension_gate(n, d, raw, i, j):
    c = ConstraintMultiset(n, (0, *raw[:n]))
    if i + j != marked_dimension(n, d, c.counts):
        assert phi(n, d, i, j, c) == 0


@pytest.mark.parametrize("d", range(1, 6))
def test_n2_collapse(d):
    c = points(2, 3 * d - 1)
    for i in range(2):
        assert tilde_intersection(2, d, i, c) == phi(2, d, i, 1 - i, c)


def test_unsupported_ambient():
    c = ConstraintMultiset.from_mapping(5, {4: 11})
    with pytest.raises(UnsupportedAmbientError):
        tilde_intersection(5, 2, 0, c)


def test_phi_rejects_bad_input():
    with pytest.raises(ValueError):
        phi(3, 0, 0, 0, ConstraintMultiset.empty(3))
    with pytest.raises(ValueError):
        phi(3, 1, -1, 0, ConstraintMultiset.empty(3))
