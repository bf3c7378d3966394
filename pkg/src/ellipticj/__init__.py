"""Exact counts of genus-1 curves with fixed j-invariant in P^n, n <= 4."""
