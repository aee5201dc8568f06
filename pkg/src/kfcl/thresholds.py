"""Bounds guaranteed on an n-cover, as functions of n and the number of orders d."""
from __future__ import annotations


def kfcl_length(n: int) -> int:
    """Alternating pattern length reached under a single order."""
    return n + 2


def lemma_rank(n: int) -> float:
    """Rank reached by any monotone, antipode-separating map on realized samples."""
    return (n + 1) / 2


def product_bound(n: int) -> float:
    """Lower bound on the product of all h_r at the best point."""
    return (n + 1) / 2


def multi_order_length(n: int, d: int) -> float:
    """Length of an alternating chain monotone in all ``d`` orders."""
    if d < 1:
        raise ValueError("d must be >= 1")
    return ((n + 1) / 2) ** (1.0 / 2 ** (d - 1))


def two_order_length(n: int) -> float:
    return multi_order_length(n, 2)
