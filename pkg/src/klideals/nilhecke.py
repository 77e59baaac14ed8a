"""Demazure products in the 0-Hecke monoid (idempotent presentation u_i^2 = u_i)."""

from __future__ import annotations

from typing import NewType, Sequence

from .perm import Permutation, identity

__all__ = ["DemazureElement", "demazure_mul", "demazure_product", "fold"]

# u_w, identified with its index w
DemazureElement = NewType("DemazureElement", Permutation)


def demazure_mul(u: Permutation, i: int) -> Permutation:
    """``u_w u_i``: u_w if w s_i < w, else u_{w s_i}."""
    if not 1 <= i < len(u):
        raise ValueError(f"generator index {i} out of range for S_{len(u)}")
    if u[i - 1] > u[i]:
        return u
    return u.times_s(i)


def fold(start: list[int], word: Sequence[int]) -> list[int]:
    """In-place left fold of a word onto a one-line list (no validation)."""
    for i in word:
        a, b = start[i - 1], start[i]
        if a < b:
            start[i - 1], start[i] = b, a
    return start


def demazure_product(word: Sequence[int], n: int) -> Permutation:
    """Demazure product of a word in the generators of S_n.

    >>> str(demazure_product((2, 4), 5))
    '13254'
    >>> str(demazure_product((1, 1, 1), 3))
    '213'
    """
    for i in word:
        if not 1 <= i < n:
            raise ValueError(f"generator index {i} out of range for S_{n}")
    return Permutation._unchecked(fold(list(identity(n)), word))
