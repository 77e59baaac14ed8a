"""Permutations of S_n and the combinatorics attached to them.

Grid coordinates follow the bottom-up convention used throughout the package:
a box ``(i, j)`` is in row ``i`` counted from the *bottom* of the n x n grid and
column ``j`` counted from the left, so ``(1, 1)`` is the southwest corner.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Sequence

__all__ = [
    "MAX_N", "Permutation", "RankMatrix", "Diagram", "Partition",
    "identity", "longest", "simple", "all_permutations",
    "length", "bruhat_leq", "bruhat_lt", "rank_matrix", "rothe_diagram",
    "rothe_diagram_by_hooks", "essential_set", "canonical_labeling", "render_diagram",
    "left_descents", "right_descents", "right_ascents", "last_ascent",
    "v_max", "cograssmannian_data", "embed_matrix_schubert", "gamma",
]

MAX_N = 16

Box = tuple[int, int]


class Permutation(tuple):
    """A permutation in one-line notation, as an immutable tuple of 1..n.

    >>> p = Permutation.parse("31524")
    >>> p(1), p.n, str(p)
    (3, 5, '31524')
    >>> str(Permutation.parse("10,8,6,9,7,5,4,3,2,1"))
    '10,8,6,9,7,5,4,3,2,1'
    """

    __slots__ = ()

    def __new__(cls, word: Iterable[int]):
        word = tuple(int(a) for a in word)
        n = len(word)
        if n == 0 or n > MAX_N:
            raise ValueError(f"permutation size must be in 1..{MAX_N}, got {n}")
        if sorted(word) != list(range(1, n + 1)):
            raise ValueError(f"{word!r} is not a permutation of 1..{n}")
        return tuple.__new__(cls, word)

    @classmethod
    def _unchecked(cls, word: Iterable[int]) -> "Permutation":
        return tuple.__new__(cls, word)

    @classmethod
    def parse(cls, text: "str | Sequence[int] | Permutation") -> "Permutation":
        """Read one-line notation: ``"31524"`` or ``"10,8,6,9,7,5,4,3,2,1"``."""
        if isinstance(text, Permutation):
            return text
        if not isinstance(text, str):
            return cls(text)
        s = text.strip().replace(" ", "")
        if "," in s:
            return cls(int(a) for a in s.split(",") if a)
        if not s.isdigit():
            raise ValueError(f"malformed permutation {text!r}")
        return cls(int(c) for c in s)

    @property
    def n(self) -> int:
        return len(self)

    def __call__(self, i: int) -> int:
        return self[i - 1]

    def __str__(self) -> str:
        if len(self) <= 9:
            return "".join(map(str, self))
        return ",".join(map(str, self))

    def __repr__(self) -> str:
        return f"Permutation({str(self)!r})"

    def __mul__(self, other: "Permutation") -> "Permutation":
        # composition: (self * other)(i) = self(other(i))
        if len(other) != len(self):
            raise ValueError("size mismatch")
        return Permutation._unchecked(self[a - 1] for a in other)

    def inverse(self) -> "Permutation":
        inv = [0] * len(self)
        for pos, val in enumerate(self, 1):
            inv[val - 1] = pos
        return Permutation._unchecked(inv)

    def times_s(self, i: int) -> "Permutation":
        """Right multiplication by s_i: swap the entries in positions i, i+1."""
        w = list(self)
        w[i - 1], w[i] = w[i], w[i - 1]
        return Permutation._unchecked(w)

    def s_times(self, i: int) -> "Permutation":
        """Left multiplication by s_i: swap the values i and i+1."""
        return Permutation._unchecked(
            i + 1 if a == i else i if a == i + 1 else a for a in self)

    def length(self) -> int:
        return length(self)

    def is_identity(self) -> bool:
        return all(a == k for k, a in enumerate(self, 1))


def identity(n: int) -> Permutation:
    return Permutation._unchecked(range(1, n + 1))


def longest(n: int) -> Permutation:
    return Permutation._unchecked(range(n, 0, -1))


def simple(i: int, n: int) -> Permutation:
    return identity(n).times_s(i)


def all_permutations(n: int) -> Iterator[Permutation]:
    for w in itertools.permutations(range(1, n + 1)):
        yield Permutation._unchecked(w)


@lru_cache(maxsize=None)
def length(p: Sequence[int]) -> int:
    """Number of inversions."""
    n = len(p)
    return sum(1 for a in range(n) for b in range(a + 1, n) if p[a] > p[b])


@dataclass(frozen=True)
class RankMatrix:
    """``r[i, j] = #{k <= j : w(k) >= n - i + 1}`` with 1-based, bottom-up rows."""

    n: int
    flat: tuple[int, ...]  # row-major, bottom row first

    def __getitem__(self, ij: Box) -> int:
        i, j = ij
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            return 0 if i <= 0 or j <= 0 else min(i, j)
        return self.flat[(i - 1) * self.n + (j - 1)]

    def rows_top_down(self) -> list[list[int]]:
        n = self.n
        return [list(self.flat[(i - 1) * n:i * n]) for i in range(n, 0, -1)]

    def __str__(self) -> str:
        return "\n".join(" ".join(f"{a:2d}" for a in row) for row in self.rows_top_down())


@lru_cache(maxsize=200_000)
def _rank_flat(w: tuple[int, ...]) -> tuple[int, ...]:
    n = len(w)
    out = []
    for i in range(1, n + 1):
        lo = n - i + 1
        acc = 0
        for j in range(n):
            if w[j] >= lo:
                acc += 1
            out.append(acc)
    return tuple(out)


def rank_matrix(w: Permutation) -> RankMatrix:
    return RankMatrix(len(w), _rank_flat(tuple(w)))


def bruhat_leq(v: Permutation, w: Permutation) -> bool:
    """Bruhat order test by entrywise comparison of rank matrices."""
    if len(v) != len(w):
        raise ValueError("size mismatch")
    if v == w:
        return True
    if length(v) >= length(w):
        return False
    return all(a <= b for a, b in zip(_rank_flat(tuple(v)), _rank_flat(tuple(w))))


def bruhat_lt(v: Permutation, w: Permutation) -> bool:
    return v != w and bruhat_leq(v, w)


@dataclass(frozen=True)
class Diagram:
    owner: Permutation
    boxes: frozenset

    def __len__(self) -> int:
        return len(self.boxes)

    def __contains__(self, box) -> bool:
        return box in self.boxes

    def __iter__(self):
        return iter(reading_order(self.boxes))

    def row(self, i: int) -> list[Box]:
        return sorted(b for b in self.boxes if b[0] == i)

    def column(self, j: int) -> list[Box]:
        return sorted(b for b in self.boxes if b[1] == j)


def reading_order(boxes: Iterable[Box]) -> list[Box]:
    """Rows left to right, from the top row down."""
    return sorted(boxes, key=lambda b: (-b[0], b[1]))


@lru_cache(maxsize=100_000)
def _diagram(v: tuple[int, ...]) -> frozenset:
    n = len(v)
    inv = [0] * (n + 1)
    for pos, val in enumerate(v, 1):
        inv[val] = pos
    return frozenset(
        (i, j)
        for j in range(1, n + 1)
        for i in range(1, n - v[j - 1] + 1)
        if j < inv[n - i + 1]
    )


def rothe_diagram(v: Permutation) -> Diagram:
    return Diagram(v, _diagram(tuple(v)))


def rothe_diagram_by_hooks(v: Permutation) -> Diagram:
    """Same diagram via dots at ``(n - v(j) + 1, j)`` and their north/east hooks."""
    n = len(v)
    killed = set()
    for j in range(1, n + 1):
        r = n - v(j) + 1
        killed.update((r, c) for c in range(j, n + 1))
        killed.update((i, j) for i in range(r, n + 1))
    boxes = {(i, j) for i in range(1, n + 1) for j in range(1, n + 1)} - killed
    return Diagram(v, frozenset(boxes))


def essential_set(v: Permutation) -> frozenset:
    d = _diagram(tuple(v))
    return frozenset(
        (i, j) for (i, j) in d if (i + 1, j) not in d and (i, j + 1) not in d)


@lru_cache(maxsize=100_000)
def _labeling(v: tuple[int, ...]) -> tuple:
    d = _diagram(v)
    out = []
    for box in reading_order(d):
        i, j = box
        before = sum(1 for (a, b) in d if a == i and b < j)
        out.append((box, i + before))
    return tuple(out)


def canonical_labeling(v: Permutation) -> list[tuple[Box, int]]:
    """Boxes of D(v) with their canonical labels, in reading order.

    >>> [lab for _, lab in canonical_labeling(Permutation.parse("31524"))]
    [4, 2, 3, 4, 1, 2]
    """
    return list(_labeling(tuple(v)))


def render_diagram(v: Permutation, labels: bool = True) -> str:
    """Fixed-width picture of D(v): dots 'o' with east/north hooks, boxes labeled.

    Top row first.  Boxes show their canonical label (or '#' when ``labels`` is
    false); hook cells show '-', '|' or '+' where two hooks cross.
    """
    n = len(v)
    lab = dict(_labeling(tuple(v)))
    dot_row = {j: n - v(j) + 1 for j in range(1, n + 1)}
    dot_col = {r: j for j, r in dot_row.items()}
    lines = ["+" + "-" * (3 * n) + "+"]
    for i in range(n, 0, -1):
        cells = []
        for j in range(1, n + 1):
            horiz = dot_col[i] < j
            vert = dot_row[j] < i
            if dot_row[j] == i:
                cells.append(" o-" if j < n else " o ")
            elif (i, j) in lab:
                cells.append(f"{lab[(i, j)]:^3}" if labels else " # ")
            elif horiz and vert:
                cells.append("-+-")
            elif horiz:
                cells.append("---")
            else:
                cells.append(" | ")
        lines.append("|" + "".join(cells) + "|")
    lines.append("+" + "-" * (3 * n) + "+")
    return "\n".join(lines)


def left_descents(w: Permutation) -> set[int]:
    """``{i : s_i w < w}``: the value i+1 sits to the left of i."""
    pos = w.inverse()
    return {i for i in range(1, len(w)) if pos(i + 1) < pos(i)}


def right_descents(w: Permutation) -> set[int]:
    return {i for i in range(1, len(w)) if w(i) > w(i + 1)}


def right_ascents(w: Permutation) -> list[int]:
    return [i for i in range(1, len(w)) if w(i) < w(i + 1)]


def last_ascent(w: Permutation) -> Optional[int]:
    asc = right_ascents(w)
    return asc[-1] if asc else None


def _segments(gens: set[int]) -> list[range]:
    """Maximal runs a, a+1, ..., b of generators, as index ranges a..b+1."""
    out = []
    for i in sorted(gens):
        if out and out[-1][-1] == i:
            out[-1].append(i + 1)
        else:
            out.append([i, i + 1])
    return [range(s[0], s[-1] + 1) for s in out]


def _sort_values_desc(v: list[int], values: range) -> None:
    positions = sorted(k for k, a in enumerate(v) if a in values)
    for k, a in zip(positions, sorted(values, reverse=True)):
        v[k] = a


def _sort_positions_desc(v: list[int], positions: range) -> None:
    idx = [k - 1 for k in positions]
    vals = sorted((v[k] for k in idx), reverse=True)
    for k, a in zip(idx, vals):
        v[k] = a


def v_max(v: Permutation, w: Permutation) -> Permutation:
    """Bruhat-maximal element of the double coset ``S_T v S_T'``.

    T and T' are the left and right descent sets of ``w``.

    >>> str(v_max(Permutation.parse("316298475"), Permutation.parse("896354721")))
    '362198754'
    """
    if len(v) != len(w):
        raise ValueError("size mismatch")
    tl, tr = left_descents(w), right_descents(w)
    cur = list(v)
    while True:
        before = tuple(cur)
        for seg in _segments(tl):
            _sort_values_desc(cur, seg)
        for seg in _segments(tr):
            _sort_positions_desc(cur, seg)
        if tuple(cur) == before:
            break
    out = Permutation._unchecked(cur)
    assert tl <= left_descents(out) and tr <= right_descents(out)
    return out


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        p = self.parts
        if any(a < 0 for a in p) or any(p[k] < p[k + 1] for k in range(len(p) - 1)):
            raise ValueError(f"not a partition: {p}")

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __getitem__(self, k):
        return self.parts[k]

    def size(self) -> int:
        return sum(self.parts)

    def nonzero(self) -> tuple[int, ...]:
        return tuple(a for a in self.parts if a)

    def contains(self, other: "Partition") -> bool:
        a, b = self.parts, other.parts
        return all((a[k] if k < len(a) else 0) >= b[k] for k in range(len(b)))

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")"


def cograssmannian_data(w: Permutation) -> Optional[tuple[int, Partition]]:
    """``(k, lambda(w))`` if w has exactly one ascent, at position k; else None."""
    asc = right_ascents(w)
    if len(asc) != 1:
        return None
    k, n = asc[0], len(w)
    lam = [0] * k
    for i in range(1, k + 1):
        lam[k - i] = n - w(i) + 1 - i
    return k, Partition(tuple(lam))


def embed_matrix_schubert(w: Permutation) -> tuple[Permutation, Permutation]:
    """``(w0*w0, w_hat)`` in S_2n realizing the matrix Schubert variety of w.

    >>> [str(p) for p in embed_matrix_schubert(Permutation.parse("2143"))]
    ['43218765', '78564321']
    """
    n = len(w)
    star = Permutation._unchecked(
        [n + 1 - i for i in range(1, n + 1)] + [2 * n + 1 - i for i in range(1, n + 1)])
    w_times_1 = list(w) + list(range(n + 1, 2 * n + 1))
    w_hat = Permutation._unchecked(2 * n + 1 - a for a in w_times_1)
    return star, w_hat


def gamma(n: int) -> list[tuple[Permutation, Permutation]]:
    """All strict Bruhat-comparable pairs (v, w), v < w, sorted."""
    perms = sorted(all_permutations(n))
    out = []
    for v in perms:
        lv = length(v)
        for w in perms:
            if length(w) > lv and bruhat_leq(v, w):
                out.append((v, w))
    return out
