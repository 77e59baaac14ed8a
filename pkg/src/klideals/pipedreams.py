"""Pipe dreams on Rothe diagrams: evaluation, enumeration, flattening and strands."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator

from .nilhecke import fold
from .perm import (Box, Permutation, _labeling, bruhat_leq, identity, length,
                   rothe_diagram)

__all__ = [
    "PipeDream", "StrandDiagram", "dream_demazure", "enumerate_pipes",
    "iter_pipes", "flatten", "render_dream", "render_strands",
]


@dataclass(frozen=True)
class PipeDream:
    owner: Permutation
    crosses: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "crosses", frozenset(map(tuple, self.crosses)))
        extra = self.crosses - rothe_diagram(self.owner).boxes
        if extra:
            raise ValueError(f"crosses {sorted(extra)} lie outside D({self.owner})")

    def __len__(self) -> int:
        return len(self.crosses)

    def word(self) -> tuple[int, ...]:
        """Labels of the crossed boxes in reading order."""
        return tuple(lab for box, lab in _labeling(tuple(self.owner)) if box in self.crosses)

    def to_json(self) -> dict:
        return {"v": str(self.owner), "crosses": [list(b) for b in sorted(self.crosses)]}

    @classmethod
    def from_json(cls, data: "dict | str") -> "PipeDream":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(Permutation.parse(data["v"]), frozenset(tuple(b) for b in data["crosses"]))


def dream_demazure(p: PipeDream) -> Permutation:
    n = len(p.owner)
    return Permutation._unchecked(fold(list(range(1, n + 1)), p.word()))


def iter_pipes(v: Permutation, target: Permutation,
               reduced_only: bool = False) -> Iterator[frozenset]:
    """Cross sets P on D(v) with Demazure product ``target``.

    Backtracks over boxes in reading order.  A partial choice is abandoned as
    soon as its own product leaves the interval below ``target`` or when the
    product of the chosen prefix followed by every remaining letter no longer
    reaches ``target``; Demazure products only grow, so both cuts are sound.
    """
    n = len(v)
    if len(target) != n:
        raise ValueError("size mismatch")
    labeled = _labeling(tuple(v))
    boxes = [b for b, _ in labeled]
    word = [lab for _, lab in labeled]
    L = len(word)
    goal = length(target)
    tgt = Permutation._unchecked(target)
    chosen: list[Box] = []

    def reaches(cur: list[int], k: int) -> bool:
        top = Permutation._unchecked(fold(list(cur), word[k:]))
        return bruhat_leq(tgt, top)

    def rec(k: int, cur: list[int], ncross: int) -> Iterator[frozenset]:
        if k == L:
            if tuple(cur) == tgt:
                yield frozenset(chosen)
            return
        if not reaches(cur, k):
            return
        # leave box k empty
        yield from rec(k + 1, cur, ncross)
        i = word[k]
        a, b = cur[i - 1], cur[i]
        if a < b:
            nxt = list(cur)
            nxt[i - 1], nxt[i] = b, a
            if not bruhat_leq(Permutation._unchecked(nxt), tgt):
                return
        else:
            if reduced_only:
                return
            nxt = cur
        if reduced_only and ncross + 1 > goal:
            return
        chosen.append(boxes[k])
        yield from rec(k + 1, nxt, ncross + 1)
        chosen.pop()

    yield from rec(0, list(range(1, n + 1)), 0)


def enumerate_pipes(v: Permutation, target: Permutation,
                    reduced_only: bool = False) -> set[PipeDream]:
    """``Pipes(v, target)``, or ``RedPipes(v, target)`` when ``reduced_only``."""
    return {PipeDream(v, c) for c in iter_pipes(v, target, reduced_only)}


@lru_cache(maxsize=50_000)
def cross_sets(v: Permutation, target: Permutation, reduced_only: bool) -> tuple:
    """Cached, deterministically ordered cross sets (sorted box lists)."""
    return tuple(sorted(tuple(sorted(c)) for c in iter_pipes(v, target, reduced_only)))


# ---------------------------------------------------------------- strands

@dataclass(frozen=True)
class StrandDiagram:
    n: int
    crosses: frozenset  # boxes of the n x n grid carrying a cross
    strand_permutation: Permutation
    crossings: tuple  # ((a, b), count) for strands a < b that cross

    def is_cross(self, box: Box) -> bool:
        return box in self.crosses

    def max_crossings(self) -> int:
        return max((c for _, c in self.crossings), default=0)


def flatten_map(v: Permutation) -> dict[Box, Box]:
    """Each box of D(v) pushed south past the non-diagram squares of its column."""
    d = rothe_diagram(v).boxes
    out = {}
    for j in range(1, len(v) + 1):
        col = sorted(i for (i, c) in d if c == j)
        for new_row, i in enumerate(col, 1):
            out[(i, j)] = (new_row, j)
    return out


def _trace(n: int, crosses: frozenset) -> tuple[list[int], Counter]:
    # Strands enter at the bottom of each column and leave through the left edge.
    # Elbow tiles join bottom->left and right->top; crosses go straight through.
    ends = [0] * n
    hits: Counter = Counter()
    # occupant[(i, j, side)] is the strand entering tile (i, j) from side
    for start in range(1, n + 1):
        i, j, side = 1, start, "bottom"
        while True:
            if (i, j) in crosses:
                if side == "bottom":
                    i += 1
                else:
                    j -= 1
            else:
                if side == "bottom":
                    j -= 1
                    side = "right"
                else:
                    i += 1
                    side = "bottom"
            if j == 0:
                ends[start - 1] = i
                break
            if i > n:
                raise RuntimeError("strand left through the top edge")
    # pairwise crossings: at each cross tile exactly two strands meet
    for box in crosses:
        pair = _strands_at(n, crosses, box)
        hits[pair] += 1
    return ends, hits


def _strands_at(n: int, crosses: frozenset, box: Box) -> tuple[int, int]:
    found = []
    for start in range(1, n + 1):
        i, j, side = 1, start, "bottom"
        while j > 0 and i <= n:
            if (i, j) == box:
                found.append(start)
                break
            if (i, j) in crosses:
                if side == "bottom":
                    i += 1
                else:
                    j -= 1
            elif side == "bottom":
                j -= 1
                side = "right"
            else:
                i += 1
                side = "bottom"
    return tuple(sorted(found))


def flatten(p: PipeDream) -> StrandDiagram:
    """Strand diagram of a reduced pipe dream after compressing columns south."""
    target = dream_demazure(p)
    if len(p) != length(target):
        raise ValueError("flatten requires a reduced pipe dream")
    fmap = flatten_map(p.owner)
    crosses = frozenset(fmap[b] for b in p.crosses)
    n = len(p.owner)
    ends, hits = _trace(n, crosses)
    return StrandDiagram(n, crosses, Permutation(ends), tuple(sorted(hits.items())))


# ---------------------------------------------------------------- ascii

def render_dream(p: PipeDream, labels: bool = False) -> str:
    """Top row first; '+' a cross, '·' an empty diagram box, '.' outside D(v)."""
    n = len(p.owner)
    d = rothe_diagram(p.owner).boxes
    lab = dict(_labeling(tuple(p.owner)))
    lines = []
    for i in range(n, 0, -1):
        cells = []
        for j in range(1, n + 1):
            if (i, j) in p.crosses:
                cells.append("+")
            elif (i, j) in d:
                cells.append(str(lab[(i, j)]) if labels else "·")
            else:
                cells.append(".")
        lines.append(" ".join(cells))
    return "\n".join(lines)


CROSS, ELBOW, HALF = "-+", "_/", " /"


def render_strands(s: StrandDiagram) -> str:
    """Staircase picture, top row first; tiles with i + j = n + 1 are half elbows."""
    n = s.n
    lines = []
    for i in range(n, 0, -1):
        row = [f"{i:>2} "]
        for j in range(1, n + 2 - i):
            if (i, j) in s.crosses:
                row.append(CROSS)
            elif i + j == n + 1:
                row.append(HALF)
            else:
                row.append(ELBOW)
        lines.append(" ".join(row).rstrip())
    lines.append("   " + " ".join(f"{j:>2}" for j in range(1, n + 1)))
    return "\n".join(lines)


def all_dreams(v: Permutation) -> Iterable[PipeDream]:
    from itertools import combinations
    boxes = sorted(rothe_diagram(v).boxes)
    for k in range(len(boxes) + 1):
        for c in combinations(boxes, k):
            yield PipeDream(v, frozenset(c))


def empty_dream(v: Permutation) -> PipeDream:
    return PipeDream(v, frozenset())


def full_dream(v: Permutation) -> PipeDream:
    return PipeDream(v, rothe_diagram(v).boxes)


__all__ += ["cross_sets", "flatten_map", "all_dreams", "empty_dream", "full_dream"]
