"""The pipe complex on D(v): a subword complex whose faces are complements of
cross sets whose Demazure product dominates w0*w."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Optional

from .errors import InvariantViolation
from .nilhecke import fold
from .perm import (Box, Permutation, _labeling, bruhat_leq, last_ascent, length,
                   longest, reading_order)
from .pipedreams import PipeDream, cross_sets

__all__ = ["PipeComplex", "Face", "Topology", "Decomposition", "left_multiply_w0"]


def left_multiply_w0(w: Permutation) -> Permutation:
    n = len(w)
    return Permutation._unchecked(tuple(n + 1 - a for a in w))


@dataclass(frozen=True)
class Face:
    vertices: frozenset
    label: PipeDream

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1


@dataclass(frozen=True)
class Topology:
    kind: str  # "ball", "sphere" or "empty"
    dim: Optional[int]
    facets: int
    euler: Optional[int]  # unreduced Euler characteristic, the count of nonempty faces by parity
    reduced_euler: Optional[int]

    def to_json(self) -> dict:
        return dict(kind=self.kind, dim=self.dim, facets=self.facets,
                    euler=self.euler, reduced_euler=self.reduced_euler)


@dataclass(frozen=True)
class Decomposition:
    """Vertex decomposition at the box of z_last.

    ``box_map`` sends D(v) minus that box onto D(v s_i) by swapping columns i
    and i+1; it carries link faces to faces of ``link`` and deletion faces to
    faces of ``deletion`` (absent when the vertex is a cone point).
    """

    ascent: int
    vertex: Box
    cone: bool
    link: "PipeComplex"
    deletion: Optional["PipeComplex"]
    box_map: dict = field(repr=False)

    def map_crosses(self, crosses: Iterable[Box]) -> frozenset:
        return frozenset(self.box_map[b] for b in crosses if b != self.vertex)


class PipeComplex:
    """Delta_{v,w}: vertex set D(v), word Q = canonical labels, target w0*w."""

    def __init__(self, v: Permutation, w: Permutation):
        if len(v) != len(w):
            raise ValueError("size mismatch")
        self.v = Permutation(v)
        self.w = Permutation(w)
        self.n = len(v)
        labeled = _labeling(tuple(self.v))
        self.vertex_set: tuple = tuple(b for b, _ in labeled)
        self.word: tuple = tuple(lab for _, lab in labeled)
        self.target = left_multiply_w0(self.w)
        self.is_empty = not bruhat_leq(self.v, self.w)

    def __repr__(self) -> str:
        return f"PipeComplex({self.v}, {self.w})"

    # faces
    def product_without(self, face: Iterable[Box]) -> Permutation:
        """Demazure product of Q with the letters at ``face`` removed."""
        skip = set(face)
        letters = [lab for b, lab in zip(self.vertex_set, self.word) if b not in skip]
        return Permutation._unchecked(fold(list(range(1, self.n + 1)), letters))

    def is_face(self, face: Iterable[Box]) -> bool:
        face = set(face)
        if not face <= set(self.vertex_set):
            raise ValueError("face must be a subset of the vertex set")
        if self.is_empty:
            return False
        return bruhat_leq(self.target, self.product_without(face))

    def is_interior(self, face: Iterable[Box]) -> bool:
        return not self.is_empty and self.product_without(face) == self.target

    def _face(self, crosses: Iterable[Box]) -> Face:
        crosses = frozenset(crosses)
        return Face(frozenset(self.vertex_set) - crosses, PipeDream(self.v, crosses))

    @cached_property
    def facet_vertex_sets(self) -> tuple:
        if self.is_empty:
            return ()
        vs = frozenset(self.vertex_set)
        return tuple(vs - frozenset(c) for c in cross_sets(self.v, self.target, True))

    def facets(self) -> list[Face]:
        if self.is_empty:
            return []
        return [self._face(c) for c in cross_sets(self.v, self.target, True)]

    def interior_faces(self) -> list[Face]:
        if self.is_empty:
            return []
        return [self._face(c) for c in cross_sets(self.v, self.target, False)]

    def all_faces(self) -> set[frozenset]:
        """Every face, as vertex sets; exponential, intended for small complexes."""
        out: set = set()
        for f in self.facet_vertex_sets:
            if f in out:
                continue
            items = sorted(f)
            for k in range(len(items) + 1):
                out.update(frozenset(c) for c in combinations(items, k))
        return out

    @property
    def dim(self) -> Optional[int]:
        if self.is_empty:
            return None
        return len(self.vertex_set) - length(self.target) - 1

    # topology
    def topology_check(self) -> Topology:
        """Classify as ball or sphere from facet-ridge incidences.

        Raises InvariantViolation if the complex is not pure, if a ridge lies
        in three or more facets, or if the Euler characteristic disagrees with
        the classification.
        """
        facets = self.facet_vertex_sets
        if not facets:
            return Topology("empty", None, 0, None, None)
        sizes = {len(f) for f in facets}
        if len(sizes) != 1:
            raise InvariantViolation(f"{self!r} is not pure: facet sizes {sorted(sizes)}")
        d = sizes.pop() - 1
        ridges: Counter = Counter()
        for f in facets:
            for a in f:
                ridges[f - {a}] += 1
        worst = max(ridges.values(), default=0)
        if worst > 2:
            raise InvariantViolation(f"{self!r} has a ridge in {worst} facets")
        boundary = any(c == 1 for c in ridges.values())
        kind = "ball" if boundary else "sphere"
        counts = Counter(len(f) for f in self.all_faces())
        reduced = sum(-c if k % 2 == 0 else c for k, c in counts.items())
        euler = reduced + 1
        expected = 0 if kind == "ball" else (-1 if d % 2 else 1)
        if reduced != expected:
            raise InvariantViolation(
                f"{self!r}: reduced Euler characteristic {reduced} but {kind} of dim {d}")
        return Topology(kind, d, len(facets), euler, reduced)

    # vertex decomposition
    def vertex_decompose(self) -> Decomposition:
        if self.v == longest(self.n):
            raise ValueError("D(w0) is empty; nothing to decompose")
        i = last_ascent(self.v)
        vertex = (self.n - self.v[i] + 1, i)
        vs = self.v.times_s(i)
        box_map = {}
        for (r, c) in self.vertex_set:
            if (r, c) == vertex:
                continue
            box_map[(r, c)] = (r, i + 1) if c == i else (r, i) if c == i + 1 else (r, c)
        cone = self.w[i - 1] > self.w[i]
        link = PipeComplex(vs, self.w)
        deletion = None if cone else PipeComplex(vs, self.w.times_s(i))
        return Decomposition(i, vertex, cone, link, deletion, box_map)

    # export
    def to_json(self) -> dict:
        topo = self.topology_check()
        return {
            "v": str(self.v), "w": str(self.w),
            "vertices": [list(b) for b in self.vertex_set],
            "word": list(self.word),
            "facets": [[list(b) for b in reading_order(f)] for f in self.facet_vertex_sets],
            "interior_faces": len(self.interior_faces()),
            "topology": topo.to_json(),
        }

    def to_dot(self) -> str:
        """Facet-ridge graph: one node per facet, an edge per shared ridge."""
        facets = sorted(self.facet_vertex_sets, key=lambda f: sorted(f))
        name = {f: "F" + "_".join(f"{r}{c}" for r, c in sorted(f)) or "empty" for f in facets}
        lines = [f'graph "{self.v} {self.w}" {{']
        for f in facets:
            lines.append(f'  "{name[f]}";')
        for a, b in combinations(facets, 2):
            if len(a & b) == len(a) - 1:
                lines.append(f'  "{name[a]}" -- "{name[b]}";')
        lines.append("}")
        return "\n".join(lines)
