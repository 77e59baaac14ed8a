"""Kazhdan-Lusztig ideals: the specialized matrix, essential minors, initial ideals,
Groebner basis verification, interreduction and the homogeneity test.

Groebner work runs on a compact kernel: a polynomial is a dict from packed
monomials to integer (or Fraction) coefficients.  A packed monomial stores one
8-bit exponent field per variable with the largest variable in the most
significant field, so integer comparison of packed monomials is exactly the
lexicographic order, multiplication is addition and divisibility is a
borrow-free subtraction test.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import gcd
from typing import Iterable, Optional, Sequence

from .errors import BudgetExceeded, InvariantViolation
from .perm import Box, Permutation, bruhat_leq, essential_set, rank_matrix, rothe_diagram
from .poly import KL_LEX, Polynomial, TermOrder, Variable, z

__all__ = [
    "SpecializedMatrix", "GeneratorSet", "MonomialIdeal", "GroebnerReport", "Ring",
    "build_specialized_matrix", "essential_minors", "leading_term_ideal",
    "buchberger_verify", "interreduce", "is_standardly_homogeneous",
    "initial_ideal_primes", "stanley_reisner_ideal", "minimal_transversals",
    "default_budget",
]

_BITS = 8
_FIELD = (1 << _BITS) - 1


def default_budget() -> int:
    return int(os.environ.get("KL_BUDGET", 10**6))


# ---------------------------------------------------------------- matrices

@dataclass(frozen=True)
class SpecializedMatrix:
    """Z^(v): 1 at (n-v(j)+1, j), zeros right of and above each 1, z_ij on D(v)."""

    v: Permutation
    entries: dict = field(repr=False)  # box -> 0, 1 or Variable

    @property
    def n(self) -> int:
        return len(self.v)

    def __getitem__(self, box: Box):
        return self.entries[box]

    def free_variables(self) -> list[Variable]:
        return [e for e in self.entries.values() if isinstance(e, Variable)]

    def rows_top_down(self) -> list[list]:
        n = self.n
        return [[self.entries[(i, j)] for j in range(1, n + 1)] for i in range(n, 0, -1)]

    def __str__(self) -> str:
        cells = [[str(e) for e in row] for row in self.rows_top_down()]
        width = max(len(c) for row in cells for c in row)
        return "\n".join(" ".join(c.rjust(width) for c in row) for row in cells)


@lru_cache(maxsize=4096)
def build_specialized_matrix(v: Permutation) -> SpecializedMatrix:
    n = len(v)
    diagram = rothe_diagram(v).boxes
    entries = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == n - v[j - 1] + 1:
                entries[(i, j)] = 1
            elif (i, j) in diagram:
                entries[(i, j)] = z(i, j)
            else:
                entries[(i, j)] = 0
    return SpecializedMatrix(Permutation(v), entries)


# ---------------------------------------------------------------- kernel

class Ring:
    """Packed-monomial arithmetic for a fixed list of variables, largest first."""

    def __init__(self, variables: Sequence[Variable]):
        self.variables = tuple(variables)
        self.nvars = len(self.variables)
        self.index = {v: k for k, v in enumerate(self.variables)}
        self.shift = {v: _BITS * (self.nvars - 1 - k) for k, v in enumerate(self.variables)}
        self.guard = sum(1 << (_BITS * k + _BITS - 1) for k in range(self.nvars))

    def unit(self, v: Variable) -> int:
        return 1 << self.shift[v]

    def divides(self, a: int, b: int) -> bool:
        """True if monomial a divides monomial b."""
        g = self.guard
        return ((b | g) - a) & g == g

    def lcm(self, a: int, b: int) -> int:
        out = 0
        for k in range(self.nvars):
            s = _BITS * k
            out |= max((a >> s) & _FIELD, (b >> s) & _FIELD) << s
        return out

    def coprime(self, a: int, b: int) -> bool:
        for k in range(self.nvars):
            s = _BITS * k
            if (a >> s) & _FIELD and (b >> s) & _FIELD:
                return False
        return True

    def degree(self, m: int) -> int:
        d = 0
        while m:
            d += m & _FIELD
            m >>= _BITS
        return d

    def exponents(self, m: int) -> tuple:
        return tuple((m >> (_BITS * (self.nvars - 1 - k))) & _FIELD for k in range(self.nvars))

    def to_monomial(self, m: int) -> tuple:
        return tuple(sorted((v, e) for v, e in zip(self.variables, self.exponents(m)) if e))

    def to_poly(self, f: dict) -> Polynomial:
        return Polynomial({self.to_monomial(m): c for m, c in f.items()})

    def from_poly(self, p: Polynomial) -> dict:
        out = {}
        for mono, c in p.items():
            m = 0
            for v, e in mono:
                if e < 0 or e > _FIELD >> 1:
                    raise ValueError("exponent out of kernel range")
                m += e << self.shift[v]
            out[m] = c
        return out


def _lead(f: dict) -> int:
    return max(f)


def _primitive(f: dict) -> dict:
    """Scale to coprime integer coefficients with positive leading coefficient."""
    if not f:
        return f
    den = 1
    for c in f.values():
        if isinstance(c, Fraction):
            den = den * c.denominator // gcd(den, c.denominator)
    g = 0
    ints = {}
    for m, c in f.items():
        ci = int(c * den)
        ints[m] = ci
        g = gcd(g, ci)
    if ints[max(ints)] < 0:
        g = -g
    return {m: c // g for m, c in ints.items()}


def _is_homogeneous(ring: Ring, f: dict) -> bool:
    return len({ring.degree(m) for m in f}) <= 1


def _top_reduce(f: dict, basis: list, leads: list, ring: Ring) -> dict:
    """Reduce until the leading monomial is not divisible by any basis lead.

    Fraction-free: f is rescaled by the divisor's leading coefficient, which
    does not change whether the remainder vanishes.
    """
    f = dict(f)
    while f:
        lm = max(f)
        for g, lg in zip(basis, leads):
            if ring.divides(lg, lm):
                break
        else:
            return f
        cf, cg = f[lm], g[lg]
        k = gcd(cf, cg)
        a, b = cg // k, cf // k
        mult = lm - lg
        if a != 1:
            f = {m: c * a for m, c in f.items()}
        for m, c in g.items():
            mm = m + mult
            s = f.get(mm, 0) - b * c
            if s:
                f[mm] = s
            else:
                del f[mm]
    return f


def _full_reduce(f: dict, basis: list, leads: list, ring: Ring) -> dict:
    """Normal form with every term reduced, over Fractions."""
    f = {m: Fraction(c) for m, c in f.items()}
    rem: dict = {}
    while f:
        lm = max(f)
        for g, lg in zip(basis, leads):
            if ring.divides(lg, lm):
                q = f[lm] / g[lg]
                mult = lm - lg
                for m, c in g.items():
                    mm = m + mult
                    s = f.get(mm, 0) - q * c
                    if s:
                        f[mm] = s
                    else:
                        del f[mm]
                break
        else:
            rem[lm] = f.pop(lm)
    return rem


# ---------------------------------------------------------------- generators

@dataclass
class GeneratorSet:
    v: Permutation
    w: Permutation
    ring: Ring = field(repr=False)
    kernel: list = field(repr=False)  # primitive kernel polynomials, canonical order
    order: TermOrder = KL_LEX
    raw_count: int = 0
    zero_count: int = 0

    @property
    def minors(self) -> list[Polynomial]:
        return [self.ring.to_poly(f) for f in self.kernel]

    def __len__(self) -> int:
        return len(self.kernel)

    def leads(self) -> list[int]:
        return [_lead(f) for f in self.kernel]

    def leading_terms(self) -> list[Polynomial]:
        return [self.ring.to_poly({m: f[m]}) for f, m in zip(self.kernel, self.leads())]

    def all_homogeneous(self) -> bool:
        return all(_is_homogeneous(self.ring, f) for f in self.kernel)

    def to_json(self) -> dict:
        return {"v": str(self.v), "w": str(self.w), "order": self.order.kind,
                "generators": [str(p) for p in self.minors],
                "raw_minors": self.raw_count, "zero_minors": self.zero_count}

    def __str__(self) -> str:
        return "\n".join(str(p) for p in self.minors)


def _ring_for(v: Permutation, order: TermOrder) -> Ring:
    variables = [z(i, j) for (i, j) in rothe_diagram(v).boxes]
    if order.kind not in ("kl_lex", "diagonal"):
        raise ValueError("the Groebner kernel supports lexicographic orders only")
    return Ring(order.sort_variables(variables))


def _minor_engine(v: Permutation, ring: Ring):
    mat = build_specialized_matrix(v)
    entry = {}
    for box, e in mat.entries.items():
        if isinstance(e, Variable):
            entry[box] = ring.unit(e)
        elif e == 1:
            entry[box] = 0  # the empty monomial
        # zeros are simply absent
    memo: dict = {}

    def minor(rows: tuple, cols: tuple) -> dict:
        # rows listed top to bottom (descending row index), cols left to right
        key = (rows, cols)
        hit = memo.get(key)
        if hit is not None:
            return hit
        if len(rows) == 1:
            e = entry.get((rows[0], cols[0]))
            out = {} if e is None else {e: 1}
        else:
            out = {}
            last = cols[-1]
            sub_cols = cols[:-1]
            top = len(rows) - 1
            for pos, r in enumerate(rows):
                e = entry.get((r, last))
                if e is None:
                    continue
                sub = minor(rows[:pos] + rows[pos + 1:], sub_cols)
                if not sub:
                    continue
                sign = -1 if (pos + top) % 2 else 1
                for m, c in sub.items():
                    mm = m + e
                    s = out.get(mm, 0) + sign * c
                    if s:
                        out[mm] = s
                    else:
                        del out[mm]
        memo[key] = out
        return out

    return minor


def essential_minors(v: Permutation, w: Permutation, order: TermOrder = KL_LEX,
                     all_minors: bool = False) -> GeneratorSet:
    """Size 1 + r^w_ij minors of the southwest i x j corner of Z^(v) over (i,j) in E(w).

    Zero minors are dropped and the rest deduplicated up to scalars.  With
    ``all_minors`` every (i, j) of the grid is used instead of E(w).
    """
    v, w = Permutation(v), Permutation(w)
    n = len(v)
    if len(w) != n:
        raise ValueError("size mismatch")
    ring = _ring_for(v, order)
    minor = _minor_engine(v, ring)
    r = rank_matrix(w)
    boxes = sorted(essential_set(w)) if not all_minors else [
        (i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
    seen: dict = {}
    raw = zeros = 0
    for (i, j) in boxes:
        size = 1 + r[(i, j)]
        if size > min(i, j):
            continue
        for rows in combinations(range(i, 0, -1), size):
            for cols in combinations(range(1, j + 1), size):
                raw += 1
                f = minor(rows, cols)
                if not f:
                    zeros += 1
                    continue
                f = _primitive(f)
                key = frozenset(f.items())
                if key not in seen:
                    seen[key] = f
    kernel = sorted(seen.values(), key=lambda f: (-_lead(f), sorted(f.items())))
    return GeneratorSet(v, w, ring, kernel, order, raw, zeros)


# ---------------------------------------------------------------- monomial ideals

@dataclass(frozen=True)
class MonomialIdeal:
    """Minimalized monomial generators, each a tuple of (Variable, exponent)."""

    generators: frozenset

    @classmethod
    def from_monomials(cls, monos: Iterable[tuple]) -> "MonomialIdeal":
        monos = set(monos)
        keep = set()
        for m in monos:
            dm = dict(m)
            if not any(o != m and all(dm.get(v, 0) >= e for v, e in o) for o in monos):
                keep.add(m)
        return cls(frozenset(keep))

    @classmethod
    def from_supports(cls, supports: Iterable[Iterable[Variable]]) -> "MonomialIdeal":
        return cls.from_monomials(tuple(sorted((v, 1) for v in s)) for s in supports)

    def is_squarefree(self) -> bool:
        return all(e == 1 for m in self.generators for _, e in m)

    def supports(self) -> set:
        return {frozenset(v for v, _ in m) for m in self.generators}

    def minimal_primes(self) -> set:
        """Minimal primes of a squarefree monomial ideal, as variable sets."""
        if not self.is_squarefree():
            raise ValueError("minimal primes implemented for squarefree ideals only")
        return minimal_transversals(self.supports())

    def sorted_generators(self) -> list[list[str]]:
        return sorted(sorted(str(v) for v, _ in m) for m in self.generators)

    def __str__(self) -> str:
        gens = sorted(self.generators, key=lambda m: (len(m), [str(v) for v, _ in m]))
        return "<" + ", ".join("*".join(str(v) if e == 1 else f"{v}^{e}" for v, e in m)
                               for m in gens) + ">"


def minimal_transversals(edges: Iterable[Iterable]) -> set:
    """Minimal sets meeting every edge (Berge's incremental algorithm)."""
    current = {frozenset()}
    for e in sorted((frozenset(e) for e in edges), key=len):
        nxt = set()
        for tr in current:
            if tr & e:
                nxt.add(tr)
            else:
                nxt.update(tr | {a} for a in e)
        current = {s for s in nxt if not any(o < s for o in nxt)}
    return current


def leading_term_ideal(G: GeneratorSet) -> MonomialIdeal:
    return MonomialIdeal.from_monomials(G.ring.to_monomial(m) for m in G.leads())


# ---------------------------------------------------------------- Groebner

@dataclass(frozen=True)
class GroebnerReport:
    is_groebner: bool
    spairs_checked: int
    spairs_skipped: int
    generators: int
    failures: tuple = ()

    def to_json(self) -> dict:
        return {"is_groebner": self.is_groebner, "spairs_checked": self.spairs_checked,
                "spairs_skipped": self.spairs_skipped, "generators": self.generators}


def _spoly(f: dict, g: dict, lf: int, lg: int, ring: Ring) -> dict:
    l = ring.lcm(lf, lg)
    mf, mg = l - lf, l - lg
    cf, cg = f[lf], g[lg]
    k = gcd(cf, cg)
    a, b = cg // k, cf // k
    out = {m + mf: a * c for m, c in f.items()}
    for m, c in g.items():
        mm = m + mg
        s = out.get(mm, 0) - b * c
        if s:
            out[mm] = s
        else:
            del out[mm]
    return out


def buchberger_verify(G: GeneratorSet, budget: Optional[int] = None,
                      stop_on_failure: bool = True) -> GroebnerReport:
    """Buchberger's criterion: every S-polynomial reduces to zero modulo G.

    Pairs with coprime leading monomials are skipped.  Raises BudgetExceeded
    once more than ``budget`` S-pairs would need reducing.
    """
    budget = default_budget() if budget is None else budget
    basis = [_primitive(f) for f in G.kernel]
    leads = [_lead(f) for f in basis]
    ring = G.ring
    checked = skipped = 0
    failures = []
    for a in range(len(basis)):
        for b in range(a + 1, len(basis)):
            if ring.coprime(leads[a], leads[b]):
                skipped += 1
                continue
            if checked >= budget:
                raise BudgetExceeded(f"S-pair budget {budget} exhausted for ({G.v}, {G.w})", checked)
            checked += 1
            s = _spoly(basis[a], basis[b], leads[a], leads[b], ring)
            rem = _top_reduce(s, basis, leads, ring)
            if rem:
                failures.append((a, b))
                if stop_on_failure:
                    return GroebnerReport(False, checked, skipped, len(basis), tuple(failures))
    return GroebnerReport(not failures, checked, skipped, len(basis), tuple(failures))


def interreduce(G: GeneratorSet) -> GeneratorSet:
    """Reduced Groebner basis, assuming G is already a Groebner basis.

    Keeps one generator per minimal leading monomial, tail-reduces each by the
    others and makes it monic.
    """
    ring = G.ring
    items = sorted(((_lead(f), f) for f in G.kernel if f), key=lambda t: t[0])
    chosen: list = []
    for lm, f in items:
        if any(ring.divides(lc, lm) for lc, _ in chosen):
            continue
        chosen.append((lm, f))
    out = []
    for k, (lm, f) in enumerate(chosen):
        others = [g for j, (_, g) in enumerate(chosen) if j != k]
        oleads = [l for j, (l, _) in enumerate(chosen) if j != k]
        head = Fraction(f[lm])
        tail = {m: c for m, c in f.items() if m != lm}
        red = _full_reduce(tail, others, oleads, ring)
        g = {lm: Fraction(1)}
        for m, c in red.items():
            g[m] = c / head
        out.append({m: (c.numerator if c.denominator == 1 else c) for m, c in g.items()})
    out.sort(key=lambda f: -_lead(f))
    return GeneratorSet(G.v, G.w, ring, out, G.order, G.raw_count, G.zero_count)


@lru_cache(maxsize=200_000)
def is_standardly_homogeneous(v: Permutation, w: Permutation) -> bool:
    """True iff I_{v,w} is homogeneous for the grading deg z_ij = 1.

    The reduced Groebner basis is unique, so the ideal is homogeneous exactly
    when every element of it is.
    """
    v, w = Permutation(v), Permutation(w)
    if not bruhat_leq(v, w):
        raise ValueError(f"{v} is not below {w} in Bruhat order")
    G = essential_minors(v, w)
    if G.all_homogeneous():
        return True
    R = interreduce(G)
    return R.all_homogeneous()


def initial_ideal_primes(v: Permutation, w: Permutation) -> set:
    """Minimal primes of the leading-term ideal, as sets of z variables."""
    J = leading_term_ideal(essential_minors(v, w))
    if not J.is_squarefree():
        raise InvariantViolation(f"leading-term ideal of ({v}, {w}) is not squarefree: {J}")
    return J.minimal_primes()


def stanley_reisner_ideal(C) -> MonomialIdeal:
    """Minimal nonfaces of a pipe complex, as squarefree z monomials."""
    if C.is_empty:
        return MonomialIdeal(frozenset({()}))  # the unit ideal
    vertices = frozenset(C.vertex_set)
    complements = [vertices - f for f in C.facet_vertex_sets]
    nonfaces = minimal_transversals(complements)
    return MonomialIdeal.from_supports([z(i, j) for (i, j) in s] for s in nonfaces)
