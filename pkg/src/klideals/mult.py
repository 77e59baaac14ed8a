"""Multiplicities of Schubert varieties at torus-fixed points.

Routes: facet counting when the ideal is standardly homogeneous, the same after
parabolic moving to v_max, and the flagged-tableau / binomial determinant
formula for co-Grassmannian w.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Optional, Sequence

from .complex import PipeComplex, left_multiply_w0
from .errors import BudgetExceeded, InvariantViolation
from .ideal import buchberger_verify, essential_minors, is_standardly_homogeneous
from .perm import (Partition, Permutation, bruhat_leq, bruhat_lt, cograssmannian_data,
                   gamma, v_max)
from .pipedreams import cross_sets

__all__ = [
    "MultiplicityOutcome", "FlagVector", "PairRecord", "GammaReport",
    "multiplicity", "multiplicity_routes", "facet_count", "flag_vector",
    "flagged_ssyt_count", "flagged_tableaux", "binomial_determinant", "binomial_matrix",
    "classify_pair", "conjecture_instances", "gamma_statistics", "starting_pipe_dream",
]

ROUTES = ("direct_homogeneous", "via_vmax", "cograssmannian_determinant", "unresolved")


@dataclass(frozen=True)
class MultiplicityOutcome:
    value: Optional[int]
    route: str
    v_used: Permutation
    witness: Optional[int] = None  # facet count or tableau count

    def to_json(self) -> dict:
        return {"value": self.value, "route": self.route, "v_used": str(self.v_used),
                "witness": self.witness}


@dataclass(frozen=True)
class FlagVector:
    b: tuple

    def __post_init__(self):
        if any(x > y for x, y in zip(self.b, self.b[1:])):
            raise ValueError(f"flag {self.b} is not weakly increasing")
        if any(x < 1 for x in self.b):
            raise ValueError("flag entries must be positive")

    def __len__(self) -> int:
        return len(self.b)

    def __iter__(self):
        return iter(self.b)


def facet_count(v: Permutation, w: Permutation) -> int:
    """Number of reduced pipe dreams for w0*w on D(v)."""
    if not bruhat_leq(v, w):
        return 0
    return len(cross_sets(Permutation(v), left_multiply_w0(Permutation(w)), True))


# ---------------------------------------------------------------- tableaux

def flag_vector(lv: Partition, lw: Partition) -> FlagVector:
    """b_m = max{i : lv_i >= lw_m + i - m}, one entry per nonzero part of lw."""
    if not lv.contains(lw):
        raise ValueError(f"{lw} is not contained in {lv}")
    lvp, lwp = list(lv.parts), list(lw.parts)
    b = []
    for m in range(1, len(lw.nonzero()) + 1):
        best = max(i for i in range(1, len(lvp) + 1) if lvp[i - 1] >= lwp[m - 1] + i - m)
        b.append(best)
    return FlagVector(tuple(b))


def flagged_tableaux(shape: Sequence[int], flag: Sequence[int]):
    """Semistandard tableaux of ``shape`` whose row-m entries are at most flag[m-1]."""
    shape = [p for p in shape if p]
    if len(flag) < len(shape):
        raise ValueError("flag shorter than the number of rows")
    rows: list[list[int]] = [[0] * p for p in shape]
    cells = [(r, c) for r in range(len(shape)) for c in range(shape[r])]

    def rec(k: int):
        if k == len(cells):
            yield tuple(tuple(row) for row in rows)
            return
        r, c = cells[k]
        lo = 1
        if c > 0:
            lo = max(lo, rows[r][c - 1])
        if r > 0:
            lo = max(lo, rows[r - 1][c] + 1)
        for val in range(lo, flag[r] + 1):
            rows[r][c] = val
            yield from rec(k + 1)
        rows[r][c] = 0

    yield from rec(0)


def flagged_ssyt_count(shape: Sequence[int], flag: Sequence[int]) -> int:
    return sum(1 for _ in flagged_tableaux(shape, flag))


def _binom(a: int, k: int) -> int:
    if k < 0 or a < 0 or k > a:
        return 0
    return comb(a, k)


def _exact_det(m: list[list[int]]) -> int:
    a = [[Fraction(e) for e in row] for row in m]
    size = len(a)
    sign, result = 1, Fraction(1)
    for col in range(size):
        pivot = next((r for r in range(col, size) if a[r][col] != 0), None)
        if pivot is None:
            return 0
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            sign = -sign
        result *= a[col][col]
        for r in range(col + 1, size):
            f = a[r][col] / a[col][col]
            if f:
                for c in range(col, size):
                    a[r][c] -= f * a[col][c]
    out = sign * result
    assert out.denominator == 1
    return int(out)


def binomial_matrix(shape: Sequence[int], flag: Sequence[int]) -> list[list[int]]:
    lam = [p for p in shape if p]
    ell = len(lam)
    return [[_binom(flag[i] + lam[i] - (i + 1) + (j + 1) - 1, lam[i] - (i + 1) + (j + 1))
             for j in range(ell)] for i in range(ell)]


def binomial_determinant(shape: Sequence[int], flag: Sequence[int]) -> int:
    """det[C(b_i + l_i - i + j - 1, l_i - i + j)] over the nonzero parts of the shape."""
    m = binomial_matrix(shape, flag)
    return _exact_det(m) if m else 1


def starting_pipe_dream(v: Permutation, w: Permutation) -> frozenset:
    """Crosses forming the shape lambda(w) in the corner of the flattened D(v).

    For co-Grassmannian v <= w with the same ascent k, the returned boxes (in
    D(v) coordinates) form a reduced pipe dream for w0*w.  Part m of lambda(w)
    fills the lowest lambda(w)_m squares of flattened column k - m + 1.
    """
    from .pipedreams import flatten_map
    dw = cograssmannian_data(w)
    if dw is None:
        raise ValueError(f"{w} is not co-Grassmannian")
    k, lam = dw
    inverse = {dst: src for src, dst in flatten_map(v).items()}
    out = set()
    for m, part in enumerate(lam.parts, start=1):
        for r in range(1, part + 1):
            out.add(inverse[(r, k - m + 1)])
    return frozenset(out)


# ---------------------------------------------------------------- pipeline

def _cograssmannian_value(v: Permutation, w: Permutation) -> Optional[tuple[int, Permutation, int]]:
    dw = cograssmannian_data(w)
    if dw is None:
        return None
    vm = v_max(v, w)
    dv = cograssmannian_data(vm)
    if dv is None or dv[0] != dw[0]:
        raise InvariantViolation(f"v_max({v}, {w}) = {vm} is not co-Grassmannian with ascent {dw[0]}")
    lw, lv = dw[1], dv[1]
    b = flag_vector(lv, lw)
    count = flagged_ssyt_count(lw.parts, b.b)
    det = binomial_determinant(lw.parts, b.b)
    if count != det:
        raise InvariantViolation(f"tableau count {count} != determinant {det} for ({v}, {w})")
    return det, vm, count


def multiplicity(v: Permutation, w: Permutation) -> MultiplicityOutcome:
    v, w = Permutation(v), Permutation(w)
    if not bruhat_leq(v, w):
        raise ValueError(f"{v} is not below {w} in Bruhat order")
    if is_standardly_homogeneous(v, w):
        f = facet_count(v, w)
        return MultiplicityOutcome(f, "direct_homogeneous", v, f)
    vm = v_max(v, w)
    if is_standardly_homogeneous(vm, w):
        f = facet_count(vm, w)
        return MultiplicityOutcome(f, "via_vmax", vm, f)
    cg = _cograssmannian_value(v, w)
    if cg is not None:
        det, vm, count = cg
        return MultiplicityOutcome(det, "cograssmannian_determinant", vm, count)
    return MultiplicityOutcome(None, "unresolved", v, None)


def multiplicity_routes(v: Permutation, w: Permutation) -> dict:
    """Every applicable route's value, keyed by route name."""
    v, w = Permutation(v), Permutation(w)
    if not bruhat_leq(v, w):
        raise ValueError(f"{v} is not below {w} in Bruhat order")
    out = {}
    if is_standardly_homogeneous(v, w):
        out["direct_homogeneous"] = facet_count(v, w)
    vm = v_max(v, w)
    if is_standardly_homogeneous(vm, w):
        out["via_vmax"] = facet_count(vm, w)
    cg = _cograssmannian_value(v, w)
    if cg is not None:
        out["cograssmannian_determinant"] = cg[0]
        out["flagged_tableaux"] = cg[2]
    return out


# ---------------------------------------------------------------- statistics

@dataclass(frozen=True)
class PairRecord:
    v: str
    w: str
    homogeneous: bool
    vmax: str
    vmax_homogeneous: bool
    route: str
    value: Optional[int]
    facet_count: int
    budget_exceeded: bool = False
    counterexamples: tuple = ()

    def to_json(self) -> dict:
        d = asdict(self)
        d["counterexamples"] = [list(c) for c in self.counterexamples]
        return d


def conjecture_instances(v: Permutation, w: Permutation) -> list[tuple[str, str]]:
    """Moves v -> v s_i (w s_i < w < ..., v s_i > v) and v -> s_i v (s_i w < w, s_i v > v)
    that the parabolic-maximality conjecture predicts keep the ideal homogeneous;
    returns those that do not."""
    n = len(v)
    bad = []
    for i in range(1, n):
        if w[i - 1] > w[i] and v[i - 1] < v[i]:
            u = v.times_s(i)
            if not is_standardly_homogeneous(u, w):
                bad.append((str(u), str(w)))
        pos = {val: k for k, val in enumerate(w)}
        vpos = {val: k for k, val in enumerate(v)}
        if pos[i] > pos[i + 1] and vpos[i] < vpos[i + 1]:
            u = v.s_times(i)
            if not is_standardly_homogeneous(u, w):
                bad.append((str(u), str(w)))
    return bad


def classify_pair(pair: tuple, verify: bool = False, budget: Optional[int] = None,
                  check_conjecture: bool = True) -> PairRecord:
    v, w = Permutation(pair[0]), Permutation(pair[1])
    exceeded = False
    if verify:
        try:
            rep = buchberger_verify(essential_minors(v, w), budget=budget)
            if not rep.is_groebner:
                raise InvariantViolation(f"essential minors of ({v}, {w}) are not a Groebner basis")
        except BudgetExceeded:
            exceeded = True
    h = is_standardly_homogeneous(v, w)
    vm = v_max(v, w)
    hm = h if vm == v else is_standardly_homogeneous(vm, w)
    if h:
        route, used = "direct_homogeneous", v
    elif hm:
        route, used = "via_vmax", vm
    else:
        route, used = "unresolved", v
    fc = facet_count(v, w)
    value = facet_count(used, w) if route != "unresolved" else None
    bad = tuple(conjecture_instances(v, w)) if (h and check_conjecture) else ()
    return PairRecord(str(v), str(w), h, str(vm), hm, route, value, fc, exceeded, bad)


@dataclass
class GammaReport:
    n: int
    mode: str
    total: int
    route1: int
    route12: int
    budget_exceeded: int
    counterexamples: list = field(default_factory=list)
    records: list = field(default_factory=list)

    @property
    def denominator(self) -> int:
        return self.total - self.budget_exceeded

    @property
    def pct_route1(self) -> float:
        return 100.0 * self.route1 / self.denominator if self.denominator else 0.0

    @property
    def pct_route12(self) -> float:
        return 100.0 * self.route12 / self.denominator if self.denominator else 0.0

    def summary(self) -> dict:
        return {"n": self.n, "mode": self.mode, "total": self.total,
                "route1": self.route1, "route12": self.route12,
                "pct_route1": round(self.pct_route1, 1), "pct_route12": round(self.pct_route12, 1),
                "budget_exceeded": self.budget_exceeded,
                "conjecture_counterexamples": [list(c) for c in self.counterexamples]}


def _map(fn, items: list, jobs: int):
    if jobs <= 1 or len(items) < 64:
        return [fn(x) for x in items]
    chunk = max(1, len(items) // (jobs * 8))
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items, chunksize=chunk))


def _classify_strings(pair):
    return classify_pair((Permutation.parse(pair[0]), Permutation.parse(pair[1])))


def gamma_statistics(n: int, pairs: Optional[Iterable[tuple]] = None, jobs: Optional[int] = None,
                     mode: str = "exhaustive", keep_records: bool = True) -> GammaReport:
    """Route statistics over Gamma_n (or over the given pairs, in sorted order)."""
    jobs = jobs or os.cpu_count() or 1
    if pairs is None:
        if n > 6:
            raise ValueError("exhaustive sweeps are limited to n <= 6; sample instead")
        pairs = gamma(n)
    items = sorted((str(a), str(b)) for a, b in pairs)
    records = _map(_classify_strings, items, jobs)
    rep = GammaReport(n, mode, len(records), 0, 0, 0)
    for r in records:
        if r.budget_exceeded:
            rep.budget_exceeded += 1
            continue
        rep.route1 += r.homogeneous
        rep.route12 += r.homogeneous or r.vmax_homogeneous
        rep.counterexamples.extend(r.counterexamples)
    if keep_records:
        rep.records = records
    return rep
