"""K-polynomials and multidegrees of Kazhdan-Lusztig varieties.

Three independent routes are provided: pipe-dream sums (unspecialized
Grothendieck and Schubert polynomials), face sums over the pipe complex, and
the Kostant-Kumar recursion.  Double Grothendieck and Schubert polynomials are
obtained from the matrix Schubert embedding in S_2n and checked against
classical divided differences.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from pathlib import Path
from typing import Callable, Iterable, Optional

from .complex import PipeComplex, left_multiply_w0
from .errors import InvariantViolation
from .perm import (Box, Permutation, bruhat_leq, embed_matrix_schubert, length, longest,
                   right_ascents)
from .pipedreams import cross_sets
from .poly import Polynomial, Variable, _mono_mul, t, x, y

__all__ = [
    "WeightAssignment", "KPolyResult", "TripleReport", "KKCache",
    "unspecialized_grothendieck", "unspecialized_schubert", "grothendieck_product_form",
    "kpoly_via_complex", "kpoly_interior_faces", "kostant_kumar", "kostant_kumar_multidegree",
    "double_grothendieck", "double_schubert", "divided_difference",
    "isobaric_divided_difference", "oracle_double_schubert", "oracle_double_grothendieck",
    "specialize_buch_rimanyi", "multidegree_from_kpoly", "t_box",
]


def t_box(box: Box) -> Variable:
    return t(*box)


# ---------------------------------------------------------------- weights

@dataclass(frozen=True)
class WeightAssignment:
    """Torus weights of the coordinates z_ij on D(v).

    ``usual``: t_{v(j)}/t_{n-i+1};  ``rescaling``: t_ij;
    ``matrix_schubert``: x_j/y_i;  ``dilation``: a single t.
    Additive (cohomological) weights replace quotients by differences.
    """

    kind: str
    v: Optional[Permutation] = None

    def __post_init__(self):
        if self.kind not in ("usual", "rescaling", "matrix_schubert", "dilation"):
            raise ValueError(f"unknown weight kind {self.kind}")
        if self.kind == "usual" and self.v is None:
            raise ValueError("the usual action needs v")

    def _pair(self, box: Box) -> tuple[Variable, Optional[Variable]]:
        i, j = box
        if self.kind == "usual":
            n = len(self.v)
            return t(self.v[j - 1]), t(n - i + 1)
        if self.kind == "matrix_schubert":
            return x(j), y(i)
        if self.kind == "rescaling":
            return t(i, j), None
        return Variable("t", ()), None

    def multiplicative(self, box: Box) -> Polynomial:
        num, den = self._pair(box)
        mono = ((num, 1),) if den is None else tuple(sorted([(num, 1), (den, -1)]))
        return Polynomial({mono: 1})

    def additive(self, box: Box) -> Polynomial:
        num, den = self._pair(box)
        p = Polynomial.var(num)
        return p if den is None else p - Polynomial.var(den)

    def monomial(self, box: Box) -> tuple:
        (m, _), = self.multiplicative(box).items()
        return m


@dataclass(frozen=True)
class KPolyResult:
    kpoly: Polynomial
    multidegree: Polynomial

    def to_json(self) -> dict:
        return {"kpoly": str(self.kpoly), "multidegree": str(self.multidegree)}


# ---------------------------------------------------------------- expansion helpers

def _signed_subset_expansion(cross_lists: Iterable[tuple], sign_of: Callable[[int], int],
                             boxes: tuple) -> dict:
    """Coefficients c_S with sum_P sign(P) prod_{a in P} (1 - u_a) = sum_S c_S u^S.

    Subsets are bitmasks over ``boxes``.
    """
    index = {b: k for k, b in enumerate(boxes)}
    coeff: dict = {}
    for crosses in cross_lists:
        s = sign_of(len(crosses))
        mask = 0
        for b in crosses:
            mask |= 1 << index[b]
        sub = mask
        while True:
            c = -s if bin(sub).count("1") & 1 else s
            coeff[sub] = coeff.get(sub, 0) + c
            if sub == 0:
                break
            sub = (sub - 1) & mask
    return {m: c for m, c in coeff.items() if c}


def _masks_to_poly(coeff: dict, boxes: tuple, monomial_of: Callable[[Box], tuple]) -> Polynomial:
    monos = [monomial_of(b) for b in boxes]
    out: dict = {}
    cache: dict = {0: ()}

    def mono(mask: int) -> tuple:
        hit = cache.get(mask)
        if hit is None:
            low = mask & -mask
            k = low.bit_length() - 1
            hit = _mono_mul(mono(mask ^ low), monos[k])
            cache[mask] = hit
        return hit

    for mask, c in coeff.items():
        m = mono(mask)
        out[m] = out.get(m, 0) + c
    return Polynomial(out)


def _weights(v: Permutation, weights: Optional[WeightAssignment]) -> WeightAssignment:
    return weights if weights is not None else WeightAssignment("rescaling")


# ---------------------------------------------------------------- pipe-dream sums

def grothendieck_product_form(v: Permutation, w: Permutation) -> list[tuple[int, tuple]]:
    """Summands of the alternating pipe-dream sum as (sign, crossed boxes)."""
    if not bruhat_leq(v, w):
        return []
    target = left_multiply_w0(w)
    ell = length(target)
    return [(-1 if (len(c) - ell) % 2 else 1, c) for c in cross_sets(v, target, False)]


def unspecialized_grothendieck(v: Permutation, w: Permutation,
                               weights: Optional[WeightAssignment] = None) -> Polynomial:
    """Sum over Pipes(v, w0 w) of (-1)^(#P - l(w0 w)) prod_{(i,j) in P} (1 - t_ij).

    With ``weights`` each t_ij is replaced by the multiplicative weight of its box.
    """
    v, w = Permutation(v), Permutation(w)
    if not bruhat_leq(v, w):
        return Polynomial()
    target = left_multiply_w0(w)
    ell = length(target)
    pipes = cross_sets(v, target, False)
    boxes = tuple(sorted({b for c in pipes for b in c}))
    coeff = _signed_subset_expansion(pipes, lambda k: -1 if (k - ell) % 2 else 1, boxes)
    wt = _weights(v, weights)
    return _masks_to_poly(coeff, boxes, wt.monomial)


def unspecialized_schubert(v: Permutation, w: Permutation,
                           weights: Optional[WeightAssignment] = None) -> Polynomial:
    """Sum over RedPipes(v, w0 w) of prod_{(i,j) in P} t_ij, or of additive weights."""
    v, w = Permutation(v), Permutation(w)
    if not bruhat_leq(v, w):
        return Polynomial()
    target = left_multiply_w0(w)
    pipes = cross_sets(v, target, True)
    if weights is None:
        return Polynomial({tuple(sorted((t_box(b), 1) for b in c)): 1 for c in pipes})
    factor = {}
    total = Polynomial()
    for c in pipes:
        term = Polynomial.const(1)
        for b in c:
            if b not in factor:
                factor[b] = weights.additive(b)
            term = term * factor[b]
        total = total + term
    return total


# ---------------------------------------------------------------- complex sums

def _face_masks(C: PipeComplex) -> tuple[tuple, set]:
    boxes = tuple(C.vertex_set)
    index = {b: k for k, b in enumerate(boxes)}
    faces: set = set()
    for f in C.facet_vertex_sets:
        mask = 0
        for b in f:
            mask |= 1 << index[b]
        if mask in faces:
            continue
        sub = mask
        while True:
            faces.add(sub)
            if sub == 0:
                break
            sub = (sub - 1) & mask
    return boxes, faces


def kpoly_via_complex(C: PipeComplex, weights: WeightAssignment) -> KPolyResult:
    """K-polynomial as the sum over all faces s of prod_{a in s} u_a prod_{a not in s} (1 - u_a).

    Expanding the products, the coefficient of u^S is the signed count of faces
    inside S, computed for all S at once by a Moebius transform over subsets.
    The multidegree is the sum over facets of the products of the additive
    weights of the non-vertices.
    """
    if C.is_empty:
        return KPolyResult(Polynomial(), Polynomial())
    boxes, faces = _face_masks(C)
    m = len(boxes)
    size = 1 << m
    # f[S] = [S is a face]; Moebius: c_S = sum_{s subset S} (-1)^{|S|-|s|} f[s]
    f = [0] * size
    for s in faces:
        f[s] = 1
    for k in range(m):
        bit = 1 << k
        for S in range(size):
            if S & bit:
                f[S] -= f[S ^ bit]
    coeff = {S: c for S, c in enumerate(f) if c}
    kpoly = _masks_to_poly(coeff, boxes, weights.monomial)
    vertices = frozenset(boxes)
    mdeg = Polynomial()
    add = {b: weights.additive(b) for b in boxes}
    for facet in C.facet_vertex_sets:
        term = Polynomial.const(1)
        for b in sorted(vertices - facet):
            term = term * add[b]
        mdeg = mdeg + term
    return KPolyResult(kpoly, mdeg)


def kpoly_interior_faces(C: PipeComplex, weights: WeightAssignment) -> Polynomial:
    """sum over interior faces F of (-1)^(dim C - dim F) prod_{a not in F} (1 - u_a)."""
    if C.is_empty:
        return Polynomial()
    boxes = tuple(C.vertex_set)
    dim = C.dim
    crosses = [tuple(sorted(face.label.crosses)) for face in C.interior_faces()]
    nverts = len(boxes)
    # dim F = nverts - #crosses - 1, so the sign is (-1)^(#crosses - (nverts - dim - 1))
    base = nverts - dim - 1
    coeff = _signed_subset_expansion(crosses, lambda k: -1 if (k - base) % 2 else 1, boxes)
    return _masks_to_poly(coeff, boxes, weights.monomial)


# ---------------------------------------------------------------- Kostant-Kumar

class KKCache:
    """Memo for the Kostant-Kumar recursion, optionally persisted as a JSON file.

    Keys are "v,w,choice"; the file name is derived from a hash of the
    package's recursion conventions so stale caches are never mixed in.
    """

    VERSION = "kk-v1"

    def __init__(self, directory: Optional[os.PathLike] = None):
        self.memo: dict = {}
        self.path: Optional[Path] = None
        self._dirty = False
        if directory is not None:
            digest = hashlib.sha256(self.VERSION.encode()).hexdigest()[:16]
            self.path = Path(directory) / f"kostant_kumar_{digest}.json"
            if self.path.exists():
                raw = json.loads(self.path.read_text())
                for key, val in raw.items():
                    self.memo[key] = Polynomial.from_json(val)

    def get(self, key: str) -> Optional[Polynomial]:
        return self.memo.get(key)

    def put(self, key: str, value: Polynomial) -> None:
        if key not in self.memo:
            self._dirty = True
        self.memo[key] = value

    def save(self) -> None:
        if self.path is None or not self._dirty:
            return
        self.path.parent.mkdir(parents=True, exist_ok=True)
        data = {k: p.to_json() for k, p in sorted(self.memo.items())}
        tmp = self.path.with_suffix(".tmp")
        tmp.write_text(json.dumps(data))
        tmp.replace(self.path)
        self._dirty = False


_DEFAULT_CACHE = KKCache()


def _choose_ascent(v: Permutation, choice: str) -> int:
    asc = right_ascents(v)
    if choice == "last":
        return asc[-1]
    if choice == "first":
        return asc[0]
    if choice == "middle":
        return asc[len(asc) // 2]
    raise ValueError(f"unknown ascent choice {choice}")


def kostant_kumar(v: Permutation, w: Permutation, choice: str = "last",
                  cache: Optional[KKCache] = None) -> Polynomial:
    """K-polynomial of N_{v,w} under the usual action by the ascent recursion.

    K = 0 if v is not below w, 1 if v = w0; otherwise, for a right ascent i of v,
    K(v,w) = K(vs_i, w) when ws_i < w, and
    K(v,w) = K(vs_i, w) + (1 - t_{v(i)}/t_{v(i+1)}) (K(vs_i, ws_i) - K(vs_i, w)) else.
    """
    cache = _DEFAULT_CACHE if cache is None else cache
    v, w = Permutation(v), Permutation(w)
    n = len(v)
    w0 = longest(n)

    def rec(v: Permutation, w: Permutation) -> Polynomial:
        key = f"{v},{w},{choice}"
        hit = cache.get(key)
        if hit is not None:
            return hit
        if not bruhat_leq(v, w):
            out = Polynomial()
        elif v == w0:
            out = Polynomial.const(1)
        else:
            i = _choose_ascent(v, choice)
            vs = v.times_s(i)
            link = rec(vs, w)
            if w[i - 1] > w[i]:
                out = link
            else:
                deletion = rec(vs, w.times_s(i))
                wt = Polynomial({tuple(sorted([(t(v[i - 1]), 1), (t(v[i]), -1)])): 1})
                out = link + (1 - wt) * (deletion - link)
        cache.put(key, out)
        return out

    return rec(v, w)


@lru_cache(maxsize=100_000)
def kostant_kumar_multidegree(v: Permutation, w: Permutation) -> Polynomial:
    """Multidegree under the usual action: C(v,w) = C(vs_i,w) [+ (t_{v(i)} - t_{v(i+1)}) C(vs_i, ws_i)]."""
    v, w = Permutation(v), Permutation(w)
    n = len(v)
    if not bruhat_leq(v, w):
        return Polynomial()
    if v == longest(n):
        return Polynomial.const(1)
    i = right_ascents(v)[-1]
    vs = v.times_s(i)
    link = kostant_kumar_multidegree(vs, w)
    if w[i - 1] > w[i]:
        return link
    wt = Polynomial.var(t(v[i - 1])) - Polynomial.var(t(v[i]))
    return link + wt * kostant_kumar_multidegree(vs, w.times_s(i))


def multidegree_from_kpoly(kpoly: Polynomial, degree: Optional[int] = None) -> Polynomial:
    """Lowest-degree part of K(1 - u) for a Laurent polynomial K.

    Every Laurent monomial u^a becomes prod (1 - u_k)^(a_k), expanded as a
    power series; terms above ``degree`` (default: enough to reach the lowest
    nonzero part, searched upward) are discarded.
    """
    if kpoly.is_zero():
        return kpoly
    limit = degree if degree is not None else 0
    while True:
        series = _one_minus_series(kpoly, limit)
        low = series.lowest_degree_part()
        if not low.is_zero() or degree is not None:
            return low
        limit += 1
        if limit > 64:
            raise InvariantViolation("no nonzero multidegree found below degree 64")


def _one_minus_series(f: Polynomial, limit: int) -> Polynomial:
    # (1 - u)^a truncated at degree limit; a may be negative
    def series(v: Variable, a: int) -> list[tuple[int, int]]:
        if a >= 0:
            return [(k, (-1) ** k * comb(a, k)) for k in range(min(a, limit) + 1)]
        b = -a
        return [(k, comb(b + k - 1, k)) for k in range(limit + 1)]

    out: dict = {}
    for mono, c in f.items():
        partial = {(): c}
        for v, a in mono:
            nxt: dict = {}
            for m, cm in partial.items():
                dm = sum(e for _, e in m)
                for k, ck in series(v, a):
                    if dm + k > limit:
                        break
                    mm = _mono_mul(m, ((v, k),)) if k else m
                    nxt[mm] = nxt.get(mm, 0) + cm * ck
            partial = nxt
        for m, cm in partial.items():
            out[m] = out.get(m, 0) + cm
    return Polynomial(out)


# ---------------------------------------------------------------- double polynomials

@lru_cache(maxsize=4096)
def double_grothendieck(w: Permutation) -> Polynomial:
    """G_w(x, y) from the matrix Schubert embedding, with t_ij -> x_j / y_i."""
    star, what = embed_matrix_schubert(Permutation(w))
    return unspecialized_grothendieck(star, what, WeightAssignment("matrix_schubert"))


@lru_cache(maxsize=4096)
def double_schubert(w: Permutation) -> Polynomial:
    """S_w(x, y) from the matrix Schubert embedding, with t_ij -> x_j - y_i."""
    star, what = embed_matrix_schubert(Permutation(w))
    return unspecialized_schubert(star, what, WeightAssignment("matrix_schubert"))


def divided_difference(f: Polynomial, i: int, var: str = "x") -> Polynomial:
    """(f - s_i f) / (u_i - u_{i+1}) for u = ``var``, exact on Laurent monomials."""
    a_var, b_var = Variable(var, (i,)), Variable(var, (i + 1,))
    out: dict = {}
    for mono, c in f.items():
        d = dict(mono)
        a, b = d.pop(a_var, 0), d.pop(b_var, 0)
        if a == b:
            continue
        rest = tuple(sorted(d.items()))
        lo, sign = (b, 1) if a > b else (a, -1)
        gap = abs(a - b)
        for k in range(gap):
            ea, eb = lo + gap - 1 - k, lo + k
            m = _mono_mul(rest, tuple(sorted((v, e) for v, e in ((a_var, ea), (b_var, eb)) if e)))
            out[m] = out.get(m, 0) + sign * c
    return Polynomial(out)


def isobaric_divided_difference(f: Polynomial, i: int, var: str = "x") -> Polynomial:
    """pi_i f = d_i (u_i f)."""
    return divided_difference(f * Polynomial.var(Variable(var, (i,))), i, var)


@lru_cache(maxsize=4096)
def oracle_double_schubert(w: Permutation) -> Polynomial:
    """Classical construction: S_{w0} = prod_{i+j<=n} (x_i - y_j), S_{ws_i} = d_i S_w."""
    w = Permutation(w)
    n = len(w)
    if w == longest(n):
        out = Polynomial.const(1)
        for i in range(1, n):
            for j in range(1, n - i + 1):
                out = out * (Polynomial.var(x(i)) - Polynomial.var(y(j)))
        return out
    i = right_ascents(w)[0]
    return divided_difference(oracle_double_schubert(w.times_s(i)), i)


@lru_cache(maxsize=4096)
def _ls_grothendieck(w: Permutation) -> Polynomial:
    # Lascoux-Schuetzenberger normalization in variables X, Y:
    # G_{w0} = prod_{i+j<=n} (1 - Y_j / X_i),  G_{ws_i} = pi_i G_w.
    n = len(w)
    if w == longest(n):
        out = Polynomial.const(1)
        for i in range(1, n):
            for j in range(1, n - i + 1):
                out = out * (1 - Polynomial.var(y(j)) / Polynomial.var(x(i)))
        return out
    i = right_ascents(w)[0]
    return isobaric_divided_difference(_ls_grothendieck(w.times_s(i)), i)


def oracle_double_grothendieck(w: Permutation) -> Polynomial:
    """Classical Grothendieck polynomial with x, y inverted to match t_ij -> x_j / y_i."""
    f = _ls_grothendieck(Permutation(w))
    return Polynomial({tuple((v, -e) for v, e in m): c for m, c in f.items()})


# ---------------------------------------------------------------- Buch-Rimanyi

@dataclass(frozen=True)
class TripleReport:
    v: Permutation
    w: Permutation
    groth: Polynomial
    schub: Polynomial
    members: dict  # name -> Polynomial, for every route computed

    def to_json(self) -> dict:
        return {"v": str(self.v), "w": str(self.w), "kpoly": str(self.groth),
                "multidegree": str(self.schub),
                "routes": sorted(self.members)}


def _specialize_xy(f: Polynomial, v: Permutation) -> Polynomial:
    n = len(v)
    sigma = {}
    for k in range(1, n + 1):
        sigma[x(k)] = Polynomial.var(t(v[k - 1]))
        sigma[y(k)] = Polynomial.var(t(n + 1 - k))
    return f.substitute(sigma)


def specialize_buch_rimanyi(v: Permutation, w: Permutation,
                            cache: Optional[KKCache] = None) -> TripleReport:
    """Check both specialization triples; raise InvariantViolation on any disagreement.

    K-theory: G_{w0 w}(x_j -> t_{v(j)}, y_i -> t_{n+1-i}), the face-sum and
    Kostant-Kumar K-polynomials, and the unspecialized Grothendieck polynomial
    with t_ij -> t_{v(j)}/t_{n-i+1}.  Cohomology: the same with Schubert
    polynomials, the facet-sum and recursive multidegrees, and the lowest part
    of the K-polynomial at 1 - t.
    """
    v, w = Permutation(v), Permutation(w)
    if not bruhat_leq(v, w):
        raise ValueError(f"{v} is not below {w} in Bruhat order")
    usual = WeightAssignment("usual", v)
    w0w = left_multiply_w0(w)
    C = PipeComplex(v, w)
    via_complex = kpoly_via_complex(C, usual)
    k_members = {
        "double_grothendieck": _specialize_xy(double_grothendieck(w0w), v),
        "kostant_kumar": kostant_kumar(v, w, cache=cache),
        "complex": via_complex.kpoly,
        "unspecialized": unspecialized_grothendieck(v, w, usual),
    }
    c_members = {
        "double_schubert": _specialize_xy(double_schubert(w0w), v),
        "kostant_kumar": kostant_kumar_multidegree(v, w),
        "complex": via_complex.multidegree,
        "unspecialized": unspecialized_schubert(v, w, usual),
        "lowest_part": multidegree_from_kpoly(k_members["kostant_kumar"]),
    }
    for label, members in (("K-polynomial", k_members), ("multidegree", c_members)):
        names = list(members)
        ref = members[names[0]]
        for other in names[1:]:
            if members[other] != ref:
                raise InvariantViolation(
                    f"{label} of ({v}, {w}): {names[0]} = {ref} but {other} = {members[other]}")
    merged = {f"K:{k}": p for k, p in k_members.items()}
    merged.update({f"C:{k}": p for k, p in c_members.items()})
    return TripleReport(v, w, k_members["kostant_kumar"], c_members["kostant_kumar"], merged)
