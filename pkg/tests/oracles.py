"""Slow, obviously-correct reimplementations used to cross-check the package.

Nothing here imports the algorithm under test; each oracle works from a
definition rather than from the optimized route.
"""

from __future__ import annotations

import itertools
import random
from collections import deque


def inversions(w) -> int:
    return sum(1 for a, b in itertools.combinations(w, 2) if a > b)


def compose(a, b):
    """(a * b)(i) = a(b(i)) in one-line notation."""
    return tuple(a[x - 1] for x in b)


def simple_swap(w, i):
    w = list(w)
    w[i - 1], w[i] = w[i], w[i - 1]
    return tuple(w)


def bruhat_by_covers(n: int) -> set:
    """All pairs u <= w, as the reflexive-transitive closure of Bruhat covers.

    A cover u < u t is a transposition of positions raising the length by 1.
    """
    perms = list(itertools.permutations(range(1, n + 1)))
    up = {}
    for u in perms:
        lu = inversions(u)
        nxt = []
        for a, b in itertools.combinations(range(n), 2):
            t = list(u)
            t[a], t[b] = t[b], t[a]
            t = tuple(t)
            if inversions(t) == lu + 1:
                nxt.append(t)
        up[u] = nxt
    out = set()
    for u in perms:
        seen = {u}
        todo = deque([u])
        while todo:
            x = todo.popleft()
            for y in up[x]:
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        out.update((u, w) for w in seen)
    return out


def word_product(word, n):
    w = tuple(range(1, n + 1))
    for i in word:
        w = simple_swap(w, i)
    return w


def demazure_by_subwords(word, n, leq) -> tuple:
    """Bruhat maximum of the ordinary products of all subwords."""
    prods = {word_product(sub, n) for k in range(len(word) + 1)
             for sub in itertools.combinations(word, k)}
    tops = [p for p in prods if all(leq(q, p) for q in prods)]
    assert len(tops) == 1
    return tops[0]


def rothe_by_definition(v) -> set:
    """Boxes (i, j), bottom-up rows, with i < n - v(j) + 1 and j < v^-1(n - i + 1)."""
    n = len(v)
    inv = {val: pos for pos, val in enumerate(v, 1)}
    return {(i, j) for i in range(1, n + 1) for j in range(1, n + 1)
            if i < n - v[j - 1] + 1 and j < inv[n - i + 1]}


def leibniz_det(m):
    """Determinant by the permutation expansion."""
    size = len(m)
    total = 0
    for p in itertools.permutations(range(size)):
        sign = -1 if inversions(p) % 2 else 1
        term = sign
        for r in range(size):
            term = term * m[r][p[r]]
        total = total + term
    return total


def ssyt_brute(shape, flag) -> int:
    """Count row-weak, column-strict fillings with row m bounded by flag[m] by full product."""
    cells = [(r, c) for r, p in enumerate(shape) for c in range(p)]
    ranges = [range(1, flag[r] + 1) for r, _ in cells]
    count = 0
    for vals in itertools.product(*ranges):
        t = dict(zip(cells, vals))
        ok = all(t[(r, c)] <= t[(r, c + 1)] for (r, c) in cells if (r, c + 1) in t)
        ok = ok and all(t[(r, c)] < t[(r + 1, c)] for (r, c) in cells if (r + 1, c) in t)
        count += ok
    return count


def random_pairs(pairs, k, seed):
    rng = random.Random(seed)
    return rng.sample(list(pairs), min(k, len(pairs)))


# ---------------------------------------------------------------- sympy-based oracles

def to_sympy(p):
    """Convert a package Polynomial through its text rendering."""
    import sympy
    text = str(p).replace("^", "**")
    return sympy.sympify(text)


def _xy(n):
    import sympy
    return sympy.symbols(f"x1:{n + 1}"), sympy.symbols(f"y1:{n + 1}")


def _descend(w, top, op):
    """Apply op(f, i) along a path from w0 down to w (w(i) < w(i+1) at each step)."""
    n = len(w)
    w = tuple(w)
    path = []
    while w != tuple(range(n, 0, -1)):
        i = next(k for k in range(1, n) if w[k - 1] < w[k])
        path.append(i)
        w = simple_swap(w, i)
    f = top
    for i in reversed(path):
        f = op(f, i)
    return f


def sympy_double_schubert(w):
    """S_w from S_{w0} = prod_{i+j<=n} (x_i - y_j) by divided differences in sympy."""
    import sympy
    n = len(w)
    xs, ys = _xy(n)
    top = sympy.prod(xs[i - 1] - ys[j - 1] for i in range(1, n) for j in range(1, n - i + 1))

    def dd(f, i):
        a, b = xs[i - 1], xs[i]
        swapped = f.subs({a: b, b: a}, simultaneous=True)
        return sympy.expand(sympy.cancel((f - swapped) / (a - b)))
    return _descend(w, top, dd)


def sympy_double_grothendieck(w):
    """G_w with G_{w0} = prod (1 - y_j/x_i) and isobaric steps, then x, y inverted."""
    import sympy
    n = len(w)
    xs, ys = _xy(n)
    top = sympy.prod(1 - ys[j - 1] / xs[i - 1] for i in range(1, n) for j in range(1, n - i + 1))

    def pi(f, i):
        a, b = xs[i - 1], xs[i]
        g = a * f
        swapped = g.subs({a: b, b: a}, simultaneous=True)
        return sympy.cancel((g - swapped) / (a - b))
    f = _descend(w, top, pi)
    inv = {s: 1 / s for s in xs + ys}
    return sympy.expand(sympy.cancel(f.subs(inv, simultaneous=True)))


def subword_facets(word, target):
    """Position sets whose letters form a reduced word for ``target``; facets are complements."""
    ell = inversions(target)
    out = []
    for pos in itertools.combinations(range(len(word)), ell):
        if word_product([word[p] for p in pos], len(target)) == tuple(target):
            out.append(frozenset(pos))
    return out


def faces_from_facets(facets):
    out = set()
    for f in facets:
        items = sorted(f)
        for k in range(len(items) + 1):
            out.update(frozenset(c) for c in itertools.combinations(items, k))
    return out
