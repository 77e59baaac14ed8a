import dataclasses
import itertools

import pytest
import sympy
from hypothesis import given, strategies as st

from klideals.complex import PipeComplex, left_multiply_w0
from klideals.errors import BudgetExceeded
from klideals.ideal import (buchberger_verify, build_specialized_matrix, essential_minors,
                            initial_ideal_primes, interreduce, is_standardly_homogeneous,
                            leading_term_ideal, minimal_transversals, stanley_reisner_ideal)
from klideals.perm import Permutation, longest
from klideals.pipedreams import cross_sets
from klideals.poly import DIAGONAL, KL_LEX, Polynomial, det, z

P = Permutation.parse
Z = lambda i, j: Polynomial.var(z(i, j))


def generator_strings(G):
    return {str(p) for p in G.minors}


def _parse(text):
    return sympy_to_poly(sympy.sympify(text))


def sympy_to_poly(expr):
    out = Polynomial()
    for mono, c in sympy.Poly(expr).terms():
        term = Polynomial.const(int(c))
        for sym, e in zip(sympy.Poly(expr).gens, mono):
            if e:
                name = str(sym)
                term = term * Z(int(name[1]), int(name[2])) ** e
        out = out + term
    return out


def up_to_sign(polys):
    out = set()
    for p in polys:
        out.add(frozenset({p, -p}))
    return out


class TestSpecializedMatrix:
    def test_example_261345(self):
        m = build_specialized_matrix(P("261345"))
        rows = [[str(e) for e in row] for row in m.rows_top_down()]
        assert rows == [
            ["0", "0", "1", "0", "0", "0"],
            ["1", "0", "0", "0", "0", "0"],
            ["z41", "0", "z43", "1", "0", "0"],
            ["z31", "0", "z33", "z34", "1", "0"],
            ["z21", "0", "z23", "z24", "z25", "1"],
            ["z11", "1", "0", "0", "0", "0"],
        ]

    def test_longest_has_no_variables(self):
        m = build_specialized_matrix(longest(5))
        assert m.free_variables() == []

    def test_embedded_block(self):
        m = build_specialized_matrix(P("43218765"))
        assert sorted(map(str, m.free_variables())) == sorted(
            f"z{i}{j}" for i in range(1, 5) for j in range(1, 5))
        assert [str(e) for e in m.rows_top_down()[4]] == ["z41", "z42", "z43", "z44", "0", "0", "0", "1"]


class TestEssentialMinors:
    def test_example_261345_365124(self):
        G = essential_minors(P("261345"), P("365124"))
        # three 1x1, ten 3x3 and five 4x4 minors before simplification
        assert G.raw_count == 18
        gens = up_to_sign(G.minors)
        for p in [Z(1, 1), Z(2, 1), Z(3, 1), Z(3, 3) * Z(2, 1) - Z(2, 3) * Z(3, 1)]:
            assert frozenset({p, -p}) in gens
        four = (Z(4, 1) * Z(3, 3) * Z(2, 4) - Z(4, 1) * Z(2, 3) * Z(3, 4) - Z(4, 3) * Z(3, 1) * Z(2, 4)
                + Z(4, 3) * Z(3, 4) * Z(2, 1) + Z(3, 1) * Z(2, 3) - Z(3, 3) * Z(2, 1))
        assert frozenset({four, -four}) in gens

    def test_embedded_2143(self):
        G = essential_minors(P("43218765"), P("78564321"))
        corner = det([[z(3, 1), z(3, 2), z(3, 3)],
                      [z(2, 1), z(2, 2), z(2, 3)],
                      [z(1, 1), z(1, 2), z(1, 3)]])
        assert up_to_sign(G.minors) == up_to_sign([Z(1, 1), corner])

    def test_principal(self):
        G = essential_minors(P("45213"), P("54231"))
        assert interreduce(G).minors == [Z(3, 3)]

    def test_longest_pair_is_empty(self):
        assert len(essential_minors(longest(4), longest(4))) == 0

    def test_all_minors_generate_the_same_ideal(self, gamma4):
        for v, w in gamma4:
            a = interreduce(essential_minors(v, w))
            b_set = essential_minors(v, w, all_minors=True)
            assert buchberger_verify(b_set).is_groebner
            b = interreduce(b_set)
            assert generator_strings(a) == generator_strings(b), (v, w)

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            essential_minors(P("123"), P("1234"))


class TestGroebner:
    def test_gamma4_exhaustive(self, gamma4):
        for v, w in gamma4:
            assert buchberger_verify(essential_minors(v, w)).is_groebner, (v, w)

    def test_gamma5_sample(self, gamma5_sample):
        for v, w in gamma5_sample:
            assert buchberger_verify(essential_minors(v, w)).is_groebner, (v, w)

    def test_negative_control_detects_dropped_minor(self):
        G = essential_minors(P("261345"), P("365124"))
        verdicts = []
        for k in range(len(G)):
            H = dataclasses.replace(G, kernel=G.kernel[:k] + G.kernel[k + 1:])
            verdicts.append(buchberger_verify(H).is_groebner)
        assert not all(verdicts)
        assert buchberger_verify(G).is_groebner

    def test_single_generator(self):
        G = essential_minors(P("45213"), P("54231"))
        R = interreduce(G)
        rep = buchberger_verify(R)
        assert rep.is_groebner and rep.spairs_checked == 0

    def test_budget(self):
        G = essential_minors(P("261345"), P("365124"))
        with pytest.raises(BudgetExceeded) as err:
            buchberger_verify(G, budget=1)
        assert err.value.spairs == 1

    def test_budget_from_environment(self, monkeypatch):
        monkeypatch.setenv("KL_BUDGET", "1")
        with pytest.raises(BudgetExceeded):
            buchberger_verify(essential_minors(P("261345"), P("365124")))

    @pytest.mark.parametrize("w", ["2143", "1324", "1432", "3412", "4231", "2413"])
    def test_diagonal_order_on_matrix_schubert(self, w):
        from klideals.perm import embed_matrix_schubert
        star, what = embed_matrix_schubert(P(w))
        assert buchberger_verify(essential_minors(star, what, order=DIAGONAL)).is_groebner

    def test_diagonal_order_leading_terms(self):
        star, what = P("43218765"), P("78564321")
        J = leading_term_ideal(essential_minors(star, what, order=DIAGONAL))
        assert J.sorted_generators() == [["z11"], ["z13", "z22", "z31"]]

    @given(st.data())
    def test_kl_lex_leading_term_of_generic_minor_is_diagonal(self, data):
        k = data.draw(st.integers(1, 4))
        rows = sorted(data.draw(st.lists(st.integers(1, 6), min_size=k, max_size=k, unique=True)),
                      reverse=True)
        cols = sorted(data.draw(st.lists(st.integers(1, 6), min_size=k, max_size=k, unique=True)))
        m = [[z(r, c) for c in cols] for r in rows]
        lt = det(m).leading_term(KL_LEX)
        assert lt.coeff == 1
        assert dict(lt.monomial) == {z(r, c): 1 for r, c in zip(rows, cols)}


class TestInterreduce:
    @pytest.mark.parametrize("v, w, expected", [
        ("31524", "43512", {"z11", "z12", "z24*z42 - z22"}),
        ("13425", "34512", {"z11", "z12", "z21", "z13*z22*z31 - z14*z41"}),
    ])
    def test_examples(self, v, w, expected):
        # the reduced basis is monic, so compare up to sign
        got = interreduce(essential_minors(P(v), P(w))).minors
        want = [_parse(e) for e in expected]
        assert up_to_sign(got) == up_to_sign(want)

    def test_idempotent_and_preserves_leading_terms(self, gamma4):
        for v, w in gamma4:
            G = essential_minors(v, w)
            R = interreduce(G)
            assert generator_strings(interreduce(R)) == generator_strings(R)
            assert leading_term_ideal(R) == leading_term_ideal(G)
            for f in R.kernel:
                assert f[max(f)] == 1


def _sympy_homogeneous(v, w) -> bool:
    """Independent test: every homogeneous part of every generator lies in the ideal."""
    G = essential_minors(v, w)
    gens = [sympy.sympify(str(p).replace("^", "**")) for p in G.minors]
    if not gens:
        return True
    symbols = sorted(set().union(*(g.free_symbols for g in gens)), key=str)
    basis = sympy.groebner(gens, *symbols, order="grevlex")
    for g in gens:
        poly = sympy.Poly(g, *symbols)
        parts: dict = {}
        for mono, c in poly.terms():
            parts[sum(mono)] = parts.get(sum(mono), 0) + c * sympy.prod(
                s ** e for s, e in zip(symbols, mono))
        for part in parts.values():
            if not basis.contains(part):
                return False
    return True


class TestHomogeneity:
    @pytest.mark.parametrize("v, w, expected", [
        ("45213", "54231", True),
        ("31524", "43512", False),
        ("41532", "43512", True),
        ("13425", "34512", False),
    ])
    def test_classifications(self, v, w, expected):
        assert is_standardly_homogeneous(P(v), P(w)) is expected
        assert _sympy_homogeneous(P(v), P(w)) is expected

    def test_matches_membership_oracle_on_gamma4(self, gamma4):
        for v, w in gamma4:
            assert is_standardly_homogeneous(v, w) == _sympy_homogeneous(v, w), (v, w)

    def test_requires_bruhat(self):
        with pytest.raises(ValueError):
            is_standardly_homogeneous(P("321"), P("123"))


def _brute_minimal_nonfaces(C):
    verts = sorted(C.vertex_set)
    nonfaces = [frozenset(s) for k in range(len(verts) + 1)
                for s in itertools.combinations(verts, k) if not C.is_face(s)]
    return {s for s in nonfaces if not any(o < s for o in nonfaces)}


class TestPrimesAndStanleyReisner:
    def test_leading_terms_example(self):
        J = leading_term_ideal(essential_minors(P("31524"), P("43512")))
        assert J.sorted_generators() == [["z11"], ["z12"], ["z24", "z42"]]

    def test_example_31452_53142(self):
        v, w = P("31452"), P("53142")
        primes = initial_ideal_primes(v, w)
        assert len(primes) == 3
        dreams = cross_sets(v, left_multiply_w0(w), True)
        assert primes == {frozenset(z(*b) for b in c) for c in dreams}
        C = PipeComplex(v, w)
        SR = stanley_reisner_ideal(C)
        assert SR.supports() == {frozenset(z(*b) for b in s) for s in _brute_minimal_nonfaces(C)}

    def test_sphere_ideal_is_all_variables(self):
        v = P("31524")
        SR = stanley_reisner_ideal(PipeComplex(v, v))
        assert SR.sorted_generators() == sorted([f"z{i}{j}"] for i, j in PipeComplex(v, v).vertex_set)

    def test_gamma4_exhaustive(self, gamma4):
        for v, w in gamma4:
            J = leading_term_ideal(essential_minors(v, w))
            assert J.is_squarefree()
            dreams = cross_sets(v, left_multiply_w0(w), True)
            assert initial_ideal_primes(v, w) == {frozenset(z(*b) for b in c) for c in dreams}
            assert stanley_reisner_ideal(PipeComplex(v, w)) == J, (v, w)

    def test_gamma5_sample(self, gamma5_sample):
        for v, w in gamma5_sample[:100]:
            J = leading_term_ideal(essential_minors(v, w))
            dreams = cross_sets(v, left_multiply_w0(w), True)
            assert J.minimal_primes() == {frozenset(z(*b) for b in c) for c in dreams}
            assert stanley_reisner_ideal(PipeComplex(v, w)) == J, (v, w)


@given(st.lists(st.sets(st.integers(0, 6), min_size=1, max_size=3), min_size=1, max_size=5))
def test_minimal_transversals_brute_force(edges):
    universe = sorted(set().union(*edges))
    hits = [frozenset(s) for k in range(len(universe) + 1)
            for s in itertools.combinations(universe, k) if all(set(s) & e for e in edges)]
    brute = {s for s in hits if not any(o < s for o in hits)}
    assert minimal_transversals(edges) == brute
