import pytest
from hypothesis import given, strategies as st

from klideals.nilhecke import demazure_mul, demazure_product
from klideals.perm import Permutation, bruhat_leq, identity, length

from oracles import demazure_by_subwords, word_product


def words(n, max_len=10):
    return st.lists(st.integers(1, n - 1), max_size=max_len)


def test_examples():
    assert str(demazure_product((2, 4), 5)) == "13254"
    assert str(demazure_product((1, 1, 1), 3)) == "213"
    assert demazure_product((), 4) == identity(4)


def test_rejects_bad_generator():
    with pytest.raises(ValueError):
        demazure_product((3,), 3)
    with pytest.raises(ValueError):
        demazure_mul(identity(3), 0)


@given(st.integers(2, 5).flatmap(lambda n: st.tuples(st.just(n), words(n, 7))))
def test_matches_subword_maximum(nw):
    n, word = nw
    leq = lambda a, b: bruhat_leq(Permutation(a), Permutation(b))
    assert tuple(demazure_product(word, n)) == demazure_by_subwords(word, n, leq)


@given(st.integers(2, 7).flatmap(lambda n: st.tuples(st.just(n), words(n, 12))))
def test_reduced_words_give_ordinary_product(nw):
    n, word = nw
    d = demazure_product(word, n)
    if length(d) == len(word):
        assert tuple(d) == word_product(word, n)
    assert length(d) <= len(word)


@given(st.data())
def test_invariant_under_braid_and_commutation_moves(data):
    n = data.draw(st.integers(3, 7))
    word = data.draw(words(n, 12))
    ref = demazure_product(word, n)
    moved = list(word)
    for _ in range(data.draw(st.integers(1, 10))):
        k = data.draw(st.integers(0, max(0, len(moved) - 1)))
        if k + 1 < len(moved) and abs(moved[k] - moved[k + 1]) > 1:
            moved[k], moved[k + 1] = moved[k + 1], moved[k]
        elif k + 2 < len(moved) and moved[k] == moved[k + 2] and abs(moved[k] - moved[k + 1]) == 1:
            a, b = moved[k], moved[k + 1]
            moved[k:k + 3] = [b, a, b]
    assert demazure_product(moved, n) == ref


@given(st.integers(2, 6).flatmap(lambda n: st.tuples(st.just(n), words(n, 8), st.integers(1, n - 1))))
def test_idempotent_generators(nwi):
    n, word, i = nwi
    once = demazure_product(list(word) + [i], n)
    assert demazure_product(list(word) + [i, i], n) == once
    assert bruhat_leq(demazure_product(word, n), once)
