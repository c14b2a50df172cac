import json
from functools import lru_cache
from itertools import permutations, product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from insdel_fcc.bounds import hamming_plotkin_lower, simplified_plotkin_lower
from insdel_fcc.errors import InvalidInputError, SizeLimitError
from insdel_fcc.matrices import DistanceMatrix, uniform_matrix
from insdel_fcc.irregular_search import (
    IrregularCode,
    gv_bound,
    gv_greedy_construct,
    max_ball_size,
    search_min_length,
    uniform_min_length,
    verify_code,
)
from insdel_fcc.words_metric import all_words, lcs_length

TYPE1_EXAMPLE = DistanceMatrix(np.array([[0, 2, 2, 0], [2, 0, 0, 2], [2, 0, 0, 2], [0, 2, 2, 0]]))
TYPE2_EXAMPLE = DistanceMatrix(np.array([[0, 6, 6, 0], [6, 0, 0, 6], [6, 0, 0, 6], [0, 6, 6, 0]]))


@lru_cache(maxsize=None)
def dist(x, y):
    return len(x) + len(y) - 2 * lcs_length(x, y)


def brute_feasible(req, r):
    """Does any tuple of length-r words meet ``req``?  Plain enumeration."""
    M = len(req)
    words = all_words(r)
    for combo in product(words, repeat=M):
        if all(dist(combo[i], combo[j]) >= req[i][j] for i in range(M) for j in range(i + 1, M)):
            return True
    return False


small_matrices = st.integers(2, 4).flatmap(
    lambda M: st.lists(st.integers(0, 6), min_size=M * (M - 1) // 2, max_size=M * (M - 1) // 2).map(
        lambda vals: _symmetric(M, vals)))


def _symmetric(M, vals):
    a = np.zeros((M, M), dtype=np.int64)
    it = iter(vals)
    for i in range(M):
        for j in range(i + 1, M):
            a[i, j] = a[j, i] = next(it)
    return DistanceMatrix(a)


def test_verify_code_examples():
    assert verify_code(["0", "1", "1", "0"], TYPE1_EXAMPLE)
    assert verify_code(["000", "111", "111", "000"], TYPE2_EXAMPLE)
    bad = verify_code(["000", "110", "111", "000"], TYPE2_EXAMPLE)
    assert not bad
    assert bad.pair == (0, 1)
    assert bad.shortfall == 2


def test_verify_code_order_mismatch():
    with pytest.raises(InvalidInputError):
        verify_code(["0", "1"], TYPE1_EXAMPLE)


def test_verify_code_with_permutation():
    m = DistanceMatrix(np.array([[0, 4, 0], [4, 0, 0], [0, 0, 0]]))
    words = ["00", "00", "11"]
    assert not verify_code(words, m)
    assert verify_code(words, m, permutation=(0, 2, 1))
    with pytest.raises(InvalidInputError):
        verify_code(words, m, permutation=(0, 0, 1))


def test_type1_example_search():
    res = search_min_length(TYPE1_EXAMPLE)
    assert res.min_length == 1
    assert res.words == ["0", "1", "1", "0"]


def test_type2_example_search():
    res = search_min_length(TYPE2_EXAMPLE, mode="type2", K=2)
    assert res.min_length == 3
    assert verify_code(res.words, TYPE2_EXAMPLE)
    assert not brute_feasible(TYPE2_EXAMPLE.tolist(), 2)


def test_zero_matrix_is_length_zero():
    res = search_min_length(DistanceMatrix(np.zeros((3, 3), dtype=int)))
    assert res.min_length == 0
    assert res.words == ["", "", ""]
    assert uniform_min_length(5, 0).min_length == 0


@pytest.mark.parametrize("t", range(1, 6))
def test_two_words_at_even_distance(t):
    assert uniform_min_length(2, 2 * t).min_length == t


@pytest.mark.parametrize("t,k", [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3)])
def test_two_words_type2(t, k):
    res = uniform_min_length(2, 2 * (t + k), mode="type2", K=k)
    assert res.min_length == t + k


def test_uniform_frozen_values():
    # pinned against brute_feasible below for the cheap ones
    assert uniform_min_length(3, 4).min_length == 4
    assert uniform_min_length(4, 4).min_length == 4
    assert uniform_min_length(5, 4).min_length == 5
    assert uniform_min_length(3, 6).min_length == 6
    assert not brute_feasible(uniform_matrix(3, 4).tolist(), 3)
    assert brute_feasible(uniform_matrix(3, 4).tolist(), 4)


def test_infeasible_at_cap_is_reported():
    res = uniform_min_length(3, 8, length_cap=5)
    assert not res.feasible
    assert res.status == "infeasible-at-cap"
    assert json.loads(res.to_json())["min_length"] == "infeasible-at-cap"


def test_node_limit_raises():
    with pytest.raises(SizeLimitError):
        uniform_min_length(6, 6, node_limit=10)


def test_type2_needs_anchor():
    with pytest.raises(InvalidInputError):
        search_min_length(TYPE2_EXAMPLE, mode="type2")


def test_type2_starts_at_anchor():
    res = search_min_length(TYPE1_EXAMPLE, mode="type2", K=3)
    assert res.min_length == 3
    with pytest.raises(InvalidInputError):
        IrregularCode(["0", "1", "1", "0"], TYPE1_EXAMPLE, K=2)


@settings(max_examples=40, deadline=None)
@given(small_matrices)
def test_search_sound_and_minimal(m):
    res = search_min_length(m, length_cap=6)
    assert res.feasible
    assert verify_code(res.words, m)
    assert len(res.words[0]) == res.min_length
    r = res.min_length - 1
    if r >= 0 and (1 << r) ** m.order <= 70_000:
        assert not brute_feasible(m.requirement().tolist(), r)


@settings(max_examples=25, deadline=None)
@given(small_matrices)
def test_ordering_chain(m):
    exact = search_min_length(m, length_cap=6).min_length
    greedy = gv_greedy_construct(m)
    assert greedy.feasible and verify_code(greedy.words, m)
    assert greedy.min_length >= exact
    assert gv_bound(m) >= greedy.min_length
    assert hamming_plotkin_lower(m).value <= exact
    assert simplified_plotkin_lower(m).value <= exact


@settings(max_examples=15, deadline=None)
@given(small_matrices)
def test_permutations_never_hurt(m):
    ident = search_min_length(m, length_cap=6).min_length
    best = search_min_length(m, try_permutations=True, length_cap=6)
    assert best.min_length <= ident
    assert verify_code(best.words, m)


def test_every_row_order_gives_a_code():
    # requirements only mean something after symmetrisation, and the search
    # stores words in matrix order, so any permutation gives the same minimum
    m = DistanceMatrix(np.array([[0, 6, 0], [6, 0, 2], [0, 2, 0]]))
    for perm in permutations(range(3)):
        res = gv_greedy_construct(m, permutation=perm)
        assert res.feasible
    assert search_min_length(m, try_permutations=True).min_length == search_min_length(m).min_length


def test_greedy_examples():
    assert gv_greedy_construct(DistanceMatrix(np.zeros((2, 2), dtype=int))).min_length == 0
    assert gv_greedy_construct(TYPE1_EXAMPLE).min_length >= 1
    res = gv_greedy_construct(uniform_matrix(3, 2))
    assert verify_code(res.words, uniform_matrix(3, 2))
    assert res.method == "gv-greedy"


def test_gv_bound_examples():
    assert gv_bound(DistanceMatrix(np.zeros((3, 3), dtype=int))) == 0
    assert gv_bound(uniform_matrix(2, 2)) == 1
    assert gv_bound(TYPE1_EXAMPLE) >= 1
    assert max_ball_size(4, 1) == 1
    assert max_ball_size(3, 6) == 8


def test_max_ball_size_is_centre_maximum():
    for r in range(1, 6):
        words = all_words(r)
        for radius in (2, 4):
            brute = max(sum(dist(c, w) <= radius for w in words) for c in words)
            assert max_ball_size(r, radius) == brute


def test_result_serialisation():
    res = search_min_length(TYPE1_EXAMPLE)
    data = json.loads(res.to_json())
    assert data["min_length"] == 1
    assert data["words"] == ["0", "1", "1", "0"]
    assert data["mode"] == "type1"
