from itertools import product

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from insdel_fcc.errors import InvalidInputError
from insdel_fcc.functions import (
    build_coloring,
    conflict_graph,
    constant_function,
    dump_table,
    from_mapping,
    function_ball,
    load_table,
    local_bound_profile,
    max_run_function,
    runs_function,
    vt_syndrome,
    weight_mod,
)
from insdel_fcc.words_metric import all_words, insdel_distance, lcs_length, run_profile


def brute_profile(f, rho):
    """Largest function ball by direct enumeration, with the pure-Python LCS."""
    words = all_words(f.k)
    best, witness = 0, None
    for u in words:
        vals = {f(v) for v in words if len(u) + len(v) - 2 * lcs_length(u, v) <= rho}
        if len(vals) > best:
            best, witness = len(vals), u
    return best, witness


def test_vt_values():
    f = vt_syndrome(2)
    assert [f(w) for w in ("00", "10", "01", "11")] == [0, 1, 2, 0]
    assert f.expressiveness == 3


@pytest.mark.parametrize("k", range(1, 13))
def test_vt_image_is_every_residue(k):
    f = vt_syndrome(k)
    assert f.image == tuple(range(k + 1))
    assert f("0" * k) == 0


def test_runs_and_max_run_values():
    assert runs_function(7)("0100101") == 6
    assert max_run_function(7)("0000101") == 4
    for k in (2, 4, 6):
        assert runs_function(k)("0" * k) == 1
        assert runs_function(k)("01" * (k // 2)) == k
        assert max_run_function(k)("0" * k) == k
        assert max_run_function(k)("01" * (k // 2)) == 1
        assert runs_function(k).image == tuple(range(1, k + 1))
        assert max_run_function(k).image == tuple(range(1, k + 1))


@pytest.mark.parametrize("k", [1, 5, 9])
def test_run_functions_agree_with_run_profile(k):
    r, m = runs_function(k), max_run_function(k)
    for w in all_words(k):
        p = run_profile(w)
        assert r(w) == p.run_count
        assert m(w) == p.max_run


def test_wrong_length_message_rejected():
    with pytest.raises(InvalidInputError):
        vt_syndrome(3)("01")


def test_function_ball_examples():
    f = runs_function(4)
    assert function_ball(f, "0000", 2) == {1, 2, 3}
    assert function_ball(f, "0110", 0) == {3}
    c = constant_function(5, 7)
    for rho in (0, 2, 4, 10):
        assert function_ball(c, "01101", rho) == {7}
    with pytest.raises(InvalidInputError):
        function_ball(f, "0000", 3)


def test_local_bound_profile_matches_enumeration():
    # frozen from a direct enumeration with the pure-Python LCS
    assert local_bound_profile(max_run_function(6), 2) == (5, "000001")
    assert local_bound_profile(max_run_function(6), 4) == (6, "000001")
    assert local_bound_profile(runs_function(6), 2) == (5, "000010")
    for f in (max_run_function(5), runs_function(5), vt_syndrome(4)):
        for rho in (2, 4):
            assert local_bound_profile(f, rho) == brute_profile(f, rho)


def test_constant_profile():
    assert local_bound_profile(constant_function(6), 4)[0] == 1


@pytest.mark.parametrize("k", range(2, 11))
@pytest.mark.parametrize("t", [1, 2])
def test_runs_locally_bounded(k, t):
    assert local_bound_profile(runs_function(k), 2 * t)[0] <= 4 * t + 1


@pytest.mark.parametrize("f", [runs_function(6), max_run_function(7), vt_syndrome(5), weight_mod(6, 3)],
                         ids=lambda f: f.name)
def test_profile_monotone_in_radius(f):
    sizes = [local_bound_profile(f, rho)[0] for rho in range(0, 2 * f.k + 1, 2)]
    assert sizes == sorted(sizes)


def test_coloring_runs_k4():
    f = runs_function(4)
    col = build_coloring(f, 2, 5)
    assert col.is_valid()
    assert col.colors.max() <= 5
    words = all_words(4)
    for u, v in product(words, repeat=2):
        if f(u) != f(v) and insdel_distance(u, v) <= 2:
            assert col(u) != col(v)


def test_coloring_constant_is_one_colour():
    col = build_coloring(constant_function(5), 4, 1)
    assert set(col.colors.tolist()) == {1}


def test_two_valued_function_two_colours():
    f = weight_mod(6, 2)
    col = build_coloring(f, 2, 2)
    assert col.is_valid()
    # colouring by the value itself is one valid answer; ours must agree up to renaming
    pairs = {(int(v), int(c)) for v, c in zip(f.table, col.colors)}
    assert len(pairs) == 2


@pytest.mark.parametrize("k,t", [(k, t) for k in range(2, 11) for t in (1, 2)])
def test_runs_coloring_valid(k, t):
    col = build_coloring(runs_function(k), 2 * t, 4 * t + 1)
    assert col.is_valid()


def test_coloring_rejects_too_few_colours():
    with pytest.raises(InvalidInputError):
        build_coloring(runs_function(5), 2, 2)


def test_conflict_graph_symmetric():
    adj = conflict_graph(max_run_function(6), 4)
    assert (adj == adj.T).all()
    assert not adj.diagonal().any()


def test_table_roundtrip(tmp_path):
    f = vt_syndrome(4)
    path = tmp_path / "vt4.tsv"
    path.write_text(dump_table(f))
    g = load_table(path)
    assert np.array_equal(f.table, g.table)


def test_table_must_be_total(tmp_path):
    path = tmp_path / "partial.tsv"
    path.write_text("00\t0\n01\t1\n10\t1\n")
    with pytest.raises(InvalidInputError):
        load_table(path)


@given(st.lists(st.integers(0, 3), min_size=8, max_size=8))
def test_from_mapping_preserves_values(vals):
    words = all_words(3)
    f = from_mapping(3, dict(zip(words, vals)))
    assert [f(w) for w in words] == vals
    assert f.image == tuple(sorted(set(vals)))
