import json
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from insdel_fcc.errors import DefectError, InvalidInputError, SizeLimitError
from insdel_fcc.fcidc import (
    FcidcEncoder,
    build_encoder_from_code,
    encoder_from_map,
    load_encoder,
    optimal_redundancy_exact,
    random_redundancy_tables,
    redundancy_bracket,
    table_from_ints,
    verify_all,
    verify_by_deletion_sets,
    verify_by_distance,
    verify_by_insertion_sets,
)
from insdel_fcc.functions import (
    constant_function,
    from_mapping,
    max_run_function,
    runs_function,
    vt_syndrome,
    weight_mod,
)
from insdel_fcc.irregular_search import gv_greedy_construct
from insdel_fcc.matrices import function_matrix, representative_vectors
from insdel_fcc.words_metric import all_words, insdel_distance, lcs_length

EXAMPLE_F = from_mapping(2, {"00": 0, "01": 1, "10": 1, "11": 0})
VT_CODE = ("000000", "000111", "110100")


def brute_verdict(enc):
    """FCIDC property straight from the definition, with the pure-Python LCS."""
    words = enc.codewords()
    n = enc.length
    vals = enc.f.table
    for i in range(len(words)):
        for j in range(i + 1, len(words)):
            if vals[i] != vals[j] and 2 * n - 2 * lcs_length(words[i], words[j]) <= 2 * enc.t:
                return False
    return True


def catalog_functions(k):
    fs = [constant_function(k), weight_mod(k, 2), vt_syndrome(k), runs_function(k), max_run_function(k)]
    return fs


def test_constant_function_always_passes():
    enc = encoder_from_map(constant_function(3), 2, [""] * 8)
    for rep in verify_all(enc).values():
        assert rep.passed
        assert rep.pairs_checked == 0


def test_identity_redundancy_with_zero_budget():
    f = vt_syndrome(3)
    enc = encoder_from_map(f, 0, all_words(3))
    assert all(r.passed for r in verify_all(enc).values())


def test_example_code_is_not_an_encoder():
    # the shortest type-1 witness (0, 1, 1, 0) does not give a valid encoder
    enc = encoder_from_map(EXAMPLE_F, 1, ["0", "1", "1", "0"])
    rep = verify_by_distance(enc)
    assert not rep
    assert rep.counterexample[:2] == ("01", "11")
    assert rep.counterexample[2]["distance"] == 2
    assert not brute_verdict(enc)


def test_failure_always_has_counterexample():
    with pytest.raises(ValueError):
        from insdel_fcc.fcidc import VerificationReport
        VerificationReport("fail", "distance")


def test_vt_code_pipeline():
    for a in range(3):
        for b in range(a + 1, 3):
            assert insdel_distance(VT_CODE[a], VT_CODE[b]) == 6
    enc = build_encoder_from_code(vt_syndrome(2), 1, VT_CODE)
    assert enc.r == 6
    assert all(r.passed for r in verify_all(enc).values())
    assert brute_verdict(enc)


def test_build_encoder_rejects_bad_code():
    with pytest.raises(DefectError) as err:
        build_encoder_from_code(vt_syndrome(2), 1, ("000", "001", "011"))
    assert err.value.report.counterexample is not None


def test_build_encoder_constant():
    enc = build_encoder_from_code(constant_function(3), 2, ("000",))
    assert enc.r == 3
    assert enc.verified


def test_build_encoder_from_greedy_runs_code():
    f = runs_function(4)
    res = gv_greedy_construct(function_matrix(f, 1, "type2"), mode="type2", K=4)
    enc = build_encoder_from_code(f, 1, res)
    assert enc.verified
    assert brute_verdict(enc)


def test_deletion_verifier_at_full_radius():
    enc = encoder_from_map(vt_syndrome(2), 6, ["000000"] * 4)
    rep = verify_by_deletion_sets(enc, 8)
    assert not rep
    assert rep.counterexample[2]["common_subsequence"] == ""
    with pytest.raises(InvalidInputError):
        verify_by_deletion_sets(enc, 9)


def _maps(k, r, seed):
    """Every map when there are at most 256, else structured maps plus seeded random ones."""
    n_red = 1 << r
    if n_red ** (1 << k) <= 256:
        yield from product(range(n_red), repeat=1 << k)
        return
    yield (0,) * (1 << k)
    yield tuple(i % n_red for i in range(1 << k))
    yield tuple(bin(i).count("1") % n_red for i in range(1 << k))
    yield from map(tuple, random_redundancy_tables(k, r, 40, seed))


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_verifiers_agree_on_grid(k):
    disagreements = []
    for f in catalog_functions(k):
        for r in range(0, 3):
            for t in (1, 2):
                for vals in _maps(k, r, seed=1000 * k + 10 * r + t):
                    enc = FcidcEncoder(f, t, r, table_from_ints(vals, r))
                    verdicts = {"distance": verify_by_distance(enc).passed,
                                "insertion-sets": verify_by_insertion_sets(enc).passed}
                    # deleting more symbols than the codeword has is undefined
                    if t <= enc.length:
                        verdicts["deletion-sets"] = verify_by_deletion_sets(enc).passed
                    if len(set(verdicts.values())) != 1:
                        disagreements.append((f.name, r, t, vals, verdicts))
    assert disagreements == []


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(0, 3), st.integers(0, 2), st.integers(0, 2**32 - 1))
def test_verifiers_match_definition(k, r, t, seed):
    rng = np.random.default_rng(seed)
    f = from_mapping(k, dict(zip(all_words(k), rng.integers(0, 3, 1 << k).tolist())))
    vals = random_redundancy_tables(k, r, 1, seed)[0]
    enc = FcidcEncoder(f, t, r, table_from_ints(vals, r))
    expect = brute_verdict(enc)
    assert verify_by_distance(enc).passed == expect
    assert verify_by_insertion_sets(enc).passed == expect
    if t <= enc.length:
        assert verify_by_deletion_sets(enc).passed == expect


def test_counterexample_is_least_pair():
    f = vt_syndrome(3)
    enc = encoder_from_map(f, 1, ["0"] * 8)
    rep = verify_by_distance(enc)
    # scan pairs in order with the slow check
    words = enc.codewords()
    first = next((all_words(3)[i], all_words(3)[j]) for i in range(8) for j in range(i + 1, 8)
                 if f.table[i] != f.table[j] and insdel_distance(words[i], words[j]) <= 2)
    assert rep.counterexample[:2] == first


def test_encoder_json_roundtrip():
    enc = build_encoder_from_code(vt_syndrome(2), 1, VT_CODE)
    data = json.loads(enc.to_json())
    assert data["k"] == 2 and data["t"] == 1 and data["r"] == 6
    assert data["map"][0] == {"x": "00", "p": "000000"}
    assert data["report"]["verdict"] == "pass"
    back = load_encoder(enc.to_json(), vt_syndrome(2))
    assert back.table == enc.table


def test_encoder_validation():
    with pytest.raises(InvalidInputError):
        encoder_from_map(vt_syndrome(2), 1, {"00": "0", "01": "1"})
    with pytest.raises(InvalidInputError):
        FcidcEncoder(vt_syndrome(2), 1, 2, ["00", "01", "1", "11"])
    with pytest.raises(InvalidInputError):
        load_encoder(json.dumps({"k": 2, "t": 1, "r": 3, "map": [{"x": w, "p": "00"} for w in all_words(2)]}),
                     vt_syndrome(2))


def test_verification_size_guard():
    f = constant_function(13)
    enc = FcidcEncoder(f, 1, 0, [""] * (1 << 13))
    with pytest.raises(SizeLimitError):
        verify_by_distance(enc)


# oracle values frozen from the exhaustive map search, t = 1
ORACLE_T1 = {
    ("example", 2): 2,
    ("vt", 1): 1,
    ("vt", 2): 2,
    ("runs", 2): 2,
    ("max_run", 2): 2,
    ("vt", 3): 3,
    ("runs", 3): 3,
    ("max_run", 3): 3,
}


def _named(name, k):
    if name == "example":
        return EXAMPLE_F
    return {"vt": vt_syndrome, "runs": runs_function, "max_run": max_run_function}[name](k)


@pytest.mark.parametrize("name,k", sorted(ORACLE_T1))
def test_oracle_frozen_values(name, k):
    f = _named(name, k)
    res = optimal_redundancy_exact(f, 1)
    assert res.r == ORACLE_T1[(name, k)]
    assert res.encoder.verified
    assert brute_verdict(res.encoder)


def test_oracle_is_minimal_for_example():
    # no redundancy-1 map works: check every one of the 16 directly
    for vals in product("01", repeat=4):
        assert not brute_verdict(encoder_from_map(EXAMPLE_F, 1, list(vals)))


def test_oracle_constant_is_zero():
    assert optimal_redundancy_exact(constant_function(3), 2).r == 0


def test_oracle_guards():
    with pytest.raises(SizeLimitError):
        optimal_redundancy_exact(vt_syndrome(4), 1)
    with pytest.raises(SizeLimitError):
        optimal_redundancy_exact(vt_syndrome(2), 1, r_cap=7)


@pytest.mark.parametrize("f", [EXAMPLE_F, vt_syndrome(2), runs_function(3), weight_mod(3, 2)],
                         ids=lambda f: f"{f.name}-{f.k}")
def test_oracle_monotone_in_t(f):
    values = [optimal_redundancy_exact(f, t, r_cap=6).r for t in range(0, 3)]
    assert None not in values
    assert values == sorted(values)
    assert values[0] == 0


def test_bracket_examples():
    assert tuple(redundancy_bracket(EXAMPLE_F, 1)) == (1, 3)
    b = redundancy_bracket(vt_syndrome(2), 1)
    assert b.upper <= 6
    assert tuple(redundancy_bracket(constant_function(3), 1)) == (0, 3)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_bracket_contains_oracle(k):
    for f in catalog_functions(k) + [EXAMPLE_F] * (k == 2):
        b = redundancy_bracket(f, 1)
        r = optimal_redundancy_exact(f, 1).r
        assert b.contains(r), (f, tuple(b), r)
        if not f.is_constant():
            assert r >= 1


def test_bracket_with_representatives_is_weaker():
    f = runs_function(3)
    full = redundancy_bracket(f, 1)
    reps = redundancy_bracket(f, 1, representatives=representative_vectors("runs", 3))
    assert reps.lower <= full.lower
    assert reps.upper == full.upper
