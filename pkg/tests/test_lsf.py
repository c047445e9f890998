import copy
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from isdlab.bench import lsf_bench, run_dim
from isdlab.exponents import entropy, lsf_filter_exponent
from isdlab.instances import brute_force_min_weight, generate_instance, verify_solution
from isdlab.lsf import (
    LsfParams, LsfStructure, block_lengths, build_filter_code, exhaustive_code, filter_target,
    lsf_insert, lsf_query, lsf_remove, nn_dumer_solve, relevant_filters,
)
from isdlab.solvers import DecodingParams


def ball(d, r):
    return sum(comb(d, i) for i in range(r + 1))


def full_scan(code, x, radius):
    return [i for i, c in enumerate(code.all_codewords()) if (c ^ x).bit_count() <= radius]


# ------------------------------------------------------------ filter codes

def test_params_validation():
    with pytest.raises(ValueError):
        LsfParams(10, 11, 2, 2)
    assert LsfParams(10, 2, 2, 2).oversample == 100
    assert LsfParams(10, 2, 2, 2).feasible()
    assert not LsfParams(10, 1, 4, 2).feasible()


def test_block_lengths_sum():
    for d in range(2, 80):
        L = block_lengths(d)
        assert sum(L) == d and max(L) - min(L) <= 1


def test_exhaustive_dim8_via_oversample():
    code = build_filter_code(8, 2, 2, 2, oversample=1e6)
    assert code.size == 256
    assert sorted(code.all_codewords()) == list(range(256))


def test_alpha_beta_gamma_equal_feasible():
    code = build_filter_code(20, 5, 5, 5, seed=1)
    assert code.size >= filter_target(20, 5, 5, 5, 400)


def test_infeasible_code():
    with pytest.raises(ValueError):
        build_filter_code(20, 2, 8, 3)


def test_dim64_code_size():
    target = 2 ** (64 * lsf_filter_exponent(24 / 64, 24 / 64, 16 / 64)) * 64 ** 2
    code = build_filter_code(64, 24, 24, 16, seed=0)
    assert target <= code.size <= 2 * target


def test_code_deterministic():
    a = build_filter_code(32, 10, 10, 8, seed=5)
    b = build_filter_code(32, 10, 10, 8, seed=5)
    assert all(np.array_equal(x, y) for x, y in zip(a.codewords, b.codewords))


def test_codeword_index_order():
    code = build_filter_code(16, 4, 4, 4, oversample=1, seed=2)
    words = code.all_codewords()
    for i in (0, 1, len(words) // 2, len(words) - 1):
        assert code.codeword(i) == words[i]


# ------------------------------------------------------------ relevant filters

def test_relevant_filters_examples():
    code = exhaustive_code(16)
    assert len(relevant_filters(code, 12345, 3)) == ball(16, 3) == 697
    assert len(relevant_filters(code, 12345, 16)) == 2 ** 16
    assert [code.codeword(int(i)) for i in relevant_filters(code, 12345, 0)] == [12345]
    small = build_filter_code(12, 3, 3, 3, oversample=1, seed=0)
    x = 0b101100111000
    if x not in small.all_codewords():
        assert len(relevant_filters(small, x, 0)) == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(6, 14), st.integers(0, 2**31), st.integers(0, 14), st.data())
def test_relevant_filters_equal_full_scan(dim, seed, radius, data):
    code = build_filter_code(dim, dim // 4, dim // 4, dim // 4, oversample=4, seed=seed)
    x = data.draw(st.integers(0, (1 << dim) - 1))
    assert sorted(relevant_filters(code, x, radius).tolist()) == full_scan(code, x, radius)


# ------------------------------------------------------------ structure

def _state(D):
    return {c: list(b) for c, b in D.buckets.items()}


def test_insert_remove_restores_state():
    rng = np.random.default_rng(0)
    params = LsfParams(12, 3, 3, 3)
    D = LsfStructure(params, exhaustive_code(12))
    for v in rng.integers(0, 1 << 12, size=20).tolist():
        lsf_insert(D, v)
    before = copy.deepcopy(_state(D))
    lsf_insert(D, 77)
    lsf_remove(D, 77)
    assert _state(D) == before


def test_insert_alpha_dim_everywhere():
    code = build_filter_code(10, 2, 2, 2, oversample=1, seed=0)
    D = LsfStructure(LsfParams(10, 10, 2, 2), code)
    D.insert(5)
    assert len(D.buckets) == code.size


def test_touched_equals_ball_size():
    D = LsfStructure(LsfParams(10, 3, 3, 3), exhaustive_code(10))
    rng = np.random.default_rng(1)
    for v in rng.integers(0, 1024, size=10).tolist():
        assert lsf_insert(D, v) == ball(10, 3)


def test_remove_absent_is_noop():
    D = LsfStructure(LsfParams(10, 3, 3, 3), exhaustive_code(10))
    D.insert(1)
    before = copy.deepcopy(_state(D))
    D.remove(2)
    assert _state(D) == before


def test_membership_invariant():
    code = build_filter_code(14, 4, 4, 4, oversample=2, seed=3)
    D = LsfStructure(LsfParams(14, 4, 4, 4, 2), code)
    rng = np.random.default_rng(3)
    vs = rng.integers(0, 1 << 14, size=30).tolist()
    for v in vs:
        D.insert(v)
    words = code.all_codewords()
    for c, b in D.buckets.items():
        assert all((words[c] ^ v).bit_count() <= 4 for v in b)
    for v in vs[:5]:
        for i, c in enumerate(words):
            if (c ^ v).bit_count() <= 4:
                assert v in D.buckets[i]
    for v in vs:
        D.remove(v)
    assert not D.buckets


def test_duplicates_have_multiplicity():
    D = LsfStructure(LsfParams(8, 2, 2, 2), exhaustive_code(8))
    D.insert(3)
    D.insert(3)
    assert len(D) == 2 * ball(8, 2)
    D.remove(3)
    assert len(D) == ball(8, 2)
    assert D.query(3) == {3}


def test_query_examples():
    D = LsfStructure(LsfParams(16, 4, 4, 3), exhaustive_code(16))
    assert lsf_query(D, 9) == set()
    D.insert(9)
    assert lsf_query(D, 9) == {9}


@pytest.mark.parametrize("seed", range(3))
def test_query_exact_under_exhaustive_code(seed):
    rng = np.random.default_rng(seed)
    dim, gamma = 16, 3
    D = LsfStructure(LsfParams(dim, 2, 2, gamma), exhaustive_code(dim))
    L = rng.integers(0, 1 << dim, size=1024).tolist()
    for v in L:
        D.insert(v)
    arr = np.array(L, dtype=np.uint64)
    for q in rng.integers(0, 1 << dim, size=40).tolist():
        oracle = set(arr[np.bitwise_count(arr ^ np.uint64(q)) <= gamma].tolist())
        assert D.query(q) == oracle


def test_remove_all_then_query_empty():
    row = run_dim(20, 6, 6, 5, 50, 10, 1, seed=0)
    assert row.empty_after_remove


@pytest.mark.parametrize("alpha", [10, 14, 16])
def test_mean_bucket_load_exact(alpha):
    row = run_dim(32, alpha, alpha, 4, 2 ** 10, 8, None, seed=alpha)
    expected = row.list_size * ball(32, alpha) / 2 ** 32
    assert expected / 2 <= row.mean_bucket_load <= expected * 2


def test_mean_bucket_load_asymptotic():
    # the polynomial factor of the ball estimate is within 2 only near alpha = dim/2
    row = run_dim(32, 16, 16, 4, 2 ** 10, 8, None, seed=0)
    asym = row.list_size * 2.0 ** ((entropy(16 / 32) - 1) * 32)
    assert asym / 2 <= row.mean_bucket_load <= asym * 2


def test_bench_exhaustive_recall_one():
    rep = lsf_bench([10, 12], 0.3, 0.25, exhaustive=True, alpha=0.25, beta=0.25,
                    queries=16, repeats=1)
    assert all(r.recall == 1.0 for r in rep.rows)


# ------------------------------------------------------------ NN decoder

def test_nn_dumer_p0():
    inst = generate_instance(24, 12, 1)
    e, stats = nn_dumer_solve(inst, DecodingParams(p=0, ell=0), seed=0)
    assert e is not None and verify_solution(inst, e)
    assert stats.list_sizes == [1, 1]


@pytest.mark.parametrize("seed", range(6))
def test_nn_dumer_oracle(seed):
    inst = generate_instance(24, 12, seed)
    inst = inst.with_weight(brute_force_min_weight(inst).weight())
    p = min(2, inst.w - inst.w % 2)
    e, _ = nn_dumer_solve(inst, DecodingParams(p=p, ell=3, ell_prime=2), seed=seed)
    assert e is not None and verify_solution(inst, e) and e.weight() == inst.w


def test_nn_dumer_rejects_wrong_gamma():
    inst = generate_instance(24, 12, 1)
    with pytest.raises(ValueError):
        nn_dumer_solve(inst, DecodingParams(p=2, ell=2, ell_prime=2),
                       lsf_params=LsfParams(10, 3, 3, 2))
