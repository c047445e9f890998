from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from isdlab.gf2 import BitVector, Permutation, to_systematic
from isdlab.instances import IsdInstance, brute_force_min_weight, generate_instance, verify_solution
from isdlab.solvers import (
    DecodingParams, ListEntry, MemoryCapExceeded, bjmm_solve, build_half_lists, dumer_solve,
    first_level_bits, merge_on_window, mmt_solve, prange_solve, predicted_trials,
    SolverStats, representation_round, success_probability,
)


def oracle_instance(n, k, seed):
    """Planted instance whose weight bound is the true minimum weight."""
    inst = generate_instance(n, k, seed)
    return inst.with_weight(brute_force_min_weight(inst).weight())


# ------------------------------------------------------------ trial prediction

def test_predicted_trials_examples():
    assert predicted_trials(24, 12, 3, DecodingParams(p=3, ell=12)) == 1.0
    assert predicted_trials(10, 3, 6, DecodingParams(p=4)) == float("inf")
    P = success_probability(24, 12, 3, DecodingParams(p=2, ell=4))
    assert P == Fraction(comb(16, 2) * comb(8, 1), comb(24, 3))
    assert predicted_trials(24, 12, 3, DecodingParams(p=0)) == pytest.approx(
        comb(24, 3) / comb(12, 3))


def test_params_validation():
    inst = generate_instance(24, 12, 0)
    with pytest.raises(ValueError):
        DecodingParams(p=1).validate(inst)
    with pytest.raises(ValueError):
        DecodingParams(p=4).validate(inst)
    with pytest.raises(ValueError):
        DecodingParams(p=2, ell=13).validate(inst)
    with pytest.raises(ValueError):
        DecodingParams(p=2, ell=2, ell_prime=3).validate(inst)


# ------------------------------------------------------------ Prange

def test_prange_zero_syndrome():
    inst = generate_instance(24, 12, 1)
    zero = IsdInstance(24, 12, 3, inst.H, BitVector.zeros(12))
    e, stats = prange_solve(zero)
    assert e == BitVector.zeros(24) and stats.permutation_trials >= 1


@pytest.mark.parametrize("seed", range(5))
def test_prange_planted(seed):
    inst = generate_instance(24, 12, seed)
    e, stats = prange_solve(inst, seed=seed)
    assert e is not None and verify_solution(inst, e)
    assert stats.permutation_trials >= 1


def test_prange_unsatisfiable():
    inst = generate_instance(24, 12, 3)
    e, stats = prange_solve(inst.with_weight(0), max_trials=50)
    assert e is None and stats.permutation_trials <= 50


@pytest.mark.parametrize("solver", ["prange", "dumer"])
def test_trial_median_n24(solver):
    trials, preds = [], []
    for seed in range(100):
        inst = generate_instance(24, 12, seed)
        params = DecodingParams() if solver == "prange" else DecodingParams(p=2, ell=4)
        if solver == "prange":
            e, st_ = prange_solve(inst, seed=seed)
        else:
            e, st_ = dumer_solve(inst, params, seed=seed)
        assert e is not None
        trials.append(st_.permutation_trials)
        preds.append(predicted_trials(24, 12, inst.w, params))
    ratio = np.median(trials) / np.median(preds)
    assert 1 / 16 <= ratio <= 16


# ------------------------------------------------------------ lists and merge

def _sf(inst, ell, seed=0):
    rng = np.random.default_rng(seed)
    while True:
        sf = to_systematic(inst.H, inst.s, ell, Permutation.random(inst.n, rng))
        if sf is not None:
            return sf


def test_half_list_sizes():
    inst = generate_instance(12, 6, 0)
    sf = _sf(inst, 2)
    L1, L2 = build_half_lists(sf, 0)
    assert len(L1) == len(L2) == 1
    L1, L2 = build_half_lists(sf, 2)
    assert len(L1) == comb(4, 1) and len(L2) == comb(4, 1)
    L1, L2 = build_half_lists(_sf(generate_instance(13, 7, 0), 2), 4)
    assert len(L1) == comb(5, 2) and len(L2) == comb(4, 2)


def test_half_list_images():
    inst = generate_instance(20, 10, 1)
    sf = _sf(inst, 3)
    L1, L2 = build_half_lists(sf, 2)
    for e in L1[:5]:
        assert e.image.value == sf.image_of(e.epart.value)
    for e in L2[:5]:
        assert e.image.value == sf.image_of(e.epart.value) ^ sf.sbar.value


def test_half_lists_contain_planted_split():
    inst = generate_instance(24, 12, 4)
    rng = np.random.default_rng(0)
    hits = 0
    for _ in range(300):
        p = Permutation.random(24, rng)
        sf = to_systematic(inst.H, inst.s, 4, p)
        if sf is None:
            continue
        x = p.permute_vector(inst.planted).value
        head = x & ((1 << sf.head) - 1)
        left = head & ((1 << ((sf.head + 1) // 2)) - 1)
        if left.bit_count() != 1 or (head ^ left).bit_count() != 1:
            continue
        L1, L2 = build_half_lists(sf, 2)
        assert left in {e.epart.value for e in L1}
        assert head ^ left in {e.epart.value for e in L2}
        hits += 1
    assert hits > 0


def _entries(rng, size, width):
    return [ListEntry(BitVector(32, int(rng.integers(0, 1 << 32))), BitVector(width, int(v)))
            for v in rng.integers(0, 1 << width, size=size)]


def _quadratic(L1, L2, bits, offset):
    mask = ((1 << bits) - 1) << offset
    return [ListEntry(a.epart ^ b.epart, a.image ^ b.image)
            for a in L1 for b in L2 if (a.image.value ^ b.image.value) & mask == 0]


def test_merge_examples():
    a = ListEntry(BitVector(4, 1), BitVector(8, 0b1010_0101))
    b = ListEntry(BitVector(4, 2), BitVector(8, 0b0110_0101))
    out = merge_on_window([a], [b], 4)
    assert out == [ListEntry(BitVector(4, 3), BitVector(8, 0b1100_0000))]
    assert merge_on_window([a], [b], 4, offset=4) == []
    assert merge_on_window([], [b], 4) == []


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32), st.integers(0, 200), st.integers(0, 200), st.integers(0, 8),
       st.integers(0, 8))
def test_merge_equals_quadratic(seed, n1, n2, bits, offset):
    rng = np.random.default_rng(seed)
    L1, L2 = _entries(rng, n1, 16), _entries(rng, n2, 16)
    got = merge_on_window(L1, L2, bits, offset)
    assert sorted(got, key=repr) == sorted(_quadratic(L1, L2, bits, offset), key=repr)


def test_merge_match_count_statistics():
    rng = np.random.default_rng(7)
    counts = [len(merge_on_window(_entries(rng, 256, 20), _entries(rng, 256, 20), 8))
              for _ in range(50)]
    mean = 256 * 256 / 2**8
    assert abs(np.mean(counts) - mean) <= 3 * np.sqrt(mean / 50)


# ------------------------------------------------------------ Dumer

def test_dumer_p0_behaves_like_prange():
    inst = generate_instance(24, 12, 2)
    e1, s1 = dumer_solve(inst, DecodingParams(), seed=3)
    e2, s2 = prange_solve(inst, seed=3)
    assert e1 == e2 and s1.permutation_trials == s2.permutation_trials


@pytest.mark.parametrize("seed", range(8))
def test_dumer_oracle(seed):
    inst = oracle_instance(24, 12, seed)
    p = min(2, inst.w - inst.w % 2)
    e, _ = dumer_solve(inst, DecodingParams(p=p, ell=4), seed=seed)
    assert e is not None and verify_solution(inst, e) and e.weight() == inst.w


def test_memory_cap(monkeypatch):
    monkeypatch.setenv("ISDLAB_MEMORY_CAP", "1000")
    inst = generate_instance(40, 20, 0)
    with pytest.raises(MemoryCapExceeded) as exc:
        dumer_solve(inst, DecodingParams(p=4, ell=4))
    assert exc.value.sizes and exc.value.required > 1000


# ------------------------------------------------------------ MMT / BJMM

def test_mmt_p0():
    inst = generate_instance(24, 12, 5)
    e, _ = mmt_solve(inst, DecodingParams(p=0, ell=2), seed=1)
    assert e is not None and verify_solution(inst, e)


@pytest.mark.parametrize("seed", range(6))
def test_mmt_oracle(seed):
    inst = oracle_instance(28, 14, seed)
    p = min(4, inst.w - inst.w % 2)
    e, _ = mmt_solve(inst, DecodingParams(p=p, ell=6), seed=seed)
    assert e is not None and verify_solution(inst, e) and e.weight() == inst.w


def test_bjmm_eps0_equals_mmt():
    inst = generate_instance(28, 14, 8)
    params = DecodingParams(p=2, ell=5)
    e1, s1 = mmt_solve(inst, params, seed=4)
    e2, s2 = bjmm_solve(inst, params, seed=4)
    assert e1 == e2 and s1.permutation_trials == s2.permutation_trials


@pytest.mark.parametrize("seed", range(6))
def test_bjmm_eps1_oracle(seed):
    inst = oracle_instance(28, 14, seed)
    p = min(2, inst.w - inst.w % 2)
    e, _ = bjmm_solve(inst, DecodingParams(p=p, ell=6, eps_overlap=1), seed=seed)
    assert e is not None and verify_solution(inst, e) and e.weight() == inst.w


def test_mmt_rejects_eps():
    with pytest.raises(ValueError):
        mmt_solve(generate_instance(24, 12, 0), DecodingParams(p=2, ell=4, eps_overlap=1))


def test_all_targets_flag():
    inst = oracle_instance(28, 14, 3)
    p = min(4, inst.w - inst.w % 2)
    e, _ = mmt_solve(inst, DecodingParams(p=p, ell=6), seed=0, all_targets=True)
    assert e is not None and verify_solution(inst, e)


@pytest.mark.parametrize("eps", [0, 1])
def test_first_merge_survivors(eps):
    """Level-1 list size is about |L_a| |L_b| / 2^r1 on average."""
    inst = generate_instance(64, 32, 1)
    p, ell = 4, 16
    r1 = first_level_bits(32 + ell, ell, p, eps)
    q = p // 2 + eps
    expected = comb(24, (q + 1) // 2) * comb(24, q // 2) / 2 ** r1
    rng = np.random.default_rng(0)
    sizes = []
    for _ in range(30):
        sf = to_systematic(inst.H, inst.s, ell, Permutation.random(64, rng))
        if sf is None:
            continue
        stats = SolverStats()
        representation_round(sf, p, eps, inst.w, int(rng.integers(0, 1 << r1)), stats)
        sizes.append(stats.list_sizes[2])
    mean, n = np.mean(sizes), len(sizes)
    assert abs(mean - expected) <= 3 * np.sqrt(expected / n) + 0.1 * expected


def test_soundness_many_runs():
    """Every returned vector verifies (1000 solver runs)."""
    runs = 0
    for seed in range(250):
        inst = generate_instance(20, 10, seed)
        for e, _ in (prange_solve(inst, seed=seed),
                     dumer_solve(inst, DecodingParams(p=2, ell=3), seed=seed),
                     mmt_solve(inst, DecodingParams(p=2, ell=4), seed=seed),
                     bjmm_solve(inst, DecodingParams(p=2, ell=4, eps_overlap=1), seed=seed)):
            runs += 1
            if e is not None:
                assert verify_solution(inst, e)
    assert runs == 1000
