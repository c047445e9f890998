"""Information set decoding: Prange, Dumer, MMT and BJMM.

Every solver repeats the same outer loop: draw a random column permutation,
bring the permuted system into windowed systematic form, then look for an
error that has a prescribed weight p on the first k + ell coordinates and is
zero on the window.  Internally list entries are pairs of Python ints
(error fragment, image Q x); the ``ListEntry`` type wraps them for callers.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, ceil
import logging
import os
import time

import numpy as np

from .gf2 import BitVector, Permutation, to_systematic
from .instances import verify_solution

log = logging.getLogger(__name__)

DEFAULT_BUDGET_FACTOR = 64
DEFAULT_MEMORY_CAP = 2 << 30
MEMORY_CAP_ENV = "ISDLAB_MEMORY_CAP"
# rough Python footprint of one list entry (two ints plus container slots)
ENTRY_BYTES = 128


class MemoryCapExceeded(RuntimeError):
    """A list would exceed the configured memory cap."""

    def __init__(self, required, cap, sizes):
        self.required = required
        self.cap = cap
        self.sizes = sizes
        super().__init__(
            f"lists need about {required} bytes (sizes {sizes}), cap is {cap} bytes; "
            f"reduce p or raise {MEMORY_CAP_ENV}"
        )


def memory_cap():
    raw = os.environ.get(MEMORY_CAP_ENV)
    return int(raw) if raw else DEFAULT_MEMORY_CAP


def check_memory(sizes):
    required = int(sum(sizes)) * ENTRY_BYTES
    cap = memory_cap()
    if required > cap:
        raise MemoryCapExceeded(required, cap, [int(s) for s in sizes])


@dataclass(frozen=True)
class DecodingParams:
    """p: weight on the first k+ell coordinates; ell: zero-window length;
    ell_prime: exactly matched window for near-neighbour search;
    eps_overlap: BJMM overlap weight."""

    p: int = 0
    ell: int = 0
    ell_prime: int = 0
    eps_overlap: int = 0

    def validate(self, inst):
        if self.p < 0 or self.ell < 0 or self.ell_prime < 0 or self.eps_overlap < 0:
            raise ValueError("parameters must be non-negative")
        if self.p > inst.w:
            raise ValueError(f"p={self.p} exceeds w={inst.w}")
        if self.ell > inst.n - inst.k:
            raise ValueError(f"ell={self.ell} exceeds n-k={inst.n - inst.k}")
        if self.ell_prime > self.ell:
            raise ValueError("ell_prime exceeds ell")
        if self.p % 2:
            raise ValueError("p must be even")


@dataclass(frozen=True)
class ListEntry:
    epart: BitVector
    image: BitVector


@dataclass
class SolverStats:
    permutation_trials: int = 0
    list_sizes: list = field(default_factory=list)
    matches_examined: int = 0
    wall_time: float = 0.0


def success_probability(n, k, w, params):
    """Exact probability that a random permutation puts exactly p errors on
    the first k+ell coordinates."""
    head = k + params.ell
    num = comb(head, params.p) * comb(n - head, w - params.p) if w >= params.p else 0
    return Fraction(num, comb(n, w))


def predicted_trials(n, k, w, params):
    """1/P for the success probability above; ``inf`` when P = 0."""
    P = success_probability(n, k, w, params)
    return float("inf") if P == 0 else float(1 / P)


def trial_budget(inst, params, factor=DEFAULT_BUDGET_FACTOR, max_trials=None):
    pred = predicted_trials(inst.n, inst.k, inst.w, params)
    budget = 0 if pred == float("inf") else int(ceil(factor * pred))
    if max_trials is not None:
        budget = min(budget, max_trials)
    return budget


# ------------------------------------------------------------ list tools

def enumerate_fragments(columns, positions, weight):
    """All weight-``weight`` vectors supported on ``positions`` and their
    images (XOR of the matching ``columns``), as two parallel int lists."""
    eparts, images = [], []
    if weight == 0:
        return [0], [0]
    for combo in combinations(positions, weight):
        e, img = 0, 0
        for j in combo:
            e |= 1 << j
            img ^= columns[j]
        eparts.append(e)
        images.append(img)
    return eparts, images


def window_keys(images, width, offset=0):
    """Bits offset..offset+width-1 of each image as a uint64 array."""
    if width > 64:
        raise ValueError("window wider than 64 bits")
    mask = (1 << width) - 1
    return np.fromiter(((v >> offset) & mask for v in images), dtype=np.uint64, count=len(images))


def match_keys(keys1, keys2):
    """Index pairs (i, j) with keys1[i] == keys2[j], by sort and scan.

    Pairs come out grouped by i in increasing order; within a group j
    follows the stable sort order of ``keys2``.
    """
    keys1 = np.asarray(keys1)
    keys2 = np.asarray(keys2)
    order = np.argsort(keys2, kind="stable")
    sorted2 = keys2[order]
    lo = np.searchsorted(sorted2, keys1, side="left")
    hi = np.searchsorted(sorted2, keys1, side="right")
    counts = hi - lo
    total = int(counts.sum())
    idx1 = np.repeat(np.arange(len(keys1)), counts)
    starts = np.repeat(lo, counts)
    within = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
    idx2 = order[starts + within]
    return idx1, idx2


def merge_on_window(L1, L2, window_bits, offset=0):
    """All pairs from L1 x L2 whose images agree on bits
    offset..offset+window_bits-1; joined entries carry the XOR of the
    fragments and of the images."""
    if L1 and L2 and L1[0].image.length != L2[0].image.length:
        raise ValueError("image lengths differ")
    k1 = window_keys([e.image.value for e in L1], window_bits, offset)
    k2 = window_keys([e.image.value for e in L2], window_bits, offset)
    i1, i2 = match_keys(k1, k2)
    return [ListEntry(L1[a].epart ^ L2[b].epart, L1[a].image ^ L2[b].image)
            for a, b in zip(i1.tolist(), i2.tolist())]


def _halves(head):
    left = (head + 1) // 2
    return list(range(left)), list(range(left, head))


def _half_lists(sf, p):
    left, right = _halves(sf.head)
    check_memory([comb(len(left), (p + 1) // 2), comb(len(right), p // 2)])
    cols = sf.q_columns
    e1, v1 = enumerate_fragments(cols, left, (p + 1) // 2)
    e2, v2 = enumerate_fragments(cols, right, p // 2)
    sbar = sf.sbar.value
    v2 = [v ^ sbar for v in v2]
    return (e1, v1), (e2, v2)


def build_half_lists(sf, p):
    """L1 = {(e1, Q e1)} over weight-p/2 fragments of the left half of the
    head coordinates, L2 = {(e2, Q e2 + sbar)} over the right half.  The left
    half has ceil((k+ell)/2) coordinates."""
    (e1, v1), (e2, v2) = _half_lists(sf, p)
    n, m = sf.head, sf.Q.nrows
    L1 = [ListEntry(BitVector(n, e), BitVector(m, v)) for e, v in zip(e1, v1)]
    L2 = [ListEntry(BitVector(n, e), BitVector(m, v)) for e, v in zip(e2, v2)]
    return L1, L2


# ------------------------------------------------------------ outer loop

def _solve(inst, ell, seed, budget, body, stats=None):
    """Permutation loop; ``body(sf, stats)`` returns a head vector or None."""
    stats = stats or SolverStats()
    rng = np.random.default_rng(seed)
    t0 = time.perf_counter()
    try:
        if inst.s.value == 0:
            # the zero vector solves it; counted as one trial
            stats.permutation_trials = 1
            return BitVector.zeros(inst.n), stats
        for _ in range(budget):
            perm = Permutation.random(inst.n, rng)
            stats.permutation_trials += 1
            sf = to_systematic(inst.H, inst.s, ell, perm)
            if sf is None:
                continue
            x = body(sf, stats)
            if x is None:
                continue
            e = sf.reconstruct(x)
            if not verify_solution(inst, e):
                raise RuntimeError("internal error: candidate failed verification")
            return e, stats
        return None, stats
    finally:
        stats.wall_time = time.perf_counter() - t0


def prange_solve(inst, seed=0, budget_factor=DEFAULT_BUDGET_FACTOR, max_trials=None):
    """Prange: all errors outside the information set.

    Returns ``(e, stats)``; ``e`` is ``None`` when the trial budget runs out.
    """
    params = DecodingParams()
    budget = trial_budget(inst, params, budget_factor, max_trials)

    def body(sf, stats):
        return 0 if sf.sbar.weight() <= inst.w else None

    return _solve(inst, 0, seed, budget, body)


def dumer_solve(inst, params, seed=0, budget_factor=DEFAULT_BUDGET_FACTOR, max_trials=None):
    """Dumer/Stern: p/2 errors on each half of the head, exact match on the
    ell-window, remaining weight w - p read off the tail."""
    params.validate(inst)
    budget = trial_budget(inst, params, budget_factor, max_trials)
    ell, p, w = params.ell, params.p, inst.w

    def body(sf, stats):
        (e1, v1), (e2, v2) = _half_lists(sf, p)
        stats.list_sizes = [len(e1), len(e2)]
        i1, i2 = match_keys(window_keys(v1, ell), window_keys(v2, ell))
        stats.matches_examined += len(i1)
        for a, b in zip(i1.tolist(), i2.tolist()):
            x = e1[a] | e2[b]
            if x.bit_count() + ((v1[a] ^ v2[b]) >> ell).bit_count() <= w:
                return x
        return None

    return _solve(inst, ell, seed, budget, body)


def representations(head, p, eps):
    """Number of ways to write a weight-p head vector as a sum of two
    weight p/2 + eps vectors."""
    return comb(p, p // 2) * comb(head - p, eps)


def first_level_bits(head, ell, p, eps):
    """r1 = floor(log2 R), capped at ell."""
    R = representations(head, p, eps)
    return min(ell, R.bit_length() - 1) if R > 0 else 0


def _join(ea, va, eb, vb, width, const):
    """Pairs (a, b) with (va + vb + const) zero on the low ``width`` bits."""
    ka = window_keys(va, width)
    kb = window_keys([v ^ const for v in vb], width)
    i, j = match_keys(ka, kb)
    ys = [ea[a] | eb[b] for a, b in zip(i.tolist(), j.tolist())]
    imgs = [va[a] ^ vb[b] for a, b in zip(i.tolist(), j.tolist())]
    return ys, imgs


def representation_round(sf, p, eps, w, target, stats=None):
    """One MMT/BJMM tree for a fixed first-level target.

    Base lists hold fragments of weight ceil(q/2) on the left half and
    floor(q/2) on the right half, q = p/2 + eps.  Level-1 lists keep sums
    y with (Q y)[0:r1] = target, resp. (Q y + sbar)[0:r1] = target; the final
    join matches the remaining ell - r1 window bits.  Returns a head vector
    or None.
    """
    head, ell = sf.head, sf.window
    q = p // 2 + eps
    left, right = _halves(head)
    r1 = first_level_bits(head, ell, p, eps)
    na, nb = comb(len(left), (q + 1) // 2), comb(len(right), q // 2)
    check_memory([na, nb, 2 * na * nb / 2 ** r1])
    cols = sf.q_columns
    ea, va = enumerate_fragments(cols, left, (q + 1) // 2)
    eb, vb = enumerate_fragments(cols, right, q // 2)
    sbar = sf.sbar.value
    y1, w1 = _join(ea, va, eb, vb, r1, target)
    y2, w2 = _join(ea, va, eb, vb, r1, target ^ sbar)
    w2 = [v ^ sbar for v in w2]
    i, j = match_keys(window_keys(w1, ell - r1, r1), window_keys(w2, ell - r1, r1))
    if stats is not None:
        stats.list_sizes = [len(ea), len(eb), len(y1), len(y2), len(i)]
        stats.matches_examined += len(i)
    for a, b in zip(i.tolist(), j.tolist()):
        x = y1[a] ^ y2[b]
        wx = x.bit_count()
        if wx > p:
            continue
        if wx + ((w1[a] ^ w2[b]) >> ell).bit_count() <= w:
            return x
    return None


def _representation_solve(inst, params, seed, budget_factor, max_trials, all_targets):
    params.validate(inst)
    p, eps, ell = params.p, params.eps_overlap, params.ell
    if p // 2 + eps > inst.k + ell:
        raise ValueError("p/2 + eps exceeds k + ell")
    budget = trial_budget(inst, params, budget_factor, max_trials)
    r1 = first_level_bits(inst.k + ell, ell, p, eps)
    targets = range(1 << r1) if all_targets else (0,)

    def body(sf, stats):
        for t in targets:
            x = representation_round(sf, p, eps, inst.w, t, stats)
            if x is not None:
                return x
        return None

    return _solve(inst, ell, seed, budget, body)


def mmt_solve(inst, params, seed=0, budget_factor=DEFAULT_BUDGET_FACTOR, max_trials=None,
              all_targets=False):
    """MMT: two-level representation tree without overlaps (eps = 0)."""
    if params.eps_overlap:
        raise ValueError("MMT uses eps_overlap = 0; use bjmm_solve")
    return _representation_solve(inst, params, seed, budget_factor, max_trials, all_targets)


def bjmm_solve(inst, params, seed=0, budget_factor=DEFAULT_BUDGET_FACTOR, max_trials=None,
               all_targets=False):
    """BJMM (two levels): level-1 vectors of weight p/2 + eps whose overlaps
    cancel; sums heavier than p are discarded."""
    return _representation_solve(inst, params, seed, budget_factor, max_trials, all_targets)
