"""Locality-sensitive filtering for Hamming-space near neighbours.

Filters are the codewords of a random product code: the coordinates are
cut into short blocks, each block gets its own random set of codewords,
and a filter is one codeword per block.  All filters within a radius of a
vector can then be listed block by block with branch-and-bound, without
touching the rest of the code.

Vectors are Python ints (bit i = coordinate i); ``BitVector`` arguments are
accepted wherever a vector is expected.
"""

from dataclasses import dataclass
import logging
import math

import numpy as np
from sortedcontainers import SortedList

from .exponents.entropy import entropy_inv, lsf_filter_exponent
from .solvers import (
    DEFAULT_BUDGET_FACTOR, DecodingParams, _half_lists, _solve, check_memory, trial_budget,
)

log = logging.getLogger(__name__)

BLOCK_FACTOR = 2
MAX_FILTERS = 1 << 62


@dataclass(frozen=True)
class LsfParams:
    """Radii in bits: alpha for insertion, beta for query buckets, gamma for
    reported neighbours.  ``oversample`` multiplies the filter count
    (default dim**2)."""

    dim: int
    alpha: int
    beta: int
    gamma: int
    oversample: float = None

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            v = getattr(self, name)
            if not 0 <= v <= self.dim:
                raise ValueError(f"{name}={v} outside [0, {self.dim}]")
        if self.oversample is None:
            object.__setattr__(self, "oversample", float(self.dim ** 2))

    def relative(self):
        return self.alpha / self.dim, self.beta / self.dim, self.gamma / self.dim

    def feasible(self):
        """Non-negativity of the configuration distribution."""
        a, b, g = self.alpha, self.beta, self.gamma
        return (abs(a - b) <= g <= a + b) and (a + b + g <= 2 * self.dim) and max(a, b, g) * 2 <= self.dim


def filter_target(dim, alpha, beta, gamma, oversample):
    """Filter count 2^(dim * exponent) * oversample for absolute radii."""
    exp = lsf_filter_exponent(alpha / dim, beta / dim, gamma / dim)
    if not np.isfinite(exp):
        raise ValueError(f"infeasible radii alpha={alpha}, beta={beta}, gamma={gamma} in dim {dim}")
    return 2.0 ** (exp * dim) * oversample


@dataclass(frozen=True)
class FilterCode:
    """Product code: block b covers bits offsets[b]..offsets[b]+lengths[b]-1
    and has codeword array ``codewords[b]``.  Filter indices are mixed-radix
    with block 0 most significant."""

    lengths: tuple
    codewords: tuple

    @property
    def dim(self):
        return int(sum(self.lengths))

    @property
    def offsets(self):
        return tuple(int(o) for o in np.cumsum((0,) + self.lengths[:-1]))

    @property
    def block_sizes(self):
        return tuple(len(c) for c in self.codewords)

    @property
    def size(self):
        return math.prod(self.block_sizes)

    @property
    def blocks(self):
        return tuple(zip(self.lengths, self.codewords))

    def codeword(self, index):
        """Filter vector (int) of a filter index."""
        v = 0
        for b in reversed(range(len(self.lengths))):
            index, j = divmod(index, len(self.codewords[b]))
            v |= int(self.codewords[b][j]) << self.offsets[b]
        return v

    def all_codewords(self):
        """Every filter vector in index order (small codes only)."""
        vals = np.zeros(1, dtype=object)
        for off, cw in zip(self.offsets, self.codewords):
            shifted = np.array([int(c) << off for c in cw], dtype=object)
            vals = (vals[:, None] | shifted[None, :]).ravel()
        return [int(v) for v in vals]


def block_lengths(dim, block_factor=BLOCK_FACTOR):
    target = block_factor * max(1, math.ceil(math.log2(max(dim, 2))))
    nblocks = max(1, math.ceil(dim / target))
    base, extra = divmod(dim, nblocks)
    return tuple(base + (1 if i < extra else 0) for i in range(nblocks))


def _block_counts(lengths, log_target):
    counts = [None] * len(lengths)
    free = list(range(len(lengths)))
    remaining = log_target
    while free:
        total_len = sum(lengths[i] for i in free)
        saturated = [i for i in free if remaining * lengths[i] / total_len >= lengths[i]]
        if not saturated:
            for i in free:
                counts[i] = max(1, math.ceil(2.0 ** (remaining * lengths[i] / total_len) - 1e-9))
            break
        for i in saturated:
            counts[i] = 1 << lengths[i]
            remaining -= lengths[i]
            free.remove(i)
    return counts


def build_filter_code(dim, alpha, beta, gamma, oversample=None, seed=0, block_factor=BLOCK_FACTOR):
    """Random product code with at least 2^(dim * filter exponent) * oversample
    filters (capped at all 2^dim vectors).  Radii are absolute bit counts."""
    params = LsfParams(dim, alpha, beta, gamma, oversample)
    if not params.feasible():
        raise ValueError(f"infeasible radii alpha={alpha}, beta={beta}, gamma={gamma} in dim {dim}")
    target = filter_target(dim, alpha, beta, gamma, params.oversample)
    lengths = block_lengths(dim, block_factor)
    counts = _block_counts(lengths, math.log2(max(target, 1.0)))
    rng = np.random.default_rng(seed)
    codewords = []
    for length, m in zip(lengths, counts):
        if m >= 1 << length:
            cw = np.arange(1 << length, dtype=np.uint64)
        else:
            cw = np.sort(rng.choice(1 << length, size=m, replace=False)).astype(np.uint64)
        codewords.append(cw)
    code = FilterCode(lengths, tuple(codewords))
    if code.size >= MAX_FILTERS:
        raise ValueError("filter code too large for 62-bit indices")
    return code


def exhaustive_code(dim, block_factor=BLOCK_FACTOR):
    """Every vector of F_2^dim as a filter."""
    lengths = block_lengths(dim, block_factor)
    return FilterCode(lengths, tuple(np.arange(1 << L, dtype=np.uint64) for L in lengths))


def _as_int(v):
    return int(v.value) if hasattr(v, "value") else int(v)


def relevant_filters(code, x, radius):
    """Indices of all filters within distance ``radius`` of ``x``.

    Blocks are expanded one at a time; a partial filter survives only if its
    distance so far plus the smallest possible distance on the remaining
    blocks stays within the radius, so every surviving prefix extends to at
    least one output.
    """
    x = _as_int(x)
    dists = []
    for off, L, cw in zip(code.offsets, code.lengths, code.codewords):
        xb = np.uint64((x >> off) & ((1 << L) - 1))
        dists.append(np.bitwise_count(cw ^ xb).astype(np.int64))
    mins = [int(d.min()) for d in dists]
    rest = np.cumsum([0] + mins[::-1])[::-1]  # rest[b] = sum of mins over blocks >= b
    idx = np.zeros(1, dtype=np.int64)
    acc = np.zeros(1, dtype=np.int64)
    for b, d in enumerate(dists):
        budget = radius - int(rest[b + 1])
        total = acc[:, None] + d[None, :]
        keep = total <= budget
        rows, cols = np.nonzero(keep)
        idx = idx[rows] * len(d) + cols
        acc = total[rows, cols]
        if idx.size == 0:
            break
    return idx


class LsfStructure:
    """Buckets B_c = {v : dist(v, c) <= alpha} over a filter code.

    Buckets are sorted multisets keyed by vector value; empty buckets are
    dropped so insert followed by remove restores the exact prior state.
    Counters record how many buckets the last operation touched.
    """

    def __init__(self, params, code):
        if code.dim != params.dim:
            raise ValueError("filter code dimension differs from params.dim")
        self.params = params
        self.code = code
        self.buckets = {}
        self.last_touched = 0
        self.last_scanned = 0

    def __len__(self):
        return sum(len(b) for b in self.buckets.values())

    def insert(self, v):
        v = _as_int(v)
        idx = relevant_filters(self.code, v, self.params.alpha)
        for c in idx.tolist():
            bucket = self.buckets.get(c)
            if bucket is None:
                bucket = self.buckets[c] = SortedList()
            bucket.add(v)
        self.last_touched = len(idx)
        return self.last_touched

    def remove(self, v):
        v = _as_int(v)
        idx = relevant_filters(self.code, v, self.params.alpha)
        removed = 0
        for c in idx.tolist():
            bucket = self.buckets.get(c)
            if bucket is None or v not in bucket:
                continue
            bucket.remove(v)
            removed += 1
            if not bucket:
                del self.buckets[c]
        if idx.size and not removed:
            log.debug("remove of absent vector %x ignored", v)
        self.last_touched = len(idx)
        return self.last_touched

    def query(self, q):
        """All stored vectors within gamma of q found in buckets within beta."""
        q = _as_int(q)
        idx = relevant_filters(self.code, q, self.params.beta)
        gamma = self.params.gamma
        out = set()
        scanned = 0
        for c in idx.tolist():
            bucket = self.buckets.get(c)
            if bucket is None:
                continue
            scanned += len(bucket)
            for v in bucket:
                if (v ^ q).bit_count() <= gamma:
                    out.add(v)
        self.last_touched = len(idx)
        self.last_scanned = scanned
        return out


def lsf_insert(D, v):
    return D.insert(v)


def lsf_remove(D, v):
    return D.remove(v)


def lsf_query(D, q):
    return D.query(q)


def default_lsf_params(dim, list_size, gamma, oversample=None):
    """alpha = beta chosen so a bucket holds about one list element."""
    list_exp = math.log2(max(list_size, 2)) / dim
    a = int(round(dim * float(entropy_inv(1 - min(list_exp, 1.0)))))
    a = max(a, math.ceil(gamma / 2))
    a = min(a, dim // 2)
    return LsfParams(dim, a, a, gamma, oversample)


def nn_dumer_solve(inst, params, lsf_params=None, seed=0, budget_factor=DEFAULT_BUDGET_FACTOR,
                   max_trials=None):
    """Dumer with the final test done by near-neighbour search.

    The half lists are split by their exact value on the first ``ell_prime``
    window rows; within each class the left images (restricted to the
    remaining rows) are inserted into an LSF structure and every right image
    is queried with radius gamma = w - p.  Returns ``(e, stats)``.
    """
    params.validate(inst)
    ell, ellp, p, w = params.ell, params.ell_prime, params.p, inst.w
    dim = inst.n - inst.k - ellp
    gamma = w - p
    if lsf_params is None:
        left = (inst.k + ell + 1) // 2
        size = math.comb(left, (p + 1) // 2) / 2 ** ellp
        lsf_params = default_lsf_params(dim, size, gamma)
    if lsf_params.dim != dim or lsf_params.gamma != gamma:
        raise ValueError(f"LSF parameters must have dim={dim} and gamma={gamma}")
    code = build_filter_code(dim, lsf_params.alpha, lsf_params.beta, gamma,
                             lsf_params.oversample, seed)
    budget = trial_budget(inst, params, budget_factor, max_trials)
    win_mask = (1 << ell) - 1
    key_mask = (1 << ellp) - 1

    def body(sf, stats):
        (e1, v1), (e2, v2) = _half_lists(sf, p)
        stats.list_sizes = [len(e1), len(e2)]
        check_memory([len(e1) * 4])
        groups = {}
        for a, v in enumerate(v1):
            groups.setdefault(v & key_mask, []).append(a)
        for b, v in enumerate(v2):
            members = groups.get(v & key_mask)
            if not members:
                continue
            if not isinstance(members, tuple):
                members = groups[v & key_mask] = _index_group(members, v1, ellp, lsf_params, code)
            D, where = members
            for hit in D.query(v >> ellp):
                for a in where[hit]:
                    stats.matches_examined += 1
                    r = v1[a] ^ v
                    x = e1[a] | e2[b]
                    if r & win_mask == 0 and x.bit_count() + (r >> ell).bit_count() <= w:
                        return x
        return None

    return _solve(inst, ell, seed, budget, body)


def _index_group(members, images, shift, lsf_params, code):
    D = LsfStructure(lsf_params, code)
    where = {}
    for a in members:
        u = images[a] >> shift
        if u not in where:
            D.insert(u)
        where.setdefault(u, []).append(a)
    return D, where
