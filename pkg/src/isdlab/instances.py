"""Random syndrome-decoding instances with planted errors."""

from bisect import bisect_right
from dataclasses import dataclass, replace
import math

import numpy as np

from .exponents.entropy import entropy_inv
from .gf2 import BitMatrix, BitVector, mat_vec_mul

MAX_FULL_RANK_TRIES = 1000
ORACLE_MAX_N = 32


@dataclass(frozen=True)
class IsdInstance:
    """Find e with H e = s and wt(e) <= w; ``planted`` is a known witness."""

    n: int
    k: int
    w: int
    H: BitMatrix
    s: BitVector
    planted: BitVector = None

    def __post_init__(self):
        if not 0 < self.k < self.n:
            raise ValueError(f"need 0 < k < n, got n={self.n}, k={self.k}")
        if not 0 <= self.w <= self.n:
            raise ValueError(f"need 0 <= w <= n, got w={self.w}")
        if self.H.shape != (self.n - self.k, self.n):
            raise ValueError(f"H has shape {self.H.shape}, expected {(self.n - self.k, self.n)}")
        if self.s.length != self.n - self.k:
            raise ValueError("syndrome length must be n - k")
        if self.planted is not None:
            if self.planted.weight() != self.w:
                raise ValueError("planted error weight differs from w")
            if mat_vec_mul(self.H, self.planted) != self.s:
                raise ValueError("planted error does not match the syndrome")

    def with_weight(self, w):
        """Same (H, s) with a different weight bound; the witness is dropped
        unless it still has weight exactly w."""
        keep = self.planted if self.planted is not None and self.planted.weight() == w else None
        return replace(self, w=w, planted=keep)


def gv_relative_weight(rate):
    """omega in (0, 1/2] with H(omega) = 1 - rate (GV bound)."""
    if not 0 < rate < 1:
        raise ValueError(f"rate must lie in (0, 1), got {rate}")
    return float(entropy_inv(1.0 - rate, tol=1e-13))


def gv_weight(n, k):
    """Nearest integer to n * omega(k/n), at least 1."""
    return max(1, int(math.floor(n * gv_relative_weight(k / n) + 0.5)))


def random_full_rank(nrows, ncols, rng, tries=MAX_FULL_RANK_TRIES):
    for _ in range(tries):
        H = BitMatrix.random(nrows, ncols, rng)
        if H.rank() == nrows:
            return H
    raise RuntimeError(f"no full-rank {nrows}x{ncols} matrix after {tries} tries")


def generate_instance(n, k, seed, w=None):
    """Uniform full-rank H, planted error of GV weight (or ``w``), s = H e."""
    if not 0 < k < n:
        raise ValueError(f"need 0 < k < n, got n={n}, k={k}")
    rng = np.random.default_rng(seed)
    H = random_full_rank(n - k, n, rng)
    if w is None:
        w = gv_weight(n, k)
    support = rng.choice(n, size=w, replace=False)
    e = BitVector.from_support(n, support.tolist())
    return IsdInstance(n, k, w, H, mat_vec_mul(H, e), e)


def verify_solution(inst, e):
    """True iff H e = s and wt(e) <= w."""
    if e.length != inst.n:
        raise ValueError(f"error vector has length {e.length}, expected {inst.n}")
    return e.weight() <= inst.w and mat_vec_mul(inst.H, e) == inst.s


def brute_force_min_weight(inst):
    """Minimum-weight solution by exhaustive search (n <= 32).

    Weights are tried in increasing order and supports in lexicographic
    order, so ties resolve to the lexicographically smallest support.
    Returns ``None`` if no solution of weight <= w exists.
    """
    if inst.n > ORACLE_MAX_N:
        raise ValueError(f"oracle limited to n <= {ORACLE_MAX_N}")
    cols = inst.H.column_ints
    target = inst.s.value
    where = {}
    for j, c in enumerate(cols):
        where.setdefault(c, []).append(j)
    n = inst.n

    def last(acc, after):
        idx = where.get(acc)
        if not idx:
            return None
        pos = bisect_right(idx, after)
        return idx[pos] if pos < len(idx) else None

    def search(depth, start, acc, chosen):
        # choose ``depth`` more indices >= start whose columns XOR to acc
        if depth == 1:
            j = last(acc, start - 1)
            return chosen + [j] if j is not None else None
        for i in range(start, n - depth + 1):
            found = search(depth - 1, i + 1, acc ^ cols[i], chosen + [i])
            if found is not None:
                return found
        return None

    if target == 0:
        return BitVector(n, 0)
    for t in range(1, inst.w + 1):
        found = search(t, 0, target, [])
        if found is not None:
            return BitVector.from_support(n, found)
    return None

