"""Empirical LSF workload: touched-bucket counts, recall and fitted slopes.

For each dimension a random list is stored in an ``LsfStructure``, every
query gets one planted neighbour at distance exactly gamma, and the query
output is compared against a brute-force scan of the whole list.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .exponents.entropy import entropy_inv, lsf_cost_exponents
from .lsf import LsfStructure, build_filter_code, exhaustive_code, LsfParams
from .solvers import check_memory

MAX_BENCH_DIM = 64
MAX_LIST = 1 << 14


@dataclass
class BenchRow:
    dim: int
    alpha: int
    beta: int
    gamma: int
    filters: int
    list_size: int
    update_touched: float
    query_touched: float
    mean_bucket_load: float
    recall: float
    oracle_pairs: int
    empty_after_remove: bool


@dataclass
class BenchReport:
    rows: list
    alpha_rel: float
    beta_rel: float
    gamma_rel: float
    list_exp: float
    update_slope: float = math.nan
    query_slope: float = math.nan
    update_theory: float = math.nan
    query_theory: float = math.nan
    extra: dict = field(default_factory=dict)


def radius(rel, dim):
    """Absolute radius floor(rel * dim)."""
    return int(math.floor(rel * dim + 1e-9))


def _random_vectors(rng, count, dim):
    out = []
    for _ in range(count):
        out.append(int.from_bytes(rng.bytes(8), "little") & ((1 << dim) - 1))
    return out


def _flip(rng, v, dim, d):
    for j in rng.choice(dim, size=d, replace=False).tolist():
        v ^= 1 << j
    return v


def fit_slope(dims, values):
    """Least-squares slope of log2(values) against dims."""
    return float(np.polyfit(np.asarray(dims, float), np.log2(np.asarray(values, float)), 1)[0])


def run_dim(dim, alpha, beta, gamma, list_size, queries, oversample, seed, exhaustive=False):
    """One workload at a fixed dimension; radii are absolute."""
    if dim > MAX_BENCH_DIM:
        raise ValueError(f"dim {dim} above {MAX_BENCH_DIM}")
    rng = np.random.default_rng(seed)
    params = LsfParams(dim, alpha, beta, gamma, oversample)
    code = exhaustive_code(dim) if exhaustive else build_filter_code(
        dim, alpha, beta, gamma, oversample, seed)
    check_memory([list_size + queries])
    D = LsfStructure(params, code)
    base = _random_vectors(rng, list_size, dim)
    qs = _random_vectors(rng, queries, dim)
    planted = [_flip(rng, q, dim, gamma) for q in qs]
    stored = sorted(set(base + planted))
    upd = []
    for v in stored:
        upd.append(D.insert(v))
    load = sum(len(b) for b in D.buckets.values()) / code.size
    qry, found, total = [], 0, 0
    arr = np.array(stored, dtype=np.uint64)
    for q in qs:
        hits = D.query(q)
        qry.append(D.last_touched)
        near = arr[np.bitwise_count(arr ^ np.uint64(q)) <= gamma]
        total += near.size
        found += sum(1 for v in near.tolist() if v in hits)
    for v in stored:
        D.remove(v)
    empty = not D.buckets and all(not D.query(q) for q in qs[:8])
    return BenchRow(dim, alpha, beta, gamma, code.size, len(stored), float(np.mean(upd)),
                    float(np.mean(qry)), load, found / total if total else 1.0, total, empty)


def _combine(rows):
    """Average of independent workloads at one dim (recall pooled by pairs)."""
    pairs = sum(r.oracle_pairs for r in rows)
    found = sum(r.recall * r.oracle_pairs for r in rows)
    first = rows[0]
    return BenchRow(first.dim, first.alpha, first.beta, first.gamma,
                    int(np.mean([r.filters for r in rows])),
                    int(np.mean([r.list_size for r in rows])),
                    float(np.mean([r.update_touched for r in rows])),
                    float(np.mean([r.query_touched for r in rows])),
                    float(np.mean([r.mean_bucket_load for r in rows])),
                    found / pairs if pairs else 1.0, pairs,
                    all(r.empty_after_remove for r in rows))


def lsf_bench(dims, list_exp, gamma, oversample=None, seed=0, alpha=None, beta=None,
              queries=64, repeats=4, exhaustive=False):
    """Run the workload for every dim and fit log2(touched)/dim slopes.

    ``gamma``, ``alpha`` and ``beta`` are relative radii; alpha = beta =
    H^-1(1 - list_exp) when not given (bucket load about one).
    ``oversample=None`` means dim**2 per dimension.  Each dim averages
    ``repeats`` workloads with independent filter codes.  Query cost is measured
    as touched buckets, which is the theoretical query exponent whenever the
    bucket load exponent is <= 0.
    """
    if alpha is None:
        alpha = float(entropy_inv(1 - list_exp))
    if beta is None:
        beta = alpha
    rows = []
    for i, dim in enumerate(dims):
        size = min(MAX_LIST, max(1, round(2 ** (list_exp * dim))))
        radii = radius(alpha, dim), radius(beta, dim), radius(gamma, dim)
        runs = [run_dim(dim, *radii, size, queries, oversample, seed + 1000 * i + j, exhaustive)
                for j in range(repeats)]
        rows.append(_combine(runs))
    rep = BenchReport(rows, alpha, beta, gamma, list_exp)
    if len(rows) >= 2:
        ds = [r.dim for r in rows]
        rep.update_slope = fit_slope(ds, [r.update_touched for r in rows])
        rep.query_slope = fit_slope(ds, [r.query_touched for r in rows])
    upd, _, qry, bucket = lsf_cost_exponents(alpha, beta, gamma, list_exp)
    rep.update_theory = float(upd)
    rep.query_theory = float(qry)
    rep.extra["bucket_load_exp"] = float(bucket)
    return rep
