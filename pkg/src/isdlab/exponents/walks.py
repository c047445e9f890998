"""Quantum-walk cost algebra and Johnson-graph checks."""

from itertools import combinations

import numpy as np


def quantum_walk_total(setup, update, check, delta_exp, eps_exp):
    """Exponent of T_S + eps^-1/2 (delta^-1/2 T_U + T_C).

    ``delta_exp`` and ``eps_exp`` are log2 of the spectral gap and marked
    fraction (so both are <= 0).  Sums of exponentials become maxima.
    """
    inner = np.maximum(-np.asarray(delta_exp) / 2 + update, check)
    out = np.maximum(setup, -np.asarray(eps_exp) / 2 + inner)
    return float(out) if np.ndim(out) == 0 else out


def johnson_gap(N, r):
    """Spectral gap N / (r (N - r)) of the normalised Johnson graph J(N, r)."""
    if not 1 <= r < N:
        raise ValueError(f"need 1 <= r < N, got N={N}, r={r}")
    return N / (r * (N - r))


def johnson_transition(N, r):
    """Dense random-walk transition matrix of J(N, r) and its vertex list."""
    vertices = list(combinations(range(N), r))
    index = {v: i for i, v in enumerate(vertices)}
    deg = r * (N - r)
    P = np.zeros((len(vertices), len(vertices)))
    for i, v in enumerate(vertices):
        vs = set(v)
        outside = [x for x in range(N) if x not in vs]
        for drop in v:
            for add in outside:
                u = tuple(sorted((vs - {drop}) | {add}))
                P[i, index[u]] = 1.0 / deg
    return P, vertices


def johnson_gap_spectral(N, r):
    """1 minus the second-largest eigenvalue of the J(N, r) walk operator."""
    if not 1 <= r < N:
        raise ValueError(f"need 1 <= r < N, got N={N}, r={r}")
    if N > 14:
        raise ValueError("spectral check limited to N <= 14")
    P, _ = johnson_transition(N, r)
    eig = np.linalg.eigvalsh(P)
    return float(1.0 - eig[-2])


def marked_fraction(list_exp, r_exp, k):
    """Exponent of (r/|L|)^k: the chance that k random r-subsets contain the
    one planted element of each list."""
    if r_exp > list_exp + 1e-15:
        raise ValueError("r cannot exceed the list size")
    return k * (r_exp - list_exp)


def empirical_marked_fraction(list_size, r, k, trials, seed=0, chunk=20000):
    """Monte-Carlo estimate of the marked fraction.

    For each trial draws k independent uniformly random r-subsets (one per
    list, via random permutations) and records whether every subset contains
    its planted element (index 0).
    """
    rng = np.random.default_rng(seed)
    hits = 0
    done = 0
    while done < trials:
        m = min(chunk, trials - done)
        ok = np.ones(m, dtype=bool)
        for _ in range(k):
            keys = rng.random((m, list_size))
            # element 0 is in the subset iff fewer than r keys are smaller
            rank = (keys < keys[:, :1]).sum(axis=1)
            ok &= rank < r
        hits += int(ok.sum())
        done += m
    return hits / trials
