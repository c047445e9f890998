"""Binary entropy, its inverse, and the filter-count formulas for Hamming LSF.

All functions accept scalars or numpy arrays and broadcast.  Exponents are
base-2 logarithms normalised by the relevant dimension.  Out-of-domain
arguments map to ``-inf`` (for counting exponents) or ``nan`` (for
distribution entropies), never to an exception, so vectorised grid search
can simply mask them out.
"""

from dataclasses import dataclass
import math

import numpy as np

_TINY = 1e-300


def _xlog2x(x):
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(x > 0, x * np.log2(np.maximum(x, _TINY)), 0.0)
    return out


def _scalar_or_array(a):
    return float(a) if np.ndim(a) == 0 else a


def entropy(x):
    """Binary entropy H(x) = -x log x - (1-x) log(1-x), with H(0) = H(1) = 0.

    Values outside [0, 1] give nan.
    """
    x = np.asarray(x, dtype=float)
    h = -_xlog2x(x) - _xlog2x(1.0 - x)
    h = np.where((x < 0) | (x > 1), np.nan, h)
    return _scalar_or_array(h)


def _h(x):
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def _entropy_inv_scalar(y, tol):
    if y <= 0.0:
        return 0.0
    if y >= 1.0:
        return 0.5
    lo, hi, x = 0.0, 0.5, 0.25
    for _ in range(200):
        f = _h(x) - y
        if f < 0:
            lo = x
        else:
            hi = x
        slope = math.log2((1 - x) / x) if 0 < x < 0.5 else 0.0
        nxt = x - f / slope if slope > 0 else 0.5 * (lo + hi)
        if not lo < nxt < hi:
            nxt = 0.5 * (lo + hi)
        if abs(nxt - x) <= tol * 1e-2 or hi - lo <= tol:
            return nxt
        x = nxt
    return x


def entropy_inv(y, tol=1e-13):
    """Inverse of H on the branch [0, 1/2].

    Bisection brackets the root, then safeguarded Newton steps finish it;
    the result is within ``tol`` of the exact preimage.  ``y`` is clipped
    into [0, 1].
    """
    y = np.clip(np.asarray(y, dtype=float), 0.0, 1.0)
    if y.size == 1:
        x = _entropy_inv_scalar(float(y.reshape(())), tol)
        return x if y.ndim == 0 else np.full(y.shape, x)
    lo = np.zeros_like(y)
    hi = np.full_like(y, 0.5)
    x = np.full_like(y, 0.25)
    for _ in range(200):
        f = entropy(x) - y
        lo = np.where(f < 0, x, lo)
        hi = np.where(f < 0, hi, x)
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = x - f / np.log2((1 - x) / x)
        inside = np.isfinite(newton) & (newton > lo) & (newton < hi)
        nxt = np.where(inside, newton, 0.5 * (lo + hi))
        done = np.all((np.abs(nxt - x) <= tol * 1e-2) | (hi - lo <= tol))
        x = nxt
        if done:
            break
    x = np.where(y <= 0, 0.0, np.where(y >= 1, 0.5, x))
    return _scalar_or_array(x)


def binom_exp(a, b):
    """Exponent of C(a n, b n) per n, i.e. a H(b/a).

    Returns -inf when b < 0 or b > a (no such subsets); ``binom_exp(0, 0) = 0``.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    bad = (b < -1e-15) | (b > a + 1e-15) | (a < 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(a > 0, np.clip(b, 0, None) / np.where(a > 0, a, 1.0), 0.0)
    val = a * entropy(np.clip(ratio, 0.0, 1.0))
    val = np.where(bad, -np.inf, val)
    return _scalar_or_array(val)


@dataclass(frozen=True)
class ConfigVector:
    """Coordinate distribution of a triple (v, q, c) at relative distances.

    ``p8`` lists p000, p001, p010, p011, p100, p101, p110, p111 in that order;
    ``p4`` lists p00, p01, p10, p11 for a pair at distance gamma.
    """

    p8: tuple
    p4: tuple

    @property
    def feasible(self):
        return min(self.p8) >= 0 and min(self.p4) >= 0

    def entropy8(self):
        return float(-sum(_xlog2x(p) for p in self.p8))

    def entropy4(self):
        return float(-sum(_xlog2x(p) for p in self.p4))


ROUNDOFF = 1e-15


def _config_entries(alpha, beta, gamma):
    p000 = 0.5 - (gamma + beta + alpha) / 4
    p001 = (gamma + beta - alpha) / 4
    p010 = (gamma + alpha - beta) / 4
    p100 = (beta + alpha - gamma) / 4
    return p000, p001, p010, p100


def config_vector(alpha, beta, gamma):
    """Configuration vectors p(alpha, beta, gamma) and p(gamma).

    ``alpha`` is the relative distance between v and c, ``beta`` between q
    and c, ``gamma`` between v and q.  Raises ``ValueError`` if any entry is
    negative (the three distances cannot be realised simultaneously).
    """
    entries = [float(t) for t in _config_entries(alpha, beta, gamma)]
    # boundary triples (gamma = |alpha - beta| etc.) can round to -1e-18
    p000, p001, p010, p100 = (0.0 if -ROUNDOFF < t < 0 else t for t in entries)
    p8 = (p000, p001, p010, p100, p100, p010, p001, p000)
    p4 = ((1 - gamma) / 2, gamma / 2, gamma / 2, (1 - gamma) / 2)
    cv = ConfigVector(p8=p8, p4=tuple(float(t) for t in p4))
    if not cv.feasible:
        raise ValueError(
            f"infeasible configuration alpha={alpha}, beta={beta}, gamma={gamma}: {p8}"
        )
    return cv


def lsf_filter_exponent(alpha, beta, gamma):
    """Relative exponent of the number of filters |C| per ambient dimension.

    Equal to 1 - (H(p(alpha,beta,gamma)) - H(p(gamma))).  Broadcasts; returns
    nan where the configuration is infeasible or a radius exceeds 1/2.
    """
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    p000, p001, p010, p100 = _config_entries(alpha, beta, gamma)
    h8 = -2 * (_xlog2x(p000) + _xlog2x(p001) + _xlog2x(p010) + _xlog2x(p100))
    h4 = 1.0 + entropy(np.clip(gamma, 0, 1))
    out = 1.0 - (h8 - h4)
    eps = ROUNDOFF
    bad = (
        (p000 < -eps) | (p001 < -eps) | (p010 < -eps) | (p100 < -eps)
        | (alpha > 0.5 + eps) | (beta > 0.5 + eps) | (gamma > 0.5 + eps)
        | (alpha < 0) | (beta < 0) | (gamma < 0)
    )
    return _scalar_or_array(np.where(bad, np.nan, out))


def may_ozerov_exponent(list_exp, gamma):
    """Closed-form filter exponent for alpha = beta = H^-1(1 - list_exp)."""
    a = entropy_inv(1.0 - np.asarray(list_exp, dtype=float))
    gamma = np.asarray(gamma, dtype=float)
    x = (a - gamma / 2) / (1 - gamma)
    return _scalar_or_array((1 - gamma) * (1 - entropy(x)))


def lsf_cost_exponents(alpha, beta, gamma, list_exp):
    """Per-dimension exponents of one Update, Preprocessing, one Query and the
    expected bucket load for a list of size 2^(list_exp * dim).

    Returns ``(update, preprocess, query, bucket_load)``.
    """
    filt = lsf_filter_exponent(alpha, beta, gamma)
    update = filt + entropy(alpha) - 1
    bucket = list_exp + entropy(alpha) - 1
    query = filt + entropy(beta) - 1 + np.maximum(bucket, 0.0)
    preprocess = list_exp + update
    return tuple(_scalar_or_array(t) for t in (update, preprocess, query, bucket))
