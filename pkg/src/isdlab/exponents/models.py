"""Asymptotic cost models for classical and quantum ISD variants.

Every model maps a rate profile (rho = k/n, omega = w/n and the free
parameters) to per-phase exponents.  The evaluators are written with numpy
broadcasting so the optimiser can score whole parameter grids at once; the
public ``classical_exponent``/``quantum_exponent`` wrap them for a single
point.

Conventions: ``K = rho + lam`` is the relative size of the enlarged
information set, ``lp`` the log-probability that a random permutation is
good, and all list sizes are exponents per n.
"""

from dataclasses import dataclass, fields, replace
import math

import numpy as np

from .entropy import binom_exp, entropy_inv, lsf_cost_exponents, lsf_filter_exponent
from .walks import quantum_walk_total

MODELS = (
    "PrangeC", "PrangeQ", "DumerC", "DumerSSQ", "NnDumerC", "NnDumerQ",
    "NnSsDumerQ", "MmtC", "MmtQ", "BjmmC", "BjmmQ",
)
CLASSICAL = ("PrangeC", "DumerC", "MmtC", "BjmmC", "NnDumerC")
QUANTUM = ("PrangeQ", "DumerSSQ", "MmtQ", "BjmmQ", "NnDumerQ", "NnSsDumerQ")

# share of the base-list exponent kept in the walk register for 4-list walks
WALK_SHARE_4 = 4.0 / 5.0
# share of |L1 u L2| kept in the register of the 2-list near-neighbour walk
WALK_SHARE_NN = 2.0 / 3.0

_NAN = float("nan")


@dataclass(frozen=True)
class RateProfile:
    """Normalised parameters of one algorithm instance (all divided by n).

    ``lam`` is the zero-window length, ``lambda_prime`` the guessed
    Shamir-Schroeppel window, ``eps_rel``/``eps2_rel`` the overlap weights
    of the first and second representation levels, ``rho_r`` the log-size of
    the walk register.  ``alpha``, ``beta``, ``gamma`` are filled in by the
    near-neighbour models and are relative to the near-neighbour dimension.
    """

    rho: float
    omega: float
    lam: float = 0.0
    pi_p: float = 0.0
    lambda_prime: float = 0.0
    eps_rel: float = 0.0
    eps2_rel: float = 0.0
    rho_r: float = 0.0
    alpha: float = _NAN
    beta: float = _NAN
    gamma: float = _NAN

    def check(self):
        """Raise ``ValueError`` unless the support constraints hold."""
        tol = 1e-12
        for f in ("rho", "omega", "lam", "pi_p", "lambda_prime", "eps_rel", "eps2_rel", "rho_r"):
            v = getattr(self, f)
            if not (-tol <= v <= 1 + tol):
                raise ValueError(f"{f}={v} outside [0, 1]")
        if self.pi_p > min(self.omega, self.rho + self.lam) + tol:
            raise ValueError("pi_p exceeds min(omega, rho + lam)")
        if self.omega - self.pi_p > 1 - self.rho - self.lam + tol:
            raise ValueError("omega - pi_p exceeds 1 - rho - lam")
        if self.lambda_prime > self.lam + tol and self.lambda_prime > 0:
            raise ValueError("lambda_prime exceeds lam")


@dataclass(frozen=True)
class CostBreakdown:
    """Per-phase cost exponents.

    ``grover_total`` is the exponent of the outer search over permutations
    (and guessed windows), halved when that search is Grover-accelerated;
    ``walk_total`` the cost of one inner iteration; ``total`` their sum.
    """

    setup: float
    update: float
    check: float
    walk_total: float
    grover_total: float
    total: float
    space: float

    @property
    def feasible(self):
        return math.isfinite(self.total)


INFEASIBLE = CostBreakdown(*(math.inf,) * 7)


def perm_exponent_arrays(rho, omega, lam, pi_p):
    """log2 P / n for a good permutation (vectorised)."""
    k = rho + lam
    return binom_exp(k, pi_p) + binom_exp(1 - k, omega - pi_p) - binom_exp(1.0, omega)


def perm_exponent(profile):
    """log2 of the probability that a random permutation puts exactly
    pi_p * n errors on the first (rho + lam) n coordinates, per n."""
    return float(perm_exponent_arrays(profile.rho, profile.omega, profile.lam, profile.pi_p))


def _finite(*xs):
    ok = True
    for x in xs:
        ok = ok & np.isfinite(x)
    return ok


def _result(ok, grover, walk, space, setup=0.0, update=0.0, check=0.0, **extra):
    total = grover + walk
    out = dict(
        total=np.where(ok, total, np.inf),
        space=space, setup=setup, update=update, check=check,
        walk_total=walk, grover_total=grover, ok=ok,
    )
    out.update(extra)
    return out


# ---------------------------------------------------------------- classical

def _prange(rho, omega, P, quantum):
    lp = perm_exponent_arrays(rho, omega, 0.0, 0.0)
    grover = -lp / 2 if quantum else -lp
    z = np.zeros_like(np.asarray(lp, dtype=float))
    return _result(_finite(lp), grover, z, z)


def _dumer_c(rho, omega, P):
    pi, lam = P["pi_p"], P["lam"]
    lp = perm_exponent_arrays(rho, omega, lam, pi)
    L = binom_exp((rho + lam) / 2, pi / 2)
    check = 2 * L - lam
    walk = np.maximum(L, check)
    return _result(_finite(lp, L), -lp, walk, L, setup=L, check=check)


def _mmt_c(rho, omega, P):
    pi, lam = P["pi_p"], P["lam"]
    lp = perm_exponent_arrays(rho, omega, lam, pi)
    base = binom_exp((rho + lam) / 2, pi / 4)
    r_rep = binom_exp(pi, pi / 2)
    mid = 2 * base - r_rep
    final = 4 * base - lam - r_rep
    walk = np.maximum.reduce([base, mid, final])
    ok = _finite(lp, base, r_rep) & (r_rep <= lam)
    return _result(ok, -lp, walk, np.maximum(base, mid), setup=base, update=mid, check=final)


def _bjmm2_c(rho, omega, P):
    """Two-level BJMM with overlap on the first level only."""
    pi, lam, eps = P["pi_p"], P["lam"], P["eps"]
    k = rho + lam
    lp = perm_exponent_arrays(rho, omega, lam, pi)
    base = binom_exp(k / 2, pi / 4 + eps / 2)
    r_rep = binom_exp(pi, pi / 2) + binom_exp(k - pi, eps)
    mid = 2 * base - r_rep
    final = 4 * base - lam - r_rep
    walk = np.maximum.reduce([base, mid, final])
    ok = _finite(lp, base, r_rep) & (r_rep <= lam)
    return _result(ok, -lp, walk, np.maximum(base, mid), setup=base, update=mid, check=final)


def _bjmm3_c(rho, omega, P):
    """Three-level BJMM tree: weights p1 = p/2 + eps1 and p2 = p1/2 + eps2
    on the two intermediate levels, Dumer-style base lists of weight p2/2."""
    pi, lam, e1, e2 = P["pi_p"], P["lam"], P["eps"], P["eps2"]
    k = rho + lam
    lp = perm_exponent_arrays(rho, omega, lam, pi)
    p1 = pi / 2 + e1
    p2 = p1 / 2 + e2
    r1 = binom_exp(pi, pi / 2) + binom_exp(k - pi, e1)
    r2 = binom_exp(p1, p1 / 2) + binom_exp(k - p1, e2)
    s3 = binom_exp(k / 2, p2 / 2)
    s2 = binom_exp(k, p2) - r2
    s1 = binom_exp(k, p1) - r1
    join2 = 2 * s2 - (r1 - r2)
    final = 2 * s1 - (lam - r1)
    mid = np.maximum.reduce([s2, join2, s1])
    walk = np.maximum.reduce([s3, mid, final])
    ok = _finite(lp, r1, r2, s3, s2, s1) & (r2 <= r1) & (r1 <= lam)
    space = np.maximum.reduce([s3, s2, s1])
    return _result(ok, -lp, walk, space, setup=s3, update=mid, check=final)


def _nn_geometry(rho, omega, lam, pi):
    d = 1 - rho - lam
    with np.errstate(divide="ignore", invalid="ignore"):
        gamma = np.where(d > 0, (omega - pi) / np.where(d > 0, d, 1.0), np.nan)
    return d, gamma


def _nn_dumer_c(rho, omega, P):
    pi, lam = P["pi_p"], P["lam"]
    lp = perm_exponent_arrays(rho, omega, lam, pi)
    L = binom_exp((rho + lam) / 2, pi / 2)
    d, gamma = _nn_geometry(rho, omega, lam, pi)
    list_rel = L / d
    a = entropy_inv(1 - np.clip(list_rel, 0, 1))
    filt = d * lsf_filter_exponent(a, a, gamma)
    upd, pre, qry, _ = lsf_cost_exponents(a, a, gamma, list_rel)
    preprocess = d * pre
    queries = L + d * qry
    walk = np.maximum.reduce([L, preprocess, queries])
    ok = _finite(lp, L, filt, walk) & (gamma <= 0.5) & (list_rel <= 1)
    # memory is reported as the list size; the filters are implicit
    return _result(
        ok, -lp, walk, L, setup=L, update=preprocess, check=queries,
        alpha=a, beta=a, gamma=gamma,
    )


# ---------------------------------------------------------------- quantum

def _four_list_walk(base, r_rep):
    """Walk on four lists of exponent ``base`` with register r = base^(4/5).

    Returns (rho_r, walk exponent).  Updates are polylog, which the caller
    enforces with the window constraints.
    """
    rho_r = WALK_SHARE_4 * base
    walk = quantum_walk_total(rho_r, 0.0, 0.0, -rho_r, 4 * (rho_r - base))
    return rho_r, walk


def _rep_q(rho, omega, P, with_eps):
    pi, lam = P["pi_p"], P["lam"]
    eps = P["eps"] if with_eps else 0.0
    k = rho + lam
    lp = perm_exponent_arrays(rho, omega, lam, pi)
    base = binom_exp(k / 2, pi / 4 + eps / 2)
    r_rep = binom_exp(pi, pi / 2) + binom_exp(k - pi, eps)
    rho_r, walk = _four_list_walk(base, r_rep)
    lam_p = rho_r - r_rep
    # the final merge of the two level-1 lists must also be polylog per
    # update: lam >= |S_i| + lam' + r_rep = 2 rho_r
    ok = _finite(lp, base, r_rep) & (lam_p >= 0) & (lam >= 2 * rho_r)
    grover = -lp / 2 + lam_p / 2
    return _result(
        ok, grover, walk, rho_r, setup=rho_r, rho_r=rho_r, lambda_prime=lam_p,
    )


def _dumer_ss_q(rho, omega, P):
    pi, lam = P["pi_p"], P["lam"]
    lp = perm_exponent_arrays(rho, omega, lam, pi)
    base = binom_exp((rho + lam) / 4, pi / 4)
    rho_r, walk = _four_list_walk(base, 0.0)
    lam_p = rho_r
    ok = _finite(lp, base) & (lam >= 2 * rho_r)
    grover = -lp / 2 + lam_p / 2
    return _result(ok, grover, walk, rho_r, setup=rho_r, rho_r=rho_r, lambda_prime=lam_p)


def _nn_dumer_q(rho, omega, P):
    pi, lam = P["pi_p"], P["lam"]
    lp = perm_exponent_arrays(rho, omega, lam, pi)
    L = binom_exp((rho + lam) / 2, pi / 2)
    rho_r = WALK_SHARE_NN * L
    d, gamma = _nn_geometry(rho, omega, lam, pi)
    r_rel = rho_r / d
    a = entropy_inv(1 - np.clip(r_rel, 0, 1))
    b = entropy_inv(1 - 0.75 * np.clip(r_rel, 0, 1))
    filt = d * lsf_filter_exponent(a, b, gamma)
    upd, pre, qry, _ = lsf_cost_exponents(a, b, gamma, r_rel)
    t_upd = d * upd
    t_chk = rho_r / 4 + d * qry
    setup = np.maximum.reduce([filt, rho_r + t_upd, rho_r / 2 + d * qry])
    walk = quantum_walk_total(setup, t_upd, t_chk, -rho_r, 2 * (rho_r - L))
    ok = _finite(lp, L, filt, walk) & (gamma <= 0.5) & (r_rel <= 1)
    return _result(
        ok, -lp / 2, walk, filt, setup=setup, update=t_upd, check=t_chk,
        rho_r=rho_r, alpha=a, beta=b, gamma=gamma,
    )


def _nn_ss_dumer_q(rho, omega, P):
    """Four-list walk with a guessed window lam' = lam; the two merged lists
    S_1, S_2 (size 2 rho_r - lam) are matched approximately by LSF."""
    pi, lam, rho_r = P["pi_p"], P["lam"], P["rho_r"]
    lp = perm_exponent_arrays(rho, omega, lam, pi)
    base = binom_exp((rho + lam) / 4, pi / 4)
    s = 2 * rho_r - lam
    d, gamma = _nn_geometry(rho, omega, lam, pi)
    s_rel = np.clip(s, 0, None) / d
    a = entropy_inv(1 - np.clip(s_rel, 0, 1))
    b = entropy_inv(1 - 0.75 * np.clip(s_rel, 0, 1))
    filt = d * lsf_filter_exponent(a, b, gamma)
    upd, _, qry, _ = lsf_cost_exponents(a, b, gamma, s_rel)
    t_lsf_u = np.maximum(0.0, d * upd)
    t_lsf_q = np.maximum(0.0, d * qry)
    spill = np.maximum(0.0, rho_r - lam)  # S_i changes per S_ij change
    setup = np.maximum.reduce([rho_r, s, filt, s + t_lsf_u, s / 2 + t_lsf_q])
    t_upd = spill + t_lsf_u
    t_chk = rho_r / 4 + spill / 2 + t_lsf_q
    walk = quantum_walk_total(setup, t_upd, t_chk, -rho_r, 4 * (rho_r - base))
    ok = (
        _finite(lp, base, filt, walk) & (s >= 0) & (rho_r <= base)
        & (gamma <= 0.5) & (s_rel <= 1)
    )
    grover = -lp / 2 + lam / 2
    return _result(
        ok, grover, walk, np.maximum(rho_r, filt), setup=setup, update=t_upd, check=t_chk,
        rho_r=rho_r, lambda_prime=lam, alpha=a, beta=b, gamma=gamma,
    )


@dataclass(frozen=True)
class ModelSpec:
    tag: str
    quantum: bool
    params: tuple
    evaluate: object


_SPECS = {
    "PrangeC": ModelSpec("PrangeC", False, (), lambda r, o, P: _prange(r, o, P, False)),
    "PrangeQ": ModelSpec("PrangeQ", True, (), lambda r, o, P: _prange(r, o, P, True)),
    "DumerC": ModelSpec("DumerC", False, ("pi_p", "lam"), _dumer_c),
    "MmtC": ModelSpec("MmtC", False, ("pi_p", "lam"), _mmt_c),
    "BjmmC": ModelSpec("BjmmC", False, ("pi_p", "lam", "eps", "eps2"), _bjmm3_c),
    "NnDumerC": ModelSpec("NnDumerC", False, ("pi_p", "lam"), _nn_dumer_c),
    "DumerSSQ": ModelSpec("DumerSSQ", True, ("pi_p", "lam"), _dumer_ss_q),
    "MmtQ": ModelSpec("MmtQ", True, ("pi_p", "lam"), lambda r, o, P: _rep_q(r, o, P, False)),
    "BjmmQ": ModelSpec("BjmmQ", True, ("pi_p", "lam", "eps"), lambda r, o, P: _rep_q(r, o, P, True)),
    "NnDumerQ": ModelSpec("NnDumerQ", True, ("pi_p", "lam"), _nn_dumer_q),
    "NnSsDumerQ": ModelSpec("NnSsDumerQ", True, ("pi_p", "lam", "rho_r"), _nn_ss_dumer_q),
}
# two-level BJMM, selectable via bjmm_levels=2
_BJMM2 = ModelSpec("BjmmC", False, ("pi_p", "lam", "eps"), _bjmm2_c)

# RateProfile field holding each free parameter
PARAM_FIELDS = {"pi_p": "pi_p", "lam": "lam", "eps": "eps_rel", "eps2": "eps2_rel", "rho_r": "rho_r"}


def model_spec(model, bjmm_levels=3):
    if model not in _SPECS:
        raise ValueError(f"unknown model {model!r}; expected one of {MODELS}")
    if model == "BjmmC" and bjmm_levels == 2:
        return _BJMM2
    if bjmm_levels not in (2, 3):
        raise ValueError("bjmm_levels must be 2 or 3")
    return _SPECS[model]


def evaluate(model, rho, omega, params, bjmm_levels=3):
    """Vectorised evaluation; ``params`` maps parameter names to arrays."""
    spec = model_spec(model, bjmm_levels)
    P = {"pi_p": 0.0, "lam": 0.0, "eps": 0.0, "eps2": 0.0, "rho_r": 0.0}
    P.update({k: np.asarray(v, dtype=float) for k, v in params.items()})
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        out = spec.evaluate(rho, omega, P)
    out["total"] = np.where(np.isnan(out["total"]), np.inf, out["total"])
    return out


def _profile_params(profile, spec):
    return {p: getattr(profile, PARAM_FIELDS[p]) for p in spec.params}


def breakdown(model, profile, bjmm_levels=3):
    """Evaluate ``model`` at ``profile``; returns (CostBreakdown, profile with
    derived quantities filled in)."""
    spec = model_spec(model, bjmm_levels)
    out = evaluate(model, profile.rho, profile.omega, _profile_params(profile, spec), bjmm_levels)
    if not bool(np.all(out["ok"])) or not np.isfinite(out["total"]):
        return INFEASIBLE, profile
    cb = CostBreakdown(**{f.name: float(np.asarray(out[f.name]).item()) for f in fields(CostBreakdown)})
    derived = {}
    for key in ("rho_r", "lambda_prime", "alpha", "beta", "gamma"):
        if key in out:
            derived[key] = float(np.asarray(out[key]).item())
    return cb, replace(profile, **derived)


def classical_exponent(model, profile, bjmm_levels=3):
    """Cost exponents of a classical algorithm at ``profile``.

    ``bjmm_levels`` selects the two- or three-level BJMM tree (default 3).
    Infeasible profiles give a breakdown with infinite total.
    """
    if model not in CLASSICAL:
        raise ValueError(f"{model} is not a classical model")
    return breakdown(model, profile, bjmm_levels)[0]


def quantum_exponent(model, profile):
    """Cost exponents of a quantum algorithm at ``profile``."""
    if model not in QUANTUM:
        raise ValueError(f"{model} is not a quantum model")
    return breakdown(model, profile)[0]


__all__ = [
    "MODELS", "CLASSICAL", "QUANTUM", "RateProfile", "CostBreakdown", "ModelSpec",
    "perm_exponent", "classical_exponent", "quantum_exponent", "evaluate", "breakdown",
    "model_spec",
]
