"""Parameter optimisation for the cost models.

Strategy per rate: a vectorised coarse grid over the model's free
parameters, a few rounds of zooming grids around the incumbent, then
Nelder-Mead polishing from the best grid points.  Box constraints are
handled by clipping, the remaining constraints by returning +inf.
"""

from dataclasses import dataclass
import hashlib
import math

import numpy as np
from scipy.optimize import minimize

from .entropy import entropy_inv
from .models import INFEASIBLE, PARAM_FIELDS, RateProfile, breakdown, evaluate, model_spec


class InfeasibleModel(ValueError):
    """No feasible parameter point was found."""


def gv_omega(rate):
    """Relative GV weight for ``rate``: the omega <= 1/2 with H(omega) = 1 - rate."""
    if not 0 < rate < 1:
        raise ValueError(f"rate must lie in (0, 1), got {rate}")
    return float(entropy_inv(1.0 - rate))


def default_bounds(param, rho, omega):
    if param == "pi_p":
        return (0.0, min(omega, 0.25))
    if param == "lam":
        return (0.0, min(1.0 - rho, 0.4))
    if param in ("eps", "eps2"):
        return (0.0, 0.04)
    if param == "rho_r":
        return (0.0, 0.08)
    raise KeyError(param)


@dataclass(frozen=True)
class OptimizeResult:
    profile: RateProfile
    cost: object
    certificate: str


def certificate(model, profile, cost):
    """Short hash identifying an optimiser outcome."""
    text = "|".join(
        [model] + [f"{getattr(profile, f):.9f}" for f in ("rho", "omega", "lam", "pi_p", "lambda_prime",
                                                       "eps_rel", "eps2_rel", "rho_r")]
        + [f"{cost.total:.9f}", f"{cost.space:.9f}"]
    )
    return hashlib.sha256(text.encode()).hexdigest()[:16]


class _Problem:
    def __init__(self, model, rate, fixed, bounds, bjmm_levels):
        self.model = model
        self.rho = float(rate)
        self.omega = gv_omega(rate)
        self.levels = bjmm_levels
        spec = model_spec(model, bjmm_levels)
        fixed = dict(fixed or {})
        unknown = set(fixed) - set(spec.params)
        if unknown:
            raise ValueError(f"{model} has no parameters {sorted(unknown)}")
        self.fixed = fixed
        self.free = [p for p in spec.params if p not in fixed]
        self.bounds = []
        for p in self.free:
            lo, hi = default_bounds(p, self.rho, self.omega)
            if bounds and p in bounds:
                lo, hi = bounds[p]
            self.bounds.append((float(lo), float(hi)))
        self.lo = np.array([b[0] for b in self.bounds])
        self.hi = np.array([b[1] for b in self.bounds])

    def values(self, X):
        """Total exponent for points X of shape (m, len(free))."""
        params = dict(self.fixed)
        for i, p in enumerate(self.free):
            params[p] = X[:, i]
        total = evaluate(self.model, self.rho, self.omega, params, self.levels)["total"]
        return np.broadcast_to(total, (X.shape[0],))

    def scalar(self, x):
        x = np.clip(np.asarray(x, dtype=float), self.lo, self.hi)
        return float(self.values(x[None, :])[0])

    def grid(self, lo, hi, n):
        axes = [np.linspace(a, b, n) for a, b in zip(lo, hi)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)

    def profile(self, x):
        kw = {PARAM_FIELDS[p]: float(v) for p, v in self.fixed.items()}
        kw.update({PARAM_FIELDS[p]: float(v) for p, v in zip(self.free, x)})
        return RateProfile(rho=self.rho, omega=self.omega, **kw)


def _coarse_points(d, max_points, span, step):
    per_dim = max(3, int(max_points ** (1.0 / d)))
    needed = int(np.max(span) / step) + 1 if step > 0 else per_dim
    return max(3, min(per_dim, needed))


def _zoom(prob, x0, v0, width, rounds, n, shrink):
    x, v = x0, v0
    w = width.copy()
    for _ in range(rounds):
        lo = np.maximum(prob.lo, x - w)
        hi = np.minimum(prob.hi, x + w)
        pts = prob.grid(lo, hi, n)
        vals = prob.values(pts)
        i = int(np.argmin(vals))
        if vals[i] < v:
            x, v = pts[i], float(vals[i])
        w = w * shrink
    return x, v


def optimize_params(model, rate, *, fixed=None, bounds=None, bjmm_levels=3,
                    max_grid=40000, grid_step=1e-3, starts=10, zoom_rounds=10,
                    polish=True, tol=1e-7):
    """Minimise the total exponent of ``model`` at code rate ``rate``.

    ``fixed`` pins parameters (e.g. ``{"pi_p": 0.0}``), ``bounds`` overrides
    search boxes.  The coarse grid uses step ``grid_step`` per axis unless
    that would exceed ``max_grid`` points, in which case the step widens.
    Returns an ``OptimizeResult``; raises ``InfeasibleModel`` if no grid or
    refined point is feasible.  The result is the best point found, not a
    proven global optimum.
    """
    prob = _Problem(model, rate, fixed, bounds, bjmm_levels)
    d = len(prob.free)
    if d == 0:
        x_best = np.zeros(0)
        v_best = float(prob.values(np.zeros((1, 0)))[0])
    else:
        span = prob.hi - prob.lo
        n = _coarse_points(d, max_grid, span, grid_step)
        pts = prob.grid(prob.lo, prob.hi, n)
        vals = prob.values(pts)
        order = np.argsort(vals, kind="stable")
        finite = order[np.isfinite(vals[order])]
        if finite.size == 0:
            raise InfeasibleModel(f"{model} has no feasible point at rate {rate}")
        cell = span / (n - 1)
        x_best, v_best = _zoom(prob, pts[finite[0]], float(vals[finite[0]]), cell * 2,
                               zoom_rounds, 11 if d <= 2 else (7 if d == 3 else 5), 0.4)
        if polish:
            seeds = [x_best] + [pts[i] for i in finite[:starts]]
            for x0 in seeds:
                res = minimize(prob.scalar, x0, method="Nelder-Mead",
                               options=dict(xatol=1e-9, fatol=tol, maxiter=400 * d,
                                            initial_simplex=_simplex(x0, cell, prob)))
                if res.fun < v_best:
                    x_best = np.clip(res.x, prob.lo, prob.hi)
                    v_best = float(res.fun)
    if not math.isfinite(v_best):
        raise InfeasibleModel(f"{model} has no feasible point at rate {rate}")
    cost, profile = breakdown(model, prob.profile(x_best), bjmm_levels)
    if cost is INFEASIBLE:
        raise InfeasibleModel(f"{model} optimum became infeasible at rate {rate}")
    return OptimizeResult(profile, cost, certificate(model, profile, cost))


def _simplex(x0, cell, prob):
    d = len(x0)
    S = np.tile(x0, (d + 1, 1)).astype(float)
    for i in range(d):
        step = cell[i] if cell[i] > 0 else 1e-3
        S[i + 1, i] = x0[i] + step if x0[i] + step <= prob.hi[i] else x0[i] - step
    return S


def quick_total(model, rate, bjmm_levels=3):
    """Cheap estimate of the optimal total (grid and zoom only)."""
    try:
        r = optimize_params(model, rate, bjmm_levels=bjmm_levels, max_grid=4000,
                            zoom_rounds=6, polish=False)
    except InfeasibleModel:
        return -math.inf
    return r.cost.total


def worst_case_rate(model, *, n_sweep=200, rate_range=(0.0025, 0.5), tol=1e-4,
                    bjmm_levels=3, **opt_kw):
    """Rate maximising the optimised total exponent.

    A sweep of ``n_sweep`` rates (cheap grid estimates) brackets the maximum,
    then golden-section search with full optimisation refines it, assuming
    unimodality inside the bracket.  Returns ``(rate, OptimizeResult)``.
    """
    rates = np.linspace(rate_range[0], rate_range[1], n_sweep)
    sweep = np.array([quick_total(model, float(r), bjmm_levels) for r in rates])
    i = int(np.argmax(sweep))
    a = float(rates[max(i - 1, 0)])
    b = float(rates[min(i + 1, n_sweep - 1)])
    if b >= 1.0:
        b = 0.5
    cache = {}

    def f(r):
        if r not in cache:
            cache[r] = optimize_params(model, r, bjmm_levels=bjmm_levels, **opt_kw)
        return cache[r].cost.total

    g = (math.sqrt(5) - 1) / 2
    c, d = b - g * (b - a), a + g * (b - a)
    while b - a > tol:
        if f(c) > f(d):
            b, d = d, c
            c = b - g * (b - a)
        else:
            a, c = c, d
            d = a + g * (b - a)
    if not cache:
        f(0.5 * (a + b))
    best = max(cache, key=lambda r: cache[r].cost.total)
    return best, cache[best]


__all__ = ["optimize_params", "worst_case_rate", "gv_omega", "OptimizeResult",
           "InfeasibleModel", "quick_total", "certificate"]
