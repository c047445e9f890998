"""Worst-case exponent table and exponent-versus-rate sweeps."""

from concurrent.futures import ProcessPoolExecutor
import logging
import math
import os

from .exponents import MODELS, InfeasibleModel, optimize_params, worst_case_rate
from .fileio import SWEEP_COLUMNS, SWEEP_VERSION, TABLE_COLUMNS, TABLE_VERSION, format_csv

log = logging.getLogger(__name__)

PROFILE_COLUMNS = ("pi_p", "lam", "lambda_prime", "eps_rel", "eps2_rel", "rho_r",
                   "alpha", "beta", "gamma")


def _nan_row(model, rate, status):
    row = {c: math.nan for c in TABLE_COLUMNS}
    row.update(model=model, rate=float(rate) if rate is not None else math.nan,
               status=status, certificate="")
    return row


def table_row(model, rate=None, bjmm_levels=3):
    """One report row: the worst-case rate when ``rate`` is None.

    Infeasible combinations give a row with status 'infeasible' instead of
    an exception so a table run always completes.
    """
    try:
        if rate is None:
            rate, res = worst_case_rate(model, bjmm_levels=bjmm_levels)
        else:
            res = optimize_params(model, rate, bjmm_levels=bjmm_levels)
    except InfeasibleModel as exc:
        log.warning("%s", exc)
        return _nan_row(model, rate, "infeasible")
    row = {"model": model, "rate": float(rate), "time": float(res.cost.total),
           "space": float(res.cost.space), "status": "ok", "certificate": res.certificate}
    for c in PROFILE_COLUMNS:
        row[c] = float(getattr(res.profile, c))
    return row


def _row_job(args):
    return table_row(*args)


def _map(fn, jobs, workers):
    if workers is None:
        workers = os.cpu_count() or 1
    if workers <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as ex:
        return list(ex.map(fn, jobs))


def optimize_table(models=MODELS, rate=None, workers=None, bjmm_levels=3):
    """Rows for ``models`` in order, each at its worst-case rate or ``rate``."""
    return _map(_row_job, [(m, rate, bjmm_levels) for m in models], workers)


def _sweep_job(args):
    model, rate, bjmm_levels = args
    try:
        res = optimize_params(model, rate, bjmm_levels=bjmm_levels)
    except InfeasibleModel:
        return {"model": model, "rate": rate, "time": math.nan, "space": math.nan,
                "status": "infeasible"}
    return {"model": model, "rate": rate, "time": float(res.cost.total),
            "space": float(res.cost.space), "status": "ok"}


def sweep_rows(models, rates, workers=None, bjmm_levels=3):
    jobs = [(m, float(r), bjmm_levels) for m in models for r in rates]
    return _map(_sweep_job, jobs, workers)


def table_csv(rows):
    return format_csv(TABLE_VERSION, TABLE_COLUMNS, rows)


def sweep_csv(rows):
    return format_csv(SWEEP_VERSION, SWEEP_COLUMNS, rows)
