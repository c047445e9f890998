"""Measure LSF update and query cost across dimensions and fit the slopes.

    python3 demos/lsf_scaling.py

Oversample 1 keeps the filter count small, so recall is low; only the
cost slopes are of interest here.
"""

from isdlab.bench import lsf_bench
from isdlab.exponents import entropy


def main():
    a, g = 7 / 32, 11 / 32
    rep = lsf_bench([24, 32, 40], 1 - entropy(a), g, oversample=1, alpha=a, beta=a,
                    queries=32, repeats=2)
    for r in rep.rows:
        print(f"dim={r.dim:3d} filters={r.filters:7d} update={r.update_touched:9.1f} "
              f"query={r.query_touched:9.1f} recall={r.recall:.3f}")
    print(f"update slope {rep.update_slope:.4f} (theory {rep.update_theory:.4f})")
    print(f"query slope  {rep.query_slope:.4f} (theory {rep.query_theory:.4f})")


if __name__ == "__main__":
    main()
