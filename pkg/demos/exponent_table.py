"""Optimise every cost model at its worst-case rate and print the table.

Takes a few minutes on one core; pass model names to restrict the run.

    python3 demos/exponent_table.py [Model ...]
"""

import sys

from isdlab.exponents import MODELS
from isdlab.report import optimize_table


def main():
    models = sys.argv[1:] or list(MODELS)
    print(f"{'model':11s} {'rate':>8s} {'time':>9s} {'space':>9s} {'pi_p':>8s} {'lambda':>8s}")
    for r in optimize_table(models):
        print(f"{r['model']:11s} {r['rate']:8.4f} {r['time']:9.6f} {r['space']:9.6f} "
              f"{r['pi_p']:8.5f} {r['lam']:8.5f}")


if __name__ == "__main__":
    main()
