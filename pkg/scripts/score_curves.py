"""Score and weight curves for the standard and modestly weighted logrank tests.

Uses the stylised trial with 100 patients per arm, 100 untied events before
any censoring and the remaining 100 patients censored; the modest test
pivots after the 30th event.  Writes ``j,c_lrt,w_lrt,c_mwlrt,C_mwlrt,w_mwlrt``.
"""

import argparse
import sys

import numpy as np

from wlogrank.logrank import make_weights
from wlogrank.modest import modest_scores
from wlogrank.scores import weights_to_scores
from wlogrank.survival import Dataset, build_risk_table


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--pivot-events", type=int, default=30)
    parser.add_argument("--out")
    args = parser.parse_args()

    time = np.concatenate([np.arange(1.0, 101.0), np.full(100, 150.0)])
    table = build_risk_table(Dataset(time, np.arange(200) < 100, np.arange(200) % 2))
    std = weights_to_scores(table, make_weights(table, "standard"))
    w, s = modest_scores(table, args.pivot_events + 0.5)

    out = open(args.out, "w") if args.out else sys.stdout
    out.write("j,c_lrt,w_lrt,c_mwlrt,C_mwlrt,w_mwlrt\n")
    for j in range(table.k):
        out.write(f"{j + 1},{std.c[j]:.17g},1,{s.c[j]:.17g},{s.C[j + 1]:.17g},{w.weights[j]:.17g}\n")
    print(f"censored subjects' score: lrt {std.C[-1]:.4f}, mwlrt {s.C[-1]:.4f}", file=sys.stderr)
    if args.out:
        out.close()


if __name__ == "__main__":
    main()
