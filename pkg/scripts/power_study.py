"""Run the four-scenario power study and print the headline comparisons.

    python scripts/power_study.py --reps 10000 --seed 20190101 --out results.csv
"""

import argparse
import time

from wlogrank.harness import StudyConfig, parse_methods, relative_efficiency, rows_to_csv, run_power_study


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--reps", type=int, default=10_000)
    parser.add_argument("--seed", type=int, default=20190101)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--variance", choices=("plugin", "permutation"), default="plugin")
    parser.add_argument("--methods", default="lrt,wlrt:6,mwlrt:3:30:3,landmark:15:30:3")
    parser.add_argument("--out", default="results.csv")
    args = parser.parse_args()

    config = StudyConfig(
        methods=tuple(parse_methods(args.methods)), n_reps=args.reps, master_seed=args.seed, variance=args.variance
    )
    start = time.perf_counter()
    rows = run_power_study(config, workers=args.workers)
    print(f"{len(rows)} rows in {time.perf_counter() - start:.1f}s -> {args.out}")
    with open(args.out, "w") as fh:
        fh.write(rows_to_csv(rows))

    by_key = {(r.scenario, r.method): r for r in rows}
    print(f"{'method':<14}" + "".join(f"{s:>9}" for s in config.scenarios))
    for m in config.methods:
        print(f"{m.label:<14}" + "".join(f"{by_key[(s, m.label)].rejection_rate:>9.4f}" for s in config.scenarios))

    if ("III", "lrt") in by_key:
        print("\nrelative efficiency vs lrt (PH / NPH)")
        for m in config.methods:
            if m.family == "lrt":
                continue
            try:
                ph = relative_efficiency(by_key[("III", m.label)].rejection_rate, by_key[("III", "lrt")].rejection_rate)
                nph = relative_efficiency(by_key[("IV", m.label)].rejection_rate, by_key[("IV", "lrt")].rejection_rate)
            except (KeyError, ValueError):
                continue
            print(f"{m.label:<14}{ph:>8.1f}%{nph:>8.1f}%")


if __name__ == "__main__":
    main()
