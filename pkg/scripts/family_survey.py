"""Survey the semidirect-product family over a range of Pell parameters.

For every nonsquare d in the requested range the script builds the group,
computes the derivation lattice, the inner action of the translation
generator, and the necessary-condition verdict, then prints one table row.
"""

import argparse
import json
import math
import sys
import time

from polyarith.arithmeticity import non_arithmeticity_report


def survey_row(d):
    start = time.perf_counter()
    report = non_arithmeticity_report(d)
    elapsed = time.perf_counter() - start
    return {
        "d": d,
        "a": report.a,
        "b": report.b,
        "coupling": report.coupling,
        "rank": report.derivation_rank,
        "classification": report.classification,
        "factor": str(report.infinite_order_factor),
        "seconds": round(elapsed, 4),
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--start", type=int, default=2, help="first d (default: 2)")
    parser.add_argument("--stop", type=int, default=30, help="last d, inclusive (default: 30)")
    parser.add_argument("--json", action="store_true", help="emit one JSON object per row")
    args = parser.parse_args(argv)

    if args.start < 2:
        parser.error("d starts at 2")

    rows = []
    for d in range(args.start, args.stop + 1):
        if math.isqrt(d) ** 2 == d:
            continue
        rows.append(survey_row(d))

    if args.json:
        for row in rows:
            print(json.dumps(row, sort_keys=True))
        return 0

    header = f"{'d':>4} {'a':>12} {'b':>10} {'gcd':>5} {'rank':>4}  {'verdict':<24} factor"
    print(header)
    print("-" * len(header))
    for row in rows:
        print(
            f"{row['d']:>4} {row['a']:>12} {row['b']:>10} {row['coupling']:>5}"
            f" {row['rank']:>4}  {row['classification']:<24} {row['factor']}"
        )
    print(f"\n{len(rows)} groups surveyed; every verdict should read FailsNecessaryCondition.")
    return 0


if __name__ == "__main__":
    sys.exit(main())
