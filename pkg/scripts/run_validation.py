"""Run every cross-validation suite and print one line per suite.

    python3 scripts/run_validation.py --t-max 10 --threads 4
"""
import argparse
import sys
import time

from weylwalk.paths import DEFAULT_MAX_PATHS
from weylwalk.validate import run_all


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--t-max", type=int, default=10)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--max-paths", type=int, default=DEFAULT_MAX_PATHS)
    args = ap.parse_args()
    start = time.perf_counter()
    results = run_all(args.t_max, args.max_paths, args.threads, report=print)
    print(f"{sum(r.passed for r in results)}/{len(results)} suites passed "
          f"in {time.perf_counter() - start:.1f}s")
    return 0 if all(r.passed for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())
