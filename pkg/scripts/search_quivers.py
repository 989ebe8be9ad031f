#!/usr/bin/env python3
"""Sweep the period-2 defining equations up to a bound and dump solutions."""

import argparse
import sys
import time

from quiverperiod import ONE_CYCLE, TWO_CYCLE, Period2Spec, SearchJob, search
from quiverperiod.formats import quiver_to_json


def specs_for(n: int):
    for k in range(2, (n + 1) // 2 + 1):
        yield Period2Spec(n, ONE_CYCLE, k)
    for k in range(2, (n + 2) // 2 + 1):
        yield Period2Spec(n, TWO_CYCLE, k)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-n", type=int, default=5)
    parser.add_argument("--bound", type=int, default=2)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--out", default="-", help="output path ('-' = stdout)")
    args = parser.parse_args()

    out = sys.stdout if args.out == "-" else open(args.out, "w")
    total = 0
    for n in range(3, args.max_n + 1):
        for spec in specs_for(n):
            t0 = time.monotonic()
            job = SearchJob(spec, args.bound, connected_only=True, jobs=args.jobs)
            hits = list(search(job))
            total += len(hits)
            print(
                f"n={spec.n} {spec.shape} k={spec.k}: {len(hits)} connected "
                f"solutions ({time.monotonic() - t0:.1f}s)",
                file=sys.stderr,
            )
            for B in hits:
                out.write(quiver_to_json(B) + "\n")
    print(f"total: {total}", file=sys.stderr)
    if out is not sys.stdout:
        out.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
