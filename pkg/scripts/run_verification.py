#!/usr/bin/env python3
"""Run the full verification battery and write one JSON report per suite.

Thin driver over zonalkit.verify for batch runs; the `zonalkit verify` CLI is
the interactive front end.  The kelvin and eta suites are expected to exit
red on their stated-constant cells (see the findings inside the reports);
everything else must be green.
"""

from __future__ import annotations

import argparse
import os
import pathlib
import sys
import time

from zonalkit.verify import SUITE_NAMES, SuiteArgs, run_suite


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="reports", help="directory for JSON reports")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    parser.add_argument("--samples", type=int, default=1_000_000)
    parser.add_argument("--suites", nargs="*", default=list(SUITE_NAMES))
    args = parser.parse_args()

    out_dir = pathlib.Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    overall_ok = True
    for suite in args.suites:
        t0 = time.perf_counter()
        report = run_suite(suite, SuiteArgs(seed=args.seed, samples=args.samples),
                           threads=args.threads)
        elapsed = time.perf_counter() - t0
        path = out_dir / f"{suite}.json"
        path.write_text(report.to_json())
        counts = report.counts()
        status = "ok" if report.passed else "FAIL"
        print(f"{suite:12s} {status:4s} cells={len(report.cells):4d} "
              f"pass={counts['pass']:4d} fail={counts['fail']:3d} "
              f"findings={len(report.findings):3d} {elapsed:7.1f}s -> {path}")
        if not report.passed and suite not in ("kelvin", "eta"):
            overall_ok = False
    return 0 if overall_ok else 1


if __name__ == "__main__":
    sys.exit(main())
