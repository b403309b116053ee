"""Run the acceptance checks outside pytest and write a JSON summary."""

import argparse
import json
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

import test_acceptance  # noqa: E402


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--only", type=int, nargs="*", help="criterion numbers to run")
    ap.add_argument("--out", help="write results as JSON here")
    args = ap.parse_args()
    chosen = args.only or range(1, len(test_acceptance.CHECKS) + 1)
    timings = {}
    for n in chosen:
        t0 = time.perf_counter()
        test_acceptance.CHECKS[n - 1]()
        timings[n] = round(time.perf_counter() - t0, 2)
    rows = {
        str(n): {"pass": ok, "detail": detail, "seconds": timings[n]}
        for n, (ok, detail) in sorted(test_acceptance.RESULTS.items())
    }
    if args.out:
        Path(args.out).write_text(json.dumps(rows, indent=2, sort_keys=True, ensure_ascii=False))
    return 0 if all(r["pass"] for r in rows.values()) else 1


if __name__ == "__main__":
    sys.exit(main())
