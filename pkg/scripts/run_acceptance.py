"""Compute (or refresh) the cached acceptance results under results/acceptance.

    python scripts/run_acceptance.py            # every criterion not cached yet
    python scripts/run_acceptance.py 4 5 --force
"""
import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

import acceptance as A  # noqa: E402


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("criteria", nargs="*", help="criterion numbers (default: all)")
    ap.add_argument("--force", action="store_true", help="ignore cached results")
    a = ap.parse_args(argv)
    todo = [int(c) for c in a.criteria] or A.CRITERIA
    print(A.run("pc")["line"], flush=True)
    for k in todo:
        t0 = time.perf_counter()
        rec = A.run(k, use_cache=not a.force)
        tag = "PASS" if rec["passed"] else "FAIL"
        print(f"[{tag}] criterion {k}: {rec['line']} ({time.perf_counter() - t0:.0f} s)",
              flush=True)


if __name__ == "__main__":
    main()
