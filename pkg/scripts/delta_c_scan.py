"""Empirical delta_c(p) next to (p_c - p)/(1 - p) and (p - p_c)/p.

    python scripts/delta_c_scan.py --m 16 --horizon 48 --samples 400
"""
import argparse
import sys

from sdperc.harness import ExperimentSpec, run_experiment


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pc", type=float, default=0.5927)
    ap.add_argument("--p-grid", default="0.3,0.45,0.55,0.65,0.75,0.9")
    ap.add_argument("--delta-grid", default="0.02,0.05,0.1,0.2,0.3,0.4,0.5")
    ap.add_argument("--m", type=int, default=12)
    ap.add_argument("--horizon", type=int, default=36)
    ap.add_argument("--samples", type=int, default=300)
    ap.add_argument("--seed", type=int, default=4)
    ap.add_argument("--out", default=None)
    a = ap.parse_args(argv)
    spec = ExperimentSpec("delta_c_scan", {
        "p_grid": [float(x) for x in a.p_grid.split(",")],
        "delta_grid": [float(x) for x in a.delta_grid.split(",")],
        "m": a.m, "horizon": a.horizon, "pc": a.pc})
    text, _ = run_experiment(spec, a.seed, a.samples, 1, a.out)
    sys.stdout.write(text)


if __name__ == "__main__":
    main()
