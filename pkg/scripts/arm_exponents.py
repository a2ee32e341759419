"""Arm probabilities pi_sigma(n, N) at p_c and their fitted decay exponents.

    python scripts/arm_exponents.py --samples 20000 --out results/arms
"""
import argparse
from pathlib import Path

from sdperc.harness import ExperimentSpec, arm_exponent, arm_scaling, run_experiment
from sdperc.lattice import RandomSource

# (sequence, inner radius); exponents from the exact values 2 (three and five arms)
RUNS = [("Arm1", 1), ("Arm3hp", 3), ("Arm4hp", 4), ("Arm5", 6), ("Arm6", 6)]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=float, default=0.5927)
    ap.add_argument("--ratios", default="4,8,16,32")
    ap.add_argument("--samples", type=int, default=20000)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--out", default="results/arms")
    a = ap.parse_args(argv)
    ratios = [int(r) for r in a.ratios.split(",")]
    out = Path(a.out)
    for k, (name, n) in enumerate(RUNS):
        Ns = [n * r for r in ratios]
        spec = ExperimentSpec("arm_scaling", {"sequence": name, "n": n, "Ns": Ns, "p": a.p})
        run_experiment(spec, a.seed + k, a.samples, a.threads, out / name)
        ests = arm_scaling(name, n, Ns, a.p, a.samples, RandomSource(a.seed + k), a.threads)
        try:
            exp, se = arm_exponent(ests, n)
            print(f"{name}: exponent {exp:.3f} +- {se:.3f}")
        except ValueError:
            print(f"{name}: too few positive estimates to fit")


if __name__ == "__main__":
    main()
