"""Joint event {omega crosses S_n horizontally, omega_tilde^delta crosses R_n vertically}.

Prints one line per (delta, n) and the log-log slope per delta.

    python scripts/theorem_decay.py --deltas 0.2,0.35,0.5 --ns 8,16,32,64
"""
import argparse

from sdperc.harness import estimate_theorem_cross
from sdperc.lattice import RandomSource
from sdperc.stats import fit_power_law


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=float, default=0.5927)
    ap.add_argument("--deltas", default="0.2,0.35,0.5")
    ap.add_argument("--ns", default="8,16,32,64")
    ap.add_argument("--samples", type=int, default=20000)
    ap.add_argument("--sigma-draws", type=int, default=20)
    ap.add_argument("--seed", type=int, default=2)
    a = ap.parse_args(argv)
    ns = [int(x) for x in a.ns.split(",")]
    print("delta,n,value,ci_lo,ci_hi")
    for i, d in enumerate(float(x) for x in a.deltas.split(",")):
        src = RandomSource(a.seed, i)
        ests = [estimate_theorem_cross(a.p, d, n, a.samples, src.substream(j),
                                       sigma_draws=a.sigma_draws) for j, n in enumerate(ns)]
        for n, e in zip(ns, ests):
            print(f"{d},{n},{e.value:.6g},{e.ci_lo:.6g},{e.ci_hi:.6g}")
        try:
            ex, se = fit_power_law([(n, e.value, (e.ci_lo, e.ci_hi)) for n, e in zip(ns, ests)])
            print(f"# delta={d}: slope {-ex:.3f} +- {se:.3f}")
        except ValueError:
            print(f"# delta={d}: too few positive estimates")


if __name__ == "__main__":
    main()
