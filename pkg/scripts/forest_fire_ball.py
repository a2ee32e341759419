"""Fires meeting B_m up to times around t_c, for growing thresholds N.

    python scripts/forest_fire_ball.py --box 64 --thresholds 100,400,1600 --m 4
"""
import argparse
import math

import numpy as np

from sdperc.forest_fire import critical_time, fires_in_ball, simulate
from sdperc.lattice import RandomSource, ball


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--box", type=int, default=48)
    ap.add_argument("--thresholds", default="50,200,800")
    ap.add_argument("--m", type=int, default=4)
    ap.add_argument("--runs", type=int, default=50)
    ap.add_argument("--pc", type=float, default=0.5927)
    ap.add_argument("--seed", type=int, default=3)
    a = ap.parse_args(argv)
    tc = critical_time(a.pc)
    box = ball((0, 0), a.box)
    times = [0.5 * tc, tc, 1.5 * tc, 2 * tc]
    print("N,t,mean_fires,stderr")
    for k, N in enumerate(int(x) for x in a.thresholds.split(",")):
        src = RandomSource(a.seed, k)
        logs = [simulate(box, N, times[-1], src, i) for i in range(a.runs)]
        for t in times:
            f = np.array([fires_in_ball(lg, a.m, t) for lg in logs], dtype=float)
            print(f"{N},{t:.4f},{f.mean():.4f},{f.std(ddof=1) / math.sqrt(len(f)):.4f}")


if __name__ == "__main__":
    main()
