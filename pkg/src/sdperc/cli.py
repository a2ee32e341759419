"""Command line entry point: ``sdperc <subcommand> [options]``.

Every subcommand accepts the global flags ``--seed``, ``--samples``,
``--threads``, ``--out`` and ``--config``.  A config file holds ``key =
value`` lines mirroring the long flags (dashes or underscores); flags given
on the command line win over the file.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .harness import ExperimentSpec, rows_to_csv, run_experiment
from .lattice import ball
from . import forest_fire as ff
from . import merger


def _floats(s: str) -> list[float]:
    return [float(x) for x in s.replace(",", " ").split()]


def _ints(s: str) -> list[int]:
    return [int(x) for x in s.replace(",", " ").split()]


def read_config(path) -> dict:
    out = {}
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"bad config line: {line!r}")
        k, v = (t.strip() for t in line.split("=", 1))
        out[k.replace("-", "_")] = v
    return out


def _globals(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", default=None, help="output stem; writes <out>.csv and <out>.json")
    p.add_argument("--config", default=None, help="key = value file mirroring the flags")


def build_parser() -> tuple[argparse.ArgumentParser, dict]:
    ap = argparse.ArgumentParser(prog="sdperc", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)
    subs = {}

    def add(name, help_):
        p = sub.add_parser(name, help=help_)
        _globals(p)
        subs[name] = p
        return p

    p = add("pc-bisect", "estimate p_c by bisection on square crossings")
    p.add_argument("--n", type=_ints, default=[64])
    p.add_argument("--tol", type=float, default=1e-4)

    p = add("crossing", "P_p(Ch(m, n))")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--direction", choices=("horizontal", "vertical"), default="horizontal")

    p = add("arms", "arm probabilities pi_sigma(n, N) on a grid of N")
    p.add_argument("--sigma", "--sequence", dest="sequence", default="Arm3hp",
                   help="canonical name (Arm1, Arm3hp, Arm4hp, Arm5, Arm6) or a 0/1 string")
    p.add_argument("--inner", type=int, required=True)
    p.add_argument("--outer", type=_ints, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--variant", default=None)
    p.add_argument("--defect", action="store_true")

    p = add("sdp-cross", "joint crossing event of the strip S_n")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--n", type=_ints, required=True)
    p.add_argument("--sigma-draws", type=int, default=1)

    p = add("annulus", "annulus connection in the circuit-killed configuration")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--n", type=_ints, required=True)

    p = add("theta", "finite-volume proxy of theta(p, delta)")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--delta", type=_floats, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--horizon", type=int, required=True)

    p = add("delta-scan", "empirical delta_c(p) table")
    p.add_argument("--p-grid", type=_floats, required=True)
    p.add_argument("--delta-grid", type=_floats, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--horizon", type=int, required=True)
    p.add_argument("--pc", type=float, required=True)

    p = add("merger", "merger tree of a point set, or the exhaustive census")
    p.add_argument("--points", default=None, help="'x,y; x,y; ...' (tree JSON)")
    p.add_argument("--n-max", type=int, default=3)
    p.add_argument("--k-max", type=int, default=2)

    p = add("forest-fire", "N-parameter forest fire trajectories")
    p.add_argument("--box", type=int, default=32, help="half-width L of the box [-L, L]^2")
    p.add_argument("--threshold", type=int, required=True)
    p.add_argument("--tmax", type=float, required=True)
    p.add_argument("--runs", type=int, default=10)
    p.add_argument("--size-metric", choices=(ff.SITES, ff.DIAMETER), default=ff.SITES)
    p.add_argument("--m", type=_ints, default=[4])
    return ap, subs


def parse(argv=None) -> argparse.Namespace:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap, subs = build_parser()
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("cmd", nargs="?")
    pre.add_argument("--config", default=None)
    first, _ = pre.parse_known_args(argv)
    if first.config and first.cmd in subs:
        sp = subs[first.cmd]
        known = {a.dest: a for a in sp._actions}
        conv = {}
        for k, v in read_config(first.config).items():
            if k not in known:
                raise SystemExit(f"unknown config key {k!r} for {first.cmd}")
            a = known[k]
            if isinstance(a, argparse._StoreTrueAction):
                v = v.lower() in ("1", "true", "yes")
            elif a.type is not None:
                v = a.type(v)
            conv[k] = v
            a.required = False
        sp.set_defaults(**conv)
    return ap.parse_args(argv)


def _emit(text: str, meta: dict | None, out) -> None:
    if out:
        out = Path(out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.with_suffix(".csv").write_text(text)
        if meta is not None:
            out.with_suffix(".json").write_text(json.dumps(meta, indent=1, default=str))
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    a = parse(argv)
    experiments = {
        "pc-bisect": lambda: ExperimentSpec("pc_bisect", {"ns": a.n, "tol": a.tol}),
        "crossing": lambda: ExperimentSpec("crossing", {"p": a.p, "m": a.m, "n": a.n,
                                                        "direction": a.direction}),
        "arms": lambda: ExperimentSpec("arm_scaling", {"sequence": a.sequence, "n": a.inner,
                                                       "Ns": a.outer, "p": a.p,
                                                       "variant": a.variant,
                                                       "defect": a.defect}),
        "sdp-cross": lambda: ExperimentSpec("theorem_cross", {"p": a.p, "delta": a.delta,
                                                              "ns": a.n,
                                                              "sigma_draws": a.sigma_draws}),
        "annulus": lambda: ExperimentSpec("annulus_recovery", {"p": a.p, "delta": a.delta,
                                                               "ns": a.n}),
        "theta": lambda: ExperimentSpec("theta", {"p": a.p, "delta": a.delta, "m": a.m,
                                                  "horizon": a.horizon}),
        "delta-scan": lambda: ExperimentSpec("delta_c_scan", {"p_grid": a.p_grid,
                                                              "delta_grid": a.delta_grid,
                                                              "m": a.m, "horizon": a.horizon,
                                                              "pc": a.pc}),
    }
    if a.cmd in experiments:
        text, meta = run_experiment(experiments[a.cmd](), a.seed, a.samples, a.threads)
        _emit(text, meta, a.out)
        return 0
    if a.cmd == "merger":
        if a.points:
            pts = [tuple(int(t) for t in q.split(",")) for q in a.points.split(";") if q.strip()]
            tree = merger.build_merger_tree(pts)
            sys.stdout.write(tree.to_json() + "\n")
            if a.out:
                Path(a.out).with_suffix(".json").write_text(tree.to_json())
            return 0
        _emit(merger.census_csv(a.n_max, a.k_max), {"n_max": a.n_max, "k_max": a.k_max},
              a.out)
        return 0
    if a.cmd == "forest-fire":
        return _forest_fire(a)
    raise SystemExit(f"unknown command {a.cmd}")


def _forest_fire(a) -> int:
    box = ball((0, 0), a.box)
    rows = []
    first_log = None
    for r in range(a.runs):
        log = ff.simulate(box, a.threshold, a.tmax, a.seed, index=r, size_metric=a.size_metric)
        if first_log is None:
            first_log = log
        row = {"run": r, "fires": len(log.events),
               "first_fire": f"{ff.first_fire_time(log):.10g}",
               "max_cluster": log.max_cluster,
               "open_fraction": f"{float(np.mean(log.final.bits)):.10g}"}
        for m in a.m:
            row[f"fires_B{m}"] = ff.fires_in_ball(log, m, a.tmax)
        rows.append(row)
    meta = {"box": a.box, "threshold": a.threshold, "tmax": a.tmax, "runs": a.runs,
            "size_metric": a.size_metric, "seed": a.seed}
    _emit(rows_to_csv(rows), meta, a.out)
    if a.out and first_log is not None:
        Path(a.out).with_suffix(".events.jsonl").write_text(first_log.to_jsonl(a.m))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
