"""Merger trees of point sets and the counting bounds built on them.

The merger tree of a finite X is the L-infinity minimum spanning tree built
greedily by increasing distance, ties broken by the lexicographic order of
edges (each edge stored with its smaller endpoint first).  Edge labels are
the merger times d_e = floor(dist / 2).
"""
from __future__ import annotations

import csv
import io
import itertools
import json
import math
from collections import Counter
from dataclasses import dataclass

from scipy.cluster.hierarchy import DisjointSet

from .lattice import Coord, ParameterError, linf_dist, strip_R

K_CONST = 32


@dataclass(frozen=True)
class MergerTree:
    vertices: tuple
    edges: tuple  # ((a, b, d_e), ...) in construction order
    root: Coord

    def to_json(self) -> str:
        return json.dumps({"root": list(self.root),
                           "vertices": [list(v) for v in self.vertices],
                           "edges": [[list(a), list(b), d] for a, b, d in self.edges]})


def build_merger_tree(X) -> MergerTree:
    """Distance-ordered greedy spanning tree with lexicographic tie-breaking."""
    pts = sorted({Coord(*x) for x in X})
    if not pts:
        raise ParameterError("X must be nonempty")
    cand = sorted((linf_dist(a, b), a, b) for a, b in itertools.combinations(pts, 2))
    ds = DisjointSet(pts)
    edges = []
    for dist, a, b in cand:
        if ds.merge(a, b):
            edges.append((a, b, dist // 2))
            if len(edges) == len(pts) - 1:
                break
    return MergerTree(tuple(pts), tuple(edges), pts[0])


def merger_times(tree: MergerTree) -> list[int]:
    """The multiset D(X) as a sorted list."""
    return sorted(d for _, _, d in tree.edges)


def tree_weight(tree: MergerTree) -> int:
    return sum(linf_dist(a, b) for a, b, _ in tree.edges)


# --------------------------------------------------------------------------- blobs

@dataclass(frozen=True)
class BlobNode:
    sites: frozenset
    d: int | None
    Delta: int
    children: tuple | None


@dataclass(frozen=True)
class CoalescenceTree:
    nodes: tuple  # leaves first (sorted), then internal nodes in merge order

    @property
    def root(self) -> BlobNode:
        return self.nodes[-1]

    def internal(self):
        return [u for u in self.nodes if u.children is not None]


def half_diam(U) -> int:
    U = list(U)
    return max((linf_dist(a, b) for a, b in itertools.combinations(U, 2)), default=0) // 2


def coalescence_tree(tree: MergerTree) -> CoalescenceTree:
    """Binary blob tree: merge along edges by increasing d_e, ties in construction order."""
    leaves = {v: BlobNode(frozenset([v]), None, 0, None) for v in tree.vertices}
    blob = dict(leaves)
    nodes = list(leaves.values())
    order = sorted(range(len(tree.edges)), key=lambda i: (tree.edges[i][2], i))
    for i in order:
        a, b, d = tree.edges[i]
        V, W = blob[a], blob[b]
        S = V.sites | W.sites
        U = BlobNode(S, d, half_diam(S), (V, W))
        for s in S:
            blob[s] = U
        nodes.append(U)
    return CoalescenceTree(tuple(nodes))


def delta_excess(ct: CoalescenceTree) -> int:
    """max over internal U of Delta_U - (Delta_V + Delta_W + d_U); at most 1 by rounding."""
    return max((u.Delta - (u.children[0].Delta + u.children[1].Delta + u.d)
                for u in ct.internal()), default=0)


# --------------------------------------------------------------------------- counting

def permut(D) -> int:
    """Number of distinct orderings of the multiset D."""
    out = math.factorial(len(D))
    for c in Counter(D).values():
        out //= math.factorial(c)
    return out


def prop_x_bound(n: int, D) -> int:
    """permut(D) * K^(k+1) * n^2 * prod max(d_i, 1) with K = 32."""
    D = list(D)
    prod = 1
    for d in D:
        prod *= max(int(d), 1)
    return permut(D) * K_CONST ** (len(D) + 1) * n * n * prod


def times_census(n: int, k: int) -> Counter:
    """Counter of D(X) (as tuples) over all X subset of R_n with |X| = k + 1."""
    if n < 1 or n > 3 or k < 0 or k > 2:
        raise ParameterError("exhaustive enumeration needs 1 <= n <= 3 and |D| <= 2")
    sites = list(strip_R(n).sites())
    out = Counter()
    for X in itertools.combinations(sites, k + 1):
        out[tuple(merger_times(build_merger_tree(X)))] += 1
    return out


def enumerate_sets_with_times(n: int, D) -> int:
    """Exact card{X subset of R_n : D(X) = D}."""
    D = tuple(sorted(int(d) for d in D))
    return times_census(n, len(D)).get(D, 0)


def census_csv(n_max: int = 3, k_max: int = 2) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "D", "exact_count", "bound"])
    for n in range(1, n_max + 1):
        for k in range(k_max + 1):
            for D, c in sorted(times_census(n, k).items()):
                w.writerow([n, " ".join(map(str, D)), c, prop_x_bound(n, D)])
    return buf.getvalue()


def catalan(k: int) -> int:
    if k < 0:
        raise ParameterError("k must be >= 0")
    return math.comb(2 * k, k) // (k + 1)


def _grow(t):
    """All canonical trees obtained from ``t`` by hanging one new leaf."""
    out = {_canon(t + ((),))}
    for i, c in enumerate(t):
        for g in _grow(c):
            out.add(_canon(t[:i] + (g,) + t[i + 1:]))
    return out


def _canon(t):
    return tuple(sorted(t))


def count_rooted_trees(k: int) -> int:
    """Unlabeled rooted trees on k vertices, by exhaustive canonical growth."""
    if k < 1:
        return 0
    if k > 10:
        raise ParameterError("enumeration limited to k <= 10")
    level = {()}
    for _ in range(k - 1):
        level = set().union(*(_grow(t) for t in level))
    return len(level)


# --------------------------------------------------------------------------- diagnostic

def eq_bad_bound_diagnostic(X, pi_table: dict, delta: float) -> float:
    """prod over x of delta * pi6(t(x)), t(x) = floor(nearest-neighbour distance / 2).

    A singleton uses the largest tabulated radius.
    """
    X = [Coord(*x) for x in X]
    if not X:
        raise ParameterError("X must be nonempty")
    if not pi_table:
        raise ParameterError("empty pi table")
    out = 1.0
    for x in X:
        if len(X) == 1:
            t = max(pi_table)
        else:
            t = min(linf_dist(x, y) for y in X if y != x) // 2
        if t not in pi_table:
            raise ParameterError(f"pi table has no entry at radius {t}")
        out *= delta * pi_table[t]
    return out
