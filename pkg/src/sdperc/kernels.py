"""Compiled lattice kernels.

All kernels work on dense 2D arrays indexed ``[row, col]`` with row = y offset
and col = x offset, and flatten sites as ``row * width + col``.  ``diag``
selects matching (8-neighbour) adjacency instead of primal (4-neighbour).
"""
import numpy as np
from numba import njit

# primal steps first, so slicing [:4] gives the 4-neighbourhood
DX = np.array([1, 0, -1, 0, 1, -1, -1, 1], dtype=np.int64)
DY = np.array([0, 1, 0, -1, 1, 1, -1, -1], dtype=np.int64)


@njit(cache=True, nogil=True)
def _find(parent, i):
    while parent[i] != i:
        parent[i] = parent[parent[i]]
        i = parent[i]
    return i


@njit(cache=True, nogil=True)
def _union(parent, size, a, b):
    ra = _find(parent, a)
    rb = _find(parent, b)
    if ra == rb:
        return ra
    if size[ra] < size[rb]:
        ra, rb = rb, ra
    parent[rb] = ra
    size[ra] += size[rb]
    return ra


@njit(cache=True, nogil=True)
def label_components(mask, diag):
    """Union-find labeling of the nonzero cells of ``mask``.

    Labels are consecutive from 0 in raster order of first appearance;
    cells outside the mask get -1.  Returns ``(labels, sizes)``.
    """
    h, w = mask.shape
    n = h * w
    parent = np.arange(n, dtype=np.int64)
    size = np.ones(n, dtype=np.int64)
    for y in range(h):
        for x in range(w):
            if mask[y, x] == 0:
                continue
            i = y * w + x
            if x > 0 and mask[y, x - 1] != 0:
                _union(parent, size, i, i - 1)
            if y > 0:
                if mask[y - 1, x] != 0:
                    _union(parent, size, i, i - w)
                if diag:
                    if x > 0 and mask[y - 1, x - 1] != 0:
                        _union(parent, size, i, i - w - 1)
                    if x + 1 < w and mask[y - 1, x + 1] != 0:
                        _union(parent, size, i, i - w + 1)
    labels = np.full((h, w), -1, dtype=np.int64)
    remap = np.full(n, -1, dtype=np.int64)
    count = 0
    for y in range(h):
        for x in range(w):
            if mask[y, x] == 0:
                continue
            r = _find(parent, y * w + x)
            if remap[r] < 0:
                remap[r] = count
                count += 1
            labels[y, x] = remap[r]
    sizes = np.zeros(count, dtype=np.int64)
    for y in range(h):
        for x in range(w):
            if labels[y, x] >= 0:
                sizes[labels[y, x]] += 1
    return labels, sizes


@njit(cache=True, nogil=True)
def reach(mask, seeds, diag):
    """Cells of ``mask`` connected inside ``mask`` to a seed cell (seeds must lie in mask)."""
    h, w = mask.shape
    nd = 8 if diag else 4
    seen = np.zeros((h, w), dtype=np.uint8)
    queue = np.empty(h * w, dtype=np.int64)
    head = 0
    tail = 0
    for y in range(h):
        for x in range(w):
            if seeds[y, x] != 0 and mask[y, x] != 0:
                seen[y, x] = 1
                queue[tail] = y * w + x
                tail += 1
    while head < tail:
        i = queue[head]
        head += 1
        y = i // w
        x = i - y * w
        for k in range(nd):
            xx = x + DX[k]
            yy = y + DY[k]
            if 0 <= xx < w and 0 <= yy < h and seen[yy, xx] == 0 and mask[yy, xx] != 0:
                seen[yy, xx] = 1
                queue[tail] = yy * w + xx
                tail += 1
    return seen


@njit(cache=True, nogil=True)
def crosses_lr(mask, diag):
    """True iff ``mask`` has a path from its first to its last column."""
    h, w = mask.shape
    seeds = np.zeros((h, w), dtype=np.uint8)
    for y in range(h):
        seeds[y, 0] = 1
    seen = reach(mask, seeds, diag)
    for y in range(h):
        if seen[y, w - 1] != 0:
            return True
    return False


# ----------------------------------------------------------------------------
# vertex-disjoint max-flow on a grid region (node splitting, unit capacities)
# state 2*v = v_in, 2*v+1 = v_out

@njit(cache=True, nogil=True)
def _dir_index(dx, dy):
    for k in range(8):
        if DX[k] == dx and DY[k] == dy:
            return k
    return -1


@njit(cache=True, nogil=True)
def _augment(region, rid, srcs, snk, diag, w, h, through, flow, srcused, snkused,
             stamp, stampval, par, queue):
    """One BFS augmentation; returns True if the flow grew."""
    nd = 8 if diag else 4
    head = 0
    tail = 0
    for s in srcs:
        if srcused[s] == 0 and stamp[2 * s] != stampval:
            stamp[2 * s] = stampval
            par[2 * s] = -1
            queue[tail] = 2 * s
            tail += 1
    end = -1
    while head < tail and end < 0:
        st = queue[head]
        head += 1
        v = st >> 1
        y = v // w
        x = v - y * w
        if st & 1 == 0:
            # v_in
            if through[v] == 0:
                nxt = st + 1
                if stamp[nxt] != stampval:
                    stamp[nxt] = stampval
                    par[nxt] = st
                    queue[tail] = nxt
                    tail += 1
            else:
                for k in range(nd):
                    xx = x - DX[k]
                    yy = y - DY[k]
                    if 0 <= xx < w and 0 <= yy < h:
                        u = yy * w + xx
                        if region[yy, xx] == rid and flow[u, k] != 0:
                            nxt = 2 * u + 1
                            if stamp[nxt] != stampval:
                                stamp[nxt] = stampval
                                par[nxt] = st
                                queue[tail] = nxt
                                tail += 1
        else:
            # v_out
            if snk[y, x] != 0 and snkused[v] == 0:
                end = st
                break
            for k in range(nd):
                xx = x + DX[k]
                yy = y + DY[k]
                if 0 <= xx < w and 0 <= yy < h and region[yy, xx] == rid and flow[v, k] == 0:
                    nxt = 2 * (yy * w + xx)
                    if stamp[nxt] != stampval:
                        stamp[nxt] = stampval
                        par[nxt] = st
                        queue[tail] = nxt
                        tail += 1
            if through[v] != 0:
                nxt = st - 1
                if stamp[nxt] != stampval:
                    stamp[nxt] = stampval
                    par[nxt] = st
                    queue[tail] = nxt
                    tail += 1
    if end < 0:
        return False
    snkused[end >> 1] = 1
    cur = end
    while par[cur] >= 0:
        prev = par[cur]
        a = prev >> 1
        b = cur >> 1
        if a == b:
            through[a] = 1 if (prev & 1) == 0 else 0
        elif (prev & 1) == 1:
            # forward arc a_out -> b_in
            ya = a // w
            yb = b // w
            flow[a, _dir_index((b - yb * w) - (a - ya * w), yb - ya)] = 1
        else:
            # backward arc: cancel b -> a (prev is a_in, cur is b_out)
            ya = a // w
            yb = b // w
            flow[b, _dir_index((a - ya * w) - (b - yb * w), ya - yb)] = 0
        cur = prev
    srcused[cur >> 1] = 1
    return True


@njit(cache=True, nogil=True)
def vd_maxflow(allowed, src, snk, diag, cap):
    """Maximum number of vertex-disjoint paths from ``src`` cells to ``snk`` cells
    through ``allowed`` cells, stopping early once ``cap`` is reached."""
    h, w = allowed.shape
    region = np.zeros((h, w), dtype=np.int64)
    count = 0
    for y in range(h):
        for x in range(w):
            if allowed[y, x] != 0:
                region[y, x] = 1
                if src[y, x] != 0:
                    count += 1
    srcs = np.empty(count, dtype=np.int64)
    j = 0
    for y in range(h):
        for x in range(w):
            if allowed[y, x] != 0 and src[y, x] != 0:
                srcs[j] = y * w + x
                j += 1
    n = h * w
    through = np.zeros(n, dtype=np.uint8)
    flow = np.zeros((n, 8), dtype=np.uint8)
    srcused = np.zeros(n, dtype=np.uint8)
    snkused = np.zeros(n, dtype=np.uint8)
    stamp = np.zeros(2 * n, dtype=np.int64)
    par = np.empty(2 * n, dtype=np.int64)
    queue = np.empty(2 * n, dtype=np.int64)
    total = 0
    while total < cap:
        if not _augment(region, 1, srcs, snk, diag, w, h, through, flow, srcused,
                        snkused, stamp, total + 1, par, queue):
            break
        total += 1
    return total


@njit(cache=True, nogil=True)
def vd_paths(allowed, src, snk, diag, cap):
    """Like :func:`vd_maxflow` but also returns the paths as a list of flat-index arrays."""
    h, w = allowed.shape
    region = np.zeros((h, w), dtype=np.int64)
    srclist = []
    for y in range(h):
        for x in range(w):
            if allowed[y, x] != 0:
                region[y, x] = 1
                if src[y, x] != 0:
                    srclist.append(y * w + x)
    srcs = np.empty(len(srclist), dtype=np.int64)
    for j in range(len(srclist)):
        srcs[j] = srclist[j]
    n = h * w
    through = np.zeros(n, dtype=np.uint8)
    flow = np.zeros((n, 8), dtype=np.uint8)
    srcused = np.zeros(n, dtype=np.uint8)
    snkused = np.zeros(n, dtype=np.uint8)
    stamp = np.zeros(2 * n, dtype=np.int64)
    par = np.empty(2 * n, dtype=np.int64)
    queue = np.empty(2 * n, dtype=np.int64)
    total = 0
    while total < cap:
        if not _augment(region, 1, srcs, snk, diag, w, h, through, flow, srcused,
                        snkused, stamp, total + 1, par, queue):
            break
        total += 1
    nd = 8 if diag else 4
    paths = []
    for s in srcs:
        if srcused[s] == 0:
            continue
        path = [s]
        v = s
        while True:
            nxt = -1
            y = v // w
            x = v - y * w
            for k in range(nd):
                if flow[v, k] != 0:
                    nxt = (y + DY[k]) * w + (x + DX[k])
                    break
            if nxt < 0:
                break
            path.append(nxt)
            v = nxt
        arr = np.empty(len(path), dtype=np.int64)
        for j in range(len(path)):
            arr[j] = path[j]
        paths.append(arr)
    return total, paths


# ----------------------------------------------------------------------------
# annulus structure for arm events

@njit(cache=True, nogil=True)
def ring_offsets(r):
    """Offsets of the ring at L-infinity distance r, counter-clockwise from (r, 0)."""
    if r == 0:
        out = np.zeros((1, 2), dtype=np.int64)
        return out
    out = np.empty((8 * r, 2), dtype=np.int64)
    j = 0
    for y in range(0, r + 1):
        out[j, 0] = r
        out[j, 1] = y
        j += 1
    for x in range(r - 1, -r - 1, -1):
        out[j, 0] = x
        out[j, 1] = r
        j += 1
    for y in range(r - 1, -r - 1, -1):
        out[j, 0] = -r
        out[j, 1] = y
        j += 1
    for x in range(-r + 1, r + 1):
        out[j, 0] = x
        out[j, 1] = -r
        j += 1
    for y in range(-r + 1, 0):
        out[j, 0] = r
        out[j, 1] = y
        j += 1
    return out


@njit(cache=True, nogil=True)
def annulus_region(N, n, half):
    """Mask over the (2N+1)^2 window of the (half-)annulus B_N minus B_n."""
    size = 2 * N + 1
    m = np.zeros((size, size), dtype=np.uint8)
    for row in range(size):
        dy = row - N
        if half and dy < 0:
            continue
        for col in range(size):
            dx = col - N
            d = max(abs(dx), abs(dy))
            if n < d <= N:
                m[row, col] = 1
    return m


@njit(cache=True, nogil=True)
def start_sites(N, n, half):
    """Flat indices (in the (2N+1)^2 window) of the arm start sites, in
    counter-clockwise order: the ring at distance n+1 minus its corners,
    restricted to dy >= 0 for the half-plane."""
    r = n + 1
    offs = ring_offsets(r)
    size = 2 * N + 1
    out = []
    for j in range(offs.shape[0]):
        dx = offs[j, 0]
        dy = offs[j, 1]
        if abs(dx) == r and abs(dy) == r:
            continue
        if half:
            if dy < 0:
                continue
            # the upper half ends at (-r, 0); entries after that are below
            if j > 4 * r:
                continue
        out.append((dy + N) * size + (dx + N))
    res = np.empty(len(out), dtype=np.int64)
    for j in range(len(out)):
        res[j] = out[j]
    return res


@njit(cache=True, nogil=True)
def annulus_structure(a, n, half, cap_open, cap_closed):
    """Crossing clusters of an arm annulus, read off from the start sites.

    ``a`` is the (2N+1)^2 window around the centre with values 1 (open),
    0 (closed) and 2 (wildcard, treated as belonging to neither colour).
    Open clusters use primal adjacency and closed clusters matching
    adjacency, both restricted to the (half-)annulus.  Only clusters
    containing a start site are explored.

    Returns ``(starts, start_cluster, cl_colour, cl_cap)`` where
    ``start_cluster[j]`` is the crossing-cluster id of start ``j`` or -1.
    """
    size = a.shape[0]
    N = (size - 1) // 2
    region = annulus_region(N, n, half)
    starts = start_sites(N, n, half)
    ns = starts.shape[0]
    lab = np.full((size, size), -1, dtype=np.int64)
    queue = np.empty(size * size, dtype=np.int64)
    colours = []
    touches = []
    for j in range(ns):
        s = starts[j]
        sy = s // size
        sx = s - sy * size
        if lab[sy, sx] >= 0 or a[sy, sx] > 1:
            continue
        c = a[sy, sx]
        cid = len(colours)
        nd = 4 if c == 1 else 8
        lab[sy, sx] = cid
        head = 0
        tail = 1
        queue[0] = s
        hit = False
        while head < tail:
            v = queue[head]
            head += 1
            y = v // size
            x = v - y * size
            if max(abs(x - N), abs(y - N)) == N:
                hit = True
            for k in range(nd):
                xx = x + DX[k]
                yy = y + DY[k]
                if 0 <= xx < size and 0 <= yy < size and region[yy, xx] != 0 \
                        and lab[yy, xx] < 0 and a[yy, xx] == c:
                    lab[yy, xx] = cid
                    queue[tail] = yy * size + xx
                    tail += 1
        colours.append(c)
        touches.append(hit)
    ncl = len(colours)
    start_cluster = np.full(ns, -1, dtype=np.int64)
    for j in range(ns):
        s = starts[j]
        sy = s // size
        sx = s - sy * size
        cid = lab[sy, sx]
        if cid >= 0 and touches[cid]:
            start_cluster[j] = cid
    cl_colour = np.empty(ncl, dtype=np.int64)
    cl_cap = np.zeros(ncl, dtype=np.int64)
    for cid in range(ncl):
        cl_colour[cid] = colours[cid]
    # capacities: vertex-disjoint crossings inside each crossing cluster
    snk = np.zeros((size, size), dtype=np.uint8)
    for y in range(size):
        for x in range(size):
            if region[y, x] != 0 and max(abs(x - N), abs(y - N)) == N:
                snk[y, x] = 1
    n2 = size * size
    through = np.zeros(n2, dtype=np.uint8)
    flow = np.zeros((n2, 8), dtype=np.uint8)
    srcused = np.zeros(n2, dtype=np.uint8)
    snkused = np.zeros(n2, dtype=np.uint8)
    stamp = np.zeros(2 * n2, dtype=np.int64)
    par = np.empty(2 * n2, dtype=np.int64)
    bq = np.empty(2 * n2, dtype=np.int64)
    stampval = 0
    for cid in range(ncl):
        if not touches[cid]:
            continue
        cnt = 0
        for j in range(ns):
            if start_cluster[j] == cid:
                cnt += 1
        srcs = np.empty(cnt, dtype=np.int64)
        cnt = 0
        for j in range(ns):
            if start_cluster[j] == cid:
                srcs[cnt] = starts[j]
                cnt += 1
        cap = cap_open if colours[cid] == 1 else cap_closed
        diag = colours[cid] == 0
        total = 0
        while total < cap:
            stampval += 1
            if not _augment(lab, cid, srcs, snk, diag, size, size, through, flow,
                            srcused, snkused, stamp, stampval, par, bq):
                break
            total += 1
        cl_cap[cid] = total
    return starts, start_cluster, cl_colour, cl_cap


# ----------------------------------------------------------------------------
# thresholds, passage crossings, circuits

@njit(cache=True, nogil=True)
def crossing_threshold_lr(u):
    """Smallest p such that ``{u < p}`` crosses from the first to the last column
    (primal adjacency): the minimax value over left-right paths, obtained by
    adding sites in increasing order of u into a union-find with two virtual
    side nodes."""
    h, w = u.shape
    n = h * w
    parent = np.arange(n + 2, dtype=np.int64)
    size = np.ones(n + 2, dtype=np.int64)
    added = np.zeros(n, dtype=np.uint8)
    order = np.argsort(u.ravel())
    L = n
    R = n + 1
    flat = u.ravel()
    for t in range(n):
        i = order[t]
        added[i] = 1
        y = i // w
        x = i - y * w
        if x == 0:
            _union(parent, size, i, L)
        if x == w - 1:
            _union(parent, size, i, R)
        for k in range(4):
            xx = x + DX[k]
            yy = y + DY[k]
            if 0 <= xx < w and 0 <= yy < h:
                j = yy * w + xx
                if added[j] != 0:
                    _union(parent, size, i, j)
        if _find(parent, L) == _find(parent, R):
            return flat[i]
    return np.inf


@njit(cache=True, nogil=True)
def zero_one_crossing(open_, cost):
    """Minimal-cost top-to-bottom crossing through open cells.

    Row 0 is the bottom (y = y_min) and row h-1 the top.  Each visited cell
    contributes ``cost`` (0 or 1).  The search starts from the top row scanned
    left to right and relaxes neighbours in the order left, down, up, right
    with strict improvement.  Among bottom cells of minimal cost the left-most
    is chosen.  Returns ``(best_cost, path)`` with ``best_cost = -1`` and an
    empty path if there is no crossing; the path runs top to bottom.
    """
    h, w = open_.shape
    n = h * w
    INF = 1 << 60
    dist = np.full(n, INF, dtype=np.int64)
    done = np.zeros(n, dtype=np.uint8)
    par = np.full(n, -1, dtype=np.int64)
    dq = np.empty(4 * n + 4 * w + 8, dtype=np.int64)
    cap = dq.shape[0]
    # deque as a ring buffer
    head = 0
    tail = 0
    cnt = 0
    top = h - 1
    # zero-cost seeds first in scan order, then unit-cost ones at the back
    for x in range(w):
        if open_[top, x] != 0:
            i = top * w + x
            c = cost[top, x]
            dist[i] = c
            if c == 0:
                dq[tail] = i
                tail = (tail + 1) % cap
                cnt += 1
    for x in range(w):
        if open_[top, x] != 0 and cost[top, x] != 0:
            dq[tail] = top * w + x
            tail = (tail + 1) % cap
            cnt += 1
    order_dx = np.array([-1, 0, 0, 1], dtype=np.int64)
    order_dy = np.array([0, -1, 1, 0], dtype=np.int64)
    while cnt > 0:
        i = dq[head]
        head = (head + 1) % cap
        cnt -= 1
        if done[i] != 0:
            continue
        done[i] = 1
        y = i // w
        x = i - y * w
        for k in range(4):
            xx = x + order_dx[k]
            yy = y + order_dy[k]
            if 0 <= xx < w and 0 <= yy < h and open_[yy, xx] != 0:
                j = yy * w + xx
                c = cost[yy, xx]
                nd = dist[i] + c
                if nd < dist[j] and done[j] == 0:
                    dist[j] = nd
                    par[j] = i
                    if c == 0:
                        head = (head - 1) % cap
                        dq[head] = j
                    else:
                        dq[tail] = j
                        tail = (tail + 1) % cap
                    cnt += 1
    best = INF
    end = -1
    for x in range(w):
        if dist[x] < best:
            best = dist[x]
            end = x
    if end < 0:
        return -1, np.empty(0, dtype=np.int64)
    path = []
    v = end
    while v >= 0:
        path.append(v)
        v = par[v]
    out = np.empty(len(path), dtype=np.int64)
    for j in range(len(path)):
        out[j] = path[j]
    return best, out


@njit(cache=True, nogil=True)
def winding_clusters(mask, cx, cy, diag):
    """Label the components of ``mask`` and flag those containing a cycle that
    winds around the site ``(cx, cy)`` (array coordinates, outside the mask).

    Each component is explored by BFS on the universal cover cut along the
    ray from the centre to the right: crossing the edges between rows
    ``cy - 1`` and ``cy`` at columns ``> cx`` shifts the sheet by one.  A site
    reached on two different sheets certifies a non-contractible cycle.
    Returns ``(labels, winds)``.
    """
    h, w = mask.shape
    nd = 8 if diag else 4
    lab = np.full((h, w), -1, dtype=np.int64)
    sheet = np.zeros((h, w), dtype=np.int64)
    queue = np.empty(h * w, dtype=np.int64)
    winds = []
    for sy in range(h):
        for sx in range(w):
            if mask[sy, sx] == 0 or lab[sy, sx] >= 0:
                continue
            cid = len(winds)
            flag = False
            lab[sy, sx] = cid
            sheet[sy, sx] = 0
            head = 0
            tail = 1
            queue[0] = sy * w + sx
            while head < tail:
                v = queue[head]
                head += 1
                y = v // w
                x = v - y * w
                for k in range(nd):
                    xx = x + DX[k]
                    yy = y + DY[k]
                    if not (0 <= xx < w and 0 <= yy < h) or mask[yy, xx] == 0:
                        continue
                    s = sheet[y, x]
                    # a step crosses the cut when it moves between rows cy-1 and
                    # cy while staying (at both ends) strictly right of cx
                    if x > cx and xx > cx:
                        if y == cy - 1 and yy == cy:
                            s += 1
                        elif y == cy and yy == cy - 1:
                            s -= 1
                    if lab[yy, xx] < 0:
                        lab[yy, xx] = cid
                        sheet[yy, xx] = s
                        queue[tail] = yy * w + xx
                        tail += 1
                    elif sheet[yy, xx] != s:
                        flag = True
            winds.append(flag)
    out = np.zeros(len(winds), dtype=np.uint8)
    for j in range(len(winds)):
        out[j] = 1 if winds[j] else 0
    return lab, out


# ----------------------------------------------------------------------------
# N-parameter forest fire

@njit(cache=True, nogil=True)
def forest_fire(h, w, threshold, t_max, seed, diameter_metric, max_events):
    """Event-driven N-parameter forest fire on an h x w box (free boundary).

    Every closed site opens after an independent Exp(1) time (the clock is
    redrawn after each burn).  When an opening produces a primal open cluster
    whose size (sites, or L-infinity diameter when ``diameter_metric``)
    reaches ``threshold`` the whole cluster closes at once.

    Returns ``(times, sizes, bbox, site_ptr, sites, final_state, max_size,
    n_events)``; ``sites[site_ptr[e]:site_ptr[e+1]]`` lists the flat indices
    burned by event ``e``.  ``max_size`` is the largest cluster size seen just
    after a merge.
    """
    np.random.seed(seed)
    n = h * w
    state = np.zeros(n, dtype=np.uint8)
    parent = np.arange(n, dtype=np.int64)
    size = np.ones(n, dtype=np.int64)
    xmin = np.empty(n, dtype=np.int64)
    xmax = np.empty(n, dtype=np.int64)
    ymin = np.empty(n, dtype=np.int64)
    ymax = np.empty(n, dtype=np.int64)
    for i in range(n):
        y = i // w
        x = i - y * w
        xmin[i] = x
        xmax[i] = x
        ymin[i] = y
        ymax[i] = y
    # binary heap of (time, site)
    heap_t = np.empty(n, dtype=np.float64)
    heap_s = np.empty(n, dtype=np.int64)
    hn = 0
    for i in range(n):
        t = np.random.exponential(1.0)
        # push
        j = hn
        hn += 1
        while j > 0:
            p = (j - 1) >> 1
            if heap_t[p] <= t:
                break
            heap_t[j] = heap_t[p]
            heap_s[j] = heap_s[p]
            j = p
        heap_t[j] = t
        heap_s[j] = i
    times = []
    sizes = []
    bx0 = []
    bx1 = []
    by0 = []
    by1 = []
    ptr = [0]
    burned = []
    queue = np.empty(n, dtype=np.int64)
    mark = np.zeros(n, dtype=np.uint8)
    max_size = 0
    while hn > 0:
        t = heap_t[0]
        if t > t_max:
            break
        v = heap_s[0]
        # pop
        hn -= 1
        lt = heap_t[hn]
        ls = heap_s[hn]
        j = 0
        while True:
            c = 2 * j + 1
            if c >= hn:
                break
            if c + 1 < hn and heap_t[c + 1] < heap_t[c]:
                c += 1
            if heap_t[c] >= lt:
                break
            heap_t[j] = heap_t[c]
            heap_s[j] = heap_s[c]
            j = c
        if hn > 0:
            heap_t[j] = lt
            heap_s[j] = ls
        state[v] = 1
        y = v // w
        x = v - y * w
        for k in range(4):
            xx = x + DX[k]
            yy = y + DY[k]
            if 0 <= xx < w and 0 <= yy < h:
                u = yy * w + xx
                if state[u] != 0:
                    ra = _find(parent, v)
                    rb = _find(parent, u)
                    if ra != rb:
                        r = _union(parent, size, ra, rb)
                        o = rb if r == ra else ra
                        xmin[r] = min(xmin[r], xmin[o])
                        xmax[r] = max(xmax[r], xmax[o])
                        ymin[r] = min(ymin[r], ymin[o])
                        ymax[r] = max(ymax[r], ymax[o])
        r = _find(parent, v)
        s = size[r]
        if s > max_size:
            max_size = s
        metric = s
        if diameter_metric:
            metric = max(xmax[r] - xmin[r], ymax[r] - ymin[r])
        if metric >= threshold:
            if len(times) >= max_events:
                break
            times.append(t)
            sizes.append(s)
            bx0.append(xmin[r])
            bx1.append(xmax[r])
            by0.append(ymin[r])
            by1.append(ymax[r])
            # collect the cluster by BFS over open sites
            head = 0
            tail = 1
            queue[0] = v
            mark[v] = 1
            while head < tail:
                a = queue[head]
                head += 1
                ay = a // w
                ax = a - ay * w
                for k in range(4):
                    xx = ax + DX[k]
                    yy = ay + DY[k]
                    if 0 <= xx < w and 0 <= yy < h:
                        b = yy * w + xx
                        if state[b] != 0 and mark[b] == 0:
                            mark[b] = 1
                            queue[tail] = b
                            tail += 1
            for q in range(tail):
                a = queue[q]
                mark[a] = 0
                state[a] = 0
                parent[a] = a
                size[a] = 1
                ay = a // w
                ax = a - ay * w
                xmin[a] = ax
                xmax[a] = ax
                ymin[a] = ay
                ymax[a] = ay
                burned.append(a)
                nt = t + np.random.exponential(1.0)
                jj = hn
                hn += 1
                while jj > 0:
                    p = (jj - 1) >> 1
                    if heap_t[p] <= nt:
                        break
                    heap_t[jj] = heap_t[p]
                    heap_s[jj] = heap_s[p]
                    jj = p
                heap_t[jj] = nt
                heap_s[jj] = a
            ptr.append(len(burned))
    ne = len(times)
    out_t = np.empty(ne, dtype=np.float64)
    out_s = np.empty(ne, dtype=np.int64)
    out_b = np.empty((ne, 4), dtype=np.int64)
    for e in range(ne):
        out_t[e] = times[e]
        out_s[e] = sizes[e]
        out_b[e, 0] = bx0[e]
        out_b[e, 1] = bx1[e]
        out_b[e, 2] = by0[e]
        out_b[e, 3] = by1[e]
    out_ptr = np.empty(len(ptr), dtype=np.int64)
    for e in range(len(ptr)):
        out_ptr[e] = ptr[e]
    out_sites = np.empty(len(burned), dtype=np.int64)
    for e in range(len(burned)):
        out_sites[e] = burned[e]
    return out_t, out_s, out_b, out_ptr, out_sites, state, max_size, ne
