"""Numba core of the incremental Bowyer-Watson triangulation.

Triangles are stored as index triples (CCW) with a parallel neighbor
table: ``tn[t, j]`` is the triangle across the edge opposite vertex
``tv[t, j]``.  Geometric predicates run in double precision with a
relative tolerance fallback (ties count as "not inside" / "collinear").
"""

from __future__ import annotations

import numpy as np
from numba import njit

EPS = 1e-12


@njit(cache=True, inline="always")
def _orient(ax, ay, bx, by, cx, cy):
    """+1 if c is left of a->b, -1 right, 0 within tolerance."""
    d1 = (bx - ax) * (cy - ay)
    d2 = (by - ay) * (cx - ax)
    det = d1 - d2
    bound = EPS * (abs(d1) + abs(d2))
    if det > bound:
        return 1
    if det < -bound:
        return -1
    return 0


@njit(cache=True, inline="always")
def _in_circumcircle(ax, ay, bx, by, cx, cy, px, py):
    """True if p is strictly inside the circumcircle of CCW triangle abc."""
    adx = ax - px
    ady = ay - py
    bdx = bx - px
    bdy = by - py
    cdx = cx - px
    cdy = cy - py
    ad = adx * adx + ady * ady
    bd = bdx * bdx + bdy * bdy
    cd = cdx * cdx + cdy * cdy
    t1 = adx * (bdy * cd - cdy * bd)
    t2 = ady * (bdx * cd - cdx * bd)
    t3 = ad * (bdx * cdy - cdx * bdy)
    det = t1 - t2 + t3
    bound = EPS * (abs(t1) + abs(t2) + abs(t3))
    return det > bound


@njit(cache=True)
def _locate(pts, tv, tn, alive, start, px, py, n_alive_hint):
    """Walk from ``start`` to a triangle containing (px, py)."""
    t = start
    max_steps = 4 * n_alive_hint + 64
    steps = 0
    while steps < max_steps:
        steps += 1
        # edge opposite vertex j goes v[j+1] -> v[j+2]
        moved = False
        for j in range(3):
            i1 = tv[t, (j + 1) % 3]
            i2 = tv[t, (j + 2) % 3]
            if _orient(pts[i1, 0], pts[i1, 1], pts[i2, 0], pts[i2, 1], px, py) < 0:
                nxt = tn[t, j]
                if nxt >= 0:
                    t = nxt
                    moved = True
                    break
        if not moved:
            return t
    # walk got stuck (degenerate data): brute-force scan
    for t in range(len(alive)):
        if alive[t] == 1:
            ok = True
            for j in range(3):
                i1 = tv[t, (j + 1) % 3]
                i2 = tv[t, (j + 2) % 3]
                if _orient(pts[i1, 0], pts[i1, 1], pts[i2, 0], pts[i2, 1], px, py) < 0:
                    ok = False
                    break
            if ok:
                return t
    return -1


@njit(cache=True)
def _triangulate(pts_in):
    """Bowyer-Watson over deduplicated points; returns (triangles, count).

    ``pts_in`` is (n, 2); the result references input indices and
    excludes anything touching the enclosing super-triangle.
    """
    n = pts_in.shape[0]
    pts = np.empty((n + 3, 2), np.float64)
    pts[:n] = pts_in

    # super-triangle comfortably containing the data
    minx = pts_in[:, 0].min()
    maxx = pts_in[:, 0].max()
    miny = pts_in[:, 1].min()
    maxy = pts_in[:, 1].max()
    cx = 0.5 * (minx + maxx)
    cy = 0.5 * (miny + maxy)
    d = max(maxx - minx, maxy - miny)
    if d == 0.0:
        d = 1.0
    m = 64.0 * d
    pts[n, 0] = cx - 2.0 * m
    pts[n, 1] = cy - m
    pts[n + 1, 0] = cx + 2.0 * m
    pts[n + 1, 1] = cy - m
    pts[n + 2, 0] = cx
    pts[n + 2, 1] = cy + 2.0 * m

    cap = 2 * (n + 3) + 16
    tv = np.empty((cap, 3), np.int32)
    tn = np.full((cap, 3), -1, np.int32)
    alive = np.zeros(cap, np.uint8)
    stamp = np.zeros(cap, np.int64)   # cavity-visit stamps
    in_cavity = np.zeros(cap, np.uint8)

    tv[0, 0] = n
    tv[0, 1] = n + 1
    tv[0, 2] = n + 2
    alive[0] = 1
    n_tris = 1
    free = np.empty(cap, np.int32)
    n_free = 0

    # per-insertion scratch
    stack = np.empty(cap, np.int32)
    cav = np.empty(cap, np.int32)
    # boundary edges: (va, vb, outside-neighbor)
    bva = np.empty(cap, np.int32)
    bvb = np.empty(cap, np.int32)
    bnb = np.empty(cap, np.int32)
    newt = np.empty(cap, np.int32)

    last = 0
    for i in range(n):
        px = pts[i, 0]
        py = pts[i, 1]
        t0 = _locate(pts, tv, tn, alive, last, px, py, n)
        if t0 < 0:
            continue

        # flood-fill the cavity of circumcircle violators
        n_stack = 0
        n_cav = 0
        stack[n_stack] = t0
        n_stack += 1
        stamp[t0] = 2 * i + 1
        in_cavity[t0] = 1
        cav[n_cav] = t0
        n_cav += 1
        n_bound = 0
        while n_stack > 0:
            n_stack -= 1
            t = stack[n_stack]
            for j in range(3):
                nb = tn[t, j]
                va = tv[t, (j + 1) % 3]
                vb = tv[t, (j + 2) % 3]
                if nb >= 0 and stamp[nb] == 2 * i + 1 and in_cavity[nb] == 1:
                    continue
                bad = False
                if nb >= 0:
                    a = tv[nb, 0]
                    b = tv[nb, 1]
                    c = tv[nb, 2]
                    bad = _in_circumcircle(
                        pts[a, 0], pts[a, 1], pts[b, 0], pts[b, 1],
                        pts[c, 0], pts[c, 1], px, py,
                    )
                if nb >= 0 and bad:
                    if stamp[nb] != 2 * i + 1:
                        stamp[nb] = 2 * i + 1
                        in_cavity[nb] = 1
                        cav[n_cav] = nb
                        n_cav += 1
                        stack[n_stack] = nb
                        n_stack += 1
                else:
                    bva[n_bound] = va
                    bvb[n_bound] = vb
                    bnb[n_bound] = nb
                    n_bound += 1

        # retire cavity triangles
        for k in range(n_cav):
            t = cav[k]
            alive[t] = 0
            in_cavity[t] = 0
            free[n_free] = t
            n_free += 1

        # fan of new triangles over the boundary
        for k in range(n_bound):
            if n_free > 0:
                n_free -= 1
                t = free[n_free]
            else:
                t = n_tris
                n_tris += 1
            newt[k] = t
            tv[t, 0] = bva[k]
            tv[t, 1] = bvb[k]
            tv[t, 2] = i
            alive[t] = 1
            stamp[t] = 0
            nb = bnb[k]
            tn[t, 2] = nb  # across edge (va, vb), opposite the new point
            if nb >= 0:
                # nb sees the shared edge with reversed orientation (vb, va)
                for j in range(3):
                    o1 = tv[nb, (j + 1) % 3]
                    o2 = tv[nb, (j + 2) % 3]
                    if o1 == bvb[k] and o2 == bva[k]:
                        tn[nb, j] = t
                        break

        # stitch fan neighbors: edge (vb, i) of one tri meets (i, va) of the next
        for k in range(n_bound):
            t = newt[k]
            for k2 in range(n_bound):
                if k2 == k:
                    continue
                t2 = newt[k2]
                if tv[t2, 0] == tv[t, 1]:   # t2.va == t.vb
                    tn[t, 0] = t2           # across edge (vb, i), opposite va
                if tv[t2, 1] == tv[t, 0]:   # t2.vb == t.va
                    tn[t, 1] = t2           # across edge (i, va), opposite vb
        if n_bound > 0:
            last = newt[0]

    # collect real triangles
    out = np.empty((n_tris, 3), np.int32)
    cnt = 0
    for t in range(n_tris):
        if alive[t] == 1:
            if tv[t, 0] < n and tv[t, 1] < n and tv[t, 2] < n:
                out[cnt, 0] = tv[t, 0]
                out[cnt, 1] = tv[t, 1]
                out[cnt, 2] = tv[t, 2]
                cnt += 1
    return out[:cnt]
