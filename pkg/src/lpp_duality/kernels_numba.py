"""Numba implementations of the hot lattice kernels.

Weights are regenerated on the fly from the counter-based site hash, so no
kernel ever needs a materialized weight field: a sweep over an N x N box
costs two rolling float columns plus (where backtracking is needed) one byte
per site.  All 2-D arrays are indexed [i, j] = [x-offset, y-offset].

Conventions shared with the pure-numpy backend:
  * passage times are start-exclusive (L(x, x) = 0);
  * predecessor byte 1 means "from below" (the e2 step), 0 "from the left",
    and exact float ties prefer the vertical step;
  * successor byte in target-rooted sweeps mirrors that: tie prefers up.
"""

import numpy as np
from numba import njit, uint64

from .rng import (CX, CY, GOLD, M1, M2, SALTC, SALT_AXIS, SALT_INTERIOR,
                  SALT_TASEP_CLOCK, SALT_TASEP_INIT, TWO_NEG53)

KIND_INTERIOR = 0
KIND_BOUNDARY = 1

_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_S63 = np.uint64(63)
_AXIS = np.uint64(SALT_AXIS)
_INTERIOR = np.uint64(SALT_INTERIOR)
_TASEP_INIT = np.uint64(SALT_TASEP_INIT)
_TASEP_CLOCK = np.uint64(SALT_TASEP_CLOCK)

NEG_INF = -1.0e300
FAR = 1.0e18


@njit(cache=True, inline="always")
def _mix(z):
    z = z ^ (z >> _S30)
    z = z * M1
    z = z ^ (z >> _S27)
    z = z * M2
    return z ^ (z >> _S31)


@njit(cache=True, inline="always")
def _site(seed, ix, iy, salt):
    h = _mix((seed ^ (salt * SALTC)) + GOLD)
    h = _mix(h ^ (uint64(ix) * CX))
    h = _mix(h ^ (uint64(iy) * CY))
    return h


@njit(cache=True, inline="always")
def _unit(h):
    return (np.float64(h >> _S11) + 0.5) * TWO_NEG53


@njit(cache=True, inline="always")
def _weight(seed, kind, x, y):
    if kind == KIND_BOUNDARY:
        if x == 0 and y == 0:
            return 0.0
        if x == 0 or y == 0:
            return -np.log(_unit(_site(seed, x, y, _AXIS))) / 0.5
    return -np.log(_unit(_site(seed, x, y, _INTERIOR)))


@njit(cache=True)
def weights_rect(seed, kind, x0, y0, nx, ny):
    out = np.empty((nx, ny), np.float64)
    for i in range(nx):
        x = x0 + i
        for j in range(ny):
            out[i, j] = _weight(seed, kind, x, y0 + j)
    return out


@njit(cache=True)
def lpp_grid(w):
    """Start-exclusive passage times from corner (0,0) to every cell."""
    nx, ny = w.shape
    lg = np.empty((nx, ny), np.float64)
    lg[0, 0] = 0.0
    for j in range(1, ny):
        lg[0, j] = lg[0, j - 1] + w[0, j]
    for i in range(1, nx):
        lg[i, 0] = lg[i - 1, 0] + w[i, 0]
        for j in range(1, ny):
            a = lg[i - 1, j]
            b = lg[i, j - 1]
            m = b if b >= a else a
            lg[i, j] = m + w[i, j]
    return lg


@njit(cache=True)
def lpp_pred(w):
    """lpp_grid plus the argmax-predecessor byte per cell."""
    nx, ny = w.shape
    lg = np.empty((nx, ny), np.float64)
    pred = np.empty((nx, ny), np.uint8)
    lg[0, 0] = 0.0
    pred[0, 0] = 255
    for j in range(1, ny):
        lg[0, j] = lg[0, j - 1] + w[0, j]
        pred[0, j] = 1
    for i in range(1, nx):
        lg[i, 0] = lg[i - 1, 0] + w[i, 0]
        pred[i, 0] = 0
        for j in range(1, ny):
            a = lg[i - 1, j]
            b = lg[i, j - 1]
            if b >= a:
                pred[i, j] = 1
                lg[i, j] = b + w[i, j]
            else:
                pred[i, j] = 0
                lg[i, j] = a + w[i, j]
    return lg, pred


@njit(cache=True)
def rect_l_seeded(seed, kind, sx, sy, tx, ty, ox, oy, sgn):
    """Corner-to-corner passage time with inline weights.

    Frame cell (i, j) sits at absolute site (ox + sgn*(sx+i), oy + sgn*(sy+j)).
    """
    nx = tx - sx + 1
    ny = ty - sy + 1
    col = np.empty(ny, np.float64)
    col[0] = 0.0
    for j in range(1, ny):
        col[j] = col[j - 1] + _weight(seed, kind, ox + sgn * sx, oy + sgn * (sy + j))
    for i in range(1, nx):
        x = ox + sgn * (sx + i)
        col[0] = col[0] + _weight(seed, kind, x, oy + sgn * sy)
        for j in range(1, ny):
            a = col[j]
            b = col[j - 1]
            m = b if b >= a else a
            col[j] = m + _weight(seed, kind, x, oy + sgn * (sy + j))
    return col[ny - 1]


@njit(cache=True)
def boundary_value(seed, x1, n):
    """Boundary-model passage time from the origin to (x1, n)."""
    col = np.empty(n + 1, np.float64)
    col[0] = 0.0
    for j in range(1, n + 1):
        col[j] = col[j - 1] + _weight(seed, KIND_BOUNDARY, 0, j)
    for i in range(1, x1 + 1):
        col[0] = col[0] + _weight(seed, KIND_BOUNDARY, i, 0)
        for j in range(1, n + 1):
            a = col[j]
            b = col[j - 1]
            m = b if b >= a else a
            col[j] = m + _weight(seed, KIND_BOUNDARY, i, j)
    return col[n]


@njit(cache=True)
def boundary_row(seed, x_max, n):
    """Boundary-model passage times to (x, n) for every x in [0, x_max]."""
    col = np.empty(n + 1, np.float64)
    row = np.empty(x_max + 1, np.float64)
    col[0] = 0.0
    for j in range(1, n + 1):
        col[j] = col[j - 1] + _weight(seed, KIND_BOUNDARY, 0, j)
    row[0] = col[n]
    for i in range(1, x_max + 1):
        col[0] = col[0] + _weight(seed, KIND_BOUNDARY, i, 0)
        for j in range(1, n + 1):
            a = col[j]
            b = col[j - 1]
            m = b if b >= a else a
            col[j] = m + _weight(seed, KIND_BOUNDARY, i, j)
        row[i] = col[n]
    return row


@njit(cache=True)
def boundary_pred(seed, x_max, n):
    """Predecessor bytes of the boundary DP on [0, x_max] x [0, n]."""
    pred = np.empty((x_max + 1, n + 1), np.uint8)
    col = np.empty(n + 1, np.float64)
    col[0] = 0.0
    pred[0, 0] = 255
    for j in range(1, n + 1):
        col[j] = col[j - 1] + _weight(seed, KIND_BOUNDARY, 0, j)
        pred[0, j] = 1
    for i in range(1, x_max + 1):
        col[0] = col[0] + _weight(seed, KIND_BOUNDARY, i, 0)
        pred[i, 0] = 0
        for j in range(1, n + 1):
            a = col[j]
            b = col[j - 1]
            if b >= a:
                pred[i, j] = 1
                col[j] = b + _weight(seed, KIND_BOUNDARY, i, j)
            else:
                pred[i, j] = 0
                col[j] = a + _weight(seed, KIND_BOUNDARY, i, j)
    return pred


@njit(cache=True)
def exit_from_pred(pred, x, y):
    """Signed exit of the geodesic to (x, y): first axis vertex met backtracking."""
    i = x
    j = y
    while i > 0 and j > 0:
        if pred[i, j] == 1:
            j -= 1
        else:
            i -= 1
    if j == 0:
        return i
    return -j


@njit(cache=True)
def boundary_exits(seed, x_max, n):
    """Signed exit points of the geodesics to (x, n), x = 1..x_max."""
    pred = boundary_pred(seed, x_max, n)
    out = np.empty(x_max + 1, np.int64)
    out[0] = 0
    for x in range(1, x_max + 1):
        out[x] = exit_from_pred(pred, x, n)
    return out


@njit(cache=True)
def boundary_exit_single(seed, x1, n):
    pred = boundary_pred(seed, x1, n)
    return exit_from_pred(pred, x1, n)


@njit(cache=True)
def stationary_meet(seed, d, m, t_max):
    """Meet height of two diagonal-tree paths, sampled without a far target.

    The down-left geodesic tree restricted to the open quadrant has the law
    of the boundary DP's argmax field; rotating 180 degrees turns the meet
    of the up-right tree paths out of (m,0) and (0,m) into the meet of two
    down-left walks from (d, d+m) and (d+m, d) in that field.  Returns
    (t, ok) where t is the meet height if below t_max, t_max as a sentinel
    for "at least t_max", and ok = 0 when a walk touched an axis before the
    value was decided (margin too small; replicate must be discarded).
    """
    size = d + m
    pred = boundary_pred(seed, size, size)
    ax, ay = d, d + m
    bx, by = d + m, d
    y_stop = d + m - t_max
    while True:
        if ax == bx and ay == by:
            return d + m - ay, 1
        if ay <= y_stop or by <= y_stop:
            return t_max, 1
        if ax < 1 or ay < 1 or bx < 1 or by < 1:
            return -1, 0
        if pred[ax, ay] == 1:
            ay -= 1
        else:
            ax -= 1
        if pred[bx, by] == 1:
            by -= 1
        else:
            bx -= 1


@njit(cache=True)
def variational_parts(seed, x1, n):
    """Boundary mass and interior entry-to-target times per candidate exit.

    Slot k of each output covers z = k - n for z in [-n, x1]; the z = 0 slot
    holds 0 mass and -inf passage time (the origin is never a last axis
    vertex).  m_arr[k] is the mass collected along the axis up to z and
    l_arr[k] the start-inclusive interior passage time from the entry vertex
    above/right of z to (x1, n).
    """
    m_arr = np.empty(n + x1 + 1, np.float64)
    l_arr = np.empty(n + x1 + 1, np.float64)
    m_arr[n] = 0.0
    l_arr[n] = NEG_INF
    acc = 0.0
    for z in range(1, x1 + 1):
        acc += _weight(seed, KIND_BOUNDARY, z, 0)
        m_arr[n + z] = acc
    acc = 0.0
    for k in range(1, n + 1):
        acc += _weight(seed, KIND_BOUNDARY, 0, k)
        m_arr[n - k] = acc
    # reverse inclusive DP over the strict interior [1,x1] x [1,n]
    nxt = np.empty(n + 2, np.float64)
    cur = np.empty(n + 2, np.float64)
    for j in range(n + 2):
        nxt[j] = NEG_INF
        cur[j] = NEG_INF
    for i in range(x1, 0, -1):
        tmp = nxt
        nxt = cur
        cur = tmp
        for j in range(n, 0, -1):
            if i == x1 and j == n:
                m = 0.0  # target cell
            else:
                up = cur[j + 1]
                right = nxt[j]
                m = up if up >= right else right
            cur[j] = m + _weight(seed, KIND_INTERIOR, i, j)
        l_arr[n + i] = cur[1]  # entry (i, 1) for exit z = i > 0
        if i == 1:
            for k in range(1, n + 1):
                l_arr[n - k] = cur[k]  # entry (1, k) for exit z = -k
    return m_arr, l_arr


@njit(cache=True)
def target_steps(seed, kind, nn, ox, oy, sgn):
    """Successor byte per cell toward the frame target (nn, nn); 1 = up.

    Absolute site of frame (i, j) is (ox + sgn*i, oy + sgn*j); sgn = -1
    runs the same sweep on the reflected lattice for down-left geodesics.
    """
    size = nn + 1
    steps = np.empty((size, size), np.uint8)
    scur = np.empty(size, np.float64)
    snext = np.empty(size, np.float64)
    xn = ox + sgn * nn
    scur[nn] = _weight(seed, kind, xn, oy + sgn * nn)
    steps[nn, nn] = 255
    for j in range(nn - 1, -1, -1):
        scur[j] = scur[j + 1] + _weight(seed, kind, xn, oy + sgn * j)
        steps[nn, j] = 1
    for i in range(nn - 1, -1, -1):
        tmp = snext
        snext = scur
        scur = tmp
        x = ox + sgn * i
        scur[nn] = snext[nn] + _weight(seed, kind, x, oy + sgn * nn)
        steps[i, nn] = 0
        for j in range(nn - 1, -1, -1):
            up = scur[j + 1]
            right = snext[j]
            if up >= right:
                steps[i, j] = 1
                scur[j] = up + _weight(seed, kind, x, oy + sgn * j)
            else:
                steps[i, j] = 0
                scur[j] = right + _weight(seed, kind, x, oy + sgn * j)
    return steps


@njit(cache=True)
def coalesce_c(seed, kind, ax, ay, bx, by, nn, ox, oy, sgn):
    """Meet point of the geodesics from frame points a, b to frame (nn, nn).

    Both walks follow the shared successor field; after aligning the
    anti-diagonals they advance in lockstep, so the first shared vertex is
    exactly the meet point.  Returned in frame coordinates.
    """
    steps = target_steps(seed, kind, nn, ox, oy, sgn)
    va0, va1 = ax, ay
    vb0, vb1 = bx, by
    while va0 + va1 < vb0 + vb1:
        if steps[va0, va1] == 1:
            va1 += 1
        else:
            va0 += 1
    while vb0 + vb1 < va0 + va1:
        if steps[vb0, vb1] == 1:
            vb1 += 1
        else:
            vb0 += 1
    while va0 != vb0 or va1 != vb1:
        if steps[va0, va1] == 1:
            va1 += 1
        else:
            va0 += 1
        if steps[vb0, vb1] == 1:
            vb1 += 1
        else:
            vb0 += 1
    return va0, va1


@njit(cache=True)
def tree_pred(seed, win, nfar):
    """Down-left geodesic tree on [-nfar, win]^2, rooted at (-nfar, -nfar).

    pred[i, j] is the forward-DP argmax byte at absolute (i - nfar, j - nfar);
    it doubles as the down-left step out of that vertex (1 = step -e2).
    """
    size = win + nfar + 1
    pred = np.empty((size, size), np.uint8)
    col = np.empty(size, np.float64)
    col[0] = 0.0
    pred[0, 0] = 255
    for j in range(1, size):
        col[j] = col[j - 1] + _weight(seed, KIND_INTERIOR, -nfar, j - nfar)
        pred[0, j] = 1
    for i in range(1, size):
        x = i - nfar
        col[0] = col[0] + _weight(seed, KIND_INTERIOR, x, -nfar)
        pred[i, 0] = 0
        for j in range(1, size):
            a = col[j]
            b = col[j - 1]
            if b >= a:
                pred[i, j] = 1
                col[j] = b + _weight(seed, KIND_INTERIOR, x, j - nfar)
            else:
                pred[i, j] = 0
                col[j] = a + _weight(seed, KIND_INTERIOR, x, j - nfar)
    return pred


@njit(cache=True)
def tree_event(seed, m, n, win, nfar):
    """One realization of the dual-coalescence / crossing-count event pair.

    Returns (lhs, rhs, tstar, zflags, err, xstop):
      lhs    1 iff the dual paths out of (m,0)* and (0,m)* meet below row n;
      rhs    1 iff no down-left path from (x, n), x >= 1, crosses the axes
             inside [-m, m];
      tstar  second coordinate of the dual meet (y + 0.5), FAR if not seen;
      zflags attained crossing values, slot z + m for z in [-m, m];
      err    0 ok, 1 dual walk left the window, 2 crossing scan exhausted.
    """
    pred = tree_pred(seed, win, nfar)
    zflags = np.zeros(2 * m + 1, np.uint8)
    err = 0
    tstar = FAR
    lhs = 0
    # dual walks, indices are the lattice points below-left of the dual vertex
    ax, ay = m, 0
    bx, by = 0, m
    while True:
        if ax == bx and ay == by:
            tstar = ay + 0.5
            if ay <= n - 1:
                lhs = 1
            break
        if ay >= n and by >= n:
            break
        if ax + 1 > win or ay + 1 > win or bx + 1 > win or by + 1 > win:
            err = 1
            break
        pa = pred[ax + 1 + nfar, ay + 1 + nfar]
        pb = pred[bx + 1 + nfar, by + 1 + nfar]
        if pa == 0:
            ax += 1
        else:
            ay += 1
        if pb == 0:
            bx += 1
        else:
            by += 1
    # crossing scan: monotone in x, stop once the crossing passes +m
    xstop = -1
    for x in range(1, win + 1):
        cx = x
        cy = n
        z = 0
        while True:
            if cx == 0 and cy == 0:
                err = 3
                break
            if cy == 0:
                z = cx
                break
            if cx == 0:
                z = -cy
                break
            if pred[cx + nfar, cy + nfar] == 0:
                cx -= 1
            else:
                cy -= 1
        if err == 3:
            break
        if z > m:
            xstop = x
            break
        if z >= -m:
            zflags[z + m] = 1
    if xstop < 0 and err == 0:
        err = 2
    rhs = 1
    for k in range(2 * m + 1):
        if zflags[k] != 0:
            rhs = 0
            break
    return lhs, rhs, tstar, zflags, err, xstop


@njit(cache=True)
def crossing_single(seed, x1, n, win, nfar):
    """Signed first crossing of the down-left path from (x1, n) with the axes."""
    pred = tree_pred(seed, win, nfar)
    cx = x1
    cy = n
    while True:
        if cy == 0:
            return cx
        if cx == 0:
            return -cy
        if pred[cx + nfar, cy + nfar] == 0:
            cx -= 1
        else:
            cy -= 1


@njit(cache=True)
def massfield_evolve(seed, x0, width, nsteps, v0, iq):
    """Evolve boundary masses v0 (cumulated, frame i = site x0+i) nsteps rows.

    Returns the final cumulated row and the argmax entry column for the
    query index iq (used to certify the left truncation was wide enough).
    """
    pred = np.empty((width, nsteps + 1), np.uint8)
    v = v0.copy()
    for j in range(1, nsteps + 1):
        left = NEG_INF
        for i in range(width):
            below = v[i]
            if below >= left:
                pred[i, j] = 1
                v[i] = below + _weight(seed, KIND_INTERIOR, x0 + i, j)
            else:
                pred[i, j] = 0
                v[i] = left + _weight(seed, KIND_INTERIOR, x0 + i, j)
            left = v[i]
    i = iq
    j = nsteps
    while j > 0:
        if pred[i, j] == 1:
            j -= 1
        else:
            i -= 1
    return v, x0 + i


@njit(cache=True)
def tasep_run(seed, khalf, i_max, j_max, burn_in, pick_window, g_horizon,
              edge_buffer, log_cap):
    """One exclusion-process replicate.

    Simulates rate-1 right jumps with exclusion on sites [-khalf, khalf]
    (closed ends) for burn_in + pick_window + g_horizon time units, logging
    every jump.  The reference jump is drawn uniformly among the jumps
    across the (0, 1) bond inside [burn_in, burn_in + pick_window]; time is
    re-rooted there and labels assigned (particle 0 lands on site 1, hole 0
    on site 0).  A uniform pick over a long window approximates
    conditioning on a jump at the origin without biasing the past, which a
    first-jump-after rule would.

    Returns (status, t0, g, gneg, valid, occ0, p0_site, h0_site) where
      status  0 ok, 1 no reference jump in the window, 2 jammed, 3 log full;
      g       (i_max+1, j_max+1) interchange times, NaN if outside horizon;
      gneg    interchange times at label pairs (0,-1), (-1,0), (-1,-1),
              negative values from the pre-re-root past, NaN if unseen;
      valid   0 if a tracked label entered the edge buffer;
      occ0    occupation snapshot at the re-root instant.
    """
    nsites = 2 * khalf + 1
    occ = np.zeros(nsites, np.uint8)
    for s in range(-khalf, khalf + 1):
        if (_site(seed, s, 0, _TASEP_INIT) >> _S63) != 0:
            occ[s + khalf] = 1
    occ_init = occ.copy()
    npart = 0
    for idx in range(nsites):
        npart += occ[idx]
    nhole = nsites - npart
    ppos = np.empty(npart, np.int64)
    hpos = np.empty(nhole, np.int64)
    hole_at = np.full(nsites, -1, np.int64)
    kp = 0
    kh = 0
    for idx in range(nsites):
        if occ[idx] == 1:
            ppos[kp] = idx - khalf
            kp += 1
        else:
            hpos[kh] = idx - khalf
            hole_at[idx] = kh
            kh += 1
    enabled = 0
    for k in range(npart):
        s = ppos[k]
        if s < khalf and occ[s + 1 + khalf] == 0:
            enabled += 1
    state = _site(seed, 0, 0, _TASEP_CLOCK)
    log_t = np.empty(log_cap, np.float64)
    log_k = np.empty(log_cap, np.int64)
    log_h = np.empty(log_cap, np.int64)
    log_s = np.empty(log_cap, np.int64)
    nlog = 0
    t = 0.0
    t_end = burn_in + pick_window + g_horizon
    status = 0
    while True:
        if enabled == 0:
            status = 2
            break
        state = state + GOLD
        u = _unit(_mix(state))
        t += -np.log(u) / enabled
        if t > t_end:
            break
        if nlog >= log_cap:
            status = 3
            break
        while True:
            state = state + GOLD
            k = np.int64(_unit(_mix(state)) * npart)
            if k >= npart:
                k = npart - 1
            s = ppos[k]
            if s < khalf and occ[s + 1 + khalf] == 0:
                break
        h = hole_at[s + 1 + khalf]
        occ[s + khalf] = 0
        occ[s + 1 + khalf] = 1
        ppos[k] = s + 1
        hpos[h] = s
        hole_at[s + khalf] = h
        hole_at[s + 1 + khalf] = -1
        enabled -= 1
        if s + 1 < khalf and occ[s + 2 + khalf] == 0:
            enabled += 1
        if s - 1 >= -khalf and occ[s - 1 + khalf] == 1:
            enabled += 1
        log_t[nlog] = t
        log_k[nlog] = k
        log_h[nlog] = h
        log_s[nlog] = s
        nlog += 1
    g = np.full((i_max + 1) * (j_max + 1), np.nan)
    gneg = np.full(3, np.nan)
    occ0 = np.zeros(nsites, np.uint8)
    if status != 0:
        return (status, -1.0, g.reshape(i_max + 1, j_max + 1), gneg, 0,
                occ0, -(2 * khalf), -(2 * khalf))
    n_ref = 0
    for e in range(nlog):
        if log_s[e] == 0 and burn_in <= log_t[e] <= burn_in + pick_window:
            n_ref += 1
    if n_ref == 0:
        return (1, -1.0, g.reshape(i_max + 1, j_max + 1), gneg, 0,
                occ0, -(2 * khalf), -(2 * khalf))
    state = state + GOLD
    pick = np.int64(_unit(_mix(state)) * n_ref)
    if pick >= n_ref:
        pick = n_ref - 1
    e0 = -1
    for e in range(nlog):
        if log_s[e] == 0 and burn_in <= log_t[e] <= burn_in + pick_window:
            if pick == 0:
                e0 = e
                break
            pick -= 1
    t0 = log_t[e0]
    k0 = log_k[e0]
    h0 = log_h[e0]
    # interchange times around the reference jump
    g[0] = 0.0
    for e in range(nlog):
        i = log_h[e] - h0
        j = k0 - log_k[e]
        dt = log_t[e] - t0
        if 0 <= i <= i_max and 0 <= j <= j_max and 0.0 < dt <= g_horizon:
            idx = i * (j_max + 1) + j
            if np.isnan(g[idx]):
                g[idx] = dt
        if i == 0 and j == -1:
            gneg[0] = dt
        elif i == -1 and j == 0:
            gneg[1] = dt
        elif i == -1 and j == -1:
            gneg[2] = dt
    # occupation at the re-root instant, by replaying the log
    for idx in range(nsites):
        occ0[idx] = occ_init[idx]
    for e in range(e0 + 1):
        s = log_s[e]
        occ0[s + khalf] = 0
        occ0[s + 1 + khalf] = 1
    # tracked labels must stay clear of the closed segment ends
    valid = 1
    for k in range(k0 - j_max, k0 + 2):
        if k < 0 or k >= npart or ppos[k] >= khalf - edge_buffer:
            valid = 0
            break
    if valid == 1:
        for h in range(h0 - 1, h0 + i_max + 1):
            if h < 0 or h >= nhole or hpos[h] <= -khalf + edge_buffer:
                valid = 0
                break
    return (status, t0, g.reshape(i_max + 1, j_max + 1), gneg, valid, occ0,
            1, 0)


@njit(cache=True)
def tasep_density(seed, khalf, t_meas, bulk_halfwidth):
    """Occupied-site count in |site| <= bulk_halfwidth at time t_meas."""
    nsites = 2 * khalf + 1
    occ = np.zeros(nsites, np.uint8)
    for s in range(-khalf, khalf + 1):
        if (_site(seed, s, 0, _TASEP_INIT) >> _S63) != 0:
            occ[s + khalf] = 1
    npart = 0
    for idx in range(nsites):
        npart += occ[idx]
    ppos = np.empty(npart, np.int64)
    kp = 0
    for idx in range(nsites):
        if occ[idx] == 1:
            ppos[kp] = idx - khalf
            kp += 1
    enabled = 0
    for k in range(npart):
        s = ppos[k]
        if s < khalf and occ[s + 1 + khalf] == 0:
            enabled += 1
    state = _site(seed, 0, 0, _TASEP_CLOCK)
    t = 0.0
    while True:
        if enabled == 0:
            break
        state = state + GOLD
        u = _unit(_mix(state))
        tn = t + (-np.log(u) / enabled)
        if tn >= t_meas:
            break
        t = tn
        while True:
            state = state + GOLD
            k = np.int64(_unit(_mix(state)) * npart)
            if k >= npart:
                k = npart - 1
            s = ppos[k]
            if s < khalf and occ[s + 1 + khalf] == 0:
                break
        occ[s + khalf] = 0
        occ[s + 1 + khalf] = 1
        ppos[k] = s + 1
        enabled -= 1
        if s + 1 < khalf and occ[s + 2 + khalf] == 0:
            enabled += 1
        if s - 1 >= -khalf and occ[s - 1 + khalf] == 1:
            enabled += 1
    count = 0
    for s in range(-bulk_halfwidth, bulk_halfwidth + 1):
        count += occ[s + khalf]
    return count
