"""Pure-numpy fallback for the lattice kernels.

Same signatures and conventions as kernels_numba; dynamic programs are
vectorized along anti-diagonals, walks and the exclusion-process loop run
in plain Python.  Selected with LPP_DUALITY_BACKEND=numpy; meant for
environments without a working numba, and as an independent cross-check of
the compiled kernels.  Values may differ from the numba backend in the last
couple of ulps (vectorized log), never in structure.
"""

import math

import numpy as np

from . import rng
from .rng import (GOLD, SALT_AXIS, SALT_INTERIOR, SALT_TASEP_CLOCK,
                  SALT_TASEP_INIT, mix64, site_u64, unit_from_u64)

KIND_INTERIOR = 0
KIND_BOUNDARY = 1

NEG_INF = -1.0e300
FAR = 1.0e18

_MASK = (1 << 64) - 1
_GOLD_I = int(GOLD)
_M1_I = 0xBF58476D1CE4E5B9
_M2_I = 0x94D049BB133111EB


def _weights_xy(seed, kind, xs, ys):
    """Weights at broadcast coordinate arrays xs, ys (absolute sites)."""
    xs = np.asarray(xs, dtype=np.int64)
    ys = np.asarray(ys, dtype=np.int64)
    w = rng.exp_from_unit(unit_from_u64(site_u64(seed, xs, ys, SALT_INTERIOR)), 1.0)
    if kind == KIND_BOUNDARY:
        on_axis = (xs == 0) | (ys == 0)
        if np.any(on_axis):
            axis_w = rng.exp_from_unit(
                unit_from_u64(site_u64(seed, xs, ys, SALT_AXIS)), 0.5)
            w = np.where(on_axis, axis_w, w)
            w = np.where((xs == 0) & (ys == 0), 0.0, w)
    return w


def weights_rect(seed, kind, x0, y0, nx, ny):
    xs = x0 + np.arange(nx, dtype=np.int64)[:, None]
    ys = y0 + np.arange(ny, dtype=np.int64)[None, :]
    return _weights_xy(seed, kind, np.broadcast_to(xs, (nx, ny)),
                       np.broadcast_to(ys, (nx, ny)))


def _dp_forward(w, want_pred):
    """Start-exclusive corner DP along anti-diagonals."""
    nx, ny = w.shape
    lg = np.empty((nx, ny), np.float64)
    pred = np.empty((nx, ny), np.uint8) if want_pred else None
    lg[0, 0] = 0.0
    lg[0, 1:] = np.cumsum(w[0, 1:])
    lg[1:, 0] = np.cumsum(w[1:, 0])
    if want_pred:
        pred[0, 0] = 255
        pred[0, 1:] = 1
        pred[1:, 0] = 0
    for d in range(2, nx + ny - 1):
        i0 = max(1, d - (ny - 1))
        i1 = min(nx - 1, d - 1)
        if i0 > i1:
            continue
        ii = np.arange(i0, i1 + 1)
        jj = d - ii
        a = lg[ii - 1, jj]
        b = lg[ii, jj - 1]
        take = b >= a
        lg[ii, jj] = np.where(take, b, a) + w[ii, jj]
        if want_pred:
            pred[ii, jj] = take
    return lg, pred


def lpp_grid(w):
    return _dp_forward(w, False)[0]


def lpp_pred(w):
    return _dp_forward(w, True)


def rect_l_seeded(seed, kind, sx, sy, tx, ty, ox, oy, sgn):
    nx = tx - sx + 1
    ny = ty - sy + 1
    xs = ox + sgn * (sx + np.arange(nx, dtype=np.int64))[:, None]
    ys = oy + sgn * (sy + np.arange(ny, dtype=np.int64))[None, :]
    w = _weights_xy(seed, kind, np.broadcast_to(xs, (nx, ny)),
                    np.broadcast_to(ys, (nx, ny)))
    return lpp_grid(w)[nx - 1, ny - 1]


def _boundary_grid(seed, x_max, n, want_pred):
    w = weights_rect(seed, KIND_BOUNDARY, 0, 0, x_max + 1, n + 1)
    return _dp_forward(w, want_pred)


def boundary_value(seed, x1, n):
    return _boundary_grid(seed, x1, n, False)[0][x1, n]


def boundary_row(seed, x_max, n):
    return _boundary_grid(seed, x_max, n, False)[0][:, n].copy()


def boundary_pred(seed, x_max, n):
    return _boundary_grid(seed, x_max, n, True)[1]


def exit_from_pred(pred, x, y):
    i, j = x, y
    while i > 0 and j > 0:
        if pred[i, j] == 1:
            j -= 1
        else:
            i -= 1
    return i if j == 0 else -j


def boundary_exits(seed, x_max, n):
    pred = boundary_pred(seed, x_max, n)
    out = np.empty(x_max + 1, np.int64)
    out[0] = 0
    for x in range(1, x_max + 1):
        out[x] = exit_from_pred(pred, x, n)
    return out


def boundary_exit_single(seed, x1, n):
    pred = boundary_pred(seed, x1, n)
    return exit_from_pred(pred, x1, n)


def stationary_meet(seed, d, m, t_max):
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


def variational_parts(seed, x1, n):
    m_arr = np.empty(n + x1 + 1, np.float64)
    l_arr = np.empty(n + x1 + 1, np.float64)
    m_arr[n] = 0.0
    l_arr[n] = NEG_INF
    xs = np.arange(1, x1 + 1, dtype=np.int64)
    m_arr[n + 1:] = np.cumsum(_weights_xy(seed, KIND_BOUNDARY, xs, np.zeros_like(xs)))
    ks = np.arange(1, n + 1, dtype=np.int64)
    m_arr[n - 1::-1] = np.cumsum(_weights_xy(seed, KIND_BOUNDARY, np.zeros_like(ks), ks))
    # reverse inclusive DP over the strict interior [1,x1] x [1,n]
    w = weights_rect(seed, KIND_INTERIOR, 1, 1, x1, n)
    r = np.empty((x1, n), np.float64)
    r[x1 - 1, n - 1] = w[x1 - 1, n - 1]
    for j in range(n - 2, -1, -1):
        r[x1 - 1, j] = r[x1 - 1, j + 1] + w[x1 - 1, j]
    for i in range(x1 - 2, -1, -1):
        r[i, n - 1] = r[i + 1, n - 1] + w[i, n - 1]
    for d in range(x1 + n - 4, -1, -1):
        i0 = max(0, d - (n - 2))
        i1 = min(x1 - 2, d)
        if i0 > i1:
            continue
        ii = np.arange(i0, i1 + 1)
        jj = d - ii
        up = r[ii, jj + 1]
        right = r[ii + 1, jj]
        r[ii, jj] = np.where(up >= right, up, right) + w[ii, jj]
    l_arr[n + 1:] = r[:, 0]
    l_arr[n - 1::-1] = r[0, :]
    return m_arr, l_arr


def target_steps(seed, kind, nn, ox, oy, sgn):
    xs = ox + sgn * np.arange(nn + 1, dtype=np.int64)[:, None]
    ys = oy + sgn * np.arange(nn + 1, dtype=np.int64)[None, :]
    w = _weights_xy(seed, kind, np.broadcast_to(xs, (nn + 1, nn + 1)),
                    np.broadcast_to(ys, (nn + 1, nn + 1)))
    s = np.empty((nn + 1, nn + 1), np.float64)
    steps = np.empty((nn + 1, nn + 1), np.uint8)
    s[nn, nn] = w[nn, nn]
    steps[nn, nn] = 255
    s[nn, nn - 1::-1] = w[nn, nn] + np.cumsum(w[nn, nn - 1::-1])
    steps[nn, :nn] = 1
    s[nn - 1::-1, nn] = w[nn, nn] + np.cumsum(w[nn - 1::-1, nn])
    steps[:nn, nn] = 0
    for d in range(2 * nn - 2, -1, -1):
        i0 = max(0, d - (nn - 1))
        i1 = min(nn - 1, d)
        if i0 > i1:
            continue
        ii = np.arange(i0, i1 + 1)
        jj = d - ii
        up = s[ii, jj + 1]
        right = s[ii + 1, jj]
        take = up >= right
        s[ii, jj] = np.where(take, up, right) + w[ii, jj]
        steps[ii, jj] = take
    return steps


def coalesce_c(seed, kind, ax, ay, bx, by, nn, ox, oy, sgn):
    steps = target_steps(seed, kind, nn, ox, oy, sgn)
    va = [ax, ay]
    vb = [bx, by]

    def advance(v):
        if steps[v[0], v[1]] == 1:
            v[1] += 1
        else:
            v[0] += 1

    while va[0] + va[1] < vb[0] + vb[1]:
        advance(va)
    while vb[0] + vb[1] < va[0] + va[1]:
        advance(vb)
    while va != vb:
        advance(va)
        advance(vb)
    return va[0], va[1]


def tree_pred(seed, win, nfar):
    size = win + nfar + 1
    w = weights_rect(seed, KIND_INTERIOR, -nfar, -nfar, size, size)
    return _dp_forward(w, True)[1]


def _tree_event_from_pred(pred, m, n, win, nfar):
    zflags = np.zeros(2 * m + 1, np.uint8)
    err = 0
    tstar = FAR
    lhs = 0
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
    xstop = -1
    for x in range(1, win + 1):
        cx, cy = x, n
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
    rhs = 1 if not zflags.any() else 0
    return lhs, rhs, tstar, zflags, err, xstop


def tree_event(seed, m, n, win, nfar):
    pred = tree_pred(seed, win, nfar)
    return _tree_event_from_pred(pred, m, n, win, nfar)


def crossing_single(seed, x1, n, win, nfar):
    pred = tree_pred(seed, win, nfar)
    cx, cy = x1, n
    while True:
        if cy == 0:
            return cx
        if cx == 0:
            return -cy
        if pred[cx + nfar, cy + nfar] == 0:
            cx -= 1
        else:
            cy -= 1


def massfield_evolve(seed, x0, width, nsteps, v0, iq):
    w = weights_rect(seed, KIND_INTERIOR, x0, 1, width, nsteps)
    v = np.empty((width, nsteps + 1), np.float64)
    pred = np.empty((width, nsteps + 1), np.uint8)
    v[:, 0] = v0
    # left column can only come from below (the truncation edge)
    v[0, 1:] = v[0, 0] + np.cumsum(w[0, :])
    pred[0, 1:] = 1
    for d in range(1, width + nsteps - 1):
        i0 = max(1, d - (nsteps - 1))
        i1 = min(width - 1, d)
        if i0 > i1:
            continue
        ii = np.arange(i0, i1 + 1)
        jj = d - ii + 1
        ok = jj >= 1
        ii, jj = ii[ok], jj[ok]
        if ii.size == 0:
            continue
        below = v[ii, jj - 1]
        left = v[ii - 1, jj]
        take = below >= left
        v[ii, jj] = np.where(take, below, left) + w[ii, jj - 1]
        pred[ii, jj] = take
    i, j = iq, nsteps
    while j > 0:
        if pred[i, j] == 1:
            j -= 1
        else:
            i -= 1
    return v[:, nsteps].copy(), x0 + i


def _mix_int(z):
    z &= _MASK
    z ^= z >> 30
    z = (z * _M1_I) & _MASK
    z ^= z >> 27
    z = (z * _M2_I) & _MASK
    return z ^ (z >> 31)


def _unit_int(h):
    return ((h >> 11) + 0.5) * rng.TWO_NEG53


def tasep_run(seed, khalf, i_max, j_max, burn_in, pick_window, g_horizon,
              edge_buffer, log_cap):
    nsites = 2 * khalf + 1
    sites = np.arange(-khalf, khalf + 1, dtype=np.int64)
    occ = (site_u64(seed, sites, np.zeros_like(sites), SALT_TASEP_INIT)
           >> np.uint64(63)).astype(np.uint8)
    occ_init = occ.copy()
    ppos = [int(s) for s in sites[occ == 1]]
    hpos = [int(s) for s in sites[occ == 0]]
    npart = len(ppos)
    nhole = len(hpos)
    hole_at = {s: h for h, s in enumerate(hpos)}
    occ = occ.tolist()
    enabled = sum(1 for s in ppos if s < khalf and occ[s + 1 + khalf] == 0)
    state = int(site_u64(seed, 0, 0, SALT_TASEP_CLOCK))
    log = []
    t = 0.0
    t_end = burn_in + pick_window + g_horizon
    status = 0
    while True:
        if enabled == 0:
            status = 2
            break
        state = (state + _GOLD_I) & _MASK
        t += -math.log(_unit_int(_mix_int(state))) / enabled
        if t > t_end:
            break
        if len(log) >= log_cap:
            status = 3
            break
        while True:
            state = (state + _GOLD_I) & _MASK
            k = int(_unit_int(_mix_int(state)) * npart)
            if k >= npart:
                k = npart - 1
            s = ppos[k]
            if s < khalf and occ[s + 1 + khalf] == 0:
                break
        h = hole_at.pop(s + 1)
        occ[s + khalf] = 0
        occ[s + 1 + khalf] = 1
        ppos[k] = s + 1
        hpos[h] = s
        hole_at[s] = h
        enabled -= 1
        if s + 1 < khalf and occ[s + 2 + khalf] == 0:
            enabled += 1
        if s - 1 >= -khalf and occ[s - 1 + khalf] == 1:
            enabled += 1
        log.append((t, k, h, s))
    g = np.full((i_max + 1) * (j_max + 1), np.nan)
    gneg = np.full(3, np.nan)
    occ0 = np.zeros(nsites, np.uint8)
    if status != 0:
        return (status, -1.0, g.reshape(i_max + 1, j_max + 1), gneg, 0,
                occ0, -(2 * khalf), -(2 * khalf))
    refs = [e for e, (te, ke, he, se) in enumerate(log)
            if se == 0 and burn_in <= te <= burn_in + pick_window]
    if not refs:
        return (1, -1.0, g.reshape(i_max + 1, j_max + 1), gneg, 0,
                occ0, -(2 * khalf), -(2 * khalf))
    state = (state + _GOLD_I) & _MASK
    pick = int(_unit_int(_mix_int(state)) * len(refs))
    if pick >= len(refs):
        pick = len(refs) - 1
    e0 = refs[pick]
    t0, k0, h0, _ = log[e0]
    g[0] = 0.0
    for (te, ke, he, se) in log:
        i = he - h0
        j = k0 - ke
        dt = te - t0
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
    occ0[:] = occ_init
    for e in range(e0 + 1):
        s = log[e][3]
        occ0[s + khalf] = 0
        occ0[s + 1 + khalf] = 1
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


def tasep_density(seed, khalf, t_meas, bulk_halfwidth):
    sites = np.arange(-khalf, khalf + 1, dtype=np.int64)
    occ = (site_u64(seed, sites, np.zeros_like(sites), SALT_TASEP_INIT)
           >> np.uint64(63)).astype(np.uint8)
    ppos = [int(s) for s in sites[occ == 1]]
    npart = len(ppos)
    occ = occ.tolist()
    enabled = sum(1 for s in ppos if s < khalf and occ[s + 1 + khalf] == 0)
    state = int(site_u64(seed, 0, 0, SALT_TASEP_CLOCK))
    t = 0.0
    while True:
        if enabled == 0:
            break
        state = (state + _GOLD_I) & _MASK
        tn = t + (-math.log(_unit_int(_mix_int(state))) / enabled)
        if tn >= t_meas:
            break
        t = tn
        while True:
            state = (state + _GOLD_I) & _MASK
            k = int(_unit_int(_mix_int(state)) * npart)
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
    khw = bulk_halfwidth
    return int(sum(occ[s + khalf] for s in range(-khw, khw + 1)))
