"""Busemann functions, the down-left geodesic tree, its dual, and crossings.

The down-left tree on a window is rooted at a far diagonal target
(-N, -N): the step out of each vertex is the argmax predecessor of the
forward sweep from that target, which coincides with the argmax of the
Busemann recursion.  The dual tree lives on the half-shifted lattice; the
dual vertex x* = x + (1/2, 1/2) is indexed here by the integer pair x, and
its outgoing up-right edge points along the same axis as the primal
down-left step out of x + (1, 1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .backend import kernels
from .coalescence import stable_meet
from .env import Environment, Region
from .errors import DomainError

DEFAULT_CAP_FACTOR = 16


@dataclass(frozen=True)
class BusemannValue:
    x: tuple
    y: tuple
    value: float
    c: tuple
    stabilized: bool


@dataclass(frozen=True)
class EdgeField:
    """One outgoing unit edge per vertex of a window.

    For orientation "down_left", step 0 points to x - e1 and 1 to x - e2;
    for "up_right", 0 points to x + e1 and 1 to x + e2.  stable_mask marks
    vertices whose step agreed between the two far-target scales.
    """

    window: Region
    step: np.ndarray
    orientation: str
    stable_mask: np.ndarray
    n_used: int

    def step_at(self, x: int, y: int) -> int:
        if not self.window.contains(x, y):
            raise DomainError(f"({x}, {y}) outside {self.window}")
        return int(self.step[x - self.window.x_min, y - self.window.y_min])


def _require_interior(env: Environment):
    if env.kind != "interior":
        raise DomainError("tree and Busemann operations run in interior "
                          "environments")


def _rect_time(env: Environment, s, t) -> float:
    """Start-exclusive passage time from s to t via on-demand weights."""
    if not (s[0] <= t[0] and s[1] <= t[1]):
        raise DomainError(f"{s} not componentwise <= {t}")
    return float(kernels().rect_l_seeded(
        np.uint64(env.master_seed), env.kind_tag,
        s[0], s[1], t[0], t[1], 0, 0, 1))


def busemann_up(env: Environment, x, y, n0: int,
                cap: int | None = None) -> BusemannValue:
    """L(y, c) - L(x, c) against the stabilized up-right meet point c."""
    _require_interior(env)
    x = tuple(x)
    y = tuple(y)
    if cap is None:
        cap = DEFAULT_CAP_FACTOR * n0
    if x == y:
        return BusemannValue(x, y, 0.0, x, True)
    c, n_used, ok = stable_meet(env, x, y, n0, cap, 1)
    value = _rect_time(env, y, c) - _rect_time(env, x, c)
    return BusemannValue(x, y, value, c, ok)


def busemann_down(env: Environment, x, y, n0: int,
                  cap: int | None = None) -> BusemannValue:
    """L(c, y) - L(c, x) against the stabilized down-left meet point c."""
    _require_interior(env)
    x = tuple(x)
    y = tuple(y)
    if cap is None:
        cap = DEFAULT_CAP_FACTOR * n0
    if x == y:
        return BusemannValue(x, y, 0.0, x, True)
    c, n_used, ok = stable_meet(env, x, y, n0, cap, -1)
    value = _rect_time(env, c, y) - _rect_time(env, c, x)
    return BusemannValue(x, y, value, c, ok)


def downleft_busemann_field(env: Environment, window: Region, n_far: int) -> np.ndarray:
    """Down-left Busemann surrogate on a window: F(v) = L(target, v).

    Differences of this field equal Busemann differences whenever the
    relevant meets are inside the target scale; use for recursion checks.
    """
    _require_interior(env)
    size_hi = max(window.x_max, window.y_max)
    k = kernels()
    w = k.weights_rect(np.uint64(env.master_seed), env.kind_tag,
                       -n_far, -n_far, size_hi + n_far + 1, size_hi + n_far + 1)
    grid = k.lpp_grid(w)
    i0 = window.x_min + n_far
    j0 = window.y_min + n_far
    return np.asarray(grid[i0:i0 + window.nx, j0:j0 + window.ny]).copy()


def downleft_tree(env: Environment, window: Region, n0: int) -> EdgeField:
    """Down-left step field on the window, rooted at (-N, -N), N = 2*n0.

    Steps are evaluated at target scales n0 and 2*n0; vertices whose step
    changed are flagged in stable_mask rather than trusted.
    """
    _require_interior(env)
    if window.x_min <= -n0 or window.y_min <= -n0:
        raise DomainError(f"window {window} reaches the far target {-n0}")
    size_hi = max(window.x_max, window.y_max)
    k = kernels()
    seed = np.uint64(env.master_seed)

    def steps_at(nf):
        pred = k.tree_pred(seed, size_hi, nf)
        i0 = window.x_min + nf
        j0 = window.y_min + nf
        return np.asarray(pred[i0:i0 + window.nx, j0:j0 + window.ny]).copy()

    s1 = steps_at(n0)
    s2 = steps_at(2 * n0)
    return EdgeField(window=window, step=s2, orientation="down_left",
                     stable_mask=(s1 == s2), n_used=2 * n0)


def dual_tree(tree: EdgeField) -> EdgeField:
    """Up-right dual of a down-left step field.

    The dual edge out of x* = x + (1/2, 1/2) (indexed by x) runs along the
    axis of the primal step out of x + (1, 1); it bisects exactly the
    primal edge that the tree did not take, so tree and dual never cross.
    """
    if tree.orientation != "down_left":
        raise DomainError("dual_tree wants a down-left tree")
    if tree.window.nx < 2 or tree.window.ny < 2:
        raise DomainError("window too small: the dual needs a one-vertex margin")
    win = Region(tree.window.x_min, tree.window.y_min,
                 tree.window.x_max - 1, tree.window.y_max - 1)
    return EdgeField(window=win, step=tree.step[1:, 1:].copy(),
                     orientation="up_right",
                     stable_mask=tree.stable_mask[1:, 1:].copy(),
                     n_used=tree.n_used)


@dataclass(frozen=True)
class CrossingPoint:
    z: int
    stabilized: bool


def crossing_point(env: Environment, x1: int, n: int, n0: int) -> CrossingPoint:
    """Signed first axis crossing of the down-left path from (x1, n).

    Positive z crosses at (z, 0), negative at (0, -z); the crossing is
    transversal (the previous vertex has both coordinates >= 1).  Evaluated
    at two target scales; disagreement is flagged, not resolved.
    """
    _require_interior(env)
    if x1 < 1 or n < 1:
        raise DomainError("crossing needs (x1, n) >= (1, 1)")
    k = kernels()
    seed = np.uint64(env.master_seed)
    win = max(x1, n)
    z1 = int(k.crossing_single(seed, x1, n, win, n0))
    z2 = int(k.crossing_single(seed, x1, n, win, 2 * n0))
    return CrossingPoint(z=z2, stabilized=z1 == z2)


@dataclass(frozen=True)
class PathwiseEvent:
    """One realization of the dual-coalescence / crossing-count event pair."""

    lhs: bool
    rhs: bool
    t_star: float
    crossings: tuple
    stabilized: bool
    window: int
    n_used: int


def pathwise_duality_event(env: Environment, m: int, n: int,
                           window: int = 256,
                           n0: int | None = None) -> PathwiseEvent:
    """Events {dual meet below n} and {no crossing in [-m, m]}, pathwise.

    Both indicators come from one down-left step field, so the pair tests
    the non-crossing identity sample by sample, not just in distribution.
    """
    _require_interior(env)
    if not 1 <= m < n:
        raise DomainError(f"need 1 <= m < n, got m={m}, n={n}")
    if window <= n:
        raise DomainError(f"window {window} must exceed n={n}")
    if n0 is None:
        n0 = window
    k = kernels()
    seed = np.uint64(env.master_seed)
    prev = None
    last = None
    nf = n0
    stable = False
    while nf <= 8 * n0:
        lhs, rhs, t, zf, err, _ = k.tree_event(seed, m, n, window, nf)
        last = (lhs, rhs, t, zf, nf)
        if err == 0:
            cur = (int(lhs), int(rhs))
            if prev is not None and cur == prev:
                stable = True
                break
            prev = cur
        else:
            prev = None
        nf *= 2
    lhs, rhs, t, zf, n_used = last
    crossings = tuple(int(z) for z in np.nonzero(zf)[0] - m)
    return PathwiseEvent(lhs=bool(lhs), rhs=bool(rhs), t_star=float(t),
                         crossings=crossings, stabilized=stable,
                         window=window, n_used=n_used)


def to_rle(field: EdgeField) -> dict:
    """Run-length encoding of the step bits with a JSON-ready header."""
    flat = field.step.astype(np.uint8).ravel()
    runs = []
    if flat.size:
        boundaries = np.flatnonzero(np.diff(flat)) + 1
        starts = np.concatenate(([0], boundaries))
        ends = np.concatenate((boundaries, [flat.size]))
        runs = [[int(e - s), int(flat[s])] for s, e in zip(starts, ends)]
    return {"window": field.window.as_dict(),
            "orientation": field.orientation,
            "shape": [field.window.nx, field.window.ny],
            "runs": runs}


def from_rle(payload: dict) -> EdgeField:
    nx, ny = payload["shape"]
    flat = np.empty(nx * ny, np.uint8)
    pos = 0
    for count, bit in payload["runs"]:
        flat[pos:pos + count] = bit
        pos += count
    if pos != nx * ny:
        raise DomainError("run lengths do not cover the window")
    return EdgeField(window=Region(**payload["window"]),
                     step=flat.reshape(nx, ny),
                     orientation=payload["orientation"],
                     stable_mask=np.ones((nx, ny), bool),
                     n_used=0)
