"""Last-passage times, geodesics, the boundary model and its exit points.

Path weights are start-exclusive throughout: the weight of a path is the
sum over its vertices after the first one.  This makes L(x, x) = 0 and
concatenation along a common vertex additive with no double counting.
Backtracking prefers the vertical predecessor on exact float ties, so runs
are reproducible; ties have probability zero in the model.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import rng
from .backend import kernels
from .env import Environment, Region
from .errors import DomainError, ResourceError


@dataclass(frozen=True)
class LatticePath:
    """Unit-step lattice path, up-right or down-left oriented."""

    points: tuple
    orientation: str = "up_right"

    def __post_init__(self):
        steps = {(1, 0), (0, 1)} if self.orientation == "up_right" else {(-1, 0), (0, -1)}
        for (a, b) in zip(self.points, self.points[1:]):
            if (b[0] - a[0], b[1] - a[1]) not in steps:
                raise DomainError(f"non-{self.orientation} step {a} -> {b}")

    def __len__(self):
        return len(self.points)

    def weight(self, env: Environment) -> float:
        """Start-exclusive weight of the path in env."""
        return float(sum(env.weight_at(x, y) for (x, y) in self.points[1:]))


def _check_rect(env: Environment, x, y):
    if not (x[0] <= y[0] and x[1] <= y[1]):
        raise DomainError(f"{x} is not componentwise <= {y}")
    rect = Region(x[0], x[1], y[0], y[1])
    if not env.region.contains_region(rect):
        raise DomainError(f"rectangle {rect} outside environment {env.region}")
    return rect


def last_passage(env: Environment, x, y) -> float:
    """Maximal start-exclusive weight over up-right paths from x to y."""
    rect = _check_rect(env, x, y)
    w = env.subfield(rect)
    return float(kernels().lpp_grid(w)[rect.nx - 1, rect.ny - 1])


def geodesic(env: Environment, x, y) -> LatticePath:
    """The maximizing up-right path from x to y (vertical-tie rule)."""
    rect = _check_rect(env, x, y)
    w = env.subfield(rect)
    _, pred = kernels().lpp_pred(w)
    i, j = rect.nx - 1, rect.ny - 1
    rev = [(i, j)]
    while i > 0 or j > 0:
        if j > 0 and (i == 0 or pred[i, j] == 1):
            j -= 1
        else:
            i -= 1
        rev.append((i, j))
    pts = tuple((x[0] + i, x[1] + j) for (i, j) in reversed(rev))
    return LatticePath(points=pts, orientation="up_right")


def _require_boundary(env: Environment):
    if env.kind != "boundary":
        raise DomainError(f"boundary-model operation on kind={env.kind!r}")


def lbar(benv: Environment, x) -> float:
    """Boundary-model passage time from the origin to x."""
    _require_boundary(benv)
    if tuple(x) == (0, 0):
        return 0.0
    return last_passage(benv, (0, 0), tuple(x))


def exit_point(benv: Environment, x) -> int:
    """Signed exit of the boundary geodesic to x = (x1, n), both >= 1.

    Positive z exits at (z, 0), negative at (0, -z); never 0.  Works on the
    materialized field, so it backtracks whatever weights the environment
    actually carries.
    """
    _require_boundary(benv)
    x1, n = x
    if x1 < 1 or n < 1:
        raise DomainError(f"exit point needs x >= (1,1), got {x}")
    rect = _check_rect(benv, (0, 0), (x1, n))
    k = kernels()
    _, pred = k.lpp_pred(benv.subfield(rect))
    return int(k.exit_from_pred(pred, x1, n))


def variational_terms(benv: Environment, x):
    """Candidate exits z in [-n, x1] with mass and entry passage time.

    Returns (z_values, masses, entry_times); the z = 0 slot carries -inf
    entry time because the origin is never a last axis vertex.
    """
    _require_boundary(benv)
    x1, n = x
    if x1 < 1 or n < 1:
        raise DomainError(f"variational terms need x >= (1,1), got {x}")
    m_arr, l_arr = kernels().variational_parts(np.uint64(benv.master_seed), x1, n)
    z_values = np.arange(-n, x1 + 1, dtype=np.int64)
    return z_values, m_arr, l_arr


def variational_exit(benv: Environment, x) -> int:
    """Exit as the argmax of boundary mass plus interior passage time.

    Independent of the geodesic backtracking route; the two must agree.
    """
    z_values, m_arr, l_arr = variational_terms(benv, x)
    terms = m_arr + l_arr
    return int(z_values[int(np.argmax(terms))])


def variational_value(benv: Environment, x) -> float:
    """max_z {M(z) + L_z(x)}; equals lbar(x) exactly up to rounding."""
    _, m_arr, l_arr = variational_terms(benv, x)
    return float(np.max(m_arr + l_arr))


def exit_interval_count_seeded(master_seed: int, n: int, m: int,
                               x_cap: int | None = None) -> int:
    """Distinct exits in [-m, m] over endpoints (x, n), x >= 1, by seed.

    Exits are non-decreasing in x, so the scan stops at the first x whose
    exit passes +m; the window grows on demand up to x_cap.
    """
    if not 1 <= m < n:
        raise DomainError(f"need 1 <= m < n, got m={m}, n={n}")
    if x_cap is None:
        x_cap = max(16 * (n + m), 1024)
    k = kernels()
    seed = np.uint64(master_seed)
    x_max = max(2 * m, 64)
    while True:
        x_max = min(x_max, x_cap)
        zs = k.boundary_exits(seed, x_max, n)
        seen = set()
        stopped = False
        for x in range(1, x_max + 1):
            z = int(zs[x])
            if z > m:
                stopped = True
                break
            if -m <= z:
                seen.add(z)
        if stopped:
            return len(seen)
        if x_max >= x_cap:
            raise ResourceError(
                f"exit scan for (n={n}, m={m}) still unresolved at x={x_max}; "
                f"raise x_cap to continue")
        x_max *= 2


def exit_interval_count(benv: Environment, n: int, m: int,
                        x_cap: int | None = None) -> int:
    """exit_interval_count_seeded against a boundary environment."""
    _require_boundary(benv)
    return exit_interval_count_seeded(benv.master_seed, n, m, x_cap)


@dataclass(frozen=True)
class MassField:
    """Nonnegative masses on an inclusive integer window of sites."""

    window: tuple
    masses: np.ndarray
    rho: float

    def __post_init__(self):
        lo, hi = self.window
        if hi - lo + 1 != len(self.masses):
            raise DomainError("window and mass array disagree")
        if np.any(self.masses < 0):
            raise DomainError("masses must be nonnegative")

    def mass(self, a: int, b: int) -> float:
        """Mass of the interval (a, b]."""
        lo, hi = self.window
        if not (lo - 1 <= a <= b <= hi):
            raise DomainError(f"interval ({a}, {b}] outside window {self.window}")
        return float(np.sum(self.masses[a - lo + 1:b - lo + 1]))


def mass_field_iid(rho: float, window, master_seed: int) -> MassField:
    """I.i.d. Exp(rho) masses on the window."""
    if not 0.0 < rho < 1.0:
        raise DomainError(f"rho={rho} outside (0, 1)")
    lo, hi = window
    sites = np.arange(lo, hi + 1, dtype=np.int64)
    u = rng.site_unit(master_seed, sites, np.zeros_like(sites), rng.SALT_MASS)
    return MassField(window=(lo, hi), masses=rng.exp_from_unit(u, rho), rho=rho)


def evolve_mass(initial: MassField, nsteps: int, window=None,
                interior_seed: int = 0, k0: int | None = None,
                max_doublings: int = 4) -> MassField:
    """Advance the interacting mass field nsteps rows.

    The row-n cumulated field is max_{z <= x} {M(z) + L_z(x, n)} with the
    candidate range truncated at depth K left of the output window; K starts
    at 8*nsteps and doubles whenever the leftmost maximizer lands on the
    truncation edge.  The input window must cover the truncation range.
    """
    if nsteps < 0:
        raise DomainError("nsteps must be >= 0")
    in_lo, in_hi = initial.window
    if window is None:
        window = initial.window
    out_lo, out_hi = window
    if out_hi > in_hi or out_lo < in_lo:
        raise DomainError(f"output window {window} outside input {initial.window}")
    if nsteps == 0:
        lo_idx = out_lo - in_lo
        return MassField(window=(out_lo, out_hi),
                         masses=initial.masses[lo_idx:lo_idx + (out_hi - out_lo + 1)].copy(),
                         rho=initial.rho)
    k_depth = 8 * nsteps if k0 is None else int(k0)
    kmod = kernels()
    for _ in range(max_doublings + 1):
        z_lo = out_lo - k_depth
        if z_lo < in_lo:
            raise DomainError(
                f"truncation depth {k_depth} needs input masses down to site "
                f"{z_lo}, but the window starts at {in_lo}")
        width = out_hi - z_lo + 1
        # cumulated masses anchored at the truncation edge
        v0 = np.empty(width, np.float64)
        v0[0] = 0.0
        seg = initial.masses[z_lo - in_lo + 1:out_hi - in_lo + 1]
        v0[1:] = np.cumsum(seg)
        vrow, zstar = kmod.massfield_evolve(np.uint64(interior_seed), z_lo,
                                            width, nsteps, v0, out_lo - z_lo)
        if zstar > z_lo:
            lo_idx = out_lo - z_lo
            return MassField(window=(out_lo, out_hi),
                             masses=np.diff(vrow[lo_idx - 1:]), rho=initial.rho)
        k_depth *= 2
    raise ResourceError(
        f"mass-field maximizer pinned at the truncation edge after "
        f"{max_doublings} doublings (K={k_depth})")
