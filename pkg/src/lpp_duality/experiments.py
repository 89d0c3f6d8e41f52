"""Monte Carlo orchestration and statistics.

Every experiment is a set of addressed replicates: replicate k draws its
seed from (master_seed, experiment tag, k), so results are independent of
worker count and merge order.  Statistical gates are distribution-free
(DKW bands at 99%) or 3-sigma normal bands, fixed here, not tuned per run.
"""

from __future__ import annotations

import math
import multiprocessing as mp
from dataclasses import dataclass, field

import numpy as np

from . import rng
from .backend import kernels
from .coalescence import (DEFAULT_CAP_FACTOR, DEFAULT_N0_FACTOR,
                          stable_meet_seeded)
from .errors import DomainError, ResourceError
from .lpp import exit_interval_count_seeded, evolve_mass, mass_field_iid
from .tasep import EDGE_BUFFER, LOG_CAP

DKW_ALPHA = 0.01


def dkw_radius(n: int, alpha: float = DKW_ALPHA) -> float:
    """Uniform ECDF confidence radius: sqrt(ln(2/alpha) / (2n))."""
    if n <= 0:
        raise DomainError("need at least one sample")
    return math.sqrt(math.log(2.0 / alpha) / (2.0 * n))


def two_sample_threshold(n1: int, n2: int, alpha: float = DKW_ALPHA) -> float:
    """KS acceptance threshold for two independent samples."""
    return math.sqrt(math.log(2.0 / alpha) / 2.0) * math.sqrt(1.0 / n1 + 1.0 / n2)


@dataclass(frozen=True)
class EmpiricalDistribution:
    """Sorted sample set with right-continuous ECDF and KS/DKW helpers."""

    samples: np.ndarray

    @classmethod
    def from_samples(cls, values) -> "EmpiricalDistribution":
        arr = np.sort(np.asarray(values, dtype=np.float64))
        if arr.size == 0:
            raise DomainError("empty sample set")
        if np.any(np.isnan(arr)):
            raise DomainError("NaN in sample set")
        return cls(samples=arr)

    @property
    def n(self) -> int:
        return int(self.samples.size)

    def ecdf(self, s) -> np.ndarray | float:
        pos = np.searchsorted(self.samples, s, side="right") / self.n
        return pos if np.ndim(s) else float(pos)

    def survival(self, s):
        return 1.0 - self.ecdf(s)

    def dkw99(self) -> float:
        return dkw_radius(self.n)

    def ks_vs_cdf(self, cdf) -> float:
        """sup |ECDF - F| against a callable CDF."""
        f = np.asarray(cdf(self.samples), dtype=np.float64)
        hi = np.arange(1, self.n + 1) / self.n
        lo = np.arange(0, self.n) / self.n
        return float(max(np.max(hi - f), np.max(f - lo)))


def two_sample_ks(a: EmpiricalDistribution, b: EmpiricalDistribution) -> float:
    grid = np.concatenate([a.samples, b.samples])
    return float(np.max(np.abs(a.ecdf(grid) - b.ecdf(grid))))


def exp_cdf(rate: float):
    return lambda x: 1.0 - np.exp(-rate * np.asarray(x, dtype=np.float64))


@dataclass(frozen=True)
class ReplicateSet:
    """Columnar per-replicate results addressed by replicate index."""

    descriptor: dict
    columns: tuple
    index: np.ndarray
    values: np.ndarray

    def column(self, name: str) -> np.ndarray:
        return self.values[:, self.columns.index(name)]

    @property
    def n(self) -> int:
        return int(self.index.size)


def merge(a: ReplicateSet, b: ReplicateSet) -> ReplicateSet:
    """Order-independent union of two runs of the same experiment."""
    if a.descriptor != b.descriptor:
        raise DomainError(f"descriptor mismatch: {a.descriptor} vs {b.descriptor}")
    if a.columns != b.columns:
        raise DomainError("column mismatch")
    index = np.concatenate([a.index, b.index])
    values = np.concatenate([a.values, b.values], axis=0)
    order = np.argsort(index, kind="stable")
    index = index[order]
    if np.any(np.diff(index) == 0):
        raise DomainError("overlapping replicate indices")
    return ReplicateSet(descriptor=a.descriptor, columns=a.columns,
                        index=index, values=values[order])


def _map(worker, argses, workers: int):
    if workers <= 1:
        return [worker(a) for a in argses]
    ctx = mp.get_context("fork")
    chunk = max(1, len(argses) // (workers * 8))
    with ctx.Pool(workers) as pool:
        return pool.map(worker, argses, chunksize=chunk)


def _replicate_run(tag: str, master_seed: int, k0: int, s: int, worker,
                   params: tuple, columns: tuple, workers: int,
                   descriptor: dict) -> ReplicateSet:
    ks = range(k0, k0 + s)
    argses = [(rng.replicate_seed(master_seed, tag, k),) + params for k in ks]
    rows = _map(worker, argses, workers)
    return ReplicateSet(descriptor=descriptor, columns=columns,
                        index=np.asarray(ks, dtype=np.int64),
                        values=np.asarray(rows, dtype=np.float64))


# ---------------------------------------------------------------------------
# per-replicate workers (module level so worker pools can pickle them)

def _w_coalescence(args):
    seed, m, n0, cap = args
    c, n_used, ok = stable_meet_seeded(seed, 0, (m, 0), (0, m), n0, cap, 1)
    return (float(c[1]), float(c[0]), 1.0 if ok else 0.0, float(n_used))


def meet_margin(t_max: int) -> int:
    """Transversal-fluctuation margin for the stationary meet sampler."""
    return int(math.ceil(10.0 * t_max ** (2.0 / 3.0))) + 32


def _w_stat_meet(args):
    seed, m, t_max = args
    d = t_max + meet_margin(t_max)
    t, ok = kernels().stationary_meet(np.uint64(seed), d, m, t_max)
    return (float(t), 1.0 if ok else 0.0)


def _w_exit_count(args):
    seed, n, m, x_cap = args
    try:
        count = exit_interval_count_seeded(seed, n, m, x_cap)
    except ResourceError:
        return (math.nan, 0.0)
    return (float(count), 1.0)


def _w_exit_diag(args):
    seed, n = args
    z = kernels().boundary_exit_single(np.uint64(seed), n, n)
    return (float(z),)


def _w_lbar_diag(args):
    seed, n = args
    return (float(kernels().boundary_value(np.uint64(seed), n, n)),)


def _w_row_increments(args):
    seed, x_max, n = args
    row = kernels().boundary_row(np.uint64(seed), x_max, n)
    return tuple(np.diff(np.asarray(row)))


def _w_bdown(args):
    seed, zx, zy, n0, cap = args
    c, _, ok = stable_meet_seeded(seed, 0, (0, 0), (zx, zy), n0, cap, -1)
    if not ok:
        return (math.nan, 0.0)
    k = kernels()
    s = np.uint64(seed)
    ly = k.rect_l_seeded(s, 0, c[0], c[1], zx, zy, 0, 0, 1)
    lx = k.rect_l_seeded(s, 0, c[0], c[1], 0, 0, 0, 0, 1)
    return (float(ly - lx), 1.0)


def _w_pathwise(args):
    seed, m, n, window, n0 = args
    k = kernels()
    s = np.uint64(seed)
    # double the far target until the reported event pair repeats
    prev = None
    t_last = math.nan
    nf = n0
    stable = False
    while nf <= 8 * n0:
        lhs, rhs, t, _, err, _ = k.tree_event(s, m, n, window, nf)
        if err != 0:
            prev = None
        else:
            cur = (int(lhs), int(rhs))
            if prev is not None and cur == prev:
                stable = True
                t_last = float(t)
                break
            prev = cur
        t_last = float(t)
        nf *= 2
    lhs_v = float(prev[0]) if prev is not None else 0.0
    rhs_v = float(prev[1]) if prev is not None else 0.0
    return (lhs_v, rhs_v, 1.0 if stable else 0.0, t_last)


def _w_tasep(args):
    seed, k_half, i_max, j_max, burn_in, pick_window, g_horizon = args
    out = kernels().tasep_run(np.uint64(seed), k_half, i_max, j_max, burn_in,
                              pick_window, g_horizon, EDGE_BUFFER, LOG_CAP)
    status, _, g, gneg, valid, _, _, _ = out
    ok = 1.0 if (status == 0 and valid == 1) else 0.0
    return tuple(np.asarray(g, dtype=np.float64).ravel()) + tuple(gneg) + (ok,)


def _w_tasep_density(args):
    seed, k_half, t_meas, bulk_half = args
    count = kernels().tasep_density(np.uint64(seed), k_half, t_meas, bulk_half)
    return (float(count),)


def _w_massfield(args):
    seed, rho, nsteps, sites = args
    k0 = 8 * nsteps
    lo = -4 * k0 - 1
    initial = mass_field_iid(rho, (lo, sites), seed)
    out = evolve_mass(initial, nsteps, window=(1, sites),
                      interior_seed=rng.derive_seed(seed, 1), max_doublings=2)
    return tuple(out.masses)


# ---------------------------------------------------------------------------
# estimators

@dataclass(frozen=True)
class DualityEstimate:
    m: int
    n: int
    samples_lhs: int
    samples_rhs: int
    p_lhs: float
    p_rhs: float
    se_lhs: float
    se_rhs: float
    z: float
    excluded_lhs: int
    excluded_rhs: int
    flagged: bool


def estimate_duality(m: int, n: int, s: int, master_seed: int,
                     workers: int = 1) -> DualityEstimate:
    """Compare P(T_m < n) with P(no exit in [-m, m] at height n).

    The two sides use independent seeds and different functionals; the
    theorem being checked equates the probabilities, not the samples.  The
    meet-height law on the left is sampled through the stationary-tree
    representation, which is exact in law and free of the far-target bias
    that a truncated coalescence carries.
    """
    if not (isinstance(m, int) and isinstance(n, int)) or not 1 <= m < n:
        raise DomainError(f"need integers 1 <= m < n, got m={m}, n={n}")
    if s < 100:
        raise DomainError("need at least 100 replicates per side")
    lhs = _replicate_run(f"duality/{m}/{n}/T", master_seed, 0, s,
                         _w_stat_meet, (m, n),
                         ("t", "ok"), workers,
                         {"experiment": "duality.lhs", "m": m, "n": n})
    rhs = _replicate_run(f"duality/{m}/{n}/Z", master_seed, 0, s,
                         _w_exit_count, (n, m, None),
                         ("count", "ok"), workers,
                         {"experiment": "duality.rhs", "m": m, "n": n})
    good_l = lhs.column("ok") == 1.0
    good_r = rhs.column("ok") == 1.0
    t = lhs.column("t")[good_l]
    counts = rhs.column("count")[good_r]
    n_l, n_r = t.size, counts.size
    p_l = float(np.mean(t < n))
    p_r = float(np.mean(counts == 0))
    se_l = math.sqrt(max(p_l * (1 - p_l), 1e-12) / n_l)
    se_r = math.sqrt(max(p_r * (1 - p_r), 1e-12) / n_r)
    z = abs(p_l - p_r) / math.sqrt(se_l ** 2 + se_r ** 2)
    excl_l = s - n_l
    excl_r = s - n_r
    return DualityEstimate(m=m, n=n, samples_lhs=n_l, samples_rhs=n_r,
                           p_lhs=p_l, p_rhs=p_r, se_lhs=se_l, se_rhs=se_r,
                           z=z, excluded_lhs=excl_l, excluded_rhs=excl_r,
                           flagged=(excl_l > 0.01 * s or excl_r > 0.01 * s))


def coalescence_scale(m: int) -> float:
    return 2.0 ** -2.5 * m ** 1.5


@dataclass(frozen=True)
class GCurve:
    m: int
    r_grid: tuple
    g_hat: tuple
    dkw: float
    n_samples: int
    n_excluded: int
    t_min: float
    r_max: float
    censored: int
    rescaled: EmpiricalDistribution


def sample_coalescence_times(m: int, s: int, master_seed: int,
                             workers: int = 1, n0: int | None = None,
                             cap: int | None = None,
                             tag: str | None = None) -> ReplicateSet:
    """Meet records via the far-target doubling protocol (full points)."""
    n0 = DEFAULT_N0_FACTOR * m if n0 is None else n0
    cap = DEFAULT_CAP_FACTOR * m if cap is None else cap
    return _replicate_run(tag or f"gcurve/{m}/T", master_seed, 0, s,
                          _w_coalescence, (m, n0, cap),
                          ("t", "c1", "ok", "n_used"), workers,
                          {"experiment": "coalescence", "m": m})


def sample_meet_heights(m: int, s: int, master_seed: int, t_max: int,
                        workers: int = 1, tag: str | None = None) -> ReplicateSet:
    """Meet heights through the stationary-tree representation.

    Exact in law; heights of at least t_max come back as the sentinel value
    t_max (a censored observation, still exact for any threshold below it).
    """
    return _replicate_run(tag or f"gcurve/{m}/{t_max}/T", master_seed, 0, s,
                          _w_stat_meet, (m, t_max), ("t", "ok"), workers,
                          {"experiment": "meet_heights", "m": m,
                           "t_max": t_max})


def estimate_g(r_grid, m: int, s: int, master_seed: int, workers: int = 1,
               reps: ReplicateSet | None = None,
               r_max: float = 16.0) -> GCurve:
    """Survival estimates of the rescaled meet height on a grid.

    Heights are resolved exactly up to r_max scale units; the mass beyond
    sits in an atom at r_max (censored count), which leaves every Ĝ(r)
    with r < r_max exact.
    """
    if m < 16:
        raise DomainError("m must be >= 16 for the rescaled curve")
    if max(r_grid, default=0.0) >= r_max:
        raise DomainError(f"r grid must stay below r_max={r_max}")
    scale = coalescence_scale(m)
    if reps is None:
        t_max = int(math.ceil(r_max * scale))
        reps = sample_meet_heights(m, s, master_seed, t_max, workers)
    good = reps.column("ok") == 1.0
    t = reps.column("t")[good]
    t_max = reps.descriptor.get("t_max")
    censored = int(np.sum(t >= t_max)) if t_max is not None else 0
    r_samples = t / scale
    if t_max is not None:
        # censored heights sit exactly on the atom at r_max, so two curves
        # with different t_max grids stay comparable
        r_samples = np.where(t >= t_max, r_max, r_samples)
    rescaled = EmpiricalDistribution.from_samples(r_samples)
    g_hat = tuple(float(np.mean(rescaled.samples > r)) for r in r_grid)
    return GCurve(m=m, r_grid=tuple(float(r) for r in r_grid), g_hat=g_hat,
                  dkw=rescaled.dkw99(), n_samples=rescaled.n,
                  n_excluded=int(reps.n - t.size), t_min=float(np.min(t)),
                  r_max=float(r_max), censored=censored, rescaled=rescaled)


@dataclass(frozen=True)
class FCurve:
    n: int
    s_grid: tuple
    f_hat: tuple
    dkw: float
    n_samples: int
    scaled: EmpiricalDistribution


def exit_scale(n: int) -> float:
    return 2.0 ** (5.0 / 3.0) * n ** (2.0 / 3.0)


def sample_diag_exits(n: int, s: int, master_seed: int, workers: int = 1,
                      tag: str | None = None) -> ReplicateSet:
    return _replicate_run(tag or f"fcdf/{n}/Z", master_seed, 0, s,
                          _w_exit_diag, (n,), ("z",), workers,
                          {"experiment": "diag_exit", "n": n})


def estimate_f(s_grid, n: int, s: int, master_seed: int, workers: int = 1,
               reps: ReplicateSet | None = None) -> FCurve:
    """ECDF of the rescaled diagonal exit point on a grid."""
    if n < 64:
        raise DomainError("n must be >= 64 for the rescaled exit law")
    if reps is None:
        reps = sample_diag_exits(n, s, master_seed, workers)
    scaled = EmpiricalDistribution.from_samples(reps.column("z") / exit_scale(n))
    f_hat = tuple(float(scaled.ecdf(x)) for x in s_grid)
    return FCurve(n=n, s_grid=tuple(float(x) for x in s_grid), f_hat=f_hat,
                  dkw=scaled.dkw99(), n_samples=scaled.n, scaled=scaled)


@dataclass(frozen=True)
class LowtailCheck:
    r: float
    lhs: float
    rhs: float
    passed: bool


def check_lowtail(r_grid, m: int, n: int, s: int, master_seed: int,
                  workers: int = 1, gcurve: GCurve | None = None,
                  fcurve: FCurve | None = None) -> list[LowtailCheck]:
    """Per-r check of G(r) + slack >= F(r^{-2/3}) - F(-r^{-2/3})."""
    if gcurve is None:
        gcurve = estimate_g(r_grid, m, s, master_seed, workers)
    if fcurve is None:
        freps = sample_diag_exits(n, s, master_seed, workers,
                                  tag=f"lowtail/{n}/Z")
        fcurve = estimate_f((), n, s, master_seed, workers, reps=freps)
    out = []
    for r in r_grid:
        r = float(r)
        ghat = float(gcurve.rescaled.survival(r))
        u = r ** (-2.0 / 3.0)
        span = float(fcurve.scaled.ecdf(u) - fcurve.scaled.ecdf(-u))
        lhs = ghat + gcurve.dkw + 2.0 * fcurve.dkw
        out.append(LowtailCheck(r=r, lhs=lhs, rhs=span, passed=lhs >= span))
    return out


@dataclass(frozen=True)
class RescaledSample:
    """One replicate of the rescaled boundary profiles at size n."""

    n: int
    u_grid: tuple
    z_grid: tuple
    a_values: tuple
    b_values: tuple
    c_value: float
    u_n: float
    z_n: int
    arg_in_grid: bool
    max_ok: bool | None


def rescaled_profiles(n: int, u_grid, master_seed: int) -> RescaledSample:
    """Profiles A_n, B_n on a grid, the scalar C_n, and the rescaled argmax.

    Grid points snap to the integer exit lattice z = round(u * 2^{5/3}
    n^{2/3}).  At z = 0 the boundary mass term is zero and the passage time
    runs from the origin over the interior field; that surrogate term is
    reported but excluded from the exact-max cross-check, which only the
    nonzero-exit terms satisfy identically.
    """
    if n < 4:
        raise DomainError("n too small for rescaled profiles")
    scale_z = exit_scale(n)
    scale_t = 2.0 ** (4.0 / 3.0) * n ** (1.0 / 3.0)
    zs = []
    for u in u_grid:
        z = int(round(float(u) * scale_z))
        if abs(z) > n:
            raise DomainError(f"u={u} maps to |z|={abs(z)} > n")
        zs.append(z)
    seed = np.uint64(master_seed)
    k = kernels()
    m_arr, l_arr = k.variational_parts(seed, n, n)
    m_arr = np.asarray(m_arr)
    l_arr = np.asarray(l_arr)
    lbar_nn = float(k.boundary_value(seed, n, n))
    c_value = (lbar_nn - 4.0 * n) / scale_t
    terms = m_arr + l_arr
    z_star = int(np.argmax(terms)) - n
    a_vals = []
    b_vals = []
    for z in zs:
        if z == 0:
            l0 = float(k.rect_l_seeded(seed, 0, 0, 0, n, n, 0, 0, 1))
            a_vals.append((l0 - 4.0 * n) / scale_t)
            b_vals.append(0.0)
            continue
        mz = float(m_arr[n + z])
        lz = float(l_arr[n + z])
        b_vals.append((mz - 2.0 * z) / scale_t)
        a_vals.append((lz - (4.0 * n - 2.0 * z) + z * z / (4.0 * n)) / scale_t)
    arg_in = z_star in zs
    max_ok = None
    if arg_in:
        grid_terms = [m_arr[n + z] + l_arr[n + z] for z in zs if z != 0]
        best = (max(grid_terms) - 4.0 * n) / scale_t
        max_ok = bool(abs(best - c_value) <= 1e-9 * max(1.0, abs(c_value)))
    return RescaledSample(n=n, u_grid=tuple(z / scale_z for z in zs),
                          z_grid=tuple(zs), a_values=tuple(a_vals),
                          b_values=tuple(b_vals), c_value=c_value,
                          u_n=z_star / scale_z, z_n=z_star,
                          arg_in_grid=arg_in, max_ok=max_ok)


# ---------------------------------------------------------------------------
# samplers feeding the remaining gates

def sample_busemann_down(z, s: int, master_seed: int, workers: int = 1,
                         n0: int = 16, tag: str | None = None) -> ReplicateSet:
    zx, zy = z
    return _replicate_run(tag or f"burke/B{zx},{zy}", master_seed, 0, s,
                          _w_bdown, (zx, zy, n0, 64 * n0),
                          ("value", "ok"), workers,
                          {"experiment": "busemann_down", "z": [zx, zy]})


def sample_lbar_diag(n: int, s: int, master_seed: int,
                     workers: int = 1) -> ReplicateSet:
    return _replicate_run(f"lbar/{n}/diag", master_seed, 0, s,
                          _w_lbar_diag, (n,), ("value",), workers,
                          {"experiment": "lbar_diag", "n": n})


def sample_row_increments(n: int, x_max: int, s: int, master_seed: int,
                          workers: int = 1) -> ReplicateSet:
    cols = tuple(f"d{i}" for i in range(1, x_max + 1))
    return _replicate_run(f"lbar/{n}/increments", master_seed, 0, s,
                          _w_row_increments, (x_max, n), cols, workers,
                          {"experiment": "lbar_increments", "n": n,
                           "x_max": x_max})


def sample_pathwise(m: int, n: int, window: int, s: int, master_seed: int,
                    workers: int = 1, n0: int | None = None) -> ReplicateSet:
    if n0 is None:
        n0 = window
    return _replicate_run(f"noncross/{m}/{n}/{window}", master_seed, 0, s,
                          _w_pathwise, (m, n, window, n0),
                          ("lhs", "rhs", "stable", "t_star"), workers,
                          {"experiment": "pathwise", "m": m, "n": n,
                           "window": window})


def sample_tasep(k_half: int, i_max: int, j_max: int, horizon: float,
                 s: int, master_seed: int, workers: int = 1) -> ReplicateSet:
    cols = tuple(f"g{i}{j}" for i in range(i_max + 1) for j in range(j_max + 1))
    cols += ("gneg01", "gneg10", "gneg11", "ok")
    burn_in = k_half / 8.0
    pick_window = k_half / 4.0
    return _replicate_run(f"tasep/{k_half}/{i_max}/{j_max}", master_seed, 0, s,
                          _w_tasep,
                          (k_half, i_max, j_max, burn_in, pick_window,
                           horizon),
                          cols, workers,
                          {"experiment": "tasep", "k_half": k_half,
                           "i_max": i_max, "j_max": j_max})


def sample_lbar11(s: int, master_seed: int) -> np.ndarray:
    """Boundary passage times to (1, 1), vectorized over replicates."""
    seeds = np.array([rng.replicate_seed(master_seed, "tasep/lbar11", k)
                      for k in range(s)], dtype=np.uint64)
    wh = rng.exp_from_unit(rng.site_unit(seeds, np.ones(s, np.int64),
                                         np.zeros(s, np.int64), rng.SALT_AXIS), 0.5)
    wv = rng.exp_from_unit(rng.site_unit(seeds, np.zeros(s, np.int64),
                                         np.ones(s, np.int64), rng.SALT_AXIS), 0.5)
    wi = rng.exp_from_unit(rng.site_unit(seeds, np.ones(s, np.int64),
                                         np.ones(s, np.int64), rng.SALT_INTERIOR), 1.0)
    return np.maximum(wh, wv) + wi


def sample_tasep_density(k_half: int, s: int, master_seed: int,
                         workers: int = 1,
                         t_meas: float | None = None) -> ReplicateSet:
    if t_meas is None:
        t_meas = k_half / 4.0
    bulk_half = k_half // 2
    return _replicate_run(f"tasep/{k_half}/density", master_seed, 0, s,
                          _w_tasep_density, (k_half, t_meas, bulk_half),
                          ("count",), workers,
                          {"experiment": "tasep_density", "k_half": k_half,
                           "t_meas": t_meas, "bulk_half": bulk_half})


def sample_massfield(rho: float, nsteps: int, sites: int, s: int,
                     master_seed: int, workers: int = 1) -> ReplicateSet:
    cols = tuple(f"m{i}" for i in range(1, sites + 1))
    return _replicate_run(f"massfield/{rho}/{nsteps}/{sites}", master_seed,
                          0, s, _w_massfield, (rho, nsteps, sites), cols,
                          workers,
                          {"experiment": "massfield", "rho": rho,
                           "nsteps": nsteps, "sites": sites})


def warmup():
    """Compile/length-one pass over the hot kernels before forking workers."""
    k = kernels()
    s = np.uint64(1)
    k.weights_rect(s, 1, 0, 0, 2, 2)
    k.boundary_value(s, 2, 2)
    k.boundary_row(s, 2, 2)
    k.boundary_exits(s, 2, 2)
    k.variational_parts(s, 2, 2)
    k.coalesce_c(s, 0, 1, 0, 0, 1, 4, 0, 0, 1)
    k.rect_l_seeded(s, 0, 0, 0, 1, 1, 0, 0, 1)
    k.tree_event(s, 1, 2, 8, 8)
    k.crossing_single(s, 1, 1, 2, 4)
    k.massfield_evolve(s, -4, 8, 2, np.zeros(8), 4)
    k.tasep_run(s, 64, 0, 0, 1.0, 512.0, 0.5, EDGE_BUFFER, LOG_CAP)
    k.tasep_density(s, 64, 0.5, 8)
    w = k.weights_rect(s, 0, 0, 0, 3, 3)
    k.lpp_grid(w)
    k.lpp_pred(w)
    k.target_steps(s, 0, 3, 0, 0, 1)
