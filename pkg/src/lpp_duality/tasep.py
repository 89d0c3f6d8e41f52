"""Totally asymmetric exclusion at density 1/2 and interchange times.

Particles jump right at rate 1 under exclusion on a closed segment
[-K, K].  After a burn-in the clock is restarted at the first jump across
the (0, 1) bond; the particle landing on site 1 gets label 0, the hole
landing on site 0 gets label 0, particle labels grow leftward and hole
labels rightward.  G(i, j) is the time hole i and particle j swap; the
re-rooting is a surrogate for conditioning on a jump at the origin, so the
distributional gates downstream are deliberately loose.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import rng
from .backend import kernels
from .errors import DomainError, ResourceError

EDGE_BUFFER = 8
LOG_CAP = 1 << 16


@dataclass(frozen=True)
class TasepState:
    """Configuration snapshot plus the label anchors fixed at re-rooting."""

    k_half: int
    seed: int
    occupation: np.ndarray
    time: float
    rerooted: bool
    burn_in: float
    pick_window: float

    def density(self) -> float:
        return float(np.mean(self.occupation))


@dataclass(frozen=True)
class InterchangeTable:
    """Interchange times G(i, j) on a label rectangle, NaN where unseen."""

    values: np.ndarray
    reference_time: float
    valid: bool
    neg: dict

    def g(self, i: int, j: int) -> float:
        return float(self.values[i, j])


def init_stationary(k_half: int, seed: int) -> TasepState:
    """Product-measure start at density 1/2 on [-K, K]."""
    if k_half < 64:
        raise DomainError("k_half must be >= 64 to leave room for labels")
    sites = np.arange(-k_half, k_half + 1, dtype=np.int64)
    occ = (rng.site_u64(seed, sites, np.zeros_like(sites), rng.SALT_TASEP_INIT)
           >> np.uint64(63)).astype(np.uint8)
    return TasepState(k_half=k_half, seed=seed, occupation=occ, time=0.0,
                      rerooted=False, burn_in=k_half / 8.0,
                      pick_window=k_half / 4.0)


def _run(state: TasepState, i_max: int, j_max: int, g_horizon: float):
    return kernels().tasep_run(np.uint64(state.seed), state.k_half,
                               i_max, j_max, state.burn_in,
                               state.pick_window, g_horizon, EDGE_BUFFER,
                               LOG_CAP)


def run_until_reference_jump(state: TasepState) -> TasepState:
    """Advance to the reference jump across the (0, 1) bond.

    The jump is drawn uniformly among the bond crossings inside the pick
    window after burn-in; the clock is re-rooted there, the jumping
    particle sits on site 1 (label 0) and the fresh hole on site 0
    (label 0).
    """
    if state.rerooted:
        return state
    status, t0, _, _, _, occ0, p0_site, h0_site = _run(state, 0, 0, 0.0)
    if status != 0:
        raise ResourceError(
            f"no jump across (0, 1) in the pick window "
            f"[{state.burn_in}, {state.burn_in + state.pick_window}]; "
            f"retry with a new seed")
    assert p0_site == 1 and h0_site == 0
    return TasepState(k_half=state.k_half, seed=state.seed, occupation=occ0,
                      time=t0, rerooted=True, burn_in=state.burn_in,
                      pick_window=state.pick_window)


def interchange_times(state: TasepState, i_max: int, j_max: int,
                      horizon: float) -> InterchangeTable:
    """G(i, j) for 0 <= i <= i_max, 0 <= j <= j_max, within horizon of t0.

    neg holds the pre-re-root interchange times at label pairs (0, -1),
    (-1, 0) and (-1, -1), which land at negative times.  valid is False
    when a tracked label came within the edge buffer of the segment ends.
    """
    if i_max < 0 or j_max < 0 or horizon <= 0:
        raise DomainError("label bounds and horizon must be positive")
    if not state.rerooted:
        raise DomainError("interchange_times needs a re-rooted state")
    status, t0, g, gneg, valid, _, _, _ = _run(state, i_max, j_max, horizon)
    if status != 0:
        raise ResourceError("no re-root jump within horizon; retry with a new seed")
    neg = {(0, -1): float(gneg[0]), (-1, 0): float(gneg[1]),
           (-1, -1): float(gneg[2])}
    return InterchangeTable(values=np.asarray(g), reference_time=float(t0),
                            valid=bool(valid), neg=neg)


def bulk_density_at(seed: int, k_half: int, t_meas: float,
                    bulk_half: int | None = None):
    """(occupied, sites) in |site| <= bulk_half at time t_meas."""
    if bulk_half is None:
        bulk_half = k_half // 2
    count = kernels().tasep_density(np.uint64(seed), k_half, t_meas, bulk_half)
    return int(count), 2 * bulk_half + 1
