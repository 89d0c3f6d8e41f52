"""Coalescence of diagonal semi-infinite geodesics, finite-target surrogate.

A semi-infinite geodesic in direction (1,1) is approximated by the geodesic
to the far target (N, N).  The meet point of two such geodesics is accepted
once it is identical at targets N and 2N; the doubling continues up to a
cap, and a record that never stabilizes says so instead of pretending.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .backend import kernels
from .env import Environment
from .errors import DomainError
from .lpp import LatticePath

DEFAULT_N0_FACTOR = 16
DEFAULT_CAP_FACTOR = 256


@dataclass(frozen=True)
class CoalescenceRecord:
    """Meet point of the geodesics from start_a and start_b toward (1,1)."""

    start_a: tuple
    start_b: tuple
    c: tuple
    t: int
    n_used: int
    stabilized: bool


def meet_seeded(seed: int, kind_tag: int, a, b, n: int, direction: int = 1):
    """Meet point of the geodesics from a and b toward a diagonal target.

    direction +1 targets f + (N, N) up-right of both starts, -1 targets
    f - (N, N) down-left of them; f is the common diagonal anchor.  The
    absolute target recedes along +-(1, 1) as N grows, which is all the
    stabilization protocol needs.
    """
    if direction > 0:
        f = min(a[0], b[0], a[1], b[1])
        fa = (a[0] - f, a[1] - f)
        fb = (b[0] - f, b[1] - f)
    else:
        f = max(a[0], b[0], a[1], b[1])
        fa = (f - a[0], f - a[1])
        fb = (f - b[0], f - b[1])
    if max(fa[0], fa[1], fb[0], fb[1]) >= n:
        raise DomainError(f"target scale {n} does not dominate starts {a}, {b}")
    cx, cy = kernels().coalesce_c(np.uint64(seed), kind_tag,
                                  fa[0], fa[1], fb[0], fb[1], n, f, f,
                                  1 if direction > 0 else -1)
    if direction > 0:
        return (f + int(cx), f + int(cy))
    return (f - int(cx), f - int(cy))


def stable_meet_seeded(seed: int, kind_tag: int, a, b, n0: int, cap: int,
                       direction: int = 1):
    """(c, n_used, stabilized): doubles the target until c(N) == c(2N)."""
    n = n0
    c_prev = meet_seeded(seed, kind_tag, a, b, n, direction)
    while 2 * n <= cap:
        n *= 2
        c_new = meet_seeded(seed, kind_tag, a, b, n, direction)
        if c_new == c_prev:
            return c_new, n, True
        c_prev = c_new
    return c_prev, n, False


def meet_at_target(env: Environment, a, b, n: int, direction: int = 1):
    return meet_seeded(env.master_seed, env.kind_tag, a, b, n, direction)


def stable_meet(env: Environment, a, b, n0: int, cap: int, direction: int = 1):
    return stable_meet_seeded(env.master_seed, env.kind_tag, a, b, n0, cap,
                              direction)


def coalescence_point(env: Environment, a, b, n0: int,
                      cap: int | None = None) -> CoalescenceRecord:
    """Stabilized up-right meet point of the geodesics from a and b."""
    a = tuple(a)
    b = tuple(b)
    if env.kind != "interior":
        raise DomainError("coalescence runs in interior environments")
    if n0 <= max(a[0], a[1], b[0], b[1]):
        raise DomainError(f"n0={n0} must exceed every start coordinate")
    if cap is None:
        cap = n0 * (DEFAULT_CAP_FACTOR // DEFAULT_N0_FACTOR)
    if a == b:
        return CoalescenceRecord(a, b, a, a[1], n0, True)
    c, n_used, ok = stable_meet(env, a, b, n0, cap, 1)
    return CoalescenceRecord(a, b, c, c[1], n_used, ok)


def coalescence_time(env: Environment, m: int, n0: int | None = None,
                     cap: int | None = None) -> CoalescenceRecord:
    """Record for the start pair (m, 0), (0, m); t is the second coordinate."""
    if m < 1:
        raise DomainError("m must be >= 1")
    if n0 is None:
        n0 = DEFAULT_N0_FACTOR * m
    if cap is None:
        cap = DEFAULT_CAP_FACTOR * m
    return coalescence_point(env, (m, 0), (0, m), n0, cap)


def semi_geodesic(env: Environment, x, n: int) -> LatticePath:
    """Finite surrogate of the diagonal semi-infinite geodesic: path to (N, N).

    Only stabilized prefixes are meaningful; the tail near the target is an
    artifact of the finite surrogate.
    """
    x = tuple(x)
    if x[0] > n or x[1] > n:
        raise DomainError(f"(N, N)=({n}, {n}) must dominate {x}")
    f = min(x[0], x[1], 0)
    nn = n - f
    steps = kernels().target_steps(np.uint64(env.master_seed), env.kind_tag,
                                   nn, f, f, 1)
    i, j = x[0] - f, x[1] - f
    pts = [x]
    while i < nn or j < nn:
        if steps[i, j] == 1:
            j += 1
        else:
            i += 1
        pts.append((f + i, f + j))
    return LatticePath(points=tuple(pts), orientation="up_right")
