"""Seedable exponential environments on integer rectangles.

Two kinds: "interior" puts i.i.d. Exp(1) weight on every site; "boundary"
is the quadrant model with zero weight at the origin, i.i.d. Exp(1/2) on
the positive axes and i.i.d. Exp(1) strictly inside.  Weights are a pure
function of (master_seed, kind, site), so any sub-window regenerates
bit-identically and generation order cannot matter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import rng
from .backend import kernels
from .errors import DomainError, ResourceError

KIND_TAGS = {"interior": 0, "boundary": 1}

# Largest field materialized eagerly; bigger regions must stream rows.
MATERIALIZE_CELL_CAP = 1 << 26


@dataclass(frozen=True)
class Region:
    """Inclusive lattice rectangle [x_min, x_max] x [y_min, y_max]."""

    x_min: int
    y_min: int
    x_max: int
    y_max: int

    def __post_init__(self):
        if self.x_min > self.x_max or self.y_min > self.y_max:
            raise DomainError(f"empty region {self}")
        if self.area > 2 ** 48:
            raise DomainError(f"region area {self.area} does not fit in address space")

    @property
    def nx(self) -> int:
        return self.x_max - self.x_min + 1

    @property
    def ny(self) -> int:
        return self.y_max - self.y_min + 1

    @property
    def area(self) -> int:
        return (self.x_max - self.x_min + 1) * (self.y_max - self.y_min + 1)

    def contains(self, x: int, y: int) -> bool:
        return self.x_min <= x <= self.x_max and self.y_min <= y <= self.y_max

    def contains_region(self, other: "Region") -> bool:
        return (self.x_min <= other.x_min and self.x_max >= other.x_max
                and self.y_min <= other.y_min and self.y_max >= other.y_max)

    def as_dict(self) -> dict:
        return {"x_min": self.x_min, "y_min": self.y_min,
                "x_max": self.x_max, "y_max": self.y_max}


@dataclass(frozen=True)
class RngStream:
    """Addressable child stream of a master seed."""

    master_seed: int
    stream_id: int

    @property
    def seed(self) -> int:
        return rng.derive_seed(self.master_seed, self.stream_id)


def sample_exp(rate: float, u: float) -> float:
    """Inverse-CDF exponential draw: -ln(u)/rate."""
    if not 0.0 < u < 1.0:
        raise DomainError(f"u={u} outside (0, 1)")
    if rate <= 0.0:
        raise DomainError(f"rate={rate} must be positive")
    return -math.log(u) / rate


class Environment:
    """Immutable weight field over a region, regenerable from its manifest.

    The dense field is materialized lazily on first access; all weights are
    pure functions of (master_seed, kind, site), so the field is just a
    cache, never state.
    """

    def __init__(self, region: Region, kind: str, master_seed: int):
        if kind not in KIND_TAGS:
            raise DomainError(f"unknown kind {kind!r}")
        self.region = region
        self.kind = kind
        self.master_seed = int(master_seed)
        self._weights = None

    @property
    def weights(self) -> np.ndarray:
        if self._weights is None:
            self._weights = _materialize(self.region, self.kind, self.master_seed)
            self._weights.setflags(write=False)
        return self._weights

    @property
    def kind_tag(self) -> int:
        return KIND_TAGS[self.kind]

    def weight_at(self, x: int, y: int) -> float:
        if not self.region.contains(x, y):
            raise DomainError(f"site ({x}, {y}) outside {self.region}")
        return float(self.weights[x - self.region.x_min, y - self.region.y_min])

    def subfield(self, region: Region) -> np.ndarray:
        if not self.region.contains_region(region):
            raise DomainError(f"{region} not inside {self.region}")
        i0 = region.x_min - self.region.x_min
        j0 = region.y_min - self.region.y_min
        return self.weights[i0:i0 + region.nx, j0:j0 + region.ny]

    def manifest(self) -> dict:
        return {"master_seed": self.master_seed, "kind": self.kind,
                "region": self.region.as_dict(),
                "generator_version": rng.GENERATOR_VERSION}

    def __repr__(self):
        return (f"Environment(kind={self.kind!r}, seed={self.master_seed}, "
                f"region={self.region})")


def _materialize(region: Region, kind: str, master_seed: int) -> np.ndarray:
    if region.area > MATERIALIZE_CELL_CAP:
        raise ResourceError(
            f"region of {region.area} cells exceeds the materialization cap "
            f"{MATERIALIZE_CELL_CAP}; generate rows on demand instead")
    return kernels().weights_rect(np.uint64(master_seed), KIND_TAGS[kind],
                                  region.x_min, region.y_min,
                                  region.nx, region.ny)


def gen_interior(region: Region, master_seed: int) -> Environment:
    """I.i.d. Exp(1) field on the region."""
    return Environment(region, "interior", master_seed)


def gen_boundary(region: Region, master_seed: int) -> Environment:
    """Quadrant field: zero origin, Exp(1/2) axes, Exp(1) interior."""
    if region.x_min != 0 or region.y_min != 0:
        raise DomainError(
            f"boundary region must be anchored at the origin, got {region}")
    return Environment(region, "boundary", master_seed)


def from_manifest(manifest: dict) -> Environment:
    """Regenerate an environment from its manifest record."""
    if manifest.get("generator_version") != rng.GENERATOR_VERSION:
        raise DomainError(
            f"manifest generator_version {manifest.get('generator_version')!r} "
            f"does not match {rng.GENERATOR_VERSION!r}")
    region = Region(**manifest["region"])
    gen = gen_boundary if manifest["kind"] == "boundary" else gen_interior
    return gen(region, manifest["master_seed"])


def row_weights(master_seed: int, kind: str, y: int, x0: int, x1: int) -> np.ndarray:
    """One row of weights, for sweeps too large to hold the full field."""
    if x0 > x1:
        raise DomainError("x0 > x1")
    return kernels().weights_rect(np.uint64(master_seed), KIND_TAGS[kind],
                                  x0, y, x1 - x0 + 1, 1)[:, 0]
