"""Counter-based randomness.

Every lattice site owns a 64-bit hash of (master_seed, salt, x, y); the
uniform at a site is therefore a pure function of those four numbers.  This
is what makes environments regenerable window-by-window: enlarging a box or
generating it in parallel cannot change any weight.

The hash is three rounds of the splitmix64 finalizer, absorbing the salted
seed and both coordinates with distinct odd multipliers.  All arithmetic is
modulo 2**64 (numpy uint64 wraps, matching the numba kernels).
"""

from __future__ import annotations

import hashlib

import numpy as np

M1 = np.uint64(0xBF58476D1CE4E5B9)
M2 = np.uint64(0x94D049BB133111EB)
GOLD = np.uint64(0x9E3779B97F4A7C15)
SALTC = np.uint64(0x165667B19E3779F9)
CX = np.uint64(0xD6E8FEB86659FD93)
CY = np.uint64(0xC2B2AE3D27D4EB4F)

TWO_NEG53 = 2.0 ** -53

# Salt per role of a value; distinct salts give independent fields.
SALT_INTERIOR = 1
SALT_AXIS = 2
SALT_TASEP_INIT = 3
SALT_TASEP_CLOCK = 4
SALT_MASS = 5
SALT_STREAM = 6

GENERATOR_VERSION = "site-hash-v1"

_OLD_ERR = None


def mix64(z: np.ndarray | np.uint64) -> np.ndarray | np.uint64:
    """Splitmix64 finalizer on uint64 scalars or arrays (wrapping)."""
    z = np.uint64(z) if np.isscalar(z) or isinstance(z, int) else z
    with np.errstate(over="ignore"):
        z = z ^ (z >> np.uint64(30))
        z = z * M1
        z = z ^ (z >> np.uint64(27))
        z = z * M2
        return z ^ (z >> np.uint64(31))


def site_u64(seed, ix, iy, salt):
    """Hash of one site (vectorized over ix/iy)."""
    s = np.uint64(seed)
    ux = np.asarray(ix, dtype=np.int64).astype(np.uint64)
    uy = np.asarray(iy, dtype=np.int64).astype(np.uint64)
    with np.errstate(over="ignore"):
        h = mix64((s ^ (np.uint64(salt) * SALTC)) + GOLD)
        h = mix64(h ^ (ux * CX))
        h = mix64(h ^ (uy * CY))
    return h


def unit_from_u64(h):
    """Map a uint64 to the open interval (0, 1), 53-bit resolution."""
    return (np.asarray(h >> np.uint64(11), dtype=np.float64) + 0.5) * TWO_NEG53


def site_unit(seed, ix, iy, salt):
    return unit_from_u64(site_u64(seed, ix, iy, salt))


def exp_from_unit(u, rate: float):
    """Inverse-CDF exponential: -ln(u)/rate."""
    return -np.log(u) / rate


def tag_u64(tag: str) -> int:
    """Stable 64-bit digest of an experiment tag string."""
    return int.from_bytes(hashlib.blake2b(tag.encode(), digest_size=8).digest(), "big")


def derive_seed(master_seed: int, stream_id: int) -> int:
    """Child seed for a (master_seed, stream_id) pair; wraps to uint64."""
    with np.errstate(over="ignore"):
        h = mix64((np.uint64(master_seed) ^ (np.uint64(SALT_STREAM) * SALTC)) + GOLD)
        h = mix64(h ^ (np.uint64(stream_id & 0xFFFFFFFFFFFFFFFF) * CX))
    return int(h)


def replicate_seed(master_seed: int, tag: str, k: int) -> int:
    """Seed of replicate k of a named experiment.

    Replicates are addressed, not sequenced: the seed depends only on
    (master_seed, tag, k), so any worker layout or merge order reproduces
    the same draw for the same k.
    """
    return derive_seed(derive_seed(master_seed, tag_u64(tag)), k)
