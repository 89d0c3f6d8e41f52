import itertools

import numpy as np
import pytest

from lpp_duality import Region, gen_boundary, gen_interior
from lpp_duality.env import Environment


def brute_force_lpp(weights: np.ndarray):
    """Start-exclusive passage time by full path enumeration.

    weights[i, j] indexes x-offset i, y-offset j; paths go from (0, 0) to
    the opposite corner.
    """
    nx, ny = weights.shape
    steps = nx + ny - 2
    best = -np.inf
    best_path = None
    for right_at in itertools.combinations(range(steps), nx - 1):
        i = j = 0
        total = 0.0
        path = [(0, 0)]
        for s in range(steps):
            if s in right_at:
                i += 1
            else:
                j += 1
            total += weights[i, j]
            path.append((i, j))
        if total > best:
            best = total
            best_path = path
    if best_path is None:
        return 0.0, [(0, 0)]
    return best, best_path


def forced_env(weights: np.ndarray, kind: str = "interior",
               origin=(0, 0)) -> Environment:
    """Environment with an explicit weight field, for hand-built examples."""
    nx, ny = weights.shape
    region = Region(origin[0], origin[1], origin[0] + nx - 1,
                    origin[1] + ny - 1)
    env = Environment(region, kind, master_seed=0)
    w = np.asarray(weights, dtype=np.float64).copy()
    env._weights = w
    w.setflags(write=False)
    return env


@pytest.fixture(scope="session")
def small_interior():
    return gen_interior(Region(-8, -8, 40, 40), master_seed=101)


@pytest.fixture(scope="session")
def small_boundary():
    return gen_boundary(Region(0, 0, 48, 48), master_seed=202)
