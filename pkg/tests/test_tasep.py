import math

import numpy as np
import pytest

from lpp_duality import DomainError
from lpp_duality import tasep
from lpp_duality.experiments import (EmpiricalDistribution, sample_lbar11,
                                     sample_tasep, two_sample_ks)


@pytest.fixture(scope="module")
def rerooted():
    state = tasep.init_stationary(128, seed=606)
    return tasep.run_until_reference_jump(state)


def test_init_density_and_determinism():
    a = tasep.init_stationary(128, seed=5)
    b = tasep.init_stationary(128, seed=5)
    assert np.array_equal(a.occupation, b.occupation)
    n = a.occupation.size
    assert abs(a.density() - 0.5) <= 5.0 * 0.5 / math.sqrt(n)
    assert not np.array_equal(a.occupation, tasep.init_stationary(128, 6).occupation)
    with pytest.raises(DomainError):
        tasep.init_stationary(32, seed=1)


def test_reference_jump_labels(rerooted):
    k = rerooted.k_half
    # particle 0 landed on site 1, hole 0 on site 0
    assert rerooted.occupation[k + 1] == 1
    assert rerooted.occupation[k] == 0
    assert rerooted.rerooted and rerooted.time >= rerooted.burn_in


def test_interchange_table(rerooted):
    table = tasep.interchange_times(rerooted, 2, 2, horizon=64.0)
    assert table.g(0, 0) == 0.0
    vals = table.values
    # order preservation forces coordinatewise monotonicity
    for i in range(3):
        for j in range(3):
            if i + 1 < 3 and not math.isnan(vals[i + 1, j]):
                assert vals[i, j] <= vals[i + 1, j]
            if j + 1 < 3 and not math.isnan(vals[i, j + 1]):
                assert vals[i, j] <= vals[i, j + 1]
    # past interchanges happened before the reference jump
    for (i, j), g in table.neg.items():
        if not math.isnan(g):
            assert g < 0.0


def test_interchange_requires_reroot():
    state = tasep.init_stationary(128, seed=607)
    with pytest.raises(DomainError):
        tasep.interchange_times(state, 1, 1, horizon=8.0)


def test_exclusion_invariant_small():
    # simulate and confirm the particle count never changes
    from lpp_duality.backend import kernels
    out = kernels().tasep_run(np.uint64(3), 64, 1, 1, 8.0, 16.0, 16.0, 8, 1 << 15)
    status, _, _, _, _, occ0, _, _ = out
    assert status == 0
    init = tasep.init_stationary(64, seed=3).occupation
    assert occ0.sum() == init.sum()


def test_g11_bridge_loose():
    s = 800
    reps = sample_tasep(128, 1, 1, 64.0, s, 909, workers=1)
    ok = reps.column("ok") == 1.0
    assert ok.mean() > 0.95
    g11 = reps.column("g11")[ok]
    g11 = g11[~np.isnan(g11)]
    lb = sample_lbar11(len(g11), 909)
    ks = two_sample_ks(EmpiricalDistribution.from_samples(g11),
                       EmpiricalDistribution.from_samples(lb))
    assert ks <= 0.08  # loose module-level gate; acceptance runs 5000


def test_reversibility_surrogate_loose():
    s = 800
    reps = sample_tasep(128, 1, 1, 64.0, s, 910, workers=1)
    ok = reps.column("ok") == 1.0
    for col, pos_col in [("gneg01", "g01"), ("gneg10", "g10"),
                         ("gneg11", "g11")]:
        neg = reps.column(col)[ok]
        pos = reps.column(pos_col)[ok]
        a = EmpiricalDistribution.from_samples(-neg[~np.isnan(neg)])
        b = EmpiricalDistribution.from_samples(pos[~np.isnan(pos)])
        assert two_sample_ks(a, b) <= 0.08
