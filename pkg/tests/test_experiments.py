import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lpp_duality import DomainError
from lpp_duality import experiments as ex
from lpp_duality import lpp, rng
from lpp_duality.backend import kernels


def test_dkw_radius_shrinks_like_sqrt():
    assert ex.dkw_radius(400) == pytest.approx(2 * ex.dkw_radius(1600), rel=1e-12)
    assert ex.dkw_radius(10_000) == pytest.approx(
        math.sqrt(math.log(200.0) / 20_000.0), rel=1e-12)


@given(st.lists(st.floats(-50, 50), min_size=1, max_size=200))
def test_ecdf_self_consistency(xs):
    dist = ex.EmpiricalDistribution.from_samples(xs)
    # degenerate DKW check: the ECDF is within its own radius of itself
    grid = np.asarray(xs)
    assert np.all(np.abs(dist.ecdf(grid) - dist.ecdf(grid)) <= dist.dkw99())
    assert dist.ecdf(np.max(grid)) == 1.0
    assert dist.ecdf(np.min(grid) - 1.0) == 0.0


def test_ecdf_right_continuity():
    dist = ex.EmpiricalDistribution.from_samples([1.0, 1.0, 2.0, 3.0])
    assert dist.ecdf(1.0) == 0.5
    assert dist.ecdf(1.0 - 1e-12) == 0.0
    assert dist.survival(2.0) == pytest.approx(0.25)


def test_ks_against_known_cdf():
    xs = np.linspace(0.01, 0.99, 99)
    dist = ex.EmpiricalDistribution.from_samples(xs)
    ks = dist.ks_vs_cdf(lambda v: np.clip(v, 0, 1))
    assert ks <= 0.011


def test_two_sample_ks_identical_is_zero():
    a = ex.EmpiricalDistribution.from_samples([1.0, 2.0, 5.0])
    assert ex.two_sample_ks(a, a) == 0.0
    b = ex.EmpiricalDistribution.from_samples([10.0, 11.0])
    assert ex.two_sample_ks(a, b) == 1.0


def _mk(descriptor, ks, vals):
    return ex.ReplicateSet(descriptor=descriptor, columns=("v",),
                           index=np.asarray(ks, dtype=np.int64),
                           values=np.asarray(vals, float).reshape(-1, 1))


def test_merge_identity_commutative_associative():
    d = {"experiment": "t"}
    a = _mk(d, [0, 1], [1.0, 2.0])
    b = _mk(d, [2, 3], [3.0, 4.0])
    c = _mk(d, [4], [5.0])
    ab = ex.merge(a, b)
    ba = ex.merge(b, a)
    assert np.array_equal(ab.index, ba.index)
    assert np.array_equal(ab.values, ba.values)
    abc1 = ex.merge(ex.merge(a, b), c)
    abc2 = ex.merge(a, ex.merge(b, c))
    assert np.array_equal(abc1.values, abc2.values)
    with pytest.raises(DomainError):
        ex.merge(a, _mk({"experiment": "other"}, [9], [1.0]))
    with pytest.raises(DomainError):
        ex.merge(a, _mk(d, [1], [1.0]))


def test_merged_halves_equal_full_run():
    tag = "duality/3/9/T"

    def run(k0, s):
        rows = [ex._w_stat_meet((rng.replicate_seed(42, tag, k), 3, 9))
                for k in range(k0, k0 + s)]
        return ex.ReplicateSet(descriptor={"e": "x"}, columns=("t", "ok"),
                               index=np.arange(k0, k0 + s),
                               values=np.asarray(rows))

    full = run(0, 40)
    merged = ex.merge(run(0, 20), run(20, 20))
    assert np.array_equal(full.values, merged.values)


def test_estimate_duality_validation():
    with pytest.raises(DomainError):
        ex.estimate_duality(8, 8, 200, 1)
    with pytest.raises(DomainError):
        ex.estimate_duality(4, 32, 0, 1)


def test_duality_small_grid():
    est = ex.estimate_duality(2, 8, 600, 90001, workers=1)
    assert est.z <= 4.0  # loose module gate; acceptance runs the full grid
    assert est.samples_lhs == 600 and est.samples_rhs == 600


def test_gcurve_properties():
    reps = ex.sample_coalescence_times(16, 150, 60001, workers=1)
    curve = ex.estimate_g((0.0, 0.2, 1.0, 4.0), 16, 150, 60001, reps=reps)
    assert curve.g_hat[0] == 1.0  # every meet is above the starts
    assert all(a >= b for a, b in zip(curve.g_hat, curve.g_hat[1:]))
    assert curve.t_min >= 16
    with pytest.raises(DomainError):
        ex.estimate_g((1.0,), 8, 100, 1)


def test_fcdf_median_and_tails():
    fc = ex.estimate_f((-10.0, 0.0, 10.0), 64, 800, 60002, workers=1)
    assert fc.f_hat[0] <= 0.01
    assert fc.f_hat[2] >= 0.99
    med = float(np.median(fc.scaled.samples))
    assert abs(med) <= 0.2


def test_lowtail_r_to_zero_is_trivial():
    checks = ex.check_lowtail((0.05,), 16, 64, 150, 60003, workers=1)
    assert checks[0].passed  # G(0.05) ~ 1 vs span ~ 1 with slack


def test_rescaled_profiles_identities():
    n = 64
    scale_z = ex.exit_scale(n)
    u_grid = [z / scale_z for z in range(-8, 9, 2)]
    seed = rng.replicate_seed(60004, "profiles", 0)
    samp = ex.rescaled_profiles(n, u_grid, seed)
    assert samp.z_grid == tuple(range(-8, 9, 2))
    scale_t = 2.0 ** (4.0 / 3.0) * n ** (1.0 / 3.0)
    # C_n dominates every nonzero-exit grid term
    for z, a, b, u in zip(samp.z_grid, samp.a_values, samp.b_values,
                          samp.u_grid):
        if z == 0:
            continue
        assert samp.c_value >= a + b - u * u - 1e-9
    # the argmax matches the backtracked exit point
    z_direct = kernels().boundary_exit_single(np.uint64(seed), n, n)
    assert samp.z_n == int(z_direct)
    assert samp.u_n == pytest.approx(samp.z_n / scale_z, rel=1e-12)
    if samp.arg_in_grid:
        assert samp.max_ok


def test_rescaled_profiles_exact_max_when_grid_hits_argmax():
    n = 64
    hits = 0
    for k in range(30):
        seed = rng.replicate_seed(60005, "profiles2", k)
        samp = ex.rescaled_profiles(n, (), seed)
        # re-run with the argmax included in the grid
        u_star = samp.u_n
        samp2 = ex.rescaled_profiles(n, (u_star,), seed)
        assert samp2.arg_in_grid
        assert samp2.max_ok
        hits += 1
    assert hits == 30
