import numpy as np
import pytest

from lpp_duality import DomainError, Region, gen_interior
from lpp_duality import coalescence as co
from lpp_duality import lpp
from lpp_duality import rng


def first_common_vertex(path_a, path_b):
    """Oracle: earliest shared vertex in path order."""
    on_b = set(path_b.points)
    for p in path_a.points:
        if p in on_b:
            return p
    return None


def test_identical_starts():
    env = gen_interior(Region(0, 0, 4, 4), 5)
    rec = co.coalescence_point(env, (2, 1), (2, 1), n0=8)
    assert rec.c == (2, 1) and rec.t == 1 and rec.stabilized


def test_meet_matches_path_oracle():
    n = 48
    for k in range(25):
        seed = rng.replicate_seed(77, "co/oracle", k)
        env = gen_interior(Region(0, 0, n, n), seed)
        pa = lpp.geodesic(env, (3, 0), (n, n))
        pb = lpp.geodesic(env, (0, 3), (n, n))
        want = first_common_vertex(pa, pb)
        got = co.meet_at_target(env, (3, 0), (0, 3), n)
        assert got == want


def test_record_invariants():
    for k in range(40):
        env = gen_interior(Region(0, 0, 4, 4), rng.replicate_seed(9, "co/inv", k))
        rec = co.coalescence_time(env, m=6, n0=96, cap=768)
        assert rec.c[0] >= 6 and rec.c[1] >= 6
        assert rec.t == rec.c[1]
        assert rec.t >= 6


def test_stabilization_spot_check_4n():
    # The doubling certificate is not sound: the meet of two same-target
    # geodesics keeps drifting at a slow polynomial rate, so a certified
    # record sometimes moves again at 4N.  The rate is what we pin down
    # here (and why distribution-level estimates use the stationary-tree
    # sampler instead); most certified records must still survive.
    checked = 0
    survived = 0
    for k in range(40):
        env = gen_interior(Region(0, 0, 4, 4), rng.replicate_seed(8, "co/4n", k))
        rec = co.coalescence_point(env, (2, 0), (0, 2), n0=64, cap=1024)
        if rec.stabilized:
            c4 = co.meet_at_target(env, (2, 0), (0, 2), 2 * rec.n_used)
            checked += 1
            survived += c4 == rec.c
    assert checked >= 30
    assert survived / checked >= 0.6, f"4N survival {survived}/{checked}"


def test_semi_geodesic_shape_and_prefix():
    env = gen_interior(Region(0, 0, 4, 4), 1234)
    p = co.semi_geodesic(env, (2, 1), 64)
    assert p.points[0] == (2, 1) and p.points[-1] == (64, 64)
    assert p.orientation == "up_right"
    p_far = co.semi_geodesic(env, (2, 1), 128)
    # stabilized prefixes agree between the two targets for most replicates;
    # check agreement on the first few steps for this fixed seed
    assert p.points[:8] == p_far.points[:8]
    single = co.semi_geodesic(env, (16, 16), 16)
    assert single.points == ((16, 16),)


def test_domain_checks():
    env = gen_interior(Region(0, 0, 4, 4), 2)
    with pytest.raises(DomainError):
        co.coalescence_point(env, (4, 0), (0, 4), n0=4)
    with pytest.raises(DomainError):
        co.coalescence_time(env, m=0)
