import math
import pickle

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nomaidnc.channel import (NOISE_DBM_HZ, Group, PowerAllocation, Receiver, capacity_far,
                              capacity_near, dbm_to_watt, generate_topology, path_loss_db,
                              sample_hexagon, _inside_hexagon)
from nomaidnc.errors import ConfigError


def rx(gain=1.0, noise=1.0):
    return Receiver(0, 100.0, gain, noise, Group.NEAR)


@pytest.mark.parametrize("d_km, pl", [(1.0, 128.1), (0.1, 90.5)])
def test_path_loss(d_km, pl):
    assert path_loss_db(d_km) == pytest.approx(pl, abs=1e-12)


def test_capacity_examples():
    assert capacity_far(rx(), PowerAllocation(12, 3)) == pytest.approx(2.0)
    assert capacity_far(rx(), PowerAllocation(0, 3)) == 0.0
    assert capacity_far(rx(), PowerAllocation(3, 0)) == pytest.approx(2.0)
    assert capacity_near(rx(), PowerAllocation(0, 3)) == pytest.approx(2.0)
    assert capacity_near(rx(), PowerAllocation(5, 0)) == 0.0
    assert capacity_near(rx(gain=4.0), PowerAllocation(0, 3.75)) == pytest.approx(4.0)


pos = st.floats(1e-6, 1e6, allow_nan=False, allow_infinity=False)


@given(gain=pos, noise=pos, total=pos, frac=st.floats(0, 1))
@settings(max_examples=300)
def test_rate_splitting_identity(gain, noise, total, frac):
    p = PowerAllocation(total * (1 - frac), total * frac)
    r = Receiver(0, 1.0, gain, noise, Group.FAR)
    full = math.log1p(p.total * gain / noise) / math.log(2)
    assert capacity_far(r, p) + capacity_near(r, p) == pytest.approx(full, rel=1e-12, abs=1e-300)


@given(gain=pos, noise=pos, pf=pos, pn=pos)
@settings(max_examples=200)
def test_capacity_monotone(gain, noise, pf, pn):
    r = Receiver(0, 1.0, gain, noise, Group.FAR)
    h = 1e-3
    base = capacity_far(r, PowerAllocation(pf, pn))
    # non-strict here: extreme magnitudes can round a small step away
    assert capacity_far(r, PowerAllocation(pf * (1 + h), pn)) >= base
    assert capacity_far(r, PowerAllocation(pf, pn * (1 + h))) <= base
    assert capacity_near(r, PowerAllocation(pf, pn * (1 + h))) >= capacity_near(r, PowerAllocation(pf, pn))


def test_strict_monotonicity_at_moderate_values(rng):
    for _ in range(200):
        r = Receiver(0, 1.0, float(rng.uniform(0.1, 10)), float(rng.uniform(0.1, 10)), Group.FAR)
        pf, pn = rng.uniform(0.1, 10, 2)
        h = 1e-6
        c = capacity_far(r, PowerAllocation(pf, pn))
        assert capacity_far(r, PowerAllocation(pf + h, pn)) > c
        assert capacity_far(r, PowerAllocation(pf, pn + h)) < c
        assert capacity_near(r, PowerAllocation(pf, pn + h)) > capacity_near(r, PowerAllocation(pf, pn))


def test_argmin_invariance(rng):
    for _ in range(200):
        gains = rng.uniform(0.01, 10, 6)
        noises = rng.uniform(0.01, 10, 6)
        rs = [Receiver(m, 1.0, float(g), float(n), Group.FAR) for m, (g, n) in enumerate(zip(gains, noises))]
        p_max, p_near = 5.0, float(rng.uniform(0, 5))
        full = [math.log2(1 + p_max * r.gain / r.noise) for r in rs]
        far = [capacity_far(r, PowerAllocation(p_max - p_near, p_near)) for r in rs]
        assert int(np.argmin(full)) == int(np.argmin(far)) == int(np.argmin(gains / noises))


def test_topology_deterministic():
    a = generate_topology(20, 500.0, 42)
    b = generate_topology(20, 500.0, 42)
    assert a == b
    assert pickle.dumps(a) == pickle.dumps(b)
    assert generate_topology(20, 500.0, 43) != a


def test_topology_invariants():
    topo = generate_topology(200, 500.0, 7)
    noise = dbm_to_watt(NOISE_DBM_HZ)
    for r in topo.receivers:
        assert r.gain > 0 and r.noise == noise and 10.0 <= r.distance_m <= 500.0
        assert (r.group is Group.NEAR) == (r.distance_m < 250.0)
    assert [r.id for r in topo.receivers] == list(range(200))


def test_noise_density_value():
    assert dbm_to_watt(-174.0) == pytest.approx(10 ** (-20.4))


def test_hexagon_sampling_uniform(rng):
    pts = sample_hexagon(rng, 40000, 1.0, d_min=0.0)
    assert np.all(_inside_hexagon(pts[:, 0], pts[:, 1], 1.0))
    # area fraction inside the inscribed radius-1/2 disc: pi/4 / (3 sqrt3 / 2)
    frac = np.mean(np.hypot(pts[:, 0], pts[:, 1]) < 0.5)
    assert frac == pytest.approx((math.pi / 4) / (1.5 * math.sqrt(3)), abs=0.01)
    # mean is the centre
    assert np.abs(pts.mean(axis=0)).max() < 0.01


def test_gain_matches_path_loss_in_mean():
    topo = generate_topology(4000, 500.0, 3)
    d = np.array([r.distance_m for r in topo.receivers]) / 1000
    fades = topo.gains / 10 ** (-path_loss_db(d) / 10)
    assert fades.mean() == pytest.approx(1.0, abs=0.05)


@pytest.mark.parametrize("kw", [dict(num_receivers=0, cell_radius_m=500.0),
                                dict(num_receivers=5, cell_radius_m=0.0),
                                dict(num_receivers=5, cell_radius_m=-1.0)])
def test_topology_errors(kw):
    with pytest.raises(ConfigError):
        generate_topology(seed=1, **kw)


def test_power_allocation_validation():
    with pytest.raises(ConfigError):
        PowerAllocation(-1.0, 0.0)
    p = PowerAllocation.split(3.0, 1.0)
    assert (p.p_far, p.p_near) == (2.0, 1.0) and p.within(3.0)
