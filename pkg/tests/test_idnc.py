import pytest
from hypothesis import given, strategies as st

from nomaidnc.channel import PowerAllocation
from nomaidnc.errors import ContractError
from nomaidnc.idnc import (ScheduleDecision, ScheduleLayer, SideInfo, targeted_receivers,
                           layering_gain, throughput, update_wants)


@pytest.fixture
def three():
    # receivers U1..U3 as ids 0..2, packets 1..3 (block of 4 packets)
    return SideInfo.from_sets([{1, 3}, {2}, {1, 2}], 4)


def test_targets_example(three):
    assert targeted_receivers({1, 2}, 4.0, [5, 5, 5], three, range(3)) == {0, 1}


def test_targets_rate_too_high(three):
    assert targeted_receivers({1, 2}, 5.5, [5, 5, 5], three, range(3)) == frozenset()


def test_targets_singleton_rate_zero(three):
    assert targeted_receivers({1}, 0.0, [0, 0, 0], three, range(3)) == {0, 2}


def test_targets_respects_eligible(three):
    assert targeted_receivers({1, 2}, 1.0, {0: 5.0, 1: 5.0}, three, [1]) == {1}


def test_update_wants():
    w = SideInfo.from_sets([{3, 6}, {5}], 8)
    new = update_wants(w, {5, 6}, {0})
    assert new.wants(0) == {3} and new.wants(1) == {5}
    assert w.wants(0) == {3, 6}  # input untouched
    assert update_wants(w, {5, 6}, set()) == w


def test_update_wants_rejects_non_decoder():
    w = SideInfo.from_sets([{5, 6}], 8)
    with pytest.raises(ContractError):
        update_wants(w, {5, 6}, {0})


@st.composite
def instances(draw):
    M = draw(st.integers(1, 6))
    L = draw(st.integers(1, 6))
    rows = [draw(st.sets(st.integers(0, L - 1))) for _ in range(M)]
    q = draw(st.sets(st.integers(0, L - 1), min_size=1))
    caps = [draw(st.floats(0, 10)) for _ in range(M)]
    return SideInfo.from_sets(rows, L), q, caps


@given(instances(), st.floats(0, 10), st.floats(0, 10))
def test_targets_monotone_in_rate(inst, r1, r2):
    w, q, caps = inst
    lo, hi = sorted((r1, r2))
    assert targeted_receivers(q, hi, caps, w, range(len(caps))) <= \
        targeted_receivers(q, lo, caps, w, range(len(caps)))


@given(instances(), st.floats(0, 10))
def test_update_removes_exactly_one(inst, rate):
    w, q, caps = inst
    tau = targeted_receivers(q, rate, caps, w, range(len(caps)))
    new = update_wants(w, q, tau)
    for m in range(len(caps)):
        removed = w.wants(m) - new.wants(m)
        assert len(removed) == (1 if m in tau else 0)
    # re-applying is a no-op only because nobody decodes again
    assert targeted_receivers(q, rate, caps, new, tau) == frozenset()
    assert update_wants(new, q, targeted_receivers(q, rate, caps, new, tau)) == new


def layer(n, r):
    return ScheduleLayer(frozenset({0}), r, frozenset(range(n)))


def test_throughput_examples():
    p = PowerAllocation(1, 1)
    assert throughput(ScheduleDecision(layer(3, 5), layer(2, 5), p)) == 25
    assert throughput(ScheduleDecision(layer(1, 8), layer(1, 7), p)) == 15
    assert throughput(ScheduleDecision(ScheduleLayer.absent(), ScheduleLayer.absent(), p)) == 0


def test_absent_layer_contract():
    with pytest.raises(ContractError):
        ScheduleLayer(None, 1.0, frozenset())


def test_layering_gain():
    assert layering_gain(3, 1.5, 3, 1.5) == 0
    assert layering_gain(2, 2.0, 3, 1.0) == 1.0
