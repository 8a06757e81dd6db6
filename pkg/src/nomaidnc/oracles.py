"""Exhaustive references and random small instances for cross-checking the searches.

Nothing here goes through graph construction or clique search: the (packet,
rate) enumeration works straight from the decodability predicate.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .channel import Group, PowerAllocation, Receiver, Topology
from .clique import Heuristic, exact_max_weight_clique, mwp_mwv_search, mwv_search, two_stage_schedule
from .graph import IdncGraph, build_graph
from .idnc import (ScheduleDecision, ScheduleLayer, SideInfo, layering_gain, targeted_receivers,
                   throughput, update_wants)
from .power import Bottleneck, bounds, feasibility, grid_oracle, ife_optimize, phi


def brute_force_layer(wants: SideInfo, capacities, eligible) -> tuple[float, frozenset | None, float]:
    """Best ``|targets| * rate`` over every non-empty packet subset and candidate rate."""
    eligible = sorted(eligible)
    caps = np.asarray(capacities, dtype=float)
    rates = np.unique(caps[eligible]) if eligible else np.array([])
    rates = rates[rates > 0]
    best = (0.0, None, 0.0)
    L = wants.num_packets
    for k in range(1, L + 1):
        for q in itertools.combinations(range(L), k):
            for r in rates.tolist():
                val = len(targeted_receivers(q, r, caps, wants, eligible)) * r
                if val > best[0]:
                    best = (val, frozenset(q), r)
    return best


def brute_force_max_clique_weight(g: IdncGraph) -> float:
    """Max clique weight by enumerating all vertex subsets (tiny graphs only)."""
    adj = g.dense_adjacency()
    n = len(g)
    best = 0.0
    for k in range(1, n + 1):
        for s in itertools.combinations(range(n), k):
            if all(adj[a, b] for a, b in itertools.combinations(s, 2)):
                best = max(best, float(g.weights[list(s)].sum()))
    return best


def random_wants(rng: np.random.Generator, M: int, L: int, mu: float | None = None) -> SideInfo:
    mu = rng.uniform(0.2, 0.8) if mu is None else mu
    return SideInfo(rng.random((M, L)) >= mu)


def random_idnc_graph(rng: np.random.Generator, max_M: int = 8, max_L: int = 8,
                      cap: int | None = None, max_tries: int = 1000):
    """Random IDNC graph from random Wants and capacities; optionally at most ``cap`` vertices."""
    for _ in range(max_tries):
        M = int(rng.integers(1, max_M + 1))
        L = int(rng.integers(1, max_L + 1))
        wants = random_wants(rng, M, L)
        caps = rng.uniform(0.2, 6.0, M)
        g = build_graph(wants, caps, range(M))
        if cap is None or len(g) <= cap:
            return g, wants, caps
    raise RuntimeError("could not draw a graph under the cap")


def random_small_topology(rng: np.random.Generator, M: int, p_max: float = 10.0,
                          r_min: float = 0.0) -> Topology:
    """Abstract cell with log-uniform SNRs and at least one near receiver."""
    gains = 10.0 ** rng.uniform(-1.0, 1.5, M)
    near = rng.random(M) < 0.5
    near[int(rng.integers(M))] = True
    receivers = tuple(
        Receiver(m, 100.0 if near[m] else 400.0, float(gains[m]), 1.0,
                 Group.NEAR if near[m] else Group.FAR)
        for m in range(M)
    )
    return Topology(receivers, p_max=p_max, r_min=r_min, cell_radius_m=500.0)


@dataclass
class DominanceStats:
    instances: int = 0
    violations: int = 0
    equal_mwv: int = 0
    equal_mwp: int = 0
    ratio_mwv: float = 0.0
    ratio_mwp: float = 0.0


def clique_dominance(n: int, seed: int, cap: int = 64) -> DominanceStats:
    rng = np.random.default_rng(seed)
    st = DominanceStats()
    r_mwv, r_mwp = [], []
    while st.instances < n:
        g, _, _ = random_idnc_graph(rng, max_M=6, max_L=6, cap=cap)
        if len(g) == 0:
            continue
        st.instances += 1
        w_ex = g.clique_weight(exact_max_weight_clique(g, cap=cap))
        w_v = g.clique_weight(mwv_search(g))
        w_p = g.clique_weight(mwp_mwv_search(g))
        tol = 1e-9 * max(w_ex, 1.0)
        st.violations += (w_ex < w_v - tol) + (w_ex < w_p - tol)
        st.equal_mwv += abs(w_ex - w_v) <= tol
        st.equal_mwp += abs(w_ex - w_p) <= tol
        r_mwv.append(w_v / w_ex)
        r_mwp.append(w_p / w_ex)
    st.ratio_mwv = float(np.mean(r_mwv))
    st.ratio_mwp = float(np.mean(r_mwp))
    return st


def two_stage_exactness(n: int, seed: int, max_M: int = 5, max_L: int = 6) -> list[str]:
    """Compare EXACT two-stage scheduling to stage-wise enumeration; return mismatch notes."""
    rng = np.random.default_rng(seed)
    bad = []
    for i in range(n):
        M = int(rng.integers(1, max_M + 1))
        L = int(rng.integers(1, max_L + 1))
        topo = random_small_topology(rng, M)
        wants = random_wants(rng, M, L)
        p = PowerAllocation.split(topo.p_max, rng.uniform(0.05, 0.6) * topo.p_max)
        far, near = two_stage_schedule(topo, wants, p, Heuristic.EXACT, oracle_cap=None)
        ref_far = brute_force_layer(wants, topo.far_capacities(p), topo.all_ids)[0]
        updated = wants if far.is_absent else update_wants(wants, far.packet, far.targets)
        ref_near = brute_force_layer(updated, topo.near_capacities(p), topo.near_ids)[0]
        if not math.isclose(far.throughput, ref_far, rel_tol=1e-12, abs_tol=1e-12):
            bad.append(f"instance {i}: far {far.throughput} vs {ref_far}")
        if not math.isclose(near.throughput, ref_near, rel_tol=1e-12, abs_tol=1e-12):
            bad.append(f"instance {i}: near {near.throughput} vs {ref_near}")
    return bad


def random_power_instance(rng: np.random.Generator, feasible_only: bool = True):
    while True:
        sizes = (int(rng.integers(0, 21)), int(rng.integers(0, 11)))
        b = Bottleneck(float(10.0 ** rng.uniform(-2, 1)), float(10.0 ** rng.uniform(-2, 1)))
        p_max = float(10.0 ** rng.uniform(-1, 2))
        r_min = float(rng.uniform(0.0, 2.0))
        if not feasible_only or feasibility(b, r_min, p_max):
            return sizes, b, p_max, r_min


@dataclass
class PowerStats:
    instances: int = 0
    value_ok: int = 0
    argument_ok: int = 0


def power_vs_grid(n: int, seed: int, steps: int = 10**6) -> PowerStats:
    rng = np.random.default_rng(seed)
    st = PowerStats()
    for _ in range(n):
        sizes, b, p_max, r_min = random_power_instance(rng)
        bnds = bounds(b, r_min, p_max)
        p = ife_optimize(sizes, b, bnds, p_max)
        q = grid_oracle(sizes, b, bnds, p_max, steps)
        st.instances += 1
        st.value_ok += phi(p, sizes, b, p_max) >= phi(q, sizes, b, p_max) - 1e-6
        st.argument_ok += abs(p - q) <= p_max * 1e-4
    return st


@dataclass
class GainCheck:
    noma: float
    ridnc: float
    gain: float
    far_targets_kept: bool


def single_layer_construction(topology: Topology, wants: SideInfo, p_near: float) -> GainCheck:
    """Reuse the best full-power layer as the far layer and add the best near layer on top.

    The far layer keeps the full-power packet and target set with its rate
    re-minimised at the split powers; ``noma`` is that two-layer throughput,
    ``ridnc`` the full-power optimum and ``gain`` the closed-form difference.
    """
    full = topology.full_power_capacities()
    everyone = topology.all_ids
    r_best, q_r, rate_r = brute_force_layer(wants, full, everyone)
    p = PowerAllocation.split(topology.p_max, p_near)
    far_caps, near_caps = topology.far_capacities(p), topology.near_capacities(p)
    if q_r is None:
        tau_r: frozenset = frozenset()
        far = ScheduleLayer.absent()
    else:
        tau_r = targeted_receivers(q_r, rate_r, full, wants, everyone)
        r_far = min(float(far_caps[m]) for m in tau_r)
        far = ScheduleLayer(q_r, r_far, targeted_receivers(q_r, r_far, far_caps, wants, everyone))
    updated = wants if far.is_absent else update_wants(wants, far.packet, far.targets)
    _, q_n, r_n = brute_force_layer(updated, near_caps, topology.near_ids)
    if q_n is None:
        near = ScheduleLayer.absent()
    else:
        near = ScheduleLayer(q_n, r_n, targeted_receivers(q_n, r_n, near_caps, updated, topology.near_ids))
    noma = throughput(ScheduleDecision(far, near, p))
    min_near_tau_r = min((float(near_caps[m]) for m in tau_r), default=0.0)
    gain = layering_gain(len(near.targets), near.rate, len(tau_r), min_near_tau_r)
    return GainCheck(noma, r_best, gain, far.targets == tau_r)
