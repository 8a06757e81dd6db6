"""The alternating-optimisation NOMA-IDNC scheduler and the comparison schemes."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .channel import PowerAllocation, Topology
from .clique import ORACLE_CAP, Heuristic, near_eligible, search, two_stage_schedule
from .graph import build_graph, clique_packet, clique_to_layer
from .idnc import (ScheduleDecision, ScheduleLayer, SideInfo, decoders, targeted_receivers,
                   throughput, update_wants)
from .power import bottlenecks, bounds, feasibility, ife_optimize


class Scheme(enum.Enum):
    NOMA_IDNC_MWV = "NOMA-IDNC-MWV"
    NOMA_IDNC_MWP_MWV = "NOMA-IDNC-MWP-MWV"
    R_IDNC_MWV = "R-IDNC-MWV"
    R_IDNC_MWP_MWV = "R-IDNC-MWP-MWV"
    IDNC_MWV = "IDNC-MWV"
    IDNC_MWP_MWV = "IDNC-MWP-MWV"
    RLNC = "RLNC"
    NOMA_RLNC = "NOMA-RLNC"

    @property
    def family(self) -> str:
        for suffix in ("-MWP-MWV", "-MWV"):
            if self.value.endswith(suffix):
                return self.value[: -len(suffix)]
        return self.value

    @property
    def heuristic(self) -> Heuristic | None:
        if self.value.endswith("MWP-MWV"):
            return Heuristic.MWP_MWV
        if self.value.endswith("MWV"):
            return Heuristic.MWV
        return None


ALL_SCHEMES = tuple(Scheme)


@dataclass(frozen=True)
class SchemeResult:
    scheme: Scheme
    throughput: float
    ao_iterations: int = 1
    decision: ScheduleDecision | None = None


@dataclass(frozen=True)
class SchemeParams:
    ao_tol: float = 1e-6
    max_ao_iter: int = 20
    init_beta: float = 0.2
    ftpa_alpha: float = 0.4
    strict_sic: bool = False
    oracle_cap: int | None = ORACLE_CAP


def _min_rate(caps: np.ndarray, ids) -> float:
    return float(min(caps[m] for m in ids))


def revalidate(topology: Topology, wants: SideInfo, far: ScheduleLayer, near: ScheduleLayer,
               p: PowerAllocation, strict_sic: bool = False) -> ScheduleDecision:
    """Re-fit both layers to new powers.

    Each layer keeps its packet; its rate drops (or rises) to the smallest
    capacity among its previous targets, and the targets are recomputed from
    the decodability predicate at that rate.
    """
    if far.is_absent:
        new_far = far
        updated = wants
    else:
        caps_f = topology.far_capacities(p)
        rate = _min_rate(caps_f, far.targets)
        tau = targeted_receivers(far.packet, rate, caps_f, wants, topology.all_ids)
        new_far = ScheduleLayer(far.packet, rate, tau) if tau else ScheduleLayer.absent()
        updated = update_wants(wants, new_far.packet, new_far.targets) if tau else wants
    if near.is_absent or p.p_near <= 0:
        new_near = ScheduleLayer.absent()
    else:
        caps_n = topology.near_capacities(p)
        rate = _min_rate(caps_n, near.targets)
        eligible = near_eligible(topology, new_far, p, strict_sic)
        tau = targeted_receivers(near.packet, rate, caps_n, updated, eligible)
        new_near = ScheduleLayer(near.packet, rate, tau) if tau else ScheduleLayer.absent()
    return ScheduleDecision(new_far, new_near, p)


def _single_layer(topology: Topology, wants: SideInfo, heuristic, oracle_cap) -> ScheduleDecision:
    caps = topology.full_power_capacities()
    everyone = topology.all_ids
    g = build_graph(wants, caps, everyone)
    layer = clique_to_layer(g, search(g, heuristic, oracle_cap), wants, caps, everyone)
    return ScheduleDecision(layer, ScheduleLayer.absent(), PowerAllocation(topology.p_max, 0.0))


def noma_idnc(topology: Topology, wants: SideInfo, heuristic: Heuristic | str = Heuristic.MWP_MWV,
              ao_tol: float = 1e-6, max_ao_iter: int = 20, init_beta: float = 0.2, *,
              strict_sic: bool = False, oracle_cap: int | None = ORACLE_CAP) -> SchemeResult:
    """Alternate between two-stage layer scheduling and near-layer power control.

    Every power step yields a decision re-fitted to the new powers; the best
    of these across iterations is returned. A power step whose layers cannot
    both meet ``r_min`` falls back to a single full-power layer.
    """
    if not 0 < init_beta < 1:
        raise ValueError("init_beta must lie in (0, 1)")
    heuristic = Heuristic(heuristic)
    scheme = Scheme(f"NOMA-IDNC-{heuristic.value}") if heuristic is not Heuristic.EXACT else None
    p_max, r_min = topology.p_max, topology.r_min
    p_near = init_beta * p_max if topology.near_ids else 0.0
    best: ScheduleDecision | None = None
    best_thr = -math.inf
    prev = None
    it = 0
    for it in range(1, max_ao_iter + 1):
        power = PowerAllocation.split(p_max, p_near)
        far, near = two_stage_schedule(topology, wants, power, heuristic,
                                       strict_sic=strict_sic, oracle_cap=oracle_cap)
        if far.is_absent or near.is_absent:
            decision = _single_layer(topology, wants, heuristic, oracle_cap)
        else:
            bott = bottlenecks(far.targets, near.targets, topology)
            if feasibility(bott, r_min, p_max):
                sizes = (len(far.targets), len(near.targets))
                p_new = ife_optimize(sizes, bott, bounds(bott, r_min, p_max), p_max)
                decision = revalidate(topology, wants, far, near,
                                      PowerAllocation.split(p_max, p_new), strict_sic)
            else:
                decision = _single_layer(topology, wants, heuristic, oracle_cap)
        thr = throughput(decision)
        if thr > best_thr:
            best, best_thr = decision, thr
        p_near = decision.power.p_near
        if prev is not None and abs(thr - prev) <= ao_tol * max(abs(prev), 1e-300):
            break
        prev = thr
    return SchemeResult(scheme, best_thr if best is not None else 0.0, it, best)


def r_idnc(topology: Topology, wants: SideInfo,
           heuristic: Heuristic | str = Heuristic.MWP_MWV,
           oracle_cap: int | None = ORACLE_CAP) -> SchemeResult:
    """Single full-power layer with joint packet and rate selection."""
    heuristic = Heuristic(heuristic)
    d = _single_layer(topology, wants, heuristic, oracle_cap)
    scheme = Scheme(f"R-IDNC-{heuristic.value}") if heuristic is not Heuristic.EXACT else None
    return SchemeResult(scheme, throughput(d), 1, d)


def idnc_plain(topology: Topology, wants: SideInfo,
               heuristic: Heuristic | str = Heuristic.MWP_MWV,
               oracle_cap: int | None = ORACLE_CAP) -> SchemeResult:
    """Rate-blind IDNC: serve the most receivers, then send at their slowest capacity."""
    heuristic = Heuristic(heuristic)
    everyone = topology.all_ids
    g = build_graph(wants, np.ones(topology.num_receivers), everyone)
    got = clique_packet(g, search(g, heuristic, oracle_cap))
    scheme = Scheme(f"IDNC-{heuristic.value}") if heuristic is not Heuristic.EXACT else None
    p = PowerAllocation(topology.p_max, 0.0)
    if got is None:
        return SchemeResult(scheme, 0.0, 1, ScheduleDecision(ScheduleLayer.absent(),
                                                             ScheduleLayer.absent(), p))
    packet, _ = got
    tau = decoders(packet, wants, everyone)
    rate = _min_rate(topology.full_power_capacities(), tau)
    layer = ScheduleLayer(packet, rate, tau)
    d = ScheduleDecision(layer, ScheduleLayer.absent(), p)
    return SchemeResult(scheme, throughput(d), 1, d)


def rlnc(topology: Topology, wants: SideInfo) -> SchemeResult:
    """Full-power random linear coding at the rate of the weakest receiver in the cell."""
    rate = float(topology.full_power_capacities().min())
    n = int(wants.wanting().sum())
    return SchemeResult(Scheme.RLNC, n * rate, 1, None)


def ftpa_split(topology: Topology, alpha: float) -> PowerAllocation:
    """Fractional transmit power allocation on the group-minimum SNRs."""
    snr = topology.gains / topology.noises
    snr_far = snr.min()
    snr_near = snr[list(topology.near_ids)].min()
    w_far, w_near = snr_far ** -alpha, snr_near ** -alpha
    p_far = topology.p_max * w_far / (w_far + w_near)
    return PowerAllocation(p_far, topology.p_max - p_far)


def noma_rlnc(topology: Topology, wants: SideInfo, ftpa_alpha: float = 0.4) -> SchemeResult:
    """Two superposed RLNC streams: one for the whole cell, one for the near group."""
    near = list(topology.near_ids)
    if not near:
        return SchemeResult(Scheme.NOMA_RLNC, rlnc(topology, wants).throughput, 1, None)
    p = ftpa_split(topology, ftpa_alpha)
    r_far = float(topology.far_capacities(p).min())
    r_near = float(topology.near_capacities(p)[near].min())
    wanting = wants.wanting()
    thr = int(wanting.sum()) * r_far + int(wanting[near].sum()) * r_near
    return SchemeResult(Scheme.NOMA_RLNC, thr, 1, None)


def run_scheme(scheme: Scheme | str, topology: Topology, wants: SideInfo,
               params: SchemeParams = SchemeParams()) -> SchemeResult:
    scheme = Scheme(scheme)
    if scheme is Scheme.RLNC:
        return rlnc(topology, wants)
    if scheme is Scheme.NOMA_RLNC:
        return noma_rlnc(topology, wants, params.ftpa_alpha)
    h = scheme.heuristic
    if scheme.family == "NOMA-IDNC":
        return noma_idnc(topology, wants, h, params.ao_tol, params.max_ao_iter, params.init_beta,
                         strict_sic=params.strict_sic, oracle_cap=params.oracle_cap)
    if scheme.family == "R-IDNC":
        return r_idnc(topology, wants, h, params.oracle_cap)
    return idnc_plain(topology, wants, h, params.oracle_cap)
