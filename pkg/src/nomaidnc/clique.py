"""Maximum-weight clique search on IDNC graphs and the two-stage layer scheduler."""
from __future__ import annotations

import enum

import numpy as np

from .channel import PowerAllocation, Topology
from .errors import OracleRefused
from .graph import IdncGraph, build_graph, clique_to_layer
from .idnc import ScheduleLayer, SideInfo, update_wants

ORACLE_CAP = 64


class Heuristic(enum.Enum):
    MWV = "MWV"
    MWP_MWV = "MWP-MWV"
    EXACT = "EXACT"


def _lowbit(x: int) -> int:
    return (x & -x).bit_length() - 1


def mwv_search(g: IdncGraph) -> tuple[int, ...]:
    """Greedy clique growth by modified vertex weight.

    Each round scores the surviving vertices by own weight times the total
    weight of their surviving neighbours, takes the best one and keeps only
    its neighbours. When every score is zero the raw weight decides.
    """
    if len(g) == 0:
        return ()
    w = g.weights
    scores = np.empty(len(g))
    for (start, stop), adj in zip(g.blocks, g.block_adj):
        wb = w[start:stop]
        scores[start:stop] = wb * (adj @ wb)
    v = int(np.argmax(scores)) if scores.max() > 0 else int(np.argmax(w))
    b = g.block_of(v)
    start, _ = g.blocks[b]
    adj = g.block_adj[b]
    wb = w[start:start + adj.shape[0]]
    clique = [v]
    surv = np.flatnonzero(adj[v - start])
    while surv.size:
        sub = adj[np.ix_(surv, surv)]
        ws = wb[surv]
        sc = ws * (sub @ ws)
        k = int(np.argmax(sc)) if sc.max() > 0 else int(np.argmax(ws))
        u = int(surv[k])
        clique.append(u + start)
        surv = surv[adj[u, surv]]
    return tuple(clique)


def _path_bits(masks: list[int], bit: int) -> list[int]:
    path = [bit]
    cand = masks[bit]
    while cand:
        b = _lowbit(cand)
        path.append(b)
        cand &= masks[b]
    return path


def mwp_path(g: IdncGraph, start: int) -> tuple[int, ...]:
    """Maximal weight path from ``start``: keep adding the heaviest common neighbour.

    The result is always a maximal clique containing ``start``.
    """
    g._check(start)
    blk = g.block_of(start)
    order, masks, pos = g.bitsets()[blk]
    bit = int(pos[start - g.blocks[blk][0]])
    return tuple(order[b] for b in _path_bits(masks, bit))


def mwp_mwv_search(g: IdncGraph) -> tuple[int, ...]:
    """Score every vertex by the weight of its maximal weight path; return the best path.

    Ties go to the lowest vertex index. Blocks whose receiver-count bound
    cannot beat the current best are skipped.
    """
    if len(g) == 0:
        return ()
    w = g.weights
    bits = g.bitsets()
    bnd = _block_bounds(g)
    best_v, best_w, best_path = len(g), -np.inf, []
    for blk in sorted(range(len(g.blocks)), key=lambda b: (-bnd[b], b)):
        if bnd[blk] < best_w * (1 - 1e-12):
            break
        order, masks, _ = bits[blk]
        bw = w[order].tolist()
        for bit in range(len(order)):
            total = bw[bit]
            path = [bit]
            cand = masks[bit]
            while cand:
                b = (cand & -cand).bit_length() - 1
                path.append(b)
                total += bw[b]
                cand &= masks[b]
            v = order[bit]
            if total > best_w or (total == best_w and v < best_v):
                best_v, best_w, best_path = v, total, [order[b] for b in path]
    return tuple(best_path)


def _block_bounds(g: IdncGraph) -> list[float]:
    """Upper bound on any clique weight per block.

    Cliques in IDNC graphs never repeat a receiver, so summing each
    receiver's heaviest vertex bounds them; blocks with a same-receiver edge
    fall back to the plain weight sum.
    """
    out = []
    for (start, stop), adj in zip(g.blocks, g.block_adj):
        recv = g.receivers[start:stop]
        wb = g.weights[start:stop]
        if np.any(adj & (recv[:, None] == recv[None, :])):
            out.append(float(wb.sum()))
            continue
        top: dict[int, float] = {}
        for r, x in zip(recv.tolist(), wb.tolist()):
            if x > top.get(r, -np.inf):
                top[r] = x
        out.append(float(sum(top.values())))
    return out


def exact_max_weight_clique(g: IdncGraph, cap: int | None = ORACLE_CAP) -> tuple[int, ...]:
    """Branch-and-bound maximum-weight clique, extended to a maximal clique.

    Raises :class:`OracleRefused` when the graph has more than ``cap`` vertices.
    Ties keep the first optimum found (blocks in order, heavier vertices first).
    """
    if cap is not None and len(g) > cap:
        raise OracleRefused(f"{len(g)} vertices exceed the oracle cap of {cap}")
    if len(g) == 0:
        return ()
    best_w, best_bits, best_blk = -np.inf, [], -1
    for blk, ((start, stop), (order, masks, _)) in enumerate(zip(g.blocks, g.bitsets())):
        bw = [float(g.weights[v]) for v in order]
        found_w, found = _bnb(masks, bw)
        if found_w > best_w:
            best_w, best_bits, best_blk = found_w, found, blk
    order, masks, _ = g.bitsets()[best_blk]
    # grow to maximal (only matters for zero-weight vertices)
    cand = -1
    for b in best_bits:
        cand &= masks[b]
    bits = list(best_bits)
    while cand:
        b = _lowbit(cand)
        bits.append(b)
        cand &= masks[b]
    return tuple(order[b] for b in bits)


def _bnb(masks: list[int], w: list[float]) -> tuple[float, list[int]]:
    n = len(masks)
    best = [-np.inf, []]

    def mask_weight(m: int) -> float:
        s = 0.0
        while m:
            b = _lowbit(m)
            s += w[b]
            m &= m - 1
        return s

    def expand(cand: int, cur: list[int], cur_w: float) -> None:
        if not cand:
            if cur_w > best[0]:
                best[0], best[1] = cur_w, list(cur)
            return
        if cur_w + mask_weight(cand) <= best[0]:
            return
        while cand:
            if cur_w + mask_weight(cand) <= best[0]:
                return
            b = _lowbit(cand)
            cand &= cand - 1
            cur.append(b)
            expand(cand & masks[b], cur, cur_w + w[b])
            cur.pop()

    expand((1 << n) - 1, [], 0.0)
    return best[0], best[1]


def search(g: IdncGraph, heuristic: Heuristic | str, oracle_cap: int | None = ORACLE_CAP) -> tuple[int, ...]:
    heuristic = Heuristic(heuristic)
    if heuristic is Heuristic.MWV:
        return mwv_search(g)
    if heuristic is Heuristic.MWP_MWV:
        return mwp_mwv_search(g)
    return exact_max_weight_clique(g, cap=oracle_cap)


def near_eligible(topology: Topology, far: ScheduleLayer, p: PowerAllocation,
                  strict_sic: bool = False) -> tuple[int, ...]:
    near = topology.near_ids
    if not strict_sic or far.is_absent:
        return near
    caps = topology.far_capacities(p)
    return tuple(m for m in near if far.rate <= caps[m])


def two_stage_schedule(topology: Topology, wants: SideInfo, p: PowerAllocation,
                       heuristic: Heuristic | str = Heuristic.MWP_MWV, *,
                       strict_sic: bool = False, oracle_cap: int | None = ORACLE_CAP,
                       ) -> tuple[ScheduleLayer, ScheduleLayer]:
    """Pick the far layer over all receivers, then the near layer on the updated Wants."""
    far_caps = topology.far_capacities(p)
    everyone = topology.all_ids
    g_far = build_graph(wants, far_caps, everyone)
    far = clique_to_layer(g_far, search(g_far, heuristic, oracle_cap), wants, far_caps, everyone)
    updated = wants if far.is_absent else update_wants(wants, far.packet, far.targets)
    eligible = near_eligible(topology, far, p, strict_sic)
    near_caps = topology.near_capacities(p)
    g_near = build_graph(updated, near_caps, eligible)
    near = clique_to_layer(g_near, search(g_near, heuristic, oracle_cap), updated, near_caps, eligible)
    return far, near
