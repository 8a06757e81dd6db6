"""Rate-annotated IDNC graphs.

A vertex ``(m, l, r)`` says "receiver ``m`` gets wanted packet ``l`` at rate
``r``". Two vertices are adjacent when they share a rate and one XOR packet
can serve both receivers at once. Because edges never cross rates, vertices
are stored sorted by rate and the adjacency is kept as one dense block per
rate class.
"""
from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import TextIO

import numpy as np

from .errors import ContractError
from .idnc import ScheduleLayer, SideInfo, targeted_receivers

RATE_RTOL = 1e-12


@dataclass(frozen=True)
class Vertex:
    receiver: int
    packet: int
    rate: float
    weight: float


class IdncGraph:
    """Vertex-weighted undirected graph with block-diagonal adjacency.

    ``blocks[b] = (start, stop)`` is a contiguous vertex range and
    ``block_adj[b]`` its symmetric boolean adjacency. There are no edges
    between blocks. Treat instances as immutable.
    """

    def __init__(self, vertices: Sequence[Vertex], blocks: Sequence[tuple[int, int]],
                 block_adj: Sequence[np.ndarray], rate_set: Sequence[float] = ()):
        vs = tuple(vertices)
        self._setup(np.array([v.receiver for v in vs], dtype=np.intp),
                    np.array([v.packet for v in vs], dtype=np.intp),
                    np.array([v.rate for v in vs], dtype=float),
                    np.array([v.weight for v in vs], dtype=float),
                    blocks, block_adj, rate_set)
        self._vertices = vs

    @classmethod
    def from_arrays(cls, receivers, packets, rates, weights, blocks, block_adj,
                    rate_set: Sequence[float] = ()) -> "IdncGraph":
        """Build from parallel per-vertex arrays; ``vertices`` is then materialised on demand."""
        g = cls.__new__(cls)
        g._setup(np.asarray(receivers, dtype=np.intp), np.asarray(packets, dtype=np.intp),
                 np.asarray(rates, dtype=float), np.asarray(weights, dtype=float),
                 blocks, block_adj, rate_set)
        g._vertices = None
        return g

    def _setup(self, receivers, packets, rates, weights, blocks, block_adj, rate_set):
        self.receivers, self.packets, self.rates, self.weights = receivers, packets, rates, weights
        self.blocks = tuple((int(a), int(b)) for a, b in blocks)
        self.block_adj = tuple(np.asarray(a, dtype=bool) for a in block_adj)
        self.rate_set = tuple(float(r) for r in rate_set)
        n = weights.size
        if not receivers.size == packets.size == rates.size == n:
            raise ContractError("per-vertex arrays differ in length")
        self._block_of = np.empty(n, dtype=np.intp)
        for b, (start, stop) in enumerate(self.blocks):
            self._block_of[start:stop] = b
            adj = self.block_adj[b]
            if adj.shape != (stop - start, stop - start):
                raise ContractError("block adjacency shape does not match its vertex range")
            if np.any(np.diag(adj)) or not np.array_equal(adj, adj.T):
                raise ContractError("adjacency must be symmetric without self-loops")
            adj.setflags(write=False)
        covered = sum(stop - start for start, stop in self.blocks)
        if covered != n:
            raise ContractError("blocks must partition the vertex set")
        for a in (receivers, packets, rates, weights):
            a.setflags(write=False)
        self._bits = None

    @property
    def vertices(self) -> tuple[Vertex, ...]:
        if self._vertices is None:
            self._vertices = tuple(
                Vertex(m, l, r, w) for m, l, r, w in zip(self.receivers.tolist(), self.packets.tolist(),
                                                         self.rates.tolist(), self.weights.tolist()))
        return self._vertices

    # construction helpers -------------------------------------------------
    @classmethod
    def from_edges(cls, weights: Sequence[float], edges: Iterable[tuple[int, int]]) -> "IdncGraph":
        """Generic weighted graph (one block); vertex ``i`` gets receiver ``i``."""
        n = len(weights)
        adj = np.zeros((n, n), dtype=bool)
        for i, j in edges:
            if i == j:
                raise ContractError("self-loops are not allowed")
            adj[i, j] = adj[j, i] = True
        verts = [Vertex(i, 0, float(w), float(w)) for i, w in enumerate(weights)]
        return cls(verts, [(0, n)] if n else [], [adj] if n else [], sorted(set(map(float, weights))))

    # queries ----------------------------------------------------------------
    def __len__(self) -> int:
        return int(self.weights.size)

    @property
    def num_edges(self) -> int:
        return int(sum(a.sum() for a in self.block_adj) // 2)

    def block_of(self, i: int) -> int:
        return int(self._block_of[i])

    def _check(self, i: int) -> None:
        if not 0 <= i < self.weights.size:
            raise ContractError(f"unknown vertex index {i}")

    def adjacent(self, i: int, j: int) -> bool:
        self._check(i)
        self._check(j)
        b = self._block_of[i]
        if b != self._block_of[j]:
            return False
        start = self.blocks[b][0]
        return bool(self.block_adj[b][i - start, j - start])

    def neighbors(self, i: int) -> np.ndarray:
        self._check(i)
        b = self._block_of[i]
        start = self.blocks[b][0]
        return np.flatnonzero(self.block_adj[b][i - start]) + start

    def dense_adjacency(self) -> np.ndarray:
        n = len(self)
        out = np.zeros((n, n), dtype=bool)
        for (start, stop), adj in zip(self.blocks, self.block_adj):
            out[start:stop, start:stop] = adj
        return out

    def edges(self):
        for (start, _), adj in zip(self.blocks, self.block_adj):
            ii, jj = np.nonzero(np.triu(adj))
            for i, j in zip(ii.tolist(), jj.tolist()):
                yield start + i, start + j

    def clique_weight(self, clique: Iterable[int]) -> float:
        return float(sum(self.weights[i] for i in clique))

    def bitsets(self):
        """Per-block neighbour bitmasks for the greedy and exact searches.

        Bits inside a block are ordered by decreasing weight, then by vertex
        index, so the lowest set bit of any candidate mask is its
        maximum-weight vertex under the project-wide tie-break.
        Returns one ``(order, masks, pos)`` triple per block: ``order[bit]`` is
        a global vertex index, ``masks[bit]`` that vertex's neighbour mask and
        ``pos[i - start]`` the bit of global vertex ``i``.
        """
        if self._bits is None:
            bits = []
            for (start, stop), adj in zip(self.blocks, self.block_adj):
                w = self.weights[start:stop]
                local = np.lexsort((np.arange(stop - start), -w))
                permuted = adj[:, local]
                packed = np.packbits(permuted, axis=1, bitorder="little")
                masks = [int.from_bytes(row.tobytes(), "little") for row in packed]
                pos = np.empty(stop - start, dtype=np.intp)
                pos[local] = np.arange(stop - start)
                bits.append(((local + start).tolist(), [masks[v] for v in local], pos))
            self._bits = bits
        return self._bits


def rate_candidates(capacities: np.ndarray, rtol: float = RATE_RTOL) -> list[float]:
    """Distinct positive capacities, merging values within ``rtol``.

    A merged group is represented by its smallest member so that every
    receiver in the group can still sustain the rate.
    """
    vals = np.sort(np.asarray(capacities, dtype=float))
    vals = vals[vals > 0]
    out: list[float] = []
    for v in vals.tolist():
        if out and v - out[-1] <= rtol * max(abs(v), abs(out[-1])):
            continue
        out.append(v)
    return out


def build_graph(wants: SideInfo, capacities, eligible: Iterable[int]) -> IdncGraph:
    """Build the IDNC graph over ``eligible`` receivers.

    One vertex per (receiver, wanted packet, candidate rate not above the
    receiver's capacity); the candidate rates are the eligible receivers'
    own capacities. Vertices are ordered by (rate index, receiver, packet).
    """
    caps = np.asarray(capacities, dtype=float)
    ids = np.array(sorted(set(int(m) for m in eligible)), dtype=np.intp)
    rates = rate_candidates(caps[ids]) if ids.size else []
    wmat = wants.matrix
    # every (receiver, wanted packet) pair, ordered by receiver then packet
    ms, ls = np.nonzero(wmat[ids])
    ms = ids[ms]
    if not rates or ms.size == 0:
        return IdncGraph.from_arrays([], [], [], [], [], [], rates)
    # rate classes are nested receiver subsets, so each block is a slice of one matrix
    base = _coding_adjacency(wmat, ms, ls)
    vcap = caps[ms]
    sels, blocks, block_adj = [], [], []
    start = 0
    for r in rates:
        sel = np.flatnonzero(vcap >= r)
        if sel.size == 0:
            continue
        sels.append((sel, r))
        blocks.append((start, start + sel.size))
        block_adj.append(base[np.ix_(sel, sel)])
        start += sel.size
    idx = np.concatenate([sel for sel, _ in sels])
    vr = np.concatenate([np.full(sel.size, r) for sel, r in sels])
    return IdncGraph.from_arrays(ms[idx], ls[idx], vr, vr, blocks, block_adj, rates)


def _coding_adjacency(wmat: np.ndarray, ms: np.ndarray, ls: np.ndarray) -> np.ndarray:
    diff_m = ms[:, None] != ms[None, :]
    same_l = ls[:, None] == ls[None, :]
    has = ~wmat[np.ix_(ms, ls)]  # [i, j]: packet of j is held by receiver of i
    return diff_m & (same_l | (has & has.T))


def coding_compatible(wants: SideInfo, a: Vertex, b: Vertex) -> bool:
    """Pairwise edge rule written out directly (used as a test oracle)."""
    if a.rate != b.rate or a.receiver == b.receiver:
        return False
    if a.packet == b.packet:
        return True
    return (not wants.matrix[a.receiver, b.packet]) and (not wants.matrix[b.receiver, a.packet])


def is_clique(g: IdncGraph, s: Iterable[int]) -> bool:
    idx = np.array(sorted(set(int(i) for i in s)), dtype=np.intp)
    for i in idx.tolist():
        g._check(i)
    if idx.size <= 1:
        return True
    b = g._block_of[idx[0]]
    if np.any(g._block_of[idx] != b):
        return False
    loc = idx - g.blocks[b][0]
    sub = g.block_adj[b][np.ix_(loc, loc)]
    return bool(sub.sum() == idx.size * (idx.size - 1))


def is_maximal_clique(g: IdncGraph, s: Iterable[int]) -> bool:
    """A clique that no further vertex can join (the empty set only in the empty graph)."""
    idx = sorted(set(int(i) for i in s))
    if not is_clique(g, idx):
        return False
    if not idx:
        return len(g) == 0
    b = g._block_of[idx[0]]
    loc = np.array(idx) - g.blocks[b][0]
    # vertices adjacent to every member; other blocks are never adjacent
    common = g.block_adj[b][loc].all(axis=0)
    return not common.any()


def clique_packet(g: IdncGraph, k: Iterable[int]) -> tuple[frozenset[int], float] | None:
    k = list(k)
    if not k:
        return None
    for i in k:
        g._check(i)
    rates = set(g.rates[k].tolist())
    if len(rates) != 1:
        raise ContractError("clique vertices must share one rate")
    return frozenset(g.packets[k].tolist()), rates.pop()


def clique_to_layer(g: IdncGraph, k: Iterable[int], wants: SideInfo, capacities,
                    eligible: Iterable[int]) -> ScheduleLayer:
    """XOR the clique's packets at the clique's rate; targets come from the full predicate."""
    got = clique_packet(g, k)
    if got is None:
        return ScheduleLayer.absent()
    packet, rate = got
    targets = targeted_receivers(packet, rate, capacities, wants, eligible)
    return ScheduleLayer(packet, rate, targets)


def dump_graph(g: IdncGraph, fp: TextIO) -> None:
    """Plain-text dump: ``m l rate`` per vertex, then ``i j`` per edge (i < j)."""
    for v in g.vertices:
        fp.write(f"{v.receiver} {v.packet} {v.rate!r}\n")
    for i, j in g.edges():
        fp.write(f"{i} {j}\n")


def load_graph(fp: TextIO) -> IdncGraph:
    """Read a :func:`dump_graph` file back as a single-block graph."""
    verts: list[Vertex] = []
    edges: list[tuple[int, int]] = []
    for line in fp:
        parts = line.split()
        if len(parts) == 3:
            m, l, r = int(parts[0]), int(parts[1]), float(parts[2])
            verts.append(Vertex(m, l, r, r))
        elif len(parts) == 2:
            edges.append((int(parts[0]), int(parts[1])))
        elif parts:
            raise ContractError(f"malformed graph line: {line!r}")
    n = len(verts)
    adj = np.zeros((n, n), dtype=bool)
    for i, j in edges:
        adj[i, j] = adj[j, i] = True
    rates = sorted({v.rate for v in verts})
    return IdncGraph(verts, [(0, n)] if n else [], [adj] if n else [], rates)
