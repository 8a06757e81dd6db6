"""Receiver side information and instant-decodability bookkeeping."""
from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass

import numpy as np

from .channel import PowerAllocation
from .errors import ContractError


@dataclass(frozen=True, eq=False)
class SideInfo:
    """Wants sets of every receiver as a read-only ``(M, L)`` boolean matrix.

    The Has set of a receiver is the complement of its row.
    """

    matrix: np.ndarray

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=bool, copy=True)
        if mat.ndim != 2:
            raise ContractError("wants matrix must be 2-D (receivers x packets)")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @classmethod
    def from_sets(cls, wants: Iterable[Iterable[int]], num_packets: int) -> "SideInfo":
        rows = list(wants)
        mat = np.zeros((len(rows), num_packets), dtype=bool)
        for m, w in enumerate(rows):
            for l in w:
                if not 0 <= l < num_packets:
                    raise ContractError(f"packet {l} outside [0, {num_packets})")
                mat[m, l] = True
        return cls(mat)

    @property
    def num_receivers(self) -> int:
        return self.matrix.shape[0]

    @property
    def num_packets(self) -> int:
        return self.matrix.shape[1]

    def wants(self, m: int) -> frozenset[int]:
        return frozenset(np.flatnonzero(self.matrix[m]).tolist())

    def has(self, m: int) -> frozenset[int]:
        return frozenset(np.flatnonzero(~self.matrix[m]).tolist())

    def as_sets(self) -> list[frozenset[int]]:
        return [self.wants(m) for m in range(self.num_receivers)]

    def wanting(self) -> np.ndarray:
        """Boolean mask of receivers with a non-empty Wants set."""
        return self.matrix.any(axis=1)

    def __eq__(self, other):
        if not isinstance(other, SideInfo):
            return NotImplemented
        return np.array_equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash((self.matrix.shape, self.matrix.tobytes()))


def make_packet(members: Iterable[int], num_packets: int | None = None) -> frozenset[int]:
    """Validate and freeze the member set of an XOR-coded packet."""
    q = frozenset(int(l) for l in members)
    if not q:
        raise ContractError("an IDNC packet needs at least one source packet")
    if min(q) < 0 or (num_packets is not None and max(q) >= num_packets):
        raise ContractError("packet member outside the block")
    return q


@dataclass(frozen=True)
class ScheduleLayer:
    packet: frozenset[int] | None
    rate: float
    targets: frozenset[int]

    def __post_init__(self):
        if self.packet is None and (self.rate != 0 or self.targets):
            raise ContractError("an absent layer carries no rate and no targets")

    @classmethod
    def absent(cls) -> "ScheduleLayer":
        return cls(None, 0.0, frozenset())

    @property
    def is_absent(self) -> bool:
        return self.packet is None

    @property
    def throughput(self) -> float:
        return len(self.targets) * self.rate


@dataclass(frozen=True)
class ScheduleDecision:
    layer_far: ScheduleLayer
    layer_near: ScheduleLayer
    power: PowerAllocation


def _as_ids(ids) -> np.ndarray:
    return np.fromiter((int(i) for i in ids), dtype=np.intp)


def _cap_lookup(capacities, ids: np.ndarray) -> np.ndarray:
    if isinstance(capacities, Mapping):
        return np.array([capacities[int(i)] for i in ids], dtype=float)
    return np.asarray(capacities, dtype=float)[ids]


def decoders(q: Iterable[int], wants: SideInfo, eligible) -> frozenset[int]:
    """Receivers in ``eligible`` wanting exactly one member of ``q`` (rate ignored)."""
    ids = _as_ids(sorted(eligible))
    if ids.size == 0:
        return frozenset()
    cols = np.fromiter(q, dtype=np.intp)
    hits = wants.matrix[np.ix_(ids, cols)].sum(axis=1)
    return frozenset(ids[hits == 1].tolist())


def targeted_receivers(q: Iterable[int], rate: float, capacities, wants: SideInfo,
                       eligible) -> frozenset[int]:
    """Receivers that can both receive ``q`` at ``rate`` and instantly decode it.

    ``capacities`` is indexed by receiver id (array or mapping). The same
    predicate serves both layers; the caller picks the capacities, the
    eligible set and the (possibly updated) wants.
    """
    ids = _as_ids(sorted(eligible))
    if ids.size == 0:
        return frozenset()
    cols = np.fromiter(q, dtype=np.intp)
    hits = wants.matrix[np.ix_(ids, cols)].sum(axis=1)
    ok = (hits == 1) & (rate <= _cap_lookup(capacities, ids))
    return frozenset(ids[ok].tolist())


def update_wants(wants: SideInfo, q: Iterable[int], targets: Iterable[int]) -> SideInfo:
    """Remove the decoded member of ``q`` from every targeted receiver's Wants set."""
    targets = sorted(targets)
    if not targets:
        return wants
    cols = np.fromiter(q, dtype=np.intp)
    rows = np.asarray(targets, dtype=np.intp)
    hits = wants.matrix[np.ix_(rows, cols)].sum(axis=1)
    if np.any(hits != 1):
        bad = rows[hits != 1].tolist()
        raise ContractError(f"receivers {bad} cannot instantly decode packet {sorted(cols)}")
    mat = wants.matrix.copy()
    mat[np.ix_(rows, cols)] = False
    return SideInfo(mat)


def throughput(d: ScheduleDecision) -> float:
    """Bits per second per Hz delivered by one superposed transmission."""
    return d.layer_far.throughput + d.layer_near.throughput


def layering_gain(tau_near_size: int, min_near_cap: float, tau_ridnc_size: int,
                  min_ridnc_cap_at_pnear: float) -> float:
    """Throughput gain of two-layer over single-layer rate-aware IDNC.

    Valid when the far layer re-uses the single-layer packet and targets, with
    both capacities evaluated at the same near-layer power. A positive value
    means the two-layer schedule is strictly better.
    """
    return tau_near_size * min_near_cap - tau_ridnc_size * min_ridnc_cap_at_pnear


theorem1_gain = layering_gain
