"""Near-layer power control for a fixed pair of schedule layers.

With both layers fixed, only the weakest targeted receiver of each layer
matters. The throughput as a function of the near-layer power ``p`` is

    phi(p) = F * log2(1 + (P - p) / (p + b)) + N * log2(1 + p / a)

with ``F``/``N`` the layer sizes and ``b``/``a`` the noise-to-gain ratios of
the far/near bottleneck receivers. The minimum-rate constraints confine
``p`` to an interval ``[low, up]``.
"""
from __future__ import annotations

import math
from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from .channel import Topology
from .errors import ContractError

LN2 = math.log(2.0)


@dataclass(frozen=True)
class Bottleneck:
    inv_snr_far: float
    inv_snr_near: float

    def __post_init__(self):
        if not (self.inv_snr_far > 0 and self.inv_snr_near > 0):
            raise ContractError("bottleneck noise-to-gain ratios must be positive")


@dataclass(frozen=True)
class PowerBounds:
    low: float
    up: float

    @property
    def feasible(self) -> bool:
        return self.low <= self.up

    def clip(self, p: float) -> float:
        return min(max(p, self.low), self.up)


def bottlenecks(targets_far: Iterable[int], targets_near: Iterable[int],
                topology: Topology) -> Bottleneck:
    far, near = list(targets_far), list(targets_near)
    if not far or not near:
        raise ContractError("both target sets must be non-empty")
    inv = topology.noises / topology.gains
    return Bottleneck(float(inv[far].max()), float(inv[near].max()))


def feasibility(b: Bottleneck, r_min: float, p_max: float) -> bool:
    """Whether some power split meets the minimum rate on both layers."""
    g = 2.0 ** r_min
    return p_max >= b.inv_snr_far * (g - 1.0) + b.inv_snr_near * g * (g - 1.0)


def bounds(b: Bottleneck, r_min: float, p_max: float) -> PowerBounds:
    g = 2.0 ** r_min
    low = b.inv_snr_near * (g - 1.0)
    up = p_max / g - b.inv_snr_far * (1.0 - 1.0 / g)
    return PowerBounds(low, up)


def phi(p_near, sizes: tuple[int, int], b: Bottleneck, p_max: float):
    """Throughput of the two bottleneck-limited layers; vectorises over ``p_near``."""
    n_far, n_near = sizes
    p = np.asarray(p_near, dtype=float)
    val = (n_far * np.log1p((p_max - p) / (p + b.inv_snr_far))
           + n_near * np.log1p(p / b.inv_snr_near)) / LN2
    return float(val) if val.ndim == 0 else val


def phi_derivative(p_near, sizes: tuple[int, int], b: Bottleneck, p_max: float):
    """d phi / d p_near.

    The far term simplifies to ``-F / ((p + b) ln 2)`` because
    ``1 + SINR_f = (P + b) / (p + b)``.
    """
    n_far, n_near = sizes
    p = np.asarray(p_near, dtype=float)
    val = (n_near / (p + b.inv_snr_near) - n_far / (p + b.inv_snr_far)) / LN2
    return float(val) if val.ndim == 0 else val


def ife_step(p: float, sizes: tuple[int, int], b: Bottleneck, p_max: float,
             bnds: PowerBounds) -> float:
    """One projected fixed-point update of the stationarity condition.

    Numerator and denominator are the near-layer gain and far-layer loss
    per unit power (without the common ``1/ln 2``), written in SINR form.
    """
    n_far, n_near = sizes
    if n_far == 0:
        return bnds.up
    sinr_n = p / b.inv_snr_near
    sinr_f = (p_max - p) / (p + b.inv_snr_far)
    num = n_near * sinr_n / (1.0 + sinr_n)
    den = n_far * (1.0 + sinr_f) / (p_max + b.inv_snr_far)
    return bnds.clip(num / den)


def ife_optimize(sizes: tuple[int, int], b: Bottleneck, bnds: PowerBounds, p_max: float,
                 init: float | None = None, tol: float = 1e-9, max_iter: int = 1000,
                 trace: list | None = None) -> float:
    """Near-layer power by iterative function evaluation.

    Iterates the projected fixed point until successive iterates differ by at
    most ``tol * p_max``, then returns whichever of the fixed point and the
    two interval ends gives the largest ``phi``. Pass a list as ``trace`` to
    collect the iterates.
    """
    if not bnds.feasible:
        raise ContractError(f"infeasible power interval [{bnds.low}, {bnds.up}]")
    p = 0.5 * (bnds.low + bnds.up) if init is None else init
    if not bnds.low <= p <= bnds.up:
        raise ContractError("init must lie inside the power interval")
    if trace is not None:
        trace.append(p)
    for _ in range(max_iter):
        nxt = ife_step(p, sizes, b, p_max, bnds)
        if trace is not None:
            trace.append(nxt)
        done = abs(nxt - p) <= tol * p_max
        p = nxt
        if done:
            break
    cands = (p, bnds.low, bnds.up)
    vals = [phi(c, sizes, b, p_max) for c in cands]
    return cands[int(np.argmax(vals))]


def grid_oracle(sizes: tuple[int, int], b: Bottleneck, bnds: PowerBounds, p_max: float,
                steps: int = 10**6) -> float:
    """Brute-force argmax of ``phi`` on a uniform grid over ``[low, up]`` (ends included)."""
    if not bnds.feasible:
        raise ContractError("infeasible power interval")
    grid = np.linspace(bnds.low, bnds.up, max(int(steps), 2))
    vals = phi(grid, sizes, b, p_max)
    return float(grid[int(np.argmax(vals))])
