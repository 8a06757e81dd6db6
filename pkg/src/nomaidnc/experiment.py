"""Monte Carlo sweeps over cell realisations, with CSV output.

Every (sweep point, trial) pair gets its own seed, derived by a splitmix64
mix of ``(base_seed, sweep_index, trial_index)``. All schemes in a trial
run on the same topology and Wants sets, so scheme differences are paired.
"""
from __future__ import annotations

import csv
import math
import time
from collections import defaultdict
from collections.abc import Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np
from scipy import stats

from .channel import D_MIN_M, NOISE_DBM_HZ, dbm_to_watt, generate_topology
from .errors import ConfigError
from .idnc import SideInfo
from .schemes import ALL_SCHEMES, Scheme, SchemeParams, run_scheme

MASK64 = (1 << 64) - 1
SWEEP_FIELDS = ("M", "L", "mu", "p_max_dbm_hz")
CSV_HEADER = ("scheme", "sweep_param", "sweep_value", "trial", "throughput_bps_hz",
              "ao_iterations", "runtime_ms")
SUMMARY_HEADER = ("scheme", "sweep_param", "sweep_value", "n", "mean_bps_hz", "ci95_half_width")


class InvariantViolation(RuntimeError):
    pass


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def trial_seed(base_seed: int, sweep_index: int, trial_index: int) -> int:
    s = splitmix64(base_seed & MASK64)
    s = splitmix64(s ^ sweep_index)
    return splitmix64(s ^ trial_index)


def generate_wants(L: int, mu: float, M: int, seed: int) -> SideInfo:
    """Each receiver independently holds each packet with probability ``mu``."""
    if not 0 <= mu <= 1:
        raise ConfigError("mu must lie in [0, 1]")
    if L < 1 or M < 1:
        raise ConfigError("L and M must be >= 1")
    rng = np.random.default_rng(seed)
    has = rng.random((M, L)) < mu
    return SideInfo(~has)


@dataclass(frozen=True)
class ExperimentConfig:
    base_seed: int = 1
    trials: int = 200
    M: tuple[int, ...] = (20,)
    L: tuple[int, ...] = (20,)
    mu: tuple[float, ...] = (0.6,)
    p_max_dbm_hz: tuple[float, ...] = (-42.6,)
    r_min_bps_hz: float = 0.4
    cell_radius_m: float = 500.0
    noise_dbm_hz: float = NOISE_DBM_HZ
    d_min_m: float = D_MIN_M
    bandwidth_hz: float = 5e6  # reporting only
    schemes: tuple[Scheme, ...] = ALL_SCHEMES
    ao_tol: float = 1e-6
    max_ao_iter: int = 20
    init_beta: float = 0.2
    ftpa_alpha: float = 0.4
    strict_sic: bool = False
    sweep: str | None = None
    workers: int = 1
    record_runtime: bool = False

    def __post_init__(self):
        try:
            object.__setattr__(self, "schemes", tuple(Scheme(x) for x in self.schemes))
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        for f in SWEEP_FIELDS:
            object.__setattr__(self, f, tuple(getattr(self, f)))
        swept = [f for f in SWEEP_FIELDS if len(getattr(self, f)) > 1]
        if len(swept) > 1:
            raise ConfigError(f"only one field may be swept, got {swept}")
        for f in SWEEP_FIELDS:
            if not getattr(self, f):
                raise ConfigError(f"{f} needs at least one value")
        if self.sweep is not None and self.sweep not in SWEEP_FIELDS:
            raise ConfigError(f"sweep must be one of {SWEEP_FIELDS}")
        if swept and self.sweep is not None and self.sweep != swept[0]:
            raise ConfigError(f"sweep={self.sweep} but {swept[0]} has several values")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if any(not 0 <= m <= 1 for m in self.mu):
            raise ConfigError("mu must lie in [0, 1]")
        if any(m < 1 for m in self.M) or any(l < 1 for l in self.L):
            raise ConfigError("M and L must be >= 1")
        if self.r_min_bps_hz < 0 or self.cell_radius_m <= 0:
            raise ConfigError("r_min must be >= 0 and cell_radius_m > 0")
        if not 0 < self.init_beta < 1:
            raise ConfigError("init_beta must lie in (0, 1)")
        if self.max_ao_iter < 1 or self.workers < 1:
            raise ConfigError("max_ao_iter and workers must be >= 1")
        if not self.schemes:
            raise ConfigError("no schemes selected")

    @property
    def sweep_param(self) -> str:
        for f in SWEEP_FIELDS:
            if len(getattr(self, f)) > 1:
                return f
        return self.sweep or "M"

    @property
    def sweep_values(self) -> tuple:
        return getattr(self, self.sweep_param)

    def point(self, index: int) -> dict:
        """Concrete scalar parameters at sweep point ``index``."""
        out = {f: getattr(self, f)[0] for f in SWEEP_FIELDS}
        out[self.sweep_param] = self.sweep_values[index]
        return out

    def scheme_params(self) -> SchemeParams:
        return SchemeParams(ao_tol=self.ao_tol, max_ao_iter=self.max_ao_iter,
                            init_beta=self.init_beta, ftpa_alpha=self.ftpa_alpha,
                            strict_sic=self.strict_sic)


# config text ---------------------------------------------------------------

_LIST_CASTS = {"M": int, "L": int, "mu": float, "p_max_dbm_hz": float}


def _parse_bool(v: str) -> bool:
    low = v.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {v!r}")


def _coerce(key: str, value: str):
    names = {f.name for f in fields(ExperimentConfig)}
    if key not in names:
        raise ConfigError(f"unknown config key {key!r}")
    value = value.strip()
    try:
        if key in _LIST_CASTS:
            return tuple(_LIST_CASTS[key](v) for v in value.split(",") if v.strip())
        if key == "schemes":
            return tuple(Scheme(v.strip()) for v in value.split(",") if v.strip())
        if key in ("strict_sic", "record_runtime"):
            return _parse_bool(value)
        if key == "sweep":
            return value or None
        if key in ("base_seed", "trials", "max_ao_iter", "workers"):
            return int(value)
        return float(value)
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {value!r} ({exc})") from None


def parse_config_text(text: str, overrides: Iterable[str] = ()) -> ExperimentConfig:
    """Flat ``key=value`` lines (``#`` comments, comma-separated lists); overrides win."""
    kv: dict[str, str] = {}
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {n}: expected key=value, got {raw!r}")
        k, v = line.split("=", 1)
        kv[k.strip()] = v
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override must be key=value, got {item!r}")
        k, v = item.split("=", 1)
        kv[k.strip()] = v
    return ExperimentConfig(**{k: _coerce(k, v) for k, v in kv.items()})


def load_config(path: str | Path, overrides: Iterable[str] = ()) -> ExperimentConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config_text(text, overrides)


def format_config(cfg: ExperimentConfig) -> str:
    lines = []
    for f in fields(cfg):
        v = getattr(cfg, f.name)
        if f.name == "schemes":
            v = ",".join(s.value for s in v)
        elif isinstance(v, tuple):
            v = ",".join(repr(x) for x in v)
        elif v is None:
            v = ""
        lines.append(f"{f.name}={v}")
    return "\n".join(lines) + "\n"


# sweeps ---------------------------------------------------------------------

@dataclass(frozen=True)
class TrialResult:
    scheme: str
    sweep_param: str
    sweep_value: float
    trial: int
    throughput_bps_hz: float
    ao_iterations: int
    runtime_ms: float = 0.0

    def sort_key(self):
        return (self.scheme, self.sweep_value, self.trial)


def run_trial(cfg: ExperimentConfig, sweep_index: int, trial: int) -> list[TrialResult]:
    pt = cfg.point(sweep_index)
    seed = trial_seed(cfg.base_seed, sweep_index, trial)
    topo = generate_topology(pt["M"], cfg.cell_radius_m, splitmix64(seed ^ 1),
                             p_max=dbm_to_watt(pt["p_max_dbm_hz"]), r_min=cfg.r_min_bps_hz,
                             noise_dbm_hz=cfg.noise_dbm_hz, d_min_m=cfg.d_min_m)
    wants = generate_wants(pt["L"], pt["mu"], pt["M"], splitmix64(seed ^ 2))
    params = cfg.scheme_params()
    rows = []
    for scheme in cfg.schemes:
        t0 = time.perf_counter()
        res = run_scheme(scheme, topo, wants, params)
        elapsed = (time.perf_counter() - t0) * 1e3 if cfg.record_runtime else 0.0
        if not (math.isfinite(res.throughput) and res.throughput >= 0):
            raise InvariantViolation(f"{scheme.value}: throughput {res.throughput}")
        rows.append(TrialResult(scheme.value, cfg.sweep_param, pt[cfg.sweep_param], trial,
                                float(res.throughput), res.ao_iterations, elapsed))
    return rows


def _run_unit(args):
    return run_trial(*args)


def run_sweep(cfg: ExperimentConfig, progress=None) -> list[TrialResult]:
    """Run every scheme on every (sweep point, trial); rows come back sorted."""
    units = [(cfg, i, t) for i in range(len(cfg.sweep_values)) for t in range(cfg.trials)]
    rows: list[TrialResult] = []
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as ex:
            for chunk in ex.map(_run_unit, units, chunksize=8):
                rows.extend(chunk)
    else:
        for k, u in enumerate(units):
            rows.extend(run_trial(*u))
            if progress is not None:
                progress(k + 1, len(units))
    rows.sort(key=TrialResult.sort_key)
    return rows


# output ---------------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def summarize(rows: Sequence[TrialResult]) -> list[tuple]:
    """Per (scheme, sweep value): count, mean and Student-t 95% half-width."""
    groups: dict[tuple, list[float]] = defaultdict(list)
    for r in rows:
        groups[(r.scheme, r.sweep_param, r.sweep_value)].append(r.throughput_bps_hz)
    out = []
    for key in sorted(groups, key=lambda k: (k[0], k[2])):
        mean, hw = mean_ci(groups[key])
        out.append((*key, len(groups[key]), mean, hw))
    return out


def mean_ci(values: Sequence[float], level: float = 0.95) -> tuple[float, float]:
    x = np.asarray(values, dtype=float)
    mean = float(x.mean())
    if x.size < 2:
        return mean, float("nan")
    sem = float(x.std(ddof=1)) / math.sqrt(x.size)
    return mean, float(stats.t.ppf(0.5 + level / 2, x.size - 1) * sem)


def summary_path(path: str | Path) -> Path:
    path = Path(path)
    return path.with_name(path.stem + "_summary.csv")


def emit_results(rows: Sequence[TrialResult], path: str | Path) -> Path:
    """Write the per-trial CSV and a ``<stem>_summary.csv`` next to it."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fp:
        w = csv.writer(fp, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in sorted(rows, key=TrialResult.sort_key):
            w.writerow([r.scheme, r.sweep_param, _fmt(r.sweep_value), r.trial,
                        _fmt(r.throughput_bps_hz), r.ao_iterations, _fmt(float(r.runtime_ms))])
    with summary_path(path).open("w", newline="") as fp:
        w = csv.writer(fp, lineterminator="\n")
        w.writerow(SUMMARY_HEADER)
        for row in summarize(rows):
            w.writerow([_fmt(x) for x in row])
    return path


def read_results(path: str | Path) -> list[TrialResult]:
    rows = []
    with Path(path).open(newline="") as fp:
        reader = csv.DictReader(fp)
        if tuple(reader.fieldnames or ()) != CSV_HEADER:
            raise ConfigError(f"unexpected header in {path}")
        for rec in reader:
            cast = _LIST_CASTS.get(rec["sweep_param"], float)
            rows.append(TrialResult(rec["scheme"], rec["sweep_param"], cast(rec["sweep_value"]),
                                    int(rec["trial"]), float(rec["throughput_bps_hz"]),
                                    int(rec["ao_iterations"]), float(rec["runtime_ms"])))
    return rows


# figure-shaped presets -------------------------------------------------------

def figure_config(name: str, **kw) -> ExperimentConfig:
    """Sweep designs around the anchor point M=20, L=20, mu=0.6, P_max=-42.6 dBm/Hz.

    ``name`` is one of ``receivers``, ``packets``, ``power`` or ``buffer``.
    """
    sweeps = {
        "receivers": {"M": (10, 15, 20, 25, 30)},
        "packets": {"L": (10, 15, 20, 25, 30)},
        "power": {"p_max_dbm_hz": (-48.6, -45.6, -42.6, -39.6, -36.6)},
        "buffer": {"mu": (0.2, 0.35, 0.5, 0.65, 0.8)},
    }
    if name not in sweeps:
        raise ConfigError(f"unknown figure preset {name!r}")
    return replace(ExperimentConfig(), **sweeps[name], **kw)
