"""Seeded Monte Carlo sweeps of randomizer cardinality and concentration checks.

The worst case over *all* pure Gaussian states is replaced by the worst case
over a sample of them (a surrogate net), so every reported maximum is a lower
bound on the true supremum.

Randomness: every work item draws from ``SeedSequence(seed, spawn_key=key)``
with a key built from a stream tag and the item's indices, so results do not
depend on the number of workers or the order in which items finish.
"""
from __future__ import annotations

import csv
import json
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from typing import Optional, Sequence

import numpy as np

from .bounds import concentration_tail
from .channels import apply, fpqc_full, fpqc_paper, fpqc_random_subset, uniform_channel
from .gaussian import random_gaussian_state
from .majorana import MajoranaMonomial
from .metrics import distance_to_mms

log = logging.getLogger(__name__)

WORKERS_ENV = "FPQC_WORKERS"

_STATES, _CHANNELS, _DRAWS, _AUDIT = 0, 1, 2, 3
_TRACE_TOL = 1e-12
_DIST_TOL = 1e-12


def default_workers() -> int:
    return max(1, int(os.environ.get(WORKERS_ENV, "1")))


def _seed(seed: int, *key: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(seed, spawn_key=key)


@dataclass(frozen=True)
class ExperimentConfig:
    modes: int = 3
    p: float = 1
    epsilon: float = 0.1
    num_states: int = 100
    subset_sizes: tuple = (1, 4, 16, 64)
    trials: int = 50
    seed: int = 0
    channel_family: str = "random_monomial"
    # a subset size equal to 4**M uses the whole monomial group instead of a draw
    exhaustive_full: bool = True

    def __post_init__(self):
        object.__setattr__(self, "subset_sizes", tuple(int(n) for n in self.subset_sizes))
        if self.modes < 1:
            raise ValueError("modes must be >= 1")
        if not self.p >= 1:
            raise ValueError("p must be >= 1")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.num_states < 1 or self.trials < 1:
            raise ValueError("num_states and trials must be >= 1")
        if not self.subset_sizes or any(not 1 <= n <= 4**self.modes for n in self.subset_sizes):
            raise ValueError(f"subset sizes must be a nonempty list within 1..{4**self.modes}")
        if self.channel_family not in ("paper", "random_monomial"):
            raise ValueError("channel_family must be 'paper' or 'random_monomial'")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        data = dict(data)
        if data.get("p") in ("inf", "infinity"):
            data["p"] = math.inf
        return cls(**data)

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def to_json(self) -> dict:
        out = asdict(self)
        out["subset_sizes"] = list(self.subset_sizes)
        if math.isinf(self.p):
            out["p"] = "inf"
        return out


def surrogate_net(modes: int, n: int, seed: int = 0) -> list:
    """``n`` independent Haar-random pure Gaussian states, deterministic in ``seed``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return [random_gaussian_state(modes, "pure", _seed(seed, _STATES, i)) for i in range(n)]


def _audited_distances(ch, densities: np.ndarray, p: float) -> np.ndarray:
    out = apply(ch, densities)
    tr = np.trace(out, axis1=-2, axis2=-1)
    if np.max(np.abs(tr - 1)) > _TRACE_TOL:
        raise ArithmeticError("channel failed the trace-preservation audit")
    dist = np.atleast_1d(distance_to_mms(out, p))
    if np.any(dist < -_DIST_TOL) or np.any(dist > 2 + _DIST_TOL):
        raise ArithmeticError("distance outside [0, 2]")
    return dist


# worker-side copy of the surrogate densities, set once per process
_DENSITIES: Optional[np.ndarray] = None


def _init_worker(densities: np.ndarray) -> None:
    global _DENSITIES
    _DENSITIES = densities


def _map(fn, items: list, workers: int, densities: np.ndarray) -> list:
    if workers <= 1 or len(items) <= 1:
        _init_worker(densities)
        return [fn(item) for item in items]
    chunk = max(1, len(items) // (4 * workers))
    with ProcessPoolExecutor(workers, initializer=_init_worker, initargs=(densities,)) as pool:
        return list(pool.map(fn, items, chunksize=chunk))


def _sweep_item(item: tuple) -> np.ndarray:
    modes, family, size, size_idx, trial, seed, p = item
    if family == "paper":
        ch = fpqc_paper(modes)
    elif family == "full":
        ch = fpqc_full(modes)
    else:
        ch = fpqc_random_subset(modes, size, np.random.default_rng(_seed(seed, _CHANNELS, size_idx, trial)))
    return _audited_distances(ch, _DENSITIES, p)


@dataclass(frozen=True)
class SweepRow:
    subset_size: int
    trials: int
    max_distance: float
    mean_distance: float
    median_max_distance: float
    q50: float
    q90: float
    q99: float
    pass_fraction: float


SWEEP_STATISTICS = tuple(f.name for f in fields(SweepRow) if f.name != "subset_size")


@dataclass(frozen=True)
class SweepResult:
    config: ExperimentConfig
    rows: list = field(default_factory=list)

    def row(self, subset_size: int) -> SweepRow:
        for r in self.rows:
            if r.subset_size == subset_size:
                return r
        raise KeyError(subset_size)


def _sweep_plan(config: ExperimentConfig) -> list:
    """``(size, family, trials)`` per reported row."""
    if config.channel_family == "paper":
        return [(2 * config.modes, "paper", 1)]
    plan = []
    for n in config.subset_sizes:
        if config.exhaustive_full and n == 4**config.modes:
            plan.append((n, "full", 1))
        else:
            plan.append((n, "random_monomial", config.trials))
    return plan


def sweep_cardinality(config: ExperimentConfig, workers: Optional[int] = None) -> SweepResult:
    """Distance of channel outputs to the maximally mixed state versus subset size.

    Statistics per size are taken over all (trial, state) pairs, except
    ``median_max_distance`` (median over trials of the worst state) and
    ``pass_fraction`` (fraction of trials whose worst state is within epsilon).
    """
    workers = default_workers() if workers is None else workers
    states = surrogate_net(config.modes, config.num_states, config.seed)
    densities = np.array([s.density() for s in states])
    plan = _sweep_plan(config)
    items = [
        (config.modes, family, size, idx, trial, config.seed, config.p)
        for idx, (size, family, trials) in enumerate(plan)
        for trial in range(trials)
    ]
    log.info("sweep: %d work items over %d sizes, %d workers", len(items), len(plan), workers)
    results = _map(_sweep_item, items, workers, densities)
    rows, pos = [], 0
    for size, _, trials in plan:
        dist = np.array(results[pos:pos + trials])
        pos += trials
        worst = dist.max(axis=1)
        q50, q90, q99 = np.quantile(dist, [0.5, 0.9, 0.99])
        rows.append(SweepRow(
            subset_size=size,
            trials=trials,
            max_distance=float(dist.max()),
            mean_distance=float(dist.mean()),
            median_max_distance=float(np.median(worst)),
            q50=float(q50),
            q90=float(q90),
            q99=float(q99),
            pass_fraction=float(np.mean(worst <= config.epsilon)),
        ))
        log.info("sweep: |U|=%d median worst distance %.4g", size, rows[-1].median_max_distance)
    return SweepResult(config, rows)


def _draw_monomials(modes: int, n: int, rng: np.random.Generator) -> list:
    return [MajoranaMonomial.from_index(modes, int(i)).hermitian() for i in rng.integers(0, 4**modes, size=n)]


def _concentration_item(item: tuple) -> tuple:
    """``(Y, |Y - Y'|)`` for one channel draw and one single-element resample."""
    modes, size, size_idx, draw, seed, p = item
    rng = np.random.default_rng(_seed(seed, _DRAWS, size_idx, draw))
    monomials = _draw_monomials(modes, size, rng)
    rho = _DENSITIES[:1]
    y = float(_audited_distances(uniform_channel(monomials), rho, p)[0])
    audit = np.random.default_rng(_seed(seed, _AUDIT, size_idx, draw))
    swapped = list(monomials)
    swapped[int(audit.integers(size))] = _draw_monomials(modes, 1, audit)[0]
    y2 = float(_audited_distances(uniform_channel(swapped), rho, p)[0])
    return y, abs(y - y2)


@dataclass(frozen=True)
class ConcentrationRow:
    subset_size: int
    t: float
    threshold: float
    threshold_hilbert: float
    tail_frequency: float
    tail_frequency_hilbert: float
    bound: float
    slack: float
    within_bound: bool


@dataclass(frozen=True)
class AuditRow:
    subset_size: int
    draws: int
    mean_y: float
    max_bounded_difference: float
    limit: float
    within_limit: bool


@dataclass(frozen=True)
class ConcentrationResult:
    config: ExperimentConfig
    t_grid: tuple
    rows: list = field(default_factory=list)
    audits: list = field(default_factory=list)


def concentration_experiment(config: ExperimentConfig, t_grid: Sequence[float], workers: Optional[int] = None) -> ConcentrationResult:
    """Empirical ``Pr[Y >= t + centering]`` over ``config.trials`` channel draws per size.

    ``Y`` is the distance of the channel output for the first surrogate state.
    Each row is compared with ``exp(-|U| t**2 / 2)`` plus 3 binomial standard
    deviations; ``threshold_hilbert`` repeats the test with ``2**M`` in place of
    ``2M`` in the centering term. Every draw also resamples one Kraus element
    and records ``|Y - Y'|``, which must not exceed ``2/|U|``.
    """
    t_grid = tuple(float(t) for t in t_grid)
    if any(t < 0 for t in t_grid):
        raise ValueError("t values must be non-negative")
    workers = default_workers() if workers is None else workers
    densities = np.array([surrogate_net(config.modes, 1, config.seed)[0].density()])
    items = [
        (config.modes, size, idx, draw, config.seed, config.p)
        for idx, size in enumerate(config.subset_sizes)
        for draw in range(config.trials)
    ]
    log.info("concentration: %d draws, %d workers", len(items), workers)
    results = _map(_concentration_item, items, workers, densities)
    rows, audits = [], []
    for idx, size in enumerate(config.subset_sizes):
        chunk = results[idx * config.trials:(idx + 1) * config.trials]
        y = np.array([r[0] for r in chunk])
        diffs = np.array([r[1] for r in chunk])
        limit = 2 / size
        audits.append(AuditRow(size, len(y), float(y.mean()), float(diffs.max()), limit,
                               bool(diffs.max() <= limit + 1e-12)))
        for t in t_grid:
            tail = concentration_tail(t, config.modes, size)
            thr = t + tail.centering
            thr_h = t + tail.centering_hilbert
            freq = float(np.mean(y >= thr))
            slack = 3 * math.sqrt(tail.bound * (1 - tail.bound) / len(y))
            rows.append(ConcentrationRow(
                subset_size=size, t=t, threshold=thr, threshold_hilbert=thr_h,
                tail_frequency=freq, tail_frequency_hilbert=float(np.mean(y >= thr_h)),
                bound=tail.bound, slack=slack, within_bound=freq <= tail.bound + slack,
            ))
    return ConcentrationResult(config, t_grid, rows, audits)


# ---- export ---------------------------------------------------------------

CSV_HEADER = ("subset_size", "statistic", "value")

_NUMBER = {"type": "number"}
SWEEP_SCHEMA = {
    "type": "object",
    "required": ["kind", "config", "rows"],
    "properties": {
        "kind": {"const": "sweep"},
        "config": {"type": "object"},
        "rows": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["subset_size", *SWEEP_STATISTICS],
                "properties": {"subset_size": {"type": "integer"}, **{s: _NUMBER for s in SWEEP_STATISTICS}},
            },
        },
    },
}
CONCENTRATION_SCHEMA = {
    "type": "object",
    "required": ["kind", "config", "t_grid", "rows", "audits"],
    "properties": {
        "kind": {"const": "concentration"},
        "config": {"type": "object"},
        "t_grid": {"type": "array", "items": _NUMBER},
        "rows": {
            "type": "array",
            "items": {"type": "object", "required": [f.name for f in fields(ConcentrationRow)]},
        },
        "audits": {
            "type": "array",
            "items": {"type": "object", "required": [f.name for f in fields(AuditRow)]},
        },
    },
}


def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    return format(float(value), ".17g")


def _csv_records(results) -> list:
    if results is None:
        return []
    if isinstance(results, SweepResult):
        return [(r.subset_size, s, getattr(r, s)) for r in results.rows for s in SWEEP_STATISTICS]
    if isinstance(results, ConcentrationResult):
        out = []
        for a in results.audits:
            out += [(a.subset_size, s, getattr(a, s)) for s in ("draws", "mean_y", "max_bounded_difference", "limit", "within_limit")]
        for r in results.rows:
            t = _fmt(r.t)
            out += [(r.subset_size, f"{s}[t={t}]", getattr(r, s))
                    for s in ("threshold", "threshold_hilbert", "tail_frequency", "tail_frequency_hilbert",
                              "bound", "slack", "within_bound")]
        return out
    raise TypeError(f"cannot export {type(results).__name__}")


def to_json(results) -> dict:
    if isinstance(results, SweepResult):
        return {"kind": "sweep", "config": results.config.to_json(), "rows": [asdict(r) for r in results.rows]}
    if isinstance(results, ConcentrationResult):
        return {
            "kind": "concentration",
            "config": results.config.to_json(),
            "t_grid": list(results.t_grid),
            "rows": [asdict(r) for r in results.rows],
            "audits": [asdict(a) for a in results.audits],
        }
    raise TypeError(f"cannot export {type(results).__name__}")


def export(results, path, format: str = "csv") -> None:
    """Write results as CSV ``(subset_size, statistic, value)`` rows or as JSON.

    ``results=None`` writes a header-only CSV.
    """
    if format == "csv":
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_HEADER)
            for size, stat, value in _csv_records(results):
                writer.writerow((size, stat, _fmt(value)))
    elif format == "json":
        with open(path, "w") as fh:
            json.dump(to_json(results), fh, indent=2)
            fh.write("\n")
    else:
        raise ValueError("format must be 'csv' or 'json'")


def read_csv(path) -> list:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != CSV_HEADER:
            raise ValueError("unexpected CSV header")
        return [(int(size), stat, float(value)) for size, stat, value in reader]
