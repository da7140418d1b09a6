"""Monte Carlo sweep engine over (n, d, noise-multiple) grids.

Every trial is a pure function of its own seed, derived from the master seed
and the trial's grid coordinates via the splittable scheme in
``model.derive_seed(master_seed, n_index, d_index, sigma_index, trial_index)``.
Trials may therefore run in any order or in parallel; records are returned in
grid order regardless, so serial and parallel runs produce identical results
except for the wall-clock column.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

import numpy as np

from .matcher import SIGN_ENUMERATION_CAP, match_distance, umeyama_match
from .metrics import ThresholdMode, score, threshold_sigma
from .model import MAX_SEED, ModelKind, derive_seed, observe_distance, observe_dot, sample_instance

TRIAL_CSV_HEADER = (
    "n,d,sigma,sigma_multiple,model_kind,trial_index,seed,exact,"
    "mismatched_vertices,hamming_entries,within_bound,objective,runtime_ms"
)
AGGREGATE_CSV_HEADER = (
    "n,d,sigma,sigma_multiple,model_kind,trials,exact_rate,"
    "mean_mismatched_vertices,within_bound_rate"
)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


@dataclass
class SweepConfig:
    """Grid description for one sweep; noise is given as multiples of the threshold scale."""

    n_values: List[int]
    d_values: List[int]
    sigma_multipliers: List[float]
    threshold_mode: ThresholdMode
    model_kind: ModelKind
    trials: int = 20
    master_seed: int = 0
    keep_trace: bool = False

    def __post_init__(self):
        if not self.n_values or not self.d_values or not self.sigma_multipliers:
            raise ValueError("n_values, d_values, and sigma_multipliers must be non-empty")
        if self.trials < 1:
            raise ValueError(f"need at least one trial per cell, got {self.trials}")
        if any(m < 0 for m in self.sigma_multipliers):
            raise ValueError("sigma multipliers must be non-negative")
        if max(self.d_values) > SIGN_ENUMERATION_CAP:
            raise ValueError(f"every d must be <= {SIGN_ENUMERATION_CAP}")
        if max(self.d_values) > min(self.n_values):
            raise ValueError("every d must be <= the smallest n in the grid")
        if not 0 <= int(self.master_seed) <= MAX_SEED:
            raise ValueError(f"master seed must fit in 64 unsigned bits, got {self.master_seed}")

    @classmethod
    def from_dict(cls, payload: dict) -> "SweepConfig":
        """Build a config from parsed JSON with string enum values."""
        if not isinstance(payload, dict):
            raise ValueError("sweep config must be a JSON object")
        known = {
            "n_values",
            "d_values",
            "sigma_multipliers",
            "threshold_mode",
            "model_kind",
            "trials",
            "master_seed",
            "keep_trace",
        }
        unknown = set(payload) - known
        if unknown:
            raise ValueError(f"unknown sweep config keys: {sorted(unknown)}")
        missing = {"n_values", "d_values", "sigma_multipliers", "threshold_mode", "model_kind"} - set(payload)
        if missing:
            raise ValueError(f"missing sweep config keys: {sorted(missing)}")
        try:
            mode = ThresholdMode(payload["threshold_mode"])
        except ValueError:
            raise ValueError(
                f"threshold_mode must be one of {[m.value for m in ThresholdMode]}, "
                f"got {payload['threshold_mode']!r}"
            )
        try:
            kind = ModelKind(payload["model_kind"])
        except ValueError:
            raise ValueError(
                f"model_kind must be one of {[k.value for k in ModelKind]}, "
                f"got {payload['model_kind']!r}"
            )
        return cls(
            n_values=[int(v) for v in payload["n_values"]],
            d_values=[int(v) for v in payload["d_values"]],
            sigma_multipliers=[float(v) for v in payload["sigma_multipliers"]],
            threshold_mode=mode,
            model_kind=kind,
            trials=int(payload.get("trials", 20)),
            master_seed=int(payload.get("master_seed", 0)),
            keep_trace=bool(payload.get("keep_trace", False)),
        )


@dataclass
class TrialRecord:
    """Outcome of one matching trial; everything except runtime_ms is seed-determined."""

    n: int
    d: int
    sigma: float
    sigma_multiple: float
    model_kind: ModelKind
    trial_index: int
    seed: int
    exact: bool
    mismatched_vertices: int
    hamming_entries: int
    within_bound: bool
    objective: float
    runtime_ms: float

    def csv_row(self) -> str:
        return ",".join(
            _fmt(v)
            for v in (
                self.n,
                self.d,
                self.sigma,
                self.sigma_multiple,
                self.model_kind.value,
                self.trial_index,
                self.seed,
                self.exact,
                self.mismatched_vertices,
                self.hamming_entries,
                self.within_bound,
                self.objective,
                self.runtime_ms,
            )
        )


@dataclass
class CellAggregate:
    """Per-cell success statistics over the trials of one grid cell."""

    n: int
    d: int
    sigma: float
    sigma_multiple: float
    model_kind: ModelKind
    trials: int
    exact_rate: float
    mean_mismatched_vertices: float
    within_bound_rate: float

    def csv_row(self) -> str:
        return ",".join(
            _fmt(v)
            for v in (
                self.n,
                self.d,
                self.sigma,
                self.sigma_multiple,
                self.model_kind.value,
                self.trials,
                self.exact_rate,
                self.mean_mismatched_vertices,
                self.within_bound_rate,
            )
        )


@dataclass
class SweepResult:
    config: SweepConfig
    records: List[TrialRecord]
    aggregates: List[CellAggregate]


def run_trial(
    n: int,
    d: int,
    sigma: float,
    model_kind: ModelKind,
    seed: int,
    sigma_multiple: float = float("nan"),
    trial_index: int = 0,
    keep_trace: bool = False,
) -> TrialRecord:
    """Sample, observe, match, and score one instance; deterministic given the seed.

    ``keep_trace`` is forwarded to the matcher; the per-sign trace is not part
    of the scalar record, so it only matters when profiling the matcher itself.
    """
    start = time.perf_counter()
    instance = sample_instance(n, d, sigma, seed)
    if model_kind is ModelKind.DOT_PRODUCT:
        pair = observe_dot(instance)
        result = umeyama_match(pair.a, pair.b, d, keep_trace=keep_trace)
    else:
        pair = observe_distance(instance)
        result = match_distance(pair.a, pair.b, d, keep_trace=keep_trace)
    outcome = score(result.pi_hat, instance.truth, n, d, sigma)
    runtime_ms = (time.perf_counter() - start) * 1e3
    return TrialRecord(
        n=n,
        d=d,
        sigma=float(sigma),
        sigma_multiple=float(sigma_multiple),
        model_kind=model_kind,
        trial_index=trial_index,
        seed=int(seed),
        exact=outcome.exact,
        mismatched_vertices=outcome.mismatched_vertices,
        hamming_entries=outcome.hamming_entries,
        within_bound=outcome.within_bound,
        objective=result.objective,
        runtime_ms=runtime_ms,
    )


def aggregate_records(records: Sequence[TrialRecord]) -> List[CellAggregate]:
    """Group records by (n, d, sigma_multiple, model_kind) in first-seen order."""
    groups: dict = {}
    order = []
    for record in records:
        key = (record.n, record.d, record.sigma_multiple, record.model_kind)
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(record)
    aggregates = []
    for key in order:
        cell = groups[key]
        aggregates.append(
            CellAggregate(
                n=key[0],
                d=key[1],
                sigma=cell[0].sigma,
                sigma_multiple=key[2],
                model_kind=key[3],
                trials=len(cell),
                exact_rate=float(np.mean([r.exact for r in cell])),
                mean_mismatched_vertices=float(np.mean([r.mismatched_vertices for r in cell])),
                within_bound_rate=float(np.mean([r.within_bound for r in cell])),
            )
        )
    return aggregates


def run_sweep(
    config: SweepConfig,
    max_workers: Optional[int] = None,
    on_record: Optional[Callable[[TrialRecord], None]] = None,
) -> SweepResult:
    """Run the full cross-product grid; output is independent of execution order.

    ``max_workers=None`` runs serially; an integer >= 2 runs trials on a thread
    pool. Records stream to ``on_record`` (when given) and are returned in grid
    order either way.
    """
    tasks = []
    for i_n, n in enumerate(config.n_values):
        for i_d, d in enumerate(config.d_values):
            base = threshold_sigma(n, d, config.threshold_mode)
            for i_s, multiplier in enumerate(config.sigma_multipliers):
                sigma = multiplier * base
                for t in range(config.trials):
                    seed = derive_seed(config.master_seed, i_n, i_d, i_s, t)
                    tasks.append((n, d, sigma, config.model_kind, seed, multiplier, t))

    def execute(task) -> TrialRecord:
        n, d, sigma, kind, seed, multiplier, t = task
        return run_trial(
            n, d, sigma, kind, seed,
            sigma_multiple=multiplier, trial_index=t, keep_trace=config.keep_trace,
        )

    records: List[TrialRecord] = []
    if max_workers is not None and max_workers >= 2:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            for record in pool.map(execute, tasks):
                records.append(record)
                if on_record is not None:
                    on_record(record)
    else:
        for task in tasks:
            record = execute(task)
            records.append(record)
            if on_record is not None:
                on_record(record)
    return SweepResult(config=config, records=records, aggregates=aggregate_records(records))


def trials_csv(records: Sequence[TrialRecord]) -> str:
    lines = [TRIAL_CSV_HEADER]
    lines.extend(record.csv_row() for record in records)
    return "\n".join(lines) + "\n"


def aggregates_csv(aggregates: Sequence[CellAggregate]) -> str:
    lines = [AGGREGATE_CSV_HEADER]
    lines.extend(aggregate.csv_row() for aggregate in aggregates)
    return "\n".join(lines) + "\n"
