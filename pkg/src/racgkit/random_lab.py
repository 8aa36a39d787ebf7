"""Seeded Erdos-Renyi experiments on random presentation graphs.

Every trial draws from its own counter-based Philox stream keyed by
``(seed, trial_index)``, so results do not depend on how trials are spread
over worker processes.
"""

from __future__ import annotations

import csv
import io
import logging
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np
from scipy.stats import binomtest

from .certify import DEFAULT_BUDGET, Classification, classify_divergence, search_stable_cycle
from .graph_core import Graph, GraphError, induced_subgraph, is_nondegenerate_join
from .square_cfs import ChainMode, is_cfs

logger = logging.getLogger(__name__)

CSV_COLUMNS = ("trial", "digest", "is_join", "is_cfs", "witness_found", "witness_len",
               "classification", "ms")
SCHEMA_VERSION = 1


@dataclass(frozen=True)
class ExperimentConfig:
    n: int
    trials: int
    seed: int
    p: float | None = None
    c: float | None = None
    alpha: float | None = None
    budget: int = DEFAULT_BUDGET
    mode: ChainMode = ChainMode.DIAGONAL
    timing: bool = False

    def __post_init__(self) -> None:
        if self.n < 1:
            raise GraphError("n must be at least 1")
        if self.trials < 1:
            raise GraphError("trials must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise GraphError("seed must be a 64-bit unsigned integer")
        if self.p is None and (self.c is None or self.alpha is None):
            raise GraphError("give either p or both c and alpha")
        if self.p is not None and (self.c is not None or self.alpha is not None):
            raise GraphError("p and (c, alpha) are mutually exclusive")
        object.__setattr__(self, "mode", ChainMode(self.mode))
        p = self.density
        if not 0.0 <= p <= 1.0:
            raise GraphError(f"edge probability {p} outside [0, 1]")

    @property
    def density(self) -> float:
        if self.p is not None:
            return float(self.p)
        return float(self.c * self.n ** (-self.alpha))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["mode"] = self.mode.value
        d["density"] = self.density
        return d


@dataclass(frozen=True)
class TrialRecord:
    trial_index: int
    graph_digest: str
    is_join: bool
    is_cfs: bool
    witness_found: bool
    witness_length: int | None
    classification: Classification
    elapsed_ms: float | None
    budget_exhausted: bool

    def csv_row(self) -> list[str]:
        return [
            str(self.trial_index),
            self.graph_digest,
            str(int(self.is_join)),
            str(int(self.is_cfs)),
            str(int(self.witness_found)),
            "" if self.witness_length is None else str(self.witness_length),
            self.classification.value,
            "" if self.elapsed_ms is None else f"{self.elapsed_ms:.1f}",
        ]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["classification"] = self.classification.value
        return d


@dataclass(frozen=True)
class Fraction:
    count: int
    total: int
    low: float
    high: float

    @property
    def value(self) -> float:
        return self.count / self.total

    def to_dict(self) -> dict:
        return {"count": self.count, "total": self.total, "fraction": self.value,
                "ci95": [self.low, self.high]}


def wilson(count: int, total: int) -> Fraction:
    ci = binomtest(count, total).proportion_ci(confidence_level=0.95, method="wilson")
    return Fraction(count, total, float(ci.low), float(ci.high))


@dataclass(frozen=True)
class ExperimentStats:
    config: ExperimentConfig
    fractions: dict[str, Fraction]
    classifications: dict[str, int]
    witness_lengths: dict[int, int]
    runtime_s: float

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "experiment_stats",
            "config": self.config.to_dict(),
            "fractions": {k: f.to_dict() for k, f in self.fractions.items()},
            "classifications": self.classifications,
            "witness_length_histogram": {str(k): v for k, v in self.witness_lengths.items()},
            "witness_fraction_is_lower_bound": True,
            "runtime_s": self.runtime_s,
        }


def trial_stream(seed: int, trial_index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=(seed << 64) | trial_index))


def sample_gnp(n: int, p: float, stream: np.random.Generator) -> Graph:
    """G(n, p) on vertices ``v0 .. v{n-1}``; pairs drawn in lexicographic order."""
    if n < 1:
        raise GraphError("n must be at least 1")
    if not 0.0 <= p <= 1.0:
        raise GraphError(f"edge probability {p} outside [0, 1]")
    iu, ju = np.triu_indices(n, k=1)
    hits = stream.random(len(iu)) < p
    rows = [0] * n
    for i, j in zip(iu[hits].tolist(), ju[hits].tolist()):
        rows[i] |= 1 << j
        rows[j] |= 1 << i
    return Graph([f"v{i}" for i in range(n)], rows)


def evaluate_graph(g: Graph, trial_index: int, budget: int | None,
                   mode: ChainMode = ChainMode.DIAGONAL, timing: bool = False) -> TrialRecord:
    start = time.perf_counter()
    report = classify_divergence(g)
    stripped = induced_subgraph(g, g.full_mask & ~g.cone_mask())
    joined = stripped.n > 0 and is_nondegenerate_join(stripped)
    if report.cfs is not None and report.cfs.mode is mode:
        cfs = report.cfs.holds
    else:
        cfs = is_cfs(g, mode).holds
    search = search_stable_cycle(g, budget=budget)
    cert = search.certificate
    elapsed = (time.perf_counter() - start) * 1000 if timing else None
    return TrialRecord(
        trial_index=trial_index,
        graph_digest=g.digest[:16],
        is_join=joined,
        is_cfs=cfs,
        witness_found=cert is not None,
        witness_length=None if cert is None else cert.length,
        classification=report.classification,
        elapsed_ms=elapsed,
        budget_exhausted=search.exhausted_budget,
    )


def run_trial(cfg: ExperimentConfig, trial_index: int,
              graph_factory: Callable[[int], Graph] | None = None) -> TrialRecord:
    if graph_factory is not None:
        g = graph_factory(trial_index)
    else:
        g = sample_gnp(cfg.n, cfg.density, trial_stream(cfg.seed, trial_index))
    return evaluate_graph(g, trial_index, cfg.budget, cfg.mode, cfg.timing)


def _run_chunk(args: tuple[ExperimentConfig, list[int]]) -> list[TrialRecord]:
    cfg, indices = args
    return [run_trial(cfg, t) for t in indices]


def summarize(cfg: ExperimentConfig, records: list[TrialRecord], runtime_s: float) -> ExperimentStats:
    total = len(records)
    counts = {
        "is_join": sum(r.is_join for r in records),
        "is_cfs": sum(r.is_cfs for r in records),
        "witness_found": sum(r.witness_found for r in records),
        "quadratic": sum(r.classification is Classification.QUADRATIC for r in records),
        "budget_exhausted": sum(r.budget_exhausted for r in records),
    }
    classes = Counter(r.classification.value for r in records)
    lengths = Counter(r.witness_length for r in records if r.witness_length is not None)
    return ExperimentStats(
        config=cfg,
        fractions={k: wilson(v, total) for k, v in counts.items()},
        classifications={c.value: classes.get(c.value, 0) for c in Classification},
        witness_lengths=dict(sorted(lengths.items())),
        runtime_s=runtime_s,
    )


def run_experiment(cfg: ExperimentConfig, workers: int = 1,
                   graph_factory: Callable[[int], Graph] | None = None,
                   ) -> tuple[ExperimentStats, list[TrialRecord]]:
    """Run all trials and aggregate in trial order.

    ``graph_factory`` replaces sampling (it must be picklable when
    ``workers > 1``).
    """
    start = time.perf_counter()
    indices = list(range(cfg.trials))
    if workers <= 1:
        records = [run_trial(cfg, t, graph_factory) for t in indices]
    else:
        if graph_factory is not None:
            raise GraphError("graph_factory is only supported with a single worker")
        chunks = [indices[k::workers] for k in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = [r for part in pool.map(_run_chunk, [(cfg, c) for c in chunks if c])
                       for r in part]
    records.sort(key=lambda r: r.trial_index)
    runtime = time.perf_counter() - start
    logger.info("ran %d trials in %.2fs", cfg.trials, runtime)
    return summarize(cfg, records, runtime), records


def records_to_csv(records: list[TrialRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow(r.csv_row())
    return buf.getvalue()
