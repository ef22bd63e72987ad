"""Community-tracking sweeps over planted-partition graphs.

Each grid cell ``(K, N, p, lambda)`` gets ``samples`` graphs. For sample
``s`` of cell ``c`` the graph seed comes from ``SeedSequence([base, c, s])``
and the noise seed for noise level ``e`` from ``SeedSequence([base, c, s, e])``,
so every noise level and method sees the same graph and results do not
depend on the worker count.
"""

from __future__ import annotations

import csv
import itertools
import os
import time
from collections import defaultdict
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from .dynamics import DynamicsConfig, mirror, one_pass, run_dynamics
from .evalmetrics import ExperimentRecord, mean_ci, summarize
from .graph import Graph, Partition, edge_density
from .potential import Resolution
from .robustness import partition_robustness
from .synthgen import NoiseSpec, SappmSpec, generate, perturb

__all__ = [
    "JOBS_ENV",
    "METHODS",
    "ExperimentGrid",
    "aggregate",
    "default_jobs",
    "full_grid",
    "run_method",
    "track",
    "write_plot_data",
]

METHODS = ("dynamics-queue", "dynamics-best", "one-pass", "mirror")
JOBS_ENV = "CPM_JOBS"


def default_jobs() -> int:
    raw = os.environ.get(JOBS_ENV)
    if raw is None:
        return 1
    try:
        jobs = int(raw)
    except ValueError:
        raise ValueError(f"{JOBS_ENV}={raw!r} is not an integer") from None
    if jobs < 1:
        raise ValueError(f"{JOBS_ENV} must be at least 1")
    return jobs


@dataclass(frozen=True)
class ExperimentGrid:
    """Scaled-down default: 8 cells of n=100 or n=200, 5 samples each."""

    K: Sequence[int] = (2, 4)
    n_total: int | None = None
    N: int | None = 50
    p: Sequence[float] = (0.05, 0.1)
    lam: Sequence[float] = (0.1, 0.5)
    eta: Sequence[float] = (0.1, 0.5, 1.0)
    samples: int = 5
    methods: Sequence[str] = METHODS
    seed: int = 0
    gamma: str | None = None
    dynamics: DynamicsConfig = field(default_factory=DynamicsConfig)

    def __post_init__(self) -> None:
        if not self.methods:
            raise ValueError("at least one method is required")
        bad = [m for m in self.methods if m not in METHODS]
        if bad:
            raise ValueError(f"unknown method(s): {', '.join(bad)}")
        if (self.N is None) == (self.n_total is None):
            raise ValueError("give exactly one of N (per community) or n_total")
        if self.samples < 1:
            raise ValueError("samples must be positive")
        for e in self.eta:
            NoiseSpec(e)
        for K, p, lam in itertools.product(self.K, self.p, self.lam):
            SappmSpec(K, self.block_size(K), p, lam)
        if self.gamma is not None:
            Resolution.of(self.gamma)

    def block_size(self, K: int) -> int:
        return self.N if self.N is not None else self.n_total // K

    def cells(self) -> list[tuple[int, int, float, float]]:
        return [(K, self.block_size(K), p, lam) for K, p, lam in itertools.product(self.K, self.p, self.lam)]


def full_grid(**overrides) -> ExperimentGrid:
    """Full-size grid: n=1020, 500 cells, 100 samples each (hours of CPU)."""
    base = ExperimentGrid(
        K=(2, 3, 4, 5, 6),
        N=None,
        n_total=1020,
        p=tuple(round(0.01 * i, 2) for i in range(1, 11)),
        lam=(0.1, 0.2, 0.3, 0.4, 0.5, 0.55, 0.6, 0.65, 0.7, 0.75),
        eta=(0.1, 0.25, 0.5, 0.75, 1.0),
        samples=100,
    )
    return replace(base, **overrides)


def _seed(*words: int) -> int:
    return int(np.random.SeedSequence(list(words)).generate_state(1, np.uint64)[0] >> np.uint64(1))


def resolve_gamma(graph: Graph, gamma: str | Fraction | Resolution | None) -> Resolution:
    if gamma is not None:
        return Resolution.of(gamma)
    if graph.n < 2:
        return Resolution(0, 1)
    return Resolution.of(edge_density(graph))


def run_method(
    method: str,
    graph: Graph,
    init: Partition,
    gamma: Resolution,
    dynamics: DynamicsConfig | None = None,
) -> tuple[Partition, int, int, float]:
    """Run one method; returns (partition, moves, node evaluations, runtime in ms).

    ``dynamics-queue`` uses ``dynamics`` as given (queue selection by default);
    ``dynamics-best`` forces global-best selection with the best-response rule.
    """
    dynamics = dynamics or DynamicsConfig()
    t0 = time.perf_counter()
    if method == "dynamics-queue":
        out, stats = run_dynamics(graph, init, gamma, dynamics)
        moves, evals = stats.moves, stats.node_evaluations
    elif method == "dynamics-best":
        cfg = replace(dynamics, node_rule="best", selection="global-best")
        out, stats = run_dynamics(graph, init, gamma, cfg)
        moves, evals = stats.moves, stats.node_evaluations
    elif method == "one-pass":
        out, evals = one_pass(graph, init), graph.n
        moves = sum(1 for a, b in zip(init.sigma, out.sigma) if a != b)
    elif method == "mirror":
        out, moves, evals = mirror(init), 0, 0
    else:
        raise ValueError(f"unknown method {method!r}")
    return out, moves, evals, (time.perf_counter() - t0) * 1000.0


def _run_sample(task: tuple[ExperimentGrid, int, int]) -> list[ExperimentRecord]:
    grid, cell_idx, sample = task
    K, N, p, lam = grid.cells()[cell_idx]
    graph_seed = _seed(grid.seed, cell_idx, sample)
    graph, truth = generate(SappmSpec(K, N, p, lam, graph_seed))
    gamma = resolve_gamma(graph, grid.gamma)
    records = []
    for e_idx, eta in enumerate(grid.eta):
        init = perturb(truth, NoiseSpec(eta, _seed(grid.seed, cell_idx, sample, e_idx)))
        for method in grid.methods:
            out, moves, evals, ms = run_method(method, graph, init, gamma, grid.dynamics)
            records.append(
                summarize(
                    seed=graph_seed, K=K, N=N, p=p, lam=lam, eta=eta, method=method,
                    result=out, truth=truth, robustness=float(partition_robustness(graph, out)),
                    moves=moves, evals=evals, runtime_ms=ms,
                )
            )
    return records


def track(grid: ExperimentGrid, jobs: int = 1) -> list[ExperimentRecord]:
    """All records in (cell, sample, eta, method) order regardless of ``jobs``."""
    tasks = [(grid, c, s) for c in range(len(grid.cells())) for s in range(grid.samples)]
    if jobs <= 1 or len(tasks) <= 1:
        batches = map(_run_sample, tasks)
        return [r for batch in batches for r in batch]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return [r for batch in pool.map(_run_sample, tasks, chunksize=1) for r in batch]


PLOT_COLUMNS = (
    "K", "N", "p", "lambda", "eta", "method", "samples",
    "ari_mean", "ari_ci95", "robustness_mean", "robustness_ci95",
    "moves_mean", "moves_ci95", "runtime_ms_mean", "runtime_ms_ci95",
)


def aggregate(records: Sequence[ExperimentRecord]) -> list[dict]:
    """Mean and 1.96*stderr half-width per (K, N, p, lambda, eta, method), first-seen order."""
    groups: dict[tuple, list[ExperimentRecord]] = defaultdict(list)
    for r in records:
        groups[(r.K, r.N, r.p, r.lam, r.eta, r.method)].append(r)
    rows = []
    for (K, N, p, lam, eta, method), rs in groups.items():
        row = {"K": K, "N": N, "p": p, "lambda": lam, "eta": eta, "method": method, "samples": len(rs)}
        for col in ("ari", "robustness", "moves", "runtime_ms"):
            m, h = mean_ci([float(getattr(r, col)) for r in rs])
            row[f"{col}_mean"], row[f"{col}_ci95"] = m, h
        rows.append(row)
    return rows


def write_plot_data(records: Sequence[ExperimentRecord], out) -> None:
    w = csv.DictWriter(out, fieldnames=PLOT_COLUMNS, lineterminator="\n")
    w.writeheader()
    for row in aggregate(records):
        w.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
