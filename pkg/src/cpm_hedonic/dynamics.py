"""Better- and best-response dynamics for the CPM hedonic game.

The queue variant follows the Leiden local-move phase: a FIFO of candidate
nodes, refilled with the neighbours of each moved node that sit outside its
new community. Passes repeat until one full pass moves nothing.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import Literal

from .graph import Graph, Partition, _check_node, _check_slot, slot_degrees
from .potential import MoveGain, Resolution, ScaledValue, move_gain, partition_potential

__all__ = [
    "DynamicsConfig",
    "EquilibriumCheck",
    "RunStats",
    "apply_move",
    "best_move",
    "is_equilibrium",
    "mirror",
    "one_pass",
    "run_dynamics",
]


@dataclass(frozen=True)
class DynamicsConfig:
    node_rule: Literal["best", "better"] = "best"
    selection: Literal["queue", "global-best"] = "queue"
    queue_init: Literal["id", "shuffle"] = "id"
    tie_break: Literal["lowest-index"] = "lowest-index"
    allow_empty_target: bool = True
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.node_rule not in ("best", "better"):
            raise ValueError(f"unknown node rule {self.node_rule!r}")
        if self.selection not in ("queue", "global-best"):
            raise ValueError(f"unknown selection {self.selection!r}")
        if self.queue_init not in ("id", "shuffle"):
            raise ValueError(f"unknown queue init {self.queue_init!r}")
        if self.tie_break != "lowest-index":
            raise ValueError(f"unknown tie break {self.tie_break!r}")
        if self.selection == "global-best" and self.node_rule != "best":
            raise ValueError("global-best selection requires the node-best rule")


@dataclass
class RunStats:
    moves: int = 0
    node_evaluations: int = 0
    final_potential: ScaledValue | None = None
    trajectory: list[tuple[int, int, int, int]] | None = None


def _candidate_move(
    degs: list[int],
    sizes: list[int],
    source: int,
    gamma: Resolution,
    rule: str,
    allow_empty: bool,
) -> tuple[int, int] | None:
    """Pick ``(target, gain_units)`` for one node, or None if no strict gain.

    Ties (between targets, or with staying put) go to the lowest slot index;
    staying put always wins a tie.
    """
    b, c = gamma.b, gamma.c
    d_src = degs[source]
    n_src = sizes[source]
    best: tuple[int, int] | None = None
    for k, d_k in enumerate(degs):
        if k == source:
            continue
        n_k = sizes[k]
        if n_k == 0 and not allow_empty:
            continue
        units = c * (d_k - d_src) - b * (n_k - n_src + 1)
        if units <= 0:
            continue
        if rule == "better":
            return k, units
        if best is None or units > best[1]:
            best = (k, units)
    return best


def best_move(
    graph: Graph, part: Partition, i: int, gamma: Resolution, allow_empty_target: bool = True
) -> MoveGain | None:
    """Node ``i``'s maximal strictly improving move, or None."""
    degs = slot_degrees(graph, part.sigma, i, part.K)
    pick = _candidate_move(degs, part.sizes, part.sigma[i], gamma, "best", allow_empty_target)
    if pick is None:
        return None
    return move_gain(graph, part, i, pick[0], gamma)


def apply_move(graph: Graph, part: Partition, i: int, target: int, gamma: Resolution) -> MoveGain:
    """Move ``i`` to ``target`` in place and return the realised gain.

    Non-improving moves are allowed here; only :func:`run_dynamics` refuses them.
    """
    _check_node(graph, i)
    _check_slot(part, target)
    gain = move_gain(graph, part, i, target, gamma)
    part.move(i, target)
    return gain


def _run_queue(graph: Graph, part: Partition, gamma: Resolution, config: DynamicsConfig, stats: RunStats) -> None:
    n = graph.n
    sigma, sizes, K = part.sigma, part.sizes, part.K
    rng = random.Random(config.seed)
    changed = True
    while changed:
        changed = False
        order = list(range(n))
        if config.queue_init == "shuffle":
            rng.shuffle(order)
        queue = deque(order)
        queued = [True] * n
        while queue:
            i = queue.popleft()
            queued[i] = False
            stats.node_evaluations += 1
            degs = slot_degrees(graph, sigma, i, K)
            source = sigma[i]
            pick = _candidate_move(degs, sizes, source, gamma, config.node_rule, config.allow_empty_target)
            if pick is None:
                continue
            target, units = pick
            part.move(i, target)
            stats.moves += 1
            if stats.trajectory is not None:
                stats.trajectory.append((i, source, target, units))
            changed = True
            for j in graph.adjacency[i]:
                if sigma[j] != target and not queued[j]:
                    queued[j] = True
                    queue.append(j)


def _run_global_best(graph: Graph, part: Partition, gamma: Resolution, config: DynamicsConfig, stats: RunStats) -> None:
    sigma, sizes, K = part.sigma, part.sizes, part.K
    while True:
        chosen: tuple[int, int, int] | None = None
        for i in range(graph.n):
            stats.node_evaluations += 1
            degs = slot_degrees(graph, sigma, i, K)
            pick = _candidate_move(degs, sizes, sigma[i], gamma, "best", config.allow_empty_target)
            if pick is not None and (chosen is None or pick[1] > chosen[2]):
                chosen = (i, pick[0], pick[1])
        if chosen is None:
            return
        i, target, units = chosen
        source = sigma[i]
        part.move(i, target)
        stats.moves += 1
        if stats.trajectory is not None:
            stats.trajectory.append((i, source, target, units))


def run_dynamics(
    graph: Graph,
    part0: Partition,
    gamma: Resolution,
    config: DynamicsConfig | None = None,
    trace: bool = False,
) -> tuple[Partition, RunStats]:
    """Apply strictly improving unilateral moves until none remains.

    The input partition is not modified. Termination is guaranteed for
    rational ``gamma``: every move raises the potential by at least ``1/c``.
    """
    config = config or DynamicsConfig()
    if part0.n != graph.n:
        raise ValueError(f"partition covers {part0.n} nodes, graph has {graph.n}")
    part = part0.copy()
    stats = RunStats(trajectory=[] if trace else None)
    if config.selection == "queue":
        _run_queue(graph, part, gamma, config, stats)
    else:
        _run_global_best(graph, part, gamma, config, stats)
    stats.final_potential = partition_potential(graph, part, gamma)
    return part, stats


@dataclass(frozen=True)
class EquilibriumCheck:
    stable: bool
    witness: MoveGain | None = field(default=None)

    def __bool__(self) -> bool:
        return self.stable


def is_equilibrium(graph: Graph, part: Partition, gamma: Resolution, allow_empty_target: bool = True) -> EquilibriumCheck:
    """True iff no node gains strictly by moving to any of the K slots.

    Otherwise the witness is the best move of the lowest-id unstable node.
    """
    for i in range(graph.n):
        move = best_move(graph, part, i, gamma, allow_empty_target)
        if move is not None:
            return EquilibriumCheck(False, move)
    return EquilibriumCheck(True)


def one_pass(graph: Graph, part: Partition) -> Partition:
    """Move every node with strictly more neighbours elsewhere, all at once.

    Targets are chosen against the original membership (lowest slot on ties).
    """
    out = part.copy()
    for i in range(graph.n):
        degs = slot_degrees(graph, part.sigma, i, part.K)
        here = degs[part.sigma[i]]
        target, best = -1, here
        for k, d in enumerate(degs):
            if k != part.sigma[i] and d > best:
                target, best = k, d
        if target >= 0:
            out.move(i, target)
    return out


def mirror(part: Partition) -> Partition:
    return part.copy()
