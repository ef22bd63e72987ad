"""Brute-force map of every partition of a small graph.

Metanodes are all ``B_n`` set partitions, stored as restricted growth strings
(labels assigned in order of first appearance, so blocks are sorted by their
minimum element). Two metanodes are joined when one node relocation turns one
into the other, either into another block or into a fresh singleton.
"""

from __future__ import annotations

import json
from collections import deque
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction
from graphlib import CycleError, TopologicalSorter

from .graph import Graph, Partition
from .potential import Resolution
from .robustness import MoveClass, classify_move, familiarity_index

__all__ = [
    "MAX_NODES",
    "MetaEdge",
    "MetaGraph",
    "OrientedMetaGraph",
    "build_metagraph",
    "canonical",
    "enumerate_partitions",
    "format_blocks",
    "orient",
    "sinks",
    "to_dot",
    "to_json",
]

MAX_NODES = 10

Labels = tuple[int, ...]


def enumerate_partitions(n: int) -> Iterator[Labels]:
    """Yield every set partition of ``0..n-1`` as a restricted growth string."""
    if n > MAX_NODES:
        raise ValueError(f"n={n} exceeds the enumeration cap of {MAX_NODES}")
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        yield ()
        return
    labels = [0] * n

    # labels[i] may range over 0..top+1 where top = max(labels[:i])
    def rec(i: int, top: int) -> Iterator[Labels]:
        if i == n:
            yield tuple(labels)
            return
        for v in range(top + 2):
            labels[i] = v
            yield from rec(i + 1, max(top, v))

    yield from rec(1, 0)


def canonical(labels: Sequence[int]) -> Labels:
    """Relabel in order of first appearance, dropping empty slots."""
    remap: dict[int, int] = {}
    return tuple(remap.setdefault(s, len(remap)) for s in labels)


def blocks_of(labels: Sequence[int]) -> list[list[int]]:
    out: list[list[int]] = []
    for i, s in enumerate(labels):
        if s == len(out):
            out.append([])
        out[s].append(i)
    return out


def format_blocks(labels: Sequence[int]) -> str:
    return "|".join("{" + ",".join(map(str, b)) + "}" for b in blocks_of(canonical(labels)))


@dataclass(frozen=True)
class MetaEdge:
    """Single-node move between metanodes ``u`` and ``v`` (``u < v``), one per pair.

    The counts describe the ``u -> v`` direction; ``v -> u`` negates them.
    """

    u: int
    v: int
    node: int
    delta_d: int
    delta_dhat: int

    @property
    def delta_n(self) -> int:
        return self.delta_d + self.delta_dhat

    @property
    def gamma_star(self) -> Fraction | None:
        return familiarity_index(self.delta_d, self.delta_dhat)

    @property
    def forward(self) -> MoveClass:
        return classify_move((self.delta_d, self.delta_dhat)).kind

    @property
    def backward(self) -> MoveClass:
        return classify_move((-self.delta_d, -self.delta_dhat)).kind

    @property
    def kind(self) -> str:
        """``frustrated`` (bidirectional), ``unidirectional`` or ``neutral``."""
        f = self.forward
        if f is MoveClass.NEUTRAL:
            return "neutral"
        return "frustrated" if f.frustrated else "unidirectional"

    def gain_units(self, gamma: Resolution) -> int:
        return gamma.c * self.delta_d - gamma.b * self.delta_n


@dataclass(frozen=True)
class MetaGraph:
    graph: Graph
    metanodes: tuple[Labels, ...]
    edges: tuple[MetaEdge, ...]

    def index(self, labels: Sequence[int]) -> int:
        return self._lookup()[canonical(labels)]

    def _lookup(self) -> dict[Labels, int]:
        cache = self.__dict__.get("_index")
        if cache is None:
            cache = {p: k for k, p in enumerate(self.metanodes)}
            object.__setattr__(self, "_index", cache)
        return cache

    def partition(self, idx: int, K: int | None = None) -> Partition:
        """Labelled view of a metanode; default ``K = n`` leaves room to isolate."""
        labels = self.metanodes[idx]
        return Partition(list(labels), K if K is not None else max(len(labels), 1))

    def move_distances(self, source: int) -> list[int]:
        adj: list[list[int]] = [[] for _ in self.metanodes]
        for e in self.edges:
            adj[e.u].append(e.v)
            adj[e.v].append(e.u)
        dist = [-1] * len(self.metanodes)
        dist[source] = 0
        todo = deque([source])
        while todo:
            x = todo.popleft()
            for y in adj[x]:
                if dist[y] < 0:
                    dist[y] = dist[x] + 1
                    todo.append(y)
        return dist


def build_metagraph(graph: Graph) -> MetaGraph:
    n = graph.n
    metanodes = tuple(enumerate_partitions(n))
    lookup = {p: k for k, p in enumerate(metanodes)}
    edges: list[MetaEdge] = []
    seen: set[tuple[int, int]] = set()
    for u, labels in enumerate(metanodes):
        nblocks = max(labels, default=-1) + 1
        sizes = [0] * nblocks
        for s in labels:
            sizes[s] += 1
        for i in range(n):
            src = labels[i]
            degs = [0] * (nblocks + 1)
            for j in graph.adjacency[i]:
                degs[labels[j]] += 1
            # slot nblocks stands for a fresh singleton
            for k in range(nblocks + 1):
                if k == src or (k == nblocks and sizes[src] == 1):
                    continue
                moved = list(labels)
                moved[i] = k
                v = lookup[canonical(moved)]
                # {i}|{j} <-> {i,j} is reachable by moving either node, with
                # identical counts; keep the lower-numbered mover only
                if v <= u or (u, v) in seen:
                    continue
                seen.add((u, v))
                n_k = sizes[k] if k < nblocks else 0
                dd = degs[k] - degs[src]
                dn = n_k - sizes[src] + 1
                edges.append(MetaEdge(u, v, i, dd, dn - dd))
    return MetaGraph(graph, metanodes, tuple(edges))


@dataclass(frozen=True)
class OrientedMetaGraph:
    meta: MetaGraph
    gamma: Resolution
    successors: tuple[tuple[int, ...], ...]

    def is_acyclic(self) -> bool:
        ts = TopologicalSorter({u: succ for u, succ in enumerate(self.successors)})
        try:
            ts.prepare()
        except CycleError:
            return False
        return True


def orient(meta: MetaGraph, gamma: Resolution) -> OrientedMetaGraph:
    """Point every edge toward strictly higher potential; drop zero-gain edges."""
    succ: list[list[int]] = [[] for _ in meta.metanodes]
    for e in meta.edges:
        g = e.gain_units(gamma)
        if g > 0:
            succ[e.u].append(e.v)
        elif g < 0:
            succ[e.v].append(e.u)
    return OrientedMetaGraph(meta, gamma, tuple(tuple(s) for s in succ))


def sinks(oriented: OrientedMetaGraph) -> list[int]:
    return [u for u, s in enumerate(oriented.successors) if not s]


def _frac_or_none(x: Fraction | None) -> str:
    return "none" if x is None else f"{x.numerator}/{x.denominator}"


def to_json(meta: MetaGraph, gamma: Resolution | None = None) -> str:
    n = meta.graph.n
    grand = meta.index([0] * n) if n else 0
    singles = meta.index(list(range(n))) if n else 0
    from_grand = meta.move_distances(grand)
    from_singles = meta.move_distances(singles)
    payload: dict = {
        "n": n,
        "metanodes": [
            {
                "id": k,
                "label": format_blocks(p),
                "distance_grand": from_grand[k],
                "distance_singletons": from_singles[k],
            }
            for k, p in enumerate(meta.metanodes)
        ],
        "edges": [
            {
                "source": e.u,
                "target": e.v,
                "node": e.node,
                "delta_d": e.delta_d,
                "delta_dhat": e.delta_dhat,
                "gamma_star": _frac_or_none(e.gamma_star),
                "type": e.kind,
                "forward": e.forward.value,
                "backward": e.backward.value,
            }
            for e in meta.edges
        ],
    }
    if gamma is not None:
        oriented = orient(meta, gamma)
        payload["gamma"] = str(gamma)
        payload["sinks"] = [format_blocks(meta.metanodes[s]) for s in sinks(oriented)]
    return json.dumps(payload, indent=1)


def to_dot(meta: MetaGraph, gamma: Resolution | None = None) -> str:
    """DOT export; oriented (digraph) when ``gamma`` is given."""
    lines = ["digraph metagraph {" if gamma is not None else "graph metagraph {"]
    for k, p in enumerate(meta.metanodes):
        lines.append(f'  {k} [label="{format_blocks(p)}"];')
    if gamma is None:
        for e in meta.edges:
            lines.append(
                f'  {e.u} -- {e.v} [node={e.node}, type="{e.kind}", '
                f'gamma_star="{_frac_or_none(e.gamma_star)}"];'
            )
    else:
        for e in meta.edges:
            g = e.gain_units(gamma)
            if g == 0:
                continue
            a, b = (e.u, e.v) if g > 0 else (e.v, e.u)
            lines.append(
                f'  {a} -> {b} [node={e.node}, type="{e.kind}", '
                f'gamma_star="{_frac_or_none(e.gamma_star)}"];'
            )
    lines.append("}")
    return "\n".join(lines) + "\n"
