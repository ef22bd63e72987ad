"""Simple undirected graphs, K-slot partitions and community degree counts."""

from __future__ import annotations

import json
from bisect import bisect_left
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

__all__ = [
    "DegreePair",
    "EdgeListError",
    "Graph",
    "Partition",
    "PartitionFormatError",
    "community_stats",
    "degrees_in",
    "dump_edge_list",
    "dump_partition",
    "edge_density",
    "load_edge_list",
    "load_partition",
    "slot_degrees",
]


class EdgeListError(ValueError):
    """Raised for malformed edge-list input; carries the offending line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class PartitionFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    """Immutable simple undirected graph on nodes ``0..n-1``.

    ``adjacency[i]`` is the sorted tuple of neighbours of ``i``.
    """

    n: int
    adjacency: tuple[tuple[int, ...], ...]
    m: int

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        if n < 0:
            raise ValueError("node count must be non-negative")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop on node {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        adjacency = tuple(tuple(sorted(s)) for s in nbrs)
        m = sum(len(a) for a in adjacency) // 2
        return cls(n, adjacency, m)

    @classmethod
    def complete(cls, n: int) -> Graph:
        return cls.from_edges(n, ((i, j) for i in range(n) for j in range(i + 1, n)))

    @classmethod
    def empty(cls, n: int) -> Graph:
        return cls.from_edges(n, ())

    def has_edge(self, i: int, j: int) -> bool:
        adj = self.adjacency[i]
        pos = bisect_left(adj, j)
        return pos < len(adj) and adj[pos] == j

    def degree(self, i: int) -> int:
        return len(self.adjacency[i])

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i, adj in enumerate(self.adjacency) for j in adj if i < j]


@dataclass
class Partition:
    """Assignment of ``n`` nodes to ``K`` labelled slots; slots may be empty.

    ``sizes`` is kept in sync by :meth:`move`. Mutate ``sigma`` only through
    :meth:`move`, or call :meth:`recount` afterwards.
    """

    sigma: list[int]
    K: int
    sizes: list[int] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.sigma = [int(s) for s in self.sigma]
        if self.K < 1:
            raise ValueError("K must be at least 1")
        for i, s in enumerate(self.sigma):
            if not 0 <= s < self.K:
                raise ValueError(f"node {i} assigned to slot {s}, outside 0..{self.K - 1}")
        self.recount()

    @classmethod
    def from_membership(cls, sigma: Sequence[int], K: int | None = None) -> Partition:
        if K is None:
            K = max(sigma, default=0) + 1
        return cls(list(sigma), K)

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], n: int, K: int | None = None) -> Partition:
        blocks = [list(b) for b in blocks]
        sigma = [-1] * n
        for k, block in enumerate(blocks):
            for i in block:
                if sigma[i] != -1:
                    raise ValueError(f"node {i} appears in two blocks")
                sigma[i] = k
        if -1 in sigma:
            raise ValueError(f"node {sigma.index(-1)} missing from blocks")
        return cls(sigma, len(blocks) if K is None else K)

    @classmethod
    def singletons(cls, n: int, K: int | None = None) -> Partition:
        return cls(list(range(n)), n if K is None else K)

    @classmethod
    def grand(cls, n: int, K: int = 1) -> Partition:
        return cls([0] * n, K)

    @property
    def n(self) -> int:
        return len(self.sigma)

    def recount(self) -> None:
        sizes = [0] * self.K
        for s in self.sigma:
            sizes[s] += 1
        self.sizes = sizes

    def move(self, i: int, k: int) -> None:
        if not 0 <= k < self.K:
            raise IndexError(f"slot {k} out of range 0..{self.K - 1}")
        old = self.sigma[i]
        self.sizes[old] -= 1
        self.sizes[k] += 1
        self.sigma[i] = k

    def copy(self) -> Partition:
        return Partition(list(self.sigma), self.K)

    def members(self, k: int) -> list[int]:
        return [i for i, s in enumerate(self.sigma) if s == k]

    def blocks(self) -> tuple[tuple[int, ...], ...]:
        """Canonical unlabelled form: non-empty blocks ordered by minimum element."""
        seen: dict[int, list[int]] = {}
        for i, s in enumerate(self.sigma):
            seen.setdefault(s, []).append(i)
        return tuple(tuple(b) for b in seen.values())

    def n_occupied(self) -> int:
        return sum(1 for s in self.sizes if s)


class DegreePair(NamedTuple):
    d: int
    dhat: int


def _check_node(graph: Graph, i: int) -> None:
    if not 0 <= i < graph.n:
        raise IndexError(f"node {i} out of range 0..{graph.n - 1}")


def _check_slot(part: Partition, k: int) -> None:
    if not 0 <= k < part.K:
        raise IndexError(f"slot {k} out of range 0..{part.K - 1}")


def slot_degrees(graph: Graph, sigma: Sequence[int], i: int, K: int) -> list[int]:
    """Neighbour count of node ``i`` in every slot, O(deg(i) + K)."""
    counts = [0] * K
    for j in graph.adjacency[i]:
        counts[sigma[j]] += 1
    return counts


def degrees_in(graph: Graph, part: Partition, i: int, k: int) -> DegreePair:
    """Neighbours and non-neighbours of ``i`` inside slot ``k``.

    Node ``i`` itself is never counted as its own non-neighbour.
    """
    _check_node(graph, i)
    _check_slot(part, k)
    sigma = part.sigma
    d = sum(1 for j in graph.adjacency[i] if sigma[j] == k)
    dhat = part.sizes[k] - d - (1 if sigma[i] == k else 0)
    return DegreePair(d, dhat)


def community_stats(graph: Graph, part: Partition) -> list[tuple[int, int]]:
    """Per-slot ``(n_k, m_k)`` with ``m_k`` the number of internal edges."""
    if part.n != graph.n:
        raise ValueError(f"partition covers {part.n} nodes, graph has {graph.n}")
    internal = [0] * part.K
    sigma = part.sigma
    for i, adj in enumerate(graph.adjacency):
        si = sigma[i]
        for j in adj:
            if j > i and sigma[j] == si:
                internal[si] += 1
    return list(zip(part.sizes, internal))


def edge_density(graph: Graph) -> Fraction:
    """Exact density ``2m / (n(n-1))``."""
    if graph.n < 2:
        raise ValueError("edge density needs at least two nodes")
    density = Fraction(2 * graph.m, graph.n * (graph.n - 1))
    return min(max(density, Fraction(0)), Fraction(1))


# -- text formats -----------------------------------------------------------

def _as_text(data: str | bytes) -> str:
    return data.decode("utf-8") if isinstance(data, (bytes, bytearray)) else data


def load_edge_list(data: str | bytes, n: int | None = None) -> Graph:
    """Parse ``u v`` lines. ``#`` starts a comment; ``n <count>`` may appear first.

    Node count is ``n`` if given, else the header, else ``1 + max id``.
    Duplicate edges (in either direction) collapse; self-loops are errors.
    """
    edges: list[tuple[int, int, int]] = []
    declared = n
    first = True
    for lineno, raw in enumerate(_as_text(data).splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if first and parts[0] == "n":
            first = False
            if len(parts) != 2 or not parts[1].isdigit():
                raise EdgeListError(lineno, f"bad header {raw.strip()!r}")
            if declared is None:
                declared = int(parts[1])
            continue
        first = False
        if len(parts) != 2:
            raise EdgeListError(lineno, f"expected two node ids, got {raw.strip()!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListError(lineno, f"non-integer node id in {raw.strip()!r}") from None
        if u < 0 or v < 0:
            raise EdgeListError(lineno, "negative node id")
        if u == v:
            raise EdgeListError(lineno, f"self-loop on node {u}")
        edges.append((lineno, u, v))
    if declared is None:
        declared = 1 + max((max(u, v) for _, u, v in edges), default=-1)
    for lineno, u, v in edges:
        if max(u, v) >= declared:
            raise EdgeListError(lineno, f"node id {max(u, v)} exceeds declared count {declared}")
    return Graph.from_edges(declared, ((u, v) for _, u, v in edges))


def dump_edge_list(graph: Graph) -> str:
    lines = [f"n {graph.n}"]
    lines.extend(f"{u} {v}" for u, v in graph.edges())
    return "\n".join(lines) + "\n"


def load_partition(data: str | bytes, K: int | None = None) -> Partition:
    """Read a JSON integer array or one slot index per line."""
    text = _as_text(data).strip()
    if text.startswith("["):
        try:
            sigma = json.loads(text)
        except json.JSONDecodeError as exc:
            raise PartitionFormatError(f"invalid JSON partition: {exc}") from None
        if not all(isinstance(s, int) and not isinstance(s, bool) for s in sigma):
            raise PartitionFormatError("JSON partition must be an integer array")
    else:
        sigma = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                sigma.append(int(line))
            except ValueError:
                raise PartitionFormatError(f"line {lineno}: not an integer: {line!r}") from None
    if any(s < 0 for s in sigma):
        raise PartitionFormatError("community indices must be non-negative")
    try:
        return Partition.from_membership(sigma, K)
    except ValueError as exc:
        raise PartitionFormatError(str(exc)) from None


def dump_partition(part: Partition) -> str:
    return "\n".join(str(s) for s in part.sigma) + "\n"
