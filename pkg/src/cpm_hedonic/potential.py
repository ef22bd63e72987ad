"""CPM quality at pair, node, community and partition scale, in exact units.

Every value is carried as an integer number of ``1/c`` units, where
``gamma = b/c``; nothing here touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .graph import Graph, Partition, _check_node, _check_slot, community_stats, slot_degrees

__all__ = [
    "MoveGain",
    "Resolution",
    "ScaledValue",
    "community_potential",
    "move_gain",
    "node_potential",
    "pair_value",
    "parse_fraction",
    "partition_potential",
]


def parse_fraction(text: str | int | Fraction) -> Fraction:
    """Exact rational from ``"b/c"``, a decimal string or an int.

    Floats are rejected: ``0.1`` as a binary float is not one tenth.
    """
    if isinstance(text, float):
        raise TypeError("pass decimals as strings to keep them exact")
    try:
        return Fraction(text.strip() if isinstance(text, str) else text)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not a rational number: {text!r}") from None


@dataclass(frozen=True, order=True)
class Resolution:
    """Resolution ``gamma = b/c`` with ``0 <= b <= c`` in lowest terms."""

    b: int
    c: int

    def __post_init__(self) -> None:
        if self.c <= 0 or not 0 <= self.b <= self.c:
            raise ValueError(f"resolution {self.b}/{self.c} outside [0, 1]")
        f = Fraction(self.b, self.c)
        if (f.numerator, f.denominator) != (self.b, self.c):
            raise ValueError(f"resolution {self.b}/{self.c} not in lowest terms")

    @classmethod
    def of(cls, value: str | int | Fraction | Resolution) -> Resolution:
        if isinstance(value, Resolution):
            return value
        f = parse_fraction(value)
        return cls(f.numerator, f.denominator)

    @property
    def value(self) -> Fraction:
        return Fraction(self.b, self.c)

    def __str__(self) -> str:
        return f"{self.b}/{self.c}"


@dataclass(frozen=True)
class ScaledValue:
    """``units / c`` for the resolution that produced it."""

    units: int
    c: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.units, self.c)

    def __float__(self) -> float:
        return self.units / self.c

    def __str__(self) -> str:
        v = self.value
        return f"{v.numerator}/{v.denominator}"


@dataclass(frozen=True)
class MoveGain:
    """Effect of moving one node from its slot to ``target``.

    ``delta_d`` and ``delta_dhat`` are target-minus-origin counts of
    neighbours and non-neighbours; ``gain_units = c*delta_d - b*delta_n``.
    """

    node: int
    source: int
    target: int
    delta_d: int
    delta_dhat: int
    gain_units: int
    c: int

    @property
    def delta_n(self) -> int:
        return self.delta_d + self.delta_dhat

    @property
    def gain(self) -> Fraction:
        return Fraction(self.gain_units, self.c)

    def gain_at(self, gamma: Resolution | Fraction) -> Fraction:
        g = gamma.value if isinstance(gamma, Resolution) else Fraction(gamma)
        return self.delta_d - g * self.delta_n


def pair_value(adjacent: bool, same_community: bool, gamma: Resolution) -> ScaledValue:
    if not same_community:
        return ScaledValue(0, gamma.c)
    return ScaledValue((gamma.c - gamma.b) if adjacent else -gamma.b, gamma.c)


def node_potential(graph: Graph, part: Partition, i: int, k: int, gamma: Resolution) -> ScaledValue:
    """Utility of node ``i`` in slot ``k``, as if it had joined ``k``."""
    _check_node(graph, i)
    _check_slot(part, k)
    d = sum(1 for j in graph.adjacency[i] if part.sigma[j] == k)
    others = part.sizes[k] - (1 if part.sigma[i] == k else 0)
    return ScaledValue(gamma.c * d - gamma.b * others, gamma.c)


def community_potential(n_k: int, m_k: int, gamma: Resolution) -> ScaledValue:
    return ScaledValue(gamma.c * m_k - gamma.b * comb(n_k, 2), gamma.c)


def partition_potential(graph: Graph, part: Partition, gamma: Resolution) -> ScaledValue:
    """Sum over communities of ``m_k - gamma * C(n_k, 2)``; O(n + m)."""
    stats = community_stats(graph, part)
    edges_in = sum(m_k for _, m_k in stats)
    pairs_in = sum(comb(n_k, 2) for n_k, _ in stats)
    return ScaledValue(gamma.c * edges_in - gamma.b * pairs_in, gamma.c)


def _gain(d_src: int, d_tgt: int, n_src: int, n_tgt: int) -> tuple[int, int]:
    delta_d = d_tgt - d_src
    delta_n = n_tgt - n_src + 1
    return delta_d, delta_n - delta_d


def move_gain(graph: Graph, part: Partition, i: int, target: int, gamma: Resolution) -> MoveGain:
    """Gain of moving ``i`` to ``target``; equals the change in partition potential."""
    _check_node(graph, i)
    _check_slot(part, target)
    source = part.sigma[i]
    if target == source:
        raise ValueError(f"node {i} is already in slot {target}")
    degs = slot_degrees(graph, part.sigma, i, part.K)
    delta_d, delta_dhat = _gain(degs[source], degs[target], part.sizes[source], part.sizes[target])
    units = gamma.c * delta_d - gamma.b * (delta_d + delta_dhat)
    return MoveGain(i, source, target, delta_d, delta_dhat, units, gamma.c)
