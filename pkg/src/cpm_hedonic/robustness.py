"""Robust nodes, the familiarity index and exact equilibrium ranges over gamma.

A move's gain is linear in gamma, ``delta_d - gamma * delta_n``, so every
question here reduces to signs of two integers and one rational threshold.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .graph import Graph, Partition, slot_degrees
from .potential import MoveGain, Resolution, move_gain

__all__ = [
    "GammaInterval",
    "MoveClass",
    "MoveClassification",
    "classify_move",
    "equilibrium_gamma_range",
    "familiarity",
    "familiarity_index",
    "is_fully_robust",
    "node_is_robust",
    "partition_robustness",
    "robust_nodes",
    "robustness_report",
]

ZERO, ONE = Fraction(0), Fraction(1)
# delta_d and delta_dhat do not depend on gamma; any resolution will do.
_UNIT = Resolution(0, 1)


class MoveClass(str, enum.Enum):
    ALWAYS_PREFERRED = "always-preferred"
    NEVER_PREFERRED = "never-preferred"
    FRUSTRATED_GAIN_BELOW = "frustrated-gain-below"
    FRUSTRATED_GAIN_ABOVE = "frustrated-gain-above"
    NEUTRAL = "neutral"

    @property
    def frustrated(self) -> bool:
        return self in (MoveClass.FRUSTRATED_GAIN_BELOW, MoveClass.FRUSTRATED_GAIN_ABOVE)


class MoveClassification(NamedTuple):
    kind: MoveClass
    gamma_star: Fraction | None


@dataclass(frozen=True)
class GammaInterval:
    """Closed interval ``[lo, hi]`` inside ``[0, 1]``; both None when empty."""

    lo: Fraction | None
    hi: Fraction | None

    @classmethod
    def empty(cls) -> GammaInterval:
        return cls(None, None)

    @property
    def is_empty(self) -> bool:
        return self.lo is None

    def __contains__(self, gamma: object) -> bool:
        if self.is_empty:
            return False
        g = gamma.value if hasattr(gamma, "value") else Fraction(gamma)  # type: ignore[arg-type]
        return self.lo <= g <= self.hi

    def midpoint(self) -> Fraction:
        if self.is_empty:
            raise ValueError("empty interval has no midpoint")
        return (self.lo + self.hi) / 2

    def __str__(self) -> str:
        if self.is_empty:
            return "empty"
        return f"{_frac(self.lo)} .. {_frac(self.hi)}"


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _robust(degs: list[int], sizes: list[int], src: int) -> bool:
    d_own = degs[src]
    dhat_own = sizes[src] - d_own - 1
    return all(
        d_own >= d_k and dhat_own <= sizes[k] - d_k
        for k, d_k in enumerate(degs) if k != src
    )


def robust_nodes(graph: Graph, part: Partition) -> list[bool]:
    """Robustness flag of every node, O(n*K + m).

    Node ``i`` is robust when its own slot has weakly the most neighbours and
    weakly the fewest non-neighbours among all K slots, empty ones included.
    """
    return [
        _robust(slot_degrees(graph, part.sigma, i, part.K), part.sizes, part.sigma[i])
        for i in range(graph.n)
    ]


def node_is_robust(graph: Graph, part: Partition, i: int) -> bool:
    if not 0 <= i < graph.n:
        raise IndexError(f"node {i} out of range 0..{graph.n - 1}")
    return _robust(slot_degrees(graph, part.sigma, i, part.K), part.sizes, part.sigma[i])


def partition_robustness(graph: Graph, part: Partition) -> Fraction:
    """Fraction of robust nodes."""
    if graph.n == 0:
        return ONE
    return Fraction(sum(robust_nodes(graph, part)), graph.n)


def is_fully_robust(graph: Graph, part: Partition) -> bool:
    return all(robust_nodes(graph, part))


def familiarity_index(delta_d: int, delta_dhat: int) -> Fraction | None:
    """Critical gamma ``delta_d / (delta_d + delta_dhat)``; None when undefined."""
    total = delta_d + delta_dhat
    if total == 0:
        return None
    return Fraction(delta_d, total)


def familiarity(graph: Graph, part: Partition, i: int, target: int) -> Fraction | None:
    g = move_gain(graph, part, i, target, _UNIT)
    return familiarity_index(g.delta_d, g.delta_dhat)


def classify_move(gain: MoveGain | tuple[int, int]) -> MoveClassification:
    """Place a move in one of the four regimes of the friends/strangers trade-off.

    Accepts a :class:`MoveGain` or a bare ``(delta_d, delta_dhat)`` pair.
    """
    if isinstance(gain, MoveGain):
        dd, dh = gain.delta_d, gain.delta_dhat
    else:
        dd, dh = gain
    star = familiarity_index(dd, dh)
    if dd == 0 and dh == 0:
        return MoveClassification(MoveClass.NEUTRAL, None)
    if dd >= 0 and dh <= 0:
        return MoveClassification(MoveClass.ALWAYS_PREFERRED, star)
    if dd <= 0 and dh >= 0:
        return MoveClassification(MoveClass.NEVER_PREFERRED, star)
    if dd > 0:
        return MoveClassification(MoveClass.FRUSTRATED_GAIN_BELOW, star)
    return MoveClassification(MoveClass.FRUSTRATED_GAIN_ABOVE, star)


def equilibrium_gamma_range(graph: Graph, part: Partition) -> GammaInterval:
    """All gamma in [0, 1] at which no node can gain by moving to another slot.

    Each (node, target) pair contributes one half-line constraint
    ``delta_d <= gamma * delta_n``; the intersection is a single interval.
    """
    lo, hi = ZERO, ONE
    sizes = part.sizes
    for i in range(graph.n):
        degs = slot_degrees(graph, part.sigma, i, part.K)
        src = part.sigma[i]
        for k, d_k in enumerate(degs):
            if k == src:
                continue
            dd = d_k - degs[src]
            dn = sizes[k] - sizes[src] + 1
            if dn > 0:
                lo = max(lo, Fraction(dd, dn))
            elif dn < 0:
                hi = min(hi, Fraction(dd, dn))
            elif dd > 0:
                return GammaInterval.empty()
            if lo > hi:
                return GammaInterval.empty()
    return GammaInterval(lo, hi)


def robustness_report(graph: Graph, part: Partition) -> dict:
    """JSON-ready summary: per-node flags, robust fraction and gamma range."""
    flags = robust_nodes(graph, part)
    frac = Fraction(sum(flags), graph.n) if graph.n else ONE
    rng = equilibrium_gamma_range(graph, part)
    return {
        "n": graph.n,
        "K": part.K,
        "robust": flags,
        "robustness": _frac(frac),
        "robustness_float": float(frac),
        "fully_robust": all(flags),
        "gamma_range": None if rng.is_empty else [_frac(rng.lo), _frac(rng.hi)],
    }
