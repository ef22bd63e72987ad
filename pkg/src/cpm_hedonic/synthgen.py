"""Planted-partition graphs with equal blocks, and size-preserving label noise.

Reproducibility: ``generate`` seeds a numpy ``SeedSequence`` with
``SappmSpec.seed`` and spawns one child per block pair ``(k, l)`` with
``k <= l``, in row-major order. Each child drives its own PCG64 generator,
which samples the upper triangle of block ``(k, k)`` or all of ``(k, l)``.
Edge sets therefore depend only on the parameters and the seed, never on
how many blocks are drawn in parallel.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from fractions import Fraction
from math import floor

import numpy as np

from .graph import Graph, Partition

__all__ = ["NoiseSpec", "SappmSpec", "generate", "perturb"]


@dataclass(frozen=True)
class SappmSpec:
    K: int
    N: int
    p: float
    lam: float
    seed: int = 0

    def __post_init__(self) -> None:
        if self.K < 1 or self.N < 1:
            raise ValueError("K and N must be positive")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p={self.p} outside [0, 1]")
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"lambda={self.lam} outside [0, 1]")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")

    @property
    def q(self) -> float:
        return self.p * self.lam

    @property
    def n(self) -> int:
        return self.K * self.N

    def to_json(self) -> str:
        d = asdict(self)
        d["lambda"] = d.pop("lam")
        return json.dumps(d)

    @classmethod
    def from_json(cls, text: str) -> SappmSpec:
        d = json.loads(text)
        return cls(int(d["K"]), int(d["N"]), float(d["p"]), float(d["lambda"]), int(d.get("seed", 0)))


@dataclass(frozen=True)
class NoiseSpec:
    eta: float | str | Fraction
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.fraction <= 1:
            raise ValueError(f"eta={self.eta} outside [0, 1]")

    @property
    def fraction(self) -> Fraction:
        # via str so that 0.1 means one tenth, not the nearest binary float
        return Fraction(str(self.eta)) if not isinstance(self.eta, Fraction) else self.eta


def generate(spec: SappmSpec) -> tuple[Graph, Partition]:
    """Sample a graph and its ground truth (block ``k`` holds ids ``k*N .. k*N+N-1``)."""
    K, N = spec.K, spec.N
    children = np.random.SeedSequence(spec.seed).spawn(K * (K + 1) // 2)
    iu, ju = np.triu_indices(N, k=1)
    edges: list[tuple[int, int]] = []
    child = 0
    for k in range(K):
        for l in range(k, K):
            rng = np.random.Generator(np.random.PCG64(children[child]))
            child += 1
            if k == l:
                hit = rng.random(iu.size) < spec.p
                us, vs = iu[hit], ju[hit]
            else:
                hit = rng.random((N, N)) < spec.q
                us, vs = np.nonzero(hit)
            edges.extend(zip((us + k * N).tolist(), (vs + l * N).tolist()))
    truth = Partition([i // N for i in range(K * N)], K)
    return Graph.from_edges(K * N, edges), truth


def perturb(truth: Partition, noise: NoiseSpec) -> Partition:
    """Shuffle the labels of ``floor(eta * n)`` randomly chosen nodes.

    Labels are permuted among the chosen nodes only, so slot sizes are
    unchanged. A chosen node may keep its label (no derangement).
    """
    n = truth.n
    count = floor(noise.fraction * n)
    out = truth.copy()
    if count == 0:
        return out
    rng = np.random.Generator(np.random.PCG64(noise.seed))
    chosen = rng.choice(n, size=count, replace=False)
    labels = [truth.sigma[i] for i in chosen.tolist()]
    order = rng.permutation(count).tolist()
    for i, j in zip(chosen.tolist(), order):
        out.sigma[i] = labels[j]
    out.recount()
    return out
