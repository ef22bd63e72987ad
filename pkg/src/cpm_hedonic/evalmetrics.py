"""Adjusted Rand index and per-run experiment records."""

from __future__ import annotations

import csv
import io
import statistics
from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import astuple, dataclass, fields
from math import comb, sqrt

from .graph import Partition

__all__ = [
    "CSV_COLUMNS",
    "ContingencyTable",
    "ExperimentRecord",
    "ari",
    "mean_ci",
    "read_records",
    "summarize",
    "write_records",
]

CSV_COLUMNS = ("seed", "K", "N", "p", "lambda", "eta", "method", "moves", "evals", "runtime_ms", "robustness", "ari")


def _labels(x: Partition | Sequence[int]) -> Sequence[int]:
    return x.sigma if isinstance(x, Partition) else x


@dataclass(frozen=True)
class ContingencyTable:
    counts: dict[tuple[int, int], int]
    rows: dict[int, int]
    cols: dict[int, int]
    n: int

    @classmethod
    def of(cls, a: Partition | Sequence[int], b: Partition | Sequence[int]) -> ContingencyTable:
        la, lb = _labels(a), _labels(b)
        if len(la) != len(lb):
            raise ValueError(f"partitions cover {len(la)} and {len(lb)} nodes")
        return cls(dict(Counter(zip(la, lb))), dict(Counter(la)), dict(Counter(lb)), len(la))


def ari(part: Partition | Sequence[int], reference: Partition | Sequence[int]) -> float:
    """Adjusted Rand index; exact integer arithmetic up to the final division.

    When the denominator vanishes (both sides all-singletons or both a single
    block) the result is 1 for identical partitions and 0 otherwise.
    """
    t = ContingencyTable.of(part, reference)
    pairs = comb(t.n, 2)
    index = sum(comb(v, 2) for v in t.counts.values())
    a = sum(comb(v, 2) for v in t.rows.values())
    b = sum(comb(v, 2) for v in t.cols.values())
    # scale by C(n,2) to keep the expected index integral
    num = index * pairs - a * b
    den = (a + b) * pairs - 2 * a * b
    if den == 0:
        same = len(t.counts) == len(t.rows) == len(t.cols)
        return 1.0 if same else 0.0
    return 2 * num / den


@dataclass
class ExperimentRecord:
    seed: int
    K: int
    N: int
    p: float
    lam: float
    eta: float
    method: str
    moves: int
    evals: int
    runtime_ms: float
    robustness: float
    ari: float

    def row(self) -> list:
        return list(astuple(self))


def summarize(
    *,
    seed: int,
    K: int,
    N: int,
    p: float,
    lam: float,
    eta: float,
    method: str,
    result: Partition,
    truth: Partition,
    robustness: float,
    moves: int = 0,
    evals: int = 0,
    runtime_ms: float = 0.0,
) -> ExperimentRecord:
    return ExperimentRecord(seed, K, N, p, lam, eta, method, moves, evals, runtime_ms, robustness, ari(result, truth))


def _fmt(x) -> str:
    return repr(x) if isinstance(x, float) else str(x)


def write_records(records: Iterable[ExperimentRecord], out=None) -> str:
    """CSV with the fixed column order; returns the text and writes to ``out`` if given."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        w.writerow([_fmt(x) for x in r.row()])
    text = buf.getvalue()
    if out is not None:
        out.write(text)
    return text


def read_records(text: str) -> list[ExperimentRecord]:
    reader = csv.DictReader(io.StringIO(text))
    types = [f.type for f in fields(ExperimentRecord)]
    out = []
    for row in reader:
        vals = [row[c] for c in CSV_COLUMNS]
        conv = [int if t in ("int", int) else float if t in ("float", float) else str for t in types]
        out.append(ExperimentRecord(*(f(v) for f, v in zip(conv, vals))))
    return out


def mean_ci(values: Sequence[float]) -> tuple[float, float]:
    """Mean and half-width of the normal 95% interval, ``1.96 * stderr``."""
    if not values:
        raise ValueError("no values")
    m = statistics.fmean(values)
    if len(values) < 2:
        return m, 0.0
    return m, 1.96 * statistics.stdev(values) / sqrt(len(values))
