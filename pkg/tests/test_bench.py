import csv
import io

import pytest

from cpm_hedonic.bench import (
    ExperimentGrid,
    aggregate,
    default_jobs,
    full_grid,
    resolve_gamma,
    run_method,
    track,
    write_plot_data,
)
from cpm_hedonic.evalmetrics import write_records
from cpm_hedonic.graph import Graph, Partition, edge_density
from cpm_hedonic.potential import Resolution

SMALL = dict(K=(2,), N=12, p=(0.3,), lam=(0.2,), eta=(0.0, 1.0), samples=3, seed=5)


def strip_runtime(csv_text):
    rows = list(csv.reader(io.StringIO(csv_text)))
    col = rows[0].index("runtime_ms")
    return [r[:col] + r[col + 1:] for r in rows]


def test_grid_validation():
    with pytest.raises(ValueError):
        ExperimentGrid(methods=())
    with pytest.raises(ValueError):
        ExperimentGrid(methods=("spectral",))
    with pytest.raises(ValueError):
        ExperimentGrid(p=(1.5,))
    with pytest.raises(ValueError):
        ExperimentGrid(eta=(2,))
    with pytest.raises(ValueError):
        ExperimentGrid(N=None)
    with pytest.raises(ValueError):
        ExperimentGrid(gamma="7/5")


def test_full_grid_scale():
    g = full_grid()
    assert len(g.cells()) == 5 * 10 * 10 and g.samples == 100
    assert {K * N for K, N, _, _ in g.cells()} <= {1020}
    assert full_grid(samples=2).samples == 2


def test_default_jobs(monkeypatch):
    monkeypatch.delenv("CPM_JOBS", raising=False)
    assert default_jobs() == 1
    monkeypatch.setenv("CPM_JOBS", "3")
    assert default_jobs() == 3
    monkeypatch.setenv("CPM_JOBS", "zero")
    with pytest.raises(ValueError):
        default_jobs()


def test_resolve_gamma(kite):
    assert resolve_gamma(kite, None) == Resolution.of(edge_density(kite))
    assert resolve_gamma(kite, "1/10") == Resolution(1, 10)
    assert resolve_gamma(Graph.empty(1), None) == Resolution(0, 1)


def test_run_method_variants(kite):
    init = Partition([0, 1, 2, 0], 3)
    g = Resolution(1, 10)
    out, moves, evals, ms = run_method("dynamics-best", kite, init, g)
    assert out.blocks() == ((0, 1, 2, 3),) and moves == 3 and ms >= 0
    out, moves, _, _ = run_method("mirror", kite, init, g)
    assert out.sigma == init.sigma and moves == 0
    out, moves, _, _ = run_method("one-pass", kite, init, g)
    assert out.blocks() == ((0, 1, 2, 3),) and moves == 2
    with pytest.raises(ValueError):
        run_method("leiden", kite, init, g)


def test_track_rows_and_order():
    recs = track(ExperimentGrid(**SMALL))
    assert len(recs) == 3 * 2 * 4
    assert [r.method for r in recs[:4]] == ["dynamics-queue", "dynamics-best", "one-pass", "mirror"]
    for r in recs:
        if r.eta == 0.0 and r.method == "mirror":
            assert r.ari == 1.0
    # all noise levels and methods of one sample share a graph seed
    assert len({r.seed for r in recs[:8]}) == 1


def test_track_parallel_matches_serial():
    grid = ExperimentGrid(**SMALL)
    a = strip_runtime(write_records(track(grid, jobs=1)))
    b = strip_runtime(write_records(track(grid, jobs=2)))
    assert a == b


def test_plot_data():
    recs = track(ExperimentGrid(**SMALL))
    rows = aggregate(recs)
    assert len(rows) == 2 * 4 and all(r["samples"] == 3 for r in rows)
    buf = io.StringIO()
    write_plot_data(recs, buf)
    head = buf.getvalue().splitlines()[0].split(",")
    assert head[:7] == ["K", "N", "p", "lambda", "eta", "method", "samples"]
    assert "ari_ci95" in head
