import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cpm_hedonic.dynamics import DynamicsConfig, is_equilibrium, run_dynamics
from cpm_hedonic.graph import Partition
from cpm_hedonic.potential import MoveGain, Resolution, move_gain
from cpm_hedonic.robustness import (
    GammaInterval,
    MoveClass,
    classify_move,
    equilibrium_gamma_range,
    familiarity,
    familiarity_index,
    is_fully_robust,
    node_is_robust,
    partition_robustness,
    robust_nodes,
    robustness_report,
)

from conftest import graph_and_partition, random_graph, resolutions

GRID = [Resolution.of(Fraction(k, 20)) for k in range(21)]
ZERO, ONE = Resolution(0, 1), Resolution(1, 1)


def test_familiarity_index_values():
    assert familiarity_index(1, 1) == Fraction(1, 2)
    assert familiarity_index(-1, -2) == Fraction(1, 3)
    assert familiarity_index(2, -1) == 2
    assert familiarity_index(1, -1) is None


def test_familiarity_on_graph(kite):
    part = Partition([0, 1, 2, 0], 3)
    # node 2 joining {0,3}: one more friend, one more stranger
    assert familiarity(kite, part, 2, 0) == Fraction(1, 2)


@pytest.mark.parametrize(
    "dd, dh, kind, star",
    [
        (2, -1, MoveClass.ALWAYS_PREFERRED, Fraction(2)),
        (1, 0, MoveClass.ALWAYS_PREFERRED, Fraction(1)),
        (0, 1, MoveClass.NEVER_PREFERRED, Fraction(0)),
        (-2, 0, MoveClass.NEVER_PREFERRED, Fraction(1)),
        (1, 1, MoveClass.FRUSTRATED_GAIN_BELOW, Fraction(1, 2)),
        (-1, -2, MoveClass.FRUSTRATED_GAIN_ABOVE, Fraction(1, 3)),
        (0, 0, MoveClass.NEUTRAL, None),
    ],
)
def test_classify_cases(dd, dh, kind, star):
    assert classify_move((dd, dh)) == (kind, star)


def test_classify_accepts_move_gain():
    mg = MoveGain(0, 0, 1, 1, 1, 8, 10)
    assert classify_move(mg).kind is MoveClass.FRUSTRATED_GAIN_BELOW


@given(st.integers(-8, 8), st.integers(-8, 8))
def test_classification_matches_sign_over_grid(dd, dh):
    kind, star = classify_move((dd, dh))
    dn = dd + dh
    signs = [dd - g.value * dn for g in GRID]
    if kind is MoveClass.ALWAYS_PREFERRED:
        assert all(s >= 0 for s in signs) and any(s > 0 for s in signs)
    elif kind is MoveClass.NEVER_PREFERRED:
        assert all(s <= 0 for s in signs) and any(s < 0 for s in signs)
    elif kind is MoveClass.FRUSTRATED_GAIN_BELOW:
        assert all((s > 0) == (g.value < star) for s, g in zip(signs, GRID))
    elif kind is MoveClass.FRUSTRATED_GAIN_ABOVE:
        assert all((s > 0) == (g.value > star) for s, g in zip(signs, GRID))
    else:
        assert all(s == 0 for s in signs)
    if dn != 0:
        assert (0 < star < 1) == kind.frustrated


def test_gamma_ranges_kite(kite):
    cases = {
        (0, 0, 0, 0): (0, Fraction(1, 3)),
        (0, 0, 0, 1): (Fraction(1, 3), 1),
        (0, 0, 1, 2): (1, 1),
    }
    for sigma, (lo, hi) in cases.items():
        rng = equilibrium_gamma_range(kite, Partition(list(sigma), 4))
        assert (rng.lo, rng.hi) == (lo, hi)
    assert str(equilibrium_gamma_range(kite, Partition([0] * 4, 4))) == "0/1 .. 1/3"


def test_gamma_range_empty(kite):
    # node 2 wants in unless gamma >= 2/3, node 1 wants out unless gamma <= 0
    rng = equilibrium_gamma_range(kite, Partition([0, 0, 1, 0], 2))
    assert rng.is_empty and str(rng) == "empty"
    assert Fraction(1, 2) not in rng


def test_interval_helpers():
    iv = GammaInterval(Fraction(1, 4), Fraction(1, 2))
    assert Resolution(1, 3) in iv and Fraction(3, 5) not in iv
    assert iv.midpoint() == Fraction(3, 8)
    with pytest.raises(ValueError):
        GammaInterval.empty().midpoint()


def test_bridged_toy(bridged):
    split = Partition([0, 0, 0, 1, 1, 1], 2)
    assert is_fully_robust(bridged, split)
    assert partition_robustness(bridged, split) == 1
    grand = Partition.grand(6, K=2)
    rng = equilibrium_gamma_range(bridged, grand)
    assert (rng.lo, rng.hi) == (0, Fraction(2, 5))
    assert not is_fully_robust(bridged, grand)


def test_kite_split_not_fully_robust(kite):
    part = Partition([0, 0, 0, 1], 2)
    assert not is_fully_robust(kite, part)
    assert not node_is_robust(kite, part, 3)


def test_report_shape(kite):
    rep = robustness_report(kite, Partition([0, 0, 0, 1], 2))
    assert rep["gamma_range"] == ["1/3", "1/1"]
    assert rep["robust"] == [True, True, True, False]
    assert rep["robustness"] == "3/4" and rep["robustness_float"] == 0.75
    assert rep["fully_robust"] is False


@given(graph_and_partition())
def test_range_is_exactly_the_equilibrium_set(gp):
    g, part = gp
    rng = equilibrium_gamma_range(g, part)
    for gamma in GRID:
        assert (gamma in rng) == bool(is_equilibrium(g, part, gamma))
    if not rng.is_empty:
        for end in (rng.lo, rng.hi, rng.midpoint()):
            assert is_equilibrium(g, part, Resolution.of(end))


@given(graph_and_partition())
def test_robust_node_definitions_agree(gp):
    g, part = gp
    flags = robust_nodes(g, part)
    for i in range(g.n):
        stable_both = all(
            move_gain(g, part, i, k, gamma).gain_units <= 0
            for gamma in (ZERO, ONE)
            for k in range(part.K)
            if k != part.sigma[i]
        )
        assert flags[i] == stable_both == node_is_robust(g, part, i)
    rng = equilibrium_gamma_range(g, part)
    full = not rng.is_empty and (rng.lo, rng.hi) == (0, 1)
    assert is_fully_robust(g, part) == full


@given(graph_and_partition(max_n=8), st.integers(0, 2**32 - 1))
def test_balanced_equilibrium_at_zero_is_fully_robust(gp, seed):
    g, part = gp
    # reach an equilibrium at gamma=0, keep it only if it came out balanced
    out, _ = run_dynamics(g, part, ZERO, DynamicsConfig(queue_init="shuffle", seed=seed))
    sizes = out.sizes
    if 0 in sizes or len(set(sizes)) != 1:
        return
    rng = equilibrium_gamma_range(g, out)
    assert (rng.lo, rng.hi) == (0, 1)


def test_balanced_criterion_exhaustive_small():
    # every equal-size, no-empty-slot equilibrium at gamma=0 on random small graphs
    rng = random.Random(5)
    for _ in range(40):
        n = rng.choice([4, 6])
        g = random_graph(rng, n, rng.random())
        for K in (2, 3):
            if n % K:
                continue
            for sigma in product(range(K), repeat=n):
                part = Partition(list(sigma), K)
                if len(set(part.sizes)) != 1 or 0 in part.sizes:
                    continue
                if is_equilibrium(g, part, ZERO):
                    r = equilibrium_gamma_range(g, part)
                    assert (r.lo, r.hi) == (0, 1)


@given(graph_and_partition(), resolutions(), resolutions())
def test_endpoint_interval_property(gp, g0, g1):
    g, part = gp
    lo, hi = sorted([g0, g1], key=lambda r: r.value)
    if is_equilibrium(g, part, lo) and is_equilibrium(g, part, hi):
        for gamma in GRID:
            if lo.value <= gamma.value <= hi.value:
                assert is_equilibrium(g, part, gamma)
