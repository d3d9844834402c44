import math

import numpy as np
import pytest

from hn4walk.oracle import explicit_operator
from hn4walk.stationary import (
    AdjacentLongRange,
    AdjacentStandard,
    OneDSelfLoop,
    OneSelfLoop,
    TwoSelfLoops,
    build_stationary,
    builder_coin,
    correction_norm_sq,
    helper_coin,
    marked_set,
    predicted_action,
    residual,
    suppression_bound_check,
)
from hn4walk.topology import DomainError, LatticeSpec
from hn4walk.verify import sample_kinds
from hn4walk.walk import CoinKind, CoinSpec, MarkedSet, Walk, apply_shift, build_initial_state, diffusion

pytestmark = pytest.mark.filterwarnings("ignore::RuntimeWarning")

RING = LatticeSpec(1, 6)
TORUS16 = LatticeSpec(2, 4)

CASES = [(RING, k) for k in sample_kinds(RING)] + [(TORUS16, k) for k in sample_kinds(TORUS16)]
IDS = [f"{lat.dim}d-{k}" for lat, k in CASES]


def weight(lattice):
    return (2.0 if lattice.dim == 1 else 8.0) / lattice.vertex_count


def test_oned_selfloop_grover_residual():
    kind = OneDSelfLoop(32)
    psi = build_stationary(kind, RING, CoinSpec("grover"))
    assert residual(Walk(RING, CoinSpec("grover"), MarkedSet([32])), psi) <= 1e-12


def test_adjacent_standard_lackadaisical_residual():
    kind = AdjacentStandard("horizontal", (1, 1))
    coin = CoinSpec("lackadaisical", 8 / 256)
    psi = build_stationary(kind, TORUS16, coin)
    assert marked_set(kind, TORUS16).vertices == ((1, 1), (2, 1))
    assert residual(Walk(TORUS16, coin, marked_set(kind, TORUS16)), psi) <= 1e-12


@pytest.mark.parametrize("lattice, kind", CASES, ids=IDS)
@pytest.mark.parametrize("loop", [False, True], ids=["grover", "lackadaisical"])
def test_eigenstate_identity(lattice, kind, loop):
    coin = CoinSpec("lackadaisical", weight(lattice)) if loop else CoinSpec("grover")
    psi = build_stationary(kind, lattice, coin)
    assert residual(Walk(lattice, coin, marked_set(kind, lattice)), psi) <= 1e-12


@pytest.mark.parametrize("lattice, kind", CASES, ids=IDS)
@pytest.mark.parametrize("kind_name", ["skw", "modified-g"])
def test_action_identity(lattice, kind, kind_name):
    coin = CoinSpec(kind_name, weight(lattice) if kind_name == "modified-g" else 0)
    psi = build_stationary(kind, lattice, builder_coin(coin))
    moved = Walk(lattice, coin, marked_set(kind, lattice)).step(psi)
    assert np.linalg.norm(moved - predicted_action(kind, lattice, coin)) <= 1e-12
    # and the state is genuinely not stationary
    assert np.linalg.norm(moved - psi) > 1e-3


@pytest.mark.parametrize("lattice, kind", CASES[:4], ids=IDS[:4])
def test_predicted_action_grover_is_identity(lattice, kind):
    coin = CoinSpec("grover")
    np.testing.assert_array_equal(predicted_action(kind, lattice, coin),
                                  build_stationary(kind, lattice, coin))


def test_skw_action_oned_closed_form():
    # written out by hand for the ring: psi - (1/sqrt N) S[(h+ + h-) (x) |N/2>]
    kind = OneDSelfLoop(32)
    psi = build_stationary(kind, RING, CoinSpec("grover"))
    h = helper_coin(1, 0.0, False, 2) + helper_coin(1, 0.0, False, 3)
    placed = np.zeros_like(psi)
    placed[31] = h
    expected = psi - apply_shift(placed, RING) / 8.0
    moved = Walk(RING, CoinSpec("skw"), MarkedSet([32])).step(psi)
    assert np.abs(moved - expected).max() <= 1e-12


def test_modified_g_loop_term_size():
    # S and D_l are orthogonal, so the self-loop correction has norm 2 sqrt(l/(N(8+l))) sqrt(M)
    lat, l = TORUS16, 8 / 256
    kind = AdjacentStandard("horizontal", (1, 1))
    g = predicted_action(kind, lat, CoinSpec("modified-g", l))
    psi = build_stationary(kind, lat, CoinSpec("lackadaisical", l))
    helpers = np.zeros_like(psi)
    helpers[0] = helper_coin(2, l, True, 0)
    helpers[1] = helper_coin(2, l, True, 1)
    without_loop = psi - 2 / math.sqrt(256) * apply_shift(helpers, lat)
    lp = np.zeros(9)
    lp[8] = 1.0
    loop_part = np.zeros_like(psi)
    loop_part[[0, 1]] = diffusion(2, l, True) @ lp
    coef = 2 * math.sqrt(l / (256 * (8 + l)))
    np.testing.assert_allclose(g, without_loop - coef * apply_shift(loop_part, lat), atol=1e-14)
    assert math.isclose(np.linalg.norm(g - without_loop), coef * math.sqrt(2), rel_tol=1e-12)


@pytest.mark.parametrize("lattice", [RING, TORUS16], ids=["1d", "2d"])
@pytest.mark.parametrize("l", [0.0, 0.03, 1.5])
def test_helper_coins_orthogonal_to_seed(lattice, l):
    from hn4walk.walk import seed_coin
    seed = seed_coin(lattice.dim, l, True)
    for c in range(4 * lattice.dim):
        assert abs(helper_coin(lattice.dim, l, True, c) @ seed) <= 1e-14


@pytest.mark.parametrize("lattice, kind", CASES, ids=IDS)
def test_decomposition_norm(lattice, kind):
    coin = CoinSpec("lackadaisical", weight(lattice))
    diff = build_initial_state(lattice, coin) - build_stationary(kind, lattice, coin)
    assert math.isclose(float(np.sum(diff ** 2)), correction_norm_sq(kind, lattice, coin), rel_tol=1e-12)


def test_decomposition_norm_oned_formula():
    l = 2 / 64
    assert math.isclose(correction_norm_sq(OneDSelfLoop(32), RING, CoinSpec("lackadaisical", l)),
                        (4 + l) / (2 * 64), rel_tol=1e-15)


def test_modified_g_residual_lower_bound():
    l = 2 / 64
    kind = OneDSelfLoop(32)
    psi = build_stationary(kind, RING, CoinSpec("lackadaisical", l))
    coin = CoinSpec("modified-g", l)
    got = residual(Walk(RING, coin, MarkedSet([32])), psi)
    exact = residual(explicit_operator(RING, coin, MarkedSet([32])).matrix, psi)
    assert math.isclose(got, exact, rel_tol=1e-12)
    assert got > 0.5 * math.sqrt((4 + l) / 64)


def test_residual_identity_operator(rng):
    psi = rng.standard_normal((64, 4))
    assert residual(lambda x: x, psi) == 0.0
    assert residual(np.eye(256), psi) == 0.0


@pytest.mark.parametrize("other", [1, 5, 17, 31])
def test_one_selfloop_free_coordinate_sweep(other):
    lat = LatticeSpec(2, 5)
    for kind in (OneSelfLoop("y", 16, other), OneSelfLoop("x", 32, other)):
        for coin in (CoinSpec("grover"), CoinSpec("lackadaisical", 4 / 1024)):
            psi = build_stationary(kind, lat, coin)
            assert residual(Walk(lat, coin, marked_set(kind, lat)), psi) <= 1e-12


def test_long_range_pair_wraps_level_ring():
    lat = LatticeSpec(2, 5)
    kind = AdjacentLongRange("horizontal", (30, 4))  # level 1, last index: next wraps to 2
    assert kind.partner(lat) == (2, 4)
    coin = CoinSpec("lackadaisical", 8 / 1024)
    assert residual(Walk(lat, coin, marked_set(kind, lat)), build_stationary(kind, lat, coin)) <= 1e-12


def test_kind_validation():
    with pytest.raises(DomainError):
        build_stationary(OneDSelfLoop(31), RING, CoinSpec("grover"))
    with pytest.raises(DomainError):
        build_stationary(OneDSelfLoop(32), TORUS16, CoinSpec("grover"))
    with pytest.raises(DomainError):
        build_stationary(AdjacentStandard("horizontal", (1, 1)), RING, CoinSpec("grover"))
    with pytest.raises(DomainError):
        build_stationary(AdjacentLongRange("horizontal", (8, 1)), TORUS16, CoinSpec("grover"))
    with pytest.raises(DomainError):
        build_stationary(TwoSelfLoops((8, 3)), TORUS16, CoinSpec("grover"))
    with pytest.raises(DomainError):
        build_stationary(OneSelfLoop("x", 5, 1), TORUS16, CoinSpec("grover"))
    with pytest.raises(ValueError):
        build_stationary(OneDSelfLoop(32), RING, CoinSpec("skw"))


def test_builder_coin_pairs_weights():
    assert builder_coin(CoinSpec("skw")) == CoinSpec("grover")
    assert builder_coin(CoinSpec("modified-g", 0.25)) == CoinSpec("lackadaisical", 0.25)


def test_suppression_oned_lackadaisical_passes():
    report = suppression_bound_check(OneDSelfLoop(32), RING, CoinSpec("lackadaisical", 2 / 64), 1000)
    assert report.passed
    assert report.bound == 10 / 64 and report.p0 == 1 / 64


def test_suppression_long_range_pair_grover_within_kappa10():
    # stated example; the Grover peak on this pair is ~23 M/N, see README "Known deviations"
    lat = LatticeSpec(2, 5)
    report = suppression_bound_check(AdjacentLongRange("horizontal", (2, 1)), lat, CoinSpec("grover"), 2000)
    assert report.marked.vertices == ((2, 1), (6, 1))
    assert report.passed, f"max p = {report.max_prob:.4f} > {report.bound:.4f}"


def test_suppression_diagonal_grover_fails():
    lat = LatticeSpec(2, 5)
    diag = MarkedSet([(k, k) for k in range(1, 33)])
    report = suppression_bound_check(diag, lat, CoinSpec("grover"), 2000)
    assert not report.passed
    assert report.max_prob >= 5 * report.p0


def test_stationary_kinds_are_hashable_values():
    assert OneSelfLoop("x", 16, 3).vertex == (16, 3)
    assert OneSelfLoop("y", 16, 3).vertex == (3, 16)
    assert len({TwoSelfLoops((16, 16)), TwoSelfLoops((16, 16))}) == 1
    assert CoinKind.MODIFIED_G.has_loop
