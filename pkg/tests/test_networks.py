"""Network builders, stationary influence, and DeGroot updating."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from degrootlab.errors import SolverError
from degrootlab.networks import (
    WeightMatrix,
    build_complete_equal,
    build_complete_self_weight,
    build_core_periphery,
    build_star,
    degroot_consensus,
    degroot_iterate,
    stationary_complete_self_weight,
    stationary_core_periphery,
    stationary_distribution,
    stationary_star,
)

FIGURE6_X = np.array([0.1, 0.25, 0.4, 0.7])


def power_oracle(w: np.ndarray) -> np.ndarray:
    """Stationary distribution by brute force: a row of W^256."""
    b = w.copy()
    for _ in range(8):
        b = b @ b
    row = b[0]
    return row / row.sum()


def random_positive_matrix(rng, n: int) -> WeightMatrix:
    # strictly positive entries, so always connected and aperiodic
    w = rng.uniform(0.05, 1.0, size=(n, n))
    return WeightMatrix.from_array(w / w.sum(axis=1, keepdims=True))


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------

def test_complete_equal_four():
    w = build_complete_equal(4)
    assert np.array_equal(w.w, np.full((4, 4), 0.25))
    assert w.strongly_connected_aperiodic


def test_complete_equal_smallest():
    assert np.array_equal(build_complete_equal(2).w, [[0.5, 0.5], [0.5, 0.5]])


def test_complete_equal_ten():
    w = build_complete_equal(10)
    assert np.allclose(w.w, 0.1)
    assert np.allclose(w.w.sum(axis=1), 1.0)


def test_complete_equal_rejects_small():
    with pytest.raises(ValueError):
        build_complete_equal(1)


def test_self_weight_figure6_rows():
    w = build_complete_self_weight(FIGURE6_X)
    assert np.allclose(w.w[0], [0.1, 0.3, 0.3, 0.3])
    assert np.allclose(w.w[1], [0.25, 0.25, 0.25, 0.25])
    assert np.allclose(w.w[2], [0.2, 0.2, 0.4, 0.2])
    assert np.allclose(w.w[3], [0.1, 0.1, 0.1, 0.7])


def test_self_weight_symmetric_reduces_to_equal():
    w = build_complete_self_weight([0.25] * 4)
    assert np.allclose(w.w, build_complete_equal(4).w)


def test_self_weight_two_agents():
    assert np.allclose(build_complete_self_weight([0.5, 0.5]).w, 0.5)


@pytest.mark.parametrize("bad", [0.0, 1.0, -0.2, 1.5])
def test_self_weight_domain(bad):
    with pytest.raises(ValueError):
        build_complete_self_weight([0.3, bad, 0.3, 0.3])


def test_core_periphery_seven_first_row():
    w = build_core_periphery(7)
    assert np.allclose(w.w[0], [0.25, 0.25, 0, 0, 0, 0.25, 0.25])


def test_core_periphery_seven_core_row():
    w = build_core_periphery(7)
    assert np.allclose(w.w[-1], 1 / 7)


def test_core_periphery_large():
    w = build_core_periphery(100)
    assert np.allclose(w.w.sum(axis=1), 1.0)
    # periphery rows touch self, two ring neighbors, and the core
    assert all(np.count_nonzero(w.w[i]) == 4 for i in range(99))


def test_core_periphery_rejects_small():
    with pytest.raises(ValueError):
        build_core_periphery(4)


def test_star_row_structure():
    w = build_star(4)
    assert np.allclose(w.w[0], [0.5, 0, 0, 0.5])


def test_star_smallest():
    w = build_star(3)
    expected = [[0.5, 0, 0.5], [0, 0.5, 0.5], [1 / 3, 1 / 3, 1 / 3]]
    assert np.allclose(w.w, expected)


def test_star_row_sums():
    assert np.allclose(build_star(50).w.sum(axis=1), 1.0)


def test_star_rejects_small():
    with pytest.raises(ValueError):
        build_star(2)


def test_weight_matrix_validation():
    with pytest.raises(ValueError):
        WeightMatrix.from_array([[0.5, 0.4], [0.5, 0.5]])  # row sum off
    with pytest.raises(ValueError):
        WeightMatrix.from_array([[1.5, -0.5], [0.5, 0.5]])  # negative entry
    with pytest.raises(ValueError):
        WeightMatrix.from_array([[0.5, 0.5]])  # not square
    with pytest.raises(ValueError):
        WeightMatrix.from_array([[np.nan, 1.0], [0.5, 0.5]])


def test_weight_matrix_is_immutable():
    w = build_complete_equal(3)
    with pytest.raises(ValueError):
        w.w[0, 0] = 0.9


# ---------------------------------------------------------------------------
# stationary distributions
# ---------------------------------------------------------------------------

def test_stationary_complete_equal():
    pi = stationary_distribution(build_complete_equal(4))
    assert np.allclose(pi.pi, 0.25, atol=1e-12)


def test_stationary_figure6():
    pi = stationary_distribution(build_complete_self_weight(FIGURE6_X))
    assert np.allclose(pi.pi, [0.149, 0.179, 0.224, 0.448], atol=1e-3)


def test_stationary_core_periphery_seven():
    pi = stationary_distribution(build_core_periphery(7))
    expected = np.array([4 / 31] * 6 + [7 / 31])
    assert np.abs(pi.pi - expected).max() < 1e-10


def test_stationary_matches_power_oracle():
    rng = np.random.default_rng(1805)
    for _ in range(100):
        w = random_positive_matrix(rng, int(rng.integers(2, 13)))
        pi = stationary_distribution(w)
        assert np.abs(pi.pi - power_oracle(w.w)).max() < 1e-8


def test_stationary_fixed_point_residual():
    rng = np.random.default_rng(904)
    for _ in range(100):
        w = random_positive_matrix(rng, int(rng.integers(2, 13)))
        pi = stationary_distribution(w).pi
        assert np.abs(pi @ w.w - pi).max() < 1e-10
        assert abs(pi.sum() - 1.0) < 1e-12
        assert (pi > 0).all()


def test_stationary_rejects_periodic():
    with pytest.raises(SolverError):
        stationary_distribution(np.array([[0.0, 1.0], [1.0, 0.0]]))


def test_stationary_rejects_disconnected():
    w = np.array([
        [0.5, 0.5, 0.0, 0.0],
        [0.5, 0.5, 0.0, 0.0],
        [0.0, 0.0, 0.5, 0.5],
        [0.0, 0.0, 0.5, 0.5],
    ])
    with pytest.raises(SolverError):
        stationary_distribution(w)


def test_self_weight_closed_form_symmetric():
    assert np.allclose(stationary_complete_self_weight([0.25] * 4).pi, 0.25)


def test_self_weight_closed_form_figure6():
    pi = stationary_complete_self_weight(FIGURE6_X)
    assert np.allclose(pi.pi, [0.149, 0.179, 0.224, 0.448], atol=1e-3)


def test_self_weight_closed_form_matches_solver():
    rng = np.random.default_rng(77)
    for _ in range(20):
        x = rng.uniform(0.05, 0.95, size=4)
        closed = stationary_complete_self_weight(x).pi
        solved = stationary_distribution(build_complete_self_weight(x)).pi
        assert np.abs(closed - solved).max() < 1e-10


def test_closed_forms_match_solver_through_n50():
    for n in range(5, 51):
        closed = stationary_core_periphery(n).pi
        solved = stationary_distribution(build_core_periphery(n)).pi
        assert np.abs(closed - solved).max() < 1e-10
    for n in range(3, 51):
        closed = stationary_star(n).pi
        solved = stationary_distribution(build_star(n)).pi
        assert np.abs(closed - solved).max() < 1e-10


def test_star_closed_form_smallest():
    assert np.allclose(stationary_star(3).pi, [2 / 7, 2 / 7, 3 / 7])


def test_core_influence_ratio_grows_linearly():
    # core/periphery influence ratio is exactly n/4
    for n in (5, 20, 100):
        pi = stationary_core_periphery(n).pi
        assert abs(pi[-1] / pi[0] - n / 4) < 1e-12


def test_influence_monotone_in_self_weight():
    rng = np.random.default_rng(33)
    for _ in range(20):
        x = rng.uniform(0.05, 0.9, size=5)
        i = int(rng.integers(0, 5))
        base = stationary_distribution(build_complete_self_weight(x)).pi[i]
        bumped = x.copy()
        bumped[i] += 1e-4
        after = stationary_distribution(build_complete_self_weight(bumped)).pi[i]
        assert after > base


def test_influence_derivatives_ordered_in_n():
    # both core and periphery influence fall with n, the periphery faster
    for n in range(5, 100):
        dcore = stationary_core_periphery(n + 1).pi[-1] - stationary_core_periphery(n).pi[-1]
        dperiph = stationary_core_periphery(n + 1).pi[0] - stationary_core_periphery(n).pi[0]
        assert dperiph < dcore < 0


# ---------------------------------------------------------------------------
# consensus
# ---------------------------------------------------------------------------

def test_consensus_of_constant_opinions():
    w = build_core_periphery(7)
    assert abs(degroot_consensus(w, np.full(7, 3.25)) - 3.25) < 1e-12


def test_consensus_uniform_average():
    assert abs(degroot_consensus(build_complete_equal(4), [1, 2, 3, 4]) - 2.5) < 1e-12


def test_consensus_figure6_unit_opinion():
    w = build_complete_self_weight(FIGURE6_X)
    assert abs(degroot_consensus(w, [1, 0, 0, 0]) - 0.149) < 1e-3


def test_consensus_matches_iteration_limit():
    rng = np.random.default_rng(5)
    w = random_positive_matrix(rng, 6)
    s = rng.normal(size=6)
    limit = degroot_iterate(w, s, 500)
    assert np.abs(limit.s - degroot_consensus(w, s)).max() < 1e-8


def test_iterate_zero_steps_is_identity():
    s = np.array([0.0, 1.0])
    assert np.array_equal(degroot_iterate(build_complete_equal(2), s, 0).s, s)


def test_iterate_one_step_averages():
    out = degroot_iterate(build_complete_equal(2), [0.0, 1.0], 1)
    assert np.allclose(out.s, 0.5)


@given(
    a=st.floats(-5, 5, allow_nan=False),
    b=st.floats(-5, 5, allow_nan=False),
    seed=st.integers(0, 2**32 - 1),
)
@settings(max_examples=40, deadline=None)
def test_consensus_linearity(a, b, seed):
    rng = np.random.default_rng(seed)
    w = random_positive_matrix(rng, 5)
    s = rng.normal(size=5)
    lhs = degroot_consensus(w, a * s + b)
    rhs = a * degroot_consensus(w, s) + b
    assert abs(lhs - rhs) < 1e-9 * max(1.0, abs(rhs))
