"""Multi-dimensional states: sampling, per-dimension consensus, multiplex
choice, and the specialist/generalist comparison."""
import itertools

import numpy as np
import pytest

from degrootlab.multidim import (
    MultiplexInfluence,
    PopulationMix,
    SignalModel,
    choice_profile_variances,
    mixed_population_variance,
    multidim_consensus,
    multiplex_choice,
    multiplex_choice_set,
    optimal_specialist_share,
    sample_estimates,
)
from degrootlab.networks import build_complete_equal, degroot_consensus


def model(tau_strong=10.0, tau_weak=1.0, m=3):
    return SignalModel(tau_strong=tau_strong, tau_weak=tau_weak, theta=np.zeros(m))


def three_layers(n: int) -> MultiplexInfluence:
    uniform = np.full(n, 1.0 / n)
    core = np.full(n, 4.0 / (5 * n - 4))
    core[-1] = n / (5 * n - 4)
    star = np.full(n, 2.0 / (3 * n - 2))
    star[0] = n / (3 * n - 2)
    return MultiplexInfluence.from_arrays([uniform, core, star])


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

def test_sampling_is_deterministic_under_seed():
    choices = (1, 2, 3, 1)
    a = sample_estimates(model(), choices, seed=11)
    b = sample_estimates(model(), choices, seed=11)
    assert np.array_equal(a.e, b.e)
    c = sample_estimates(model(), choices, seed=12)
    assert not np.array_equal(a.e, c.e)


def test_noiseless_limit_pins_chosen_entries():
    m = SignalModel(tau_strong=1e12, tau_weak=0.5, theta=np.array([1.0, -2.0]))
    est = sample_estimates(m, (1, 2, 2), seed=3)
    assert est.e[0, 0] == 1.0
    assert est.e[1, 1] == -2.0
    assert est.e[2, 1] == -2.0
    assert est.e[0, 1] != -2.0  # weak entries still noisy


def test_sampling_rejects_bad_dimension():
    with pytest.raises(ValueError):
        sample_estimates(model(m=2), (1, 3), seed=0)
    with pytest.raises(ValueError):
        sample_estimates(model(m=2), (0, 1), seed=0)


def test_chosen_entry_mean_obeys_law_of_large_numbers():
    n, tau = 4000, 10.0
    m = SignalModel(tau_strong=tau, tau_weak=1.0, theta=np.zeros(3))
    rng = np.random.default_rng(55)
    choices = tuple(int(v) for v in rng.integers(1, 4, size=n))
    est = sample_estimates(m, choices, seed=56)
    chosen = est.e[np.arange(n), np.array(choices) - 1]
    assert abs(chosen.mean()) < 4.0 / (tau * np.sqrt(n))


# ---------------------------------------------------------------------------
# per-dimension consensus
# ---------------------------------------------------------------------------

def test_consensus_of_constant_columns():
    w = build_complete_equal(5)
    e = np.tile([2.0, -1.0, 0.5], (5, 1))
    assert np.allclose(multidim_consensus(w, e), [2.0, -1.0, 0.5], atol=1e-12)


def test_single_dimension_reduces_to_scalar_consensus():
    w = build_complete_equal(4)
    e = np.array([[1.0], [2.0], [3.0], [4.0]])
    assert abs(multidim_consensus(w, e)[0] - degroot_consensus(w, e[:, 0])) < 1e-12


def test_dimension_permutation_permutes_consensus():
    w = build_complete_equal(6)
    rng = np.random.default_rng(8)
    e = rng.normal(size=(6, 3))
    base = multidim_consensus(w, e)
    perm = [2, 0, 1]
    assert np.allclose(multidim_consensus(w, e[:, perm]), base[perm], atol=1e-12)


# ---------------------------------------------------------------------------
# multiplex choice
# ---------------------------------------------------------------------------

def test_three_layer_pattern_without_ties():
    infl = three_layers(10)
    assert multiplex_choice(infl, 0) == 3  # star center
    assert multiplex_choice(infl, 9) == 2  # ring core
    assert all(multiplex_choice(infl, i) == 1 for i in range(1, 9))


def test_smallest_three_layer_case_is_tied():
    # at n=4 the ring-plus-core layer collapses to uniform influence
    infl = three_layers(4)
    assert multiplex_choice_set(infl, 3) == (1, 2)
    assert multiplex_choice(infl, 3) == 1


def test_identical_layers_break_to_first():
    pi = np.full(5, 0.2)
    infl = MultiplexInfluence.from_arrays([pi, pi, pi])
    assert all(multiplex_choice(infl, i) == 1 for i in range(5))


def test_single_layer_choice():
    infl = MultiplexInfluence.from_arrays([np.full(3, 1 / 3)])
    assert multiplex_choice(infl, 1) == 1


def test_choice_survives_prenormalization_scaling():
    rng = np.random.default_rng(21)
    raw = [rng.uniform(0.1, 1.0, size=6) for _ in range(3)]
    infl = MultiplexInfluence.from_arrays([r / r.sum() for r in raw])
    scaled = MultiplexInfluence.from_arrays(
        [(c * r) / (c * r).sum() for c, r in zip((3.0, 0.25, 17.0), raw)]
    )
    for i in range(6):
        assert multiplex_choice(infl, i) == multiplex_choice(scaled, i)


# ---------------------------------------------------------------------------
# profile variances
# ---------------------------------------------------------------------------

def test_profile_variance_hand_case():
    m = SignalModel(tau_strong=2.0, tau_weak=1.0, theta=np.zeros(2))
    pi = np.array([0.5, 0.5])
    v = choice_profile_variances(pi, m, (1, 2))
    # dim 1: agent 1 strong (1/4), agent 2 weak (1); each weighted by 0.25
    assert abs(v[0] - 0.25 * (0.25 + 1.0)) < 1e-12
    assert abs(v[1] - 0.25 * (1.0 + 0.25)) < 1e-12


def test_profile_variance_permutation_indifference():
    rng = np.random.default_rng(17)
    for n, m_dims in itertools.product((4, 5, 6), (2, 3)):
        pi = np.full(n, 1.0 / n)
        sig = model(m=m_dims)
        for _ in range(20):
            d = rng.integers(1, m_dims + 1, size=n)
            perm = rng.permutation(n)
            assert np.allclose(
                choice_profile_variances(pi, sig, d),
                choice_profile_variances(pi, sig, d[perm]),
                atol=1e-15,
            )


# ---------------------------------------------------------------------------
# specialists vs generalists
# ---------------------------------------------------------------------------

def test_all_specialists_single_dimension():
    mix = PopulationMix(alpha=1.0, n=8, m=1)
    sig = SignalModel(tau_strong=2.0, tau_weak=0.5, theta=np.zeros(1))
    assert abs(mixed_population_variance(0.125, mix, sig, 2.0)
               - 0.125 ** 2 * 8 / 4.0) < 1e-15


def test_all_generalists():
    mix = PopulationMix(alpha=0.0, n=6, m=3)
    sig = SignalModel(tau_strong=3.0, tau_weak=0.5, theta=np.zeros(3))
    expected = (1 / 6) ** 2 * 6 / (0.5 + 1.0) ** 2
    assert abs(mixed_population_variance(1 / 6, mix, sig, 3.0) - expected) < 1e-15


def test_variance_is_affine_in_share():
    sig = SignalModel(tau_strong=5.0, tau_weak=0.2, theta=np.zeros(4))

    def v(alpha):
        return mixed_population_variance(0.1, PopulationMix(alpha=alpha, n=10, m=4), sig, 5.0)

    assert abs(v(0.5) - 0.5 * (v(0.0) + v(1.0))) < 1e-12
    assert abs(v(0.75) - 2 * v(0.5) + v(0.25)) < 1e-12  # second difference vanishes


def test_share_sign_rule_baseline_case():
    res = optimal_specialist_share(5, 10.0, 0.01)
    assert res.coefficient > 0
    assert res.alpha_star == 0.0
    assert not res.degenerate


def test_share_single_dimension_favors_generalists():
    # the generalist keeps the baseline on top of the full budget, so
    # the slope g = 1/tau_i^2 - 1/(tau_weak + tau_i)^2 is positive
    res = optimal_specialist_share(1, 10.0, 0.01)
    assert res.coefficient > 0
    assert res.alpha_star == 0.0


def test_share_degenerate_flag_near_zero_slope():
    res = optimal_specialist_share(1, 1.0, 1e-13)
    assert res.degenerate


def test_share_matches_grid_minimum():
    rng = np.random.default_rng(612)
    grid = (0.0, 0.25, 0.5, 0.75, 1.0)
    for _ in range(200):
        m_dims = int(rng.integers(1, 6))
        tau_i = float(rng.uniform(0.05, 50.0))
        tau_w = float(rng.uniform(0.001, tau_i * 0.99))
        sig = SignalModel(tau_strong=tau_i, tau_weak=tau_w, theta=np.zeros(m_dims))
        res = optimal_specialist_share(m_dims, tau_i, tau_w)
        values = [
            mixed_population_variance(0.1, PopulationMix(alpha=a, n=20, m=m_dims), sig, tau_i)
            for a in grid
        ]
        assert grid[int(np.argmin(values))] == res.alpha_star


def test_population_counts_require_integral_split():
    assert PopulationMix(alpha=0.5, n=10, m=2).counts() == (5, 5)
    assert PopulationMix(alpha=0.3, n=10, m=2).counts() == (3, 7)
    with pytest.raises(ValueError):
        PopulationMix(alpha=0.25, n=10, m=2).counts()


def test_signal_model_validation():
    with pytest.raises(ValueError):
        SignalModel(tau_strong=1.0, tau_weak=2.0, theta=np.zeros(2))
    with pytest.raises(ValueError):
        SignalModel(tau_strong=1.0, tau_weak=0.0, theta=np.zeros(2))
