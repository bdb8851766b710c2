import numpy as np
import pytest

from gapmech import (Instance, SparseFractionalAssignment,
                     assignment_distribution, assignment_frequencies,
                     damp_marginals, dominate_to_target,
                     exact_expected_welfare, is_feasible_allocation,
                     item_permutations, marginals, round_greedy,
                     round_simplified, round_with_permutations,
                     sample_welfare, surrogate_value)


def example_instance():
    return Instance(values=np.array([[8.0, 5.0], [4.0, 10.0]]),
                    weights=np.ones((2, 2)), capacities=np.full(2, 2.0))


def example_x():
    # marginals match the worked 2x2 point: [[0.6, 0.3], [0.4, 0.7]]
    return SparseFractionalAssignment(2, 2, [
        {frozenset({0}): 0.3, frozenset({0, 1}): 0.3},
        {frozenset({1}): 0.3, frozenset({0, 1}): 0.4},
    ])


def test_damp():
    y = np.array([[0.0, 0.5], [1.0, 2.0]])
    assert np.allclose(damp_marginals(y), 1 - np.exp(-y), atol=1e-15)
    assert damp_marginals(np.zeros((1, 1)))[0, 0] == 0.0


def test_dominate_hits_target_exactly():
    x = example_x()
    target = np.array([[0.45, 0.1], [0.4, 0.2]])
    out = dominate_to_target(x, target)
    assert np.abs(marginals(out) - target).max() <= 1e-15
    # peeling splits each component at most once per touched entry
    assert out.n_components <= x.n_components + 4


def test_dominate_peels_in_insertion_order():
    x = SparseFractionalAssignment(1, 2, [
        {frozenset({0}): 0.4, frozenset({0, 1}): 0.4}])
    out = dominate_to_target(x, np.array([[0.5, 0.4]]))
    # first listed component absorbs the whole item-0 reduction
    assert out.bins[0][frozenset({0})] == pytest.approx(0.1, abs=1e-15)
    assert out.bins[0][frozenset({0, 1})] == pytest.approx(0.4, abs=1e-15)


def test_dominate_drops_emptied_components():
    x = SparseFractionalAssignment(1, 1, [{frozenset({0}): 0.5}])
    out = dominate_to_target(x, np.array([[0.0]]))
    assert out.n_components == 0


def test_dominate_rejects_bad_target():
    x = example_x()
    too_big = marginals(x) + 0.1
    with pytest.raises(ValueError):
        dominate_to_target(x, too_big)


def test_round_is_deterministic_and_feasible():
    inst = example_instance()
    x = example_x()
    a = round_greedy(x, inst, seed=3)
    b = round_greedy(x, inst, seed=3)
    assert a.allocation == b.allocation
    assert a.raw_draws == b.raw_draws
    for seed in range(25):
        out = round_greedy(x, inst, seed)
        assert is_feasible_allocation(inst, out.allocation)
        out = round_simplified(x, inst, seed)
        assert is_feasible_allocation(inst, out.allocation)


def test_round_rejects_negative_seed():
    with pytest.raises(ValueError):
        round_greedy(example_x(), example_instance(), -1)


def test_conflicts_go_to_first_bin_in_item_order():
    inst = example_instance()
    x = example_x()
    perm = item_permutations(inst)        # item 0 -> (0, 1), item 1 -> (1, 0)
    hit = 0
    for seed in range(300):
        out = round_with_permutations(x, perm, seed)
        for j in range(2):
            claimants = [i for i in range(2) if j in out.raw_draws[i]]
            if len(claimants) == 2:
                hit += 1
                winner = perm[j][0]
                assert j in out.allocation[winner]
                assert j not in out.allocation[1 - winner]
    assert hit > 0                        # contention actually happened


def test_distribution_product_law():
    # item j goes to the k-th bin of its order iff that bin draws it and
    # all earlier bins do not
    inst = example_instance()
    perm = item_permutations(inst)
    x = example_x()
    damped = dominate_to_target(x, damp_marginals(marginals(x)))
    yd = marginals(damped)
    q = assignment_distribution(damped, perm).q
    assert q[0, 0] == pytest.approx(yd[0, 0], abs=1e-15)
    assert q[1, 0] == pytest.approx(yd[1, 0] * (1 - yd[0, 0]), abs=1e-15)
    assert q[1, 1] == pytest.approx(yd[1, 1], abs=1e-15)
    assert q[0, 1] == pytest.approx(yd[0, 1] * (1 - yd[1, 1]), abs=1e-15)
    un = assignment_distribution(damped, perm).unassigned
    assert np.allclose(un, 1 - q.sum(axis=0), atol=1e-15)


def test_expected_welfare_equals_surrogate():
    inst = example_instance()
    x = example_x()
    got = exact_expected_welfare(inst, x)
    want = surrogate_value(inst, item_permutations(inst), marginals(x))
    assert got == pytest.approx(want, abs=1e-12)
    assert got == pytest.approx(10.0109, abs=1e-4)


def test_single_pair_assignment_probability():
    # one bin, one item with mass y: P(assigned) = 1 - e^{-y} for both modes
    inst = Instance(values=np.array([[2.0]]), weights=np.array([[1.0]]),
                    capacities=np.array([1.0]))
    x = SparseFractionalAssignment(1, 1, [{frozenset({0}): 0.8}])
    want = 1 - np.exp(-0.8)
    for mode in ("greedy", "simplified"):
        freq = assignment_frequencies(inst, x, mode, 200_000, seed=1)[0, 0]
        se = np.sqrt(want * (1 - want) / 200_000)
        assert abs(freq - want) <= 4 * se, mode


def test_sample_welfare_tracks_exact():
    inst = example_instance()
    x = example_x()
    exact = exact_expected_welfare(inst, x)
    for mode in ("greedy", "simplified"):
        mean, se = sample_welfare(inst, x, mode, 100_000, seed=2)
        assert abs(mean - exact) <= 4 * se, mode


def test_batch_rejects_unknown_mode():
    with pytest.raises(ValueError):
        assignment_frequencies(example_instance(), example_x(), "other",
                               10, seed=0)


def test_simplified_raw_draws_respect_retention():
    # simplified mode samples from x, then drops items; kept sets must be
    # subsets of some component of x
    inst = example_instance()
    x = example_x()
    components = [set(s) for s in x.bins[0]] + [set(s) for s in x.bins[1]]
    for seed in range(50):
        out = round_simplified(x, inst, seed)
        for i in range(2):
            drawn = set(out.raw_draws[i])
            assert any(drawn <= c for c in [set(s) for s in x.bins[i]]) \
                or not drawn
