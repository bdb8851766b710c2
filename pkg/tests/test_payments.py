import json

import numpy as np
import pytest

from gapmech import (Instance, SearchConfig, clarke_pivot_bin,
                     fractional_parts, item_permutations, maximize_surrogate,
                     payments_bin_bidders, payments_item_bidders,
                     round_greedy, surrogate_value, value_without_bin_bidder,
                     value_without_item_bidder)

EX_Y = np.array([[0.6, 0.3], [0.4, 0.7]])


def example_instance(capacity=2.0):
    return Instance(values=np.array([[8.0, 5.0], [4.0, 10.0]]),
                    weights=np.ones((2, 2)), capacities=np.full(2, capacity))


def test_value_without_bin_bidder_worked_example():
    # (0-4)(1-e^-0.6) + 4(1-e^-1) + 10(1-e^-0.7) + 0: orderings frozen, so
    # the zeroed bin keeps its slot and contributes a negative gap term
    inst = example_instance()
    perm = item_permutations(inst)
    got = value_without_bin_bidder(inst, perm, EX_Y, 0)
    want = (-4 * (1 - np.exp(-0.6)) + 4 * (1 - np.exp(-1.0))
            + 10 * (1 - np.exp(-0.7)))
    assert got == pytest.approx(want, abs=1e-12)
    assert got == pytest.approx(5.7579, abs=1e-4)


def test_frozen_order_differs_from_resorted():
    inst = example_instance()
    perm = item_permutations(inst)
    frozen = value_without_bin_bidder(inst, perm, EX_Y, 0)
    zeroed = Instance(values=np.array([[0.0, 0.0], [4.0, 10.0]]),
                      weights=inst.weights, capacities=inst.capacities)
    resorted = surrogate_value(zeroed, item_permutations(zeroed), EX_Y)
    assert abs(frozen - resorted) > 0.1


def test_value_without_item_bidder_worked_example():
    inst = example_instance()
    perm = item_permutations(inst)
    got = value_without_item_bidder(inst, perm, EX_Y, 1)
    want = 4 * (1 - np.exp(-0.6)) + 4 * (1 - np.exp(-1.0))
    assert got == pytest.approx(want, abs=1e-12)


def test_fractional_gain_worked_example():
    inst = example_instance()
    perm = item_permutations(inst)
    full = surrogate_value(inst, perm, EX_Y)
    w_frac, p_frac, lo, hi = fractional_parts(
        pivot=value_without_bin_bidder(inst, perm, EX_Y, 0) + 1.0,
        others=value_without_bin_bidder(inst, perm, EX_Y, 0),
        full_value=full)
    assert w_frac == pytest.approx(full - value_without_bin_bidder(
        inst, perm, EX_Y, 0), abs=1e-12)
    assert w_frac == pytest.approx(4.2530, abs=1e-4)
    assert p_frac == pytest.approx(1.0, abs=1e-12)
    assert not lo and not hi


def test_fractional_parts_clamps():
    # negative gain floors to zero and zeroes the payment
    gain, p, lo, hi = fractional_parts(pivot=5.0, others=7.0, full_value=6.0)
    assert gain == 0.0 and p == 0.0 and lo and not hi
    # pivot above the full value caps the payment at the gain
    gain, p, lo, hi = fractional_parts(pivot=9.0, others=2.0, full_value=6.0)
    assert gain == pytest.approx(4.0) and p == pytest.approx(4.0)
    assert hi and not lo
    # pivot below others' current value floors the payment at zero
    gain, p, lo, hi = fractional_parts(pivot=1.0, others=2.0, full_value=6.0)
    assert gain == pytest.approx(4.0) and p == 0.0 and lo and not hi


def test_clarke_pivot_solves_reduced_market():
    # without bin 0, the best surrogate is 14(1 - 1/e) (both items in bin 1)
    inst = example_instance()
    cfg = SearchConfig.for_instance(inst, 0.05)
    h = clarke_pivot_bin(inst, 0, cfg)
    best = 14 * (1 - 1 / np.e)
    assert h <= best + 1e-9
    assert h >= best - 0.05 * 10.0     # threshold exit leaves at most eps*M


def _payment_fixture(model):
    inst = example_instance()
    cfg = SearchConfig.for_instance(inst, 0.1)
    x, y, trace = maximize_surrogate(inst, cfg)
    outcome = round_greedy(x, inst, seed=11)
    if model == "bins":
        return inst, payments_bin_bidders(inst, y, x, outcome, cfg), outcome
    return inst, payments_item_bidders(inst, y, x, outcome, cfg), outcome


@pytest.mark.parametrize("model", ["bins", "items"])
def test_payment_invariants(model):
    inst, report, outcome = _payment_fixture(model)
    assert report.model == model
    assert len(report.entries) == 2
    for e in report.entries:
        assert 0.0 <= e.payment <= e.realized_value + 1e-12
        if e.fractional_gain == 0.0:
            assert e.payment == 0.0
        if e.realized_value == 0.0:
            assert e.payment == 0.0


@pytest.mark.parametrize("model", ["bins", "items"])
def test_payment_report_serializes(model):
    _, report, _ = _payment_fixture(model)
    decoded = json.loads(report.to_json())
    assert decoded["model"] == model
    assert {"h", "F_minus", "w_frac", "p_frac", "payment"} <= set(
        decoded["entries"][0])


def test_lone_bidder_pays_nothing():
    inst = Instance(values=np.array([[6.0, 2.0]]),
                    weights=np.ones((1, 2)), capacities=np.array([2.0]))
    cfg = SearchConfig.for_instance(inst, 0.2)
    x, y, trace = maximize_surrogate(inst, cfg)
    outcome = round_greedy(x, inst, seed=0)
    report = payments_bin_bidders(inst, y, x, outcome, cfg)
    assert report.entries[0].payment == 0.0
    assert report.entries[0].pivot_value == 0.0


def test_worthless_bidder_pays_nothing():
    inst = Instance(values=np.array([[8.0, 5.0], [0.0, 0.0]]),
                    weights=np.ones((2, 2)), capacities=np.full(2, 2.0))
    cfg = SearchConfig.for_instance(inst, 0.2)
    x, y, trace = maximize_surrogate(inst, cfg)
    outcome = round_greedy(x, inst, seed=0)
    report = payments_bin_bidders(inst, y, x, outcome, cfg)
    dead = report.entries[1]
    assert dead.realized_value == 0.0
    assert dead.payment == 0.0


def test_payments_deterministic():
    _, a, _ = _payment_fixture("bins")
    _, b, _ = _payment_fixture("bins")
    assert a.to_json() == b.to_json()
