"""Acceptance gate: one test per criterion, one printed line per criterion.

Every tolerance is stated inline.  The heavy fixtures (30 solved instances
at eps = 0.05) are shared across the criteria that reuse the same runs.
"""

import sys
from types import SimpleNamespace

import numpy as np
import pytest

from gapmech import (Instance, KnapsackProblem, SearchConfig,
                     assignment_distribution, assignment_frequencies,
                     audit_truthfulness, brute_force_opt, certify_membership,
                     damp_marginals, dominate_to_target,
                     exact_expected_welfare, generate_instance,
                     item_permutations, knapsack_exact, knapsack_fptas,
                     marginals, maximize_surrogate, payments_bin_bidders,
                     round_greedy, sample_welfare, surrogate_gradient,
                     surrogate_value, value_without_bin_bidder)
from gapmech.mechanism import PROFILES
from gapmech.verify import random_fractional_assignment

SHAPES = [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (3, 4)]
EPS = 0.05
RATIO_BOUND = 1 - 1 / np.e - 2 * EPS

# verdict lines; conftest replays these in the terminal summary, where
# pytest's fd-level capture cannot swallow them
RESULTS: list[tuple[int, bool, str]] = []
LOGS: list[str] = []


def _announce(num: int, ok: bool, text: str) -> None:
    RESULTS.append((num, ok, text))
    print(f"[criterion {num:02d}] {'PASS' if ok else 'FAIL'} {text}",
          file=sys.__stdout__, flush=True)


@pytest.fixture(scope="module")
def suite30():
    """30 solved instances, n in {2,3}, m in {2,3,4}, eps = 0.05."""
    runs = []
    for k in range(30):
        n, m = SHAPES[k % len(SHAPES)]
        inst = generate_instance(n, m, seed=1000 + k,
                                 profile=PROFILES[k % len(PROFILES)])
        cfg = SearchConfig.for_instance(inst, EPS)
        x, y, trace = maximize_surrogate(inst, cfg)
        opt, _ = brute_force_opt(inst)
        runs.append(SimpleNamespace(
            inst=inst, cfg=cfg, x=x, y=y, trace=trace, opt=opt,
            expected_welfare=exact_expected_welfare(inst, x)))
    return runs


def test_criterion_01_approximation_ratio(suite30):
    ratios = [r.expected_welfare / r.opt for r in suite30]
    ok = all(r.expected_welfare >= RATIO_BOUND * r.opt for r in suite30)
    _announce(1, ok, f"expected welfare >= (1-1/e-0.1)*OPT on 30 instances; "
                     f"min ratio {min(ratios):.4f} vs bound {RATIO_BOUND:.4f}")
    assert ok


def test_criterion_02_rounding_law_equality():
    rng = np.random.default_rng(202)
    worst_eq, worst_z = 0.0, 0.0
    for n, m in SHAPES:
        inst = generate_instance(n, m, seed=2000 + 10 * n + m)
        perm = item_permutations(inst)
        for t in range(10):
            x = random_fractional_assignment(inst, rng)
            y = marginals(x)
            damped = dominate_to_target(x, damp_marginals(y))
            q = assignment_distribution(damped, perm).q
            exact = float((q * inst.values).sum())
            worst_eq = max(worst_eq, abs(exact - surrogate_value(inst, perm, y)))
            mean, se = sample_welfare(inst, x, "greedy", 100_000,
                                      seed=7000 + 100 * n + 10 * m + t)
            worst_z = max(worst_z, abs(mean - exact) / max(se, 1e-12))
    ok = worst_eq <= 1e-9 and worst_z <= 3.0
    _announce(2, ok, f"exact law equality within 1e-9 (worst {worst_eq:.2e}), "
                     f"Monte Carlo within 3 SE at 1e5 (worst |z| {worst_z:.2f})")
    assert ok


def test_criterion_03_gradient_finite_differences():
    rng = np.random.default_rng(303)
    h, worst = 1e-6, 0.0
    for _ in range(100):
        inst = generate_instance(3, 4, seed=int(rng.integers(2 ** 31)))
        perm = item_permutations(inst)
        y = rng.uniform(0.0, 1.0, (3, 4))
        grad = surrogate_gradient(inst, perm, y)
        i, j = int(rng.integers(3)), int(rng.integers(4))
        up, dn = y.copy(), y.copy()
        up[i, j] += h
        dn[i, j] -= h
        fd = (surrogate_value(inst, perm, up)
              - surrogate_value(inst, perm, dn)) / (2 * h)
        worst = max(worst, abs(fd - grad[i, j]) / max(abs(grad[i, j]), 1e-12))
    ok = worst <= 1e-4
    _announce(3, ok, f"100 central-difference probes (h=1e-6), "
                     f"max relative error {worst:.2e} <= 1e-4")
    assert ok


def test_criterion_04_concavity_and_gradient_shift():
    rng = np.random.default_rng(404)
    worst_cv, worst_sh = 0.0, 0.0
    for _ in range(1000):
        n, m = SHAPES[int(rng.integers(len(SHAPES)))]
        inst = generate_instance(n, m, seed=int(rng.integers(2 ** 31)))
        perm = item_permutations(inst)
        a, b = rng.uniform(0, 1, (2, n, m))
        lam = rng.random()
        mid = surrogate_value(inst, perm, lam * a + (1 - lam) * b)
        chord = (lam * surrogate_value(inst, perm, a)
                 + (1 - lam) * surrogate_value(inst, perm, b))
        worst_cv = max(worst_cv, chord - mid)

        shift = rng.uniform(0, 0.05)
        a2 = np.clip(a + rng.uniform(-shift, shift, (n, m)), 0, None)
        g1, g2 = (surrogate_gradient(inst, perm, p) for p in (a, a2))
        worst_sh = max(worst_sh,
                       float((g2 - np.exp(n * shift) * g1).max()),
                       float((np.exp(-n * shift) * g1 - g2).max()))
    ok = worst_cv <= 1e-9 and worst_sh <= 1e-9
    _announce(4, ok, f"1000 concavity probes (worst violation {worst_cv:.2e}) "
                     f"and 1000 shift-envelope probes (worst {worst_sh:.2e}), "
                     f"slack 1e-9")
    assert ok


def test_criterion_05_local_search_mechanics(suite30):
    bad = []
    min_audits = None
    for idx, r in enumerate(suite30):
        n, m = r.inst.n_bins, r.inst.n_items
        floor = EPS ** 2 * r.trace.value_scale / (12 * m * n * n) - 1e-9
        steps = np.diff(r.trace.f_values)
        checks = {
            "membership": certify_membership(r.inst, r.x).ok,
            "step_floor": bool((steps >= floor).all()),
            "iteration_cap": r.trace.iterations <= r.cfg.max_iters,
            "audit_error": all(e <= 1e-9 for _, e in r.trace.y_audits),
            "audit_count": len(r.trace.y_audits) >= 10,
            "marginal_identity": bool(np.array_equal(r.y, marginals(r.x))),
        }
        n_aud = len(r.trace.y_audits)
        min_audits = n_aud if min_audits is None else min(min_audits, n_aud)
        bad.extend(f"run {idx}: {k}" for k, v in checks.items() if not v)
    ok = not bad
    _announce(5, ok, f"membership, per-pass increase floor, iteration cap, "
                     f"pool audits (>=10 per run, min seen {min_audits}) "
                     f"on all 30 runs" + ("" if ok else f"; failed: {bad[:4]}"))
    assert ok, bad


def test_criterion_06_dominated_point_exactness():
    rng = np.random.default_rng(606)
    worst, growth_ok = 0.0, True
    for _ in range(1000):
        n, m = SHAPES[int(rng.integers(len(SHAPES)))]
        inst = generate_instance(n, m, seed=int(rng.integers(2 ** 31)))
        x = random_fractional_assignment(inst, rng)
        target = marginals(x) * rng.uniform(0, 1, (n, m))
        out = dominate_to_target(x, target)
        worst = max(worst, float(np.abs(marginals(out) - target).max()))
        growth_ok &= out.n_components - x.n_components <= n * m
    ok = worst <= 1e-9 and growth_ok
    _announce(6, ok, f"1000 dominated targets hit within 1e-9 "
                     f"(worst {worst:.2e}), component growth <= n*m: "
                     f"{growth_ok}")
    assert ok


def test_criterion_07_rounding_mode_agreement():
    worst = 0.0
    samples = 1_000_000
    for t, (n, m) in enumerate([(2, 2), (2, 4), (3, 2), (3, 3), (3, 4)]):
        inst = generate_instance(n, m, seed=7100 + t)
        x, _, _ = maximize_surrogate(inst, SearchConfig.for_instance(inst, 0.1))
        fg = assignment_frequencies(inst, x, "greedy", samples, seed=761)
        fs = assignment_frequencies(inst, x, "simplified", samples, seed=762)
        pooled = (fg + fs) / 2
        se = np.sqrt(np.maximum(pooled * (1 - pooled), 1e-12) * 2 / samples)
        worst = max(worst, float((np.abs(fg - fs) / se).max()))
    ok = worst <= 3.0
    _announce(7, ok, f"greedy vs simplified per-cell frequencies on 5 "
                     f"instances at 1e6 draws, worst |z| {worst:.2f} <= 3")
    assert ok


def test_criterion_08_permutation_dominance():
    rng = np.random.default_rng(808)
    worst, compared = 0.0, 0
    while compared < 200:
        n, m = SHAPES[int(rng.integers(len(SHAPES)))]
        inst = generate_instance(n, m, seed=int(rng.integers(2 ** 31)))
        x = random_fractional_assignment(inst, rng)
        sigma = item_permutations(inst)
        pi = np.vstack([rng.permutation(n) for _ in range(m)])
        if np.array_equal(pi, sigma):
            continue
        compared += 1
        worst = max(worst, exact_expected_welfare(inst, x, pi)
                    - exact_expected_welfare(inst, x, sigma))
    ok = worst <= 1e-12
    _announce(8, ok, f"value-sorted order >= 200 random orders, "
                     f"worst overshoot {worst:.2e} <= 1e-12")
    assert ok


def test_criterion_09_payments(suite30):
    # printed worked example: F_minus-1 = (0-4)(1-e^-.6)+4(1-e^-1)+10(1-e^-.7)
    ex = Instance(values=np.array([[8.0, 5.0], [4.0, 10.0]]),
                  weights=np.ones((2, 2)), capacities=np.full(2, 2.0))
    y_star = np.array([[0.6, 0.3], [0.4, 0.7]])
    f_minus = value_without_bin_bidder(ex, item_permutations(ex), y_star, 0)
    example_ok = abs(f_minus - 5.7579) <= 1e-4

    violations, clamped, total = [], 0, 0
    for idx, r in enumerate(suite30):
        outcome = round_greedy(r.x, r.inst, seed=9000 + idx)
        report = payments_bin_bidders(r.inst, r.y, r.x, outcome, r.cfg)
        for e in report.entries:
            total += 1
            clamped += e.clamped_low or e.clamped_high
            if not 0.0 <= e.payment <= e.realized_value + 1e-12:
                violations.append((idx, e.bidder, "range"))
            if e.pivot_value <= e.others_value and e.payment != 0.0:
                violations.append((idx, e.bidder, "zero_externality"))
            if e.fractional_gain == 0.0 and e.payment != 0.0:
                violations.append((idx, e.bidder, "zero_gain"))
    clamp_rate = clamped / total
    ok = example_ok and not violations and clamp_rate <= 0.05
    _announce(9, ok, f"worked-example F_minus {f_minus:.5f} within 1e-4 of "
                     f"5.7579: {example_ok}; 0 <= payment <= realized on "
                     f"{total} bidder-runs ({len(violations)} violations); "
                     f"clamp rate {clamp_rate:.3f} <= 0.05")
    assert ok, violations


def test_criterion_10_truthfulness_audit():
    slack = 0.05
    hard_failures, logged = [], []
    for t in range(10):
        inst = generate_instance(2, 2, seed=10_000 + t)
        for model in ("bins", "items"):
            for bidder in range(2):
                rows = audit_truthfulness(inst, bidder, model, 0.01)
                truth = rows[0].expected_utility
                for row in rows[1:]:
                    if truth < (1 - slack) * row.expected_utility - 1e-12:
                        hard_failures.append((t, model, bidder, row.factor))
                    elif truth < row.expected_utility:
                        logged.append(
                            f"instance {t} {model} bidder {bidder} factor "
                            f"{row.factor}: within-slack gap "
                            f"{row.expected_utility - truth:.2e}")
    LOGS.extend(logged)
    for line in logged:
        print(f"[criterion 10 log] {line}", file=sys.__stdout__, flush=True)
    ok = not hard_failures
    _announce(10, ok, f"truth >= 0.95 x best misreport on 10 2x2 instances, "
                      f"both models, eps=0.01; {len(hard_failures)} hard "
                      f"failures, {len(logged)} within-slack gaps logged")
    assert ok, hard_failures


def test_criterion_11_knapsack_contract():
    rng = np.random.default_rng(1111)
    worst_ratio, feasible = 1.0, True
    for _ in range(200):
        k = int(rng.integers(1, 21))
        problem = KnapsackProblem(
            profits=rng.uniform(0, 10, k) * (rng.random(k) < 0.92),
            weights=rng.uniform(0, 3, k),
            capacity=float(rng.uniform(0.5, 0.8 * k)))
        opt, _ = knapsack_exact(problem)
        for eps in (0.5, 0.1, 0.01):
            chosen = sorted(knapsack_fptas(problem, eps))
            if chosen:
                feasible &= float(problem.weights[chosen].sum()) \
                    <= problem.capacity
            profit = float(problem.profits[chosen].sum()) if chosen else 0.0
            if opt > 0:
                worst_ratio = min(worst_ratio, profit / ((1 - eps) * opt))
            else:
                feasible &= profit == 0.0
    ok = worst_ratio >= 1.0 - 1e-12 and feasible
    _announce(11, ok, f"200 problems x eps in {{0.5, 0.1, 0.01}}: profit >= "
                      f"(1-eps)*exact (min profit/bound {worst_ratio:.6f}), "
                      f"feasibility exact: {feasible}")
    assert ok
