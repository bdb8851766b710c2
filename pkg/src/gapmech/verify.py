"""Runnable verification of every module invariant.

Each check returns a :class:`CheckResult`; :func:`run_suite` bundles them
into a machine-readable report.  ``quick`` keeps the whole suite under a
minute, ``full`` runs million-sample law checks and a denser truthfulness
grid.  All randomness is fixed-seeded so a pass is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .instances import (Instance, allocation_welfare, brute_force_opt,
                        is_feasible_allocation, is_feasible_set,
                        item_permutations)
from .knapsack import KnapsackProblem, knapsack_exact, knapsack_fptas
from .local_search import SearchConfig, certify_membership, maximize_surrogate
from .mechanism import (audit_truthfulness, generate_instance,
                        run_mechanism)
from .payments import payments_bin_bidders, payments_item_bidders
from .rounding import (assignment_distribution, assignment_frequencies,
                       damp_marginals, dominate_to_target,
                       exact_expected_welfare, round_greedy, round_simplified,
                       sample_welfare)
from .surrogate import (SparseFractionalAssignment, marginals,
                        surrogate_gradient, surrogate_value)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    counterexample: dict | None = None

    def to_dict(self) -> dict:
        out = {"name": self.name, "passed": self.passed, "detail": self.detail}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


@dataclass(frozen=True)
class VerifyReport:
    level: str
    results: tuple[CheckResult, ...]

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    def to_dict(self) -> dict:
        return {"level": self.level, "ok": self.ok,
                "results": [r.to_dict() for r in self.results]}


def random_fractional_assignment(inst: Instance, rng: np.random.Generator,
                                 max_sets_per_bin: int = 3
                                 ) -> SparseFractionalAssignment:
    """Random point of the relaxed polytope: few feasible sets per bin."""
    per_bin = []
    for i in range(inst.n_bins):
        k = int(rng.integers(1, max_sets_per_bin + 1))
        sets = []
        for _ in range(k):
            items = [j for j in range(inst.n_items) if rng.random() < 0.5]
            while items and not is_feasible_set(inst, i, items):
                items.pop(int(rng.integers(len(items))))
            if items:
                sets.append(frozenset(items))
        mapping: dict[frozenset, float] = {}
        if sets:
            masses = rng.random(len(sets))
            masses *= rng.uniform(0.3, 1.0) / masses.sum()
            for s, mass in zip(sets, masses):
                mapping[s] = mapping.get(s, 0.0) + float(mass)
        per_bin.append(mapping)
    return SparseFractionalAssignment(inst.n_bins, inst.n_items, per_bin)


def _rng(tag: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence((20260814, tag)))


def _result(name: str, passed: bool, detail: str,
            counterexample: dict | None = None) -> CheckResult:
    return CheckResult(name, bool(passed),
                       detail, None if passed else counterexample)


def check_instance_validation() -> CheckResult:
    rejected = 0
    bad = [
        dict(values=[[1.0]], weights=[[1.0, 2.0]], capacities=[1.0]),
        dict(values=[[1.0, 2.0]], weights=[[1.0, 2.0]], capacities=[1.0, 2.0]),
        dict(values=[[-1.0]], weights=[[1.0]], capacities=[1.0]),
        dict(values=[[np.inf]], weights=[[1.0]], capacities=[1.0]),
        dict(values=[[1.0]], weights=[[1.0]], capacities=[-1.0]),
    ]
    for kwargs in bad:
        try:
            Instance(**{k: np.array(v, dtype=float) for k, v in kwargs.items()})
        except ValueError:
            rejected += 1
    inst = generate_instance(3, 4, seed=7)
    round_trip = Instance.from_dict(inst.to_dict())
    same = (np.array_equal(round_trip.values, inst.values)
            and np.array_equal(round_trip.weights, inst.weights)
            and np.array_equal(round_trip.capacities, inst.capacities))
    return _result("instance_validation", rejected == len(bad) and same,
                   f"rejected {rejected}/{len(bad)} malformed, round-trip ok={same}")


def check_brute_force(cases: int = 20) -> CheckResult:
    rng = _rng(1)
    worst = None
    for t in range(cases):
        inst = generate_instance(int(rng.integers(1, 4)), int(rng.integers(1, 5)),
                                 seed=int(rng.integers(2 ** 31)),
                                 profile="uniform")
        opt, alloc = brute_force_opt(inst)
        if not is_feasible_allocation(inst, alloc):
            worst = {"case": t, "reason": "infeasible witness"}
            break
        if abs(allocation_welfare(inst, alloc) - opt) > 1e-12:
            worst = {"case": t, "reason": "witness welfare mismatch"}
            break
        if opt + 1e-12 < inst.values.max() * 0:  # opt is never negative
            worst = {"case": t, "reason": "negative opt"}
            break
    return _result("brute_force_consistency", worst is None,
                   f"{cases} instances, witness welfare matches optimum",
                   worst)


def check_marginal_map(cases: int = 50) -> CheckResult:
    rng = _rng(2)
    worst = 0.0
    for _ in range(cases):
        inst = generate_instance(int(rng.integers(1, 4)), int(rng.integers(1, 5)),
                                 seed=int(rng.integers(2 ** 31)))
        x = random_fractional_assignment(inst, rng)
        y = marginals(x)
        slow = np.zeros_like(y)
        for i in range(inst.n_bins):
            for j in range(inst.n_items):
                slow[i, j] = sum(mass for s, mass in x.bins[i].items() if j in s)
        worst = max(worst, float(np.abs(y - slow).max()))
    return _result("marginal_map", worst <= 1e-12,
                   f"max deviation from per-entry recompute {worst:.2e}")


def check_surrogate_closed_form() -> CheckResult:
    # One bin, one item: F = v * (1 - exp(-y)).
    errs = []
    rng = _rng(3)
    for _ in range(50):
        v, y = rng.uniform(0.1, 5.0), rng.uniform(0.0, 3.0)
        inst = Instance(values=np.array([[v]]), weights=np.array([[1.0]]),
                        capacities=np.array([1.0]))
        got = surrogate_value(inst, item_permutations(inst), np.array([[y]]))
        errs.append(abs(got - v * -np.expm1(-y)))
    # Two bins, one item, sorted values: v1(1-e^-y1) stacked with the gap term.
    for _ in range(50):
        v = np.sort(rng.uniform(0.1, 5.0, 2))[::-1]
        y = rng.uniform(0.0, 2.0, 2)
        inst = Instance(values=v.reshape(2, 1), weights=np.ones((2, 1)),
                        capacities=np.ones(2))
        expect = (v[0] - v[1]) * -np.expm1(-y[0]) + v[1] * -np.expm1(-y.sum())
        got = surrogate_value(inst, item_permutations(inst), y.reshape(2, 1))
        errs.append(abs(got - expect))
    worst = max(errs)
    return _result("surrogate_closed_form", worst <= 1e-12,
                   f"max closed-form deviation {worst:.2e}")


def check_gradient_fd(points: int = 100, grad_fn=surrogate_gradient,
                      rel_tol: float = 1e-4) -> CheckResult:
    rng = _rng(4)
    h = 1e-6
    worst = 0.0
    for _ in range(points):
        inst = generate_instance(3, 4, seed=int(rng.integers(2 ** 31)))
        perm = item_permutations(inst)
        y = rng.uniform(0.0, 1.0, (3, 4))
        grad = grad_fn(inst, perm, y)
        for _ in range(3):
            i = int(rng.integers(3))
            j = int(rng.integers(4))
            up, dn = y.copy(), y.copy()
            up[i, j] += h
            dn[i, j] -= h
            fd = (surrogate_value(inst, perm, up)
                  - surrogate_value(inst, perm, dn)) / (2 * h)
            rel = abs(fd - grad[i, j]) / max(abs(grad[i, j]), 1e-9)
            worst = max(worst, rel)
    return _result("gradient_vs_finite_differences", worst <= rel_tol,
                   f"max relative error {worst:.2e} (tol {rel_tol})")


def check_gradient_range(cases: int = 100) -> CheckResult:
    rng = _rng(5)
    ok = True
    detail = ""
    for _ in range(cases):
        inst = generate_instance(int(rng.integers(1, 4)), int(rng.integers(1, 5)),
                                 seed=int(rng.integers(2 ** 31)))
        perm = item_permutations(inst)
        y = rng.uniform(0.0, 2.0, (inst.n_bins, inst.n_items))
        g = surrogate_gradient(inst, perm, y)
        if g.min() < -1e-12 or g.max() > inst.max_value + 1e-12:
            ok = False
            break
        g0 = surrogate_gradient(inst, perm, np.zeros_like(y))
        if np.abs(g0 - inst.values).max() > 1e-12:
            ok = False
            detail = "gradient at zero marginals != values"
            break
    return _result("gradient_range", ok,
                   detail or "entries in [0, max value]; at y=0 equals values")


def check_concavity(probes: int = 1000) -> CheckResult:
    rng = _rng(6)
    worst = 0.0
    for _ in range(probes):
        inst = generate_instance(int(rng.integers(1, 4)), int(rng.integers(1, 5)),
                                 seed=int(rng.integers(2 ** 31)))
        perm = item_permutations(inst)
        shape = (inst.n_bins, inst.n_items)
        y1, y2 = rng.uniform(0, 1, shape), rng.uniform(0, 1, shape)
        lam = rng.random()
        mid = surrogate_value(inst, perm, lam * y1 + (1 - lam) * y2)
        chord = lam * surrogate_value(inst, perm, y1) \
            + (1 - lam) * surrogate_value(inst, perm, y2)
        worst = max(worst, chord - mid)
    return _result("concavity", worst <= 1e-9,
                   f"worst chord-above-function {worst:.2e}")


def check_monotonicity(probes: int = 300) -> CheckResult:
    rng = _rng(7)
    worst = 0.0
    for _ in range(probes):
        inst = generate_instance(int(rng.integers(1, 4)), int(rng.integers(1, 5)),
                                 seed=int(rng.integers(2 ** 31)))
        perm = item_permutations(inst)
        shape = (inst.n_bins, inst.n_items)
        y = rng.uniform(0, 1, shape)
        bump = rng.uniform(0, 0.5, shape) * (rng.random(shape) < 0.5)
        worst = max(worst, surrogate_value(inst, perm, y)
                    - surrogate_value(inst, perm, y + bump))
    return _result("monotonicity", worst <= 1e-9,
                   f"worst decrease under growth {worst:.2e}")


def check_gradient_shift(probes: int = 1000) -> CheckResult:
    rng = _rng(8)
    worst = 0.0
    for _ in range(probes):
        inst = generate_instance(int(rng.integers(1, 4)), int(rng.integers(1, 5)),
                                 seed=int(rng.integers(2 ** 31)))
        n, m = inst.n_bins, inst.n_items
        perm = item_permutations(inst)
        y = rng.uniform(0, 1, (n, m))
        shift = rng.uniform(0, 0.05)
        y2 = np.clip(y + rng.uniform(-shift, shift, (n, m)), 0, None)
        g1 = surrogate_gradient(inst, perm, y)
        g2 = surrogate_gradient(inst, perm, y2)
        hi = np.exp(n * shift) * g1 + 1e-9
        lo = np.exp(-n * shift) * g1 - 1e-9
        worst = max(worst, float((g2 - hi).max()), float((lo - g2).max()))
    return _result("gradient_shift_envelope", worst <= 0.0,
                   f"worst envelope violation {worst:.2e}")


def check_knapsack(cases: int = 100) -> CheckResult:
    rng = _rng(9)
    worst = None
    for t in range(cases):
        k = int(rng.integers(1, 13))
        problem = KnapsackProblem(
            profits=rng.uniform(0, 5, k) * (rng.random(k) < 0.9),
            weights=rng.uniform(0, 2, k),
            capacity=float(rng.uniform(0.5, k * 0.8)),
        )
        opt, _ = knapsack_exact(problem)
        for eps in (0.5, 0.1, 0.01):
            s = knapsack_fptas(problem, eps)
            idx = sorted(s)
            if s != knapsack_fptas(problem, eps):
                worst = {"case": t, "eps": eps, "reason": "nondeterministic"}
                break
            if idx and float(problem.weights[idx].sum()) > problem.capacity:
                worst = {"case": t, "eps": eps, "reason": "infeasible"}
                break
            if any(problem.profits[j] == 0 for j in idx):
                worst = {"case": t, "eps": eps, "reason": "zero-profit item"}
                break
            profit = float(problem.profits[idx].sum()) if idx else 0.0
            if profit < (1 - eps) * opt - 1e-12 * max(opt, 1.0):
                worst = {"case": t, "eps": eps, "profit": profit, "opt": opt}
                break
        if worst:
            break
    return _result("knapsack_fptas_contract", worst is None,
                   f"{cases} problems x 3 eps grades", worst)


def check_dominate(cases: int = 500) -> CheckResult:
    rng = _rng(10)
    worst = None
    for t in range(cases):
        inst = generate_instance(int(rng.integers(1, 4)), int(rng.integers(1, 5)),
                                 seed=int(rng.integers(2 ** 31)))
        x = random_fractional_assignment(inst, rng)
        target = marginals(x) * rng.uniform(0, 1, (inst.n_bins, inst.n_items))
        out = dominate_to_target(x, target)
        err = float(np.abs(marginals(out) - target).max())
        growth = out.n_components - x.n_components
        if err > 1e-9:
            worst = {"case": t, "marginal_error": err}
            break
        if growth > inst.n_bins * inst.n_items:
            worst = {"case": t, "component_growth": growth}
            break
        if not certify_membership(inst, out).ok:
            worst = {"case": t, "reason": "left the polytope"}
            break
    return _result("dominate_exactness", worst is None,
                   f"{cases} random targets, marginals within 1e-9", worst)


def check_rounding_law_exact(cases: int = 60) -> CheckResult:
    rng = _rng(11)
    worst = 0.0
    for _ in range(cases):
        inst = generate_instance(int(rng.integers(2, 4)), int(rng.integers(2, 5)),
                                 seed=int(rng.integers(2 ** 31)))
        x = random_fractional_assignment(inst, rng)
        perm = item_permutations(inst)
        y = marginals(x)
        damped = dominate_to_target(x, damp_marginals(y))
        q = assignment_distribution(damped, perm).q
        expect = float((q * inst.values).sum())
        worst = max(worst,
                    abs(expect - surrogate_value(inst, perm, y)),
                    abs(expect - exact_expected_welfare(inst, x)))
    return _result("rounding_law_exact", worst <= 1e-9,
                   f"expected welfare vs surrogate, max gap {worst:.2e}")


def check_rounding_law_monte_carlo(samples: int) -> CheckResult:
    rng = _rng(12)
    worst = 0.0
    for _ in range(4):
        inst = generate_instance(3, 3, seed=int(rng.integers(2 ** 31)))
        x = random_fractional_assignment(inst, rng)
        # frozen realization per (case, sample count); unbiasedness itself is
        # pinned by the exact-law checks, this one watches the sampler
        mean, se = sample_welfare(inst, x, "greedy", samples,
                                  seed=int(rng.integers(2 ** 31)) + samples)
        z = abs(mean - exact_expected_welfare(inst, x)) / max(se, 1e-12)
        worst = max(worst, z)
    return _result("rounding_law_monte_carlo", worst <= 3.0,
                   f"{samples} samples, worst |z| = {worst:.2f}")


def check_modes_agree(samples: int) -> CheckResult:
    rng = _rng(13)
    worst = 0.0
    for _ in range(3):
        inst = generate_instance(int(rng.integers(2, 4)), int(rng.integers(2, 4)),
                                 seed=int(rng.integers(2 ** 31)))
        x = random_fractional_assignment(inst, rng)
        fg = assignment_frequencies(inst, x, "greedy", samples,
                                    seed=int(rng.integers(2 ** 31)))
        fs = assignment_frequencies(inst, x, "simplified", samples,
                                    seed=int(rng.integers(2 ** 31)))
        pooled = (fg + fs) / 2
        se = np.sqrt(np.maximum(pooled * (1 - pooled), 1e-12) * 2 / samples)
        worst = max(worst, float((np.abs(fg - fs) / se).max()))
    return _result("rounding_modes_agree", worst <= 3.0,
                   f"{samples} draws per mode, worst |z| = {worst:.2f}")


def check_batch_matches_single(draws: int = 2500) -> CheckResult:
    rng = _rng(14)
    inst = generate_instance(2, 3, seed=int(rng.integers(2 ** 31)))
    x = random_fractional_assignment(inst, rng)
    worst = 0.0
    for mode, rounder in (("greedy", round_greedy),
                          ("simplified", round_simplified)):
        single = np.zeros((inst.n_bins, inst.n_items))
        for seed in range(draws):
            outcome = rounder(x, inst, seed)
            for i, s in enumerate(outcome.allocation):
                for j in s:
                    single[i, j] += 1
        single /= draws
        batch = assignment_frequencies(inst, x, mode, draws, seed=99)
        pooled = (single + batch) / 2
        se = np.sqrt(np.maximum(pooled * (1 - pooled), 1e-12) * 2 / draws)
        worst = max(worst, float((np.abs(single - batch) / se).max()))
    return _result("batch_matches_single_draw", worst <= 4.0,
                   f"{draws} draws each path, worst |z| = {worst:.2f}")


def check_permutation_dominance(cases: int = 200) -> CheckResult:
    rng = _rng(15)
    worst = 0.0
    for _ in range(cases):
        inst = generate_instance(int(rng.integers(2, 4)), int(rng.integers(2, 5)),
                                 seed=int(rng.integers(2 ** 31)))
        x = random_fractional_assignment(inst, rng)
        sigma = item_permutations(inst)
        pi = sigma.copy()
        for j in range(inst.n_items):
            pi[j] = rng.permutation(inst.n_bins)
        if np.array_equal(pi, sigma):
            continue
        gap = exact_expected_welfare(inst, x, pi) \
            - exact_expected_welfare(inst, x, sigma)
        worst = max(worst, gap)
    return _result("permutation_dominance", worst <= 1e-12,
                   f"value-sorted order beats {cases} random orders "
                   f"(worst overshoot {worst:.2e})")


def check_search_mechanics() -> CheckResult:
    rng = _rng(16)
    worst = None
    for t, (n, m, eps) in enumerate([(2, 2, 0.5), (2, 3, 0.25), (3, 4, 1/3)]):
        inst = generate_instance(n, m, seed=int(rng.integers(2 ** 31)))
        cfg = SearchConfig.for_instance(inst, eps)
        x, y, trace = maximize_surrogate(inst, cfg)
        floor = eps ** 2 * trace.value_scale / (12 * m * n * n) - 1e-9
        steps = [trace.f_values[k + 1] - trace.f_values[k]
                 for k in range(len(trace.f_values) - 1)]
        checks = {
            "membership": certify_membership(inst, x).ok,
            "exit": trace.exit_reason == "threshold",
            "iter_cap": trace.iterations <= cfg.max_iters,
            "monotone": all(s >= -1e-12 for s in steps),
            "step_floor": all(s >= floor for s in steps),
            "final_gap": trace.gaps[-1] <= eps * trace.value_scale,
            "audits": all(e <= 1e-9 for _, e in trace.y_audits),
            "marginal_identity": bool(np.array_equal(y, marginals(x))),
            "z_feasible": trace.infeasible_z_count == 0,
            "swaps_only_when_full": all(
                (not s) or z == cfg.z_cap
                for s, z in zip(trace.swaps, trace.z_sizes)),
        }
        if not all(checks.values()):
            worst = {"case": t, "failed": [k for k, v in checks.items() if not v]}
            break
    return _result("search_mechanics", worst is None,
                   "trace monotone, step floor, caps, audits, membership",
                   worst)


def check_payment_invariants(runs: int = 8) -> CheckResult:
    rng = _rng(17)
    worst = None
    for t in range(runs):
        inst = generate_instance(int(rng.integers(2, 4)), int(rng.integers(2, 4)),
                                 seed=int(rng.integers(2 ** 31)))
        model = ("bins", "items")[t % 2]
        run = run_mechanism(inst, 0.25, seed=t, bidder_model=model)
        perm = item_permutations(inst)
        for e in run.payments.entries:
            if e.payment < 0 or e.payment > e.realized_value + 1e-12:
                worst = {"case": t, "bidder": e.bidder, "reason": "IR violation"}
                break
            if e.fractional_gain == 0.0 and e.payment != 0.0:
                worst = {"case": t, "bidder": e.bidder, "reason": "paid at w=0"}
                break
        if worst:
            break
        # fractional gain equals the bidder's exact expected realized value
        damped = damp_marginals(run.y_star)
        from .rounding import _distribution_from_marginals
        qm = _distribution_from_marginals(damped, perm)
        for e in run.payments.entries:
            if model == "bins":
                expect = float((inst.values[e.bidder] * qm[e.bidder]).sum())
            else:
                expect = float((inst.values[:, e.bidder] * qm[:, e.bidder]).sum())
            if abs(e.fractional_gain - expect) > 1e-6 and not e.clamped_low:
                worst = {"case": t, "bidder": e.bidder,
                         "w_frac": e.fractional_gain, "expected_value": expect}
                break
        if worst:
            break
    if worst is None:
        solo = Instance(values=np.array([[3.0, 1.0]]),
                        weights=np.array([[1.0, 1.0]]),
                        capacities=np.array([2.0]))
        run = run_mechanism(solo, 0.25, seed=0)
        if any(e.payment != 0.0 for e in run.payments.entries):
            worst = {"reason": "lone bidder charged"}
    return _result("payment_invariants", worst is None,
                   "IR, zero-gain, lone-bidder and expected-value identities",
                   worst)


def check_truthfulness(instances: int, eps: float, slack: float,
                       factors, models) -> CheckResult:
    rng = _rng(18)
    worst = None
    margin = 0.0
    for t in range(instances):
        inst = generate_instance(2, 2, seed=int(rng.integers(2 ** 31)))
        for model in models:
            for bidder in range(2):
                rows = audit_truthfulness(inst, bidder, model, eps, factors)
                truth = rows[0].expected_utility
                for row in rows[1:]:
                    margin = max(margin, row.expected_utility - truth)
                    if truth < (1 - slack) * row.expected_utility - 1e-12:
                        worst = {"case": t, "model": model, "bidder": bidder,
                                 "factor": row.factor, "truth": truth,
                                 "misreport": row.expected_utility}
                        break
                if worst:
                    break
            if worst:
                break
        if worst:
            break
    return _result("truthfulness_grid", worst is None,
                   f"{instances} instances at eps={eps}, slack {slack}, "
                   f"largest raw misreport advantage {margin:.2e}",
                   worst)


def check_determinism() -> CheckResult:
    inst1 = generate_instance(2, 2, seed=42)
    inst2 = generate_instance(2, 2, seed=42)
    same_gen = (np.array_equal(inst1.values, inst2.values)
                and np.array_equal(inst1.weights, inst2.weights)
                and np.array_equal(inst1.capacities, inst2.capacities))
    r1 = run_mechanism(inst1, 0.25, seed=5)
    r2 = run_mechanism(inst2, 0.25, seed=5)
    same_run = r1.to_json() == r2.to_json()
    welfare_ok = r1.welfare == allocation_welfare(inst1, r1.allocation)
    feasible = is_feasible_allocation(inst1, r1.allocation)
    ok = same_gen and same_run and welfare_ok and feasible
    return _result("end_to_end_determinism", ok,
                   f"generation {same_gen}, run JSON {same_run}, "
                   f"welfare recompute {welfare_ok}, feasible {feasible}")


def run_suite(level: str = "quick") -> VerifyReport:
    """Run every invariant check at the given size; failures are report content."""
    if level not in ("quick", "full"):
        raise ValueError(f"unknown level {level!r}")
    full = level == "full"
    results = (
        check_instance_validation(),
        check_brute_force(20 if not full else 60),
        check_marginal_map(30 if not full else 100),
        check_surrogate_closed_form(),
        check_gradient_fd(30 if not full else 100),
        check_gradient_range(50 if not full else 200),
        check_concavity(300 if not full else 1000),
        check_monotonicity(200 if not full else 600),
        check_gradient_shift(300 if not full else 1000),
        check_knapsack(60 if not full else 200),
        check_dominate(200 if not full else 1000),
        check_rounding_law_exact(30 if not full else 100),
        check_rounding_law_monte_carlo(20_000 if not full else 1_000_000),
        check_modes_agree(20_000 if not full else 1_000_000),
        check_batch_matches_single(2000 if not full else 4000),
        check_permutation_dominance(60 if not full else 200),
        check_search_mechanics(),
        check_payment_invariants(6 if not full else 12),
        check_truthfulness(
            instances=1 if not full else 3,
            eps=0.05 if not full else 0.01,
            slack=0.1 if not full else 0.05,
            factors=(0.5, 2.0) if not full else (0.5, 0.75, 0.9, 1.1, 1.25,
                                                 1.5, 2.0),
            models=("bins",) if not full else ("bins", "items"),
        ),
        check_determinism(),
    )
    return VerifyReport(level=level, results=results)
