"""End-to-end mechanism runs: solve, round, pay; plus instance generation.

A run is deterministic given (instance, config, seed): the solve itself is
deterministic, and all sampling flows from named substreams of the seed.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

import numpy as np

from .instances import (Allocation, Instance, allocation_welfare,
                        item_permutations)
from .local_search import SearchConfig, SearchTrace, maximize_surrogate
from .payments import (PaymentReport, clarke_pivot_bin, clarke_pivot_item,
                       fractional_parts, payments_bin_bidders,
                       payments_item_bidders, pivot_config,
                       value_without_bin_bidder, value_without_item_bidder)
from .rounding import (damp_marginals, round_greedy, round_simplified,
                       _distribution_from_marginals)
from .surrogate import SparseFractionalAssignment, surrogate_value

PROFILES = ("uniform", "correlated", "knapsack-hard")
BIDDER_MODELS = ("bins", "items")
ROUNDING_MODES = ("greedy", "simplified")


def instance_digest(inst: Instance) -> str:
    canonical = json.dumps(inst.to_dict(), sort_keys=True,
                           separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


@dataclass(frozen=True)
class MechanismRun:
    """Everything one mechanism execution produced."""

    instance_digest: str
    config: SearchConfig
    seed: int
    bidder_model: str
    rounding_mode: str
    y_star: np.ndarray
    x_components: int
    x_bin_masses: tuple[float, ...]
    allocation: Allocation
    welfare: float
    payments: PaymentReport
    trace: SearchTrace

    def to_dict(self) -> dict:
        return {
            "instance_digest": self.instance_digest,
            "config": {
                "eps": self.config.eps,
                "delta": self.config.delta,
                "z_cap": self.config.z_cap,
                "max_iters": self.config.max_iters,
                "rng_seed": self.config.rng_seed,
            },
            "seed": self.seed,
            "bidder_model": self.bidder_model,
            "rounding_mode": self.rounding_mode,
            "y_star": self.y_star.tolist(),
            "x_summary": {
                "components": self.x_components,
                "bin_masses": list(self.x_bin_masses),
            },
            "allocation": [sorted(s) for s in self.allocation],
            "welfare": self.welfare,
            "payments": self.payments.to_dict(),
            "trace_summary": {
                "iterations": self.trace.iterations,
                "final_value": self.trace.final_value,
                "exit_reason": self.trace.exit_reason,
                "guarantee_void": self.trace.guarantee_void,
                "infeasible_z_count": self.trace.infeasible_z_count,
                "max_y_audit_error": max((e for _, e in self.trace.y_audits),
                                         default=0.0),
            },
        }

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=indent)


def run_mechanism(inst: Instance, cfg: SearchConfig | float, seed: int,
                  bidder_model: str = "bins",
                  rounding: str = "greedy") -> MechanismRun:
    """Solve, round with the given seed, compute payments.

    Parameters
    ----------
    cfg : SearchConfig or float
        A float is taken as ``eps`` and expanded via
        :meth:`SearchConfig.for_instance`.
    bidder_model : "bins" or "items"
    rounding : "greedy" or "simplified"
    """
    if bidder_model not in BIDDER_MODELS:
        raise ValueError(f"unknown bidder model {bidder_model!r}")
    if rounding not in ROUNDING_MODES:
        raise ValueError(f"unknown rounding mode {rounding!r}")
    if isinstance(cfg, (int, float)) and not isinstance(cfg, bool):
        cfg = SearchConfig.for_instance(inst, float(cfg))

    x, y_star, trace = maximize_surrogate(inst, cfg)
    rounder = round_greedy if rounding == "greedy" else round_simplified
    outcome = rounder(x, inst, seed)
    pay = payments_bin_bidders if bidder_model == "bins" else payments_item_bidders
    report = pay(inst, y_star, x, outcome, cfg)

    return MechanismRun(
        instance_digest=instance_digest(inst),
        config=cfg,
        seed=seed,
        bidder_model=bidder_model,
        rounding_mode=rounding,
        y_star=y_star,
        x_components=x.n_components,
        x_bin_masses=tuple(x.total_mass(i) for i in range(inst.n_bins)),
        allocation=outcome.allocation,
        welfare=allocation_welfare(inst, outcome.allocation),
        payments=report,
        trace=trace,
    )


def generate_instance(n: int, m: int, seed: int,
                      profile: str = "uniform") -> Instance:
    """Reproducible random instance.

    uniform: independent uniform values and weights, capacities sized for a
    roughly half-full bin under an even item spread.  correlated: values
    track weights plus noise.  knapsack-hard: profit/weight ratios nearly
    equal, capacities around half of each bin's total weight.
    """
    if n < 1 or m < 1:
        raise ValueError("need n, m >= 1")
    if profile not in PROFILES:
        raise ValueError(f"unknown profile {profile!r}")
    rng = np.random.default_rng(
        np.random.SeedSequence((seed, PROFILES.index(profile))))
    if profile == "uniform":
        values = rng.uniform(0.0, 1.0, (n, m))
        weights = rng.uniform(0.0, 1.0, (n, m))
        capacities = (m / n) * rng.uniform(0.85, 1.15, n)
    elif profile == "correlated":
        weights = rng.uniform(0.05, 1.0, (n, m))
        values = np.clip(weights + rng.uniform(-0.2, 0.2, (n, m)), 0.0, None)
        capacities = 1.05 * (m / n) * rng.uniform(0.85, 1.15, n)
    else:
        weights = rng.uniform(0.25, 1.0, (n, m))
        values = weights * rng.uniform(0.97, 1.03, (n, m))
        capacities = 0.5 * weights.sum(axis=1) * rng.uniform(0.9, 1.1, n)
    return Instance(values=values, weights=weights, capacities=capacities)


@dataclass(frozen=True)
class ReportUtility:
    """Exact expected outcome of one (possibly misreported) run."""

    factor: float
    expected_value: float    # under true values, mechanism run on the report
    expected_payment: float
    expected_utility: float


def expected_utility_of_report(inst: Instance, reported: Instance, bidder: int,
                               model: str, cfg: SearchConfig | float,
                               factor: float = 1.0) -> ReportUtility:
    """Exact expected utility of ``bidder`` when the mechanism sees ``reported``.

    Everything is computed in closed form from the assignment law of the
    reported run; no sampling.  ``inst`` carries the true values.
    """
    if model not in BIDDER_MODELS:
        raise ValueError(f"unknown bidder model {model!r}")
    if isinstance(cfg, (int, float)) and not isinstance(cfg, bool):
        cfg = SearchConfig.for_instance(reported, float(cfg))
    _, y_star, _ = maximize_surrogate(reported, cfg)
    perm = item_permutations(reported)
    q = _distribution_from_marginals(damp_marginals(y_star), perm)
    full_value = surrogate_value(reported, perm, y_star)

    pcfg = pivot_config(reported, cfg)
    if model == "bins":
        others = value_without_bin_bidder(reported, perm, y_star, bidder)
        pivot = clarke_pivot_bin(reported, bidder, pcfg)
        true_value = float((inst.values[bidder] * q[bidder]).sum())
        reported_value = float((reported.values[bidder] * q[bidder]).sum())
    else:
        others = value_without_item_bidder(reported, perm, y_star, bidder)
        pivot = clarke_pivot_item(reported, bidder, pcfg)
        true_value = float((inst.values[:, bidder] * q[:, bidder]).sum())
        reported_value = float((reported.values[:, bidder] * q[:, bidder]).sum())

    gain, p_frac, _, _ = fractional_parts(pivot, others, full_value)
    expected_payment = reported_value * p_frac / gain if gain > 0.0 else 0.0
    return ReportUtility(
        factor=factor,
        expected_value=true_value,
        expected_payment=expected_payment,
        expected_utility=true_value - expected_payment,
    )


def scaled_report(inst: Instance, bidder: int, model: str,
                  factor: float) -> Instance:
    """Misreport scaling every value entry of one bidder by ``factor``."""
    values = inst.values.copy()
    if model == "bins":
        values[bidder, :] *= factor
    else:
        values[:, bidder] *= factor
    return Instance(values=values, weights=inst.weights,
                    capacities=inst.capacities)


def audit_truthfulness(inst: Instance, bidder: int, model: str,
                       cfg: SearchConfig | float,
                       factors=(0.5, 0.75, 0.9, 1.1, 1.25, 1.5, 2.0)
                       ) -> list[ReportUtility]:
    """Exact expected utilities of truth (factor 1.0 first) and misreports."""
    rows = [expected_utility_of_report(inst, inst, bidder, model, cfg, 1.0)]
    for f in factors:
        rows.append(expected_utility_of_report(
            inst, scaled_report(inst, bidder, model, f), bidder, model, cfg, f))
    return rows
