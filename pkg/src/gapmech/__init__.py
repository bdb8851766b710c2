"""Truthful-in-expectation approximation mechanism for generalized assignment.

Solve a smooth concave surrogate of the assignment welfare by fractional
local search, round the fractional solution to a feasible allocation whose
expected welfare equals the surrogate value exactly, and charge scaled
pivot payments.  Everything is deterministic given (instance, config, seed).
"""

from .instances import (Allocation, Instance, allocation_welfare,
                        bin_value, brute_force_opt, is_feasible_allocation,
                        is_feasible_set, item_permutations, load_instance,
                        save_instance, sort_bins_for_item)
from .knapsack import (KnapsackProblem, knapsack_exact, knapsack_fptas)
from .local_search import (MembershipReport, SearchConfig, SearchResult,
                           SearchTrace, certify_membership,
                           maximize_surrogate)
from .mechanism import (MechanismRun, ReportUtility, audit_truthfulness,
                        expected_utility_of_report, generate_instance,
                        instance_digest, run_mechanism, scaled_report)
from .payments import (BidderPayment, PaymentReport, clarke_pivot_bin,
                       clarke_pivot_item, fractional_parts,
                       payments_bin_bidders, payments_item_bidders,
                       value_without_bin_bidder, value_without_item_bidder)
from .rounding import (AssignmentDistribution, RoundingOutcome,
                       assignment_distribution, assignment_frequencies,
                       batch_assignments, damp_marginals, dominate_to_target,
                       exact_expected_welfare, round_greedy,
                       round_simplified, round_with_permutations,
                       sample_welfare)
from .surrogate import (SparseFractionalAssignment, marginals,
                        surrogate_gradient, surrogate_value,
                        surrogate_value_and_gradient)
from .verify import (CheckResult, VerifyReport, run_suite)

__version__ = "0.1.0"

__all__ = [
    "Allocation", "AssignmentDistribution", "BidderPayment", "CheckResult",
    "Instance", "KnapsackProblem", "MechanismRun", "MembershipReport",
    "PaymentReport", "ReportUtility", "RoundingOutcome",
    "SearchConfig", "SearchResult", "SearchTrace",
    "SparseFractionalAssignment", "VerifyReport",
    "allocation_welfare", "assignment_distribution",
    "assignment_frequencies", "audit_truthfulness", "batch_assignments",
    "bin_value", "brute_force_opt", "certify_membership",
    "clarke_pivot_bin", "clarke_pivot_item", "damp_marginals",
    "dominate_to_target", "exact_expected_welfare",
    "expected_utility_of_report", "fractional_parts", "generate_instance",
    "instance_digest", "is_feasible_allocation", "is_feasible_set",
    "item_permutations", "knapsack_exact", "knapsack_fptas",
    "load_instance", "marginals", "maximize_surrogate",
    "payments_bin_bidders", "payments_item_bidders", "round_greedy",
    "round_simplified", "round_with_permutations", "run_mechanism",
    "run_suite", "sample_welfare", "save_instance", "scaled_report",
    "sort_bins_for_item", "surrogate_gradient", "surrogate_value",
    "surrogate_value_and_gradient", "value_without_bin_bidder",
    "value_without_item_bidder",
]
