"""The per-bin knapsack oracle behind the local search.

Every pass of the local search asks, for each bin, "which feasible item set
maximizes this linear profit vector?"  That is a knapsack.  The package
ships an exact solver for small or integral instances and a deterministic
FPTAS for everything else; this script shows both on the same problem.
"""

import numpy as np

from gapmech import KnapsackProblem, knapsack_exact, knapsack_fptas

rng = np.random.default_rng(0)
k = 18
prob = KnapsackProblem(profits=rng.uniform(1, 10, size=k),
                       weights=rng.uniform(1, 5, size=k),
                       capacity=12.0)

opt_value, opt_set = knapsack_exact(prob)
print(f"{k} items, capacity {prob.capacity}")
print(f"exact optimum: {opt_value:.4f} via items {sorted(opt_set)}")
print()

print(f"{'eps':>6} {'value':>9} {'ratio':>7}  items")
for eps in (0.5, 0.2, 0.1, 0.01):
    chosen = knapsack_fptas(prob, eps)
    value = float(prob.profits[sorted(chosen)].sum())
    print(f"{eps:>6} {value:>9.4f} {value / opt_value:>7.4f}  {sorted(chosen)}")
print()
print("the FPTAS guarantees value >= (1 - eps) * optimum; at small eps it")
print("usually recovers the exact set")
