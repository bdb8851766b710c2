"""0/1 knapsack: profit-scaling FPTAS and a small exact oracle.

The FPTAS is the classic scheme: scale profits by ``eps * max_profit / k``,
floor to integers, run the min-weight-per-scaled-profit dynamic program and
back out the best feasible profit level.  Determinism: items are processed in
index order and ties in the table always prefer excluding an item.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_TABLE_CAP = 200_000_000  # scaled DP cells
_EXHAUSTIVE_MAX_ITEMS = 25
_WEIGHT_DP_CAP = 10_000_000


@dataclass(frozen=True, eq=False)
class KnapsackProblem:
    profits: np.ndarray
    weights: np.ndarray
    capacity: float

    def __post_init__(self):
        profits = np.asarray(self.profits, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "profits", profits)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "capacity", float(self.capacity))
        if profits.ndim != 1 or weights.shape != profits.shape:
            raise ValueError("profits and weights must be 1-d arrays of equal length")
        if not (np.all(np.isfinite(profits)) and np.all(np.isfinite(weights))
                and np.isfinite(self.capacity)):
            raise ValueError("profits, weights and capacity must be finite")
        if np.any(profits < 0) or np.any(weights < 0) or self.capacity < 0:
            raise ValueError("profits, weights and capacity must be non-negative")

    @property
    def n_items(self) -> int:
        return self.profits.shape[0]


def _sequential_weight(weights: np.ndarray, chosen: list[int]) -> float:
    # Replays the DP's addition order so the feasibility check is exact.
    total = 0.0
    for t in sorted(chosen):
        total += float(weights[t])
    return total


def fptas_core(profits: np.ndarray, weights: np.ndarray, capacity: float,
               eps: float) -> frozenset[int]:
    """FPTAS on raw arrays; see :func:`knapsack_fptas` for the contract."""
    keep = np.nonzero((profits > 0) & (weights <= capacity))[0]
    if keep.size == 0:
        return frozenset()
    p = profits[keep]
    w = weights[keep]
    k = keep.size
    scale = eps * float(p.max()) / k
    q = np.floor(p / scale).astype(np.int64)
    total_q = int(q.sum())
    if k * (total_q + 1) > _TABLE_CAP:
        raise ValueError(f"scaled table of {k * (total_q + 1)} cells; eps too small")

    # dp[s] = least weight reaching scaled profit exactly s.
    dp = np.full(total_q + 1, np.inf)
    dp[0] = 0.0
    takes = np.zeros((k, total_q + 1), dtype=bool)
    for t in range(k):
        qt = int(q[t])
        if qt == 0:
            continue  # profit rounds to nothing; excluding is never worse
        candidate = dp[:-qt] + w[t]
        better = candidate < dp[qt:]
        if better.any():
            taken_dp = dp.copy()
            taken_dp[qt:][better] = candidate[better]
            takes[t, qt:] = better
            dp = taken_dp

    reachable = np.nonzero(dp <= capacity)[0]
    # dp[0] = 0 <= capacity, so there is always a feasible level.
    for level in reachable[::-1]:
        s = int(level)
        chosen: list[int] = []
        for t in range(k - 1, -1, -1):
            if takes[t, s]:
                chosen.append(t)
                s -= int(q[t])
        if _sequential_weight(w, chosen) <= capacity:
            return frozenset(int(keep[t]) for t in chosen)
    return frozenset()


def knapsack_fptas(problem: KnapsackProblem, eps: float) -> frozenset[int]:
    """(1 - eps)-optimal item set, deterministic.

    Parameters
    ----------
    problem : KnapsackProblem
    eps : float in (0, 1)

    Returns
    -------
    frozenset of item indices whose weight fits exactly within capacity and
    whose profit is at least ``(1 - eps)`` times the exact optimum.  Items
    with zero profit are never included.
    """
    if not 0 < eps < 1:
        raise ValueError(f"eps must be in (0, 1), got {eps}")
    return fptas_core(problem.profits, problem.weights, problem.capacity, eps)


def _lex_key(mask: int):
    items = []
    t = 0
    while mask:
        if mask & 1:
            items.append(t)
        mask >>= 1
        t += 1
    return tuple(items)


def _exact_exhaustive(p: np.ndarray, w: np.ndarray, capacity: float
                      ) -> tuple[float, frozenset[int]]:
    k = p.shape[0]
    k_low = min(k, 20)
    profit_low = np.zeros(1)
    weight_low = np.zeros(1)
    for t in range(k_low):
        profit_low = np.concatenate([profit_low, profit_low + p[t]])
        weight_low = np.concatenate([weight_low, weight_low + w[t]])

    best = 0.0
    candidates: list[int] = [0]
    for high in range(1 << (k - k_low)):
        profit_high = 0.0
        weight_high = 0.0
        for t in range(k - k_low):
            if high >> t & 1:
                profit_high += float(p[k_low + t])
                weight_high += float(w[k_low + t])
        feasible = weight_low + weight_high <= capacity
        if not feasible.any():
            continue
        total = np.where(feasible, profit_low + profit_high, -1.0)
        top = float(total.max())
        if top > best:
            best = top
            candidates = []
        if top == best and top > 0.0:
            ties = np.nonzero(total == top)[0]
            candidates.extend(int(low) | high << k_low for low in ties)

    if best == 0.0:
        return 0.0, frozenset()
    mask = min(candidates, key=_lex_key)
    chosen = list(_lex_key(mask))
    return float(np.sum(p[chosen])), frozenset(chosen)


def _exact_weight_dp(p: np.ndarray, w: np.ndarray, capacity: float
                     ) -> tuple[float, frozenset[int]]:
    k = p.shape[0]
    cap = int(np.floor(capacity))
    if (cap + 1) * k > _WEIGHT_DP_CAP:
        raise ValueError(f"weight table of {(cap + 1) * k} cells exceeds cap")
    dp = np.zeros(cap + 1)
    takes = np.zeros((k, cap + 1), dtype=bool)
    for t in range(k):
        wt = int(w[t])
        if wt > cap:
            continue
        if wt == 0:
            if p[t] > 0:  # free profit; zero-profit items stay out
                dp = dp + p[t]
                takes[t, :] = True
            continue
        candidate = dp[:-wt] + p[t]
        better = candidate > dp[wt:]
        if better.any():
            taken_dp = dp.copy()
            taken_dp[wt:][better] = candidate[better]
            takes[t, wt:] = better
            dp = taken_dp
    budget = cap
    chosen = []
    for t in range(k - 1, -1, -1):
        if takes[t, budget]:
            chosen.append(t)
            budget -= int(w[t])
    chosen.sort()
    return float(np.sum(p[chosen])) if chosen else 0.0, frozenset(chosen)


def knapsack_exact(problem: KnapsackProblem) -> tuple[float, frozenset[int]]:
    """Exact optimum: exhaustive up to 25 items, else an integral-weight DP.

    Ties among exhaustive optima resolve to the lexicographically smallest
    item set.  Raises ValueError when the problem fits neither regime.
    """
    p, w, capacity = problem.profits, problem.weights, problem.capacity
    k = problem.n_items
    if k == 0:
        return 0.0, frozenset()
    if k <= _EXHAUSTIVE_MAX_ITEMS:
        return _exact_exhaustive(p, w, capacity)
    if np.all(w == np.floor(w)):
        return _exact_weight_dp(p, w, capacity)
    raise ValueError(
        f"{k} items with fractional weights: too large for exact enumeration")
