"""Generalized assignment instances.

An instance has ``n`` bins with capacities ``C[i]`` and ``m`` items; bin ``i``
gets value ``values[i, j]`` from item ``j`` and spends ``weights[i, j]`` of its
capacity on it.  An allocation hands each bin a set of items, no item going to
more than one bin; a bin whose set overflows its capacity contributes nothing.
Items may stay unassigned.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

# One frozenset of item indices per bin.  Sets must be mutually disjoint.
Allocation = tuple[frozenset[int], ...]

_ENUMERATION_CAP = 10_000_000


@dataclass(frozen=True, eq=False)
class Instance:
    """Problem data: ``values`` and ``weights`` are (n, m), ``capacities`` is (n,)."""

    values: np.ndarray
    weights: np.ndarray
    capacities: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        capacities = np.asarray(self.capacities, dtype=float)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "capacities", capacities)
        if values.ndim != 2 or values.shape[0] < 1 or values.shape[1] < 1:
            raise ValueError("values must be a non-empty 2-d array")
        if weights.shape != values.shape:
            raise ValueError(
                f"weights shape {weights.shape} != values shape {values.shape}"
            )
        if capacities.shape != (values.shape[0],):
            raise ValueError(
                f"capacities shape {capacities.shape} != ({values.shape[0]},)"
            )
        for name, arr in (("values", values), ("weights", weights),
                          ("capacities", capacities)):
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} must be finite")
            if np.any(arr < 0):
                raise ValueError(f"{name} must be non-negative")

    @property
    def n_bins(self) -> int:
        return self.values.shape[0]

    @property
    def n_items(self) -> int:
        return self.values.shape[1]

    @property
    def max_value(self) -> float:
        return float(self.values.max())

    def to_dict(self) -> dict:
        return {
            "n": self.n_bins,
            "m": self.n_items,
            "capacities": self.capacities.tolist(),
            "values": self.values.tolist(),
            "weights": self.weights.tolist(),
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "Instance":
        try:
            n, m = int(raw["n"]), int(raw["m"])
            values = np.asarray(raw["values"], dtype=float)
            weights = np.asarray(raw["weights"], dtype=float)
            capacities = np.asarray(raw["capacities"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed instance: {exc}") from exc
        if values.shape != (n, m):
            raise ValueError(f"values shape {values.shape} != ({n}, {m})")
        if weights.shape != (n, m):
            raise ValueError(f"weights shape {weights.shape} != ({n}, {m})")
        if capacities.shape != (n,):
            raise ValueError(f"capacities shape {capacities.shape} != ({n},)")
        return cls(values=values, weights=weights, capacities=capacities)


def load_instance(path) -> Instance:
    with open(path) as fh:
        return Instance.from_dict(json.load(fh))


def save_instance(inst: Instance, path) -> None:
    with open(path, "w") as fh:
        json.dump(inst.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def sort_bins_for_item(inst: Instance, j: int) -> np.ndarray:
    """Bins ordered by non-increasing value for item ``j``, ties by bin index."""
    return np.argsort(-inst.values[:, j], kind="stable")


def item_permutations(inst: Instance) -> np.ndarray:
    """Stack of :func:`sort_bins_for_item` for every item; shape (m, n)."""
    return np.argsort(-inst.values, axis=0, kind="stable").T


def is_feasible_set(inst: Instance, i: int, items) -> bool:
    """Whether item set ``items`` fits into bin ``i``'s capacity."""
    idx = sorted(items)
    if not idx:
        return True
    return float(inst.weights[i, idx].sum()) <= inst.capacities[i]


def bin_value(inst: Instance, i: int, items) -> float:
    """Value bin ``i`` derives from ``items``: total value if feasible, else 0."""
    idx = sorted(items)
    if not idx:
        return 0.0
    if float(inst.weights[i, idx].sum()) > inst.capacities[i]:
        return 0.0
    return float(inst.values[i, idx].sum())


def allocation_welfare(inst: Instance, allocation: Allocation) -> float:
    """Total value across bins; overflowing bins contribute zero."""
    return sum(bin_value(inst, i, s) for i, s in enumerate(allocation))


def is_feasible_allocation(inst: Instance, allocation: Allocation) -> bool:
    """Disjointness plus per-bin capacity feasibility."""
    if len(allocation) != inst.n_bins:
        return False
    seen: set[int] = set()
    for i, s in enumerate(allocation):
        for j in s:
            if j in seen or not 0 <= j < inst.n_items:
                return False
            seen.add(j)
        if not is_feasible_set(inst, i, s):
            return False
    return True


def brute_force_opt(inst: Instance,
                    max_assignments: int = _ENUMERATION_CAP
                    ) -> tuple[float, Allocation]:
    """Exhaustive welfare optimum over all item-to-bin maps.

    Enumerates every map from items to bins-or-unassigned, skipping maps
    where some bin overflows, and returns the best welfare with a witness
    allocation.  Intended as a ground-truth oracle for small instances.

    Parameters
    ----------
    inst : Instance
    max_assignments : int
        Refuse to enumerate more than this many maps ((n+1)**m total).

    Returns
    -------
    (float, Allocation)
        Optimal welfare and one optimal allocation (first found on ties).
    """
    n, m = inst.n_bins, inst.n_items
    total = (n + 1) ** m
    if total > max_assignments:
        raise ValueError(f"(n+1)**m = {total} exceeds cap {max_assignments}")

    # Pad with a phantom "unassigned" bin of index n holding zero value/weight.
    vpad = np.vstack([inst.values, np.zeros((1, m))])
    wpad = np.vstack([inst.weights, np.zeros((1, m))])

    best_welfare = 0.0
    best_map = np.full(m, n, dtype=np.int64)
    cols = np.arange(m)
    chunk = 1 << 20
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total))
        # Mixed-radix decode: maps[k, j] = bin of item j (n means unassigned).
        maps = np.empty((len(idx), m), dtype=np.int64)
        rem = idx.copy()
        for j in range(m - 1, -1, -1):
            maps[:, j] = rem % (n + 1)
            rem //= n + 1
        feasible = np.ones(len(idx), dtype=bool)
        for i in range(n):
            load = ((maps == i) * wpad[i, cols]).sum(axis=1)
            feasible &= load <= inst.capacities[i]
        welfare = vpad[maps, cols].sum(axis=1)
        welfare[~feasible] = -1.0
        k = int(np.argmax(welfare))
        if welfare[k] > best_welfare:
            best_welfare = float(welfare[k])
            best_map = maps[k].copy()

    allocation = tuple(
        frozenset(int(j) for j in np.nonzero(best_map == i)[0]) for i in range(n)
    )
    return best_welfare, allocation
