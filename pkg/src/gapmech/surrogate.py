"""Concave surrogate for the expected welfare of randomized rounding.

For item marginals ``y`` (an (n, m) array, ``y[i, j]`` = fractional mass of
item ``j`` on bin ``i``) and a per-item bin ordering ``perm`` the surrogate is

    sum_j sum_i (v[o(i), j] - v[o(i+1), j]) * (1 - exp(-(y[o(1), j] + ... + y[o(i), j])))

with ``o = perm[j]`` and a zero sentinel after the last bin.  When ``perm[j]``
sorts bins by non-increasing value, this equals the exact expected welfare of
the greedy rounding that keeps each contested item at its best sampled bin,
and it is concave and non-decreasing on the non-negative orthant.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping

import numpy as np

from .instances import Instance

#: Per-bin masses may overshoot 1 by at most this much (accumulated roundoff).
MASS_TOL = 1e-9


class SparseFractionalAssignment:
    """Per-bin probability mass over item subsets.

    Bin ``i`` carries pairs ``(S, x[i, S])`` with positive mass summing to at
    most 1; leftover mass stands for "assign nothing".  Empty subsets are
    never listed.  This is the sparse representation of a point in the
    relaxed assignment polytope.
    """

    __slots__ = ("n_bins", "n_items", "bins")

    def __init__(self, n_bins: int, n_items: int,
                 bins: Iterable[Mapping[frozenset, float]] | None = None):
        self.n_bins = int(n_bins)
        self.n_items = int(n_items)
        self.bins: list[dict[frozenset, float]] = [{} for _ in range(self.n_bins)]
        if bins is None:
            return
        bins = list(bins)
        if len(bins) != self.n_bins:
            raise ValueError(f"expected {self.n_bins} per-bin maps, got {len(bins)}")
        for i, mapping in enumerate(bins):
            total = 0.0
            for s, mass in mapping.items():
                s = frozenset(int(j) for j in s)
                if not s:
                    raise ValueError("empty subsets are implicit, do not list them")
                if not all(0 <= j < self.n_items for j in s):
                    raise ValueError(f"bin {i}: item index out of range in {sorted(s)}")
                mass = float(mass)
                if mass <= 0:
                    raise ValueError(f"bin {i}: non-positive mass {mass} on {sorted(s)}")
                self.bins[i][s] = self.bins[i].get(s, 0.0) + mass
                total += mass
            if total > 1.0 + MASS_TOL:
                raise ValueError(f"bin {i}: total mass {total} exceeds 1")

    @classmethod
    def empty(cls, n_bins: int, n_items: int) -> "SparseFractionalAssignment":
        return cls(n_bins, n_items)

    def total_mass(self, i: int) -> float:
        return float(sum(self.bins[i].values()))

    @property
    def n_components(self) -> int:
        """Number of listed (bin, subset) pairs."""
        return sum(len(b) for b in self.bins)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseFractionalAssignment):
            return NotImplemented
        return (self.n_bins, self.n_items, self.bins) == \
            (other.n_bins, other.n_items, other.bins)

    def __repr__(self) -> str:
        return (f"SparseFractionalAssignment(n_bins={self.n_bins}, "
                f"n_items={self.n_items}, components={self.n_components})")


def marginals(x: SparseFractionalAssignment) -> np.ndarray:
    """Item marginals of a fractional assignment: ``y[i, j] = sum of x[i, S] over S containing j``."""
    y = np.zeros((x.n_bins, x.n_items))
    for i, mapping in enumerate(x.bins):
        for s, mass in mapping.items():
            y[i, list(s)] += mass
    return y


def _sorted_views(values: np.ndarray, perm: np.ndarray, y: np.ndarray):
    # Rows indexed by item: entry (j, i) refers to bin perm[j, i].
    cols = np.arange(values.shape[1])[:, None]
    v_sorted = values[perm, cols]
    gaps = v_sorted.copy()
    gaps[:, :-1] -= v_sorted[:, 1:]
    prefixes = np.cumsum(y[perm, cols], axis=1)
    return gaps, prefixes


def surrogate_value(inst: Instance, perm: np.ndarray, y: np.ndarray) -> float:
    """Evaluate the surrogate at marginals ``y`` under bin orderings ``perm``.

    Parameters
    ----------
    inst : Instance
    perm : (m, n) int array
        ``perm[j]`` is the bin order used for item ``j``.  Payments evaluate
        this with orders frozen from a different value matrix, so no sorting
        assumption is made here.
    y : (n, m) array
        Non-negative item marginals.

    Returns
    -------
    float
    """
    gaps, prefixes = _sorted_views(inst.values, perm, y)
    return float(np.sum(gaps * -np.expm1(-prefixes)))


def surrogate_gradient(inst: Instance, perm: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Gradient of :func:`surrogate_value` with respect to ``y``; shape (n, m).

    Entry (i, j) is ``sum over positions l >= pos(i) of gap[l] * exp(-prefix[l])``
    where positions follow ``perm[j]``.  With value-sorted orders all entries
    lie in ``[0, max value]``.
    """
    gaps, prefixes = _sorted_views(inst.values, perm, y)
    terms = gaps * np.exp(-prefixes)
    suffix = np.cumsum(terms[:, ::-1], axis=1)[:, ::-1]
    grad = np.empty_like(y)
    cols = np.arange(inst.n_items)[:, None]
    grad[perm, cols] = suffix
    return grad


def surrogate_value_and_gradient(inst: Instance, perm: np.ndarray,
                                 y: np.ndarray) -> tuple[float, np.ndarray]:
    """Value and gradient in one pass (the local-search hot path)."""
    gaps, prefixes = _sorted_views(inst.values, perm, y)
    decay = np.exp(-prefixes)
    value = float(np.sum(gaps * -np.expm1(-prefixes)))
    terms = gaps * decay
    suffix = np.cumsum(terms[:, ::-1], axis=1)[:, ::-1]
    grad = np.empty_like(y)
    cols = np.arange(inst.n_items)[:, None]
    grad[perm, cols] = suffix
    return value, grad
