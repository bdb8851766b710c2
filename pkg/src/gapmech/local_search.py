"""Fractional local search maximizing the surrogate over the assignment polytope.

Starting from zero marginals, each pass asks a per-bin knapsack FPTAS for the
best capacity-feasible improvement direction ``z`` under the current gradient,
and either adds ``delta * z`` or, once the direction pool ``Z`` is full, swaps
``z`` in for the pool member least aligned with the gradient.  The loop stops
when the directional gain ``(z - y) . grad`` drops to ``eps * max_value``.
The returned sparse assignment is the pool itself with mass ``delta`` per
member, so its marginals reproduce ``y`` exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .instances import Instance, item_permutations
from .knapsack import fptas_core
from .surrogate import (MASS_TOL, SparseFractionalAssignment, marginals,
                        surrogate_value, surrogate_value_and_gradient)


@dataclass(frozen=True)
class SearchConfig:
    """Step size and termination parameters; build via :meth:`for_instance`."""

    eps: float
    delta: float
    z_cap: int
    max_iters: int
    rng_seed: int = 0  # reserved; the search itself is deterministic
    audit_stride: int = 97

    @classmethod
    def for_instance(cls, inst: Instance, eps: float, rng_seed: int = 0,
                     audit_stride: int = 97) -> "SearchConfig":
        n, m = inst.n_bins, inst.n_items
        delta = eps / (6 * m * n * n)
        return cls(
            eps=eps,
            delta=delta,
            z_cap=math.floor(1.0 / delta),
            max_iters=math.ceil(12 * m * m * n * n / eps ** 2),
            rng_seed=rng_seed,
            audit_stride=audit_stride,
        )


@dataclass
class SearchTrace:
    """Per-pass diagnostics of one :func:`maximize_surrogate` run."""

    eps: float
    delta: float
    value_scale: float  # max value entry, the unit of the stop threshold
    guarantee_void: bool
    f_values: list[float] = field(default_factory=list)
    gaps: list[float] = field(default_factory=list)
    z_sizes: list[int] = field(default_factory=list)
    swaps: list[bool] = field(default_factory=list)
    accepted: list[bool] = field(default_factory=list)
    y_audits: list[tuple[int, float]] = field(default_factory=list)
    infeasible_z_count: int = 0
    iterations: int = 0
    exit_reason: str = ""
    final_value: float = 0.0

    def to_dict(self) -> dict:
        return {
            "eps": self.eps,
            "delta": self.delta,
            "value_scale": self.value_scale,
            "guarantee_void": self.guarantee_void,
            "f_values": list(self.f_values),
            "gaps": list(self.gaps),
            "z_sizes": list(self.z_sizes),
            "swaps": list(self.swaps),
            "accepted": list(self.accepted),
            "y_audits": [[int(t), float(e)] for t, e in self.y_audits],
            "infeasible_z_count": self.infeasible_z_count,
            "iterations": self.iterations,
            "exit_reason": self.exit_reason,
            "final_value": self.final_value,
        }


class SearchResult(NamedTuple):
    x: SparseFractionalAssignment
    y: np.ndarray
    trace: SearchTrace


def _validate_config(inst: Instance, cfg: SearchConfig) -> None:
    n, m = inst.n_bins, inst.n_items
    if not 0 < cfg.eps < 1:
        raise ValueError(f"eps must be in (0, 1), got {cfg.eps}")
    exact_delta = cfg.eps / (6 * m * n * n)
    if cfg.delta != exact_delta:
        raise ValueError(f"delta {cfg.delta} != eps/(6*m*n^2) = {exact_delta}")
    if cfg.z_cap < 1:
        raise ValueError("z_cap must be at least 1")
    if cfg.max_iters < 1:
        raise ValueError("max_iters must be at least 1")


def _rebuild_assignment(inst: Instance, pool: np.ndarray, size: int,
                        delta: float) -> SparseFractionalAssignment:
    n, m = inst.n_bins, inst.n_items
    counts: dict[bytes, int] = {}
    for r in range(size):
        key = pool[r].astype(np.uint8).tobytes()
        counts[key] = counts.get(key, 0) + 1
    per_bin: list[dict[frozenset, int]] = [{} for _ in range(n)]
    for key, mult in counts.items():
        z = np.frombuffer(key, dtype=np.uint8).reshape(n, m)
        for i in range(n):
            items = frozenset(int(j) for j in np.nonzero(z[i])[0])
            if items:
                per_bin[i][items] = per_bin[i].get(items, 0) + mult
    x = SparseFractionalAssignment.empty(n, m)
    for i in range(n):
        x.bins[i] = {s: mult * delta for s, mult in per_bin[i].items()}
    return x


def maximize_surrogate(inst: Instance, cfg: SearchConfig) -> SearchResult:
    """Run the local search; returns ``(x, y, trace)`` with ``marginals(x) == y``.

    Parameters
    ----------
    inst : Instance
    cfg : SearchConfig
        Must carry ``delta = eps / (6 * m * n^2)`` exactly.

    Returns
    -------
    SearchResult
        ``x`` lies in the relaxed polytope, ``y = marginals(x)``, and the
        trace records every pass: surrogate value, directional gain, pool
        size, swap/accept flags and periodic ``y == delta * sum(Z)`` audits.
    """
    _validate_config(inst, cfg)
    n, m = inst.n_bins, inst.n_items
    scale = inst.max_value
    trace = SearchTrace(eps=cfg.eps, delta=cfg.delta, value_scale=scale,
                        guarantee_void=cfg.eps > 1.0 / n)
    if scale == 0.0:
        trace.exit_reason = "all_values_zero"
        x = SparseFractionalAssignment.empty(n, m)
        return SearchResult(x, np.zeros((n, m)), trace)

    perm = item_permutations(inst)
    weights = inst.weights
    capacities = inst.capacities
    delta = cfg.delta
    threshold = cfg.eps * scale

    count = np.zeros((n, m), dtype=np.int64)
    pool = np.zeros((min(cfg.z_cap, 1024), n * m))
    ages = np.zeros(pool.shape[0], dtype=np.int64)
    size = 0
    stamp = 0

    pass_idx = 0
    while True:
        y = delta * count
        value, grad = surrogate_value_and_gradient(inst, perm, y)

        z = np.zeros((n, m))
        for i in range(n):
            chosen = fptas_core(grad[i], weights[i], capacities[i], cfg.eps)
            if chosen:
                idx = list(chosen)
                z[i, idx] = 1.0
                if float(weights[i, idx].sum()) > capacities[i]:
                    trace.infeasible_z_count += 1
        gap = float(((z - y) * grad).sum())

        audit_due = pass_idx % cfg.audit_stride == 0
        done = gap <= threshold or trace.iterations >= cfg.max_iters

        swapped = False
        if not done:
            z_flat = z.ravel()
            if size < cfg.z_cap:
                if size == pool.shape[0]:
                    grow = min(cfg.z_cap, 2 * pool.shape[0])
                    pool = np.vstack([pool, np.zeros((grow - pool.shape[0], n * m))])
                    ages = np.concatenate(
                        [ages, np.zeros(grow - ages.shape[0], dtype=np.int64)])
                pool[size] = z_flat
                ages[size] = stamp
                size += 1
                count += z.astype(np.int64)
            else:
                scores = pool[:size] @ grad.ravel()
                low = scores.min()
                tied = np.nonzero(scores == low)[0]
                victim = int(tied[np.argmin(ages[tied])])
                count += z.astype(np.int64) - pool[victim].reshape(n, m).astype(np.int64)
                pool[victim] = z_flat
                ages[victim] = stamp
                swapped = True
            stamp += 1
            trace.iterations += 1

        trace.f_values.append(value)
        trace.gaps.append(gap)
        trace.z_sizes.append(size)
        trace.swaps.append(swapped)
        trace.accepted.append(not done)

        if audit_due or done:
            recomputed = delta * pool[:size].sum(axis=0).reshape(n, m)
            err = float(np.abs(delta * count - recomputed).max()) if size else 0.0
            trace.y_audits.append((pass_idx, err))

        if done:
            trace.exit_reason = ("threshold" if gap <= threshold else "max_iters")
            break
        pass_idx += 1

    x = _rebuild_assignment(inst, pool, size, delta)
    y = marginals(x)
    trace.final_value = surrogate_value(inst, perm, y)
    return SearchResult(x, y, trace)


@dataclass(frozen=True)
class MembershipReport:
    """Diagnostics of a polytope membership check."""

    per_bin_mass: tuple[float, ...]
    infeasible_sets: tuple[tuple[int, tuple[int, ...]], ...]
    nonpositive_masses: tuple[tuple[int, tuple[int, ...]], ...]
    n_components: int
    ok: bool


def certify_membership(inst: Instance, x: SparseFractionalAssignment,
                       mass_tol: float = MASS_TOL) -> MembershipReport:
    """Check ``x`` against the relaxed polytope of ``inst``.

    Verifies that every listed set fits its bin's capacity, all masses are
    positive and per-bin totals stay within ``1 + mass_tol``.
    """
    if (x.n_bins, x.n_items) != (inst.n_bins, inst.n_items):
        raise ValueError("assignment shape does not match instance")
    per_bin = []
    bad_sets = []
    bad_masses = []
    for i, mapping in enumerate(x.bins):
        total = 0.0
        for s, mass in mapping.items():
            if mass <= 0:
                bad_masses.append((i, tuple(sorted(s))))
            if float(inst.weights[i, sorted(s)].sum()) > inst.capacities[i]:
                bad_sets.append((i, tuple(sorted(s))))
            total += mass
        per_bin.append(total)
    ok = (not bad_sets and not bad_masses
          and all(t <= 1.0 + mass_tol for t in per_bin))
    return MembershipReport(
        per_bin_mass=tuple(per_bin),
        infeasible_sets=tuple(bad_sets),
        nonpositive_masses=tuple(bad_masses),
        n_components=x.n_components,
        ok=ok,
    )
