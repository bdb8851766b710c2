"""Randomized rounding of fractional assignments.

The pipeline: damp marginals ``y`` to ``1 - exp(-y)``, peel mass off the
fractional assignment until its marginals hit the damped target
(:func:`dominate_to_target`), sample one subset per bin independently, then
give each contested item to the bin coming first in that item's ordering.
With value-sorted orderings the expected welfare equals the surrogate value
at ``y`` exactly.

The simplified variant skips the peeling: it samples from the original
assignment and keeps item ``j`` at bin ``i`` with probability
``(1 - exp(-y[i,j])) / y[i,j]``, which lands on the same per-(bin, item)
assignment law.

All randomness comes from named substreams seeded by ``(seed, bin)``, so
per-bin draws are independent and reproducible regardless of evaluation
order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .instances import Allocation, Instance, item_permutations
from .surrogate import SparseFractionalAssignment, marginals

_PEEL_TOL = 1e-9


@dataclass(frozen=True)
class RoundingOutcome:
    """One realized rounding: final allocation, pre-conflict draws, seed."""

    allocation: Allocation
    raw_draws: tuple[frozenset, ...]
    seed: int


@dataclass(frozen=True)
class AssignmentDistribution:
    """Exact per-(bin, item) assignment probabilities of the rounding."""

    q: np.ndarray

    @property
    def unassigned(self) -> np.ndarray:
        """Per-item probability of ending up unassigned."""
        return np.clip(1.0 - self.q.sum(axis=0), 0.0, 1.0)


def damp_marginals(y: np.ndarray) -> np.ndarray:
    """Entrywise ``1 - exp(-y)``."""
    return -np.expm1(-np.asarray(y, dtype=float))


def dominate_to_target(x: SparseFractionalAssignment,
                       y_target: np.ndarray) -> SparseFractionalAssignment:
    """Peel mass off ``x`` until its marginals drop to ``y_target``.

    For each (bin, item) with surplus, mass is removed from listed sets
    containing the item in insertion order; a partially peeled set keeps its
    remainder and the peeled mass moves to the set without the item (dropped
    when empty).  At most one new component appears per (bin, item).

    Parameters
    ----------
    x : SparseFractionalAssignment
    y_target : (n, m) array
        Must satisfy ``y_target <= marginals(x)`` entrywise (tolerance 1e-9).

    Returns
    -------
    SparseFractionalAssignment
        Marginals equal ``y_target`` within 1e-9; per-bin totals unchanged
        except for mass shed to the implicit empty set.
    """
    y = marginals(x)
    surplus = y - np.asarray(y_target, dtype=float)
    if float(surplus.min()) < -_PEEL_TOL:
        i, j = np.unravel_index(np.argmin(surplus), surplus.shape)
        raise ValueError(
            f"target exceeds marginals at bin {i}, item {j} by {-surplus[i, j]}")

    out = SparseFractionalAssignment.empty(x.n_bins, x.n_items)
    out.bins = [dict(b) for b in x.bins]
    for i in range(x.n_bins):
        mapping = out.bins[i]
        for j in range(x.n_items):
            need = float(surplus[i, j])
            if need <= 0.0:
                continue
            for s in [s for s in mapping if j in s]:
                mass = mapping.get(s, 0.0)
                if mass <= 0.0:
                    continue
                take = min(mass, need)
                if take == mass:
                    del mapping[s]
                else:
                    mapping[s] = mass - take
                trimmed = s - {j}
                if trimmed:
                    mapping[trimmed] = mapping.get(trimmed, 0.0) + take
                need -= take
                if need <= 0.0:
                    break
            if need > _PEEL_TOL:
                raise ArithmeticError(
                    f"could not peel bin {i}, item {j}: residual {need}")
    return out


def _bin_rng(seed: int, i: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence((seed, i)))


def _draw_set(mapping: dict, rng: np.random.Generator) -> frozenset:
    u = rng.random()
    acc = 0.0
    for s, mass in mapping.items():
        acc += mass
        if u < acc:
            return s
    return frozenset()


def _conflict_ranks(perm: np.ndarray) -> np.ndarray:
    # rank[j, i] = position of bin i in item j's order; lower wins conflicts.
    return np.argsort(perm, axis=1)


def _resolve_conflicts(draws: list[frozenset], perm: np.ndarray) -> Allocation:
    rank = _conflict_ranks(perm)
    final = [set(s) for s in draws]
    for j in range(perm.shape[0]):
        claimants = [i for i, s in enumerate(draws) if j in s]
        if len(claimants) > 1:
            winner = min(claimants, key=lambda i: rank[j, i])
            for i in claimants:
                if i != winner:
                    final[i].discard(j)
    return tuple(frozenset(s) for s in final)


def round_with_permutations(x: SparseFractionalAssignment, perm: np.ndarray,
                            seed: int) -> RoundingOutcome:
    """Damp, peel, sample one set per bin, resolve conflicts by ``perm``.

    ``perm[j]`` lists bins in decreasing priority for item ``j``; residual
    per-bin mass means the bin draws nothing.
    """
    if seed < 0:
        raise ValueError("seed must be non-negative")
    damped = dominate_to_target(x, damp_marginals(marginals(x)))
    draws = [_draw_set(damped.bins[i], _bin_rng(seed, i))
             for i in range(x.n_bins)]
    return RoundingOutcome(allocation=_resolve_conflicts(draws, perm),
                           raw_draws=tuple(draws), seed=seed)


def round_greedy(x: SparseFractionalAssignment, inst: Instance,
                 seed: int) -> RoundingOutcome:
    """Rounding with conflicts resolved toward the higher-value bin."""
    return round_with_permutations(x, item_permutations(inst), seed)


def round_simplified(x: SparseFractionalAssignment, inst: Instance,
                     seed: int) -> RoundingOutcome:
    """Sampling from ``x`` itself with per-item damping by retention.

    Each bin draws a set from its own masses, then keeps item ``j`` with
    probability ``(1 - exp(-y[i,j])) / y[i,j]`` (kept surely where ``y`` is
    zero); conflicts resolve greedily.  Pre-conflict claim probabilities
    match :func:`round_greedy` exactly.
    """
    if seed < 0:
        raise ValueError("seed must be non-negative")
    y = marginals(x)
    ratio = _retention_ratio(y)
    draws = []
    for i in range(x.n_bins):
        rng = _bin_rng(seed, i)
        drawn = _draw_set(x.bins[i], rng)
        kept = frozenset(j for j in sorted(drawn) if rng.random() < ratio[i, j])
        draws.append(kept)
    perm = item_permutations(inst)
    return RoundingOutcome(allocation=_resolve_conflicts(draws, perm),
                           raw_draws=tuple(draws), seed=seed)


def _retention_ratio(y: np.ndarray) -> np.ndarray:
    out = np.ones_like(y)
    np.divide(-np.expm1(-y), y, out=out, where=y > 0)
    return out


def _distribution_from_marginals(y_damped: np.ndarray,
                                 perm: np.ndarray) -> np.ndarray:
    cols = np.arange(perm.shape[0])[:, None]
    p = y_damped[perm, cols]  # (m, n), item-major in priority order
    survive = np.cumprod(1.0 - p, axis=1)
    prior = np.concatenate([np.ones((perm.shape[0], 1)), survive[:, :-1]], axis=1)
    q = np.empty_like(y_damped)
    q[perm, cols] = p * prior
    return q


def assignment_distribution(x_damped: SparseFractionalAssignment,
                            perm: np.ndarray) -> AssignmentDistribution:
    """Exact assignment law of sampling ``x_damped`` with ``perm`` conflicts.

    ``q[i, j] = y'[i, j] * prod over bins k preceding i in perm[j] of
    (1 - y'[k, j])`` where ``y'`` are the marginals of ``x_damped``.
    """
    return AssignmentDistribution(
        q=_distribution_from_marginals(marginals(x_damped), perm))


def exact_expected_welfare(inst: Instance, x: SparseFractionalAssignment,
                           perm: np.ndarray | None = None) -> float:
    """Closed-form expected welfare of rounding ``x`` (greedy order by default).

    The law depends on ``x`` only through its marginals, so the peeling step
    is skipped here.
    """
    if perm is None:
        perm = item_permutations(inst)
    q = _distribution_from_marginals(damp_marginals(marginals(x)), perm)
    return float((q * inst.values).sum())


def _prep_bin(mapping: dict, n_items: int):
    masks = np.zeros((len(mapping) + 1, n_items), dtype=bool)
    masses = np.empty(len(mapping))
    for t, (s, mass) in enumerate(mapping.items()):
        masks[t, list(s)] = True
        masses[t] = mass
    return masks, np.cumsum(masses)


def batch_assignments(inst: Instance, x: SparseFractionalAssignment,
                      mode: str, samples: int, seed: int) -> np.ndarray:
    """Vectorized sampler for Monte Carlo estimates; returns (m, samples) bins.

    Entry (j, k) is the bin receiving item j in draw k, or -1.  Follows the
    same per-(bin, item) law as the one-shot rounders (substream per bin,
    draw k at stream position k) but consumes retention randomness in a
    different order, so individual draws are not replays of
    :func:`round_simplified`.
    """
    if mode not in ("greedy", "simplified"):
        raise ValueError(f"unknown rounding mode {mode!r}")
    if mode == "greedy":
        source = dominate_to_target(x, damp_marginals(marginals(x)))
        ratio = None
    else:
        source = x
        ratio = _retention_ratio(marginals(x))

    n, m = inst.n_bins, inst.n_items
    claims = np.zeros((n, samples, m), dtype=bool)
    for i in range(n):
        rng = _bin_rng(seed, i)
        masks, cum = _prep_bin(source.bins[i], m)
        idx = np.searchsorted(cum, rng.random(samples), side="right")
        claims[i] = masks[idx]
        if ratio is not None:
            claims[i] &= rng.random((samples, m)) < ratio[i]

    perm = item_permutations(inst)
    assigned = np.full((m, samples), -1, dtype=np.int64)
    for j in range(m):
        order = perm[j]
        ordered = claims[order, :, j]
        has = ordered.any(axis=0)
        first = ordered.argmax(axis=0)
        assigned[j, has] = order[first[has]]
    return assigned


def assignment_frequencies(inst: Instance, x: SparseFractionalAssignment,
                           mode: str, samples: int, seed: int) -> np.ndarray:
    """Empirical per-(bin, item) assignment frequencies over ``samples`` draws."""
    assigned = batch_assignments(inst, x, mode, samples, seed)
    freq = np.empty((inst.n_bins, inst.n_items))
    for j in range(inst.n_items):
        counts = np.bincount(assigned[j][assigned[j] >= 0],
                             minlength=inst.n_bins)
        freq[:, j] = counts / samples
    return freq


def sample_welfare(inst: Instance, x: SparseFractionalAssignment, mode: str,
                   samples: int, seed: int) -> tuple[float, float]:
    """Monte Carlo mean welfare and its standard error."""
    assigned = batch_assignments(inst, x, mode, samples, seed)
    vpad = np.vstack([inst.values, np.zeros((1, inst.n_items))])
    cols = np.arange(inst.n_items)[:, None]
    welfare = vpad[assigned, cols].sum(axis=0)
    return float(welfare.mean()), float(welfare.std(ddof=1) / np.sqrt(samples))
