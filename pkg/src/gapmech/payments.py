"""VCG-style payments on top of the fractional solve.

Bidders are either the bins or the items.  A bidder's fractional payment is
the Clarke pivot (best surrogate value of the market without them, from a
fresh solve) minus the others' value inside the current solution, evaluated
by zeroing the bidder's values while keeping the original bin orderings and
marginals.  The realized payment scales that by the bidder's realized share
of their fractional gain, which keeps payments non-negative and never above
realized value.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .instances import Allocation, Instance, bin_value, item_permutations
from .local_search import SearchConfig, maximize_surrogate
from .rounding import RoundingOutcome
from .surrogate import surrogate_value


@dataclass(frozen=True)
class BidderPayment:
    bidder: int
    pivot_value: float        # h: others' best value without this bidder
    others_value: float       # F_minus: others' value in the current solution
    fractional_gain: float    # w_frac: bidder's fractional share of the value
    fractional_payment: float # p_frac, after clamping into [0, w_frac]
    realized_value: float     # g: value realized in the rounded allocation
    payment: float            # p = g * p_frac / w_frac (0 when w_frac = 0)
    clamped_low: bool
    clamped_high: bool

    def to_dict(self) -> dict:
        return {
            "bidder": self.bidder,
            "h": self.pivot_value,
            "F_minus": self.others_value,
            "w_frac": self.fractional_gain,
            "p_frac": self.fractional_payment,
            "realized_value": self.realized_value,
            "payment": self.payment,
            "clamped": self.clamped_low or self.clamped_high,
        }


@dataclass(frozen=True)
class PaymentReport:
    model: str  # "bins" or "items"
    entries: tuple[BidderPayment, ...]

    @property
    def clamp_count(self) -> int:
        return sum(e.clamped_low or e.clamped_high for e in self.entries)

    def to_dict(self) -> dict:
        return {"model": self.model,
                "entries": [e.to_dict() for e in self.entries]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def without_bin(inst: Instance, i: int) -> Instance:
    """The market without bin bidder ``i``: row i of values zeroed."""
    values = inst.values.copy()
    values[i, :] = 0.0
    return Instance(values=values, weights=inst.weights, capacities=inst.capacities)


def without_item(inst: Instance, j: int) -> Instance:
    """The market without item bidder ``j``: column j of values zeroed."""
    values = inst.values.copy()
    values[:, j] = 0.0
    return Instance(values=values, weights=inst.weights, capacities=inst.capacities)


def value_without_bin_bidder(inst: Instance, perm: np.ndarray,
                             y_star: np.ndarray, i: int) -> float:
    """Surrogate at ``y_star`` with bin i's values zeroed, orderings kept.

    The orderings stay frozen to the original value-sorted ones, so single
    terms may go negative; the total is the others' expected welfare under
    the mechanism's own rounding law.
    """
    return surrogate_value(without_bin(inst, i), perm, y_star)


def value_without_item_bidder(inst: Instance, perm: np.ndarray,
                              y_star: np.ndarray, j: int) -> float:
    """Surrogate at ``y_star`` with item j's contribution dropped (orderings kept)."""
    return surrogate_value(without_item(inst, j), perm, y_star)


def clarke_pivot_bin(inst: Instance, i: int, cfg: SearchConfig) -> float:
    """Achieved surrogate value of a fresh solve without bin bidder ``i``."""
    return maximize_surrogate(without_bin(inst, i), cfg).trace.final_value


def clarke_pivot_item(inst: Instance, j: int, cfg: SearchConfig) -> float:
    """Achieved surrogate value of a fresh solve without item bidder ``j``."""
    return maximize_surrogate(without_item(inst, j), cfg).trace.final_value


def pivot_config(inst: Instance, cfg: SearchConfig) -> SearchConfig:
    """Search config for pivot re-solves: half the eps of the main solve.

    The pivot is a constant of the reduced market (the removed bidder's
    values are gone), so solving it tighter costs only time.  At the main
    solve's eps the leftover optimization slack regularly exceeds a small
    bidder's externality, which would push the payment negative and trip
    the clamp; halving eps keeps those events rare.
    """
    return SearchConfig.for_instance(inst, cfg.eps / 2.0,
                                     rng_seed=cfg.rng_seed,
                                     audit_stride=cfg.audit_stride)


def fractional_parts(pivot: float, others: float,
                     full_value: float) -> tuple[float, float, bool, bool]:
    """Fractional gain and payment with clamps applied.

    Returns ``(w_frac, p_frac, clamped_low, clamped_high)`` where
    ``w_frac = full_value - others`` floored at 0, ``p_frac = pivot - others``
    clamped into ``[0, w_frac]``.  Clamps fire only on solver noise; flags
    report them for audit.
    """
    gain = full_value - others
    clamped_low = False
    if gain < 0.0:
        gain = 0.0
        clamped_low = True
    p_frac = pivot - others
    if p_frac < 0.0:
        p_frac = 0.0
        clamped_low = True
    clamped_high = p_frac > gain
    if clamped_high:
        p_frac = gain
    return gain, p_frac, clamped_low, clamped_high


def _entry(bidder: int, pivot: float, others: float, full_value: float,
           realized: float) -> BidderPayment:
    gain, p_frac, clamped_low, clamped_high = fractional_parts(
        pivot, others, full_value)
    payment = realized * p_frac / gain if gain > 0.0 else 0.0
    return BidderPayment(
        bidder=bidder,
        pivot_value=pivot,
        others_value=others,
        fractional_gain=gain,
        fractional_payment=p_frac,
        realized_value=realized,
        payment=payment,
        clamped_low=clamped_low,
        clamped_high=clamped_high,
    )


def payments_bin_bidders(inst: Instance, y_star: np.ndarray, x_star,
                         outcome: RoundingOutcome,
                         cfg: SearchConfig) -> PaymentReport:
    """Per-bin payments: pivot re-solve, fractional shares, realized scaling.

    Parameters
    ----------
    inst : Instance
    y_star, x_star : solution of the mechanism's solve (payments depend on it
        only through ``y_star``)
    outcome : RoundingOutcome
        Realized allocation from the same run.
    cfg : SearchConfig
        The mechanism's config; pivots re-solve at half its eps
        (see :func:`pivot_config`).
    """
    perm = item_permutations(inst)
    full_value = surrogate_value(inst, perm, y_star)
    pcfg = pivot_config(inst, cfg)
    entries = []
    for i in range(inst.n_bins):
        others = value_without_bin_bidder(inst, perm, y_star, i)
        pivot = clarke_pivot_bin(inst, i, pcfg)
        realized = bin_value(inst, i, outcome.allocation[i])
        entries.append(_entry(i, pivot, others, full_value, realized))
    return PaymentReport(model="bins", entries=tuple(entries))


def _receiving_bin(allocation: Allocation, j: int) -> int | None:
    for i, s in enumerate(allocation):
        if j in s:
            return i
    return None


def payments_item_bidders(inst: Instance, y_star: np.ndarray, x_star,
                          outcome: RoundingOutcome,
                          cfg: SearchConfig) -> PaymentReport:
    """Per-item payments; realized value is the receiving bin's value entry."""
    perm = item_permutations(inst)
    full_value = surrogate_value(inst, perm, y_star)
    pcfg = pivot_config(inst, cfg)
    entries = []
    for j in range(inst.n_items):
        others = value_without_item_bidder(inst, perm, y_star, j)
        pivot = clarke_pivot_item(inst, j, pcfg)
        bin_i = _receiving_bin(outcome.allocation, j)
        realized = float(inst.values[bin_i, j]) if bin_i is not None else 0.0
        entries.append(_entry(j, pivot, others, full_value, realized))
    return PaymentReport(model="items", entries=tuple(entries))
