"""Audit that misreporting does not pay, in exact expectation.

Scale one bidder's reported values up or down, run the mechanism on the
report, and compute the bidder's exact expected utility under their true
values (the assignment law is available in closed form, so no sampling).
Truth-telling should be within solver tolerance of the best report; the
audit prints the utility of every report on a factor grid.
"""

from gapmech import audit_truthfulness, generate_instance

inst = generate_instance(2, 2, seed=3)
eps = 0.05

for model in ("bins", "items"):
    rows = audit_truthfulness(inst, bidder=0, model=model, cfg=eps)
    truthful = rows[0].expected_utility
    best = max(r.expected_utility for r in rows)
    print(f"bidder 0 as a {model!r} bidder (eps = {eps}):")
    print(f"{'factor':>8} {'E[value]':>10} {'E[payment]':>11} {'E[utility]':>11}")
    for r in rows:
        mark = "  <- truth" if r.factor == 1.0 else ""
        print(f"{r.factor:>8.2f} {r.expected_value:>10.4f} "
              f"{r.expected_payment:>11.4f} {r.expected_utility:>11.4f}{mark}")
    print(f"best misreport gain over truth: {best - truthful:+.5f} "
          f"(within solver slack when positive)")
    print()
