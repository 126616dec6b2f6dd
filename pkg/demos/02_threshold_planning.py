"""Plan threshold pairs and inspect the certified guarantees.

The planner picks (T, t) so that the exact integer condition
T^2 + 3T + t - t^2 > 2k(n+2) certifies impartiality, then reports the
guaranteed worst additive gap alpha = T + floor(kn/t) - 2.  For single
nominations alpha stays within sqrt(8n).
"""

import math

from impsel import plan_thresholds_general, plan_thresholds_k1, validate_thresholds, ThresholdPair

print("single-nomination planner (k=1):")
print(f"{'n':>7} {'t':>5} {'T':>5} {'alpha':>6} {'sqrt(8n)':>9} {'certified':>10}")
for n in (4, 9, 16, 25, 100, 400, 2500, 10_000):
    plan = plan_thresholds_k1(n)
    print(
        f"{n:>7} {plan.thresholds.lower:>5} {plan.thresholds.upper:>5}"
        f" {plan.alpha_bound:>6} {math.sqrt(8 * n):>9.2f} {str(plan.impartial_certified):>10}"
    )

print("\nbounded-outdegree planner (k <= c * n^kappa):")
for n, k, kappa, c in ((100, 1, 0.0, 1.0), (100, 5, 0.0, 5.0), (256, 16, 0.5, 1.0)):
    plan = plan_thresholds_general(n, k, kappa, c)
    print(
        f"  n={n} k={k} kappa={kappa}: t={plan.thresholds.lower} T={plan.thresholds.upper}"
        f" alpha={plan.alpha_bound} certified={plan.impartial_certified} degenerate={plan.degenerate}"
    )

print("\nvalidating a hand-picked pair at n=100, k=1:")
for pair in (ThresholdPair(16, 10), ThresholdPair(10, 10)):
    report = validate_thresholds(100, 1, pair)
    print(
        f"  (T={pair.upper}, t={pair.lower}): margin {report.condition_lhs} vs {report.condition_rhs}"
        f" -> certified={report.impartial_certified}"
    )

# Tiny instances have no room between the thresholds; the planner flags them
# instead of guessing.
print("\nn=2 is degenerate:", plan_thresholds_k1(2).note)
