"""Flat spot-checking: how big must the check probability be, and what does it cost?

A requester verifies each worker's report with probability p and fines C on a
detected error.  The probability that keeps a rational worker's error below
the threshold scales like 1/C, so small fines force near-constant checking.
"""

from supervise import (
    EffortFunction,
    SchemeParams,
    best_response_flat,
    expected_loss_flat,
    min_verification_probability_binary,
)

f = EffortFunction.simple_log(1.0)
params = SchemeParams(k=2, epsilon=0.25, C=16.0)

print("penalty C =", params.C, " tasks k =", params.k, " threshold eps =", params.epsilon)
print()

# the smallest checking probability that still deters sloppy work
bound = min_verification_probability_binary(f, params)
print(f"minimum check probability: {float(bound):.4f}  feasible: {bound.feasible}")
print()

# best response and expected loss as the requester dials p up
print(f"{'p':>6} {'error e*':>10} {'loss':>10}")
for p in (0.1, 0.25, float(bound), 0.75, 1.0):
    r = best_response_flat(f, p, params)
    loss = expected_loss_flat(f, r.value, p, params)
    mark = "  <- at the bound" if p == float(bound) else ""
    print(f"{p:>6.3f} {r.value:>10.4f} {loss:>10.4f}{mark}")
print()

# with a harder effort curve the same penalty stops working
hard = EffortFunction.simple_log(8.0)
b2 = min_verification_probability_binary(hard, params)
print(f"alpha=8 would need check probability {float(b2):.3f}  feasible: {b2.feasible}")
print("infeasible: no p in (0,1] deters this worker at C =", params.C)
