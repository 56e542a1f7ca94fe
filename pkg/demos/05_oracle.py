"""Cross-check the macro-level recursions against brute-force enumeration.

Run: python3 demos/05_oracle.py
"""
import random

from ndopacity.oracle import DepthBound, brute_force_deterministic_exists, check_closed_loop_opacity, explore
from ndopacity.random_models import random_plant
from ndopacity.runtime import intruder_estimates
from ndopacity.synthesis import synthesize

plants = [random_plant(random.Random(seed), name=f"rand{seed}") for seed in range(100)]
solved = deterministic = compared = 0
for p in plants:
    theta = synthesize(p)
    if brute_force_deterministic_exists(p):
        deterministic += 1
        assert theta is not None
    if theta is None:
        continue
    solved += 1
    assert check_closed_loop_opacity(p, theta, DepthBound(5)).opaque
    cl = explore(p, theta, 4)
    for s in cl.observations():
        inc, rec = intruder_estimates(p, theta, s), cl.records[s]
        assert (inc.macro, inc.macro_plus, inc.flat) == (rec.estimates, rec.augmented, rec.flat)
        compared += 1

print(f"{len(plants)} random plants, {solved} solved, {deterministic} with a deterministic solution")
print(f"{compared} observation sequences agree with enumeration")
