"""Build the bipartite transition system and prune it to its greatest fixed point.

Run: python3 demos/02_gbts_pruning.py
"""
from ndopacity.fixture import reconstruct_fixture
from ndopacity.gbts import build_total, decisions_at, prune_rounds, remove_revealing, revealing_z_states
from ndopacity.infostate import flatten, fmt_macro_decision, fmt_micro, strip

p = reconstruct_fixture()
total = build_total(p)
print(f"T_total: {len(total)} states")

# Z-states whose flattened estimate sits inside the secret are cut first.
for z in sorted(revealing_z_states(total, p), key=lambda z: sorted(flatten(strip(z)))):
    print(f"  revealing Z-state, intruder sees {fmt_micro(flatten(strip(z)))}")

t_star, rounds = prune_rounds(remove_revealing(total))
for k, r in enumerate(rounds, 1):
    print(f"round {k}: -{len(r.removed_y)} Y, -{len(r.removed_z)} Z, {r.unreachable} unreachable dropped")
print(f"T*: {len(t_star)} states")
print("surviving initial decisions:", [fmt_macro_decision(d) for d in decisions_at(t_star, t_star.y0)])
