"""Synthesize a non-deterministic supervisor and decode it online.

Run: python3 demos/03_synthesis_decoding.py
"""
from ndopacity.fixture import reconstruct_fixture
from ndopacity.oracle import brute_force_deterministic_exists
from ndopacity.runtime import PlantSimulator, Session
from ndopacity.synthesis import Strategy, synthesize

p = reconstruct_fixture()
print("deterministic supervisor exists:", brute_force_deterministic_exists(p))

theta = synthesize(p, Strategy.LOCALLY_MAXIMAL)
print(f"synthesized mapping with {len(theta)} entries")

# Closed loop: the session picks uniformly among the offered decisions.
for seed in range(3):
    session, plant = Session(p, theta, seed=seed), PlantSimulator(p, seed=seed)
    session.step()
    session.true_state = plant.state
    print(f"seed {seed}")
    print(" ", session.transcript_line(None))
    while True:
        enabled = plant.enabled(session.applied)
        if not enabled:
            break
        obs = enabled[0]
        plant.fire(session.applied, obs)
        session.step(obs)
        print(" ", session.transcript_line(obs))
