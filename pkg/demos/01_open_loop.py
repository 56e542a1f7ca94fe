"""Without any supervision the running-example plant leaks its secret.

Run: python3 demos/01_open_loop.py
"""
from ndopacity.fixture import reconstruct_fixture
from ndopacity.infostate import fmt_micro
from ndopacity.plant import observer_estimate, verify_open_loop_opacity

p = reconstruct_fixture()
print(f"plant {p.name}: {len(p.states)} states, secret {fmt_micro(p.secret)}")

# What an intruder seeing each single observation believes, if every event may fire.
for o in sorted(p.observable):
    est = observer_estimate(p, [o])
    flag = "  <- inside the secret" if est and est <= p.secret else ""
    print(f"  after {o}: {fmt_micro(est)}{flag}")

print(verify_open_loop_opacity(p, 5))
