"""Turn a history-dependent finite supervisor into an IS-mapping.

The supervisor below alternates between enabling c1 and c2 on each
observation, so its decision depends on parity rather than on estimates.

Run: python3 demos/04_conversion.py
"""
from ndopacity.conversion import FiniteSupervisor, convert
from ndopacity.infostate import decision, fmt_decision_set, fmt_macro, fmt_micro
from ndopacity.oracle import DepthBound, check_closed_loop_opacity
from ndopacity.plant import Plant

p = Plant.build(
    "parity",
    [("0", "o", "0"), ("0", "c1", "1"), ("0", "c2", "2"),
     ("1", "o", "3"), ("2", "o", "3"), ("3", "o", "0")],
    initial="0", observable=["o"], controllable=["c1", "c2"], secret=["1", "2"],
)
C1, C2 = decision("c1"), decision("c2")
sn = FiniteSupervisor(
    ("even", "odd"), "even",
    output={"even": {C1}, "odd": {C2}},
    update={("even", C1, "o"): "odd", ("odd", C2, "o"): "even"},
)
print("finite supervisor:", check_closed_loop_opacity(p, sn, DepthBound(6)))

theta = convert(p, sn)
for (m, y), opts in sorted(theta.items(), key=lambda kv: (sorted(kv[0][1]), sorted(kv[0][0]))):
    print(f"  ({fmt_micro(m)}, {fmt_macro(y)}) -> {fmt_decision_set(opts)}")
print("converted mapping:", check_closed_loop_opacity(p, theta, DepthBound(6)))
