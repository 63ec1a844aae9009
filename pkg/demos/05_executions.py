# From message-passing executions to diagrams and back.
#
# The classic model: processes run sequences of actions, messages pair
# a send with a receive on another process. Compiling an execution
# into a diagram makes every message an explicit site that is forked
# off the sender and joined into the receiver, and the diagram's causal
# order restricted to the ticks is exactly happens-before.

from causalweft.clocks import Action
from causalweft.lamport import (
    Execution,
    derived_order,
    hb_closure,
    to_diagram,
)
from causalweft.render import to_ascii, to_dot

# p1 sends to p2, then p2 replies; one internal action on p3
x = Execution(
    processes={"p1": ("send1", "recv2"), "p2": ("recv1", "send2"), "p3": ("think",)},
    messages=frozenset({("send1", "recv1"), ("send2", "recv2")}),
    actions={
        "send1": Action("p1", "p2"),
        "recv1": Action("p2", "p1"),
        "send2": Action("p2", "p1"),
        "recv2": Action("p1", "p2"),
        "think": Action("p3", "p3"),
    },
)

hb = hb_closure(x)
print("happens-before:")
for a, b in sorted(hb):
    print(f"  {a} < {b}")

d, lab, tick_index = to_diagram(x)
print("\ncompiled to", d.n_steps, "steps over", len(x.processes), "processes")
print("derived order matches:", derived_order(d, tick_index) == hb)
print("'think' stays concurrent with everything:",
      not [p for p in hb if "think" in p])

print()
print(to_ascii(d, lab))

# the dot rendering is one node per event, one edge per step connection;
# feed it to graphviz to see the lattice
print(to_dot(d, lab)[:400], "...")
