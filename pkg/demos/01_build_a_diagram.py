# Building a diagram by hand.
#
# A diagram is a start configuration plus a sequence of global steps.
# Configurations are binary trees of typed sites; each step rewrites
# the whole tree at once, with Par running one action per branch.
#
# Here one lane ticks (t1 becomes t1') while the other lane forks a
# payload t3 off its state, the tree is reassociated, and the payload's
# former partner t2 is joined onto the first lane.

from causalweft.diagram import (
    Atom,
    Diagram,
    Fork,
    Join,
    Leaf,
    Par,
    PermStep,
    Prod,
    Tensor,
    Tick,
    TickRef,
    cut_configs,
    noop,
    perm_assoc,
    validate,
)
from causalweft.clocks import Action
from causalweft.render import to_ascii

t1, t2, t3, t1p = Atom("t1"), Atom("t2"), Atom("t3"), Atom("t1'")

initial = Tensor(Leaf(t1), Leaf(Prod(t2, t3)))

d = Diagram(
    initial,
    (
        # left lane ticks, right lane splits t2 x t3 into two sites
        Par(Tick(t1, t1p), Fork(t2, t3)),
        # rebracket [t1'] * ([t2] * [t3]) to ([t1'] * [t2]) * [t3]
        PermStep(perm_assoc(Leaf(t1p), Leaf(t2), Leaf(t3))),
        # fuse t1' with t2; the payload t3 just rides along
        Par(Join(t1p, t2), noop(Leaf(t3))),
    ),
)

# a label names the tick at (step, tree position) with who acted on whom
lab = {TickRef(0, "L"): Action("p1", "p2")}

print("faults:", validate(d))
print()
for t, cfg in enumerate(cut_configs(d)):
    print(f"cut {t}: {cfg}")
print()
print(to_ascii(d, lab))
