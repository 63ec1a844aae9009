# Causal paths and the order they induce.
#
# An event is a (cut, site) pair. One event can influence another when
# a trajectory connects them: a site at every intermediate cut, each
# consecutive pair related by the step between those cuts. The diamond
# below has two such trajectories from its first event to its last.

from causalweft.clocks import Action
from causalweft.diagram import Atom, Diagram, Fork, Join, Leaf, Par, Prod, Tick, TickRef
from causalweft.paths import (
    Event,
    causally_ordered,
    compose_witness,
    events,
    span_count,
    span_enumerate,
    tick_events,
)

A = Atom("A")

diamond = Diagram(
    Leaf(Prod(A, A)),
    (Fork(A, A), Par(Tick(A, A), Tick(A, A)), Join(A, A)),
)
lab = {
    TickRef(1, "L"): Action("p1", "p1"),
    TickRef(1, "R"): Action("p2", "p2"),
}

print("events:", " ".join(str(e) for e in events(diamond)))

print("\ntrajectories from the initial site to the final one:")
for w in span_enumerate(diamond, "", ""):
    print(" ", w)
print("count:", span_count(diamond, "", ""))

# witnesses compose when the end of one is the start of the next
first = next(span_enumerate(diamond, "", ""))
half1 = first.__class__(0, first.trajectory[:3])
half2 = first.__class__(2, first.trajectory[2:])
print("\ncomposed:", compose_witness(half1, half2))

# the two ticks are concurrent: neither one's after-event can reach
# the other's before-event
left, right = tick_events(diamond, TickRef(1, "L")), tick_events(diamond, TickRef(1, "R"))
print("\nleft tick before right tick:", causally_ordered(diamond, left[1], right[0]))
print("right tick before left tick:", causally_ordered(diamond, right[1], left[0]))
print("fork before both:", causally_ordered(diamond, Event(0, ""), left[0]))
