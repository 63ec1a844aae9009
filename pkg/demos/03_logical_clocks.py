# The clock zoo.
#
# A clock is three operations: a preorder on timestamps, an increment
# per action, and a merge. Ticks increment, joins merge, forks copy.
# The classifier clocks differ only in how they class actions: scalar
# counts everything in one bucket, vector counts per actor, rst counts
# per (actor, target) pair.

import random

from causalweft.clocks import (
    MatrixStamp,
    by_name,
    timestamp_all,
    update,
    wb_clock,
    zero_valuation,
)
from causalweft.lamport import gen_execution, to_diagram

x = gen_execution(seed=6, max_processes=3, max_actions=6)
d, lab, _ = to_diagram(x)

for name in ("scalar", "vector", "rst"):
    clock = by_name(name)
    stamps = timestamp_all(d, lab, clock, zero_valuation(clock, d.initial))
    print(f"{name} stamps at the final cut:")
    for e, t in sorted(stamps.items()):
        if e.cut == d.n_steps:
            print(f"  {e}  {t}")
    print()

# update pushes a whole valuation through and reports the final sites
clock = by_name("vector")
out = update(d, lab, clock, zero_valuation(clock, d.initial))
print("vector update:", {s or ".": str(t) for s, t in sorted(out.items())})

# the matrix clock's merge is not symmetric: the receiver of a merge
# folds the other side's row into its own
c = wb_clock()
a = MatrixStamp(0, {(0, 0): 1})
b = MatrixStamp(1, {(1, 1): 2})
print("\nmerge(a, b):", c.merge(a, b))
print("merge(b, a):", c.merge(b, a))
print("both above a and b anyway:", all(
    c.leq(t, m) for t in (a, b) for m in (c.merge(a, b), c.merge(b, a))
))

# sampling shows the preorder really is partial: some pairs compare
# neither way
rng = random.Random(0)
v = by_name("vector")
t1, t2 = v.sample(rng), v.sample(rng)
print(f"\n{t1} <= {t2}: {v.leq(t1, t2)}")
print(f"{t2} <= {t1}: {v.leq(t2, t1)}")
