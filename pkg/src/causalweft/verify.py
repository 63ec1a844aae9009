"""Property checkers and seeded generators.

Two executable facts about clocks pushed through diagrams: updates
never lose ground across a diagram (inflationarity), and timestamps
respect causal order between events (the clock condition). Both
checkers discover the pairs to test from reachability and attach a
concrete trajectory witness to every violation, so a failure is a
checkable object rather than a boolean.

The generators build random well-typed diagrams and random acyclic
executions from a seed, types first, so no rejection sampling is
involved and equal seeds give byte-identical artifacts.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Any, Callable, Mapping

from .clocks import (
    Action,
    Clock,
    Valuation,
    timestamp_all,
    update,
    zero_valuation,
)
from .diagram import (
    Atom,
    Config,
    Diagram,
    Fork,
    GlobalStep,
    Join,
    Leaf,
    Par,
    PermStep,
    Prod,
    SiteRef,
    StateType,
    Tensor,
    Tick,
    TickRef,
    cut_configs,
    n_sites,
    noop,
    perm_from_table,
    site_type,
    sites,
    step_output,
    ticks,
)
from .paths import (
    Event,
    PathWitness,
    causal_paths,
    event_order_pairs,
    span_enumerate,
    span_reachable,
    step_relation,
)
from .serialize import diagram_hash, witness_to_obj

# ---------------------------------------------------------------------------
# seeded diagram generation

DEFAULT_ATOMS: tuple[str, ...] = ("A", "B", "C")
DEFAULT_ACTIONS: tuple[Action, ...] = tuple(
    Action(p, q) for p in ("p1", "p2", "p3") for q in ("p1", "p2", "p3")
)


@dataclass(frozen=True)
class GenParams:
    """Knobs for the diagram generator. Weights pick among step kinds
    where the configuration allows them; zero disables a kind."""

    seed: int
    max_steps: int = 8
    max_sites: int = 6
    atoms: tuple[str, ...] = DEFAULT_ATOMS
    actions: tuple[Action, ...] = DEFAULT_ACTIONS
    tick_weight: float = 4.0
    fork_weight: float = 2.0
    join_weight: float = 2.0
    perm_weight: float = 2.0

    def __post_init__(self) -> None:
        if self.max_steps < 0:
            raise ValueError("max_steps must be >= 0")
        if self.max_sites < 1:
            raise ValueError("max_sites must be >= 1")
        if not self.atoms or not self.actions:
            raise ValueError("atom and action pools must be nonempty")
        weights = (
            self.tick_weight,
            self.fork_weight,
            self.join_weight,
            self.perm_weight,
        )
        if any(w < 0 for w in weights):
            raise ValueError("weights must be nonnegative")
        if not any(weights):
            raise ValueError("at least one weight must be positive")


def _weighted(rng: random.Random, choices: list[tuple[str, float]]) -> str | None:
    total = sum(w for _, w in choices)
    if total <= 0:
        return None
    x = rng.random() * total
    for kind, w in choices:
        x -= w
        if x < 0:
            return kind
    return choices[-1][0]


def _random_type(rng: random.Random, p: GenParams) -> StateType:
    # pairs make forks possible downstream
    if rng.random() < 0.35:
        return Prod(Atom(rng.choice(p.atoms)), Atom(rng.choice(p.atoms)))
    return Atom(rng.choice(p.atoms))


def _random_tree(rng: random.Random, leaves: list[Config]) -> Config:
    if len(leaves) == 1:
        return leaves[0]
    k = rng.randint(1, len(leaves) - 1)
    return Tensor(_random_tree(rng, leaves[:k]), _random_tree(rng, leaves[k:]))


def _random_perm(rng: random.Random, cfg: Config) -> PermStep:
    src = sites(cfg)
    tys = [site_type(cfg, s) for s in src]
    n = len(src)
    pi = list(range(n))
    rng.shuffle(pi)
    slot: list[StateType | None] = [None] * n
    for i, j in enumerate(pi):
        slot[j] = tys[i]
    target = _random_tree(rng, [Leaf(t) for t in slot])  # type: ignore[arg-type]
    tgt = sites(target)
    table = {src[i]: tgt[pi[i]] for i in range(n)}
    return PermStep(perm_from_table(cfg, target, table))


def _random_step(
    rng: random.Random, p: GenParams, cfg: Config, budget: list[int]
) -> GlobalStep:
    match cfg:
        case Leaf(ty):
            choices = [("tick", p.tick_weight), ("noop", p.perm_weight)]
            if isinstance(ty, Prod) and budget[0] < p.max_sites:
                choices.append(("fork", p.fork_weight))
            kind = _weighted(rng, choices) or "noop"
            if kind == "tick":
                return Tick(ty, _random_type(rng, p))
            if kind == "fork":
                budget[0] += 1
                return Fork(ty.left, ty.right)
            return noop(cfg)
        case Tensor(left, right):
            choices = [
                ("par", p.tick_weight + p.fork_weight + 1.0),
                ("perm", p.perm_weight),
            ]
            if isinstance(left, Leaf) and isinstance(right, Leaf):
                choices.append(("join", p.join_weight))
            kind = _weighted(rng, choices) or "par"
            if kind == "join":
                budget[0] -= 1
                return Join(left.ty, right.ty)
            if kind == "perm":
                return _random_perm(rng, cfg)
            return Par(
                _random_step(rng, p, left, budget),
                _random_step(rng, p, right, budget),
            )
    raise TypeError(f"not a configuration: {cfg!r}")


def gen_diagram(p: GenParams) -> tuple[Diagram, dict[TickRef, Action]]:
    """A random valid labeled diagram, a pure function of the params."""
    rng = random.Random(p.seed)
    start = rng.randint(1, max(1, p.max_sites // 2))
    initial = _random_tree(
        rng, [Leaf(_random_type(rng, p)) for _ in range(start)]
    )
    steps = []
    cur = initial
    for _ in range(rng.randint(0, p.max_steps)):
        budget = [n_sites(cur)]
        step = _random_step(rng, p, cur, budget)
        steps.append(step)
        cur = step_output(step)
    d = Diagram(initial, tuple(steps))
    lab = {r: rng.choice(p.actions) for r in ticks(d)}
    return d, lab


def random_valuation(
    clock: Clock, config: Config, rng: random.Random
) -> dict[SiteRef, Any]:
    """Arbitrary starting timestamps, one sample per site."""
    return {s: clock.sample(rng) for s in sites(config)}


# ---------------------------------------------------------------------------
# violation reports

@dataclass(frozen=True)
class Violation:
    """One ordered event pair whose timestamps compare the wrong way,
    with the trajectory that orders them."""

    source: Event
    dest: Event
    source_stamp: Any
    dest_stamp: Any
    witness: PathWitness


@dataclass(frozen=True)
class ViolationReport:
    check: str
    checked_pairs: int
    violations: tuple[Violation, ...]
    diagram_hash: str

    @property
    def ok(self) -> bool:
        return not self.violations


def check_clock_condition(
    d: Diagram,
    lab: Mapping[TickRef, Action],
    clock: Clock,
    valuation: Valuation | None = None,
) -> ViolationReport:
    """Does every causally ordered event pair carry non-decreasing
    timestamps? Pairs are discovered by reachability sweeps, not by
    enumerating trajectories; each violation carries the first witness
    in enumeration order."""
    if valuation is None:
        valuation = zero_valuation(clock, d.initial)
    stamps = timestamp_all(d, lab, clock, valuation)
    violations = []
    pairs = sorted(event_order_pairs(d))
    for e1, e2 in pairs:
        if not clock.leq(stamps[e1], stamps[e2]):
            witness = next(causal_paths(d, e1, e2))
            violations.append(
                Violation(e1, e2, stamps[e1], stamps[e2], witness)
            )
    return ViolationReport(
        "clock-condition", len(pairs), tuple(violations), diagram_hash(d, lab)
    )


def check_update_inflationary(
    d: Diagram,
    lab: Mapping[TickRef, Action],
    clock: Clock,
    valuation: Valuation | None = None,
) -> ViolationReport:
    """Does pushing a valuation through the diagram only grow it, on
    every connected (initial site, final site) pair?"""
    if valuation is None:
        valuation = zero_valuation(clock, d.initial)
    out = update(d, lab, clock, valuation)
    violations = []
    checked = 0
    n = d.n_steps
    for s1 in sites(d.initial):
        for s2 in sites(d.final):
            if not span_reachable(d, s1, s2):
                continue
            checked += 1
            if not clock.leq(valuation[s1], out[s2]):
                witness = next(span_enumerate(d, s1, s2))
                violations.append(
                    Violation(
                        Event(0, s1), Event(n, s2), valuation[s1], out[s2], witness
                    )
                )
    return ViolationReport(
        "update-inflationary", checked, tuple(violations), diagram_hash(d, lab)
    )


def _event_obj(e: Event) -> dict:
    return {"cut": e.cut, "site": e.site}


def report_to_obj(report: ViolationReport, clock: Clock) -> dict:
    """Violation report as a JSON-ready object."""
    from .clocks import stamp_to_obj

    return {
        "check": report.check,
        "clock": clock.name,
        "checked_pairs": report.checked_pairs,
        "diagram_hash": report.diagram_hash,
        "violations": [
            {
                "source": _event_obj(v.source),
                "dest": _event_obj(v.dest),
                "source_stamp": stamp_to_obj(clock, v.source_stamp),
                "dest_stamp": stamp_to_obj(clock, v.dest_stamp),
                "witness": witness_to_obj(v.witness),
            }
            for v in report.violations
        ],
    }


# ---------------------------------------------------------------------------
# clock algebra laws

@dataclass(frozen=True)
class LawFailure:
    law: str
    detail: str


@dataclass(frozen=True)
class LawReport:
    clock: str
    samples: int
    failures: tuple[LawFailure, ...]

    @property
    def ok(self) -> bool:
        return not self.failures


_FAILURE_CAP = 10  # per law; a lawless clock fails almost every sample


def check_clock_laws(
    clock: Clock,
    seed: int = 0,
    samples: int = 10_000,
    actions: tuple[Action, ...] = DEFAULT_ACTIONS,
) -> LawReport:
    """Sampled check of the clock algebra: leq is a preorder, increment
    and merge (in both argument orders) never lose ground. Transitivity
    is fed constructed chains so its premise is routinely inhabited."""
    rng = random.Random(seed)
    tally: dict[str, int] = {}
    failures: list[LawFailure] = []

    def fail(law: str, detail: str) -> None:
        tally[law] = tally.get(law, 0) + 1
        if tally[law] <= _FAILURE_CAP:
            failures.append(LawFailure(law, detail))

    for _ in range(samples):
        t1, t2, t3 = clock.sample(rng), clock.sample(rng), clock.sample(rng)
        a = rng.choice(actions)
        if not clock.leq(t1, t1):
            fail("leq-reflexive", f"t={t1!r}")
        bumped = clock.increment(a, t1)
        if not clock.leq(t1, bumped):
            fail("increment-inflationary", f"a={a!r} t={t1!r} inc={bumped!r}")
        for l, r in ((t1, t2), (t2, t1)):
            m = clock.merge(l, r)
            if not clock.leq(l, m):
                fail("merge-absorbs-left", f"l={l!r} r={r!r} merge={m!r}")
            if not clock.leq(r, m):
                fail("merge-absorbs-right", f"l={l!r} r={r!r} merge={m!r}")
        # constructed chain keeps the transitivity premise inhabited
        c2 = clock.merge(t1, t2)
        c3 = clock.merge(c2, t3)
        if clock.leq(t1, c2) and clock.leq(c2, c3) and not clock.leq(t1, c3):
            fail("leq-transitive", f"t1={t1!r} t2={c2!r} t3={c3!r}")
        if clock.leq(t1, t2) and clock.leq(t2, t3) and not clock.leq(t1, t3):
            fail("leq-transitive", f"t1={t1!r} t2={t2!r} t3={t3!r}")
    return LawReport(clock.name, samples, tuple(failures))


def law_report_to_obj(report: LawReport) -> dict:
    return {
        "clock": report.clock,
        "samples": report.samples,
        "failures": [{"law": f.law, "detail": f.detail} for f in report.failures],
    }


def broken_clock() -> Clock:
    """A deliberately lawless clock whose increment decreases its
    counter. Timestamps are plain dicts. For checker-sensitivity
    tests: any diagram with a tick followed by a causally later event
    must produce a violation."""

    def leq(a: dict, b: dict) -> bool:
        return all(a.get(k, 0) <= b.get(k, 0) for k in a.keys() | b.keys())

    def increment(action: Action, t: dict) -> dict:
        out = dict(t)
        out["*"] = out.get("*", 0) - 1
        return out

    def merge(a: dict, b: dict) -> dict:
        out = dict(a)
        for k, v in b.items():
            if v > out.get(k, 0):
                out[k] = v
        return out

    def sample(rng: random.Random) -> dict:
        v = rng.randint(-2, 4)
        return {"*": v} if v else {}

    return Clock("broken", "classifier", dict, leq, increment, merge, sample)


# ---------------------------------------------------------------------------
# brute-force oracles
#
# Independent of the propagation logic in `paths`: every event becomes
# a graph node, every step_relation pair an edge, and the order is the
# reflexive-transitive closure of that graph.

def _event_closure(d: Diagram) -> tuple[list[Event], list[int]]:
    evs = [
        Event(t, s)
        for t, cfg in enumerate(cut_configs(d))
        for s in sites(cfg)
    ]
    index = {e: i for i, e in enumerate(evs)}
    rows = [1 << i for i in range(len(evs))]
    for k, step in enumerate(d.steps):
        for a, b in step_relation(step):
            rows[index[Event(k, a)]] |= 1 << index[Event(k + 1, b)]
    for m in range(len(evs)):
        bit = 1 << m
        row_m = rows[m]
        for i in range(len(evs)):
            if rows[i] & bit:
                rows[i] |= row_m
    return evs, rows


def oracle_event_order(d: Diagram) -> set[tuple[Event, Event]]:
    """All causally ordered event pairs, by naive transitive closure."""
    evs, rows = _event_closure(d)
    return {
        (evs[i], evs[j])
        for i, row in enumerate(rows)
        for j in range(len(evs))
        if row >> j & 1
    }


def oracle_reachability(d: Diagram) -> set[tuple[SiteRef, SiteRef]]:
    """All connected (initial site, final site) pairs, by naive
    transitive closure."""
    evs, rows = _event_closure(d)
    n = d.n_steps
    out = set()
    for i, e1 in enumerate(evs):
        if e1.cut != 0:
            continue
        for j, e2 in enumerate(evs):
            if e2.cut == n and rows[i] >> j & 1:
                out.add((e1.site, e2.site))
    return out


# ---------------------------------------------------------------------------
# order laws

@dataclass(frozen=True)
class OrderLawReport:
    events: int
    pairs: int
    reflexivity: tuple[Event, ...]
    antisymmetry: tuple[tuple[Event, Event], ...]
    transitivity: tuple[tuple[Event, Event, Event], ...]

    @property
    def ok(self) -> bool:
        return not (self.reflexivity or self.antisymmetry or self.transitivity)


def check_order_laws(d: Diagram) -> OrderLawReport:
    """Exhaustively verify that causal order is a partial order on the
    events of the diagram."""
    pairs = event_order_pairs(d)
    evs = [
        Event(t, s)
        for t, cfg in enumerate(cut_configs(d))
        for s in sites(cfg)
    ]
    reflexivity = tuple(e for e in evs if (e, e) not in pairs)
    antisymmetry = tuple(
        sorted(
            (e1, e2)
            for e1, e2 in pairs
            if e1 < e2 and (e2, e1) in pairs
        )
    )
    succs: dict[Event, list[Event]] = {}
    for e1, e2 in pairs:
        succs.setdefault(e1, []).append(e2)
    broken = set()
    for e1, e2 in pairs:
        for e3 in succs.get(e2, ()):
            if (e1, e3) not in pairs:
                broken.add((e1, e2, e3))
    return OrderLawReport(
        len(evs), len(pairs), reflexivity, antisymmetry, tuple(sorted(broken))
    )


def order_report_to_obj(report: OrderLawReport) -> dict:
    return {
        "events": report.events,
        "pairs": report.pairs,
        "reflexivity": [_event_obj(e) for e in report.reflexivity],
        "antisymmetry": [
            [_event_obj(e1), _event_obj(e2)] for e1, e2 in report.antisymmetry
        ],
        "transitivity": [
            [_event_obj(e1), _event_obj(e2), _event_obj(e3)]
            for e1, e2, e3 in report.transitivity
        ],
    }
