"""Causal reachability inside a diagram.

An event is a (cut, site) pair: a site at a moment. One event can
influence another exactly when some trajectory of sites connects them,
moving through one step at a time along the step's connectivity
relation. Trajectories double as checkable witnesses, and causal
order is their existence.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Mapping

from .diagram import (
    CompositionError,
    Diagram,
    Fork,
    GlobalStep,
    Join,
    Par,
    PermStep,
    SiteRef,
    Tick,
    TickRef,
    cut_config,
    cut_configs,
    sites,
    tick_at,
)

# ---------------------------------------------------------------------------
# events

@dataclass(frozen=True, order=True)
class Event:
    """A site at a cut."""

    cut: int
    site: SiteRef

    def __str__(self) -> str:
        return f"{self.cut}:{self.site if self.site else '.'}"


def check_event(d: Diagram, e: Event) -> None:
    """Raise unless `e` names a site of the cut-e.cut configuration."""
    if not 0 <= e.cut <= d.n_steps:
        raise ValueError(f"cut {e.cut} out of range 0..{d.n_steps}")
    if e.site not in _tables(d).site_sets[e.cut]:
        raise ValueError(f"{e.site!r} is not a site at cut {e.cut}")


def events(d: Diagram) -> tuple[Event, ...]:
    """Every event of a diagram, ordered by cut then site."""
    return tuple(
        Event(t, s)
        for t, row in enumerate(_tables(d).site_lists)
        for s in row
    )


# ---------------------------------------------------------------------------
# one-step connectivity

def step_relation(step: GlobalStep) -> set[tuple[SiteRef, SiteRef]]:
    """Which input sites of a step can influence which output sites.

    Ticks connect their site to itself, forks connect the input to
    both outputs, joins connect both inputs to the output, perms
    connect each site to its image, and Par keeps the two halves
    disjoint.
    """
    match step:
        case Tick():
            return {("", "")}
        case Fork():
            return {("", "L"), ("", "R")}
        case Join():
            return {("L", ""), ("R", "")}
        case PermStep(perm):
            return set(perm.pairs)
        case Par(left, right):
            rel = {("L" + a, "L" + b) for a, b in step_relation(left)}
            rel.update(("R" + a, "R" + b) for a, b in step_relation(right))
            return rel
    raise TypeError(f"not a step: {step!r}")


@dataclass(frozen=True)
class _Tables:
    site_lists: tuple[tuple[SiteRef, ...], ...]
    site_sets: tuple[frozenset[SiteRef], ...]
    # adjacency per step: input site -> sorted output sites
    adj: tuple[Mapping[SiteRef, tuple[SiteRef, ...]], ...]


@lru_cache(maxsize=512)
def _tables(d: Diagram) -> _Tables:
    cfgs = cut_configs(d)
    site_lists = tuple(sites(c) for c in cfgs)
    adj = []
    for step in d.steps:
        fwd: dict[SiteRef, list[SiteRef]] = {}
        for a, b in sorted(step_relation(step)):
            fwd.setdefault(a, []).append(b)
        adj.append({a: tuple(bs) for a, bs in fwd.items()})
    return _Tables(site_lists, tuple(frozenset(r) for r in site_lists), tuple(adj))


# ---------------------------------------------------------------------------
# witnesses

@dataclass(frozen=True)
class PathWitness:
    """A checkable trajectory: one site per cut from `start` onward.

    Two witnesses are equal exactly when their trajectories are equal;
    no finer identity is tracked.
    """

    start: int
    trajectory: tuple[SiteRef, ...]

    def __post_init__(self) -> None:
        if not self.trajectory:
            raise ValueError("a witness covers at least one cut")

    @property
    def end(self) -> int:
        return self.start + len(self.trajectory) - 1

    def events(self) -> tuple[Event, ...]:
        return tuple(
            Event(self.start + i, s) for i, s in enumerate(self.trajectory)
        )

    def __str__(self) -> str:
        return " -> ".join(str(e) for e in self.events())


def witness_valid(d: Diagram, w: PathWitness) -> bool:
    """Check a witness against a diagram: every hop must be allowed by
    the step between its cuts."""
    if not 0 <= w.start or w.end > d.n_steps:
        return False
    tables = _tables(d)
    for i, s in enumerate(w.trajectory):
        if s not in tables.site_sets[w.start + i]:
            return False
    for i in range(len(w.trajectory) - 1):
        nxt = tables.adj[w.start + i].get(w.trajectory[i], ())
        if w.trajectory[i + 1] not in nxt:
            return False
    return True


def compose_witness(a: PathWitness, b: PathWitness) -> PathWitness:
    """Concatenate two witnesses sharing their junction event.

    Concatenation of trajectories is strictly associative, so chains
    of compositions do not depend on bracketing.
    """
    if a.end != b.start or a.trajectory[-1] != b.trajectory[0]:
        raise CompositionError(
            f"witness ending at {Event(a.end, a.trajectory[-1])} cannot "
            f"meet one starting at {Event(b.start, b.trajectory[0])}"
        )
    return PathWitness(a.start, a.trajectory + b.trajectory[1:])


# ---------------------------------------------------------------------------
# spanning trajectories (whole-diagram queries)

def _require_site(d: Diagram, t: int, s: SiteRef, what: str) -> None:
    if s not in _tables(d).site_sets[t]:
        raise ValueError(f"{what} {s!r} is not a site at cut {t}")


def _reach_fwd(d: Diagram, t1: int, s1: SiteRef, t2: int) -> set[SiteRef]:
    adj = _tables(d).adj
    cur = {s1}
    for k in range(t1, t2):
        cur = {b for a in cur for b in adj[k].get(a, ())}
        if not cur:
            break
    return cur


def span_reachable(d: Diagram, s1: SiteRef, s2: SiteRef) -> bool:
    """Does some trajectory cross the whole diagram from initial site
    s1 to final site s2?"""
    _require_site(d, 0, s1, "source site")
    _require_site(d, d.n_steps, s2, "target site")
    return s2 in _reach_fwd(d, 0, s1, d.n_steps)


def span_count(d: Diagram, s1: SiteRef, s2: SiteRef) -> int:
    """How many distinct trajectories cross from s1 to s2. Exact; the
    count can grow exponentially in the number of steps."""
    _require_site(d, 0, s1, "source site")
    _require_site(d, d.n_steps, s2, "target site")
    counts: dict[SiteRef, int] = {s1: 1}
    for adj in _tables(d).adj:
        nxt: dict[SiteRef, int] = {}
        for a, c in counts.items():
            for b in adj.get(a, ()):
                nxt[b] = nxt.get(b, 0) + c
        counts = nxt
    return counts.get(s2, 0)


def _enumerate(
    d: Diagram, t1: int, s1: SiteRef, t2: int, s2: SiteRef
) -> Iterator[PathWitness]:
    """All trajectories from (t1, s1) to (t2, s2), lexicographic by
    trajectory. Lazy; prunes branches that cannot reach s2."""
    adj = _tables(d).adj
    # backward cone of (t2, s2), one site set per cut t1..t2
    cone: list[set[SiteRef]] = [set() for _ in range(t2 - t1 + 1)]
    cone[-1] = {s2}
    for k in range(t2 - 1, t1 - 1, -1):
        allowed = cone[k - t1 + 1]
        cone[k - t1] = {
            a for a, bs in adj[k].items() if any(b in allowed for b in bs)
        }
    if s1 not in cone[0]:
        return

    prefix = [s1]

    def walk(k: int) -> Iterator[PathWitness]:
        if k == t2:
            yield PathWitness(t1, tuple(prefix))
            return
        allowed = cone[k - t1 + 1]
        for b in adj[k].get(prefix[-1], ()):
            if b in allowed:
                prefix.append(b)
                yield from walk(k + 1)
                prefix.pop()

    yield from walk(t1)


def span_enumerate(d: Diagram, s1: SiteRef, s2: SiteRef) -> Iterator[PathWitness]:
    """Lazily enumerate every whole-diagram trajectory from s1 to s2,
    in lexicographic order (site order = left-to-right leaf order)."""
    _require_site(d, 0, s1, "source site")
    _require_site(d, d.n_steps, s2, "target site")
    return _enumerate(d, 0, s1, d.n_steps, s2)


# ---------------------------------------------------------------------------
# causal order between events

def causally_ordered(d: Diagram, e1: Event, e2: Event) -> bool:
    """Can e1 influence e2? True iff e1.cut <= e2.cut and some
    trajectory connects them. Reflexive by construction; antisymmetric
    because trajectories never move backward in time."""
    check_event(d, e1)
    check_event(d, e2)
    if e1.cut > e2.cut:
        return False
    return e2.site in _reach_fwd(d, e1.cut, e1.site, e2.cut)


def causal_paths(d: Diagram, e1: Event, e2: Event) -> Iterator[PathWitness]:
    """All witnesses that e1 can influence e2, lazily, in lexicographic
    order. Empty when the events are unordered or in reverse order."""
    check_event(d, e1)
    check_event(d, e2)
    if e1.cut > e2.cut:
        return iter(())
    return _enumerate(d, e1.cut, e1.site, e2.cut, e2.site)


def event_order_pairs(d: Diagram) -> set[tuple[Event, Event]]:
    """The full causal order of a diagram as a set of event pairs.

    Agrees pointwise with `causally_ordered`; computed by one forward
    sweep per starting cut instead of one query per pair.
    """
    tables = _tables(d)
    pairs: set[tuple[Event, Event]] = set()
    n = d.n_steps
    for t1, row in enumerate(tables.site_lists):
        reach = {s: {s} for s in row}
        for t2 in range(t1, n + 1):
            for s1 in row:
                pairs.update(
                    (Event(t1, s1), Event(t2, s2)) for s2 in reach[s1]
                )
            if t2 < n:
                adj = tables.adj[t2]
                reach = {
                    s1: {b for a in cur for b in adj.get(a, ())}
                    for s1, cur in reach.items()
                }
    return pairs


# ---------------------------------------------------------------------------
# ticks as events

def tick_events(d: Diagram, ref: TickRef) -> tuple[Event, Event]:
    """The two events a tick touches: its input site at the cut before
    it and its output site at the cut after it. Because a step's tree
    mirrors the configurations it acts on, both sites share the tick's
    tree path."""
    tick_at(d, ref)
    return Event(ref.step, ref.path), Event(ref.step + 1, ref.path)


def action_order(d: Diagram, r1: TickRef, r2: TickRef) -> bool:
    """Did the tick at r1 complete before the tick at r2 could begin?

    True iff the after-event of r1 can influence the before-event of
    r2. Irreflexive: no tick precedes itself.
    """
    _, after = tick_events(d, r1)
    start, _ = tick_events(d, r2)
    return causally_ordered(d, after, start)
