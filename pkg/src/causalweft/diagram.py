"""Inductive diagrams of concurrent executions.

An execution is modeled as a sequence of global steps acting on a
configuration of typed sites. A site is any place state can live: a
process, a thread, a message in flight. Configurations are binary
trees of sites, and each global step is a binary tree of atomic
actions (tick, fork, join, perm) whose shape mirrors the part of the
configuration it touches, so independence is structural: actions in
different branches of the same step cannot interact.

The atomic actions:

    tick    rewrite the state at one site in place
    fork    split one site holding a pair into two sites
    join    fuse two adjacent sites into one holding a pair
    perm    rearrange sites without touching their state

A diagram is a boundary-compatible sequence of such steps. The empty
sequence is the identity. Cuts (the boundaries between steps, numbered
0..N) are the moments of an execution; slicing a diagram at cuts gives
prefixes and windows that are diagrams in their own right.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, reduce
from typing import Iterable, Iterator, Mapping, Sequence, TypeVar

T = TypeVar("T")

# ---------------------------------------------------------------------------
# state types

@dataclass(frozen=True)
class Atom:
    """An opaque named state type."""

    name: str

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("atom name must be nonempty")

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Prod:
    """Two state values held together at a single site."""

    left: "StateType"
    right: "StateType"

    def __str__(self) -> str:
        return f"({self.left} x {self.right})"


StateType = Atom | Prod

# ---------------------------------------------------------------------------
# configurations and sites
#
# A site is addressed by its path from the configuration root: a string
# over {L, R}, empty for the root of a single-leaf configuration. Site
# paths of one configuration are never prefixes of one another, so
# plain lexicographic order on the strings is left-to-right leaf order.

@dataclass(frozen=True)
class Leaf:
    """A single site holding state of the given type."""

    ty: StateType

    def __str__(self) -> str:
        return f"[{self.ty}]"


@dataclass(frozen=True)
class Tensor:
    """Two disjoint halves of a configuration, side by side."""

    left: "Config"
    right: "Config"

    def __str__(self) -> str:
        return f"({self.left} * {self.right})"


Config = Leaf | Tensor

SiteRef = str


def sites(config: Config) -> tuple[SiteRef, ...]:
    """All site paths of a configuration, in left-to-right order."""
    match config:
        case Leaf():
            return ("",)
        case Tensor(left, right):
            return tuple("L" + s for s in sites(left)) + tuple(
                "R" + s for s in sites(right)
            )
    raise TypeError(f"not a configuration: {config!r}")


def n_sites(config: Config) -> int:
    match config:
        case Leaf():
            return 1
        case Tensor(left, right):
            return n_sites(left) + n_sites(right)
    raise TypeError(f"not a configuration: {config!r}")


def subconfig(config: Config, path: str) -> Config:
    """The subtree of a configuration at a (possibly partial) path."""
    node = config
    for c in path:
        if not isinstance(node, Tensor):
            raise ValueError(f"path {path!r} leaves the configuration at {node}")
        if c == "L":
            node = node.left
        elif c == "R":
            node = node.right
        else:
            raise ValueError(f"path {path!r} contains {c!r}, expected L or R")
    return node


def site_type(config: Config, site: SiteRef) -> StateType:
    """The state type at a site. The path must end on a leaf."""
    node = subconfig(config, site)
    if not isinstance(node, Leaf):
        raise ValueError(f"site {site!r} is not a leaf of {config}")
    return node.ty


def tensor(parts: Sequence[Config]) -> Config:
    """Left-nested tensor of one or more configurations."""
    if not parts:
        raise ValueError("a configuration has at least one site")
    return reduce(Tensor, parts)


# ---------------------------------------------------------------------------
# permutations

@dataclass(frozen=True)
class Perm:
    """A type-preserving bijection between the sites of two configurations.

    `pairs` holds (source site, target site) entries sorted by source.
    Use `perm_from_table` to build a checked permutation; instances
    built directly are re-checked by `validate`.
    """

    source: Config
    target: Config
    pairs: tuple[tuple[SiteRef, SiteRef], ...]

    @cached_property
    def table(self) -> dict[SiteRef, SiteRef]:
        return dict(self.pairs)

    def apply(self, site: SiteRef) -> SiteRef:
        return self.table[site]

    def invert(self) -> "Perm":
        return Perm(
            self.target,
            self.source,
            tuple(sorted((t, s) for s, t in self.pairs)),
        )

    def is_identity(self) -> bool:
        return self.source == self.target and all(s == t for s, t in self.pairs)

    def faults(self) -> list[str]:
        """Why this is not a type-preserving bijection; empty if it is."""
        out = []
        src, tgt = set(sites(self.source)), set(sites(self.target))
        seen_src, seen_tgt = set(), set()
        for s, t in self.pairs:
            if s in seen_src:
                out.append(f"source site {s!r} mapped twice")
            if t in seen_tgt:
                out.append(f"target site {t!r} hit twice (not injective)")
            seen_src.add(s)
            seen_tgt.add(t)
        for s in sorted(src - seen_src):
            out.append(f"source site {s!r} unmapped")
        for s in sorted(seen_src - src):
            out.append(f"{s!r} is not a site of the source")
        for t in sorted(tgt - seen_tgt):
            out.append(f"target site {t!r} not hit")
        for t in sorted(seen_tgt - tgt):
            out.append(f"{t!r} is not a site of the target")
        if out:
            return out
        for s, t in self.pairs:
            a, b = site_type(self.source, s), site_type(self.target, t)
            if a != b:
                out.append(f"{s!r}:{a} sent to {t!r}:{b} (type changed)")
        return out


def perm_from_table(
    source: Config, target: Config, table: Mapping[SiteRef, SiteRef]
) -> Perm:
    """Build a permutation, rejecting tables that are not type-preserving
    bijections from the sites of `source` onto the sites of `target`."""
    p = Perm(source, target, tuple(sorted(table.items())))
    faults = p.faults()
    if faults:
        raise ValueError("bad permutation: " + "; ".join(faults))
    return p


def perm_id(config: Config) -> Perm:
    return Perm(config, config, tuple((s, s) for s in sites(config)))


def perm_swap(left: Config, right: Config) -> Perm:
    """left * right  ->  right * left, every site keeping its state."""
    table = {"L" + s: "R" + s for s in sites(left)}
    table.update({"R" + s: "L" + s for s in sites(right)})
    return perm_from_table(Tensor(left, right), Tensor(right, left), table)


def perm_assoc(a: Config, b: Config, c: Config) -> Perm:
    """a * (b * c)  ->  (a * b) * c, every site keeping its state."""
    table = {"L" + s: "LL" + s for s in sites(a)}
    table.update({"RL" + s: "LR" + s for s in sites(b)})
    table.update({"RR" + s: "R" + s for s in sites(c)})
    return perm_from_table(
        Tensor(a, Tensor(b, c)), Tensor(Tensor(a, b), c), table
    )


# ---------------------------------------------------------------------------
# steps

@dataclass(frozen=True)
class Tick:
    """Rewrite the state at one site; the output type is unconstrained."""

    in_ty: StateType
    out_ty: StateType


@dataclass(frozen=True)
class Fork:
    """Split a site holding a pair: [l x r] -> [l] * [r]."""

    left_ty: StateType
    right_ty: StateType


@dataclass(frozen=True)
class Join:
    """Fuse two adjacent sites into a pair: [l] * [r] -> [l x r]."""

    left_ty: StateType
    right_ty: StateType


@dataclass(frozen=True)
class PermStep:
    """Rearrange sites according to a permutation."""

    perm: Perm


@dataclass(frozen=True)
class Par:
    """Two steps running side by side on disjoint halves of the
    configuration."""

    left: "GlobalStep"
    right: "GlobalStep"


GlobalStep = Tick | Fork | Join | PermStep | Par
AtomicStep = Tick | Fork | Join | PermStep


def noop(config: Config) -> PermStep:
    """The step that leaves a configuration alone (identity perm)."""
    return PermStep(perm_id(config))


def step_input(step: GlobalStep) -> Config:
    match step:
        case Tick(in_ty, _):
            return Leaf(in_ty)
        case Fork(l, r):
            return Leaf(Prod(l, r))
        case Join(l, r):
            return Tensor(Leaf(l), Leaf(r))
        case PermStep(perm):
            return perm.source
        case Par(left, right):
            return Tensor(step_input(left), step_input(right))
    raise TypeError(f"not a step: {step!r}")


def step_output(step: GlobalStep) -> Config:
    match step:
        case Tick(_, out_ty):
            return Leaf(out_ty)
        case Fork(l, r):
            return Tensor(Leaf(l), Leaf(r))
        case Join(l, r):
            return Leaf(Prod(l, r))
        case PermStep(perm):
            return perm.target
        case Par(left, right):
            return Tensor(step_output(left), step_output(right))
    raise TypeError(f"not a step: {step!r}")


def par(steps: Sequence[GlobalStep]) -> GlobalStep:
    """Left-nested parallel composition of one or more steps."""
    if not steps:
        raise ValueError("empty parallel composition")
    return reduce(Par, steps)


# ---------------------------------------------------------------------------
# diagrams

@dataclass(frozen=True)
class Diagram:
    """A sequence of global steps whose boundaries chain up.

    `initial` is the configuration before the first step; an empty
    step sequence is the identity on it. Equality is structural.
    """

    initial: Config
    steps: tuple[GlobalStep, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "steps", tuple(self.steps))

    @property
    def n_steps(self) -> int:
        return len(self.steps)

    @property
    def final(self) -> Config:
        return step_output(self.steps[-1]) if self.steps else self.initial


def identity(config: Config) -> Diagram:
    return Diagram(config)


def cut_configs(d: Diagram) -> tuple[Config, ...]:
    """The configuration at every cut 0..N, in order."""
    out = [d.initial]
    for step in d.steps:
        out.append(step_output(step))
    return tuple(out)


def cut_config(d: Diagram, t: int) -> Config:
    """The configuration at cut t (0 = before the first step)."""
    if not 0 <= t <= d.n_steps:
        raise ValueError(f"cut {t} out of range 0..{d.n_steps}")
    return d.initial if t == 0 else step_output(d.steps[t - 1])


# ---------------------------------------------------------------------------
# validation

@dataclass(frozen=True)
class Fault:
    """A typing defect at a step: `path` locates the offending node
    inside the step's tree."""

    step: int
    path: str
    message: str

    def __str__(self) -> str:
        at = self.path if self.path else "."
        return f"step {self.step} at {at}: {self.message}"


def _perm_faults(step: GlobalStep, k: int, path: str) -> list[Fault]:
    match step:
        case Par(left, right):
            return _perm_faults(left, k, path + "L") + _perm_faults(
                right, k, path + "R"
            )
        case PermStep(perm):
            return [Fault(k, path, m) for m in perm.faults()]
        case _:
            return []


def _boundary_faults(have: Config, step: GlobalStep, k: int, path: str) -> list[Fault]:
    if isinstance(step, Par):
        if isinstance(have, Tensor):
            return _boundary_faults(have.left, step.left, k, path + "L") + (
                _boundary_faults(have.right, step.right, k, path + "R")
            )
        return [Fault(k, path, f"parallel step needs a tensor, found {have}")]
    want = step_input(step)
    if have != want:
        return [Fault(k, path, f"step expects {want}, found {have}")]
    return []


def validate(d: Diagram) -> list[Fault]:
    """All typing faults of a diagram, in step order; empty when the
    diagram is well-formed. Checks boundary compatibility between
    consecutive steps and every permutation table."""
    faults: list[Fault] = []
    have = d.initial
    for k, step in enumerate(d.steps):
        faults.extend(_perm_faults(step, k, ""))
        faults.extend(_boundary_faults(have, step, k, ""))
        have = step_output(step)
    return faults


def is_valid(d: Diagram) -> bool:
    return not validate(d)


# ---------------------------------------------------------------------------
# composition

class CompositionError(ValueError):
    """Raised when boundaries do not line up."""


def seq_extend(d: Diagram, step: GlobalStep) -> Diagram:
    """Append one step; its input must equal the diagram's final
    configuration."""
    want = step_input(step)
    if want != d.final:
        raise CompositionError(f"step expects {want}, diagram ends at {d.final}")
    return Diagram(d.initial, d.steps + (step,))


def seq_concat(a: Diagram, b: Diagram) -> Diagram:
    """Run `a`, then `b`; `b.initial` must equal `a.final`."""
    if b.initial != a.final:
        raise CompositionError(
            f"second diagram starts at {b.initial}, first ends at {a.final}"
        )
    return Diagram(a.initial, a.steps + b.steps)


def par_compose(a: Diagram, b: Diagram) -> Diagram:
    """Run `a` and `b` side by side. The shorter one is padded with
    noop steps at its tail, so step k of the result is Par(a_k, b_k)."""
    n = max(a.n_steps, b.n_steps)
    pad_a, pad_b = noop(a.final), noop(b.final)
    steps = tuple(
        Par(
            a.steps[k] if k < a.n_steps else pad_a,
            b.steps[k] if k < b.n_steps else pad_b,
        )
        for k in range(n)
    )
    return Diagram(Tensor(a.initial, b.initial), steps)


# ---------------------------------------------------------------------------
# ticks and labelings
#
# A labeling assigns a value (typically an Action) to every tick of a
# diagram; it is a plain dict keyed by TickRef.

@dataclass(frozen=True, order=True)
class TickRef:
    """One tick occurrence: the step index and the path to the tick
    inside that step's tree."""

    step: int
    path: str


def _collect_ticks(step: GlobalStep, k: int, path: str, out: list[TickRef]) -> None:
    match step:
        case Par(left, right):
            _collect_ticks(left, k, path + "L", out)
            _collect_ticks(right, k, path + "R", out)
        case Tick():
            out.append(TickRef(k, path))
        case _:
            pass


def ticks(d: Diagram) -> tuple[TickRef, ...]:
    """All ticks of a diagram in (step, left-to-right) order."""
    out: list[TickRef] = []
    for k, step in enumerate(d.steps):
        _collect_ticks(step, k, "", out)
    return tuple(out)


def tick_at(d: Diagram, ref: TickRef) -> Tick:
    """Resolve a TickRef to the Tick it names."""
    if not 0 <= ref.step < d.n_steps:
        raise ValueError(f"step {ref.step} out of range 0..{d.n_steps - 1}")
    node: GlobalStep = d.steps[ref.step]
    for c in ref.path:
        if not isinstance(node, Par):
            raise ValueError(f"{ref} leaves the step tree at {node!r}")
        node = node.left if c == "L" else node.right
    if not isinstance(node, Tick):
        raise ValueError(f"{ref} names a {type(node).__name__}, not a tick")
    return node


def tick_labels(d: Diagram, values: Sequence[T]) -> dict[TickRef, T]:
    """Label the ticks of a diagram in canonical order."""
    refs = ticks(d)
    if len(values) != len(refs):
        raise ValueError(f"{len(refs)} ticks, {len(values)} values")
    return dict(zip(refs, values))


def labeling_faults(d: Diagram, lab: Mapping[TickRef, T]) -> list[str]:
    """Totality check: every tick labeled, no stray keys."""
    refs = set(ticks(d))
    out = [f"tick {r} unlabeled" for r in sorted(refs - set(lab))]
    out += [f"label for {r} names no tick" for r in sorted(set(lab) - refs)]
    return out


def restrict_labeling(
    lab: Mapping[TickRef, T], start: int, stop: int
) -> dict[TickRef, T]:
    """Restrict a labeling to steps [start, stop), re-indexed so the
    result labels the window diagram produced by `during`."""
    return {
        TickRef(r.step - start, r.path): v
        for r, v in lab.items()
        if start <= r.step < stop
    }


# ---------------------------------------------------------------------------
# slicing

def during(d: Diagram, t1: int, t2: int) -> Diagram:
    """The window of a diagram between cuts t1 and t2 (t1 <= t2).

    `during(d, t, t)` is the identity on the cut-t configuration, and
    `seq_concat(before(d, t), during(d, t, n))` rebuilds the diagram.
    """
    if not 0 <= t1 <= d.n_steps or not 0 <= t2 <= d.n_steps:
        raise ValueError(f"cuts {t1}..{t2} out of range 0..{d.n_steps}")
    if t1 > t2:
        raise ValueError(f"uninhabited interval: {t1} > {t2}")
    return Diagram(cut_config(d, t1), d.steps[t1:t2])


def before(d: Diagram, t: int) -> Diagram:
    """The prefix of a diagram up to cut t."""
    return during(d, 0, t)
