"""From message-passing executions to diagrams and back.

An execution is the classic picture: per-process sequences of actions
plus send/receive pairs between processes. Happens-before is the
transitive closure of process order and message edges; executions
whose closure has a cycle are rejected.

`to_diagram` compiles an execution into a diagram, layer by layer. An
action's layer is one more than the deepest of its direct
predecessors, so every layer holds at most one action per process.
Between layers the configuration carries one site per process plus one
site per message in flight. A layer becomes at most four global steps:

    perm    route each message consumed this layer next to its
            receiver (receiver left, message right) and flush newly
            sent messages into the in-flight zone on the right
    join    fuse receiver and message sites
    tick    run every action of the layer
    fork    split each sender's site, leaving the message behind

so a send is tick-then-fork and a receive is join-then-tick. The
returned tick index maps each action id to its tick, which is enough
to read the happens-before relation back off the diagram.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

from .clocks import Action, Pid
from .diagram import (
    Atom,
    Config,
    Diagram,
    Fork,
    GlobalStep,
    Join,
    Leaf,
    PermStep,
    Prod,
    StateType,
    Tensor,
    Tick,
    TickRef,
    par,
    perm_from_table,
    noop,
    sites,
    tensor,
)
from .paths import action_order
from .serialize import SchemaError, label_value_from_obj, label_value_to_obj

ActionId = str


class CyclicExecutionError(ValueError):
    """Happens-before has a cycle; no schedule can realize this."""


@dataclass(frozen=True)
class Execution:
    """Per-process action sequences, message pairs, and action metadata.

    Action ids are globally unique. A message is a (send, receive) pair
    of action ids on two distinct processes, and every action plays at
    most one message role, so each action is a send, a receive, or
    internal.
    """

    processes: Mapping[Pid, tuple[ActionId, ...]]
    messages: frozenset[tuple[ActionId, ActionId]]
    actions: Mapping[ActionId, Action]

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "processes",
            {p: tuple(acts) for p, acts in self.processes.items()},
        )
        object.__setattr__(self, "messages", frozenset(self.messages))
        object.__setattr__(self, "actions", dict(self.actions))

    def action_ids(self) -> tuple[ActionId, ...]:
        return tuple(a for acts in self.processes.values() for a in acts)


def validate_execution(x: Execution) -> list[str]:
    """Why the execution is malformed; empty when it is well-formed."""
    out = []
    owner: dict[ActionId, Pid] = {}
    for p, acts in sorted(x.processes.items()):
        for a in acts:
            if a in owner:
                out.append(f"action id {a!r} appears twice")
            owner[a] = p
    for a in sorted(set(x.actions) - set(owner)):
        out.append(f"metadata for unknown action {a!r}")
    for a in sorted(set(owner) - set(x.actions)):
        out.append(f"action {a!r} has no metadata")
    roles: dict[ActionId, int] = {}
    for s, r in sorted(x.messages):
        for end in (s, r):
            if end not in owner:
                out.append(f"message endpoint {end!r} is not an action")
            roles[end] = roles.get(end, 0) + 1
        if s in owner and r in owner and owner[s] == owner[r]:
            out.append(f"message {s!r} -> {r!r} stays on process {owner[s]!r}")
    for a, n in sorted(roles.items()):
        if n > 1:
            out.append(f"action {a!r} plays {n} message roles, at most one allowed")
    return out


def _require_valid(x: Execution) -> None:
    faults = validate_execution(x)
    if faults:
        raise ValueError("invalid execution: " + "; ".join(faults))


def hb_closure(x: Execution) -> frozenset[tuple[ActionId, ActionId]]:
    """Happens-before: the transitive closure of process order and
    message edges. Raises CyclicExecutionError when the closure is
    reflexive anywhere."""
    _require_valid(x)
    ids = sorted(x.action_ids())
    index = {a: i for i, a in enumerate(ids)}
    rows = [0] * len(ids)
    for acts in x.processes.values():
        for a, b in zip(acts, acts[1:]):
            rows[index[a]] |= 1 << index[b]
    for s, r in x.messages:
        rows[index[s]] |= 1 << index[r]
    for m in range(len(ids)):
        bit = 1 << m
        row_m = rows[m]
        for i in range(len(ids)):
            if rows[i] & bit:
                rows[i] |= row_m
    for i, a in enumerate(ids):
        if rows[i] >> i & 1:
            raise CyclicExecutionError(f"action {a!r} happens before itself")
    return frozenset(
        (ids[i], ids[j])
        for i, row in enumerate(rows)
        for j in range(len(ids))
        if row >> j & 1
    )


# ---------------------------------------------------------------------------
# compilation

# layout slots: ("proc", pid) or ("msg", (send, recv))
_Slot = tuple[str, Any]


def _proc_type(p: Pid) -> StateType:
    return Atom(str(p))


def _msg_type(m: tuple[ActionId, ActionId]) -> StateType:
    return Atom(f"{m[0]}>{m[1]}")


def _layers(x: Execution) -> dict[int, list[ActionId]]:
    """Layer = 1 + deepest direct predecessor (previous action on the
    process, and the send for a receive)."""
    preds: dict[ActionId, list[ActionId]] = {a: [] for a in x.action_ids()}
    succs: dict[ActionId, list[ActionId]] = {a: [] for a in preds}
    for acts in x.processes.values():
        for a, b in zip(acts, acts[1:]):
            preds[b].append(a)
            succs[a].append(b)
    for s, r in x.messages:
        preds[r].append(s)
        succs[s].append(r)
    layer: dict[ActionId, int] = {}
    missing = {a: len(ps) for a, ps in preds.items()}
    ready = sorted(a for a, n in missing.items() if n == 0)
    while ready:
        a = ready.pop()
        layer[a] = 1 + max((layer[p] for p in preds[a]), default=0)
        for b in succs[a]:
            missing[b] -= 1
            if missing[b] == 0:
                ready.append(b)
    out: dict[int, list[ActionId]] = {}
    for a, lv in layer.items():
        out.setdefault(lv, []).append(a)
    return out


def to_diagram(
    x: Execution,
) -> tuple[Diagram, dict[TickRef, Action], dict[ActionId, TickRef]]:
    """Compile an execution into a labeled diagram plus the index of
    each action's tick. Rejects malformed and cyclic executions."""
    _require_valid(x)
    if not x.processes:
        raise ValueError("an execution needs at least one process to have sites")
    hb_closure(x)  # cycle check
    pids = sorted(x.processes)
    owner = {a: p for p, acts in x.processes.items() for a in acts}
    send_msg = {s: (s, r) for s, r in x.messages}
    recv_msg = {r: (s, r) for s, r in x.messages}
    layers = _layers(x)

    # groups of slots; a group is 1 slot, or (proc, msg) pending a join
    # or just after a fork
    layout: list[list[_Slot]] = [[("proc", p)] for p in pids]
    ty: dict[_Slot, StateType] = {("proc", p): _proc_type(p) for p in pids}

    def flat() -> list[_Slot]:
        return [slot for group in layout for slot in group]

    def group_config(group: list[_Slot]) -> Config:
        return tensor([Leaf(ty[s]) for s in group])

    def config() -> Config:
        return tensor([group_config(g) for g in layout])

    steps: list[GlobalStep] = []
    lab: dict[TickRef, Action] = {}
    tick_index: dict[ActionId, TickRef] = {}

    for lv in sorted(layers):
        acting = {owner[a]: a for a in layers[lv]}
        consumed = {recv_msg[a] for a in layers[lv] if a in recv_msg}

        # perm: receivers get their message on the right; everything
        # else in flight moves to the trailing zone, in current order
        old_cfg = config()
        old_paths = dict(zip(flat(), sites(old_cfg)))
        transit = [s for s in flat() if s[0] == "msg" and s[1] not in consumed]
        layout = [[("proc", p)] for p in pids]
        for p, a in acting.items():
            if a in recv_msg:
                layout[pids.index(p)].append(("msg", recv_msg[a]))
        layout.extend([s] for s in transit)
        new_cfg = config()
        new_paths = dict(zip(flat(), sites(new_cfg)))
        table = {old_paths[s]: new_paths[s] for s in old_paths}
        route = perm_from_table(old_cfg, new_cfg, table)
        if not route.is_identity():
            steps.append(PermStep(route))

        # join: fuse each (receiver, message) pair
        if consumed:
            parts: list[GlobalStep] = []
            for group in layout:
                if len(group) == 2:
                    parts.append(Join(ty[group[0]], ty[group[1]]))
                else:
                    parts.append(noop(group_config(group)))
            steps.append(par(parts))
            for i, p in enumerate(pids):
                group = layout[i]
                if len(group) == 2:
                    ty[group[0]] = Prod(ty[group[0]], ty[group[1]])
                    layout[i] = [group[0]]

        # tick: every action of the layer
        tick_step_index = len(steps)
        cfg = config()
        paths = dict(zip(flat(), sites(cfg)))
        parts = []
        for group in layout:
            slot = group[0]
            kind, key = slot
            if kind == "proc" and key in acting:
                a = acting[key]
                in_ty = ty[slot]
                if a in send_msg:
                    out_ty: StateType = Prod(_proc_type(key), _msg_type(send_msg[a]))
                else:
                    out_ty = _proc_type(key)
                parts.append(Tick(in_ty, out_ty))
                ty[slot] = out_ty
                ref = TickRef(tick_step_index, paths[slot])
                lab[ref] = x.actions[a]
                tick_index[a] = ref
            else:
                parts.append(noop(group_config(group)))
        steps.append(par(parts))

        # fork: each sender leaves its message behind
        sends = [a for a in layers[lv] if a in send_msg]
        if sends:
            parts = []
            for i, group in enumerate(layout):
                slot = group[0]
                kind, key = slot
                if kind == "proc" and acting.get(key) in send_msg:
                    m = send_msg[acting[key]]
                    parts.append(Fork(_proc_type(key), _msg_type(m)))
                    ty[slot] = _proc_type(key)
                    msg_slot: _Slot = ("msg", m)
                    ty[msg_slot] = _msg_type(m)
                    layout[i] = [slot, msg_slot]
                else:
                    parts.append(noop(group_config(group)))
            steps.append(par(parts))

    initial = tensor([Leaf(_proc_type(p)) for p in pids])
    return Diagram(initial, tuple(steps)), lab, tick_index


def derived_order(
    d: Diagram, tick_index: Mapping[ActionId, TickRef]
) -> frozenset[tuple[ActionId, ActionId]]:
    """The order the diagram imposes on the indexed actions: a before b
    iff a's tick can influence b's tick."""
    ids = sorted(tick_index)
    return frozenset(
        (a, b)
        for a in ids
        for b in ids
        if a != b and action_order(d, tick_index[a], tick_index[b])
    )


# ---------------------------------------------------------------------------
# execution JSON
#
#   {"processes": {pid: [action id, ...], ...},
#    "messages": [[send, recv], ...],
#    "actions": {action id: {"actor": pid, "target": pid?}, ...}}

def execution_to_obj(x: Execution) -> dict:
    return {
        "processes": {str(p): list(acts) for p, acts in sorted(x.processes.items())},
        "messages": sorted([s, r] for s, r in x.messages),
        "actions": {
            a: label_value_to_obj(act) for a, act in sorted(x.actions.items())
        },
    }


def execution_from_obj(obj: Any) -> Execution:
    if not isinstance(obj, dict):
        raise SchemaError(f"expected an execution object, got {obj!r}")
    for key in ("processes", "messages", "actions"):
        if key not in obj:
            raise SchemaError(f"execution object lacks {key!r}")
    procs = obj["processes"]
    if not isinstance(procs, dict):
        raise SchemaError(f"processes must be an object, got {procs!r}")
    processes = {}
    for p, acts in procs.items():
        if not isinstance(acts, list) or not all(isinstance(a, str) for a in acts):
            raise SchemaError(f"process {p!r} needs a list of action ids")
        processes[p] = tuple(acts)
    raw_msgs = obj["messages"]
    if not isinstance(raw_msgs, list):
        raise SchemaError(f"messages must be a list, got {raw_msgs!r}")
    messages = set()
    for m in raw_msgs:
        if not isinstance(m, list) or len(m) != 2:
            raise SchemaError(f"message must be a [send, recv] pair, got {m!r}")
        messages.add((m[0], m[1]))
    raw_actions = obj["actions"]
    if not isinstance(raw_actions, dict):
        raise SchemaError(f"actions must be an object, got {raw_actions!r}")
    actions = {}
    for a, meta in raw_actions.items():
        value = label_value_from_obj(meta)
        if not isinstance(value, Action):
            raise SchemaError(f"action {a!r} needs an actor, got {meta!r}")
        actions[a] = value
    return Execution(processes, frozenset(messages), actions)


def execution_from_json(text: str) -> Execution:
    import json

    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"not JSON: {e}") from None
    return execution_from_obj(obj)


# ---------------------------------------------------------------------------
# seeded executions

def gen_execution(
    seed: int,
    max_processes: int = 4,
    max_actions: int = 12,
    message_rate: float = 0.5,
) -> Execution:
    """A random acyclic execution: actions are laid out on a global
    schedule and messages only point forward along it, so
    happens-before embeds in the schedule. Sends target the receiving
    process, receives name the sender, internal actions target their
    own process, so every clock flavor can label the result."""
    import random

    rng = random.Random(seed)
    pids = tuple(f"p{i + 1}" for i in range(rng.randint(1, max_processes)))
    ids = [f"a{i + 1}" for i in range(rng.randint(0, max_actions))]
    owner = {a: rng.choice(pids) for a in ids}
    processes = {p: tuple(a for a in ids if owner[a] == p) for p in pids}
    free = set(ids)
    messages = set()
    for i, a in enumerate(ids):
        if a not in free or rng.random() >= message_rate:
            continue
        later = [b for b in ids[i + 1 :] if b in free and owner[b] != owner[a]]
        if later:
            b = rng.choice(later)
            messages.add((a, b))
            free.discard(a)
            free.discard(b)
    sends = {s: r for s, r in messages}
    recvs = {r: s for s, r in messages}
    actions = {}
    for a in ids:
        if a in sends:
            target = owner[sends[a]]
        elif a in recvs:
            target = owner[recvs[a]]
        else:
            target = owner[a]
        actions[a] = Action(owner[a], target)
    return Execution(processes, frozenset(messages), actions)
