"""Text renderings of diagrams.

Both formats flow top to bottom: earlier cuts above later ones. The
dot rendering is the event graph itself (one node per event, one edge
per step connection, one rank per cut); the ascii rendering prints
each cut as a rule of site columns with the step's actions between.
"""

from __future__ import annotations

from typing import Mapping

from .clocks import Action
from .diagram import (
    Diagram,
    Fork,
    GlobalStep,
    Join,
    Par,
    PermStep,
    Tick,
    TickRef,
    cut_configs,
    sites,
)
from .paths import step_relation


def _q(name: str) -> str:
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _node(cut: int, site: str) -> str:
    return f"{cut}:{site if site else '.'}"


def _action_text(value) -> str:
    if isinstance(value, Action):
        if value.target is None:
            return str(value.actor)
        return f"{value.actor}->{value.target}"
    return str(value)


def to_dot(d: Diagram, lab: Mapping[TickRef, Action] | None = None) -> str:
    """Graphviz source for the event graph. The edge set is exactly the
    union of the per-step relations; tick edges carry their label."""
    tick_edges = {}
    if lab:
        for ref, value in lab.items():
            tick_edges[(ref.step, ref.path, ref.path)] = _action_text(value)
    lines = [
        "digraph diagram {",
        "  rankdir=TB;",
        "  node [shape=box, fontsize=10];",
    ]
    for t, cfg in enumerate(cut_configs(d)):
        row = " ".join(_q(_node(t, s)) + ";" for s in sites(cfg))
        lines.append("  { rank=same; " + row + " }")
    for k, step in enumerate(d.steps):
        for a, b in sorted(step_relation(step)):
            edge = f"  {_q(_node(k, a))} -> {_q(_node(k + 1, b))}"
            label = tick_edges.get((k, a, b))
            if label is not None:
                edge += f" [label={_q(label)}]"
            lines.append(edge + ";")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _step_lines(
    step: GlobalStep, k: int, path: str, lab: Mapping[TickRef, Action] | None
) -> list[str]:
    at = path if path else "."
    match step:
        case Par(left, right):
            return _step_lines(left, k, path + "L", lab) + _step_lines(
                right, k, path + "R", lab
            )
        case Tick(in_ty, out_ty):
            line = f"tick @ {at}: {in_ty} -> {out_ty}"
            if lab and TickRef(k, path) in lab:
                line += f"  ({_action_text(lab[TickRef(k, path)])})"
            return [line]
        case Fork(l, r):
            return [f"fork @ {at}: ({l} x {r}) -> {l} | {r}"]
        case Join(l, r):
            return [f"join @ {at}: {l} | {r} -> ({l} x {r})"]
        case PermStep(perm):
            moved = [(s, t) for s, t in perm.pairs if s != t]
            if not moved:
                return [f"hold @ {at}"]
            routes = ", ".join(f"{s or '.'}->{t or '.'}" for s, t in moved)
            return [f"perm @ {at}: {routes}"]
    raise TypeError(f"not a step: {step!r}")


def to_ascii(d: Diagram, lab: Mapping[TickRef, Action] | None = None) -> str:
    """Plain-text rendering: one rule per cut listing its sites, with
    the step's actions indented between consecutive cuts."""
    cfgs = cut_configs(d)
    out = []
    for t, cfg in enumerate(cfgs):
        out.append(f"---- cut {t} ----")
        out.append("  ".join(f"{s or '.'}={cfg_site}" for s, cfg_site in _columns(cfg)))
        if t < d.n_steps:
            for line in _step_lines(d.steps[t], t, "", lab):
                out.append("    " + line)
    return "\n".join(out) + "\n"


def _columns(cfg):
    from .diagram import site_type

    return [(s, f"[{site_type(cfg, s)}]") for s in sites(cfg)]


def render(
    d: Diagram,
    lab: Mapping[TickRef, Action] | None = None,
    format: str = "dot",
) -> str:
    """Render a diagram as `dot` or `ascii` text."""
    if format == "dot":
        return to_dot(d, lab)
    if format == "ascii":
        return to_ascii(d, lab)
    raise ValueError(f"unknown format {format!r}, expected dot or ascii")
