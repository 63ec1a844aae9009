"""Shared fixtures: the worked example diagrams and a generated corpus.

The acceptance tests record one line per criterion; the terminal
summary hook prints them after the run.
"""

from contextlib import contextmanager

import pytest

from causalweft.clocks import Action
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
    noop,
    perm_assoc,
)
from causalweft.verify import GenParams, gen_diagram

A = Atom("A")

# step-kind weight profiles cycled over the corpus, so some diagrams
# are tick-heavy and others are mostly structure
WEIGHT_PROFILES = (
    dict(tick_weight=4.0, fork_weight=2.0, join_weight=2.0, perm_weight=2.0),
    dict(tick_weight=1.0, fork_weight=3.0, join_weight=3.0, perm_weight=1.0),
    dict(tick_weight=2.0, fork_weight=1.0, join_weight=1.0, perm_weight=4.0),
    dict(tick_weight=6.0, fork_weight=1.0, join_weight=1.0, perm_weight=1.0),
)


def corpus_params(seed: int) -> GenParams:
    profile = WEIGHT_PROFILES[seed % len(WEIGHT_PROFILES)]
    return GenParams(seed=seed, max_steps=8, max_sites=6, **profile)


def build_message_flow():
    """One process ticks while another forks off a payload; the payload
    is routed over and joined in: [t1] * [t2 x t3] ends as
    [t1' x t2] * [t3]."""
    t1, t2, t3, t1p = Atom("t1"), Atom("t2"), Atom("t3"), Atom("t1'")
    d = Diagram(
        Tensor(Leaf(t1), Leaf(Prod(t2, t3))),
        (
            Par(Tick(t1, t1p), Fork(t2, t3)),
            PermStep(perm_assoc(Leaf(t1p), Leaf(t2), Leaf(t3))),
            Par(Join(t1p, t2), noop(Leaf(t3))),
        ),
    )
    return d, {TickRef(0, "L"): Action("p1", "p2")}


def build_diamond():
    """fork ; (tick || tick) ; join over [A x A]: two trajectories from
    the initial site to the final one."""
    d = Diagram(
        Leaf(Prod(A, A)),
        (Fork(A, A), Par(Tick(A, A), Tick(A, A)), Join(A, A)),
    )
    return d, {
        TickRef(1, "L"): Action("p1", "p1"),
        TickRef(1, "R"): Action("p2", "p2"),
    }


def build_two_tick():
    d = Diagram(Leaf(A), (Tick(A, A), Tick(A, A)))
    return d, {
        TickRef(0, ""): Action("p1", "p1"),
        TickRef(1, ""): Action("p1", "p1"),
    }


@pytest.fixture
def message_flow():
    return build_message_flow()


@pytest.fixture
def diamond():
    return build_diamond()


@pytest.fixture
def two_tick():
    return build_two_tick()


@pytest.fixture(scope="session")
def corpus():
    return [gen_diagram(corpus_params(seed)) for seed in range(1000)]


@pytest.fixture(scope="session")
def small_corpus(corpus):
    return corpus[:200]


# ---------------------------------------------------------------------------
# acceptance bookkeeping

_acceptance: list[tuple[int, str, bool]] = []


@pytest.fixture
def criterion():
    @contextmanager
    def run(num: int, name: str):
        ok = False
        try:
            yield
            ok = True
        finally:
            _acceptance.append((num, name, ok))

    return run


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for num, name, ok in sorted(_acceptance):
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {num} ({name}): {status}")
