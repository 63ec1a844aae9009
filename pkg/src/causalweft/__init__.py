"""causalweft: causal diagrams of concurrent executions.

Build executions as sequences of typed global steps over site
configurations, read causal order and its trajectory witnesses off
them, push logical clocks through them, and property-check the lot.
"""

from .diagram import (
    Atom,
    AtomicStep,
    CompositionError,
    Config,
    Diagram,
    Fault,
    Fork,
    GlobalStep,
    Join,
    Leaf,
    Par,
    Perm,
    PermStep,
    Prod,
    SiteRef,
    StateType,
    Tensor,
    Tick,
    TickRef,
    before,
    cut_config,
    cut_configs,
    during,
    identity,
    is_valid,
    labeling_faults,
    n_sites,
    noop,
    par,
    par_compose,
    perm_assoc,
    perm_from_table,
    perm_id,
    perm_swap,
    restrict_labeling,
    seq_concat,
    seq_extend,
    site_type,
    sites,
    step_input,
    step_output,
    subconfig,
    tensor,
    tick_at,
    tick_labels,
    ticks,
    validate,
)
from .paths import (
    Event,
    PathWitness,
    action_order,
    causal_paths,
    causally_ordered,
    check_event,
    compose_witness,
    event_order_pairs,
    events,
    span_count,
    span_enumerate,
    span_reachable,
    step_relation,
    tick_events,
    witness_valid,
)
from .clocks import (
    CLOCK_NAMES,
    Action,
    ClassifierStamp,
    Clock,
    MatrixStamp,
    Pid,
    by_name,
    classifier_clock,
    clock_at,
    rst_clock,
    scalar_clock,
    stamp_from_obj,
    stamp_to_obj,
    timestamp_all,
    update,
    vector_clock,
    wb_clock,
    zero_valuation,
)
from .verify import (
    DEFAULT_ACTIONS,
    GenParams,
    LawFailure,
    LawReport,
    OrderLawReport,
    Violation,
    ViolationReport,
    broken_clock,
    check_clock_condition,
    check_clock_laws,
    check_order_laws,
    check_update_inflationary,
    gen_diagram,
    law_report_to_obj,
    oracle_event_order,
    oracle_reachability,
    order_report_to_obj,
    random_valuation,
    report_to_obj,
)
from .lamport import (
    ActionId,
    CyclicExecutionError,
    Execution,
    derived_order,
    execution_from_json,
    execution_from_obj,
    execution_to_obj,
    gen_execution,
    hb_closure,
    to_diagram,
    validate_execution,
)
from .render import render, to_ascii, to_dot
from .serialize import (
    SchemaError,
    diagram_from_json,
    diagram_from_obj,
    diagram_hash,
    diagram_to_json,
    diagram_to_obj,
    witness_from_obj,
    witness_to_obj,
)

__version__ = "0.1.0"
