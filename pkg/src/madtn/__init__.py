"""Multi-agent daisy temporal networks.

Model collaborative tasks as petals of agent-owned actions around a shared
start and end, compile them to simple temporal networks for consistency
checking and scheduling, simulate execution under per-agent behavior
profiles, and score the resulting traces with team-fluency metrics.
"""
from .daisy import (
    Action,
    Agent,
    ConstraintKind,
    Daisy,
    ExternalConstraint,
    HandoffLink,
    Petal,
    build_action,
    build_petal,
    compile_to_stn,
    handoff_constraints,
    validate_daisy,
    validation_warnings,
)
from .errors import (
    AgentCountError,
    CoverageError,
    CyclicPrecedenceError,
    DeadlockError,
    DocumentError,
    EmptyPetalError,
    InconsistentNetworkError,
    InconsistentOrderingError,
    InvalidDaisyError,
    InvertedBoundsError,
    MadtnError,
    MalformedOrderingError,
    MissingTimePointError,
    NegativeDurationError,
    NoCapableAgentError,
    NonHandoffKindError,
    UnassignedPetalError,
    UnboundedScheduleError,
    UnknownAgentError,
    UnknownTimePointError,
)
from .files import (
    GLOBAL_END_TOKEN,
    GLOBAL_START_TOKEN,
    DaisySpecDocument,
    TraceDocument,
    daisy_document,
    dump_document,
    load_daisy,
    load_packaged_example,
    load_trace,
    packaged_example_path,
    parse_daisy,
    parse_profiles,
    parse_trace,
    report_document,
    save_document,
    trace_document,
)
from .fluency import (
    FluencyReport,
    HandoffDelays,
    HandoffState,
    IdleBreakdown,
    PetalDelay,
    activity_intervals,
    agent_idle_time,
    concurrent_activity,
    concurrent_inactivity,
    fluency_report,
    handoff_delays,
    petal_functional_delay,
    window,
)
from .intervals import IntervalSet
from .planner import (
    CapabilityTable,
    PetalPrecedence,
    enumerate_orders,
    greedy_assign,
    linear_extensions,
    partial_order,
)
from .simulate import (
    BehaviorProfile,
    DurationMode,
    ExecutionEvent,
    Trace,
    simulate,
    validate_trace,
)
from .stn import (
    INF,
    STN,
    TOLERANCE,
    UNASSIGNED,
    DistanceGraph,
    Schedule,
    TemporalConstraint,
    TimePoint,
    check_schedule,
    consistent,
    earliest_schedule,
    minimal_network,
    solve,
)
from .cli import run_cli

__version__ = "0.1.0"

__all__ = [
    "Action",
    "Agent",
    "AgentCountError",
    "BehaviorProfile",
    "CapabilityTable",
    "ConstraintKind",
    "CoverageError",
    "CyclicPrecedenceError",
    "Daisy",
    "DaisySpecDocument",
    "DeadlockError",
    "DistanceGraph",
    "DocumentError",
    "DurationMode",
    "EmptyPetalError",
    "ExecutionEvent",
    "ExternalConstraint",
    "FluencyReport",
    "GLOBAL_END_TOKEN",
    "GLOBAL_START_TOKEN",
    "HandoffDelays",
    "HandoffLink",
    "HandoffState",
    "IdleBreakdown",
    "INF",
    "InconsistentNetworkError",
    "InconsistentOrderingError",
    "IntervalSet",
    "InvalidDaisyError",
    "InvertedBoundsError",
    "MadtnError",
    "MalformedOrderingError",
    "MissingTimePointError",
    "NegativeDurationError",
    "NoCapableAgentError",
    "NonHandoffKindError",
    "Petal",
    "PetalDelay",
    "PetalPrecedence",
    "STN",
    "Schedule",
    "TemporalConstraint",
    "TimePoint",
    "TOLERANCE",
    "Trace",
    "TraceDocument",
    "UNASSIGNED",
    "UnassignedPetalError",
    "UnboundedScheduleError",
    "UnknownAgentError",
    "UnknownTimePointError",
    "activity_intervals",
    "agent_idle_time",
    "build_action",
    "build_petal",
    "check_schedule",
    "compile_to_stn",
    "concurrent_activity",
    "concurrent_inactivity",
    "consistent",
    "daisy_document",
    "dump_document",
    "earliest_schedule",
    "enumerate_orders",
    "fluency_report",
    "greedy_assign",
    "handoff_constraints",
    "handoff_delays",
    "linear_extensions",
    "load_daisy",
    "load_packaged_example",
    "load_trace",
    "minimal_network",
    "packaged_example_path",
    "parse_daisy",
    "parse_profiles",
    "parse_trace",
    "partial_order",
    "petal_functional_delay",
    "report_document",
    "run_cli",
    "save_document",
    "simulate",
    "solve",
    "trace_document",
    "validate_daisy",
    "validate_trace",
    "validation_warnings",
    "window",
]
