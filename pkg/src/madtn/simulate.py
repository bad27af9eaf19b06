"""Discrete-event execution of daisy tasks under agent behavior profiles.

Each agent works through its petals in order, starting every action as soon
as its own hands are free and all enabling work by others is done, plus an
optional reaction delay. Durations are sampled per the agent's profile.
Anticipatory agents may jump the gun on a handoff and begin before the
product is actually available; the resulting trace then violates that
handoff constraint, which is recorded rather than forbidden, since fluency
analysis is about measuring such behavior, not preventing it.

Randomness is reproducible: every agent draws from its own substream keyed
by ``"{seed}/{agent_id}"``, and an agent's draws depend only on its own
action sequence, so traces are identical across runs and platforms for a
given seed and independent of how agents happen to be interleaved in
memory.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

from .daisy import Action, ConstraintKind, Daisy, Petal, compile_to_stn
from .errors import CoverageError, DeadlockError, InconsistentOrderingError
from .stn import STN, TemporalConstraint, TimePoint, check_schedule


class DurationMode(str, Enum):
    """How an action's realized duration is drawn from its bounds."""

    LOWER_BOUND = "lower_bound"
    UNIFORM = "uniform"
    TRUNCATED_NORMAL = "truncated_normal"


@dataclass(frozen=True)
class BehaviorProfile:
    """How one agent behaves during execution.

    ``reaction_delay`` is the largest hesitation before starting an enabled
    action; the realized delay is uniform on ``[0, reaction_delay]``. With
    probability ``anticipation_probability`` an agent starts an action that
    waits on handoffs up to ``anticipation_offset`` seconds before the final
    incoming handoff is actually ready (the exact head start is uniform on
    ``[0, anticipation_offset]``).

    ``mean_fraction`` and ``stddev_fraction`` shape truncated-normal
    duration draws, both as fractions of the bound width: the defaults
    center the bell on the range with a sixth of the width as spread, so
    rejection is rare and the mass hugs the middle. The default profile is
    fully punctual: minimum durations, no hesitation, no anticipation.
    """

    duration_mode: DurationMode = DurationMode.LOWER_BOUND
    reaction_delay: float = 0.0
    anticipation_probability: float = 0.0
    anticipation_offset: float = 0.0
    mean_fraction: float = 0.5
    stddev_fraction: float = 1.0 / 6.0

    def __post_init__(self):
        object.__setattr__(self, "duration_mode", DurationMode(self.duration_mode))
        if self.reaction_delay < 0:
            raise ValueError(f"reaction_delay must be >= 0, got {self.reaction_delay}")
        if not 0.0 <= self.anticipation_probability <= 1.0:
            raise ValueError(
                "anticipation_probability must be in [0, 1], got "
                f"{self.anticipation_probability}"
            )
        if self.anticipation_offset < 0:
            raise ValueError(
                f"anticipation_offset must be >= 0, got {self.anticipation_offset}"
            )
        if not 0.0 <= self.mean_fraction <= 1.0:
            raise ValueError(
                f"mean_fraction must be in [0, 1], got {self.mean_fraction}"
            )
        if self.stddev_fraction < 0:
            raise ValueError(
                f"stddev_fraction must be >= 0, got {self.stddev_fraction}"
            )


@dataclass(frozen=True)
class ExecutionEvent:
    """One executed action as observed in a run: who did what, and when."""

    agent: str
    petal: str
    action: str
    start: float
    end: float

    def __post_init__(self):
        if math.isnan(self.start) or math.isnan(self.end):
            raise ValueError(f"event times may not be NaN: {self.start}, {self.end}")
        if self.start > self.end:
            raise ValueError(
                f"event for {self.petal}.{self.action} ends at {self.end} "
                f"before it starts at {self.start}"
            )


@dataclass(frozen=True)
class Trace:
    """A complete execution record: every event, in non-decreasing start order.

    ``agents`` is the roster the run involved (including agents that never
    acted), ``seed`` reproduces the run, and ``feasible`` says whether the
    realized times satisfy every constraint of the compiled network. Traces
    of anticipatory runs are typically infeasible by design.
    """

    events: tuple[ExecutionEvent, ...]
    agents: tuple[str, ...]
    seed: int
    feasible: bool
    start_time: float = 0.0

    @property
    def end_time(self) -> float:
        return max((e.end for e in self.events), default=self.start_time)

    @property
    def makespan(self) -> float:
        return self.end_time - self.start_time

    def events_of(self, agent_id: str) -> tuple[ExecutionEvent, ...]:
        return tuple(e for e in self.events if e.agent == agent_id)

    def event_of(self, petal: str, action: str) -> ExecutionEvent:
        for e in self.events:
            if e.petal == petal and e.action == action:
                return e
        raise KeyError(f"no event for action {petal}.{action} in trace")

    def time_of(self, petal: str, action: str, kind: str) -> float:
        event = self.event_of(petal, action)
        if kind == "start":
            return event.start
        if kind == "end":
            return event.end
        raise KeyError(f"event side must be 'start' or 'end', got {kind!r}")


def simulate(
    daisy: Daisy,
    profiles: Mapping[str, BehaviorProfile] | None = None,
    seed: int = 0,
    ordering: Sequence[str] | None = None,
    transition_lower: float | Mapping[str, float] = 0.0,
) -> Trace:
    """Execute a fully assigned daisy once and return the trace.

    Agents missing from ``profiles`` run the punctual default. ``ordering``
    and ``transition_lower`` mean the same as in ``compile_to_stn``; the
    same values must be passed to ``validate_trace`` for a meaningful
    feasibility verdict (simulate applies them itself for the ``feasible``
    flag it stores).

    Raises ``DeadlockError`` when cross-petal waits form a cycle that no
    execution order can break.
    """
    stn = compile_to_stn(daisy, ordering=ordering, transition_lower=transition_lower)
    profiles = dict(profiles or {})
    order = [p.name for p in daisy.petals] if ordering is None else list(ordering)

    queues: dict[str, list[tuple[Petal, Action]]] = {a.id: [] for a in daisy.agents}
    for name in order:
        petal = daisy.petal(name)
        for action in petal.actions:
            queues[petal.owner].append((petal, action))

    gates = _start_gates(daisy)
    rngs = {a.id: random.Random(f"{seed}/{a.id}") for a in daisy.agents}
    next_index = {a.id: 0 for a in daisy.agents}
    free_time = {a.id: 0.0 for a in daisy.agents}
    started: dict[int, float] = {}  # id(action) -> realized start
    ended: dict[int, float] = {}
    events: list[ExecutionEvent] = []
    agent_ids = sorted(queues)

    def ready(agent_id: str) -> bool:
        queue = queues[agent_id]
        i = next_index[agent_id]
        if i >= len(queue):
            return False
        _, action = queue[i]
        return all(
            id(gate.source_action) in ended
            for gate in gates.get(id(action), ())
        )

    while True:
        progressed = False
        for agent_id in agent_ids:
            while ready(agent_id):
                i = next_index[agent_id]
                petal, action = queues[agent_id][i]
                _run_action(
                    agent_id,
                    petal,
                    action,
                    first=i == 0,
                    new_petal=i > 0 and queues[agent_id][i - 1][0] is not petal,
                    gates=gates.get(id(action), ()),
                    profile=profiles.get(agent_id) or BehaviorProfile(),
                    rng=rngs[agent_id],
                    transition_lower=transition_lower,
                    free_time=free_time,
                    started=started,
                    ended=ended,
                    events=events,
                )
                next_index[agent_id] += 1
                progressed = True
        if not progressed:
            break

    stuck = [a for a in agent_ids if next_index[a] < len(queues[a])]
    if stuck:
        raise DeadlockError(_waiting_cycle(queues, next_index, gates, ended))

    events.sort(key=lambda e: (e.start, e.end))  # stable: ties keep causal order
    trace = Trace(
        events=tuple(events),
        agents=tuple(a.id for a in daisy.agents),
        seed=seed,
        feasible=True,
    )
    violations = _temporal_violations(daisy, stn, trace)
    if violations:
        trace = Trace(
            events=trace.events,
            agents=trace.agents,
            seed=seed,
            feasible=False,
        )
    return trace


@dataclass(frozen=True)
class _Gate:
    """An incoming wait on another action: start after its vertex plus lower."""

    source_action: Action
    source_kind: str  # which vertex of the source action gates us
    lower: float
    is_handoff: bool


def _start_gates(daisy: Daisy) -> dict[int, tuple[_Gate, ...]]:
    """Map each action (by id) to the cross-action waits on its start vertex.

    Only constraints with a non-negative lower bound whose source is an
    action vertex can hold an action back during execution; constraints
    targeting end vertices or bounding from above cannot be honored by a
    causal scheduler and are left to trace validation instead.
    """
    out: dict[int, list[_Gate]] = {}
    for c in daisy.constraints:
        if c.lower < 0:
            continue
        target_at = daisy.locate(c.target)
        if target_at is None or target_at[2] != "start":
            continue
        source_at = daisy.locate(c.source)
        if source_at is None:
            continue  # the global start contributes nothing past time zero
        gate = _Gate(
            source_action=source_at[1],
            source_kind=source_at[2],
            lower=c.lower,
            is_handoff=c.kind is ConstraintKind.HANDOFF,
        )
        out.setdefault(id(target_at[1]), []).append(gate)
    return {key: tuple(value) for key, value in out.items()}


def _run_action(
    agent_id: str,
    petal: Petal,
    action: Action,
    first: bool,
    new_petal: bool,
    gates: tuple[_Gate, ...],
    profile: BehaviorProfile,
    rng: random.Random,
    transition_lower: float | Mapping[str, float],
    free_time: dict[str, float],
    started: dict[int, float],
    ended: dict[int, float],
    events: list[ExecutionEvent],
) -> None:
    # Repositioning cost applies when the agent switches petals, never
    # between back-to-back actions of the same petal.
    gap = 0.0
    if new_petal and not first:
        if isinstance(transition_lower, Mapping):
            gap = float(transition_lower.get(agent_id, 0.0))
        else:
            gap = float(transition_lower)

    base = free_time[agent_id] + gap

    handoff_ready = None
    other_waits = []
    for gate in gates:
        source_time = (
            ended[id(gate.source_action)]
            if gate.source_kind == "end"
            else started[id(gate.source_action)]
        )
        if gate.is_handoff:
            # Handoff lowers are zero by validation; the product exists at
            # the source end time. Anticipation acts on the last of these.
            if handoff_ready is None or source_time > handoff_ready:
                handoff_ready = source_time
        else:
            other_waits.append(source_time + gate.lower)

    # Fixed per-action draw order keeps substreams aligned: anticipation
    # trigger, head start, reaction, duration. Draws that cannot matter are
    # skipped entirely rather than consumed.
    if handoff_ready is not None and profile.anticipation_probability > 0:
        if rng.random() < profile.anticipation_probability:
            head_start = (
                rng.uniform(0.0, profile.anticipation_offset)
                if profile.anticipation_offset > 0
                else 0.0
            )
            handoff_ready -= head_start

    enabled = base
    if handoff_ready is not None:
        enabled = max(enabled, handoff_ready)
    for wait in other_waits:
        enabled = max(enabled, wait)

    reaction = (
        rng.uniform(0.0, profile.reaction_delay) if profile.reaction_delay > 0 else 0.0
    )
    start = enabled + reaction
    duration = _draw_duration(action, profile, rng)
    end = start + duration

    started[id(action)] = start
    ended[id(action)] = end
    free_time[agent_id] = end
    events.append(
        ExecutionEvent(agent=agent_id, petal=petal.name, action=action.name,
                       start=start, end=end)
    )


def _draw_duration(
    action: Action, profile: BehaviorProfile, rng: random.Random
) -> float:
    lower, upper = action.lower, action.upper
    mode = profile.duration_mode
    # Unbounded or degenerate ranges leave nothing to sample.
    if mode is DurationMode.LOWER_BOUND or upper == lower or upper == float("inf"):
        return lower
    if mode is DurationMode.UNIFORM:
        return rng.uniform(lower, upper)
    width = upper - lower
    mean = lower + profile.mean_fraction * width
    sd = profile.stddev_fraction * width
    if sd == 0:
        return mean
    while True:
        value = rng.gauss(mean, sd)
        if lower <= value <= upper:
            return value


def _waiting_cycle(
    queues: dict[str, list[tuple[Petal, Action]]],
    next_index: dict[str, int],
    gates: dict[int, tuple[_Gate, ...]],
    ended: dict[int, float],
) -> list[str]:
    """Describe the wait-for loop among unscheduled actions."""
    pending: dict[int, tuple[str, Petal, Action]] = {}
    predecessor: dict[int, Action] = {}
    for agent_id, queue in queues.items():
        for i in range(next_index[agent_id], len(queue)):
            petal, action = queue[i]
            pending[id(action)] = (agent_id, petal, action)
            if i > next_index[agent_id]:
                predecessor[id(action)] = queue[i - 1][1]

    def waits_on(action: Action) -> list[Action]:
        out = [
            g.source_action
            for g in gates.get(id(action), ())
            if id(g.source_action) not in ended
        ]
        if id(action) in predecessor:
            out.append(predecessor[id(action)])
        return out

    state: dict[int, int] = {}
    stack: list[Action] = []

    def visit(action: Action) -> list[Action] | None:
        state[id(action)] = 1
        stack.append(action)
        for nxt in waits_on(action):
            if state.get(id(nxt), 0) == 1:
                names = stack[[id(s) for s in stack].index(id(nxt)) :]
                return names + [nxt]
            if state.get(id(nxt), 0) == 0:
                found = visit(nxt)
                if found is not None:
                    return found
        stack.pop()
        state[id(action)] = 2
        return None

    for _, _, action in pending.values():
        if state.get(id(action), 0) == 0:
            found = visit(action)
            if found is not None:
                return [f"{pending[id(a)][1].name}.{a.name}" for a in found]
    # No cycle among gates: some wait references work that never runs.
    return sorted(f"{petal.name}.{action.name}" for _, petal, action in pending.values())


def validate_trace(
    daisy: Daisy,
    trace: Trace,
    ordering: Sequence[str] | None = None,
    transition_lower: float | Mapping[str, float] = 0.0,
) -> list[TemporalConstraint]:
    """Check a trace against the compiled network; return violated constraints.

    Structural problems raise immediately: events out of time order raise
    ``InconsistentOrderingError``, and a trace that does not cover the task's
    actions exactly once each raises ``CoverageError``. Temporal violations
    (a handoff consumed before it was produced, a blown deadline, a duration
    outside its bounds) are returned as the violated constraints, empty for
    a feasible trace.
    """
    stn = compile_to_stn(daisy, ordering=ordering, transition_lower=transition_lower)
    return _temporal_violations(daisy, stn, trace)


def _temporal_violations(daisy: Daisy, stn: STN, trace: Trace) -> list[TemporalConstraint]:
    for before, after in zip(trace.events, trace.events[1:]):
        if after.start < before.start:
            raise InconsistentOrderingError(
                f"trace events are not in start order: {after} follows {before}"
            )

    expected: dict[tuple[str, str], Action] = {}
    for petal in daisy.petals:
        for action in petal.actions:
            expected[(petal.name, action.name)] = action

    schedule: dict[TimePoint, float] = {}
    seen: set[tuple[str, str]] = set()
    extra: list[str] = []
    for event in trace.events:
        key = (event.petal, event.action)
        if key not in expected or key in seen:
            extra.append(f"{event.petal}.{event.action}")
            continue
        owner = daisy.petal(event.petal).owner
        if event.agent != owner:
            extra.append(f"{event.petal}.{event.action} (agent {event.agent!r})")
            continue
        seen.add(key)
        schedule[expected[key].start] = event.start
        schedule[expected[key].end] = event.end
    missing = [f"{petal}.{action}" for (petal, action) in expected if (petal, action) not in seen]
    if missing or extra:
        raise CoverageError(missing=tuple(missing), extra=tuple(extra))

    schedule[daisy.start] = trace.start_time
    schedule[daisy.end] = trace.end_time
    return check_schedule(stn, schedule)
