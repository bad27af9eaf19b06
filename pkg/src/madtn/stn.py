"""Simple temporal networks: representation, consistency, and schedules.

A network is a set of timepoints plus difference constraints
``lower <= time(target) - time(source) <= upper`` (seconds). Solving runs
all-pairs shortest paths over the induced distance graph; a negative cycle
means no schedule exists. Networks are mutable while being built and are
treated as read-only by every solving function, so a built network can be
shared freely across threads.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import (
    InconsistentNetworkError,
    InvertedBoundsError,
    MissingTimePointError,
    UnboundedScheduleError,
    UnknownTimePointError,
)

INF = math.inf

#: Absolute tolerance, in seconds, for every time comparison in the package.
TOLERANCE = 1e-9

#: Owner tag for timepoints that no agent is responsible for.
UNASSIGNED = "unassigned"

_uid_counter = itertools.count()


@dataclass(eq=False)
class TimePoint:
    """A named instant in a temporal network.

    Identity is the object itself: two points built with the same label are
    still distinct timepoints. The ``owner`` tag records which agent is
    responsible for the point; it is metadata only and never affects solving.
    """

    label: str = ""
    owner: str = UNASSIGNED
    uid: int = field(init=False, default_factory=lambda: next(_uid_counter))

    def __repr__(self) -> str:
        return f"TimePoint({self.label!r}, #{self.uid})"


@dataclass(frozen=True)
class TemporalConstraint:
    """Requires ``lower <= time(target) - time(source) <= upper``, in seconds.

    Bounds may be ``-inf`` / ``+inf`` for one-sided constraints. IEEE
    infinities are the extended-real representation throughout the package
    (so ``inf + x == inf`` holds natively); sentinel "large" floats are never
    used.
    """

    source: TimePoint
    target: TimePoint
    lower: float
    upper: float

    def __post_init__(self):
        if math.isnan(self.lower) or math.isnan(self.upper):
            raise InvertedBoundsError(f"constraint bounds may not be NaN: {self}")
        if self.lower > self.upper:
            raise InvertedBoundsError(
                f"lower bound {self.lower} exceeds upper bound {self.upper} "
                f"({self.source.label!r} -> {self.target.label!r})"
            )
        # [inf, inf] and [-inf, -inf] pass lower <= upper but admit no finite
        # difference, so they are rejected alongside inverted bounds.
        if self.lower == INF or self.upper == -INF:
            raise InvertedBoundsError(
                f"bounds [{self.lower}, {self.upper}] admit no finite difference"
            )

    def satisfied_by(self, source_time: float, target_time: float) -> bool:
        diff = target_time - source_time
        return self.lower - TOLERANCE <= diff <= self.upper + TOLERANCE

    def __repr__(self) -> str:
        return (
            f"TemporalConstraint({self.source.label!r} -> {self.target.label!r}, "
            f"[{self.lower}, {self.upper}])"
        )


#: A total assignment of times (seconds) to timepoints.
Schedule = dict[TimePoint, float]


class STN:
    """A simple temporal network under construction.

    The first timepoint added becomes the anchor (the time-zero reference)
    unless another member is designated later.
    """

    def __init__(self):
        self._points: list[TimePoint] = []
        self._members: set[TimePoint] = set()
        self._constraints: list[TemporalConstraint] = []
        self._anchor: TimePoint | None = None

    @property
    def timepoints(self) -> tuple[TimePoint, ...]:
        return tuple(self._points)

    @property
    def constraints(self) -> tuple[TemporalConstraint, ...]:
        return tuple(self._constraints)

    @property
    def anchor(self) -> TimePoint | None:
        return self._anchor

    @anchor.setter
    def anchor(self, point: TimePoint) -> None:
        if point not in self._members:
            raise UnknownTimePointError(f"anchor {point!r} is not a member timepoint")
        self._anchor = point

    def __len__(self) -> int:
        return len(self._points)

    def __contains__(self, point: TimePoint) -> bool:
        return point in self._members

    def add_timepoint(self, label: str = "", owner: str = UNASSIGNED) -> TimePoint:
        """Create a fresh timepoint, add it, and return it."""
        point = TimePoint(label=label, owner=owner)
        self.add_point(point)
        return point

    def add_point(self, point: TimePoint) -> TimePoint:
        """Add an existing timepoint (used when vertices are built elsewhere)."""
        if point in self._members:
            raise ValueError(f"{point!r} is already a member of this network")
        self._points.append(point)
        self._members.add(point)
        if self._anchor is None:
            self._anchor = point
        return point

    def add_constraint(self, constraint: TemporalConstraint) -> None:
        """Record a constraint between two member timepoints.

        Duplicate constraints on the same pair are kept; solving uses their
        intersection.
        """
        for endpoint in (constraint.source, constraint.target):
            if endpoint not in self._members:
                raise UnknownTimePointError(
                    f"constraint endpoint {endpoint!r} is not in the network"
                )
        self._constraints.append(constraint)

    def constrain(
        self, source: TimePoint, target: TimePoint, lower: float, upper: float
    ) -> TemporalConstraint:
        """Convenience wrapper: build and add a constraint in one step."""
        constraint = TemporalConstraint(source, target, lower, upper)
        self.add_constraint(constraint)
        return constraint


@dataclass(frozen=True)
class DistanceGraph:
    """All-pairs tightest bounds ``d(i, j)`` on ``time(j) - time(i)``.

    ``d(i, i) == 0`` for every point exactly when the source network is
    consistent; a negative diagonal entry witnesses a negative cycle.
    """

    points: tuple[TimePoint, ...]
    matrix: np.ndarray

    def __post_init__(self):
        self.matrix.flags.writeable = False

    @property
    def consistent(self) -> bool:
        if len(self.points) == 0:
            return True
        return bool(np.all(np.diagonal(self.matrix) >= -TOLERANCE))

    def _index(self, point: TimePoint) -> int:
        try:
            return self.points.index(point)
        except ValueError:
            raise UnknownTimePointError(f"{point!r} is not in this distance graph")

    def distance(self, source: TimePoint, target: TimePoint) -> float:
        return float(self.matrix[self._index(source), self._index(target)])

    def bounds(self, source: TimePoint, target: TimePoint) -> tuple[float, float]:
        """Tightest implied ``[lower, upper]`` on ``time(target) - time(source)``."""
        i, j = self._index(source), self._index(target)
        lower = -float(self.matrix[j, i]) + 0.0  # +0.0 normalizes -0.0
        upper = float(self.matrix[i, j]) + 0.0
        return lower, upper


def solve(stn: STN) -> DistanceGraph:
    """Propagate all constraints to the all-pairs tightest distance graph.

    Always returns a graph; inspect ``DistanceGraph.consistent`` for the
    verdict. Cubic in the number of timepoints.
    """
    points = stn.timepoints
    n = len(points)
    index = {p: i for i, p in enumerate(points)}
    matrix = np.full((n, n), INF, dtype=float)
    np.fill_diagonal(matrix, 0.0)
    for c in stn.constraints:
        i, j = index[c.source], index[c.target]
        # Edge weights are upper bounds on time(col) - time(row). Overlapping
        # constraints intersect via min. -inf never enters the matrix (a
        # constraint with lower == -inf simply contributes no reverse edge),
        # so inf + x == inf is the only extended-real rule relaxation needs.
        if c.upper < matrix[i, j]:
            matrix[i, j] = c.upper
        if -c.lower < matrix[j, i]:
            matrix[j, i] = -c.lower
    for k in range(n):
        np.minimum(matrix, matrix[:, k : k + 1] + matrix[k : k + 1, :], out=matrix)
    return DistanceGraph(points=points, matrix=matrix)


def minimal_network(stn: STN) -> STN:
    """Rebuild the network with the tightest implied bounds made explicit.

    The result has one constraint per timepoint pair (oriented from the
    earlier-added point to the later-added one), omitting pairs that are
    unconstrained in both directions. It has the same solution set as the
    input, and the operation is idempotent.
    """
    graph = solve(stn)
    if not graph.consistent:
        raise InconsistentNetworkError("cannot minimize an inconsistent network")
    tightened = STN()
    for point in stn.timepoints:
        tightened.add_point(point)
    if stn.anchor is not None:
        tightened.anchor = stn.anchor
    m = graph.matrix
    points = graph.points
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            lower = -float(m[j, i]) + 0.0
            upper = float(m[i, j]) + 0.0
            if lower == -INF and upper == INF:
                continue
            tightened.constrain(points[i], points[j], lower, upper)
    return tightened


def earliest_schedule(stn: STN) -> Schedule:
    """Schedule every timepoint at its minimum feasible time, anchor at 0."""
    if len(stn) == 0:
        return {}
    if stn.anchor is None:
        raise MissingTimePointError("network has no anchor timepoint")
    graph = solve(stn)
    if not graph.consistent:
        raise InconsistentNetworkError("inconsistent network has no schedule")
    anchor_idx = graph.points.index(stn.anchor)
    schedule: Schedule = {}
    for i, point in enumerate(graph.points):
        distance_to_anchor = graph.matrix[i, anchor_idx]
        if distance_to_anchor == INF:
            raise UnboundedScheduleError(
                f"{point!r} has no finite earliest time relative to the anchor"
            )
        schedule[point] = -float(distance_to_anchor) + 0.0
    return schedule


def check_schedule(stn: STN, schedule: Mapping[TimePoint, float]) -> list[TemporalConstraint]:
    """Return every constraint the schedule violates (empty means valid).

    Satisfaction is checked to within ``TOLERANCE`` seconds, boundaries
    inclusive.
    """
    for point in stn.timepoints:
        if point not in schedule:
            raise MissingTimePointError(f"schedule does not assign {point!r}")
    violated = []
    for c in stn.constraints:
        if not c.satisfied_by(schedule[c.source], schedule[c.target]):
            violated.append(c)
    return violated


def consistent(stn: STN) -> bool:
    """Shorthand for ``solve(stn).consistent``."""
    return solve(stn).consistent
