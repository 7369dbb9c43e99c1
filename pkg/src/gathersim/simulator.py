"""Discrete-time semi-synchronous execution engine.

Each step the scheduler wakes a non-empty subset of robots.  Every woken
robot observes the same frozen snapshot of the world, decides via the
protocol, and all resulting motions are committed together; nobody sees a
neighbour's move from the same step.  A fairness bound keeps the scheduler
honest: any robot left asleep for too long gets force-included.

Motion is capped per robot: a move covers min(distance, sigma) along the
straight line to the target, so a single activation may fall short but never
overshoots and never veers.
"""

from __future__ import annotations

import json
import math
import random
import warnings
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Callable, Optional, Sequence

from .geometry import Circle, Point, Tolerance, dist, on_circle, points_coincide, smallest_enclosing_circle
from .model import (
    Configuration,
    DetectionMode,
    Frame,
    ego_frame,
    normalize,
    observe,
    random_frame,
    to_global,
)
from .protocol import (
    MOVE_CAREFUL,
    STAY,
    BranchInfo,
    classify_branch,
    compute_action,
    path_is_clear,
)

_DEFAULT_TOL = Tolerance()

# Scheduler strategies.
SYNCHRONOUS = "synchronous"
ROUND_ROBIN = "round_robin"
RANDOM_SUBSET = "random_subset"
BOUNDARY_ONLY = "boundary_only_adversary"
SCRIPTED = "scripted"
STRATEGIES = (SYNCHRONOUS, ROUND_ROBIN, RANDOM_SUBSET, BOUNDARY_ONLY, SCRIPTED)

# Run outcome statuses.
GATHERED = "gathered"
STEP_LIMIT_REACHED = "step_limit_reached"


@dataclass
class Robot:
    """One robot: identity, true position, motion cap, and its private frame."""

    ident: int
    pos: Point
    sigma: float
    frame: Frame = Frame()

    def __post_init__(self) -> None:
        if not (self.sigma > 0.0 and math.isfinite(self.sigma)):
            raise ValueError(f"robot {self.ident}: sigma must be positive and finite")
        if not (math.isfinite(self.pos.x) and math.isfinite(self.pos.y)):
            raise ValueError(f"robot {self.ident}: position must be finite")


@dataclass
class SimState:
    """World state between steps.  last_active[i] is -1 until robot i wakes."""

    t: int
    robots: list[Robot]
    last_active: list[int]

    def positions(self) -> list[Point]:
        return [r.pos for r in self.robots]


def initial_state(robots: Sequence[Robot]) -> SimState:
    bots = [replace(r) for r in robots]
    if not bots:
        raise ValueError("need at least one robot")
    idents = {r.ident for r in bots}
    if len(idents) != len(bots):
        raise ValueError("robot identifiers must be unique")
    return SimState(0, bots, [-1] * len(bots))


@dataclass(frozen=True)
class SchedulerSpec:
    """How activation sets are produced.

    ``fairness_bound`` is the K in K-fairness: a robot asleep for K
    consecutive steps is force-included.  None means 3n, resolved at run
    time.  ``script`` is only read by the scripted strategy and cycles when
    exhausted.
    """

    strategy: str = SYNCHRONOUS
    seed: int = 0
    fairness_bound: Optional[int] = None
    script: Optional[tuple[tuple[int, ...], ...]] = None

    def __post_init__(self) -> None:
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown scheduler strategy {self.strategy!r}")
        if self.fairness_bound is not None and self.fairness_bound < 1:
            raise ValueError("fairness_bound must be a positive integer")
        if self.strategy == SCRIPTED:
            if not self.script:
                raise ValueError("scripted strategy needs a non-empty script")
            for step_ids in self.script:
                if not step_ids:
                    raise ValueError("every scripted activation set must be non-empty")


def _fairness_bound(spec: SchedulerSpec, n: int) -> int:
    return spec.fairness_bound if spec.fairness_bound is not None else 3 * n


def next_active(
    spec: SchedulerSpec, state: SimState, tol: Tolerance = _DEFAULT_TOL
) -> list[int]:
    """Indices of the robots woken at state.t, sorted ascending.

    Always non-empty.  The random strategy draws from a stream derived only
    from (seed, t), so replaying a state gives the same set without any
    shared RNG object to keep in sync.
    """
    n = len(state.robots)
    t = state.t
    if spec.strategy == SYNCHRONOUS:
        chosen = set(range(n))
    elif spec.strategy == ROUND_ROBIN:
        chosen = {t % n}
    elif spec.strategy == RANDOM_SUBSET:
        rng = random.Random(f"{spec.seed}:scheduler:{t}")
        chosen = {i for i in range(n) if rng.random() < 0.5}
        if not chosen:
            chosen = {rng.randrange(n)}
    elif spec.strategy == BOUNDARY_ONLY:
        # Adversary that starves the interior: only robots currently on the
        # enclosing circle wake up (fairness forcing aside).
        sec = smallest_enclosing_circle(normalize(state.positions(), tol).points())
        chosen = {i for i, r in enumerate(state.robots) if on_circle(r.pos, sec, tol)}
    else:
        assert spec.script is not None
        step_ids = spec.script[t % len(spec.script)]
        chosen = set(step_ids)
        for i in chosen:
            if not (0 <= i < n):
                raise ValueError(f"scripted activation names unknown robot index {i}")
    bound = _fairness_bound(spec, n)
    forced = {i for i in range(n) if t - state.last_active[i] >= bound}
    active = sorted(chosen | forced)
    assert active, "scheduler produced an empty activation set"
    return active


def apply_motion(robot: Robot, target: Point) -> Point:
    """Where the robot ends up after one activation aimed at target.

    Covers min(distance, sigma); a reachable target is returned bit-exactly
    so robots that arrive really do coincide.
    """
    d = dist(robot.pos, target)
    if d <= robot.sigma:
        return target
    f = robot.sigma / d
    return Point(robot.pos.x + f * (target.x - robot.pos.x),
                 robot.pos.y + f * (target.y - robot.pos.y))


@dataclass(frozen=True)
class TraceEvent:
    """One robot's record for one step.

    Asleep robots get activated=False and null branch/action/target.  A
    careful move vetoed by the clear-path rule is recorded as action "stay"
    with no target; the branch still tells you what was attempted.
    """

    t: int
    robot_id: int
    activated: bool
    branch: Optional[str]
    action: Optional[str]
    target: Optional[Point]
    new_pos: Point


def trace_line(event: TraceEvent) -> str:
    """Serialize one event as a canonical JSON line (fixed key order)."""
    return json.dumps(
        {
            "t": event.t,
            "robot_id": event.robot_id,
            "activated": event.activated,
            "branch": event.branch,
            "action": event.action,
            "target_x": None if event.target is None else event.target.x,
            "target_y": None if event.target is None else event.target.y,
            "new_x": event.new_pos.x,
            "new_y": event.new_pos.y,
        },
        separators=(",", ":"),
    )


def _snap_to_occupied(target: Point, config: Configuration, tol: Tolerance) -> Point:
    """Replace a target within eps of an occupied point by that exact point.

    Local-to-global roundtrips leave crumbs of rounding; snapping makes sure
    a robot aiming at an occupied point lands exactly on it, so multiplicity
    actually grows instead of producing eps-separated dust.
    """
    for p in config.occupied:
        if points_coincide(target, p, tol):
            return p
    return target


def step(
    state: SimState,
    active: Sequence[int],
    mode: DetectionMode = DetectionMode.STRONG,
    tol: Tolerance = _DEFAULT_TOL,
) -> tuple[SimState, list[TraceEvent]]:
    """Execute one semi-synchronous step for the given activation set.

    All observations and the clear-path gate read the entry snapshot;
    positions update only at the end.  The careful-move veto also runs on
    the snapshot: the protocol asked under local coordinates, but blocking
    is a fact about the shared world, so it is re-checked globally.
    """
    if not active:
        raise ValueError("activation set must be non-empty")
    active_set = set(active)
    for i in active_set:
        if not (0 <= i < len(state.robots)):
            raise ValueError(f"activation set names unknown robot index {i}")
    config = normalize(state.positions(), tol)
    events: list[TraceEvent] = []
    new_positions: list[Point] = []
    for i, robot in enumerate(state.robots):
        if i not in active_set:
            events.append(TraceEvent(state.t, robot.ident, False, None, None, None, robot.pos))
            new_positions.append(robot.pos)
            continue
        frame = ego_frame(robot.frame, robot.pos)
        view = observe(config, frame, mode)
        action = compute_action(view, Point(0.0, 0.0), mode, tol)
        if action.kind == STAY:
            events.append(TraceEvent(state.t, robot.ident, True, action.branch, STAY, None, robot.pos))
            new_positions.append(robot.pos)
            continue
        assert action.target is not None
        target = _snap_to_occupied(to_global(frame, action.target), config, tol)
        if action.kind == MOVE_CAREFUL and not path_is_clear(config.occupied, robot.pos, target, tol):
            events.append(TraceEvent(state.t, robot.ident, True, action.branch, STAY, None, robot.pos))
            new_positions.append(robot.pos)
            continue
        landed = apply_motion(robot, target)
        events.append(TraceEvent(state.t, robot.ident, True, action.branch, action.kind, target, landed))
        new_positions.append(landed)
    robots = [replace(r, pos=p) for r, p in zip(state.robots, new_positions)]
    last_active = [
        state.t if i in active_set else prev
        for i, prev in enumerate(state.last_active)
    ]
    return SimState(state.t + 1, robots, last_active), events


class StepTransition:
    """Before/after pair for one executed step, handed to runtime monitors.

    The derived geometry (configurations are passed in, circles and branch
    classification are computed here) is cached so several monitors can share
    one computation.
    """

    def __init__(
        self,
        before: SimState,
        after: SimState,
        before_config: Configuration,
        after_config: Configuration,
        events: list[TraceEvent],
        tol: Tolerance,
    ) -> None:
        self.before = before
        self.after = after
        self.before_config = before_config
        self.after_config = after_config
        self.events = events
        self.tol = tol

    @cached_property
    def branch_before(self) -> BranchInfo:
        return classify_branch(self.before_config.occupied, self.tol)

    @cached_property
    def maxima_before(self) -> tuple[Point, ...]:
        return self.branch_before.maxima

    @cached_property
    def maxima_after(self) -> tuple[Point, ...]:
        return classify_branch(self.after_config.occupied, self.tol).maxima

    @cached_property
    def sec_before(self) -> Circle:
        if self.branch_before.sec is not None:
            return self.branch_before.sec
        return smallest_enclosing_circle(self.before_config.points())

    @cached_property
    def sec_after(self) -> Circle:
        return smallest_enclosing_circle(self.after_config.points())


# A monitor is any object with .name and .check(transition) -> list of reports.
MonitorLike = object


@dataclass
class RunOutcome:
    status: str
    final_t: int
    final_config: Configuration
    monitor_violations: list = field(default_factory=list)


def run(
    robots: Sequence[Robot],
    scheduler: SchedulerSpec,
    mode: DetectionMode = DetectionMode.STRONG,
    tol: Tolerance = _DEFAULT_TOL,
    max_steps: Optional[int] = None,
    monitors: Sequence[MonitorLike] = (),
    stop_on_gather: bool = True,
    record_trace: bool = True,
    refresh_frames: bool = False,
    on_step: Optional[Callable[[StepTransition], None]] = None,
) -> tuple[RunOutcome, list[TraceEvent]]:
    """Drive a full run: schedule, step, monitor, repeat.

    Stops as soon as the configuration collapses to one point (unless
    ``stop_on_gather`` is off, which is how stability-after-gathering gets
    exercised) or after max_steps steps, defaulting to 10000 per robot.
    Monitor findings are collected, never raised; a violated invariant is
    data, and stopping the run would hide what happens next.

    ``refresh_frames`` redraws every robot's frame each step from the
    scheduler seed, an adversarial stress mode; the rule is supposed to be
    indifferent to frames, and this flag lets runs prove it.
    """
    state = initial_state(robots)
    n = len(state.robots)
    if n % 2 == 0:
        warnings.warn(
            f"{n} robots: gathering is not guaranteed for even counts",
            RuntimeWarning,
            stacklevel=2,
        )
    if max_steps is None:
        max_steps = 10000 * n
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    trace: list[TraceEvent] = []
    violations: list = []
    config = normalize(state.positions(), tol)
    for _ in range(max_steps):
        if stop_on_gather and config.is_gathered():
            break
        if refresh_frames:
            rng = random.Random(f"{scheduler.seed}:frames:{state.t}")
            state.robots = [replace(r, frame=random_frame(rng)) for r in state.robots]
        active = next_active(scheduler, state, tol)
        before_state, before_config = state, config
        state, events = step(state, active, mode, tol)
        config = normalize(state.positions(), tol)
        if record_trace:
            trace.extend(events)
        if monitors or on_step is not None:
            transition = StepTransition(before_state, state, before_config, config, events, tol)
            for monitor in monitors:
                violations.extend(monitor.check(transition))
            if on_step is not None:
                on_step(transition)
    status = GATHERED if config.is_gathered() else STEP_LIMIT_REACHED
    return RunOutcome(status, state.t, config, violations), trace
