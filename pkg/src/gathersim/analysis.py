"""Verification machinery around the simulator.

Three kinds of tools live here:

* brute-force oracles (exhaustive smallest-circle search, sector and hull
  cross-checks) used to validate the fast geometry,
* runtime monitors that watch every step of a run for a violated invariant,
* harnesses: randomized sweeps and the even-count livelock witness.

Monitors record and continue.  A violation is evidence, and aborting the run
would destroy the rest of the trace that explains it.
"""

from __future__ import annotations

import math
import random
import warnings
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Mapping, Optional, Sequence

from .geometry import (
    CONCAVE,
    STRAIGHT,
    Circle,
    DegenerateHull,
    Point,
    Tolerance,
    convex_hull,
    dist,
    hull_boundary_contains,
    make_sector_pair,
    on_circle,
    points_coincide,
    sector_contains,
    smallest_enclosing_circle,
    strictly_inside_circle,
)
from .model import Configuration, Frame, normalize, random_frame
from .protocol import BRANCH_BOUNDARY_TO_CENTER
from .simulator import (
    GATHERED,
    Robot,
    RunOutcome,
    SchedulerSpec,
    StepTransition,
    run,
)

_DEFAULT_TOL = Tolerance()

_ORACLE_LIMIT = 15
# Absolute slack for the oracle's enclosure test; far below the 1e-9 the
# oracle is later compared at, far above circumcenter rounding.
_ORACLE_SLACK = 1e-12


@dataclass
class MonitorReport:
    """One finding: which monitor, where, and what it saw.

    Pass reports (violation False) carry no snapshot; only actual violations
    keep the offending configuration around.
    """

    monitor: str
    step: Optional[int]
    description: str
    snapshot: Optional[Configuration] = None
    violation: bool = True


@dataclass(frozen=True)
class Monitor:
    """Named per-transition rule; check() returns violations only."""

    name: str
    rule: Callable[[StepTransition], Optional[str]]

    def check(self, transition: StepTransition) -> list[MonitorReport]:
        message = self.rule(transition)
        if message is None:
            return []
        return [
            MonitorReport(
                self.name, transition.before.t, message, transition.after_config
            )
        ]


# ---------------------------------------------------------------------------
# Brute-force oracles


def brute_force_sec(points: Sequence[Point]) -> Circle:
    """Exhaustive smallest enclosing circle, for cross-checking only.

    Tries every pair-diameter circle and every triple circumcircle, keeps the
    smallest one that encloses the whole set.  Cubic-ish and proud of it;
    refuses more than 15 points.
    """
    pts = list(points)
    if not pts:
        raise ValueError("brute_force_sec needs at least one point")
    if len(pts) > _ORACLE_LIMIT:
        raise ValueError(f"oracle is limited to {_ORACLE_LIMIT} points, got {len(pts)}")
    if len(set(pts)) != len(pts):
        raise ValueError("points must be pairwise distinct")
    if len(pts) == 1:
        return Circle(pts[0], 0.0)
    best: Optional[Circle] = None
    for a, b in combinations(pts, 2):
        cand = _midpoint_circle(a, b)
        if _oracle_encloses(cand, pts) and (best is None or cand.radius < best.radius):
            best = cand
    for a, b, c in combinations(pts, 3):
        cand = _bisector_circumcircle(a, b, c)
        if cand is None:
            continue
        if _oracle_encloses(cand, pts) and (best is None or cand.radius < best.radius):
            best = cand
    assert best is not None, "every finite point set has an enclosing circle"
    return best


def _midpoint_circle(a: Point, b: Point) -> Circle:
    center = Point((a.x + b.x) / 2.0, (a.y + b.y) / 2.0)
    return Circle(center, max(dist(center, a), dist(center, b)))


def _bisector_circumcircle(a: Point, b: Point, c: Point) -> Optional[Circle]:
    """Circumcircle via the two perpendicular-bisector equations.

    Deliberately a different formula from the fast path, so the oracle and
    the implementation cannot share a bug.
    """
    a11 = 2.0 * (b.x - a.x)
    a12 = 2.0 * (b.y - a.y)
    a21 = 2.0 * (c.x - a.x)
    a22 = 2.0 * (c.y - a.y)
    r1 = b.x * b.x + b.y * b.y - a.x * a.x - a.y * a.y
    r2 = c.x * c.x + c.y * c.y - a.x * a.x - a.y * a.y
    det = a11 * a22 - a12 * a21
    if det == 0.0:
        return None
    x = (r1 * a22 - r2 * a12) / det
    y = (a11 * r2 - a21 * r1) / det
    center = Point(x, y)
    return Circle(center, max(dist(center, a), dist(center, b), dist(center, c)))


def _oracle_encloses(circle: Circle, pts: Sequence[Point]) -> bool:
    return all(dist(p, circle.center) <= circle.radius + _ORACLE_SLACK for p in pts)


def check_radius_decrease(
    points: Sequence[Point], lam: float, tol: Tolerance = _DEFAULT_TOL
) -> bool:
    """Shrink test: pull every boundary point inward, did the circle shrink?

    Moves each point on the enclosing circle toward the center by fraction
    ``lam`` of its distance, leaves interior points alone, and compares the
    radii.  True means strictly smaller.
    """
    if not (0.0 < lam <= 1.0):
        raise ValueError("lam must be in (0, 1]")
    pts = list(dict.fromkeys(points))
    if len(pts) < 2:
        raise ValueError("need at least two distinct points")
    before = smallest_enclosing_circle(pts)
    if before.radius <= tol.eps:
        raise ValueError("points are effectively all at one spot")
    cx, cy = before.center
    moved: list[Point] = []
    for p in pts:
        if on_circle(p, before, tol):
            moved.append(Point(p.x + lam * (cx - p.x), p.y + lam * (cy - p.y)))
        else:
            moved.append(p)
    after = smallest_enclosing_circle(list(dict.fromkeys(moved)))
    return after.radius < before.radius


def check_concave_sectors_occupied(
    points: Sequence[Point], tol: Tolerance = _DEFAULT_TOL
) -> MonitorReport:
    """Every concave sector at the enclosing-circle center must be occupied.

    For each pair of input points that cuts a valid sector pair at the
    center, an empty concave (wider than half-turn) sector would mean the
    circle could have been smaller, so finding one indicts the geometry.
    Reports the first offender, or a pass.
    """
    name = "concave_sector_occupancy"
    pts = list(points)
    if len(pts) < 2:
        raise ValueError("need at least two points")
    sec = smallest_enclosing_circle(pts)
    if sec.radius <= tol.eps:
        return MonitorReport(name, None, "degenerate circle, nothing to check", violation=False)
    center = sec.center
    pairs_checked = 0
    for p, pp in combinations(pts, 2):
        if points_coincide(p, center, tol) or points_coincide(pp, center, tol):
            continue
        pair = make_sector_pair(p, pp, center, tol)
        if pair is None:
            continue
        pairs_checked += 1
        for which, kind in ((1, pair.kind1), (2, pair.kind2)):
            if kind != CONCAVE:
                continue
            if not any(sector_contains(pair, which, q, tol) for q in pts):
                return MonitorReport(
                    name,
                    None,
                    f"empty concave sector at center {center} for pair {p}, {pp}",
                    normalize(pts, tol),
                )
    return MonitorReport(
        name, None, f"all concave sectors occupied over {pairs_checked} pairs", violation=False
    )


def check_hull_sector_equivalence(
    points: Sequence[Point], probe: Point, tol: Tolerance = _DEFAULT_TOL
) -> bool:
    """Hull membership vs. empty wide sectors, checked as a biconditional.

    A probe lies on the hull boundary exactly when some pair of input points
    cuts an empty concave-or-straight sector at it.  The equivalence is a
    fact about probes on or inside the hull; strictly outside, an empty wide
    sector can exist even though the probe is off the hull, so feed this
    hull-interior or boundary probes (the simulator only ever cares about
    circle centers, which satisfy that).
    """
    hull = convex_hull(points, tol)
    if isinstance(hull, DegenerateHull):
        raise ValueError("hull equivalence needs a non-collinear point set")
    on_hull = hull_boundary_contains(hull, probe, tol)
    return on_hull == _empty_wide_sector_exists(points, probe, tol)


def _empty_wide_sector_exists(
    points: Sequence[Point], probe: Point, tol: Tolerance
) -> bool:
    pts = list(points)
    anchors = [p for p in pts if not points_coincide(p, probe, tol)]
    for r, rp in combinations(anchors, 2):
        pair = make_sector_pair(r, rp, probe, tol)
        if pair is None:
            continue
        for which, kind in ((1, pair.kind1), (2, pair.kind2)):
            if kind not in (CONCAVE, STRAIGHT):
                continue
            if not any(sector_contains(pair, which, q, tol) for q in pts):
                return True
    return False


def check_sec_points_on_hull(
    points: Sequence[Point], tol: Tolerance = _DEFAULT_TOL
) -> bool:
    """Input points on the enclosing circle must all be hull-boundary points."""
    pts = list(points)
    if len(pts) < 2:
        raise ValueError("need at least two points")
    sec = smallest_enclosing_circle(pts)
    hull = convex_hull(pts, tol)
    return all(
        hull_boundary_contains(hull, p, tol)
        for p in pts
        if on_circle(p, sec, tol)
    )


# ---------------------------------------------------------------------------
# Runtime monitors


def _closure_rule(tr: StepTransition) -> Optional[str]:
    if not tr.before_config.is_gathered():
        return None
    if not tr.after_config.is_gathered():
        return f"gathering point split into {len(tr.after_config.occupied)} points"
    before_p = next(iter(tr.before_config.occupied))
    after_p = next(iter(tr.after_config.occupied))
    if not points_coincide(before_p, after_p, tr.tol):
        return f"gathering point drifted from {before_p} to {after_p}"
    return None


def _unique_max_rule(tr: StepTransition) -> Optional[str]:
    if len(tr.maxima_before) != 1:
        return None
    after = tr.maxima_after
    if len(after) != 1:
        return f"unique maximum gave way to {len(after)} maxima"
    if not points_coincide(tr.maxima_before[0], after[0], tr.tol):
        return f"unique maximum moved from {tr.maxima_before[0]} to {after[0]}"
    return None


def _two_max_rule(tr: StepTransition) -> Optional[str]:
    if len(tr.maxima_before) != 2:
        return None
    if len(tr.maxima_after) > 2:
        return f"two maxima escalated to {len(tr.maxima_after)}"
    return None


def _inside_rule(tr: StepTransition) -> Optional[str]:
    if len(tr.maxima_before) < 3 or len(tr.maxima_after) < 3:
        return None
    for before_bot, after_bot in zip(tr.before.robots, tr.after.robots):
        if not strictly_inside_circle(before_bot.pos, tr.sec_before, tr.tol):
            continue
        if not strictly_inside_circle(after_bot.pos, tr.sec_after, tr.tol):
            return (
                f"robot {before_bot.ident} was strictly inside the circle "
                f"and ended on or outside the new one"
            )
    return None


def _center_containment_rule(tr: StepTransition) -> Optional[str]:
    info = tr.branch_before
    if info.label != BRANCH_BOUNDARY_TO_CENTER:
        return None
    assert info.sec is not None
    center = info.sec.center
    # Hypothesis 1: some robot standing on the circle actually moved.
    moved_from_boundary = False
    boundary_set = set(info.boundary)
    for before_bot, after_bot in zip(tr.before.robots, tr.after.robots):
        if points_coincide(before_bot.pos, after_bot.pos, tr.tol):
            continue
        if any(points_coincide(before_bot.pos, b, tr.tol) for b in boundary_set):
            moved_from_boundary = True
            break
    if not moved_from_boundary:
        return None
    # Hypothesis 2: every boundary point keeps at least one robot that did
    # not arrive at the center this step.
    for b in info.boundary:
        holders = [
            i
            for i, bot in enumerate(tr.before.robots)
            if points_coincide(bot.pos, b, tr.tol)
        ]
        if holders and all(
            points_coincide(tr.after.robots[i].pos, center, tr.tol) for i in holders
        ):
            return None
    if not strictly_inside_circle(center, tr.sec_after, tr.tol):
        return "old center is not strictly inside the new enclosing circle"
    return None


def _radius_rule(tr: StepTransition) -> Optional[str]:
    if len(tr.maxima_before) < 3:
        return None
    before_r = tr.sec_before.radius
    after_r = tr.sec_after.radius
    if after_r > before_r + tr.tol.eps:
        return f"enclosing radius grew from {before_r} to {after_r}"
    # When every robot has left the old circle's rim, the new circle must be
    # strictly smaller; everything now sits measurably deeper than the rim.
    vacated = all(
        not on_circle(bot.pos, tr.sec_before, tr.tol) for bot in tr.after.robots
    )
    if vacated and not (after_r < before_r):
        return f"rim fully vacated but radius held at {after_r}"
    return None


def _careful_separation_rule(tr: StepTransition) -> Optional[str]:
    if len(tr.maxima_before) > 2:
        return None
    maxima = tr.maxima_before
    bots_b = tr.before.robots
    bots_a = tr.after.robots
    for i in range(len(bots_b)):
        for j in range(i + 1, len(bots_b)):
            if points_coincide(bots_b[i].pos, bots_b[j].pos, tr.tol):
                continue
            if not points_coincide(bots_a[i].pos, bots_a[j].pos, tr.tol):
                continue
            if any(points_coincide(bots_a[i].pos, m, tr.tol) for m in maxima):
                continue
            return (
                f"robots {bots_b[i].ident} and {bots_b[j].ident} merged at "
                f"{bots_a[i].pos}, which is not a maximum point"
            )
    return None


MONITOR_RULES: dict[str, Callable[[StepTransition], Optional[str]]] = {
    "closure": _closure_rule,
    "unique_max_persistence": _unique_max_rule,
    "two_max_no_escalation": _two_max_rule,
    "inside_stays_inside": _inside_rule,
    "center_containment": _center_containment_rule,
    "radius_progress": _radius_rule,
    "careful_separation": _careful_separation_rule,
}


def attach_lemma_monitors(
    toggles: Optional[Mapping[str, bool]] = None,
) -> list[Monitor]:
    """The full monitor battery, optionally filtered by a toggle map.

    Unknown toggle names are rejected rather than ignored; a silently
    dropped monitor is exactly the failure mode monitors exist to prevent.
    """
    if toggles:
        unknown = set(toggles) - set(MONITOR_RULES)
        if unknown:
            raise ValueError(f"unknown monitor names: {sorted(unknown)}")
    return [
        Monitor(name, rule)
        for name, rule in MONITOR_RULES.items()
        if toggles is None or toggles.get(name, True)
    ]


# ---------------------------------------------------------------------------
# Randomized harnesses


def random_point_set(
    rng: random.Random, k: int, tol: Tolerance = _DEFAULT_TOL
) -> list[Point]:
    """k points uniform in the unit square, pairwise farther than 10*eps.

    The resampling keeps randomized suites away from predicate knife-edges;
    deliberately degenerate inputs get their own deterministic tests.
    """
    min_sep = 10.0 * tol.eps
    pts: list[Point] = []
    while len(pts) < k:
        cand = Point(rng.random(), rng.random())
        if all(dist(cand, p) > min_sep for p in pts):
            pts.append(cand)
    return pts


def random_robots(rng: random.Random, n: int, tol: Tolerance = _DEFAULT_TOL) -> list[Robot]:
    """n robots on 1..n random points with random multiplicities and frames."""
    if n < 1:
        raise ValueError("n must be >= 1")
    k = rng.randint(1, n)
    points = random_point_set(rng, k, tol)
    cuts = sorted(rng.sample(range(1, n), k - 1))
    counts = [b - a for a, b in zip([0] + cuts, cuts + [n])]
    robots: list[Robot] = []
    ident = 0
    for p, count in zip(points, counts):
        for _ in range(count):
            robots.append(
                Robot(ident, p, sigma=rng.uniform(0.1, 2.0), frame=random_frame(rng))
            )
            ident += 1
    return robots


@dataclass
class SweepSummary:
    runs: int
    gathered: int
    step_limit: int
    max_steps_to_gather: int
    violations: dict[str, int] = field(default_factory=dict)


def run_sweep(
    n: int,
    runs: int,
    seed: int,
    strategy: str,
    tol: Tolerance = _DEFAULT_TOL,
    max_steps: Optional[int] = None,
    fairness_bound: Optional[int] = None,
) -> tuple[SweepSummary, list[dict]]:
    """Randomized batch driver: fresh initial conditions per run, all
    monitors on, one record per run plus an aggregate summary.

    Every random draw descends from (seed, run index) through named
    sub-streams, so a sweep is reproducible as a whole and per run.
    """
    if runs < 1:
        raise ValueError("runs must be >= 1")
    monitors = attach_lemma_monitors()
    counts = {name: 0 for name in MONITOR_RULES}
    records: list[dict] = []
    gathered = 0
    longest = 0
    for index in range(runs):
        init_rng = random.Random(f"{seed}:init:{index}")
        robots = random_robots(init_rng, n, tol)
        sched_seed = random.Random(f"{seed}:sched:{index}").getrandbits(63)
        spec = SchedulerSpec(strategy, sched_seed, fairness_bound)
        outcome, _ = run(
            robots,
            spec,
            tol=tol,
            max_steps=max_steps,
            monitors=monitors,
            record_trace=False,
        )
        per_run: dict[str, int] = {}
        for report in outcome.monitor_violations:
            per_run[report.monitor] = per_run.get(report.monitor, 0) + 1
            counts[report.monitor] += 1
        if outcome.status == GATHERED:
            gathered += 1
            longest = max(longest, outcome.final_t)
        records.append(
            {
                "run": index,
                "seed": seed,
                "n": n,
                "scheduler": strategy,
                "status": outcome.status,
                "steps": outcome.final_t,
                "violations": per_run,
            }
        )
    summary = SweepSummary(runs, gathered, runs - gathered, longest, counts)
    return summary, records


def even_livelock_demo(n_even: int, steps: int) -> RunOutcome:
    """The symmetric witness for why even counts cannot gather.

    Half the robots sit at each of two points, with frames rotated a half
    turn against each other so the two camps see identical worlds.  Both
    points carry the maximal multiplicity, everyone is standing on a
    maximum, so the rule says stay; the configuration is pinned at two
    occupied points forever.  The returned outcome carries a two-point
    persistence check among its monitor results.
    """
    if n_even < 2 or n_even % 2 != 0:
        raise ValueError("the witness needs an even robot count >= 2")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    half = n_even // 2
    left = Point(0.0, 0.0)
    right = Point(1.0, 0.0)
    robots = []
    for i in range(half):
        robots.append(Robot(i, left, sigma=1.0, frame=Frame()))
    for i in range(half, n_even):
        robots.append(Robot(i, right, sigma=1.0, frame=Frame(rotation=math.pi)))

    def two_points_rule(tr: StepTransition) -> Optional[str]:
        k = len(tr.after_config.occupied)
        if k != 2:
            return f"witness held {k} occupied points instead of two"
        return None

    monitors = attach_lemma_monitors() + [Monitor("two_point_persistence", two_points_rule)]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        outcome, _ = run(
            robots,
            SchedulerSpec(strategy="synchronous", seed=0),
            max_steps=steps,
            monitors=monitors,
        )
    return outcome
