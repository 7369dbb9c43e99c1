"""Command-line front end.

Four subcommands: run one configured simulation, sweep randomized batches,
check the oracle/property/monitor suites, and demo-even for the symmetric
witness that even robot counts never gather.  Configurations are JSON; a
rejected config always names the offending field.  The GATHERSIM_EPS
environment variable overrides the default tolerance; an eps given in a
config file still wins.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys
from dataclasses import dataclass
from typing import Any, Optional, Sequence

from .analysis import (
    MONITOR_RULES,
    attach_lemma_monitors,
    brute_force_sec,
    check_concave_sectors_occupied,
    check_hull_sector_equivalence,
    check_radius_decrease,
    check_sec_points_on_hull,
    even_livelock_demo,
    random_point_set,
    run_sweep,
)
from .geometry import (
    Point,
    Polygon,
    Tolerance,
    convex_hull,
    dist,
    on_circle,
    smallest_enclosing_circle,
)
from .model import DetectionMode, Frame
from .simulator import (
    GATHERED,
    SCRIPTED,
    STRATEGIES,
    Robot,
    SchedulerSpec,
    run,
    trace_line,
)

ENV_EPS = "GATHERSIM_EPS"
SUITES = ("geometry", "properties", "lemmas", "all")
SWEEP_STRATEGIES = tuple(s for s in STRATEGIES if s != SCRIPTED)


class ConfigError(ValueError):
    """Rejected configuration; the message names the offending field."""


def default_eps() -> float:
    raw = os.environ.get(ENV_EPS)
    if raw is None:
        return 1e-9
    try:
        value = float(raw)
    except ValueError as exc:
        raise ConfigError(f"{ENV_EPS}: not a number: {raw!r}") from exc
    if not (value >= 0.0 and math.isfinite(value)):
        raise ConfigError(f"{ENV_EPS}: eps must be finite and non-negative")
    return value


@dataclass
class RunConfig:
    robots: list[Robot]
    scheduler: SchedulerSpec
    detection: DetectionMode = DetectionMode.STRONG
    eps: float = 1e-9
    max_steps: Optional[int] = None
    monitors: Optional[dict[str, bool]] = None
    trace_path: Optional[str] = None
    refresh_frames: bool = False


# -- parsing ----------------------------------------------------------------


def _require(raw: dict, key: str, where: str) -> Any:
    if key not in raw:
        raise ConfigError(f"{where}.{key}: required field is missing")
    return raw[key]


def _as_mapping(value: Any, where: str) -> dict:
    if not isinstance(value, dict):
        raise ConfigError(f"{where}: expected an object, got {type(value).__name__}")
    return value


def _as_number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {type(value).__name__}")
    result = float(value)
    if not math.isfinite(result):
        raise ConfigError(f"{where}: must be finite")
    return result


def _as_int(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where}: expected an integer, got {type(value).__name__}")
    return value


def _as_bool(value: Any, where: str) -> bool:
    if not isinstance(value, bool):
        raise ConfigError(f"{where}: expected true/false, got {type(value).__name__}")
    return value


def _parse_frame(raw: Any, where: str) -> Frame:
    data = _as_mapping(raw, where)
    rotation = _as_number(data.get("rotation", 0.0), f"{where}.rotation")
    scale = _as_number(data.get("scale", 1.0), f"{where}.scale")
    if scale <= 0.0:
        raise ConfigError(f"{where}.scale: must be > 0")
    tx = _as_number(data.get("tx", 0.0), f"{where}.tx")
    ty = _as_number(data.get("ty", 0.0), f"{where}.ty")
    reflected = _as_bool(data.get("reflected", False), f"{where}.reflected")
    return Frame(rotation, scale, (tx, ty), reflected)


def _parse_robot(raw: Any, index: int) -> Robot:
    where = f"robots[{index}]"
    data = _as_mapping(raw, where)
    x = _as_number(_require(data, "x", where), f"{where}.x")
    y = _as_number(_require(data, "y", where), f"{where}.y")
    sigma = _as_number(_require(data, "sigma", where), f"{where}.sigma")
    if sigma <= 0.0:
        raise ConfigError(f"{where}.sigma: must be > 0")
    frame = _parse_frame(data.get("frame", {}), f"{where}.frame")
    return Robot(index, Point(x, y), sigma, frame)


def _parse_scheduler(raw: Any) -> SchedulerSpec:
    data = _as_mapping(raw, "scheduler")
    strategy = data.get("strategy", "synchronous")
    if strategy not in STRATEGIES:
        raise ConfigError(
            f"scheduler.strategy: unknown strategy {strategy!r}; "
            f"expected one of {', '.join(STRATEGIES)}"
        )
    seed = _as_int(data.get("seed", 0), "scheduler.seed")
    bound = data.get("fairness_bound")
    if bound is not None:
        bound = _as_int(bound, "scheduler.fairness_bound")
        if bound < 1:
            raise ConfigError("scheduler.fairness_bound: must be >= 1")
    script = data.get("script")
    if script is not None:
        if not isinstance(script, list) or not script:
            raise ConfigError("scheduler.script: expected a non-empty list of index lists")
        parsed = []
        for si, entry in enumerate(script):
            if not isinstance(entry, list) or not entry:
                raise ConfigError(f"scheduler.script[{si}]: expected a non-empty list")
            parsed.append(tuple(_as_int(v, f"scheduler.script[{si}][{j}]") for j, v in enumerate(entry)))
        script = tuple(parsed)
    try:
        return SchedulerSpec(strategy, seed, bound, script)
    except ValueError as exc:
        raise ConfigError(f"scheduler: {exc}") from exc


def parse_config(data: Any) -> RunConfig:
    top = _as_mapping(data, "config")
    robots_raw = _require(top, "robots", "config")
    if not isinstance(robots_raw, list) or not robots_raw:
        raise ConfigError("robots: expected a non-empty list")
    robots = [_parse_robot(r, i) for i, r in enumerate(robots_raw)]
    scheduler = _parse_scheduler(top.get("scheduler", {}))
    detection_raw = top.get("detection", "strong")
    try:
        detection = DetectionMode(detection_raw)
    except ValueError as exc:
        raise ConfigError(f"detection: unknown mode {detection_raw!r}") from exc
    eps = top.get("eps")
    eps = default_eps() if eps is None else _as_number(eps, "eps")
    if eps < 0.0:
        raise ConfigError("eps: must be >= 0")
    max_steps = top.get("max_steps")
    if max_steps is not None:
        max_steps = _as_int(max_steps, "max_steps")
        if max_steps < 1:
            raise ConfigError("max_steps: must be >= 1")
    monitors = top.get("monitors")
    if monitors is not None:
        monitors = _as_mapping(monitors, "monitors")
        parsed_toggles = {}
        for name, enabled in monitors.items():
            if name not in MONITOR_RULES:
                raise ConfigError(
                    f"monitors.{name}: unknown monitor; "
                    f"expected one of {', '.join(MONITOR_RULES)}"
                )
            parsed_toggles[name] = _as_bool(enabled, f"monitors.{name}")
        monitors = parsed_toggles
    trace_path = top.get("trace_path")
    if trace_path is not None and not isinstance(trace_path, str):
        raise ConfigError("trace_path: expected a string path")
    refresh = _as_bool(top.get("refresh_frames", False), "refresh_frames")
    return RunConfig(
        robots, scheduler, detection, eps, max_steps, monitors, trace_path, refresh
    )


def load_config(path: str) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc})") from exc
    return parse_config(data)


def dump_config(config: RunConfig) -> dict:
    """Inverse of parse_config; parse_config(dump_config(c)) == c."""
    robots = []
    for robot in config.robots:
        robots.append(
            {
                "x": robot.pos.x,
                "y": robot.pos.y,
                "sigma": robot.sigma,
                "frame": {
                    "rotation": robot.frame.rotation,
                    "scale": robot.frame.scale,
                    "tx": robot.frame.translation[0],
                    "ty": robot.frame.translation[1],
                    "reflected": robot.frame.reflected,
                },
            }
        )
    scheduler: dict[str, Any] = {
        "strategy": config.scheduler.strategy,
        "seed": config.scheduler.seed,
        "fairness_bound": config.scheduler.fairness_bound,
    }
    if config.scheduler.script is not None:
        scheduler["script"] = [list(entry) for entry in config.scheduler.script]
    return {
        "robots": robots,
        "scheduler": scheduler,
        "detection": config.detection.value,
        "eps": config.eps,
        "max_steps": config.max_steps,
        "monitors": None if config.monitors is None else dict(config.monitors),
        "trace_path": config.trace_path,
        "refresh_frames": config.refresh_frames,
    }


# -- subcommands ------------------------------------------------------------


def cmd_run(args: argparse.Namespace) -> int:
    try:
        config = load_config(args.config)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2
    tol = Tolerance(config.eps)
    monitors = attach_lemma_monitors(config.monitors)
    outcome, trace = run(
        config.robots,
        config.scheduler,
        config.detection,
        tol,
        config.max_steps,
        monitors,
        refresh_frames=config.refresh_frames,
    )
    trace_path = args.trace or config.trace_path
    if trace_path:
        try:
            with open(trace_path, "w", encoding="utf-8") as handle:
                for event in trace:
                    handle.write(trace_line(event) + "\n")
        except OSError as err:
            print(f"cannot write trace to {trace_path}: {err}", file=sys.stderr)
            return 1
    record = {
        "status": outcome.status,
        "final_t": outcome.final_t,
        "occupied": [
            {"x": p.x, "y": p.y, "count": k}
            for p, k in sorted(outcome.final_config.occupied.items())
        ],
        "violations": [
            {"monitor": v.monitor, "step": v.step, "description": v.description}
            for v in outcome.monitor_violations
        ],
    }
    print(json.dumps(record, sort_keys=True))
    return 0 if outcome.status == GATHERED and not outcome.monitor_violations else 1


def cmd_sweep(args: argparse.Namespace) -> int:
    tol = Tolerance(default_eps())
    summary, records = run_sweep(args.n, args.runs, args.seed, args.scheduler, tol)
    try:
        with open(args.out, "w", encoding="utf-8") as handle:
            for record in records:
                handle.write(json.dumps(record, sort_keys=True, separators=(",", ":")) + "\n")
    except OSError as err:
        print(f"cannot write records to {args.out}: {err}", file=sys.stderr)
        return 1
    print(
        json.dumps(
            {
                "runs": summary.runs,
                "gathered": summary.gathered,
                "step_limit": summary.step_limit,
                "max_steps_to_gather": summary.max_steps_to_gather,
                "violations": summary.violations,
            },
            sort_keys=True,
            separators=(",", ":"),
        )
    )
    clean = summary.gathered == summary.runs and not any(summary.violations.values())
    return 0 if clean else 1


def _probe_for(points: list[Point], hull: Polygon, rng: random.Random) -> Point:
    """A probe on or inside the hull: vertex, edge midpoint, or interior mix."""
    verts = hull.vertices
    kind = rng.randrange(3)
    if kind == 0:
        return rng.choice(verts)
    if kind == 1:
        i = rng.randrange(len(verts))
        a, b = verts[i], verts[(i + 1) % len(verts)]
        return Point((a.x + b.x) / 2.0, (a.y + b.y) / 2.0)
    weights = [rng.random() + 0.05 for _ in points]
    total = sum(weights)
    x = sum(w * p.x for w, p in zip(weights, points)) / total
    y = sum(w * p.y for w, p in zip(weights, points)) / total
    return Point(x, y)


def check_geometry_suite(sets: int = 1000, seed: str = "check:geometry") -> list[tuple[str, bool, str]]:
    rng = random.Random(seed)
    tol = Tolerance(default_eps())
    worst = 0.0
    support_ok = True
    support_note = ""
    for _ in range(sets):
        pts = random_point_set(rng, rng.randint(3, 12), tol)
        fast = smallest_enclosing_circle(pts)
        slow = brute_force_sec(pts)
        worst = max(worst, dist(fast.center, slow.center), abs(fast.radius - slow.radius))
        on_rim = [p for p in pts if on_circle(p, fast, tol)]
        if len(on_rim) < 2:
            support_ok = False
            support_note = f"{len(on_rim)} support points on {pts}"
        elif len(on_rim) == 2 and abs(dist(on_rim[0], on_rim[1]) - 2.0 * fast.radius) > 1e-8:
            support_ok = False
            support_note = f"two non-diametral support points on {pts}"
    return [
        (
            "sec_oracle_agreement",
            worst <= 1e-9,
            f"max center/radius deviation {worst:.3e} over {sets} sets",
        ),
        (
            "sec_boundary_support",
            support_ok,
            support_note or f"two-diametral-or-three support held on all {sets} sets",
        ),
    ]


def check_properties_suite(sets: int = 500, seed: str = "check:properties") -> list[tuple[str, bool, str]]:
    rng = random.Random(seed)
    tol = Tolerance(default_eps())
    concave_bad = 0
    equivalence_bad = 0
    on_hull_bad = 0
    shrink_bad = 0
    for _ in range(sets):
        pts = random_point_set(rng, rng.randint(3, 10), tol)
        if check_concave_sectors_occupied(pts, tol).violation:
            concave_bad += 1
        hull = convex_hull(pts, tol)
        if isinstance(hull, Polygon):
            probe = _probe_for(pts, hull, rng)
            if not check_hull_sector_equivalence(pts, probe, tol):
                equivalence_bad += 1
        if not check_sec_points_on_hull(pts, tol):
            on_hull_bad += 1
        lam = rng.choice((0.1, 0.5, 1.0))
        if not check_radius_decrease(pts, lam, tol):
            shrink_bad += 1
    return [
        ("concave_sectors_occupied", concave_bad == 0, f"{concave_bad} violations in {sets} sets"),
        ("hull_sector_equivalence", equivalence_bad == 0, f"{equivalence_bad} violations in {sets} sets"),
        ("circle_points_on_hull", on_hull_bad == 0, f"{on_hull_bad} violations in {sets} sets"),
        ("radius_decreases", shrink_bad == 0, f"{shrink_bad} failures in {sets} shrink instances"),
    ]


def check_lemmas_suite(seed: int = 7) -> list[tuple[str, bool, str]]:
    tol = Tolerance(default_eps())
    results = []
    for n in (3, 5):
        for strategy in ("synchronous", "random_subset"):
            summary, _ = run_sweep(n, 20, seed, strategy, tol)
            ok = summary.gathered == summary.runs and not any(summary.violations.values())
            results.append(
                (
                    f"monitored_sweep_n{n}_{strategy}",
                    ok,
                    f"{summary.gathered}/{summary.runs} gathered, "
                    f"{sum(summary.violations.values())} monitor violations",
                )
            )
    return results


def cmd_check(args: argparse.Namespace) -> int:
    checks: list[tuple[str, bool, str]] = []
    if args.suite in ("geometry", "all"):
        checks.extend(check_geometry_suite())
    if args.suite in ("properties", "all"):
        checks.extend(check_properties_suite())
    if args.suite in ("lemmas", "all"):
        checks.extend(check_lemmas_suite())
    for name, ok, detail in checks:
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    return 0 if all(ok for _, ok, _ in checks) else 1


def cmd_demo_even(args: argparse.Namespace) -> int:
    outcome = even_livelock_demo(args.n, args.steps)
    two_point_breaks = [
        v for v in outcome.monitor_violations if v.monitor == "two_point_persistence"
    ]
    print(f"status: {outcome.status} after {outcome.final_t} steps")
    occupancy = ", ".join(
        f"({p.x:g}, {p.y:g}) x{count}"
        for p, count in sorted(outcome.final_config.occupied.items())
    )
    print(f"final occupancy: {occupancy}")
    held = not two_point_breaks
    print(f"two occupied points at every step: {'yes' if held else 'NO'}")
    return 0 if outcome.status != GATHERED and held else 1


# -- argument wiring --------------------------------------------------------


def _positive_int(raw: str) -> int:
    value = int(raw)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _even_int(raw: str) -> int:
    value = int(raw)
    if value < 2 or value % 2 != 0:
        raise argparse.ArgumentTypeError("must be an even integer >= 2")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gathersim",
        description="Simulate and verify point-gathering of oblivious mobile robots.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute one simulation from a JSON config")
    p_run.add_argument("--config", required=True, help="path to the run config")
    p_run.add_argument("--trace", help="write the JSONL trace here (overrides config)")
    p_run.set_defaults(handler=cmd_run)

    p_sweep = sub.add_parser("sweep", help="run randomized batches with all monitors")
    p_sweep.add_argument("--n", type=_positive_int, required=True, help="robot count")
    p_sweep.add_argument("--runs", type=_positive_int, required=True)
    p_sweep.add_argument("--seed", type=int, required=True)
    p_sweep.add_argument("--scheduler", choices=SWEEP_STRATEGIES, required=True)
    p_sweep.add_argument("--out", required=True, help="per-run records go here (JSONL)")
    p_sweep.set_defaults(handler=cmd_sweep)

    p_check = sub.add_parser("check", help="run the oracle/property/monitor suites")
    p_check.add_argument("--suite", choices=SUITES, required=True)
    p_check.set_defaults(handler=cmd_check)

    p_demo = sub.add_parser("demo-even", help="show the even-count non-gathering witness")
    p_demo.add_argument("--n", type=_even_int, required=True)
    p_demo.add_argument("--steps", type=_positive_int, required=True)
    p_demo.set_defaults(handler=cmd_demo_even)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
