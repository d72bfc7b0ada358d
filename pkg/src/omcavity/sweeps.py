"""Parameter sweeps: detuning traces, drive hysteresis loops with
branch following, and 2-D bistability maps.

Branch following uses |delta n| as the continuity metric — the photon
number is the plotted observable — with ties broken toward the lower
branch on up-sweeps and the upper branch on down-sweeps, which is the
physical traversal of the S-curve.  Jumps therefore land within one
grid step of the knee drives.

Independent evaluations (map cells, non-hysteresis sweep points) run on
a thread pool capped by the OMX_THREADS environment variable; results
are assembled by index, so the output is identical for any worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .params import SystemParams
from . import steady

SWEEP_POINTS_DEFAULT = 801
MAP_POINTS_DEFAULT = 101

SWEEPABLE = ("delta_c", "delta_d", "eta", "gamma_a", "kappa", "chi", "g", "e_l")
MAP_AXES = ("kappa", "chi", "g", "delta_c", "delta_d", "eta", "e_l")


@dataclass(frozen=True)
class SweepTrace:
    swept_name: str
    values: np.ndarray
    root_sets: tuple  # RootSet per value
    up_path: np.ndarray | None = None  # followed n, increasing sweep
    down_path: np.ndarray | None = None

    def max_stable_path(self) -> np.ndarray:
        return np.array([rs.max_stable_n() for rs in self.root_sets])

    def branch_table(self, max_branches: int = 3):
        """(values, n-matrix with NaN padding, stability strings) for output."""
        n = np.full((len(self.root_sets), max_branches), np.nan)
        flags = []
        for i, rs in enumerate(self.root_sets):
            row = []
            for j, b in enumerate(rs.branches[:max_branches]):
                n[i, j] = b.n
                row.append(b.stability[0])
            flags.append("".join(row))
        return self.values, n, flags


@dataclass(frozen=True)
class BistabilityMap:
    x_name: str
    y_name: str
    x_values: np.ndarray
    y_values: np.ndarray
    predicate: np.ndarray  # bool, shape (len(y), len(x))
    root_count: np.ndarray  # int, same shape
    flagged: np.ndarray  # predicate/root-count disagreement beyond the boundary band


def thread_count() -> int:
    raw = os.environ.get("OMX_THREADS")
    if raw is not None:
        try:
            v = int(raw)
        except ValueError:
            raise ValueError(f"OMX_THREADS must be a positive integer, got {raw!r}")
        if v < 1:
            raise ValueError(f"OMX_THREADS must be a positive integer, got {raw!r}")
        return v
    return min(8, os.cpu_count() or 1)


def _parallel_map(fn, items):
    workers = thread_count()
    if workers == 1 or len(items) < 4:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def sweep_detuning(params: SystemParams, lo: float, hi: float,
                   points: int = SWEEP_POINTS_DEFAULT,
                   tie_delta_d: bool = False,
                   tie_sign: int = +1) -> SweepTrace:
    """Steady states versus cavity detuning; optionally delta_d = +-delta_c."""
    if points < 2:
        raise ValueError("points must be >= 2")
    values = np.linspace(lo, hi, points)

    def solve(dc):
        kw = {"delta_c": dc}
        if tie_delta_d:
            kw["delta_d"] = tie_sign * dc
        return steady.steady_roots(params.replace(**kw))

    root_sets = tuple(_parallel_map(solve, list(values)))
    return SweepTrace(swept_name="delta_c", values=values, root_sets=root_sets)


def sweep_parameter(params: SystemParams, name: str, lo: float, hi: float,
                    points: int = SWEEP_POINTS_DEFAULT) -> SweepTrace:
    """Steady states versus any single sweepable parameter."""
    if name not in SWEEPABLE:
        raise ValueError(f"cannot sweep {name!r}; choose one of {SWEEPABLE}")
    if points < 2:
        raise ValueError("points must be >= 2")
    values = np.linspace(lo, hi, points)
    root_sets = tuple(_parallel_map(
        lambda v: steady.steady_roots(params.replace(**{name: v})), list(values)))
    return SweepTrace(swept_name=name, values=values, root_sets=root_sets)


def _follow(root_sets, prefer_lower: bool):
    """Branch-following pass in the listed order."""
    path = np.empty(len(root_sets))
    prev = None
    for i, rs in enumerate(root_sets):
        stable = [b.n for b in rs.branches if b.stability == "stable"]
        if not stable:
            stable = [b.n for b in rs.branches]  # marginal-only point
        if prev is None:
            prev = min(stable) if prefer_lower else max(stable)
        else:
            best = min(abs(s - prev) for s in stable)
            cands = [s for s in stable if abs(s - prev) <= best * (1 + 1e-12) + 1e-300]
            prev = min(cands) if prefer_lower else max(cands)
        path[i] = prev
    return path


def sweep_drive(params: SystemParams, lo: float, hi: float,
                points: int = SWEEP_POINTS_DEFAULT,
                direction: str = "both") -> SweepTrace:
    """Hysteresis sweep of the pump amplitude.

    Each direction follows the stable branch nearest in n to the previous
    step, so the trace rides a branch until it terminates at a knee and
    then jumps to the surviving one.
    """
    if points < 2:
        raise ValueError("points must be >= 2")
    if direction not in ("up", "down", "both"):
        raise ValueError("direction must be 'up', 'down' or 'both'")
    if lo < 0:
        raise ValueError("drive amplitude range must be nonnegative")
    values = np.linspace(lo, hi, points)
    root_sets = tuple(_parallel_map(
        lambda e: steady.steady_roots(params.replace(e_l=float(e))), list(values)))

    up = down = None
    with ThreadPoolExecutor(max_workers=2) as pool:
        fu = pool.submit(_follow, root_sets, True) if direction in ("up", "both") else None
        fd = (pool.submit(_follow, list(reversed(root_sets)), False)
              if direction in ("down", "both") else None)
        if fu is not None:
            up = fu.result()
        if fd is not None:
            down = fd.result()[::-1]
    return SweepTrace(swept_name="e_l", values=values, root_sets=root_sets,
                      up_path=up, down_path=down)


def hysteresis_area(trace: SweepTrace) -> float:
    """Signed area between the up and down paths over the swept drive."""
    if trace.up_path is None or trace.down_path is None:
        raise ValueError("trace has no hysteresis paths")
    return float(np.trapezoid(trace.down_path - trace.up_path, trace.values))


def _cell(params: SystemParams):
    """Predicate plus a consistency root count for one parameter point.

    The root count is taken at the drive midway between the knee drives
    when knees exist (the drive guaranteed to see all three roots), at
    the configured drive otherwise.
    """
    ok, disc = steady.bistability_predicate(params)
    kd = steady.knee_drives(params)
    p = params
    if len(kd) == 2:
        mid = 0.5 * (kd[0] + kd[1])
        if mid > 0:
            p = params.replace(e_l=mid)
    count = len(steady.steady_roots(p).branches)
    return ok, count, disc


def bistability_map(params: SystemParams,
                    x: tuple, y: tuple,
                    boundary_band: float = 1e-9) -> BistabilityMap:
    """Root-count / predicate grid over two parameters.

    ``x`` and ``y`` are (name, grid) pairs.  Cells where the predicate and
    the root count disagree while the discriminant sits outside the
    ``boundary_band`` around zero are flagged.
    """
    x_name, x_values = x
    y_name, y_values = y
    for name in (x_name, y_name):
        if name not in MAP_AXES:
            raise ValueError(f"invalid map axis {name!r}; choose one of {MAP_AXES}")
    x_values = np.asarray(x_values, dtype=float)
    y_values = np.asarray(y_values, dtype=float)
    for arr in (x_values, y_values):
        if arr.ndim != 1 or arr.size < 2 or np.any(np.diff(arr) <= 0):
            raise ValueError("map grids must be strictly increasing 1-D arrays")

    points = [(i, j) for i in range(y_values.size) for j in range(x_values.size)]

    def work(ij):
        i, j = ij
        p = params.replace(**{y_name: float(y_values[i]),
                              x_name: float(x_values[j])})
        return _cell(p)

    results = _parallel_map(work, points)
    pred = np.zeros((y_values.size, x_values.size), dtype=bool)
    count = np.zeros_like(pred, dtype=int)
    flagged = np.zeros_like(pred)
    for (i, j), (ok, cnt, disc) in zip(points, results):
        pred[i, j] = ok
        count[i, j] = cnt
        flagged[i, j] = (ok != (cnt == 3)) and abs(disc) > boundary_band
    return BistabilityMap(x_name=x_name, y_name=y_name,
                          x_values=x_values, y_values=y_values,
                          predicate=pred, root_count=count, flagged=flagged)
