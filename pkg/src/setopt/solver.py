"""Scalarization sweeps and solution verification.

The pipeline: minimize every direction of a dual base (exhaustively on
grids, by compass pattern search on boxes), collect the converged
minimizers into a candidate set, then verify the candidate against an
independent probe family: per-direction infimizer gaps, a convex-hull
gap, and the per-point requirement that every candidate point minimizes
some direction.

Verification probes are generated independently of anything the search
touched (offset lattice plus a seeded uniform sample).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cones import DualBase, as_matrix, as_vector
from .errors import EmptyCandidateError, InfeasibleProblemError
from .setfuns import (
    Box,
    CandidateSet,
    Grid,
    ScalarizationProfile,
    SetFunction,
    convex_sample_points,
    scalarize,
    _scalarize_or_inf,
    evaluate,
)
from .uppersets import UpperSet, equals, lattice_inf, order_geq

#: Default value tolerances by space kind.
TOL_VAL_GRID = 1e-6
TOL_VAL_BOX = 1e-3


def default_tol(space) -> float:
    return TOL_VAL_GRID if isinstance(space, Grid) else TOL_VAL_BOX


@dataclass
class SearchOptions:
    """Options for :func:`scalar_minimize` on box spaces."""

    start: np.ndarray | None = None
    step_init: float = 0.25
    step_tol: float = 1e-8
    max_evals: int = 200000
    scan_resolution: int = 17


@dataclass
class ScalarMinResult:
    direction: np.ndarray
    minimizer: np.ndarray | None
    value: float
    iterations: int
    step_at_exit: float
    converged: bool
    note: str = ""


def scalar_minimize(f: SetFunction, zstar, opts: SearchOptions | None = None) -> ScalarMinResult:
    """Minimize the z*-scalarization of f over its variable space.

    Grids are enumerated exactly.  Boxes run a compass pattern search
    (axis and paired-diagonal directions, expansion x2, contraction x0.5,
    relative step) from a feasible start; a minimizer pinned to a box face with the
    descent direction pointing out of the box is flagged as suspected
    non-attainment (``converged=False``).
    """
    opts = opts or SearchOptions()
    z = as_vector(zstar, f.cone.dim)
    if isinstance(f.space, Grid):
        values = np.array([scalarize(f, z, x) for x in f.space.points])
        if not np.any(np.isfinite(values)):
            raise InfeasibleProblemError("all grid values scalarize to +inf")
        i = int(np.argmin(values))
        return ScalarMinResult(z, f.space.points[i].copy(), float(values[i]),
                               iterations=len(values), step_at_exit=0.0, converged=True)
    return _compass_search(f, z, opts)


def _feasible_start(f: SetFunction, z: np.ndarray, opts: SearchOptions) -> tuple[np.ndarray, float]:
    box: Box = f.space
    if opts.start is not None:
        x0 = box.clip(opts.start)
        v0 = _scalarize_or_inf(f, z, x0)
        if math.isfinite(v0):
            return x0, v0
    axes = [np.linspace(lo, hi, opts.scan_resolution)
            for lo, hi in zip(box.lower, box.upper)]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    best_x, best_v = None, math.inf
    for x in pts:
        v = _scalarize_or_inf(f, z, x)
        if v < best_v:
            best_x, best_v = x, v
    if best_x is None or not math.isfinite(best_v):
        raise InfeasibleProblemError("all probed values scalarize to +inf")
    return best_x.copy(), best_v


def _pattern_directions(n: int) -> np.ndarray:
    """Axis moves plus the two-coordinate diagonals.  The diagonals let the
    search slide along constraint faces expressed through infeasibility,
    where axis-only moves stall at face corners."""
    dirs = list(np.eye(n)) + list(-np.eye(n))
    for i in range(n):
        for j in range(i + 1, n):
            for si in (1.0, -1.0):
                for sj in (1.0, -1.0):
                    d = np.zeros(n)
                    d[i], d[j] = si, sj
                    dirs.append(d / math.sqrt(2.0))
    return np.stack(dirs)


def _compass_search(f: SetFunction, z: np.ndarray, opts: SearchOptions) -> ScalarMinResult:
    box: Box = f.space
    n = box.dim
    scale = np.maximum(box.upper - box.lower, 1e-30) / 2.0
    x, value = _feasible_start(f, z, opts)
    pattern = _pattern_directions(n)
    step = opts.step_init
    evals = 0
    while step >= opts.step_tol and evals < opts.max_evals:
        improved = False
        for d in pattern:
            cand = box.clip(x + step * d * scale)
            if np.all(cand == x):
                continue
            v = _scalarize_or_inf(f, z, cand)
            evals += 1
            if v < value:
                x, value = cand, v
                improved = True
        if improved:
            step = min(step * 2.0, 1.0)
        else:
            step *= 0.5
    converged = step < opts.step_tol
    note = "" if converged else "evaluation budget exhausted"
    if converged and _pinned_descending(f, z, x, value, opts):
        converged = False
        note = "suspected non-attainment: descent pinned at the box boundary"
    return ScalarMinResult(z, x, value, iterations=evals,
                           step_at_exit=step, converged=converged, note=note)


def _pinned_descending(f: SetFunction, z: np.ndarray, x: np.ndarray, value: float,
                       opts: SearchOptions) -> bool:
    """True when x sits on a box face and moving back inside strictly
    worsens the value: the infimum is suspected to live outside the box."""
    box: Box = f.space
    scale = np.maximum(box.upper - box.lower, 1e-30) / 2.0
    face_tol = np.maximum(10.0 * opts.step_tol * scale, 1e-12)
    probe_step = 1e-4 * scale
    for i in range(box.dim):
        if box.upper[i] - box.lower[i] <= 0:
            continue
        for lo_side in (True, False):
            dist = (x[i] - box.lower[i]) if lo_side else (box.upper[i] - x[i])
            if dist > face_tol[i]:
                continue
            inward = x.copy()
            inward[i] += probe_step[i] if lo_side else -probe_step[i]
            inward = box.clip(inward)
            v = _scalarize_or_inf(f, z, inward)
            if v > value + 1e-15 * max(1.0, abs(value)):
                return True
    return False


def sweep(f: SetFunction, base: DualBase, opts: SearchOptions | None = None) -> list[ScalarMinResult]:
    """Run :func:`scalar_minimize` for every base direction.  Per-direction
    infeasibility becomes a flagged result, never an abort."""
    results = []
    for z in base.directions:
        try:
            results.append(scalar_minimize(f, z, opts))
        except InfeasibleProblemError as exc:
            results.append(ScalarMinResult(np.asarray(z, dtype=float), None, math.inf,
                                           iterations=0, step_at_exit=math.inf,
                                           converged=False, note=str(exc)))
    if all(r.minimizer is None for r in results):
        raise InfeasibleProblemError("every direction was infeasible")
    return results


def collect_candidate(results: list[ScalarMinResult], merge_tol: float = 1e-5) -> CandidateSet:
    """Merge the converged minimizers within ``merge_tol`` (cluster
    centroids, deterministic in sweep order)."""
    mins = [r.minimizer for r in results if r.converged and r.minimizer is not None]
    if not mins:
        raise EmptyCandidateError("no direction converged; nothing to collect")
    clusters: list[list[np.ndarray]] = []
    for p in mins:
        for cl in clusters:
            center = np.mean(cl, axis=0)
            if np.linalg.norm(p - center) <= merge_tol:
                cl.append(p)
                break
        else:
            clusters.append([p])
    points = np.stack([np.mean(cl, axis=0) for cl in clusters])
    return CandidateSet(points, label="sweep minimizers")


def probe_points(space, resolution: int = 33, seed: int = 1) -> np.ndarray:
    """An independent verification probe: grids probe themselves; boxes get
    an interior offset lattice plus an equally sized seeded uniform sample."""
    if isinstance(space, Grid):
        return space.points
    box: Box = space
    n = box.dim
    per_axis = max(2, min(resolution, int(round(100000 ** (1.0 / n)))))
    offset = 0.3819660112501051  # complementary golden-ratio fraction
    axes = [box.lower[i] + (np.arange(per_axis) + offset) / per_axis
            * (box.upper[i] - box.lower[i]) for i in range(n)]
    mesh = np.meshgrid(*axes, indexing="ij")
    lattice = np.stack([m.ravel() for m in mesh], axis=1)
    rng = np.random.default_rng(seed)
    uniforms = rng.uniform(box.lower, box.upper, size=(lattice.shape[0], n))
    return np.concatenate([lattice, uniforms], axis=0)


@dataclass
class InfimizerGaps:
    """Per-direction scalarization gaps of a candidate set against a probe."""

    gaps: np.ndarray
    co_gap: float
    candidate_minima: np.ndarray
    probe_minima: np.ndarray

    @property
    def max_gap(self) -> float:
        return float(np.max(self.gaps)) if self.gaps.size else 0.0


def verify_infimizer(f: SetFunction, m: CandidateSet, base: DualBase, probe,
                     tol: float | None = None, *, co_extra: int = 32,
                     seed: int = 1) -> InfimizerGaps:
    """Scalarization gap test: for every base direction, the candidate's
    best value must not exceed the probe's best value (beyond tol, which
    callers compare against ``max_gap``).  The convex-hull gap compares
    the candidate against barycentric samples of its own hull."""
    probe = as_matrix(probe, f.space.dim)
    prof_m = ScalarizationProfile.build(f, base, m.points)
    prof_p = ScalarizationProfile.build(f, base, probe)
    min_m = np.min(prof_m.values, axis=1)
    min_p = np.min(prof_p.values, axis=1)
    gaps = np.where(
        np.isinf(min_m) & np.isinf(min_p), 0.0, np.maximum(min_m - min_p, 0.0)
    )
    co_gap = 0.0
    if len(m) >= 2:
        co_pts = convex_sample_points(m.points, extra=co_extra, seed=seed)
        for i, z in enumerate(base.directions):
            vals = [_scalarize_or_inf(f, z, p) for p in co_pts]
            best_co = min(vals)
            if math.isfinite(min_m[i]) or math.isfinite(best_co):
                co_gap = max(co_gap, max(0.0, float(min_m[i]) - float(best_co)))
    return InfimizerGaps(gaps=gaps, co_gap=co_gap,
                         candidate_minima=min_m, probe_minima=min_p)


def verify_lattice_minimizer(f: SetFunction, xbar, probe, tol: float = 1e-9) -> bool:
    """True iff no probe point takes a strictly smaller lattice value than
    f(xbar) (a strictly larger upper set)."""
    val = evaluate(f, xbar)
    for x in probe:
        vx = evaluate(f, x)
        if order_geq(val, vx, tol) and not equals(val, vx, tol):
            return False
    return True


def build_infimum(f: SetFunction, m) -> UpperSet:
    """The lattice infimum of the candidate values (Empty if all are)."""
    points = m.points if isinstance(m, CandidateSet) else np.atleast_2d(np.asarray(m, dtype=float))
    return lattice_inf([evaluate(f, p) for p in points])


@dataclass
class SolutionReport:
    """Verification verdict for a candidate set.

    verdict: ``sc-solution`` when all infimizer gaps, the convex-hull gap,
    and every per-point minimality residual pass the tolerance;
    ``infimizer-only`` when only the residuals fail; ``fail`` otherwise.
    """

    verdict: str
    tol: float
    directions: np.ndarray
    alphas: np.ndarray | None
    gaps: np.ndarray
    co_gap: float
    candidate: CandidateSet
    candidate_minima: np.ndarray
    probe_minima: np.ndarray
    condition3_residuals: np.ndarray
    condition3_direction: np.ndarray
    lattice_min_verdicts: list[bool]
    infimum: UpperSet
    sampling: dict = field(default_factory=dict)

    @property
    def max_gap(self) -> float:
        return float(np.max(self.gaps)) if self.gaps.size else 0.0

    @property
    def max_residual(self) -> float:
        return float(np.max(self.condition3_residuals)) if self.condition3_residuals.size else 0.0


def verify_sc_solution(f: SetFunction, m: CandidateSet, base: DualBase, probe,
                       tol: float | None = None, *, co_extra: int = 32,
                       seed: int = 1, check_lattice_min: bool = True) -> SolutionReport:
    """Full verdict: infimizer gaps, convex-hull gap, and the sc-condition
    that every candidate point minimizes some scalarization direction
    (residual = min over directions of its value above the probe's best)."""
    if tol is None:
        tol = default_tol(f.space)
    probe = as_matrix(probe, f.space.dim)
    gaps = verify_infimizer(f, m, base, probe, tol, co_extra=co_extra, seed=seed)
    prof_m = ScalarizationProfile.build(f, base, m.points)
    residuals = np.empty(len(m))
    res_dir = np.empty((len(m), f.cone.dim))
    for j in range(len(m)):
        per_dir = prof_m.values[:, j] - gaps.probe_minima
        per_dir = np.where(np.isnan(per_dir), math.inf, per_dir)
        i = int(np.argmin(per_dir))
        residuals[j] = per_dir[i]
        res_dir[j] = base.directions[i]
    lattice_ok = []
    if check_lattice_min:
        lattice_ok = [verify_lattice_minimizer(f, p, probe) for p in m.points]
    gaps_pass = gaps.max_gap <= tol and gaps.co_gap <= tol
    cond3_pass = bool(np.all(residuals <= tol))
    if gaps_pass and cond3_pass:
        verdict = "sc-solution"
    elif gaps_pass:
        verdict = "infimizer-only"
    else:
        verdict = "fail"
    return SolutionReport(
        verdict=verdict,
        tol=tol,
        directions=base.directions,
        alphas=base.alpha_coordinates(),
        gaps=gaps.gaps,
        co_gap=gaps.co_gap,
        candidate=m,
        candidate_minima=gaps.candidate_minima,
        probe_minima=gaps.probe_minima,
        condition3_residuals=residuals,
        condition3_direction=res_dir,
        lattice_min_verdicts=lattice_ok,
        infimum=build_infimum(f, m),
        sampling={"probe_points": int(probe.shape[0]), "co_extra": co_extra, "seed": seed},
    )
