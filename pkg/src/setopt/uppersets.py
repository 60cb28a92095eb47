"""Finitely generated upper sets and their lattice operations.

A value is ``co(P) (+) C``: the closed convex hull of finitely many
generator points, fattened by the ordering cone.  The empty set is a
legitimate value (the top element); the whole-space bottom element is not
representable and never arises from these operations.

Dimensions 1 and 2 run on exact vertex/facet geometry.  The planar case
is normalized into dual-ray coordinates, where the cone becomes the
nonnegative orthant and the minimal boundary is a southwest staircase.
For d >= 3 containment falls back to a sampled-direction support
certificate (sound up to the sampled directions).
"""

from __future__ import annotations

import functools
import math

import numpy as np

from .cones import (
    Cone,
    TOL_GEOM,
    as_matrix,
    as_vector,
    base_directions,
    default_anchor,
    dual_contains,
    extreme_rays_2d,
)
from .errors import (
    ConeMismatchError,
    EmptyFamilyError,
    GeneratorLimitError,
    InvalidScalarError,
    UnsupportedDimensionError,
)

#: Hard cap on raw generator counts fed through lattice operations.
GENERATOR_LIMIT = 10000


@functools.lru_cache(maxsize=64)
def _planar_basis(cone: Cone) -> np.ndarray:
    """Rows are the unit extreme dual rays; maps z to staircase coordinates
    u = B @ z in which the cone is the nonnegative quadrant."""
    lo, hi = extreme_rays_2d(cone.dual)
    b = np.stack([lo / np.linalg.norm(lo), hi / np.linalg.norm(hi)])
    if abs(np.linalg.det(b)) <= TOL_GEOM:
        raise UnsupportedDimensionError(
            "planar cone has dependent extreme dual rays; exact geometry "
            "needs a full-dimensional cone"
        )
    b.flags.writeable = False
    return b


@functools.lru_cache(maxsize=64)
def _certificate_directions(cone: Cone) -> np.ndarray:
    """Unit dual directions used for sampled containment tests (d >= 3)."""
    base = base_directions(cone, default_anchor(cone), resolution=6)
    dirs = base.directions / np.linalg.norm(base.directions, axis=1)[:, None]
    dirs.flags.writeable = False
    return dirs


def _staircase_frontier(u: np.ndarray, tol: float) -> list[int]:
    """Indices of the minimal vertices of ``co(u) + R^2_+``.

    Pareto staircase filter followed by a convexity filter; input rows in
    staircase coordinates, output ordered by first coordinate ascending.
    Tolerances are local (edge-length scaled) so dense samplings of smooth
    curves are not cascade-thinned.
    """
    order = np.lexsort((u[:, 1], u[:, 0]))
    staircase: list[int] = []
    best = math.inf
    for i in order:
        local = tol * max(1.0, abs(u[i, 0]), abs(u[i, 1]))
        if u[i, 1] < best - local:
            staircase.append(int(i))
            best = u[i, 1]
    hull: list[int] = []
    for i in staircase:
        while len(hull) >= 2:
            a, b, c = u[hull[-2]], u[hull[-1]], u[i]
            e1 = b - a
            e2 = c - b
            cross = e1[0] * e2[1] - e1[1] * e2[0]
            # Angle-based collinearity: drop b when the turn is below tol.
            if cross <= tol * float(np.linalg.norm(e1) * np.linalg.norm(e2)):
                hull.pop()
            else:
                break
        hull.append(i)
    return hull


def _staircase_facets(verts: np.ndarray) -> list[tuple[np.ndarray, float]]:
    """Facet inequalities ``n @ u >= h`` of ``co(verts) + R^2_+`` with unit
    normals; ``verts`` ordered by first coordinate ascending."""
    facets: list[tuple[np.ndarray, float]] = [
        (np.array([1.0, 0.0]), float(verts[0, 0]))
    ]
    for a, b in zip(verts[:-1], verts[1:]):
        e = b - a
        n = np.array([-e[1], e[0]])
        n /= np.linalg.norm(n)
        facets.append((n, float(n @ a)))
    facets.append((np.array([0.0, 1.0]), float(verts[-1, 1])))
    return facets


class UpperSet:
    """An ordering-cone upper set with a finite generator description.

    Instances are immutable; the generator array is stored as given
    (validated, not pruned) and geometric queries work off the lazily
    computed minimal frontier.  Use :func:`prune` for a minimal
    description.
    """

    def __init__(self, cone: Cone, generators=None):
        self.cone = cone
        if generators is None:
            gens = np.empty((0, cone.dim))
        else:
            gens = np.asarray(generators, dtype=float)
            if gens.size == 0:
                gens = np.empty((0, cone.dim))
            else:
                gens = as_matrix(gens, cone.dim)
        if gens.shape[0] > GENERATOR_LIMIT:
            raise GeneratorLimitError(
                f"{gens.shape[0]} generators exceed the budget {GENERATOR_LIMIT}"
            )
        gens = gens.copy()
        gens.flags.writeable = False
        self.generators = gens
        self._frontier_idx: list[int] | None = None
        self._facets: list[tuple[np.ndarray, float]] | None = None

    @classmethod
    def empty(cls, cone: Cone) -> "UpperSet":
        return cls(cone, None)

    @classmethod
    def from_point(cls, cone: Cone, point) -> "UpperSet":
        return cls(cone, [as_vector(point, cone.dim)])

    @property
    def is_empty(self) -> bool:
        return self.generators.shape[0] == 0

    @property
    def tag(self) -> str:
        return "Empty" if self.is_empty else "Proper"

    @property
    def dim(self) -> int:
        return self.cone.dim

    # -- internal geometry ------------------------------------------------

    def _u(self) -> np.ndarray:
        return self.generators @ _planar_basis(self.cone).T

    def _frontier(self) -> list[int]:
        if self._frontier_idx is None:
            if self.dim == 1:
                self._frontier_idx = [int(np.argmin(self.generators[:, 0]))]
            elif self.dim == 2:
                self._frontier_idx = _staircase_frontier(self._u(), TOL_GEOM)
            else:
                self._frontier_idx = _certificate_frontier(self)
        return self._frontier_idx

    def facets(self) -> list[tuple[np.ndarray, float]]:
        """Planar facet inequalities in staircase coordinates."""
        if self.dim != 2:
            raise UnsupportedDimensionError("facets are a planar concept here")
        if self._facets is None:
            verts = self._u()[self._frontier()]
            self._facets = _staircase_facets(verts)
        return self._facets

    def minimal_generators(self) -> np.ndarray:
        """The pruned generator array, frontier-ordered for d <= 2."""
        if self.is_empty:
            return self.generators
        return self.generators[self._frontier()]

    def __repr__(self) -> str:
        if self.is_empty:
            return f"UpperSet(Empty, dim={self.dim})"
        return f"UpperSet({self.generators.shape[0]} generators, dim={self.dim})"


def _certificate_frontier(a: UpperSet) -> list[int]:
    """Greedy redundancy filter for d >= 3 via sampled support dominance."""
    dirs = _certificate_directions(a.cone)
    gens = a.generators
    prods = gens @ dirs.T  # (k, ndirs)
    scale = max(1.0, float(np.max(np.abs(gens))))
    active = list(range(gens.shape[0]))
    i = 0
    while i < len(active):
        others = [j for j in active if j != active[i]]
        if not others:
            break
        mins = prods[others].min(axis=0)
        if np.all(prods[active[i]] >= mins - TOL_GEOM * scale):
            active.pop(i)
        else:
            i += 1
    return active


def _require_same_cone(*values: UpperSet) -> Cone:
    cone = values[0].cone
    for v in values[1:]:
        if v.cone != cone:
            raise ConeMismatchError("values were built over different cones")
    return cone


def oplus(a: UpperSet, b: UpperSet, cap: int = GENERATOR_LIMIT) -> UpperSet:
    """Minkowski sum followed by closure: pairwise generator sums, pruned.
    The empty set absorbs."""
    cone = _require_same_cone(a, b)
    if a.is_empty or b.is_empty:
        return UpperSet.empty(cone)
    ka, kb = a.generators.shape[0], b.generators.shape[0]
    if ka * kb > cap:
        raise GeneratorLimitError(
            f"{ka * kb} pairwise sums exceed the budget {cap}"
        )
    sums = (a.generators[:, None, :] + b.generators[None, :, :]).reshape(-1, cone.dim)
    return prune(UpperSet(cone, sums))


def scale(t: float, a: UpperSet) -> UpperSet:
    """Conlinear scaling: elementwise for t > 0, and 0 * A = cl C for every
    value A, including the empty set."""
    if not np.isfinite(t) or t < 0:
        raise InvalidScalarError(f"scale factor must be finite and >= 0, got {t!r}")
    if t == 0.0:
        return UpperSet(a.cone, np.zeros((1, a.cone.dim)))
    if a.is_empty:
        return UpperSet.empty(a.cone)
    return UpperSet(a.cone, t * a.generators)


def lattice_inf(values, cap: int = GENERATOR_LIMIT) -> UpperSet:
    """Lattice infimum: closed convex hull of the union, as pruned
    generators.  An all-Empty family yields Empty."""
    values = list(values)
    if not values:
        raise EmptyFamilyError("lattice_inf needs a nonempty family")
    cone = _require_same_cone(*values)
    gens = [v.generators for v in values if not v.is_empty]
    if not gens:
        return UpperSet.empty(cone)
    stacked = np.concatenate(gens, axis=0)
    if stacked.shape[0] > cap:
        raise GeneratorLimitError(
            f"{stacked.shape[0]} generators exceed the budget {cap}"
        )
    return prune(UpperSet(cone, stacked))


def lattice_sup_2d(values) -> UpperSet:
    """Lattice supremum (intersection) of planar values by half-plane
    intersection in staircase coordinates."""
    values = list(values)
    if not values:
        raise EmptyFamilyError("lattice_sup_2d needs a nonempty family")
    cone = _require_same_cone(*values)
    if cone.dim != 2:
        raise UnsupportedDimensionError("lattice_sup_2d handles d = 2 only")
    if any(v.is_empty for v in values):
        return UpperSet.empty(cone)
    if len(values) == 1:
        return prune(values[0])
    facets: list[tuple[np.ndarray, float]] = []
    for v in values:
        facets.extend(v.facets())
    scale_ = max(1.0, max(abs(h) for _, h in facets))
    candidates: list[np.ndarray] = []
    for i in range(len(facets)):
        ni, hi = facets[i]
        for j in range(i + 1, len(facets)):
            nj, hj = facets[j]
            det = ni[0] * nj[1] - ni[1] * nj[0]
            if abs(det) <= 1e-12:
                continue
            u = np.linalg.solve(np.stack([ni, nj]), np.array([hi, hj]))
            candidates.append(u)
    feasible = [
        u for u in candidates
        if all(n @ u >= h - TOL_GEOM * scale_ * 10 for n, h in facets)
    ]
    if not feasible:
        return UpperSet.empty(cone)
    basis = _planar_basis(cone)
    points = np.linalg.solve(basis, np.stack(feasible).T).T
    return prune(UpperSet(cone, points))


def support(a: UpperSet, zstar) -> float:
    """Lower support value ``inf {z* @ z : z in A}``.

    +inf on the empty set; -inf when z* leaves the dual cone on a proper
    value; otherwise the minimum over generators.
    """
    z = as_vector(zstar, a.dim)
    if a.is_empty:
        return math.inf
    if not dual_contains(a.cone, z):
        return -math.inf
    return float(np.min(a.generators @ z))


def contains_point(a: UpperSet, q, tol: float = TOL_GEOM) -> bool:
    """Membership test: exact facet arithmetic for d <= 2, sampled support
    certificate for d >= 3.  Always false on the empty set."""
    if a.is_empty:
        return False
    q = as_vector(q, a.dim)
    if a.dim == 1:
        lo = float(np.min(a.generators[:, 0]))
        return bool(q[0] >= lo - tol * max(1.0, abs(lo)))
    if a.dim == 2:
        u = _planar_basis(a.cone) @ q
        scale_ = max(1.0, float(np.max(np.abs(u))), float(np.max(np.abs(a._u()))))
        return all(n @ u >= h - tol * scale_ for n, h in a.facets())
    dirs = _certificate_directions(a.cone)
    mins = (a.generators @ dirs.T).min(axis=0)
    scale_ = max(1.0, float(np.max(np.abs(q))), float(np.max(np.abs(a.generators))))
    return bool(np.all(dirs @ q >= mins - tol * scale_))


def order_geq(a: UpperSet, b: UpperSet, tol: float = TOL_GEOM) -> bool:
    """Lattice order ``a >= b`` for minimization: a is the larger (worse)
    value iff a is contained in b as a set.  Empty is the top element."""
    _require_same_cone(a, b)
    if a.is_empty:
        return True
    if b.is_empty:
        return False
    return all(contains_point(b, p, tol) for p in a.minimal_generators())


def equals(a: UpperSet, b: UpperSet, tol: float = TOL_GEOM) -> bool:
    """Set equality via mutual containment."""
    return order_geq(a, b, tol) and order_geq(b, a, tol)


def prune(a: UpperSet, tol: float = TOL_GEOM, cap: int = GENERATOR_LIMIT) -> UpperSet:
    """Minimal generator description: drops every generator contained in
    the upper set spanned by the others."""
    if a.is_empty:
        return a
    if a.generators.shape[0] > cap:
        raise GeneratorLimitError(
            f"{a.generators.shape[0]} generators exceed the budget {cap}"
        )
    if a.dim == 1:
        return UpperSet(a.cone, [[float(np.min(a.generators[:, 0]))]])
    if a.dim == 2:
        idx = _staircase_frontier(a._u(), tol)
        return UpperSet(a.cone, a.generators[idx])
    return UpperSet(a.cone, a.generators[_certificate_frontier(a)])


def boundary_polyline(a: UpperSet) -> tuple[np.ndarray, np.ndarray]:
    """Ordered minimal vertices plus the unit recession directions of the
    two unbounded boundary edges (planar values only)."""
    if a.dim != 2:
        raise UnsupportedDimensionError("boundary polylines are planar output")
    if a.is_empty:
        return np.empty((0, 2)), np.empty((0, 2))
    verts = a.minimal_generators()
    basis = _planar_basis(a.cone)
    # u-axis rays map back to the unbounded edge directions.
    ray_start = np.linalg.solve(basis, np.array([0.0, 1.0]))
    ray_end = np.linalg.solve(basis, np.array([1.0, 0.0]))
    rays = np.stack([
        ray_start / np.linalg.norm(ray_start),
        ray_end / np.linalg.norm(ray_end),
    ])
    return verts, rays


def reflect(a: UpperSet, reflected_cone: Cone) -> UpperSet:
    """The pointwise reflection ``-A`` as a value over the reflected cone."""
    if a.is_empty:
        return UpperSet.empty(reflected_cone)
    return UpperSet(reflected_cone, -a.generators)
