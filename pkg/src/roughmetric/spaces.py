"""Controlled metric type spaces over finite point sets.

A controlled metric type space is a point set X with a distance table d and a
control table alpha: X x X -> [1, oo) satisfying

    (d1)  d(x, y) = 0  iff  x = y
    (d2)  d(x, y) = d(y, x)
    (d3)  d(x, y) <= alpha(x, z) d(x, z) + alpha(z, y) d(z, y)   for all x, y, z.

This module validates the axioms exhaustively over all ordered triples, builds
immutable validated spaces, and provides ball / diameter / restriction queries.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from itertools import combinations
from typing import Hashable, Iterable, Sequence

import numpy as np

PointId = Hashable

DEFAULT_TOLERANCE = 1e-9
TOLERANCE_ENV_VAR = "ROUGHMETRIC_TOL"


def _read_tolerance() -> float:
    raw = os.environ.get(TOLERANCE_ENV_VAR)
    if raw is None:
        return DEFAULT_TOLERANCE
    try:
        tol = float(raw)
    except ValueError as exc:
        raise ValueError(f"{TOLERANCE_ENV_VAR} must be a float, got {raw!r}") from exc
    if not (tol >= 0 and math.isfinite(tol)):
        raise ValueError(f"{TOLERANCE_ENV_VAR} must be finite and >= 0, got {tol}")
    return tol


#: Absolute slack applied to inequality boundaries only: ``a <= b`` is tested
#: as ``a <= b + TOLERANCE`` and ``a < b`` as ``a < b - TOLERANCE``.
#: Equalities (zero diagonal, symmetry) are always exact.
TOLERANCE = _read_tolerance()


def leq(a: float, b: float) -> bool:
    """Tolerant ``a <= b``."""
    return a <= b + TOLERANCE


def lt(a: float, b: float) -> bool:
    """Tolerant strict ``a < b`` (the dual of :func:`leq`)."""
    return a < b - TOLERANCE


class ShapeError(ValueError):
    """Malformed tables: wrong shape, bad entries, bad point list.

    Distinct from an axiom violation, which is reported through
    :class:`ValidationResult`, never raised from here.
    """


class InvalidSpaceError(ValueError):
    """Raised by :func:`build_space` when a :class:`SpaceSpec` fails the axioms."""

    def __init__(self, result: "ValidationResult"):
        self.result = result
        first = result.violations[0]
        super().__init__(
            f"space violates axiom {first.axiom} at {first.points}: "
            f"{first.lhs!r} vs {first.rhs!r} "
            f"({len(result.violations)} violation(s) total)"
        )


@dataclass(frozen=True)
class Violation:
    """One failed axiom instance: which axiom, where, and both sides."""

    axiom: str  # "d1" | "d2" | "d3" | "alpha"
    points: tuple
    lhs: float
    rhs: float


@dataclass(frozen=True)
class ValidationResult:
    violations: tuple[Violation, ...] = ()

    @property
    def valid(self) -> bool:
        return not self.violations


@dataclass(frozen=True, eq=False)
class SpaceSpec:
    """Raw space data prior to axiom validation.

    ``dist`` and ``alpha`` are n x n row-major tables indexed by the order of
    ``points``. Construction enforces structure only (square, size-matched,
    distances >= 0, alpha finite); the axioms are checked by
    :func:`validate_axioms`.
    """

    points: tuple
    dist: np.ndarray
    alpha: np.ndarray

    def __post_init__(self):
        points = tuple(self.points)
        if not points:
            raise ShapeError("points must be nonempty")
        if len(set(points)) != len(points):
            raise ShapeError("points must be distinct")
        n = len(points)
        try:
            dist = np.asarray(self.dist, dtype=float).copy()
            alpha = np.asarray(self.alpha, dtype=float).copy()
        except (TypeError, ValueError) as exc:
            raise ShapeError(f"tables must be numeric and rectangular: {exc}") from exc
        if dist.shape != (n, n):
            raise ShapeError(f"dist must be {n}x{n}, got {dist.shape}")
        if alpha.shape != (n, n):
            raise ShapeError(f"alpha must be {n}x{n}, got {alpha.shape}")
        if np.isnan(dist).any() or (dist < 0).any():
            raise ShapeError("dist entries must be non-negative reals")
        if not np.isfinite(alpha).all():
            raise ShapeError("alpha entries must be finite")
        dist.setflags(write=False)
        alpha.setflags(write=False)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "dist", dist)
        object.__setattr__(self, "alpha", alpha)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SpaceSpec):
            return NotImplemented
        return (
            self.points == other.points
            and np.array_equal(self.dist, other.dist)
            and np.array_equal(self.alpha, other.alpha)
        )

    @property
    def n(self) -> int:
        return len(self.points)


def validate_axioms(spec: SpaceSpec) -> ValidationResult:
    """Check every axiom exhaustively; n^3 triple evaluations for (d3).

    All ordered triples are scanned, including the degenerate ones with
    z in {x, y} (they hold automatically when alpha >= 1, but scanning them
    catches table corruption). Returns all violations found, each as a
    witness carrying the axiom id, the offending points, and both sides of
    the failed (in)equality.
    """
    d, a, pts = spec.dist, spec.alpha, spec.points
    n = spec.n
    if d.shape != (n, n) or a.shape != (n, n):
        raise ShapeError("tables do not match the point list")
    violations: list[Violation] = []

    # (d1) exact: zero diagonal, positive off-diagonal
    for i in np.flatnonzero(np.diagonal(d) != 0.0):
        violations.append(Violation("d1", (pts[i], pts[i]), float(d[i, i]), 0.0))
    off_zero = (d == 0.0) & ~np.eye(n, dtype=bool)
    for i, j in np.argwhere(off_zero):
        violations.append(Violation("d1", (pts[i], pts[j]), 0.0, 0.0))

    # (d2) exact symmetry
    asym = d != d.T
    for i, j in np.argwhere(np.triu(asym, 1)):
        violations.append(Violation("d2", (pts[i], pts[j]), float(d[i, j]), float(d[j, i])))

    # alpha >= 1 (tolerant boundary)
    for i, j in np.argwhere(a < 1.0 - TOLERANCE):
        violations.append(Violation("alpha", (pts[i], pts[j]), float(a[i, j]), 1.0))

    # (d3) over all ordered triples: d[x,y] <= m[x,z] + m[z,y], m = alpha*dist
    m = a * d
    rhs = m[:, None, :] + m.T[None, :, :]  # rhs[x, y, z]
    bad = d[:, :, None] > rhs + TOLERANCE
    for x, y, z in np.argwhere(bad):
        violations.append(
            Violation("d3", (pts[x], pts[y], pts[z]), float(d[x, y]), float(rhs[x, y, z]))
        )

    return ValidationResult(tuple(violations))


@dataclass(frozen=True, eq=False)
class ControlledSpace:
    """A validated controlled metric type space.

    ``sup_alpha`` is the largest control value (the constant scaling every
    rough-convergence bound); ``min_positive_dist`` is the smallest nonzero
    distance, or +inf for a single-point space.
    """

    spec: SpaceSpec
    sup_alpha: float
    min_positive_dist: float

    def __post_init__(self):
        index = {p: i for i, p in enumerate(self.spec.points)}
        rows = tuple(tuple(float(v) for v in row) for row in self.spec.dist)
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_rows", rows)
        object.__setattr__(self, "_point_set", frozenset(self.spec.points))

    @property
    def points(self) -> tuple:
        return self.spec.points

    @property
    def dist(self) -> np.ndarray:
        return self.spec.dist

    @property
    def alpha(self) -> np.ndarray:
        return self.spec.alpha

    @property
    def n(self) -> int:
        return self.spec.n

    def __contains__(self, point) -> bool:
        return point in self._point_set

    def contains_all(self, points: Iterable) -> bool:
        return self._point_set.issuperset(points)

    def index(self, point) -> int:
        try:
            return self._index[point]
        except KeyError:
            raise ValueError(f"unknown point {point!r}") from None

    def distance(self, x, y) -> float:
        return self._rows[self.index(x)][self.index(y)]

    def control(self, x, y) -> float:
        return float(self.spec.alpha[self.index(x), self.index(y)])

    def ordered(self, subset: Iterable) -> tuple:
        """Subset as a tuple in this space's canonical point order."""
        idx = sorted(self.index(p) for p in set(subset))
        return tuple(self.spec.points[i] for i in idx)


def build_space(spec: SpaceSpec) -> ControlledSpace:
    """Validate ``spec`` and return the space with its cached constants.

    Raises :class:`InvalidSpaceError` (carrying the full witness list) if any
    axiom fails.
    """
    result = validate_axioms(spec)
    if not result.valid:
        raise InvalidSpaceError(result)
    positive = spec.dist[spec.dist > 0]
    min_pos = float(positive.min()) if positive.size else math.inf
    return ControlledSpace(
        spec=spec,
        sup_alpha=float(spec.alpha.max()),
        min_positive_dist=min_pos,
    )


def paper_example_spec(n: int) -> SpaceSpec:
    """The parity-based space on {1, .., n}.

    Distances: 0 on the diagonal; 1/sqrt(even argument) between an even and
    an odd point; 1 otherwise. Controls: sqrt(even argument) between an even
    and an odd point; 1 otherwise. Any finite truncation of the infinite
    space satisfies the axioms, since they are universally quantified.
    """
    if n < 2:
        raise ValueError(f"need at least 2 points, got {n}")
    points = tuple(range(1, n + 1))
    dist = np.zeros((n, n))
    alpha = np.ones((n, n))
    for i, x in enumerate(points):
        for j, y in enumerate(points):
            if x == y:
                continue
            if x % 2 == 0 and y % 2 == 1:
                dist[i, j] = 1.0 / math.sqrt(x)
                alpha[i, j] = math.sqrt(x)
            elif x % 2 == 1 and y % 2 == 0:
                dist[i, j] = 1.0 / math.sqrt(y)
                alpha[i, j] = math.sqrt(y)
            else:
                dist[i, j] = 1.0
    return SpaceSpec(points=points, dist=dist, alpha=alpha)


@dataclass(frozen=True)
class Ball:
    center: PointId
    radius: float
    kind: str  # "open" | "closed"
    members: frozenset = field(default_factory=frozenset)


def ball(space: ControlledSpace, center, radius: float, kind: str = "open") -> Ball:
    """Members at distance < radius (open) or <= radius (closed) from center."""
    if kind not in ("open", "closed"):
        raise ValueError(f"kind must be 'open' or 'closed', got {kind!r}")
    if radius < 0:
        raise ValueError(f"radius must be >= 0, got {radius}")
    row = space.dist[space.index(center)]
    if kind == "closed":
        hit = row <= radius + TOLERANCE
    else:
        hit = row < radius - TOLERANCE
    members = frozenset(space.points[i] for i in np.flatnonzero(hit))
    return Ball(center=center, radius=float(radius), kind=kind, members=members)


def diameter(space: ControlledSpace, subset: Iterable) -> float:
    """Largest pairwise distance over ``subset``; 0 for empty or singleton sets."""
    idx = [space.index(p) for p in set(subset)]
    if len(idx) <= 1:
        return 0.0
    sub = space.dist[np.ix_(idx, idx)]
    return float(sub.max())


def restrict(space: ControlledSpace, subset: Iterable) -> ControlledSpace:
    """Sub-space on ``subset`` (space point order kept); re-validated on build."""
    keep = set(subset)
    if not keep:
        raise ValueError("cannot restrict to an empty subset")
    idx = [i for i, p in enumerate(space.points) if p in keep]
    if len(idx) != len(keep):
        missing = keep - set(space.points)
        raise ValueError(f"unknown points {sorted(map(repr, missing))}")
    sub = np.ix_(idx, idx)
    spec = SpaceSpec(
        points=tuple(space.points[i] for i in idx),
        dist=space.dist[sub],
        alpha=space.alpha[sub],
    )
    return build_space(spec)


def pairwise_max_distance(space: ControlledSpace, values: Sequence) -> float:
    """Max distance over unordered pairs of ``values`` (0 if fewer than 2)."""
    distinct = space.ordered(values)
    if len(distinct) <= 1:
        return 0.0
    return max(space.distance(x, y) for x, y in combinations(distinct, 2))
