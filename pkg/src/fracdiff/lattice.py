"""Lattice algebra: bases, duals, the degenerate embedding, and point enumeration.

A rank-m lattice is held as an m x m basis matrix whose *columns* are the
basis vectors.  An ideal crystal is such a lattice embedded into m + d
dimensions (zero-padding the last d coordinates) plus a finite set of
translates in the ambient space.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .errors import CapExceeded, ConstraintViolation, SingularBasis

SINGULARITY_THRESHOLD = 1e-12
DEFAULT_POINT_CAP = 10**8
# Closed-box membership and displacement matching tolerance in float mode.
COORD_TOL = 1e-9


def _as_float_matrix(columns) -> np.ndarray:
    mat = np.array(columns, dtype=float).T  # columns -> matrix with basis vectors as columns
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ConstraintViolation("basis must be a square set of m vectors in R^m")
    return mat


@dataclass(frozen=True)
class LatticeBasis:
    """Full-rank lattice basis; ``columns[i]`` is the i-th basis vector."""

    columns: tuple

    def __post_init__(self):
        cols = tuple(tuple(v) for v in self.columns)
        object.__setattr__(self, "columns", cols)
        if len(cols) < 1:
            raise ConstraintViolation("lattice rank must be >= 1")
        mat = _as_float_matrix(cols)
        if abs(np.linalg.det(mat)) <= SINGULARITY_THRESHOLD:
            raise SingularBasis(f"|det| = {abs(np.linalg.det(mat)):.3e} below threshold")

    @property
    def m(self) -> int:
        return len(self.columns)

    @property
    def matrix(self) -> np.ndarray:
        return _as_float_matrix(self.columns)


def determinant(basis: LatticeBasis) -> float:
    """Covolume |det B|; invariant under unimodular changes of basis."""
    det = abs(np.linalg.det(basis.matrix))
    if det <= SINGULARITY_THRESHOLD:
        raise SingularBasis(f"|det| = {det:.3e} below threshold")
    return float(det)


def dual_basis(basis: LatticeBasis) -> LatticeBasis:
    """Basis (B^-1)^T of the dual lattice {x : x.y in Z for all y}."""
    mat = basis.matrix
    if abs(np.linalg.det(mat)) <= SINGULARITY_THRESHOLD:
        raise SingularBasis("cannot invert a singular basis")
    dual = np.linalg.inv(mat).T
    return LatticeBasis(tuple(tuple(col) for col in dual.T))


def embed(point, d: int) -> np.ndarray:
    """Zero-pad a point of R^m into R^(m+d)."""
    vec = np.atleast_1d(np.asarray(point, dtype=float))
    if d < 0:
        raise ConstraintViolation("degenerate dimension count d must be >= 0")
    return np.concatenate([vec, np.zeros(d)])


@dataclass(frozen=True)
class IdealCrystal:
    """X = T(Lambda) + F: a rank-m lattice embedded in R^(m+d) plus translates."""

    basis: LatticeBasis
    d: int
    translates: tuple

    def __post_init__(self):
        if self.d < 0:
            raise ConstraintViolation("d must be a nonnegative integer")
        trs = tuple(tuple(float(c) for c in t) for t in self.translates)
        object.__setattr__(self, "translates", trs)
        if not trs:
            raise ConstraintViolation("translate set F must be nonempty")
        n = self.basis.m + self.d
        for t in trs:
            if len(t) != n:
                raise ConstraintViolation(
                    f"translate {t} has dimension {len(t)}, ambient dimension is {n}"
                )
        for i, a in enumerate(trs):
            for b in trs[i + 1:]:
                if max(abs(x - y) for x, y in zip(a, b)) <= COORD_TOL:
                    raise ConstraintViolation(f"duplicate translates {a} and {b}")

    @property
    def m(self) -> int:
        return self.basis.m

    @property
    def ambient_dim(self) -> int:
        return self.basis.m + self.d

    @property
    def translate_matrix(self) -> np.ndarray:
        return np.array(self.translates, dtype=float)

    def shifted(self, v) -> "IdealCrystal":
        v = np.asarray(v, dtype=float)
        return IdealCrystal(self.basis, self.d,
                            tuple(tuple(np.asarray(t) + v) for t in self.translates))


@dataclass(frozen=True)
class Region:
    """Axis-aligned closed box: center +- half_widths."""

    center: tuple
    half_widths: tuple

    def __post_init__(self):
        c = tuple(float(x) for x in self.center)
        h = tuple(float(x) for x in self.half_widths)
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "half_widths", h)
        if len(c) != len(h):
            raise ConstraintViolation("center and half_widths must have equal length")
        if any(x <= 0 for x in h):
            raise ConstraintViolation("all half_widths must be positive")

    @property
    def n(self) -> int:
        return len(self.center)

    def contains(self, point, tol: float = COORD_TOL) -> bool:
        p = np.asarray(point, dtype=float)
        c = np.asarray(self.center)
        h = np.asarray(self.half_widths)
        return bool(np.all(np.abs(p - c) <= h + tol))


class LatticePoint(NamedTuple):
    point: tuple
    lattice_coords: tuple
    translate_index: int


def _integer_ranges(matrix: np.ndarray, lo: np.ndarray, hi: np.ndarray):
    """Per-axis integer coordinate ranges covering {a : matrix @ a in [lo, hi]}."""
    inv = np.linalg.inv(matrix)
    m = matrix.shape[0]
    corners = np.array(list(itertools.product(*zip(lo, hi))))  # 2^m box corners
    coords = corners @ inv.T
    mins = np.floor(coords.min(axis=0) - COORD_TOL).astype(int)
    maxs = np.ceil(coords.max(axis=0) + COORD_TOL).astype(int)
    return mins, maxs


def enumerate_points(crystal: IdealCrystal, region: Region,
                     cap: int = DEFAULT_POINT_CAP) -> list[LatticePoint]:
    """All points of X inside the closed box, in ascending lexicographic order.

    Each point is tagged with its integer lattice coordinates and translate
    index, so downstream pair counting can work in exact index space.
    """
    m, d = crystal.m, crystal.d
    if region.n != crystal.ambient_dim:
        raise ConstraintViolation("region dimension must match the ambient dimension")
    B = crystal.basis.matrix
    center = np.asarray(region.center)
    half = np.asarray(region.half_widths)
    out = []
    for j, t in enumerate(crystal.translates):
        t = np.asarray(t)
        # Degenerate coordinates are fixed by the translate alone.
        if d and np.any(np.abs(t[m:] - center[m:]) > half[m:] + COORD_TOL):
            continue
        lo = center[:m] - half[:m] - t[:m]
        hi = center[:m] + half[:m] - t[:m]
        mins, maxs = _integer_ranges(B, lo, hi)
        count = int(np.prod((maxs - mins + 1).astype(float)))
        if count > cap:
            raise CapExceeded(f"candidate lattice box holds {count} points (cap {cap})")
        grids = np.meshgrid(*[np.arange(a, b + 1) for a, b in zip(mins, maxs)],
                            indexing="ij")
        coords = np.stack([g.ravel() for g in grids], axis=-1)
        pts_m = coords @ B.T + t[:m]
        inside = np.all(np.abs(pts_m - center[:m]) <= half[:m] + COORD_TOL, axis=1)
        for a, p in zip(coords[inside], pts_m[inside]):
            full = tuple(p) + tuple(t[m:])
            out.append(LatticePoint(full, tuple(int(x) for x in a), j))
        if len(out) > cap:
            raise CapExceeded(f"point count exceeds cap {cap}")
    out.sort(key=lambda rec: rec.point)
    return out


def _group_displacements(pairs):
    """Merge (displacement, count) items whose vectors agree within COORD_TOL."""
    pairs = sorted(pairs, key=lambda it: it[0])
    merged = []
    for vec, cnt in pairs:
        if merged and max(abs(a - b) for a, b in zip(merged[-1][0], vec)) <= COORD_TOL:
            merged[-1][1] += cnt
        else:
            merged.append([vec, cnt])
    return [(tuple(v), c) for v, c in merged]


def displacement_index(crystal: IdealCrystal, lattice_radius: float,
                       cap: int = DEFAULT_POINT_CAP) -> dict:
    """Displacement multiset of X - X, keyed by integer lattice coordinates.

    For each lattice point a = B @ coords with |a| <= lattice_radius, the value
    is the list of distinct displacement vectors T(a) + (f_j - f_k) with their
    ordered-pair counts; the counts sum to |F|^2 for every a.
    """
    if lattice_radius <= 0:
        raise ConstraintViolation("lattice_radius must be positive")
    B = crystal.basis.matrix
    m, d = crystal.m, crystal.d
    lo = -lattice_radius * np.ones(m)
    hi = lattice_radius * np.ones(m)
    mins, maxs = _integer_ranges(B, lo, hi)
    count = int(np.prod((maxs - mins + 1).astype(float)))
    if count > cap:
        raise CapExceeded(f"lattice candidate count {count} exceeds cap {cap}")
    F = crystal.translate_matrix
    index = {}
    for coords in itertools.product(*[range(a, b + 1) for a, b in zip(mins, maxs)]):
        a_vec = B @ np.array(coords, dtype=float)
        if np.linalg.norm(a_vec) > lattice_radius + COORD_TOL:
            continue
        Ta = embed(a_vec, d)
        pairs = []
        for fj in F:
            for fk in F:
                pairs.append((tuple(Ta + fj - fk), 1))
        index[coords] = _group_displacements(pairs)
    return index
