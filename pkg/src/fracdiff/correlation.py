"""Empirical pair-correlation counting and the closed-form autocorrelation.

Pair counts are taken over the averaging box whose lattice-direction sides
grow with L while the d degenerate sides stay fixed at C, so the normalized
frequencies N_L(a) / (C^d L^m) converge to c(a) / (C^d |det B|), where c(a)
counts the ordered translate pairs realizing the displacement a.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .diffraction import GaussianAtom, TestFunction, _atoms, \
    averaging_constant, gaussian_lattice_sum, TruncatedValue
from .errors import ConstraintViolation, TranslatesOutsideBox
from .lattice import (COORD_TOL, IdealCrystal, Region, determinant,
                      displacement_index, enumerate_points)

# Crystals whose distinct displacements are closer than this are ambiguous to
# bin in float mode and are rejected.
MIN_DISPLACEMENT_GAP = 1e-8


@dataclass(frozen=True)
class DisplacementTable:
    """Ordered-pair counts N_L(a) keyed by canonical displacement vectors."""

    entries: dict
    L: float
    region: Region
    C_const: float
    m: int
    d: int
    point_count: int

    def frequency(self, a) -> float:
        return self.entries.get(tuple(a), 0) / (self.C_const ** self.d * self.L ** self.m)


def _recentered(crystal: IdealCrystal) -> IdealCrystal:
    """Shift the d-coordinates of F so their midrange per axis is 0."""
    if crystal.d == 0:
        return crystal
    F = crystal.translate_matrix
    mid = 0.5 * (F[:, crystal.m:].max(axis=0) + F[:, crystal.m:].min(axis=0))
    shift = np.concatenate([np.zeros(crystal.m), -mid])
    return crystal.shifted(shift)


def averaging_region(crystal: IdealCrystal, L: float) -> Region:
    """Centered box with half-width L/2 in the m lattice directions and C/2 in
    the d degenerate directions (volume C^d L^m); the crystal is recentered
    first so the translates fit whenever their d-extent allows it."""
    if L <= 0:
        raise ConstraintViolation("averaging scale L must be positive")
    C = averaging_constant(crystal)
    m, d = crystal.m, crystal.d
    recentered = _recentered(crystal)
    if d:
        Fd = recentered.translate_matrix[:, m:]
        if np.abs(Fd).max() > C / 2.0 + COORD_TOL:
            raise TranslatesOutsideBox(
                f"translate extent {np.abs(Fd).max():.6g} exceeds C/2 = {C/2:.6g}")
    return Region(tuple([0.0] * (m + d)),
                  tuple([L / 2.0] * m + [C / 2.0] * d))


def count_displacements(crystal: IdealCrystal, L: float,
                        cap: int = 10**8) -> DisplacementTable:
    """Exact ordered-pair displacement counts over the averaging region.

    Displacements are formed in integer index space (lattice-coordinate
    difference plus translate pair), so equal displacements bin exactly; the
    canonical vectors of distinct bins must be >= 1e-8 apart.
    """
    C = averaging_constant(crystal)
    region = averaging_region(crystal, L)
    recentered = _recentered(crystal)
    points = enumerate_points(recentered, region, cap=cap)
    if len(points) ** 2 > cap:
        raise ConstraintViolation(f"{len(points)}^2 ordered pairs exceed cap {cap}")

    coords = np.array([p.lattice_coords for p in points], dtype=np.int64)
    trans = np.array([p.translate_index for p in points], dtype=np.int64)
    B = crystal.basis.matrix
    F = recentered.translate_matrix
    m, d = crystal.m, crystal.d

    # Key pairs by (lattice difference, j, k); then map each key to its
    # canonical displacement vector and merge keys that coincide.  The pair
    # (x1, x2) contributes to the displacement x2 - x1.
    raw = []
    for j in range(len(F)):
        cj = coords[trans == j]
        if not len(cj):
            continue
        for k in range(len(F)):
            ck = coords[trans == k]
            if not len(ck):
                continue
            lam = (cj[:, None, :] - ck[None, :, :]).reshape(-1, m)
            uniq, counts = np.unique(lam, axis=0, return_counts=True)
            vec_m = uniq.astype(float) @ B.T + (F[j, :m] - F[k, :m])
            vec_d = F[j, m:] - F[k, m:]
            for row, cnt in zip(vec_m, counts):
                raw.append((tuple(row) + tuple(vec_d), int(cnt)))
    raw.sort(key=lambda it: it[0])
    entries = {}
    last = None
    for vec, cnt in raw:
        gap = max(abs(a - b) for a, b in zip(last, vec)) if last is not None else None
        if gap is not None and gap <= COORD_TOL:
            # Same displacement reached through another (j, k); keep the first
            # canonical vector as the bin key.
            entries[last] += cnt
        else:
            if gap is not None and gap < MIN_DISPLACEMENT_GAP:
                raise ConstraintViolation(
                    f"distinct displacements {last} and {vec} closer than "
                    f"{MIN_DISPLACEMENT_GAP} (ambiguous binning)")
            entries[vec] = cnt
            last = vec
    return DisplacementTable(entries, float(L), region, C, m, d, len(points))


def empirical_frequency(table: DisplacementTable) -> dict:
    """n_hat(a) = N_L(a) / (C^d L^m) for every displacement in the table."""
    norm = table.C_const ** table.d * table.L ** table.m
    return {a: cnt / norm for a, cnt in table.entries.items()}


def closed_form_frequency(crystal: IdealCrystal, lattice_radius: float) -> dict:
    """Limit frequencies c(a) / (C^d |det B|) for displacements with lattice
    part within the given radius."""
    C = averaging_constant(crystal)
    det = determinant(crystal.basis)
    out = {}
    for pairs in displacement_index(crystal, lattice_radius).values():
        for vec, cnt in pairs:
            out[vec] = out.get(vec, 0.0) + cnt / (C ** crystal.d * det)
    return out


def autocorrelation_apply(crystal: IdealCrystal, phi, eps: float = 1e-12,
                          C: float | None = None) -> TruncatedValue:
    """Closed-form autocorrelation applied to a Gaussian test function:

        (1/(C^d |det B|)) sum_{a in Lambda} sum_{j,k} phi(T(a) + f_j - f_k),

    with the lattice sum truncated where the Gaussian envelope bounds the
    omitted tail by eps.  Pass C explicitly to hold the averaging constant
    fixed (e.g. when comparing a crystal against a shifted copy)."""
    det = determinant(crystal.basis)
    C = averaging_constant(crystal) if C is None else float(C)
    m, d = crystal.m, crystal.d
    atoms = _atoms(phi)
    if atoms[0].dim != m + d:
        raise ConstraintViolation("test function must live on R^(m+d)")
    B = crystal.basis.matrix
    F = crystal.translate_matrix
    prefactor = 1.0 / (C ** d * det)
    per_term_eps = eps / (prefactor * len(F) ** 2 * len(atoms))
    d_axes = list(range(m, m + d))

    total = 0.0 + 0.0j
    bound = 0.0
    for fj in F:
        for fk in F:
            delta = fj - fk
            for atom in atoms:
                if d:
                    factor, reduced = atom.restrict(d_axes, delta[m:])
                    reduced = reduced.scaled(factor)
                else:
                    reduced = atom
                val, tail = gaussian_lattice_sum(B, reduced, delta[:m],
                                                 per_term_eps)
                total += val
                bound += tail
    return TruncatedValue(prefactor * total, prefactor * bound)
