"""Lattice self-similar fractal strings.

A string is built from M >= 2 contraction ratios and K >= 1 gaps with
sum(ratios) + sum(gaps) = 1 on an interval of total length L.  Its geometric
zeta function is L^s * sum g_k^s / (1 - sum r_j^s); the poles (complex
dimensions) form a rank-1 ideal crystal in the plane with lattice spacing p
along the imaginary axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import dirichlet
from .dirichlet import DirichletPolynomial, RootSet, strip_bounds, tile_roots
from .errors import CancellationRisk, CapExceeded, ConstraintViolation, NearPole
from .lattice import IdealCrystal, LatticeBasis

SUM_TOL = 1e-12
POLE_GUARD = 1e-9
DEFAULT_LENGTH_CAP = 10**7


@dataclass(frozen=True)
class StringSpec:
    """Validated lattice self-similar string.

    scaling_ratios keeps repetitions (multiplicity by repetition); gaps are
    stored nonincreasing.  lattice_form is the normalized Dirichlet polynomial
    of the zeta denominator.
    """

    total_length: object
    scaling_ratios: tuple
    gaps: tuple
    lattice_form: DirichletPolynomial


def _exactish(values):
    return tuple(Fraction(v) if isinstance(v, (Fraction, int, str)) else float(v)
                 for v in values)


def validate(total_length, scaling_ratios, gaps) -> StringSpec:
    """Check the string invariants and attach the lattice Dirichlet polynomial."""
    ratios = _exactish(scaling_ratios)
    gap_list = sorted(_exactish(gaps), reverse=True)
    if len(ratios) < 2:
        raise ConstraintViolation("need at least M = 2 scaling ratios")
    if len(gap_list) < 1:
        raise ConstraintViolation("need at least K = 1 gap")
    L = Fraction(total_length) if isinstance(total_length, (Fraction, int, str)) \
        else float(total_length)
    if float(L) <= 0:
        raise ConstraintViolation("total length must be positive")
    if any(not (0 < float(x) < 1) for x in ratios + tuple(gap_list)):
        raise ConstraintViolation("ratios and gaps must lie in (0, 1)")
    total = sum(ratios) + sum(gap_list)
    if abs(float(total) - 1.0) > SUM_TOL:
        raise ConstraintViolation(f"sum(ratios) + sum(gaps) = {float(total)} != 1")
    if float(sum(ratios)) >= 1.0:
        raise ConstraintViolation("sum of scaling ratios must be < 1")
    exact = all(isinstance(x, Fraction) for x in ratios)
    if not exact:
        raise ConstraintViolation(
            "scaling ratios must be supplied exactly (rationals) for lattice "
            "classification; use dirichlet.rationalize_ratio explicitly for floats")
    poly = dirichlet.from_scaling_ratios(ratios)
    return StringSpec(L, ratios, tuple(gap_list), poly)


def geometric_zeta(spec: StringSpec, s: complex) -> complex:
    """zeta(s) = L^s sum_k g_k^s / (1 - sum_j r_j^s), guarded near poles."""
    s = complex(s)
    L = float(spec.total_length)
    num = L ** s * sum(float(g) ** s for g in spec.gaps)
    den = 1.0 - sum(float(r) ** s for r in spec.scaling_ratios)
    if abs(den) < POLE_GUARD:
        raise NearPole(abs(den))
    return num / den


def zeta_tail_bound(spec: StringSpec, s: float, depth: int) -> float:
    """Geometric bound on sum of lengths^s over words longer than depth (real s > D)."""
    rs = sum(float(r) ** s for r in spec.scaling_ratios)
    if rs >= 1:
        raise ConstraintViolation("tail bound requires real s above the dimension D")
    L = float(spec.total_length)
    gs = L ** s * sum(float(g) ** s for g in spec.gaps)
    return rs ** (depth + 1) / (1.0 - rs) * gs


def enumerate_lengths(spec: StringSpec, depth: int,
                      cap: int = DEFAULT_LENGTH_CAP) -> list:
    """All interval lengths L * (ratio word product) * g_k for words of length
    <= depth, sorted nonincreasing.  Exact Fractions in, exact Fractions out."""
    if depth < 0:
        raise ConstraintViolation("depth must be nonnegative")
    M, K = len(spec.scaling_ratios), len(spec.gaps)
    count = K * (M ** (depth + 1) - 1) // (M - 1)
    if count > cap:
        raise CapExceeded(f"enumeration would produce {count} lengths (cap {cap})")
    L = spec.total_length
    products = [L]
    lengths = []
    for level in range(depth + 1):
        for prod in products:
            for g in spec.gaps:
                lengths.append(prod * g)
        if level < depth:
            products = [prod * r for prod in products for r in spec.scaling_ratios]
    lengths.sort(reverse=True)
    return lengths


def _single_gap_class(spec: StringSpec) -> bool:
    """True when all log(g_k * L) are commensurable with log r, so the zeta
    numerator cannot cancel denominator roots."""
    if len(set(spec.gaps)) == 1:
        return True
    r = spec.lattice_form.generator_r
    if not isinstance(r, Fraction):
        return False
    L = spec.total_length
    if not isinstance(L, Fraction):
        return False
    for g in spec.gaps:
        x = g * L
        if not isinstance(x, Fraction):
            return False
        if dirichlet._rational_log_ratio(x, r) is None:
            return False
    return True


def dimension_crystal(spec: StringSpec, t_max: float,
                      tol: float = dirichlet.DEFAULT_ROOT_TOL):
    """The complex dimensions of the string as a rank-1 ideal crystal.

    Coordinates in C ~ R^2 are ordered (imaginary, real) so the periodic
    direction occupies the lattice coordinate.  Returns (crystal, window)
    where window lists the tiled roots with |Im| <= t_max in the same
    coordinate convention.
    """
    if not _single_gap_class(spec):
        raise CancellationRisk(
            "gap logarithms are not commensurable with log r; numerator roots "
            "may cancel poles")
    rootset = dirichlet.solve(spec.lattice_form, tol=tol)
    p = rootset.period_p
    lines = rootset.lines()
    for _, mult in lines:
        if mult > 1:
            raise ConstraintViolation(
                "repeated principal roots would duplicate crystal translates")
    translates = tuple((omega.imag, omega.real) for omega, _ in lines)
    crystal = IdealCrystal(LatticeBasis(((p,),)), 1, translates)
    window = [((cd.value.imag, cd.value.real), cd.line_index, cd.n, cd.multiplicity)
              for cd in tile_roots(rootset, t_max)]
    window.sort()
    return crystal, window
