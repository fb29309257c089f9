"""Lattice Dirichlet polynomials and their complex roots.

A lattice Dirichlet polynomial f(s) = 1 - sum_j m_j r^(k_j s) is stored by its
multiplicative generator r in (0,1), strictly increasing gcd-1 integer
exponents k_j, and positive integer multiplicities m_j.  Substituting
z = r^s turns f into the sparse polynomial g(z) = 1 - sum_j m_j z^(k_j),
whose k_N roots tile the set of roots of f periodically along vertical lines
with spacing p = 2*pi / log(1/r).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (BracketFailure, ConstraintViolation, NoConvergence,
                     NonLatticeInput, ZeroRoot)

DEFAULT_ROOT_TOL = 1e-12
DEFAULT_MAX_ITER = 10_000
CLUSTER_EPS = 1e-7
BISECTION_TOL = 1e-12


def _exact_power(base: Fraction, expo: Fraction):
    """base**expo as an exact Fraction when possible, else a float."""
    if expo.denominator == 1:
        return base ** expo.numerator
    q = expo.denominator
    num = round(base.numerator ** (1.0 / q))
    den = round(base.denominator ** (1.0 / q))
    if num > 0 and den > 0 and Fraction(num, den) ** q == base:
        return Fraction(num, den) ** expo.numerator
    return float(base) ** float(expo)


@dataclass(frozen=True)
class DirichletPolynomial:
    """f(s) = 1 - sum_j multiplicities[j] * generator_r**(exponents[j] * s)."""

    generator_r: object  # Fraction when exact, float otherwise
    exponents: tuple
    multiplicities: tuple

    def __post_init__(self):
        ks = tuple(int(k) for k in self.exponents)
        ms = tuple(int(m) for m in self.multiplicities)
        object.__setattr__(self, "exponents", ks)
        object.__setattr__(self, "multiplicities", ms)
        if len(ks) != len(ms) or not ks:
            raise ConstraintViolation("exponents and multiplicities must align and be nonempty")
        if any(k <= 0 for k in ks) or list(ks) != sorted(set(ks)):
            raise ConstraintViolation("exponents must be strictly increasing positive integers")
        if math.gcd(*ks) != 1:
            raise ConstraintViolation("exponents must be normalized to gcd 1")
        if any(m <= 0 for m in ms):
            raise ConstraintViolation("multiplicities must be positive integers")
        r = self.generator_r
        if not (0 < float(r) < 1):
            raise ConstraintViolation("generator r must lie in (0, 1)")

    @property
    def r_float(self) -> float:
        return float(self.generator_r)

    @property
    def log_inv_r(self) -> float:
        return -math.log(self.r_float)

    @property
    def degree(self) -> int:
        return self.exponents[-1]

    @property
    def oscillatory_period(self) -> float:
        return 2.0 * math.pi / self.log_inv_r

    @property
    def scaling_ratios(self) -> tuple:
        """Distinct scaling ratios r^(k_j), largest first in j-order."""
        r = self.generator_r
        if isinstance(r, Fraction):
            return tuple(r ** k for k in self.exponents)
        return tuple(self.r_float ** k for k in self.exponents)


def normalize(raw_exponents, raw_r) -> DirichletPolynomial:
    """Scale rational exponents to gcd-1 integers, adjusting the generator.

    raw_exponents are the (positive, strictly increasing) rational exponents q_j
    in f(s) = 1 - sum_j m_j raw_r**(q_j s); multiplicities of repeated exponents
    are aggregated.
    """
    qs = [Fraction(q) for q in raw_exponents]
    if any(q <= 0 for q in qs):
        raise ConstraintViolation("exponents must be positive")
    agg = {}
    for q in qs:
        agg[q] = agg.get(q, 0) + 1
    qs = sorted(agg)
    mult = [agg[q] for q in qs]
    denom_lcm = math.lcm(*[q.denominator for q in qs])
    ints = [int(q * denom_lcm) for q in qs]
    g = math.gcd(*ints)
    ks = [k // g for k in ints]
    scale = Fraction(g, denom_lcm)  # r_new = raw_r**scale
    if isinstance(raw_r, Fraction) or isinstance(raw_r, int):
        r_new = _exact_power(Fraction(raw_r), scale)
    else:
        r_new = float(raw_r) ** float(scale)
    return DirichletPolynomial(r_new, tuple(ks), tuple(mult))


def _rational_log_ratio(x: Fraction, base: Fraction, max_den: int = 10_000):
    """Exact rational q with x == base**q, or None.

    The candidate is guessed in floating point and then verified exactly, so a
    returned value is a proof of multiplicative dependence.
    """
    if x == 1:
        return Fraction(0)
    guess = math.log(float(x)) / math.log(float(base))
    q = Fraction(guess).limit_denominator(max_den)
    if q != 0 and x ** q.denominator == base ** q.numerator:
        return q
    return None


def from_scaling_ratios(ratios) -> DirichletPolynomial:
    """Build the polynomial 1 - sum r_j^s from exact rational scaling ratios.

    Repeated ratios aggregate into multiplicities.  Raises NonLatticeInput when
    the distinct ratios are not all integer powers of a common generator.
    """
    rs = [Fraction(r) for r in ratios]
    if any(not (0 < r < 1) for r in rs):
        raise ConstraintViolation("scaling ratios must lie in (0, 1)")
    agg = {}
    for r in rs:
        agg[r] = agg.get(r, 0) + 1
    distinct = sorted(agg, reverse=True)  # r_1 > r_2 > ... (k_1 < k_2 < ...)
    mult = [agg[r] for r in distinct]
    base = distinct[0]
    ratios_q = []
    for r in distinct:
        q = _rational_log_ratio(r, base)
        if q is None or q <= 0:
            raise NonLatticeInput(f"log({r})/log({base}) is not a (positive) rational")
        ratios_q.append(q)  # w_j / w_1
    qden = math.lcm(*[q.denominator for q in ratios_q])
    ints = [int(q * qden) for q in ratios_q]
    g = math.gcd(*ints)
    ks = [k // g for k in ints]
    r_gen = _exact_power(base, Fraction(g, qden))
    return DirichletPolynomial(r_gen, tuple(ks), tuple(mult))


def rationalize_ratio(x: float, y: float, max_den: int = 1000):
    """HEURISTIC continued-fraction guess for log(x)/log(y); never applied
    silently by the library.  Returns a Fraction or None."""
    if not (0 < x < 1 and 0 < y < 1):
        return None
    q = Fraction(math.log(x) / math.log(y)).limit_denominator(max_den)
    rel = abs(math.log(x) - float(q) * math.log(y)) / abs(math.log(x))
    return q if rel < 1e-12 else None


def evaluate_f(poly: DirichletPolynomial, s: complex) -> complex:
    """f(s) = 1 - sum_j m_j r^(k_j s)."""
    log_r = math.log(poly.r_float)
    total = 1.0 + 0.0j
    for k, m in zip(poly.exponents, poly.multiplicities):
        total -= m * cmath.exp(k * complex(s) * log_r)
    return total


def to_polynomial(poly: DirichletPolynomial) -> list:
    """Ascending coefficient list of g(z) = 1 - sum_j m_j z^(k_j)."""
    coeffs = [0] * (poly.degree + 1)
    coeffs[0] = 1
    for k, m in zip(poly.exponents, poly.multiplicities):
        coeffs[k] -= m
    return coeffs


def _poly_eval_scale(coeffs_desc: np.ndarray, z: np.ndarray):
    """Horner evaluation plus the backward-error magnitude scale sum |c| |z|^k."""
    val = np.zeros_like(z)
    scale = np.zeros(z.shape, dtype=float)
    absz = np.abs(z)
    for c in coeffs_desc:
        val = val * z + c
        scale = scale * absz + abs(c)
    return val, scale


def solve_roots(coeffs, tol: float = DEFAULT_ROOT_TOL,
                max_iter: int = DEFAULT_MAX_ITER, seed: int = 0):
    """All complex roots of the polynomial given by ascending coefficients.

    Durand-Kerner simultaneous iteration from deterministic circle-distributed
    starting points.  Returns (roots, residuals) with len == degree; raises
    NoConvergence if the relative residual target is not met.
    """
    coeffs = [complex(c) for c in coeffs]
    while coeffs and coeffs[-1] == 0:
        coeffs = coeffs[:-1]
    n = len(coeffs) - 1
    if n < 1:
        raise ConstraintViolation("polynomial degree must be >= 1")
    lead = coeffs[-1]
    c_desc = np.array(coeffs[::-1]) / lead  # monic, descending
    if coeffs[0] != 0:
        radius = 1.05 * abs(coeffs[0] / lead) ** (1.0 / n)
    else:
        radius = 1.05
    rng = np.random.default_rng(seed)
    angles = 2.0 * np.pi * (np.arange(n) + 0.25) / n + 1e-4 * rng.standard_normal(n)
    z = radius * np.exp(1j * angles)

    for it in range(max_iter):
        val, scale = _poly_eval_scale(c_desc, z)
        resid = np.abs(val) / np.maximum(scale, 1e-300)
        if np.all(resid <= tol):
            break
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        denom = diff.prod(axis=1)
        denom = np.where(denom == 0, 1e-300, denom)
        z = z - val / denom
    else:
        raise NoConvergence(max_iter, float(np.abs(val).max()))

    order = np.lexsort((z.imag, z.real))
    z = z[order]
    residuals = np.abs(_poly_eval_scale(np.array(coeffs[::-1]), z)[0])
    return [complex(w) for w in z], [float(r) for r in residuals]


def cluster_roots(roots, eps: float = CLUSTER_EPS):
    """Group near-coincident roots; returns (representative, multiplicity) pairs."""
    roots = sorted(roots, key=lambda w: (w.real, w.imag))
    groups = []
    for w in roots:
        if groups and abs(w - groups[-1][0][-1]) <= eps:
            groups[-1][0].append(w)
        else:
            groups.append([[w]])
    out = []
    for (members,) in groups:
        rep = sum(members) / len(members)
        out.append((rep, len(members)))
    return out


@dataclass(frozen=True)
class RootSet:
    """z-plane roots of g plus their images in the s-plane.

    principal_roots has length deg(g) (multiplicity by repetition) and is
    sorted by nondecreasing real part, then imaginary part; the unique real
    entry equals D and carries the maximum real part.
    """

    roots_z: tuple
    principal_roots: tuple
    residual_bound: float
    period_p: float

    def lines(self, eps: float = CLUSTER_EPS):
        """Distinct principal roots with multiplicities (root clustering)."""
        return cluster_roots(self.principal_roots, eps)


def principal_roots(roots_z, poly: DirichletPolynomial,
                    residuals=None) -> RootSet:
    """Map z-plane roots through omega = (-log|z| - i*arg z) / log(1/r)."""
    log_inv_r = poly.log_inv_r
    omegas = []
    for z in roots_z:
        z = complex(z)
        if z == 0:
            raise ZeroRoot("g(0) = 1, so z = 0 cannot be a root")
        theta = cmath.phase(z)  # in (-pi, pi]
        omegas.append(complex(-math.log(abs(z)) / log_inv_r, -theta / log_inv_r))
    omegas.sort(key=lambda w: (w.real, w.imag))
    bound = max(residuals) if residuals else 0.0
    return RootSet(tuple(complex(z) for z in roots_z), tuple(omegas),
                   float(bound), poly.oscillatory_period)


def _bisect(func, lo: float, hi: float, tol: float = BISECTION_TOL) -> float:
    flo, fhi = func(lo), func(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if flo * fhi > 0:
        raise BracketFailure(f"no sign change on [{lo}, {hi}]")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fmid = func(mid)
        if fmid == 0 or (hi - lo) < tol:
            return mid
        if flo * fmid < 0:
            hi = mid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)


def _scan_bracket(func, sign_lo: int):
    """Expanding scan for an interval where func changes sign.

    sign_lo is the sign func must have at the left end.
    """
    lo, hi = -1.0, 1.0
    for _ in range(60):
        if func(lo) * sign_lo > 0 and func(hi) * sign_lo < 0:
            return lo, hi
        if func(lo) * sign_lo <= 0:
            lo *= 2
        if func(hi) * sign_lo >= 0:
            hi *= 2
        if abs(lo) > 1e9 or hi > 1e9:
            break
    raise BracketFailure("no sign change found in the scanned range")


@dataclass(frozen=True)
class StripBounds:
    D_lower: float
    D: float

    def __post_init__(self):
        if self.D_lower > self.D + 1e-12:
            raise ConstraintViolation("D_lower must not exceed D")


def strip_bounds(poly: DirichletPolynomial) -> StripBounds:
    """Real strip [D_l, D] containing all complex roots of f.

    D solves sum m_j r_j^D = 1; D_l solves 1 + sum_{j<N} m_j r_j^s = m_N r_N^s.
    Both by bracketed bisection to 1e-12.
    """
    r = poly.r_float
    ks, ms = poly.exponents, poly.multiplicities

    def fd(s):
        return sum(m * r ** (k * s) for k, m in zip(ks, ms)) - 1.0

    lo, hi = _scan_bracket(fd, +1)
    D = _bisect(fd, lo, hi)

    def fl(s):
        head = sum(m * r ** (k * s) for k, m in zip(ks[:-1], ms[:-1]))
        return ms[-1] * r ** (ks[-1] * s) - head - 1.0

    lo, hi = _scan_bracket(fl, +1)
    D_lower = _bisect(fl, lo, hi)
    return StripBounds(D_lower=D_lower, D=D)


@dataclass(frozen=True)
class ComplexDimension:
    """One point omega_j + i*n*p of the periodic root set."""

    value: complex
    line_index: int
    n: int
    multiplicity: int


def tile_roots(rootset: RootSet, t_max: float) -> list[ComplexDimension]:
    """All roots of f with |Im| <= t_max, tiled line by line with spacing p."""
    if t_max < 0:
        raise ConstraintViolation("t_max must be nonnegative")
    p = rootset.period_p
    out = []
    for j, (omega, mult) in enumerate(rootset.lines()):
        n_lo = math.ceil((-t_max - omega.imag) / p - 1e-12)
        n_hi = math.floor((t_max - omega.imag) / p + 1e-12)
        for n in range(n_lo, n_hi + 1):
            out.append(ComplexDimension(omega + 1j * n * p, j, n, mult))
    out.sort(key=lambda cd: (cd.value.real, cd.value.imag))
    return out


def solve(poly: DirichletPolynomial, tol: float = DEFAULT_ROOT_TOL) -> RootSet:
    """Convenience: coefficients -> roots -> principal roots."""
    roots, residuals = solve_roots(to_polynomial(poly), tol=tol)
    return principal_roots(roots, poly, residuals)
