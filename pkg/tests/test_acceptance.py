"""End-to-end acceptance suite.

Seven numbered checks covering the whole pipeline at fixed tolerances and
runtime budgets; each prints one PASS/FAIL line.  Oracles are computed
independently inside this module (bisection, real-root deflation, direct
summation, hand counts) and never call the code paths under test.
"""

import cmath
import math
import time
from fractions import Fraction

import numpy as np

from fracdiff import dirichlet, svg
from fracdiff.correlation import (autocorrelation_apply,
                                  closed_form_frequency, count_displacements,
                                  empirical_frequency)
from fracdiff.diffraction import (GaussianAtom, diffraction_apply,
                                  diffraction_comb, fourier_transform,
                                  psf_check, structure_intensity)
from fracdiff.dirichlet import (DirichletPolynomial, evaluate_f, solve,
                                strip_bounds, to_polynomial)
from fracdiff.lattice import (IdealCrystal, LatticeBasis, determinant,
                              dual_basis)
from fracdiff.strings import (dimension_crystal, enumerate_lengths,
                              geometric_zeta, validate, zeta_tail_bound)


def _report(name, ok):
    print(f"\n[{'PASS' if ok else 'FAIL'}] {name}")
    assert ok, name


def _example_string():
    return validate(Fraction(8, 3), [Fraction(1, 2), Fraction(1, 8)],
                    [Fraction(3, 8)])


def _bisect_oracle(func, lo, hi, iters=200):
    flo = func(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if flo * func(mid) <= 0:
            hi = mid
        else:
            lo, flo = mid, func(mid)
    return 0.5 * (lo + hi)


def _rand_atom(rng, n, tmin=0.5, tmax=2.0):
    return GaussianAtom(complex(*rng.uniform(-1, 1, 2)),
                        tuple(rng.uniform(-1, 1, n)),
                        tuple(rng.uniform(tmin, tmax, n)),
                        tuple(rng.uniform(-1, 1, n)))


def test_criterion_1_example_reproduction():
    """Triadic-style string {L=8/3, ratios 1/2 and 1/8, gap 3/8}."""
    start = time.perf_counter()
    spec = _example_string()
    poly = spec.lattice_form
    ok = to_polynomial(poly) == [1, -1, 0, -1]

    D_oracle = _bisect_oracle(lambda s: 2.0 ** -s + 8.0 ** -s - 1.0, 0.0, 1.0)
    Dl_oracle = _bisect_oracle(lambda s: 8.0 ** -s - 2.0 ** -s - 1.0, -2.0, 0.0)
    sb = strip_bounds(poly)
    ok &= abs(sb.D - D_oracle) <= 1e-6
    ok &= abs(sb.D_lower - Dl_oracle) <= 1e-6
    ok &= abs(sb.D - 0.551463) <= 1e-6
    ok &= abs(sb.D_lower - (-0.405685)) <= 1e-6
    ok &= abs(poly.oscillatory_period - 9.064720) <= 1e-6

    # oracle for the nonreal roots: deflate the real root, solve the quadratic
    z0 = _bisect_oracle(lambda z: 1.0 - z - z ** 3, 0.0, 1.0)
    disc = cmath.sqrt(z0 ** 2 - 4.0 * (z0 ** 2 + 1.0))
    log2 = math.log(2.0)
    oracle = sorted((complex(-math.log(abs(z)) / log2, -cmath.phase(z) / log2)
                     for z in ((-z0 + disc) / 2.0, (-z0 - disc) / 2.0)),
                    key=lambda w: w.imag)
    rootset = solve(poly)
    nonreal = sorted((w for w in rootset.principal_roots if abs(w.imag) > 1e-9),
                     key=lambda w: w.imag)
    ok &= len(nonreal) == 2
    ok &= all(abs(a - b) <= 1e-5 for a, b in zip(nonreal, oracle))
    elapsed = time.perf_counter() - start
    ok &= elapsed < 1.0
    _report(f"criterion 1: example string reproduction ({elapsed:.2f}s)", ok)


def test_criterion_2_psf_suite():
    """50 randomized extended-PSF trials plus the Jacobi theta instance."""
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    ok = True
    for _ in range(50):
        m = int(rng.integers(1, 4))
        d = int(rng.integers(0, 3))
        while True:
            mat = rng.uniform(1.0 / 3.0, 3.0, (m, m)) \
                * rng.choice([-1.0, 1.0], (m, m))
            sv = np.linalg.svd(mat, compute_uv=False)
            if sv[-1] > 0.2 and sv[0] / sv[-1] < 30.0:
                break
        basis = LatticeBasis(tuple(tuple(col) for col in mat.T))
        phi = _rand_atom(rng, m + d)
        alpha = rng.uniform(0, 1, m)
        x = rng.uniform(-1, 1, d)
        res = psf_check(basis, d, phi, alpha, x, eps=1e-13)
        ok &= res.diff <= 1e-10 * (1.0 + abs(res.lhs))

    # Jacobi theta instance with inverse scale t = 2
    theta = psf_check(LatticeBasis(((1.0,),)), 0,
                      GaussianAtom(1.0, (0.0,), (2.0,), (0.0,)), [0.0], [])
    ref = sum(math.exp(-2.0 * math.pi * n * n) for n in range(-10, 11))
    ok &= abs(theta.lhs - ref) <= 1e-10 and abs(theta.rhs - ref) <= 1e-10
    ok &= abs(ref - 1.0037349) <= 5e-8
    elapsed = time.perf_counter() - start
    ok &= elapsed < 10.0
    _report(f"criterion 2: extended PSF suite, 50 trials ({elapsed:.2f}s)", ok)


def test_criterion_3_fourier_duality():
    """diffraction(phi) == autocorrelation(phi_hat) on the dimension crystal."""
    start = time.perf_counter()
    crystal, _ = dimension_crystal(_example_string(), 0.0)
    rng = np.random.default_rng(33)
    ok = True
    for _ in range(20):
        phi = _rand_atom(rng, 2)
        lhs = diffraction_apply(crystal, phi, 1e-12)
        rhs = autocorrelation_apply(crystal, fourier_transform(phi), 1e-12)
        ok &= abs(lhs.value - rhs.value) <= \
            lhs.truncation_bound + rhs.truncation_bound + 1e-9
    elapsed = time.perf_counter() - start
    ok &= elapsed < 10.0
    _report(f"criterion 3: Fourier duality, 20 atoms ({elapsed:.2f}s)", ok)


def test_criterion_4_empirical_convergence():
    """Empirical pair frequencies approach the closed form like O(1/L)."""
    start = time.perf_counter()
    sets = [
        IdealCrystal(LatticeBasis(((1.0,),)), 0, ((0.0,),)),
        IdealCrystal(LatticeBasis(((2.0,),)), 0, ((0.0,), (0.25,))),
        dimension_crystal(_example_string(), 0.0)[0],
    ]
    ok = True
    max_err = {1000.0: 0.0, 2000.0: 0.0}
    for crystal in sets:
        closed = closed_form_frequency(crystal, 10.0)
        keys = sorted(closed, key=lambda a: (float(np.linalg.norm(a)), a))[:5]
        for L in (1000.0, 2000.0):
            nhat = empirical_frequency(count_displacements(crystal, L))
            for k in keys:
                match = [a for a in nhat
                         if max(abs(x - y) for x, y in zip(a, k)) <= 1e-9]
                v = nhat[match[0]] if match else 0.0
                err = abs(v - closed[k])
                ok &= err <= 5.0 / L
                max_err[L] = max(max_err[L], err)
    # worst-case error halves (with slack) when L doubles
    ok &= max_err[2000.0] <= 0.65 * max_err[1000.0] + 1e-12
    elapsed = time.perf_counter() - start
    ok &= elapsed < 30.0
    _report(f"criterion 4: empirical-to-closed-form convergence ({elapsed:.2f}s)",
            ok)


def test_criterion_5_integer_lattice_diffraction():
    """Classical combs: weights 1 on the integers, 1/2 on (1/2)Z for B=[[2]]."""
    ints = IdealCrystal(LatticeBasis(((1.0,),)), 0, ((0.0,),))
    comb = diffraction_comb(ints, 5.0)
    ok = len(comb.points) == 11
    ok &= all(cp.weight == 1.0 for cp in comb.points)
    ok &= all(float(cp.b[0]) == float(round(cp.b[0])) for cp in comb.points)

    two = IdealCrystal(LatticeBasis(((2.0,),)), 0, ((0.0,),))
    comb2 = diffraction_comb(two, 5.0)
    ok &= all(cp.weight == 0.5 for cp in comb2.points)
    ok &= all(abs(cp.b[0] * 2.0 - round(cp.b[0] * 2.0)) < 1e-12
              for cp in comb2.points)
    _report("criterion 5: integer-lattice diffraction weights", ok)


def test_criterion_6_zeta_cross_check():
    """Enumerated length sums at depth 15 agree with the zeta closed form."""
    spec = _example_string()
    lengths = enumerate_lengths(spec, 15)
    ok = True
    for s in (1.0, 1.5, 2.0):
        partial = sum(float(x) ** s for x in lengths)
        bound = zeta_tail_bound(spec, s, 15)
        ok &= abs(partial - geometric_zeta(spec, s)) <= bound + 1e-12
    ok &= abs(geometric_zeta(spec, 1.0) - 8.0 / 3.0) <= 1e-9
    _report("criterion 6: zeta vs enumerated lengths at depth 15", ok)


def test_criterion_7_property_suite():
    """Nine structural invariants, 100 randomized cases each."""
    rng = np.random.default_rng(77)
    ok = True

    def rand_basis(m):
        while True:
            mat = rng.uniform(-2.0, 2.0, (m, m))
            if abs(np.linalg.det(mat)) > 0.2:
                return LatticeBasis(tuple(tuple(col) for col in mat.T))

    def rand_poly():
        n_terms = int(rng.integers(1, 4))
        ks = sorted(int(k) for k in rng.choice(np.arange(1, 7), n_terms,
                                               replace=False))
        g = math.gcd(*ks)
        return DirichletPolynomial(
            Fraction(1, int(rng.integers(2, 6))),
            tuple(k // g for k in ks),
            tuple(int(rng.integers(1, 4)) for _ in ks))

    # determinant invariance under unimodular change of basis
    for _ in range(100):
        m = int(rng.integers(1, 4))
        basis = rand_basis(m)
        U = np.eye(m, dtype=int)
        for _ in range(5):
            i, j = rng.integers(0, m, 2)
            if i != j:
                S = np.eye(m, dtype=int)
                S[i, j] = int(rng.integers(-2, 3))
                U = U @ S
        changed = LatticeBasis(tuple(tuple(col) for col in (basis.matrix @ U).T))
        ok &= abs(determinant(changed) - determinant(basis)) \
            <= 1e-9 * determinant(basis)

    # dual of the dual recovers the basis
    for _ in range(100):
        basis = rand_basis(int(rng.integers(1, 4)))
        ok &= np.allclose(dual_basis(dual_basis(basis)).matrix, basis.matrix,
                          atol=1e-9)

    # root sets of real polynomials are conjugate symmetric
    for _ in range(100):
        rs = solve(rand_poly())
        ok &= all(min(abs(z.conjugate() - w) for w in rs.roots_z) < 1e-7
                  for z in rs.roots_z)

    # product of root magnitudes equals 1/m_N
    for _ in range(100):
        poly = rand_poly()
        rs = solve(poly)
        prod = float(np.prod([abs(z) for z in rs.roots_z]))
        ok &= abs(prod - 1.0 / poly.multiplicities[-1]) \
            <= 1e-7 / poly.multiplicities[-1]

    # all principal roots lie in the critical strip
    for _ in range(100):
        poly = rand_poly()
        rs, sb = solve(poly), strip_bounds(poly)
        ok &= all(sb.D_lower - 1e-7 <= w.real <= sb.D + 1e-7
                  for w in rs.principal_roots)

    # f is periodic under s -> s + i p
    for _ in range(100):
        poly = rand_poly()
        s = complex(rng.uniform(-1, 1), rng.uniform(-10, 10))
        a = evaluate_f(poly, s)
        b = evaluate_f(poly, s + 1j * poly.oscillatory_period)
        ok &= abs(a - b) <= 1e-8 * (1.0 + abs(a))

    # diffraction intensities are nonnegative
    for _ in range(100):
        crystal = IdealCrystal(rand_basis(2), 0,
                               ((0.0, 0.0), tuple(rng.uniform(-1, 1, 2))))
        ok &= structure_intensity(crystal, rng.uniform(-3, 3, 2)) >= 0.0

    # autocorrelation is invariant under translating the crystal
    phi = GaussianAtom(1.0, (0.0,), (1.0,), (0.0,))
    ints = IdealCrystal(LatticeBasis(((1.0,),)), 0, ((0.0,),))
    base = autocorrelation_apply(ints, phi, 1e-12)
    for _ in range(100):
        moved = autocorrelation_apply(ints.shifted(rng.uniform(-2, 2, 1)),
                                      phi, 1e-12)
        ok &= abs(moved.value - base.value) <= 1e-10

    # CSV formatting and SVG rendering are deterministic
    for _ in range(100):
        pts = [tuple(p) for p in rng.uniform(-5, 5, (8, 2))]
        ok &= svg.scatter_svg(pts) == svg.scatter_svg(pts)
        ok &= svg.stem_svg(pts) == svg.stem_svg(pts)
        ok &= all(f"{x:.12g}" == f"{float(f'{x:.12g}'):.12g}"
                  for x, _ in pts)

    _report("criterion 7: property suite, 9 invariants x 100 cases", ok)
