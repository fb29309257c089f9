import cmath
import math

import numpy as np
import pytest

from fracdiff.diffraction import (GaussianAtom, averaging_constant,
                                  diffraction_apply, diffraction_comb, e,
                                  fourier_transform, gaussian_lattice_sum,
                                  psf_check, structure_intensity)
from fracdiff.diffraction import TestFunction as AtomSum
from fracdiff.correlation import autocorrelation_apply
from fracdiff.errors import ConstraintViolation
from fracdiff.lattice import IdealCrystal, LatticeBasis
from fracdiff.strings import dimension_crystal
from tests.test_strings import _example


def _rand_atom(rng, n):
    return GaussianAtom(complex(*rng.uniform(-1, 1, 2)),
                        tuple(rng.uniform(-1, 1, n)),
                        tuple(rng.uniform(0.5, 2.0, n)),
                        tuple(rng.uniform(-1, 1, n)))


def _quad_fourier(atom, xi, half=12.0, n=48001):
    """Trapezoid-rule oracle for the 1-d transform int phi(x) e(-xi x) dx."""
    xs = np.linspace(-half, half, n)
    vals = atom.values(xs[:, None]) * np.exp(-2j * np.pi * xi * xs)
    return np.trapezoid(vals, xs)


def test_atom_evaluation_formula():
    atom = GaussianAtom(2.0 - 1.0j, (0.3, -0.1), (1.5, 0.7), (0.2, -0.4))
    x = np.array([0.5, 1.0])
    expected = (2.0 - 1.0j) * cmath.exp(
        2j * math.pi * (0.2 * 0.5 - 0.4 * 1.0)
        - math.pi * (1.5 * 0.2 ** 2 + 0.7 * 1.1 ** 2))
    assert atom(x) == pytest.approx(expected, abs=1e-14)


def test_atom_validation():
    with pytest.raises(ConstraintViolation):
        GaussianAtom(1.0, (0.0,), (0.0,), (0.0,))  # non-positive scale
    with pytest.raises(ConstraintViolation):
        GaussianAtom(1.0, (0.0,), (1.0, 2.0), (0.0,))


def test_fourier_against_quadrature():
    rng = np.random.default_rng(23)
    for _ in range(10):
        atom = _rand_atom(rng, 1)
        hat = atom.fourier()
        for xi in rng.uniform(-2, 2, 3):
            assert hat(np.array([xi])) == pytest.approx(
                _quad_fourier(atom, xi), abs=1e-7)


def test_fourier_involution_is_reflection():
    rng = np.random.default_rng(29)
    for _ in range(20):
        n = int(rng.integers(1, 4))
        atom = _rand_atom(rng, n)
        twice = atom.fourier().fourier()
        for _ in range(5):
            x = rng.uniform(-2, 2, n)
            assert twice(x) == pytest.approx(atom(-x), abs=1e-12)


def test_restrict_matches_direct_evaluation():
    rng = np.random.default_rng(31)
    atom = _rand_atom(rng, 3)
    y = [0.4, -0.7]
    factor, reduced = atom.restrict([1, 2], y)
    x = 0.3
    assert factor * reduced(np.array([x])) == pytest.approx(
        atom(np.array([x, y[0], y[1]])), abs=1e-14)
    factor_all, none = atom.restrict([0, 1, 2], [x, y[0], y[1]])
    assert none is None
    assert factor_all == pytest.approx(atom(np.array([x, y[0], y[1]])), abs=1e-14)


def test_marginal_against_quadrature():
    rng = np.random.default_rng(37)
    for _ in range(5):
        atom = _rand_atom(rng, 1)
        q = float(rng.uniform(-1, 1))
        xs = np.linspace(-12, 12, 48001)
        direct = np.trapezoid(atom.values(xs[:, None]) * np.exp(2j * np.pi * q * xs),
                              xs)
        assert atom.amplitude * atom.marginal([0], [q]) == pytest.approx(
            direct, abs=1e-7)


def test_gaussian_lattice_sum_against_brute_force():
    rng = np.random.default_rng(41)
    for _ in range(10):
        m = int(rng.integers(1, 3))
        mat = rng.uniform(0.5, 1.5, (m, m)) + np.eye(m)
        atom = _rand_atom(rng, m)
        offset = rng.uniform(-1, 1, m)
        val, tail = gaussian_lattice_sum(mat, atom, offset, 1e-12)
        grids = np.meshgrid(*[np.arange(-25, 26)] * m, indexing="ij")
        ns = np.stack([g.ravel() for g in grids], axis=-1)
        brute = atom.values(ns @ mat.T + offset).sum()
        assert val == pytest.approx(complex(brute), abs=1e-10)
        assert tail <= 1e-12


def test_psf_theta_function():
    basis = LatticeBasis(((1.0,),))
    phi = GaussianAtom(1.0, (0.0,), (1.0,), (0.0,))
    res = psf_check(basis, 0, phi, [0.0], [])
    theta = sum(math.exp(-math.pi * n * n) for n in range(-10, 11))
    assert res.lhs.real == pytest.approx(theta, abs=1e-12)
    assert res.diff <= 1e-12


def test_psf_jacobi_t2_instance():
    basis = LatticeBasis(((1.0,),))
    phi = GaussianAtom(1.0, (0.0,), (2.0,), (0.0,))
    res = psf_check(basis, 0, phi, [0.0], [])
    ref = sum(math.exp(-2.0 * math.pi * n * n) for n in range(-10, 11))
    assert res.lhs.real == pytest.approx(ref, abs=1e-12)
    assert res.rhs.real == pytest.approx(ref, abs=1e-12)
    assert res.lhs.real == pytest.approx(1.0037348854877393, abs=1e-10)


def test_psf_degenerate_directions():
    rng = np.random.default_rng(43)
    basis = LatticeBasis(((1.0, 0.3), (0.2, 1.5)))
    for _ in range(10):
        phi = _rand_atom(rng, 3)
        res = psf_check(basis, 1, phi, rng.uniform(0, 1, 2),
                        rng.uniform(-1, 1, 1))
        assert res.diff <= 1e-10 * (1.0 + abs(res.lhs))


def test_averaging_constant():
    crystal, _ = dimension_crystal(_example(), 0.0)
    assert averaging_constant(crystal) == pytest.approx(1.551463, abs=1e-6)
    flat = IdealCrystal(LatticeBasis(((1.0,),)), 1, ((0.0, 0.0), (0.0, 0.5)))
    assert averaging_constant(flat) == pytest.approx(1.5)
    assert averaging_constant(
        IdealCrystal(LatticeBasis(((1.0,),)), 0, ((0.0,),))) == 1.0


def test_structure_intensity():
    ints = IdealCrystal(LatticeBasis(((1.0,),)), 0, ((0.0,),))
    assert structure_intensity(ints, [1.0]) == pytest.approx(1.0)
    two = IdealCrystal(LatticeBasis(((1.0,),)), 0, ((0.0,), (0.3,)))
    for b in (0.0, 0.5, 1.7):
        expected = abs(1.0 + e(b * 0.3)) ** 2
        assert structure_intensity(two, [b]) == pytest.approx(expected, abs=1e-12)


def test_structure_intensity_nonneg_and_shift_invariant():
    rng = np.random.default_rng(47)
    for _ in range(30):
        crystal = IdealCrystal(LatticeBasis(((1.0, 0.2), (0.1, 1.3))), 0,
                               ((0.0, 0.0), tuple(rng.uniform(-1, 1, 2))))
        b = rng.uniform(-3, 3, 2)
        i0 = structure_intensity(crystal, b)
        assert i0 >= 0.0
        shifted = crystal.shifted(rng.uniform(-5, 5, 2))
        assert structure_intensity(shifted, b) == pytest.approx(i0, abs=1e-9)


def test_diffraction_comb_integers():
    ints = IdealCrystal(LatticeBasis(((1.0,),)), 0, ((0.0,),))
    comb = diffraction_comb(ints, 3.0)
    assert len(comb.points) == 7
    assert all(cp.weight == 1.0 for cp in comb.points)
    assert comb.prefactor == 1.0


def test_diffraction_comb_doubled_lattice():
    two = IdealCrystal(LatticeBasis(((2.0,),)), 0, ((0.0,),))
    comb = diffraction_comb(two, 1.0)
    bs = sorted(cp.b[0] for cp in comb.points)
    assert bs == pytest.approx([-1.0, -0.5, 0.0, 0.5, 1.0])
    assert all(cp.weight == 0.5 for cp in comb.points)


def test_duality_diffraction_equals_autocorrelation_of_hat():
    crystal, _ = dimension_crystal(_example(), 0.0)
    rng = np.random.default_rng(53)
    for _ in range(5):
        atom = _rand_atom(rng, 2)
        lhs = diffraction_apply(crystal, atom, 1e-12)
        rhs = autocorrelation_apply(crystal, fourier_transform(atom), 1e-12)
        assert abs(lhs.value - rhs.value) <= \
            lhs.truncation_bound + rhs.truncation_bound + 1e-9


def test_diffraction_unit_gaussian_explicit_sum():
    """For the unit Gaussian the dual sum is explicit: each pair (j,k)
    contributes e(b . dm) exp(-pi dd^2) exp(-pi b^2) over the dual lattice."""
    crystal, _ = dimension_crystal(_example(), 0.0)
    phi = GaussianAtom(1.0, (0.0, 0.0), (1.0, 1.0), (0.0, 0.0))
    C = averaging_constant(crystal)
    p = crystal.basis.columns[0][0]
    F = crystal.translate_matrix
    total = 0.0 + 0.0j
    for n in range(-60, 61):
        b = n / p
        for fj in F:
            for fk in F:
                dm, dd = fj[0] - fk[0], fj[1] - fk[1]
                total += e(b * dm) * math.exp(-math.pi * dd * dd) \
                    * math.exp(-math.pi * b * b)
    expected = total / (C * p * p)
    got = diffraction_apply(crystal, phi, 1e-12)
    assert got.value == pytest.approx(expected, abs=1e-8)
    # and it agrees with the autocorrelation of the (self-dual) Gaussian
    back = autocorrelation_apply(crystal, fourier_transform(phi), 1e-12)
    assert got.value == pytest.approx(back.value, abs=1e-8)


def test_test_function_linearity():
    rng = np.random.default_rng(59)
    a1, a2 = _rand_atom(rng, 2), _rand_atom(rng, 2)
    phi = AtomSum((a1, a2))
    x = rng.uniform(-1, 1, 2)
    assert phi(x) == pytest.approx(a1(x) + a2(x), abs=1e-14)
    hat = fourier_transform(phi)
    assert hat(x) == pytest.approx(a1.fourier()(x) + a2.fourier()(x), abs=1e-14)
