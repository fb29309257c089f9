"""Complex dimensions of lattice self-similar strings and diffraction of
possibly degenerate ideal crystals."""

from .correlation import (DisplacementTable, autocorrelation_apply,
                          averaging_region, closed_form_frequency,
                          count_displacements, empirical_frequency)
from .diffraction import (CombPoint, ContinuousComb, GaussianAtom, PsfResult,
                          TestFunction, TruncatedValue, averaging_constant,
                          diffraction_apply, diffraction_comb,
                          fourier_transform, gaussian_lattice_sum, psf_check,
                          string_diffraction, structure_intensity)
from .dirichlet import (ComplexDimension, DirichletPolynomial, RootSet,
                        StripBounds, from_scaling_ratios, normalize, solve,
                        solve_roots, strip_bounds, tile_roots)
from .errors import (BracketFailure, CancellationRisk, CapExceeded,
                     ConstraintViolation, FracdiffError, NearPole,
                     NoConvergence, NonLatticeInput, SchemaError,
                     SingularBasis, TranslatesOutsideBox, ZeroRoot)
from .lattice import (IdealCrystal, LatticeBasis, Region, determinant,
                      displacement_index, dual_basis, embed, enumerate_points)
from .strings import (StringSpec, dimension_crystal, enumerate_lengths,
                      geometric_zeta, validate, zeta_tail_bound)

__version__ = "0.1.0"
