"""Shifted surface spline interpolation and its exponential error bound."""
from ._backend import BACKEND
from .bounds import (BoundConstants, MomentCase, bound_constants, error_bound, moment_bound_rhs,
                     moment_case, moment_exact, moment_quadrature, verify_lemma23)
from .geometry import CubeDomain, PointSet, fill_distance, generate_points, subcube_coverage
from .harness import ConvergenceConfig, fit_rate, run_convergence
from .interpolator import (InterpolationModel, evaluate, fit, make_native_test_function,
                           semi_norm)
from .kernel import KernelParams, bessel_k, fourier_density, kernel_eval
from .polynomials import PolynomialBasis, gamma_n, is_determining, poly_matrix, polybound_check

__version__ = "0.1.0"
