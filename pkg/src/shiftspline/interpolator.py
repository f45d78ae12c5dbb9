"""Shifted surface spline interpolation with polynomial augmentation.

The interpolant is ``s(x) = p(x) + sum_j c_j h(x - x_j)`` with ``p`` of degree
at most ``m - 1``, where the kernel coefficients satisfy the discrete moment
conditions ``sum_j c_j q(x_j) = 0`` for all such ``q``.  Both are found from
the symmetric saddle-point system::

    [ A   P ] [c]   [f]
    [ P^T 0 ] [a] = [0]
"""
import logging
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import lapack

from .errors import (CPDViolationError, IllConditioningError, InvalidArgumentError,
                     PreconditionError, UnisolvencyError)
from .geometry import PointSet
from .kernel import kernel_combination, kernel_matrix
from .polynomials import PolynomialBasis, is_determining, poly_matrix

logger = logging.getLogger(__name__)

RESIDUAL_RTOL = 1e-8
MOMENT_RTOL = 1e-8
COND_WARN = 1e12
COND_FAIL = 1e15
# largest system for which the condition number comes from a full SVD
SVD_COND_LIMIT = 500


class ConditioningWarning(UserWarning):
    pass


@dataclass(frozen=True)
class InterpolationModel:
    params: object
    centers: PointSet
    coefficients: np.ndarray
    poly_coeffs: np.ndarray
    condition: float
    max_residual: float

    @property
    def basis(self):
        return PolynomialBasis(self.params.n, self.params.m - 1)

    def __call__(self, points):
        return evaluate(self, points)


def _points(x):
    if isinstance(x, PointSet):
        return x
    return PointSet(x)


def _condition(M, lu, piv):
    if M.shape[0] <= SVD_COND_LIMIT:
        sv = np.linalg.svd(M, compute_uv=False)
        return float(sv[0] / sv[-1]) if sv[-1] > 0 else math.inf
    anorm = np.abs(M).sum(axis=0).max()
    rcond, info = lapack.dsycon(lu, piv, anorm)
    if info != 0 or rcond <= 0:
        return math.inf
    return float(1.0 / rcond)


def fit(params, X, values, force=False):
    """Solve for the interpolant of ``values`` at the sites ``X``.

    Uses a Bunch-Kaufman (symmetric indefinite, pivoted) factorization with one
    step of iterative refinement.  Conditioning above ``COND_WARN`` issues a
    :class:`ConditioningWarning`; above ``COND_FAIL`` it raises unless ``force``.
    """
    X = _points(X)
    f = np.asarray(values, dtype=float).ravel()
    if X.dim != params.n:
        raise InvalidArgumentError(f"points have dimension {X.dim}, kernel has {params.n}")
    if len(X) != f.size:
        raise InvalidArgumentError(f"{len(X)} sites but {f.size} values")
    if not np.all(np.isfinite(f)):
        raise InvalidArgumentError("values must be finite")
    degree = params.m - 1
    if not is_determining(X, degree):
        raise UnisolvencyError(
            f"sites are not a determining set for polynomials of degree {degree}", degree)

    N = len(X)
    P = poly_matrix(PolynomialBasis(params.n, degree), X)
    Q = P.shape[1]
    M = np.zeros((N + Q, N + Q))
    M[:N, :N] = kernel_matrix(params, X.points, X.points)
    M[:N, N:] = P
    M[N:, :N] = P.T
    rhs = np.concatenate([f, np.zeros(Q)])

    lu, piv, info = lapack.dsytrf(M)
    if info != 0:
        raise IllConditioningError(f"symmetric factorization failed (info={info})", math.inf)
    sol, info = lapack.dsytrs(lu, piv, rhs)
    if info != 0:  # pragma: no cover
        raise IllConditioningError(f"triangular solve failed (info={info})", math.inf)
    corr, _ = lapack.dsytrs(lu, piv, rhs - M @ sol)
    sol = sol + corr

    cond = _condition(M, lu, piv)
    if not np.all(np.isfinite(sol)):
        raise IllConditioningError("non-finite solution", cond)
    if cond > COND_FAIL and not force:
        raise IllConditioningError(f"condition estimate {cond:.3e} exceeds {COND_FAIL:.0e}", cond)
    if cond > COND_WARN:
        warnings.warn(f"interpolation matrix condition estimate {cond:.3e}", ConditioningWarning,
                      stacklevel=2)

    coef, poly = sol[:N], sol[N:]
    resid = M[:N] @ sol - f
    max_resid = float(np.abs(resid).max())
    moment = float(np.abs(P.T @ coef).max())
    if max_resid > RESIDUAL_RTOL * (1 + np.abs(f).max()) and not force:
        raise IllConditioningError(f"node residual {max_resid:.3e} exceeds tolerance", cond)
    if moment > MOMENT_RTOL * (1 + np.abs(coef).max()) and not force:
        raise IllConditioningError(f"moment residual {moment:.3e} exceeds tolerance", cond)
    logger.debug("fit N=%d cond=%.3e residual=%.3e", N, cond, max_resid)
    coef.setflags(write=False)
    poly.setflags(write=False)
    return InterpolationModel(params, X, coef, poly, cond, max_resid)


def evaluate(model, points):
    """Evaluate the interpolant at every row of ``points`` by direct summation."""
    x = np.atleast_2d(np.asarray(getattr(points, "points", points), dtype=float))
    if x.shape[1] != model.params.n:
        raise InvalidArgumentError(
            f"points have dimension {x.shape[1]}, model has {model.params.n}")
    s = kernel_combination(model.params, x, model.centers.points, model.coefficients)
    return s + poly_matrix(model.basis, x) @ model.poly_coeffs


def moment_residual(params, centers, coeffs):
    P = poly_matrix(PolynomialBasis(params.n, params.m - 1), centers)
    return float(np.abs(P.T @ np.asarray(coeffs, dtype=float)).max())


def make_native_test_function(params, Y, seed):
    """Random unit-norm coefficients over ``Y`` annihilating P_{m-1}.

    ``sum_j c_j h(x - y_j)`` with such ``c`` is a member of the native space
    whose semi-norm is available in closed form (see :func:`semi_norm`).
    """
    Y = _points(Y)
    degree = params.m - 1
    P = poly_matrix(PolynomialBasis(params.n, degree), Y)
    if len(Y) <= P.shape[1]:
        raise PreconditionError(
            f"need more than {P.shape[1]} centers for a nontrivial constrained combination")
    if not is_determining(Y, degree):
        raise UnisolvencyError(f"centers are not determining for degree {degree}", degree)
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(len(Y))
    q, _ = np.linalg.qr(P)
    v -= q @ (q.T @ v)
    v -= q @ (q.T @ v)
    return v / np.linalg.norm(v)


def semi_norm(params, Y, c):
    """Native-space semi-norm ``sqrt(c^T A c)`` of ``sum_j c_j h(. - y_j)``.

    No normalization constant is applied to the quadratic form.
    """
    Y = _points(Y)
    c = np.asarray(c, dtype=float).ravel()
    if c.size != len(Y):
        raise InvalidArgumentError(f"{c.size} coefficients for {len(Y)} centers")
    if not np.any(c):
        return 0.0
    if moment_residual(params, Y, c) > 1e-8 * (1 + np.abs(c).max()):
        raise PreconditionError("coefficients violate the polynomial moment conditions")
    A = kernel_matrix(params, Y.points, Y.points)
    qf = float(c @ A @ c)
    scale = float((c @ c) * np.abs(A).max())
    if qf < -1e-10 * scale:
        raise CPDViolationError(f"quadratic form {qf:.3e} is negative on a constrained vector")
    return math.sqrt(max(qf, 0.0))
