"""Polynomial spaces P_k on R^n, unisolvency tests and the cube-sampling bound.

Monomials are kept in a fixed graded-lex order: by total degree, and within a
degree by descending exponent of x1, then x2, and so on.  For n = 2, k = 1 this
gives (1, x1, x2).
"""
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidArgumentError, PreconditionError


def gamma_n(n):
    """Exact integer gamma_1 = 2, gamma_n = 2 n (1 + gamma_{n-1})."""
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise DomainError(f"gamma_n requires a positive integer, got {n!r}")
    g = 2
    for j in range(2, int(n) + 1):
        g = 2 * j * (1 + g)
    return g


def _multi_indices(n, degree):
    out = []
    for total in range(degree + 1):
        level = [a for a in itertools.product(range(total + 1), repeat=n) if sum(a) == total]
        level.sort(key=lambda a: tuple(-e for e in a))
        out.extend(level)
    return tuple(out)


@dataclass(frozen=True)
class PolynomialBasis:
    n: int
    degree: int

    def __post_init__(self):
        if self.n < 1:
            raise InvalidArgumentError(f"dimension must be >= 1, got {self.n}")
        if self.degree < 0:
            raise InvalidArgumentError(f"degree must be >= 0, got {self.degree}")

    @property
    def multi_indices(self):
        return _multi_indices(self.n, self.degree)

    def __len__(self):
        return math.comb(self.n + self.degree, self.n)


def _as_array(points):
    pts = getattr(points, "points", points)
    return np.atleast_2d(np.asarray(pts, dtype=float))


def poly_matrix(basis, points):
    """Matrix whose entry (i, j) is the j-th monomial evaluated at point i."""
    x = _as_array(points)
    if x.size == 0:
        return np.zeros((0, len(basis)))
    if x.shape[1] != basis.n:
        raise InvalidArgumentError(
            f"points have dimension {x.shape[1]}, basis has dimension {basis.n}")
    alphas = np.array(basis.multi_indices, dtype=int)
    return np.prod(x[:, None, :] ** alphas[None, :, :], axis=2)


def default_rank_tol(sv, shape):
    return sv[0] * max(shape) * np.finfo(float).eps * 100 if sv.size else 0.0


def is_determining(points, degree, tol=None):
    """True iff the only polynomial of total degree <= ``degree`` vanishing on
    ``points`` is zero, i.e. the polynomial matrix has full column rank."""
    if tol is not None and tol < 0:
        raise InvalidArgumentError("tol must be nonnegative")
    x = _as_array(points)
    if x.size == 0:
        return False
    basis = PolynomialBasis(x.shape[1], degree)
    if x.shape[0] < len(basis):
        return False
    P = poly_matrix(basis, x)
    sv = np.linalg.svd(P, compute_uv=False)
    thresh = default_rank_tol(sv, P.shape) if tol is None else tol
    return bool(sv[-1] > thresh)


@dataclass
class PolyBoundReport:
    n: int
    k: int
    q: int
    trials: int
    max_ratio: float
    ln_bound: float
    passed: bool

    @property
    def bound(self):
        """e^{2 n gamma_n (k+1)}; may overflow to inf for large n, k."""
        try:
            return math.exp(self.ln_bound)
        except OverflowError:
            return math.inf

    def to_dict(self):
        return {"n": self.n, "k": self.k, "q": self.q, "trials": self.trials,
                "max_ratio": self.max_ratio, "ln_bound": self.ln_bound,
                "bound": self.bound, "pass": self.passed}


def _tensor_values(coeffs, alphas, axes):
    # p on the tensor grid built from per-axis sample vectors
    n = len(axes)
    powers = [np.vander(ax, int(alphas.max()) + 1, increasing=True) for ax in axes]
    if n == 1:
        return powers[0][:, alphas[:, 0]] @ coeffs
    A = np.zeros((powers[0].shape[1], powers[1].shape[1]))
    for a, coef in zip(alphas, coeffs):
        A[a[0], a[1]] += coef
    return powers[0] @ A @ powers[1].T


def polybound_check(n, k, q, trials, seed, samples_per_cell=50):
    """Randomized check of the polynomial sampling bound on the unit cube.

    For each trial a polynomial of degree <= k with coefficients uniform in
    [-1, 1] is drawn, together with one uniformly placed point in each of the
    q**n subcubes.  The sup over the cube is approximated on a grid with
    ``samples_per_cell`` intervals per subcube side.  The check passes when the
    largest ratio sup_Q |p| / sup_Y |p| stays below exp(2 n gamma_n (k+1)).
    """
    if n not in (1, 2):
        raise InvalidArgumentError("polybound_check supports n in {1, 2}")
    if not 0 <= k <= 3:
        raise InvalidArgumentError("polybound_check supports 0 <= k <= 3")
    g = gamma_n(n)
    if q < g * (k + 1):
        raise PreconditionError(f"q = {q} < gamma_n (k+1) = {g * (k + 1)}: sampling hypothesis violated")
    if trials < 1:
        raise InvalidArgumentError("trials must be >= 1")

    alphas = np.array(PolynomialBasis(n, k).multi_indices, dtype=int)
    dense = np.linspace(0.0, 1.0, q * samples_per_cell + 1)
    cell_lo = np.arange(q) / q
    max_ratio = 0.0
    for trial in range(trials):
        rng = np.random.default_rng([seed, trial])
        coeffs = rng.uniform(-1.0, 1.0, size=len(alphas))
        sup_q = np.abs(_tensor_values(coeffs, alphas, [dense] * n)).max()
        offsets = rng.uniform(0.0, 1.0 / q, size=(q**n, n))
        corners = np.stack(np.meshgrid(*([cell_lo] * n), indexing="ij"), axis=-1).reshape(-1, n)
        Y = corners + offsets
        sup_y = np.abs(poly_matrix(PolynomialBasis(n, k), Y) @ coeffs).max()
        ratio = sup_q / sup_y if sup_y > 0 else math.inf
        max_ratio = max(max_ratio, ratio)
    ln_bound = 2.0 * n * g * (k + 1)
    passed = math.isfinite(max_ratio) and math.log(max_ratio) <= ln_bound
    return PolyBoundReport(n, k, q, trials, float(max_ratio), ln_bound, passed)
