"""Shifted surface spline kernel, its Fourier-transform density, and Bessel K.

The kernel in even dimension ``n`` with even exponent ``lambda`` and shift
``c > 0`` is::

    h(x) = (-1)**m * (|x|**2 + c**2)**(lambda/2) * 0.5 * ln(|x|**2 + c**2),

with ``m = 1 + lambda/2`` its order of conditional positive definiteness.
Its generalized Fourier transform is the radial density::

    hhat(r) = l * r**(-lambda - n) * (c r)**nu * K_nu(c r),   nu = (n + lambda)/2.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .errors import DomainError, InvalidArgumentError

EULER_GAMMA = 0.57721566490153286061

# Below this argument K_0, K_1 come from the ascending series, above it from
# Steed's continued fraction.
BESSEL_CROSSOVER = 2.0

_SERIES_TOL = 1e-17
_CF_TOL = 1e-16
_CF_MAXIT = 10000


@dataclass(frozen=True)
class KernelParams:
    """Parameters of the shifted surface spline.

    Parameters
    ----------
    n : int
        Space dimension, even and >= 2.
    lam : int
        Kernel exponent lambda, even and >= 2.
    c : float
        Shift, strictly positive.
    l_const : float, optional
        The positive Fourier constant ``l(lambda, n)``. No closed form is
        available, so it is configurable; every bound scales by its square root.
    """

    n: int
    lam: int
    c: float
    l_const: float = 1.0
    m: int = field(init=False)

    def __post_init__(self):
        n, lam = self.n, self.lam
        if isinstance(n, bool) or int(n) != n or n < 2 or n % 2:
            raise InvalidArgumentError(f"n must be an even integer >= 2, got {n!r}")
        if isinstance(lam, bool) or int(lam) != lam or lam < 2 or lam % 2:
            raise InvalidArgumentError(f"lambda must be an even integer >= 2, got {lam!r}")
        if not (math.isfinite(self.c) and self.c > 0):
            raise InvalidArgumentError(f"c must be finite and > 0, got {self.c!r}")
        if not (math.isfinite(self.l_const) and self.l_const > 0):
            raise InvalidArgumentError(f"l_const must be finite and > 0, got {self.l_const!r}")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "lam", int(lam))
        object.__setattr__(self, "c", float(self.c))
        object.__setattr__(self, "l_const", float(self.l_const))
        object.__setattr__(self, "m", 1 + int(lam) // 2)

    @property
    def sign(self):
        return -1.0 if self.m % 2 else 1.0

    @property
    def nu(self):
        """Order of the Bessel function in the Fourier density."""
        return (self.n + self.lam) // 2

    def to_dict(self):
        return {"n": self.n, "lambda": self.lam, "c": self.c, "m": self.m,
                "l_const": self.l_const}


def kernel_eval(params, x):
    """Evaluate h at a single point ``x`` of length ``n``."""
    x = np.asarray(x, dtype=float)
    if x.shape != (params.n,):
        raise InvalidArgumentError(f"expected a vector of length {params.n}, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise InvalidArgumentError("kernel argument must be finite")
    q = float(x @ x) + params.c * params.c
    return params.sign * q ** (params.lam // 2) * 0.5 * math.log(q)


def kernel_matrix(params, a, b):
    """Dense matrix ``h(a_i - b_j)`` for row-wise point arrays ``a`` and ``b``."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.atleast_2d(np.asarray(b, dtype=float))
    if a.shape[1] != params.n or b.shape[1] != params.n:
        raise InvalidArgumentError("point dimension does not match kernel dimension")
    return _backend.kernel_matrix(a, b, params.c, params.lam // 2, params.sign)


def kernel_combination(params, points, centers, coeffs):
    """Evaluate ``sum_j coeffs[j] * h(x - centers[j])`` at every row of ``points``."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    centers = np.atleast_2d(np.asarray(centers, dtype=float))
    if points.shape[1] != params.n or centers.shape[1] != params.n:
        raise InvalidArgumentError("point dimension does not match kernel dimension")
    return _backend.kernel_matvec(points, centers, np.asarray(coeffs, dtype=float),
                                  params.c, params.lam // 2, params.sign)


def _k01_series(t):
    # Ascending series:
    #   K0 = -(ln(t/2) + gamma) I0 + sum_{k>=1} H_k y^k / (k!)^2
    #   K1 = 1/t + ln(t/2) I1 - (t/4) sum_{k>=0} (psi(k+1) + psi(k+2)) y^k / (k! (k+1)!)
    # with y = t^2/4 and psi(j+1) = H_j - gamma.
    y = 0.25 * t * t
    lg = math.log(0.5 * t)
    term0 = 1.0              # y^k / (k!)^2
    term1 = 1.0              # y^k / (k! (k+1)!)
    harm = 0.0               # H_k
    i0 = 1.0
    s0 = 0.0
    i1_sum = 1.0
    s1 = 2.0 * (-EULER_GAMMA) + 1.0  # psi(1) + psi(2)
    k = 0
    while True:
        k += 1
        term0 *= y / (k * k)
        term1 *= y / (k * (k + 1))
        harm += 1.0 / k
        i0 += term0
        s0 += harm * term0
        i1_sum += term1
        d1 = (2.0 * harm + 1.0 / (k + 1) - 2.0 * EULER_GAMMA) * term1
        s1 += d1
        if term0 < _SERIES_TOL * i0 and abs(d1) < _SERIES_TOL * abs(s1):
            break
    k0 = -(lg + EULER_GAMMA) * i0 + s0
    k1 = 1.0 / t + lg * 0.5 * t * i1_sum - 0.25 * t * s1
    return k0, k1


def _k01_steed(t):
    # Steed's continued fraction (Temme's CF2) for order zero; convergent for
    # t >= 2 and accurate to rounding.
    b = 2.0 * (1.0 + t)
    d = 1.0 / b
    h = delh = d
    q1, q2 = 0.0, 1.0
    a1 = 0.25
    q = cc = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(2, _CF_MAXIT):
        a -= 2 * (i - 1)
        cc = -a * cc / i
        qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        q += cc * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if abs(dels / s) < _CF_TOL:
            break
    else:  # pragma: no cover
        raise ArithmeticError(f"Bessel K continued fraction did not converge at t={t}")
    h *= a1
    k0 = math.sqrt(math.pi / (2.0 * t)) * math.exp(-t) / s
    k1 = k0 * (t + 0.5 - h) / t
    return k0, k1


def bessel_k(nu, t):
    """Modified Bessel function of the second kind ``K_nu(t)`` for integer ``nu >= 0``.

    ``K_0`` and ``K_1`` are obtained from the ascending series for
    ``t <= BESSEL_CROSSOVER`` and from Steed's continued fraction above it;
    higher orders follow from the upward recurrence
    ``K_{v+1} = K_{v-1} + (2 v / t) K_v``, which is stable for K.
    Returns 0 once ``exp(-t)`` underflows.
    """
    if isinstance(nu, bool) or int(nu) != nu or nu < 0:
        raise DomainError(f"order must be a nonnegative integer, got {nu!r}")
    nu = int(nu)
    if not t > 0:
        raise DomainError(f"bessel_k requires t > 0, got {t!r}")
    if not math.isfinite(t) or math.exp(-t) == 0.0:
        return 0.0
    if t <= BESSEL_CROSSOVER:
        k0, k1 = _k01_series(t)
    else:
        k0, k1 = _k01_steed(t)
    if nu == 0:
        return k0
    for v in range(1, nu):
        k0, k1 = k1, k0 + (2.0 * v / t) * k1
    return k1


def fourier_density(params, r):
    """Radial density ``l * r**(-lambda-n) * (c r)**nu * K_nu(c r)`` of the spectral measure."""
    if not r > 0:
        raise DomainError(f"fourier_density requires r > 0, got {r!r}")
    nu = params.nu
    t = params.c * r
    kv = bessel_k(nu, t)
    if kv == 0.0:
        return 0.0
    log_val = (math.log(params.l_const) - (params.lam + params.n) * math.log(r)
               + nu * math.log(t) + math.log(kv))
    return math.exp(log_val)
