"""Constants of the exponential error bound for shifted surface splines.

Everything that can leave the float range lives in log space.  In particular
``B = 2 (rho/c) sqrt(n) exp(2 n gamma_n)`` is about ``e^5060`` already for
``n = 4``, and ``omega = (2/3)**(1/(3 C gamma_n))`` rounds to exactly 1.0,
so ``omega`` itself is never formed: only ``L = ln(1/omega)`` is kept, as
``ln L``.

The bound on ``|f(x) - s(x)|`` reads ``A * omega**(1/delta) * |f|_h``, i.e.
``ln bound = ln A + ln |f|_h - L / delta``; the fill-distance form uses
``L' = L / 2`` and ``d0 = delta0 / 2``.
"""
import math
from dataclasses import dataclass
from fractions import Fraction

from scipy import integrate

from .errors import DivergentMomentError, DomainError, HypothesisViolatedError, PreconditionError
from .kernel import KernelParams, fourier_density
from .polynomials import gamma_n

LN2 = math.log(2.0)
LN_LN_3_2 = math.log(math.log(1.5))
# slack when comparing a spacing against its threshold in log space
_LOG_CMP_RTOL = 1e-12


def unit_ball_volume(n):
    """Volume pi^{n/2} / Gamma(n/2 + 1) of the unit ball in R^n."""
    return math.exp(0.5 * n * math.log(math.pi) - math.lgamma(0.5 * n + 1))


def ln_factorial(k):
    if k <= 20:
        return math.log(math.factorial(k))
    return math.lgamma(k + 1)


def sci_from_ln(ln_x, digits=5):
    """Render ``exp(ln_x)`` in scientific notation without leaving log space."""
    if ln_x == -math.inf:
        return "0"
    if math.isnan(ln_x) or ln_x == math.inf:
        return str(math.exp(ln_x)) if math.isnan(ln_x) else "inf"
    e10 = ln_x / math.log(10.0)
    exponent = math.floor(e10)
    mantissa = round(10.0 ** (e10 - exponent), digits - 1)
    if mantissa >= 10.0:
        mantissa /= 10.0
        exponent += 1
    return f"{mantissa:.{digits - 1}f}e{exponent:+03d}"


@dataclass(frozen=True)
class MomentCase:
    """Case split on ``n - lambda`` fixing the growth constants rho and Delta_0.

    a: n - lambda > 3;  b: n - lambda <= 1;  c: 1 < n - lambda <= 3.
    """

    case_tag: str
    s: int
    rho: Fraction
    delta0: Fraction

    @property
    def delta_0_cap(self):
        return float(self.delta0)

    def to_dict(self):
        return {"case": self.case_tag, "s": self.s,
                "rho": str(self.rho), "rho_float": float(self.rho),
                "Delta0": str(self.delta0), "Delta0_float": float(self.delta0)}


def _ceil_half(num):
    # ceil(num / 2) for an integer numerator
    return -((-num) // 2)


def moment_case(n, lam, m):
    if m != 1 + lam // 2:
        raise DomainError(f"m must equal 1 + lambda/2, got m={m}, lambda={lam}")
    diff = n - lam
    if diff > 3:
        s = _ceil_half(diff - 3)
        rho = 1 + Fraction(s, 2 * m + 3)
        prod = math.prod(range(2 * m + 3, 2 * m + 3 + s))
        return MomentCase("a", s, rho, Fraction(prod) / rho ** (2 * m + 2))
    if diff <= 1:
        s = -_ceil_half(diff - 3)
        prod = math.prod(range(2 * m - s + 3, 2 * m + 3))
        return MomentCase("b", s, Fraction(1), Fraction(1, prod))
    return MomentCase("c", 0, Fraction(1), Fraction(1))


@dataclass(frozen=True)
class BoundConstants:
    params: KernelParams
    b0: float
    gamma_n: int
    alpha_n: float
    moment_case: MomentCase
    rho_prime: float
    ln_B: float
    ln_C: float
    c_from_b0: bool
    ln_delta0: float
    ln_d0: float
    ln_ln_inv_omega: float
    ln_ln_inv_omega_prime: float
    ln_amplitude: float

    def identity_residuals(self):
        """Absolute log-space residuals of the derived-constant identities."""
        g, m = self.gamma_n, self.params.m
        return {
            "ln_C>=ln_B": max(0.0, self.ln_B - self.ln_C),
            "ln_C>=ln(2/(3b0))": max(0.0, math.log(2 / (3 * self.b0)) - self.ln_C),
            "ln_delta0": abs(self.ln_delta0 - (-math.log(3 * g * (m + 1)) - self.ln_C)),
            "ln_ln_inv_omega": abs(self.ln_ln_inv_omega
                                   - (LN_LN_3_2 - math.log(3 * g) - self.ln_C)),
            "ln_ln_inv_omega_prime": abs(self.ln_ln_inv_omega_prime
                                         - (self.ln_ln_inv_omega - LN2)),
            "ln_d0": abs(self.ln_d0 - (self.ln_delta0 - LN2)),
        }

    def to_dict(self):
        p = self.params
        return {
            "params": p.to_dict(),
            "b0": self.b0,
            "gamma_n": self.gamma_n,
            "alpha_n": self.alpha_n,
            "moment_case": self.moment_case.to_dict(),
            "rho_prime": self.rho_prime,
            "ln_B": self.ln_B,
            "ln_C": self.ln_C,
            "C_branch": "2/(3*b0)" if self.c_from_b0 else "B",
            "ln_delta0": self.ln_delta0,
            "ln_d0": self.ln_d0,
            "ln_ln_inv_omega": self.ln_ln_inv_omega,
            "ln_ln_inv_omega_prime": self.ln_ln_inv_omega_prime,
            "ln_amplitude": self.ln_amplitude,
            "amplitude": math.exp(self.ln_amplitude),
            "readable": {
                "B": sci_from_ln(self.ln_B),
                "C": sci_from_ln(self.ln_C),
                "delta0": sci_from_ln(self.ln_delta0),
                "d0": sci_from_ln(self.ln_d0),
                "ln(1/omega)": sci_from_ln(self.ln_ln_inv_omega),
                "ln(1/omega_prime)": sci_from_ln(self.ln_ln_inv_omega_prime),
                "amplitude": sci_from_ln(self.ln_amplitude),
            },
            "notes": [
                f"l_const = {p.l_const!r}; every bound scales with sqrt(l_const)",
                "omega = exp(-exp(ln_ln_inv_omega)) is not representable in double precision",
                "semi-norm taken as sqrt(c^T A c) with no extra normalization constant",
            ],
        }


def bound_constants(params, b0=1.0):
    if not (b0 > 0 and math.isfinite(b0)):
        raise DomainError(f"b0 must be finite and > 0, got {b0!r}")
    n, lam, c, m = params.n, params.lam, params.c, params.m
    g = gamma_n(n)
    alpha = unit_ball_volume(n)
    mc = moment_case(n, lam, m)
    rho_prime = float(mc.rho) / c
    ln_B = math.log(2.0 * rho_prime * math.sqrt(n)) + float(2 * n * g)
    ln_b0_term = math.log(2.0 / (3.0 * b0))
    c_from_b0 = ln_b0_term > ln_B
    ln_C = ln_b0_term if c_from_b0 else ln_B
    ln_delta0 = -math.log(3 * g * (m + 1)) - ln_C
    ln_L = LN_LN_3_2 - math.log(3 * g) - ln_C
    ln_amp = (0.5 * math.log(params.l_const) + 0.25 * math.log(math.pi / 2)
              + 0.5 * math.log(n * alpha) + 0.5 * lam * math.log(c)
              + 0.5 * (math.log(mc.delta0.numerator) - math.log(mc.delta0.denominator)))
    return BoundConstants(
        params=params, b0=float(b0), gamma_n=g, alpha_n=alpha, moment_case=mc,
        rho_prime=rho_prime, ln_B=ln_B, ln_C=ln_C, c_from_b0=c_from_b0,
        ln_delta0=ln_delta0, ln_d0=ln_delta0 - LN2,
        ln_ln_inv_omega=ln_L, ln_ln_inv_omega_prime=ln_L - LN2,
        ln_amplitude=ln_amp)


@dataclass(frozen=True)
class BoundResult:
    ln_bound: float
    form: str
    ln_spacing: float
    ln_threshold: float
    hypothesis_ok: bool
    forced: bool
    ln_amplitude: float
    ln_f_norm: float
    ln_rate: float
    decrement: float

    @property
    def bound(self):
        return math.exp(self.ln_bound) if self.ln_bound < 709 else math.inf

    def to_dict(self):
        name = "delta0" if self.form == "delta" else "d0"
        return {
            "form": self.form,
            "ln_bound": self.ln_bound,
            "bound": self.bound,
            "readable_bound": sci_from_ln(self.ln_bound),
            "hypothesis_ok": self.hypothesis_ok,
            "forced": self.forced,
            "decomposition": {
                "ln_amplitude": self.ln_amplitude,
                "ln_f_norm": self.ln_f_norm,
                "ln_spacing": self.ln_spacing,
                f"ln_{name}": self.ln_threshold,
                "ln_rate": self.ln_rate,
                "decrement": self.decrement,
            },
        }


def error_bound(bc, spacing=None, form="delta", f_norm=1.0, *, ln_spacing=None,
                force_hypothesis=False):
    """Evaluate ``ln(A * |f|_h * exp(-D))`` with decrement ``D = rate / spacing``.

    ``form="delta"`` uses the subcube side and ``rate = ln(1/omega)``;
    ``form="fill"`` uses the fill distance and ``rate = ln(1/omega')``.
    The spacing may be passed in log space via ``ln_spacing``, which is the
    only way to reach the admissible range when ``n >= 4``.
    """
    if form not in ("delta", "fill"):
        raise DomainError(f"form must be 'delta' or 'fill', got {form!r}")
    if (spacing is None) == (ln_spacing is None):
        raise DomainError("pass exactly one of spacing and ln_spacing")
    if ln_spacing is None:
        if not spacing > 0:
            raise DomainError(f"spacing must be > 0, got {spacing!r}")
        ln_spacing = math.log(spacing)
    if not f_norm >= 0:
        raise DomainError(f"f_norm must be >= 0, got {f_norm!r}")
    if form == "delta":
        ln_thr, ln_rate, name = bc.ln_delta0, bc.ln_ln_inv_omega, "delta0"
    else:
        ln_thr, ln_rate, name = bc.ln_d0, bc.ln_ln_inv_omega_prime, "d0"
    ok = ln_spacing <= ln_thr + _LOG_CMP_RTOL * max(1.0, abs(ln_thr))
    if not ok and not force_hypothesis:
        raise HypothesisViolatedError(
            f"spacing {sci_from_ln(ln_spacing)} exceeds {name} = {sci_from_ln(ln_thr)}",
            threshold_name=name, ln_threshold=ln_thr)
    # ln(rate) - ln(threshold) has the huge ln C cancelled analytically; this keeps
    # the decrement exact at spacing == threshold however large C is
    g, m = bc.gamma_n, bc.params.m
    gap = LN_LN_3_2 - math.log(3 * g) + math.log(3 * g * (m + 1))
    arg = gap + (ln_thr - ln_spacing)
    decrement = math.exp(arg) if arg < 709.0 else math.inf
    ln_f = math.log(f_norm) if f_norm > 0 else -math.inf
    ln_bound = bc.ln_amplitude + ln_f - decrement
    return BoundResult(ln_bound, form, ln_spacing, ln_thr, ok, bool(force_hypothesis and not ok),
                       bc.ln_amplitude, ln_f, ln_rate, decrement)


def ln_moment_exact(params, k):
    """ln of the spectral moment ``int |xi|^k dmu(xi)`` in closed form.

    Radial reduction of the density with ``t = c r`` gives
    ``l n alpha_n c^{lambda-k} int_0^inf t^{k-lambda+nu-1} K_nu(t) dt`` and
    ``int t^{mu-1} K_nu = 2^{mu-2} Gamma((mu-nu)/2) Gamma((mu+nu)/2)``, so with
    ``mu = k - lambda + nu``::

        M(k) = l n alpha_n c^{lambda-k} 2^{k+(n-lambda)/2-2}
               Gamma((k-lambda)/2) Gamma((k+n)/2).
    """
    n, lam, c = params.n, params.lam, params.c
    if k <= lam:
        raise DivergentMomentError(f"moment of order {k} diverges (need k > lambda = {lam})")
    return (math.log(params.l_const) + math.log(n * unit_ball_volume(n))
            + (lam - k) * math.log(c) + (k + (n - lam) / 2 - 2) * LN2
            + math.lgamma((k - lam) / 2) + math.lgamma((k + n) / 2))


def moment_exact(params, k):
    ln_m = ln_moment_exact(params, k)
    return math.exp(ln_m) if ln_m < 709 else math.inf


def moment_quadrature(params, k, rtol=1e-12):
    """Moment of order ``k`` by adaptive quadrature of the radial density.

    Integrates ``n alpha_n r^{k+n-1} hhat(r)`` over ``[0, R]`` where ``R`` is
    pushed out until the exponentially decaying tail is below 1e-16 of the
    integral.
    """
    n, c = params.n, params.c
    if k <= params.lam:
        raise DivergentMomentError(f"moment of order {k} diverges")
    surface = n * unit_ball_volume(n)

    def f(r):
        return r ** (k + n - 1) * fourier_density(params, r) if r > 0 else 0.0

    # integrand ~ r^p e^{-c r}
    p = k - params.lam + params.nu - 1.5
    peak = max(p, 1.0) / c
    est, _ = integrate.quad(f, 0.0, 2 * peak, points=[peak], epsabs=0, epsrel=1e-6, limit=200)
    R = max(2 * peak, 2 * p / c)
    while f(R) * 2.0 / c > 1e-16 * est:
        R *= 1.25
    val, _ = integrate.quad(f, 0.0, R, points=[peak], epsabs=0, epsrel=rtol, limit=500)
    return surface * val


def ln_moment_bound_rhs(params, k):
    """ln of ``l sqrt(pi/2) n alpha_n c^{lambda-k} Delta_0 rho^k k!``, claimed for k >= 2m+2."""
    if k < 2 * params.m + 2:
        raise PreconditionError(f"the moment bound is stated for k >= 2m+2 = {2 * params.m + 2}")
    mc = moment_case(params.n, params.lam, params.m)
    return (math.log(params.l_const) + 0.5 * math.log(math.pi / 2)
            + math.log(params.n * unit_ball_volume(params.n))
            + (params.lam - k) * math.log(params.c)
            + math.log(mc.delta0.numerator) - math.log(mc.delta0.denominator)
            + k * (math.log(mc.rho.numerator) - math.log(mc.rho.denominator))
            + ln_factorial(k))


def moment_bound_rhs(params, k):
    ln_r = ln_moment_bound_rhs(params, k)
    return math.exp(ln_r) if ln_r < 709 else math.inf


def moment_growth_ratio(params, k):
    """``M(k+1) c / (M(k) (k+1))``; bounded by rho if moments grow like rho^k k! / c^k."""
    return math.exp(ln_moment_exact(params, k + 1) - ln_moment_exact(params, k)
                    + math.log(params.c) - math.log(k + 1))


def verify_lemma23(k_max):
    """Check ``(2k)! <= 4^k (k!)^2`` in exact integers for ``k = 1..k_max``."""
    fact_k = 1
    fact_2k = 1
    ok = True
    for k in range(1, k_max + 1):
        fact_k *= k
        fact_2k *= (2 * k - 1) * (2 * k)
        ok = ok and fact_2k <= 4**k * fact_k * fact_k
    return ok
