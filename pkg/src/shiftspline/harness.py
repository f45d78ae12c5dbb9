"""Convergence experiments, decay-rate fitting and verification suites."""
import logging
import math
import time
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np

from . import bounds, polynomials
from .errors import FitUnavailableError, IllConditioningError, SetupError
from .geometry import CubeDomain, PointSet, fill_distance, generate_points, subcube_coverage
from .interpolator import (ConditioningWarning, evaluate, fit, make_native_test_function,
                           semi_norm)
from .kernel import KernelParams, kernel_combination
from .polynomials import PolynomialBasis, poly_matrix

logger = logging.getLogger(__name__)

MAX_POINTS = 3000
TARGET_KINDS = ("native", "gaussian", "polynomial")


@dataclass
class ConvergenceConfig:
    n: int = 2
    lam: int = 2
    c: float = 1.0
    l_const: float = 1.0
    b0: float = 1.0
    lower: tuple = None
    side: float = 1.0
    levels: int = 4
    delta1: float = 0.25
    target: dict = field(default_factory=lambda: {"kind": "native"})
    eval_resolution: int = None
    fill_resolution: int = 201
    seed: int = 0
    force_hypothesis: bool = False
    force: bool = False

    _ALIASES = {"lambda": "lam", "l-const": "l_const", "eval-resolution": "eval_resolution",
                "fill-resolution": "fill_resolution", "force-hypothesis": "force_hypothesis"}

    @classmethod
    def from_dict(cls, data):
        kw = {}
        for key, value in data.items():
            key = cls._ALIASES.get(key, key)
            if key == "domain":
                kw["lower"] = tuple(value.get("lower", ())) or None
                kw["side"] = value.get("side", 1.0)
            elif key in cls.__dataclass_fields__ and not key.startswith("_"):
                kw[key] = value
            else:
                raise SetupError(f"unknown config key {key!r}")
        return cls(**kw)

    def __post_init__(self):
        if self.lower is None:
            self.lower = (0.0,) * int(self.n)
        if self.eval_resolution is None:
            self.eval_resolution = 101 if self.n == 2 else 11
        if isinstance(self.target, str):
            self.target = {"kind": self.target}

    @property
    def params(self):
        return KernelParams(self.n, self.lam, self.c, self.l_const)

    @property
    def domain(self):
        return CubeDomain(self.lower, self.side)

    def deltas(self):
        return [self.delta1 / 2**i for i in range(self.levels)]

    def validate(self):
        params = self.params
        domain = self.domain
        if domain.dim != params.n:
            raise SetupError("domain dimension does not match n")
        if self.levels < 3:
            raise SetupError("at least 3 levels are required")
        if not 0 < self.delta1 <= self.side:
            raise SetupError("delta1 must lie in (0, side]")
        kind = self.target.get("kind")
        if kind not in TARGET_KINDS:
            raise SetupError(f"target kind must be one of {TARGET_KINDS}, got {kind!r}")
        for d in self.deltas():
            count = math.ceil(self.side / d - 1e-9) ** params.n
            if count > MAX_POINTS:
                raise SetupError(f"level with delta={d:g} needs {count} points (> {MAX_POINTS})")
        return params, domain

    def to_dict(self):
        return {"n": self.n, "lambda": self.lam, "c": self.c, "l_const": self.l_const,
                "b0": self.b0, "domain": {"lower": list(self.lower), "side": self.side},
                "levels": self.levels, "delta1": self.delta1, "target": dict(self.target),
                "eval_resolution": self.eval_resolution, "fill_resolution": self.fill_resolution,
                "seed": self.seed, "force_hypothesis": self.force_hypothesis,
                "force": self.force}


class Target:
    """A test function together with its native semi-norm when known."""

    def __init__(self, kind, func, descriptor, f_norm=None):
        self.kind = kind
        self.func = func
        self.descriptor = descriptor
        self.f_norm = f_norm

    def __call__(self, x):
        return self.func(np.atleast_2d(x))


def build_target(spec, params, domain, seed):
    kind = spec.get("kind", "native")
    lo = np.asarray(domain.lower)
    if kind == "native":
        count = int(spec.get("centers", 12))
        tseed = int(spec.get("seed", seed))
        margin = float(spec.get("margin", 0.1)) * domain.side
        rng = np.random.default_rng([tseed, 1])
        Y = PointSet(lo + margin + (domain.side - 2 * margin) * rng.uniform(size=(count, params.n)))
        coeffs = make_native_test_function(params, Y, tseed)
        norm = semi_norm(params, Y, coeffs)
        desc = {"kind": "native", "centers": count, "seed": tseed, "semi_norm": norm,
                "center_points": Y.points.tolist(), "coefficients": coeffs.tolist()}
        return Target(kind, lambda x: kernel_combination(params, x, Y.points, coeffs), desc, norm)
    if kind == "gaussian":
        center = np.asarray(spec.get("center", lo + 0.5 * domain.side), dtype=float)
        width = float(spec.get("width", 0.3))
        desc = {"kind": "gaussian", "center": center.tolist(), "width": width}
        return Target(kind, lambda x: np.exp(-np.sum((x - center) ** 2, axis=1) / width**2), desc)
    if kind == "polynomial":
        basis = PolynomialBasis(params.n, params.m - 1)
        coeffs = np.asarray(spec.get("coefficients", np.arange(1, len(basis) + 1)), dtype=float)
        if coeffs.size != len(basis):
            raise SetupError(f"polynomial target needs {len(basis)} coefficients")
        desc = {"kind": "polynomial", "degree": params.m - 1, "coefficients": coeffs.tolist()}
        return Target(kind, lambda x: poly_matrix(basis, x) @ coeffs, desc)
    raise SetupError(f"unknown target kind {kind!r}")


@dataclass
class LevelRecord:
    level: int
    delta: float
    N: int
    fill_lower: float
    fill_upper: float
    max_error: float
    condition: float
    failed: bool = False
    note: str = ""
    ln_bound: float = None
    bound_hypothesis_ok: bool = None
    # bound for a unit native-space norm; the only bound available for non-native targets
    ln_bound_unit: float = None


@dataclass
class RateFit:
    slope_vs_inv_d: float
    omega_emp: float
    r_squared: float
    algebraic_order: float
    no_decay: bool
    used_levels: int
    notes: list

    def to_dict(self):
        return asdict(self)


def _linfit(x, y):
    A = np.column_stack([x, np.ones_like(x)])
    (slope, icpt), *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - (slope * x + icpt)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    ss_res = float(np.sum(resid**2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(slope), r2


def fit_rate(levels):
    """Least-squares decay rates of the errors against the fill distance.

    ``levels`` is a sequence of ``(d, error)`` pairs or :class:`LevelRecord`
    objects (then ``fill_upper`` is used as ``d``).  The exponential fit is
    ``ln E = slope / d + b`` giving ``omega_emp = exp(slope)``; the algebraic
    fit ``ln E = order ln d + b`` is reported for comparison.
    """
    pairs = []
    for lv in levels:
        if isinstance(lv, LevelRecord):
            if lv.failed:
                continue
            pairs.append((lv.fill_upper, lv.max_error))
        else:
            pairs.append(tuple(lv))
    notes = []
    usable = [(d, e) for d, e in pairs if e > 0 and math.isfinite(e)]
    if len(usable) < len(pairs):
        notes.append(f"excluded {len(pairs) - len(usable)} level(s) with zero or non-finite error")
    if len(usable) < 3:
        raise FitUnavailableError(f"need at least 3 usable levels, got {len(usable)}")
    d = np.array([p[0] for p in usable], dtype=float)
    e = np.log(np.array([p[1] for p in usable], dtype=float))
    slope, r2 = _linfit(1.0 / d, e)
    order, _ = _linfit(np.log(d), e)
    if np.ptp(e) <= 1e-12 * max(1.0, float(np.abs(e).max())):
        # constant errors: report exactly zero slope instead of rounding noise
        slope, order = 0.0, 0.0
    no_decay = slope >= 0
    if no_decay:
        notes.append("no decay")
    return RateFit(slope, math.exp(slope), r2, order, no_decay, len(usable), notes)


@dataclass
class ConvergenceReport:
    config: ConvergenceConfig
    target: dict
    levels: list
    fitted: RateFit = None
    fit_note: str = ""
    bound_constants: dict = None
    elapsed: float = 0.0

    def to_dict(self):
        return {
            "params": self.config.params.to_dict(),
            "b0": self.config.b0,
            "generator": {"kind": "jittered", "seed": self.config.seed},
            "config": self.config.to_dict(),
            "target": self.target,
            "levels": [asdict(lv) for lv in self.levels],
            "fitted": self.fitted.to_dict() if self.fitted else None,
            "fit_note": self.fit_note,
            "certified": {
                "form": "fill",
                "force_hypothesis": self.config.force_hypothesis,
                "per_level_ln_bound": [lv.ln_bound for lv in self.levels],
                "per_level_ln_bound_unit_norm": [lv.ln_bound_unit for lv in self.levels],
                "hypothesis_ok": [lv.bound_hypothesis_ok for lv in self.levels],
            },
            "certified_rate": {
                "ln_ln_inv_omega_prime": self.bound_constants["ln_ln_inv_omega_prime"],
                "ln(1/omega_prime)": self.bound_constants["readable"]["ln(1/omega_prime)"],
                "omega_emp": self.fitted.omega_emp if self.fitted else None,
            },
            "bound_constants": self.bound_constants,
            "notes": [f"l_const = {self.config.l_const!r}",
                      "semi-norm normalization: sqrt(c^T A c), no extra constant"],
            "elapsed_seconds": self.elapsed,
        }

    def levels_table(self):
        return [(lv.delta, lv.N, lv.fill_upper, lv.max_error, lv.condition) for lv in self.levels]


def _eval_grid(domain, resolution):
    axis = np.linspace(0.0, domain.side, resolution)
    grids = np.meshgrid(*([axis] * domain.dim), indexing="ij")
    return np.asarray(domain.lower) + np.stack(grids, axis=-1).reshape(-1, domain.dim)


def run_convergence(config):
    """Run the jittered-refinement experiment described by ``config``.

    Level l uses jittered sites at spacing ``delta1 / 2**(l-1)`` with seed
    ``seed + l``.  A level whose interpolation system is too ill-conditioned
    is marked failed and the run continues.
    """
    if isinstance(config, dict):
        config = ConvergenceConfig.from_dict(config)
    t0 = time.perf_counter()
    params, domain = config.validate()
    bc = bounds.bound_constants(params, config.b0)
    target = build_target(config.target, params, domain, config.seed)
    grid = _eval_grid(domain, config.eval_resolution)
    f_grid = target(grid)

    records = []
    for lvl, delta in enumerate(config.deltas(), start=1):
        X = generate_points(domain, "jittered", delta, seed=config.seed + lvl)
        cov = subcube_coverage(domain, delta, X)
        if not cov.passed:
            raise SetupError(f"level {lvl}: cell {cov.first_empty} of the delta={delta:g} "
                             "partition is empty")
        fd = fill_distance(domain, X, config.fill_resolution)
        rec = LevelRecord(lvl, delta, len(X), fd.lower, fd.upper, math.nan, math.nan)
        try:
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always", ConditioningWarning)
                model = fit(params, X, target(X.points), force=config.force)
            if caught:
                rec.note = "; ".join(str(w.message) for w in caught)
            rec.condition = model.condition
            rec.max_error = float(np.abs(evaluate(model, grid) - f_grid).max())
        except IllConditioningError as exc:
            rec.failed = True
            rec.condition = exc.condition
            rec.note = f"ill-conditioned: {exc}"
            logger.warning("level %d failed: %s", lvl, exc)
        try:
            res = bounds.error_bound(bc, rec.fill_upper, "fill", 1.0,
                                     force_hypothesis=config.force_hypothesis)
            rec.ln_bound_unit = res.ln_bound
            if target.f_norm is not None:
                rec.ln_bound = res.ln_bound + (math.log(target.f_norm) if target.f_norm > 0
                                               else -math.inf)
            rec.bound_hypothesis_ok = res.hypothesis_ok
        except bounds.HypothesisViolatedError as exc:
            rec.bound_hypothesis_ok = False
            rec.note = (rec.note + "; " if rec.note else "") + f"bound not evaluated: {exc}"
        records.append(rec)

    report = ConvergenceReport(config, target.descriptor, records,
                               bound_constants=bc.to_dict())
    if target.kind == "polynomial":
        report.fit_note = "skipped: polynomial target is reproduced exactly"
    else:
        try:
            report.fitted = fit_rate(records)
        except FitUnavailableError as exc:
            report.fit_note = str(exc)
    report.elapsed = time.perf_counter() - t0
    return report


# -- verification suites ------------------------------------------------------

QUAD_GRID = [(n, lam, c) for n in (2, 4) for lam in (2, 4) for c in (0.5, 1.0, 2.0)]
GROWTH_GRID = [(n, lam, c) for n in (2, 4, 6, 8) for lam in (2, 4, 6) for c in (0.5, 1.0, 2.0)]
QUAD_RTOL = 1e-8
GROWTH_ATOL = 1e-9


def verify_moments():
    cases = []
    ok = True
    for n, lam, c in QUAD_GRID:
        p = KernelParams(n, lam, c)
        for k in range(2 * p.m + 2, 2 * p.m + 7):
            exact = bounds.moment_exact(p, k)
            quad = bounds.moment_quadrature(p, k)
            rel = abs(exact - quad) / exact
            passed = rel <= QUAD_RTOL
            ok &= passed
            cases.append({"check": "quadrature", "n": n, "lambda": lam, "c": c, "k": k,
                          "exact": exact, "quadrature": quad, "rel_err": rel, "pass": passed})
    audit = []
    for n, lam, c in GROWTH_GRID:
        p = KernelParams(n, lam, c)
        rho = float(bounds.moment_case(n, lam, p.m).rho)
        ks = range(2 * p.m + 2, 2 * p.m + 41)
        worst = max(bounds.moment_growth_ratio(p, k) for k in ks)
        passed = worst <= rho + GROWTH_ATOL
        ok &= passed
        cases.append({"check": "growth", "n": n, "lambda": lam, "c": c, "rho": rho,
                      "max_ratio": worst, "pass": passed})
        ratios = [math.exp(bounds.ln_moment_exact(p, k) - bounds.ln_moment_bound_rhs(p, k))
                  for k in ks]
        audit.append({"n": n, "lambda": lam, "c": c, "max_moment_over_rhs": max(ratios),
                      "bound_holds": max(ratios) <= 1.0, "finite": all(map(math.isfinite, ratios))})
        ok &= all(map(math.isfinite, ratios))
    return {"suite": "moments", "pass": bool(ok), "cases": cases, "audit": audit}


POLYBOUND_CASES = [(1, 0), (1, 1), (1, 2), (2, 1)]


def verify_polybound(trials=200, seed=0):
    cases = []
    for n, k in POLYBOUND_CASES:
        q = polynomials.gamma_n(n) * (k + 1)
        rep = polynomials.polybound_check(n, k, q, trials, seed)
        cases.append(rep.to_dict())
    return {"suite": "polybound", "pass": all(c["pass"] for c in cases), "cases": cases}


def verify_lemma23(k_max=40):
    ok = bounds.verify_lemma23(k_max)
    return {"suite": "lemma23", "pass": ok, "cases": [{"k_max": k_max, "pass": ok}]}


SUITES = {"moments": verify_moments, "polybound": verify_polybound, "lemma23": verify_lemma23}


def run_suite(name):
    if name == "all":
        results = [fn() for fn in SUITES.values()]
        return {"suite": "all", "pass": all(r["pass"] for r in results), "suites": results}
    return SUITES[name]()
