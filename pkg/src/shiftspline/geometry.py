"""Point sets on axis-aligned cubes, fill distance and subcube coverage."""
import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .errors import DomainError, InvalidArgumentError

DUPLICATE_TOL = 1e-14
_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


@dataclass(frozen=True)
class CubeDomain:
    """Closed axis-aligned cube ``[lower, lower + side]^n``."""

    lower: tuple
    side: float

    def __post_init__(self):
        lower = tuple(float(v) for v in np.atleast_1d(self.lower))
        if not all(math.isfinite(v) for v in lower):
            raise InvalidArgumentError("cube corner must be finite")
        if not (math.isfinite(self.side) and self.side > 0):
            raise DomainError(f"cube side must be > 0, got {self.side!r}")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "side", float(self.side))

    @classmethod
    def unit(cls, dim):
        return cls((0.0,) * dim, 1.0)

    @property
    def dim(self):
        return len(self.lower)

    def contains(self, points, tol=1e-12):
        lo = np.asarray(self.lower)
        pts = np.atleast_2d(points)
        return np.all((pts >= lo - tol) & (pts <= lo + self.side + tol), axis=1)

    def to_dict(self):
        return {"lower": list(self.lower), "side": self.side}


class PointSet:
    """Finite set of distinct points in R^n, optionally attached to a cube."""

    def __init__(self, points, domain=None, dim=None):
        pts = np.asarray(points, dtype=float)
        if pts.size == 0:
            if dim is None:
                dim = domain.dim if domain is not None else None
            if dim is None:
                raise InvalidArgumentError("an empty PointSet needs an explicit dim")
            pts = pts.reshape(0, dim)
        else:
            pts = np.atleast_2d(pts)
            if dim is not None and pts.shape[1] != dim:
                raise InvalidArgumentError(f"points have dimension {pts.shape[1]}, expected {dim}")
        if not np.all(np.isfinite(pts)):
            raise InvalidArgumentError("point coordinates must be finite")
        if domain is not None:
            if domain.dim != pts.shape[1]:
                raise InvalidArgumentError("domain dimension does not match points")
            if not np.all(domain.contains(pts)):
                raise InvalidArgumentError("points lie outside the domain")
        if len(pts) > 1 and cKDTree(pts).query_pairs(DUPLICATE_TOL):
            raise InvalidArgumentError("duplicate points in PointSet")
        pts.setflags(write=False)
        self.points = pts
        self.domain = domain

    @property
    def dim(self):
        return self.points.shape[1]

    def __len__(self):
        return self.points.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.points, dtype=dtype)

    def __repr__(self):
        return f"PointSet(N={len(self)}, dim={self.dim})"


def _radical_inverse(i, base):
    inv, f = 0.0, 1.0 / base
    while i > 0:
        i, digit = divmod(i, base)
        inv += digit * f
        f /= base
    return inv


def halton(count, dim):
    """First ``count`` Halton points in [0, 1)^dim, starting at index 1."""
    if dim > len(_PRIMES):
        raise InvalidArgumentError(f"halton supports dim <= {len(_PRIMES)}")
    return np.array([[_radical_inverse(i, _PRIMES[j]) for j in range(dim)]
                     for i in range(1, count + 1)])


def cells_per_axis(side, delta):
    # guards against ceil(1/0.1) = 11 style round-off
    return max(1, math.ceil(side / delta - 1e-9))


def generate_points(domain, kind, parameter, seed=0):
    """Generate a point set inside ``domain``.

    ``grid`` places a lattice of spacing ``parameter`` starting at the lower
    corner (the upper face is included when the side is a multiple of the
    spacing).  ``jittered`` puts one uniform point in each cell of the
    ``ceil(side/parameter)``-per-axis partition, so every cell of side
    ``parameter`` is covered by construction.  ``halton`` uses the first
    ``parameter`` Halton points, bases the first n primes.
    """
    if not parameter > 0:
        raise DomainError(f"spacing/count must be positive, got {parameter!r}")
    lo = np.asarray(domain.lower)
    n = domain.dim
    if kind == "grid":
        k = math.floor(domain.side / parameter + 1e-9)
        axis = np.arange(k + 1) * parameter
        pts = np.stack(np.meshgrid(*([axis] * n), indexing="ij"), axis=-1).reshape(-1, n)
        pts = lo + np.minimum(pts, domain.side)
    elif kind == "jittered":
        K = cells_per_axis(domain.side, parameter)
        idx = np.stack(np.meshgrid(*([np.arange(K)] * n), indexing="ij"), axis=-1).reshape(-1, n)
        cell_lo = idx * parameter
        cell_hi = np.minimum(cell_lo + parameter, domain.side)
        rng = np.random.default_rng(seed)
        u = rng.uniform(size=cell_lo.shape)
        pts = lo + cell_lo + u * (cell_hi - cell_lo)
    elif kind == "halton":
        if int(parameter) != parameter:
            raise DomainError("halton count must be an integer")
        pts = lo + domain.side * halton(int(parameter), n)
    else:
        raise InvalidArgumentError(f"unknown point kind {kind!r}")
    return PointSet(pts, domain=domain)


@dataclass(frozen=True)
class FillDistance:
    lower: float
    upper: float


def _probe_grid(domain, resolution):
    axis = np.linspace(0.0, domain.side, resolution)
    grids = np.meshgrid(*([axis] * domain.dim), indexing="ij")
    return np.asarray(domain.lower) + np.stack(grids, axis=-1).reshape(-1, domain.dim)


def fill_distance(domain, points, resolution=101):
    """Rigorous bracket ``[lower, upper]`` on sup_{y in domain} min_x |y - x|.

    ``lower`` is attained on a regular probe grid; any point of the cube is
    within half a probe-cell diagonal of a probe, which gives ``upper``.
    """
    if resolution < 2:
        raise InvalidArgumentError("resolution must be >= 2")
    pts = np.asarray(getattr(points, "points", points), dtype=float)
    if pts.size == 0:
        raise DomainError("fill distance of an empty set is undefined")
    pts = np.atleast_2d(pts)
    dist, _ = cKDTree(pts).query(_probe_grid(domain, resolution))
    lower = float(dist.max())
    upper = lower + 0.5 * math.sqrt(domain.dim) * domain.side / (resolution - 1)
    return FillDistance(lower, upper)


@dataclass(frozen=True)
class Coverage:
    passed: bool
    first_empty: int | None
    cells: int


def subcube_coverage(domain, delta, points):
    """Check that every closed cell of side ``delta`` contains a point.

    The partition has ``ceil(side/delta)`` cells per axis starting at the lower
    corner, the last one clipped to the cube.  A point on a shared face counts
    for every cell it touches.  ``first_empty`` is the row-major (C order)
    index of the first empty cell.
    """
    if not delta > 0:
        raise DomainError(f"delta must be > 0, got {delta!r}")
    if delta > domain.side * (1 + 1e-12):
        raise DomainError("delta must not exceed the cube side")
    n = domain.dim
    K = cells_per_axis(domain.side, delta)
    covered = np.zeros((K,) * n, dtype=bool)
    pts = np.asarray(getattr(points, "points", points), dtype=float)
    if pts.size:
        u = (np.atleast_2d(pts) - np.asarray(domain.lower)) / delta
        inside = domain.contains(np.atleast_2d(pts))
        u = u[inside]
        hi = np.clip(np.floor(u).astype(int), 0, K - 1)
        on_face = np.isclose(u, np.round(u), rtol=0, atol=1e-12)
        lo = np.where(on_face, np.clip(np.round(u).astype(int) - 1, 0, K - 1), hi)
        for a, b in zip(lo, hi):
            covered[tuple(slice(x, y + 1) for x, y in zip(a, b))] = True
    flat = covered.ravel()
    if flat.all():
        return Coverage(True, None, flat.size)
    return Coverage(False, int(np.argmin(flat)), flat.size)


def read_points_csv(path):
    with open(path) as fh:
        header = fh.readline().strip().split(",")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.size == 0:
        return PointSet(np.empty((0, len(header))), dim=len(header))
    if data.shape[1] != len(header):
        raise InvalidArgumentError(f"{path}: header has {len(header)} columns, rows have {data.shape[1]}")
    return PointSet(data)


def write_points_csv(path, points, extra=None):
    """Write points with header ``x1,...,xn`` plus optional named extra columns."""
    pts = np.atleast_2d(np.asarray(getattr(points, "points", points), dtype=float))
    cols = [f"x{i + 1}" for i in range(pts.shape[1])]
    data = pts
    if extra:
        cols += list(extra)
        data = np.column_stack([pts] + [np.asarray(v, dtype=float) for v in extra.values()])
    np.savetxt(path, data, delimiter=",", header=",".join(cols), comments="", fmt="%.17g")
