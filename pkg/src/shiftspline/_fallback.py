"""Pure numpy implementations of the dense kernel loops.

These mirror the routines in the compiled ``_core`` extension and are used
when the extension is unavailable or ``SHIFTSPLINE_PURE=1`` is set.
"""
import numpy as np

# rows of the evaluation block processed at once in kernel_matvec
_CHUNK = 2048


def _sq_dist(a, b):
    d = a[:, None, :] - b[None, :, :]
    return np.einsum("ijk,ijk->ij", d, d)


def _profile(r2, c2, half_lambda, sign):
    q = r2 + c2
    return sign * q**half_lambda * (0.5 * np.log(q))


def kernel_matrix(a, b, c, half_lambda, sign):
    a = np.ascontiguousarray(a, dtype=np.float64)
    b = np.ascontiguousarray(b, dtype=np.float64)
    return _profile(_sq_dist(a, b), c * c, half_lambda, sign)


def kernel_matvec(points, centers, coeffs, c, half_lambda, sign):
    points = np.ascontiguousarray(points, dtype=np.float64)
    centers = np.ascontiguousarray(centers, dtype=np.float64)
    coeffs = np.ascontiguousarray(coeffs, dtype=np.float64)
    out = np.empty(points.shape[0])
    for start in range(0, points.shape[0], _CHUNK):
        block = points[start:start + _CHUNK]
        out[start:start + _CHUNK] = _profile(
            _sq_dist(block, centers), c * c, half_lambda, sign) @ coeffs
    return out
