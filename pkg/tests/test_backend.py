import os
import subprocess
import sys

import numpy as np
import pytest

from shiftspline import _backend, _fallback

try:
    from shiftspline import _core
except ImportError:  # pragma: no cover
    _core = None

needs_core = pytest.mark.skipif(_core is None, reason="compiled extension not built")


@needs_core
@pytest.mark.parametrize("half_lambda,sign,c", [(1, 1.0, 1.0), (2, -1.0, 0.3), (4, 1.0, 2.5)])
def test_matrix_backends_agree(rng, half_lambda, sign, c):
    a, b = rng.uniform(-1, 1, (40, 2)), rng.uniform(-1, 1, (30, 2))
    np.testing.assert_allclose(_core.kernel_matrix(a, b, c, half_lambda, sign),
                               _fallback.kernel_matrix(a, b, c, half_lambda, sign), rtol=1e-13)


@needs_core
@pytest.mark.parametrize("dim", [2, 4])
def test_matvec_backends_agree(rng, dim):
    pts, ctr, w = rng.uniform(size=(5000, dim)), rng.uniform(size=(60, dim)), rng.normal(size=60)
    np.testing.assert_allclose(_core.kernel_matvec(pts, ctr, w, 0.5, 1, 1.0),
                               _fallback.kernel_matvec(pts, ctr, w, 0.5, 1, 1.0),
                               rtol=1e-11, atol=1e-13)


def test_matvec_equals_matrix_product(rng):
    pts, ctr, w = rng.uniform(size=(100, 2)), rng.uniform(size=(20, 2)), rng.normal(size=20)
    K = _backend.kernel_matrix(pts, ctr, 1.0, 1, 1.0)
    np.testing.assert_allclose(_backend.kernel_matvec(pts, ctr, w, 1.0, 1, 1.0), K @ w, rtol=1e-12)


def test_pure_env_selects_fallback():
    env = dict(os.environ, SHIFTSPLINE_PURE="1")
    out = subprocess.run([sys.executable, "-c", "import shiftspline; print(shiftspline.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"


@needs_core
@pytest.mark.skipif(os.environ.get("SHIFTSPLINE_PURE", "") not in ("", "0"),
                    reason="numpy fallback forced by SHIFTSPLINE_PURE")
def test_compiled_backend_selected_by_default():
    assert _backend.BACKEND == "cython"
