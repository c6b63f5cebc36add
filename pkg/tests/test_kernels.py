"""The compiled and numpy kernels must agree bit for bit: results may never
depend on which backend got imported."""
import os
import subprocess
import sys

import numpy as np
import pytest

from ganleak import _simulate_np
from ganleak import kernels

try:
    from ganleak import _simulate as _simulate_ext
except ImportError:
    _simulate_ext = None

needs_ext = pytest.mark.skipif(_simulate_ext is None, reason="compiled kernels not built")


def member_setup(m=37, seed=0):
    rng = np.random.default_rng(seed)
    member_ids = np.sort(rng.choice(500, size=m, replace=False)).astype(np.int64)
    w = rng.random(m) + 0.01
    cdf = np.cumsum(w / w.sum())
    cdf[-1] = 1.0
    return member_ids, cdf


@needs_ext
@pytest.mark.parametrize("rho", [0.0, 0.3, 0.999, 1.0])
@pytest.mark.parametrize("novel_size", [1, 463])
def test_sample_codes_backends_agree(rho, novel_size):
    member_ids, cdf = member_setup()
    u = np.random.default_rng(1).random((50_000, 2))
    a = _simulate_np.sample_source_codes(u, rho, member_ids, cdf, novel_size)
    b = _simulate_ext.sample_source_codes(u, rho, member_ids, cdf, novel_size)
    assert np.array_equal(a, b)


@needs_ext
@pytest.mark.parametrize("accuracy", [0.5, 0.861, 1.0])
@pytest.mark.parametrize("novel_uniform", [True, False])
@pytest.mark.parametrize("yf_size", [1, 2, 500])
def test_classify_codes_backends_agree(accuracy, novel_uniform, yf_size):
    rng = np.random.default_rng(2)
    codes = rng.integers(-40, yf_size, size=50_000).astype(np.int64)
    u = rng.random((50_000, 2))
    a = _simulate_np.classify_codes(codes, u, accuracy, yf_size, novel_uniform)
    b = _simulate_ext.classify_codes(codes, u, accuracy, yf_size, novel_uniform)
    assert np.array_equal(a, b)


@needs_ext
def test_backends_agree_at_extreme_uniforms():
    # near-1 uniforms exercise the clamp paths of both implementations
    member_ids, cdf = member_setup(m=3)
    top = 1.0 - 2.0**-53
    u = np.array([[0.0, top], [top, top], [0.5, 0.0], [top, 0.0]])
    a = _simulate_np.sample_source_codes(u, 0.5, member_ids, cdf, 7)
    b = _simulate_ext.sample_source_codes(u, 0.5, member_ids, cdf, 7)
    assert np.array_equal(a, b)
    codes = np.array([2, -5, 0, -1], dtype=np.int64)
    pa = _simulate_np.classify_codes(codes, u, 0.5, 9, True)
    pb = _simulate_ext.classify_codes(codes, u, 0.5, 9, True)
    assert np.array_equal(pa, pb)
    assert pa.max() < 9


def test_codes_stay_in_range():
    member_ids, cdf = member_setup()
    u = np.random.default_rng(3).random((10_000, 2))
    codes = kernels.sample_source_codes(u, 0.4, member_ids, cdf, 11)
    members = codes[codes >= 0]
    novels = -codes[codes < 0] - 1
    assert set(np.unique(members)) <= set(member_ids.tolist())
    assert novels.min() >= 0 and novels.max() < 11


def test_env_var_forces_numpy_backend():
    env = dict(os.environ, GANLEAK_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "import ganleak.kernels as k; print(k.BACKEND)"],
        capture_output=True,
        text=True,
        env=env,
        check=True,
    )
    assert out.stdout.strip() == "numpy"


def test_active_backend_reported():
    assert kernels.BACKEND in ("cython", "numpy")
