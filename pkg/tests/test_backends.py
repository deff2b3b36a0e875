"""numba and numpy kernel backends: selection flag and agreement."""

import os
import subprocess
import sys

import numpy as np
import pytest

from dotbounds import _kernels
from dotbounds._kernels import numpy_backend

numba_backend = pytest.importorskip("dotbounds._kernels.numba_backend")

from conftest import random_pair_f32


class TestBinary32BitIdentity:
    def test_trace_bit_identical(self, rng):
        for n in (1, 2, 3, 64, 10_000):
            x, y = random_pair_f32(rng, n)
            a = numpy_backend.accumulate_trace_b32(x, y)
            b = numba_backend.accumulate_trace_b32(x, y)
            for u, v in zip(a, b):
                assert np.array_equal(u, v), n

    def test_final_bit_identical(self, rng):
        for n in (1, 17, 100_000):
            x, y = random_pair_f32(rng, n)
            assert numpy_backend.accumulate_final_b32(x, y) == numba_backend.accumulate_final_b32(x, y)

    def test_exact_dot_bit_identical(self, rng):
        x, y = random_pair_f32(rng, 50_000)
        assert numpy_backend.exact_dot_b32(x, y) == numba_backend.exact_dot_b32(x, y)

    def test_chunk_boundaries_do_not_change_results(self, rng, monkeypatch):
        # streaming state carries across chunks with the same op sequence
        x, y = random_pair_f32(rng, 7777)
        ref = numpy_backend.accumulate_final_b32(x, y)
        monkeypatch.setattr(numpy_backend, "_CHUNK", 1000)
        assert numpy_backend.accumulate_final_b32(x, y) == ref


class TestBinary64Agreement:
    def test_trace_bit_identical(self, rng):
        x = rng.standard_normal(500)
        y = rng.standard_normal(500)
        a = numpy_backend.accumulate_trace_b64(x, y)
        b = numba_backend.accumulate_trace_b64(x, y)
        for u, v in zip(a, b):
            assert np.array_equal(u, v)

    def test_exact_dot_within_ulps(self, rng):
        # different summation orders; both are double-double quality
        x = rng.standard_normal(20_000)
        y = rng.standard_normal(20_000)
        a = numpy_backend.exact_dot_b64(x, y)
        b = numba_backend.exact_dot_b64(x, y)
        assert abs(a - b) <= 2 * np.spacing(abs(a) + 1.0)


class TestMartingaleKernels:
    def test_coeffs_agree_to_tolerance(self, rng):
        u = 2.0**-24
        for n in (1, 2, 1000, 50_000):
            absp = np.abs(rng.standard_normal(n))
            a = numpy_backend.martingale_coeffs(absp, u)
            b = numba_backend.martingale_coeffs(absp, u)
            np.testing.assert_allclose(a, b, rtol=1e-11)
            sa = numpy_backend.martingale_sumsq(absp, u)
            sb = numba_backend.martingale_sumsq(absp, u)
            assert abs(sa - sb) <= 1e-10 * sa


class TestBackendSelection:
    def test_active_backend_resolves(self):
        assert _kernels.active_name() in ("numba", "numpy")

    def test_env_flag_forces_numpy(self):
        code = (
            "import dotbounds._kernels as k; print(k.active_name())"
        )
        out = subprocess.run(
            [sys.executable, "-c", code],
            env={**os.environ, "DOTBOUNDS_BACKEND": "numpy"},
            capture_output=True, text=True, check=True,
        )
        assert out.stdout.strip() == "numpy"

    def test_env_flag_forces_numba(self):
        code = "import dotbounds._kernels as k; print(k.active_name())"
        out = subprocess.run(
            [sys.executable, "-c", code],
            env={**os.environ, "DOTBOUNDS_BACKEND": "numba"},
            capture_output=True, text=True, check=True,
        )
        assert out.stdout.strip() == "numba"

    def test_use_backend_rejects_unknown(self):
        with pytest.raises(ValueError):
            _kernels.use_backend("fortran")
        _kernels.use_backend("auto")  # restore
