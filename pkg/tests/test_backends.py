"""Agreement between the numba kernels and the pure-numpy fallback."""
import json
import os
import subprocess
import sys

import numpy as np
import pytest

from exuberance import _kernels_numpy as npk

nbk = pytest.importorskip("exuberance._kernels_numba")


def centred(x):
    return np.ascontiguousarray(x - x.mean())


@pytest.fixture(scope="module")
def paths():
    rng = np.random.default_rng(77)
    return [np.cumsum(rng.standard_normal(T)) for T in (30, 61, 140)]


class TestKernelParity:
    @pytest.mark.parametrize("p", [0, 1, 2])
    def test_prefix_moments(self, paths, p):
        for x in paths:
            for a, b in zip(nbk.prefix_moments(centred(x), p), npk.prefix_moments(centred(x), p)):
                np.testing.assert_array_equal(a, b)

    @pytest.mark.parametrize("p", [0, 1, 2])
    def test_bsadf(self, paths, p):
        w0 = 2 * p + 8
        for x in paths:
            hi, lo = nbk.prefix_moments(centred(x), p)
            a, b = nbk.bsadf(hi, lo, p, w0), npk.bsadf(hi, lo, p, w0)
            for u, v in zip(a, b):
                np.testing.assert_allclose(u, v, rtol=1e-12, atol=1e-12)
            np.testing.assert_array_equal(a[1], b[1])

    def test_gsadf_batch(self):
        Y = np.cumsum(np.random.default_rng(5).standard_normal((12, 80)), axis=1)
        Y = np.ascontiguousarray(Y - Y.mean(axis=1, keepdims=True))
        for u, v in zip(nbk.gsadf_batch(Y, 1, 14), npk.gsadf_batch(Y, 1, 14)):
            np.testing.assert_allclose(u, v, rtol=1e-12, atol=1e-12)

    def test_degenerate_flags_agree(self):
        x = centred(np.r_[np.zeros(20), np.cumsum(np.ones(20))])
        hi, lo = nbk.prefix_moments(x, 0)
        a, b = nbk.bsadf(hi, lo, 0, 6), npk.bsadf(hi, lo, 0, 6)
        np.testing.assert_array_equal(np.isnan(a[0]), np.isnan(b[0]))
        np.testing.assert_array_equal(a[3], b[3])
        assert a[3].sum() > 0


def bubble(args, **env):
    full = dict(os.environ, **env)
    return subprocess.run([sys.executable, "-m", "exuberance", *map(str, args)],
                          env=full, capture_output=True, text=True)


def test_cli_numpy_backend_matches(tmp_path, fixture_csv):
    outs = {}
    for flag in ("0", "1"):
        out = tmp_path / flag
        r = bubble(["test", "--input", fixture_csv, "--reps", 100, "--seed", 9, "--formats", "json",
                    "--out", out], EXUBERANCE_DISABLE_NUMBA=flag)
        assert r.returncode == 0, r.stderr
        outs[flag] = json.loads((out / "report.json").read_text())
    assert outs["0"]["environment"]["backend"] == "numba"
    assert outs["1"]["environment"]["backend"] == "numpy"
    for kind in ("gsadf", "sadf"):
        a, b = outs["0"]["results"][kind], outs["1"]["results"][kind]
        assert a["stat"] == pytest.approx(b["stat"], rel=1e-12)
        assert a["p_value"] == b["p_value"]
        for k in a["critical_values"]:
            assert a["critical_values"][k] == pytest.approx(b["critical_values"][k], rel=1e-12)
