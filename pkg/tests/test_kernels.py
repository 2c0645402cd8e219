import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lekac import _kernels


@pytest.mark.skipif(not _kernels.NUMBA_AVAILABLE, reason="numba not installed")
@settings(max_examples=50, deadline=None)
@given(st.sampled_from([5, 7, 11]), st.integers(1, 12), st.integers(1, 12), st.integers(0, 2**31))
def test_numba_and_numpy_agree(p, r, c, seed):
    a = np.random.default_rng(seed).integers(0, p, size=(r, c)).astype(np.int64)
    b = a.copy()
    pa = _kernels._rref_numba(a, p)
    pb = _kernels._rref_numpy(b, p)
    assert np.array_equal(pa, pb)
    assert np.array_equal(a, b)


def test_env_flag_selects_numpy():
    env = dict(os.environ, LEKAC_DISABLE_NUMBA="1")
    out = subprocess.run(
        [sys.executable, "-c", "from lekac import _kernels; print(_kernels.USE_NUMBA)"],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.strip() == "False"


def test_empty_matrix():
    a = np.zeros((0, 3), dtype=np.int64)
    assert len(_kernels.rref_inplace(a, 5)) == 0
