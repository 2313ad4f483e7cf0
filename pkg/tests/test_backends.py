"""The numba kernels and the pure-numpy fallback must agree."""

import math

import numpy as np
import pytest

from fbl import kernels
from fbl.homfun import LiftParams

pytestmark = pytest.mark.skipif(
    kernels.BACKEND != "numba", reason="numba backend not active"
)


def test_hom_batch_backends_agree(rng):
    Mv, Nv = LiftParams().arrays(8)
    X = rng.standard_normal((500, 8))
    X[rng.random((500, 8)) < 0.1] = 0.0  # exercise the zero branch
    for n in range(1, 9):
        for mhi in range(n, 9):
            a = kernels._hom_batch_numba(X, n, mhi, Mv, Nv)
            b = kernels._hom_batch_numpy(X, n, mhi, Mv, Nv)
            np.testing.assert_allclose(a, b, rtol=1e-14, atol=0.0)
            # clamped zeros must be literal zeros in both
            assert np.array_equal(a == 0.0, b == 0.0)


def test_pattern_norms_backends_agree(rng):
    X = rng.standard_normal((5, 6))
    S = kernels.sign_patterns(5)
    for q in (1.0, 2.0, 3.0, math.inf):
        a = kernels._pattern_norms_numba(X, S, q)
        b = kernels._pattern_norms_numpy(X, S, q)
        np.testing.assert_allclose(a, b, rtol=1e-13)


def test_constraint_batch_backends_agree(rng):
    XB = rng.standard_normal((40, 4, 5))
    S = kernels.sign_patterns(4)
    for q in (1.0, 2.0, math.inf):
        a = kernels._constraint_batch_numba(XB, S, q)
        b = kernels._constraint_batch_numpy(XB, S, q)
        np.testing.assert_allclose(a, b, rtol=1e-13)


def test_sign_patterns_lexicographic():
    S = kernels.sign_patterns(3)
    assert S.shape == (4, 3)
    assert np.array_equal(S[:, 0], np.ones(4))
    rows = [tuple(r) for r in S]
    assert rows == sorted(rows)
