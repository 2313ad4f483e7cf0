import numpy as np
import pytest

from fbl.homfun import (
    Abs,
    Add,
    BuiltinF,
    BuiltinH,
    Delta,
    Join,
    LiftParams,
    Meet,
    Pos,
    Scale,
)


def random_expr(rng: np.random.Generator, dim: int, depth: int = 3,
                params: LiftParams | None = None):
    """Random expression tree over a fixed dimension, for property tests."""
    params = params or LiftParams()
    if depth == 0 or rng.random() < 0.3:
        if rng.random() < 0.75:
            return Delta(rng.standard_normal(dim).round(3))
        n = int(rng.integers(1, dim + 1))
        if rng.random() < 0.5:
            return BuiltinF(n, params)
        return BuiltinH(n, int(rng.integers(0, dim)), params)
    kind = rng.integers(6)
    sub = lambda: random_expr(rng, dim, depth - 1, params)
    if kind == 0:
        return Scale(round(float(rng.standard_normal()), 3), sub())
    if kind == 1:
        return Add([sub() for _ in range(int(rng.integers(2, 4)))])
    if kind == 2:
        return Abs(sub())
    if kind == 3:
        return Pos(sub())
    if kind == 4:
        return Join(sub(), sub())
    return Meet(sub(), sub())


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
