"""The isometric lattice lifting: barycenter map and the lifting operator.

For a space with normalized 1-unconditional basis (e_n), the barycenter map
sends f to the vector of its values at the biorthogonal functionals, and the
lifting operator T sends x to the disjoint combination sum_n x_n f(n), where
f(n) are the pairwise disjoint built-in generators.  Then beta(T(x)) = x and
T is a lattice homomorphism of norm one.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .homfun import Add, BuiltinF, HomExpr, Join, LiftParams, Scale, eval_batch
from .spaces import Space, join as vec_join

__all__ = ["LiftingSystem", "beta_apply", "T_apply", "T_lattice_check"]


@dataclass(frozen=True)
class LiftingSystem:
    space: Space
    params: LiftParams = field(default_factory=LiftParams)

    @property
    def generators(self) -> tuple[BuiltinF, ...]:
        return tuple(BuiltinF(n, self.params) for n in range(1, self.space.dim + 1))


def beta_apply(f: HomExpr, space: Space) -> np.ndarray:
    """Barycenter coordinates: the value of f at each biorthogonal functional."""
    out = eval_batch(f, space, np.eye(space.dim))
    if not np.all(np.isfinite(out)):
        raise ValueError("expression evaluated to a non-finite value")
    return out


def T_apply(system: LiftingSystem, x) -> HomExpr:
    """Lift a vector to the disjoint combination of the built-in generators."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (system.space.dim,):
        raise ValueError(f"expected {system.space.dim} coordinates, got {x.shape}")
    return Add(Scale(float(c), g) for c, g in zip(x, system.generators))


def T_lattice_check(system: LiftingSystem, x, y, xstar, tol: float = 1e-12) -> bool:
    """Check T(x v y) = T(x) v T(y) at one functional, to absolute tol.

    Disjointness of the generators makes at most one term of either side
    nonzero at any functional, which is what forces the identity.
    """
    space = system.space
    lhs = T_apply(system, vec_join(x, y))(space, xstar)
    rhs = Join(T_apply(system, x), T_apply(system, y))(space, xstar)
    return abs(lhs - rhs) <= tol
