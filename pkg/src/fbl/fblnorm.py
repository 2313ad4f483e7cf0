"""Norm machinery for the free Banach lattice over a finite-dimensional space.

The norm of a positively homogeneous f is the sup of sum_i |f(x_i*)| over
finite tuples (x_i*) with sup_{x in B} sum_i |x_i*(x)| <= 1.  Three tools:

* tuple_constraint -- the admissibility constant C of a tuple, computed
  exactly by sign-cube enumeration (C = max_eps ||sum_i eps_i x_i*||_dual).
* fbl_lower_bound -- randomized-restart hill climbing over tuples of a fixed
  size; every visited ratio is a valid lower bound, the best one is returned.
* upper_bound_finite_coords -- the |support| * sup_{face} |f| upper bound for
  functions over ell_1 that depend on finitely many coordinates.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from . import kernels
from .homfun import HomExpr, eval_batch
from .spaces import Space

__all__ = [
    "SIGN_CUBE_CAP",
    "SearchConfig",
    "NormEstimate",
    "UpperBound",
    "ConfigError",
    "DependenceError",
    "tuple_constraint",
    "fbl_lower_bound",
    "dim1_norm",
    "upper_bound_finite_coords",
    "l1_extreme_point_constraint",
]

SIGN_CUBE_CAP = 24

# hill-climbing schedule; 20 decay rounds so the final step (~4e-4) resolves
# ratios at lattice kinks to well under 1e-3
STEP_INIT = 0.5
STEP_DECAY = 0.7
DECAY_ROUNDS = 20


class ConfigError(ValueError):
    """Search or tuple configuration outside supported ranges."""


class DependenceError(ValueError):
    """Function depends on coordinates outside the declared support."""


def tuple_constraint(space: Space, functionals) -> tuple[float, np.ndarray]:
    """Exact admissibility constant of a functional tuple, with certificate.

    Returns (C, eps) where C = sup_{x in B} sum_i |x_i*(x)| and eps is the
    sign pattern attaining it (first sign fixed +1; lexicographically smallest
    on ties).
    """
    X = np.asarray(functionals, dtype=np.float64)
    if X.ndim != 2:
        X = np.stack([np.asarray(f, float) for f in functionals])
    k, d = X.shape
    if d != space.dim:
        raise ConfigError(f"functionals have {d} coordinates, space has {space.dim}")
    if k < 1:
        raise ConfigError("tuple must contain at least one functional")
    if k > SIGN_CUBE_CAP:
        raise ConfigError(f"tuple size {k} exceeds the sign-cube cap {SIGN_CUBE_CAP}")
    S = kernels.sign_patterns(k)
    norms = kernels.pattern_norms(X, S, space.q)
    idx = int(np.argmax(norms))
    return float(norms[idx]), S[idx].copy()


def l1_extreme_point_constraint(functionals) -> float:
    """Independent oracle for ell_1: C = max_j sum_i |x_i*(e_j)|."""
    X = np.asarray(functionals, dtype=np.float64)
    return float(np.abs(X).sum(axis=0).max())


@dataclass(frozen=True)
class SearchConfig:
    k: int = 2
    restarts: int = 100
    local_steps: int = 8
    seed: int = 0

    def __post_init__(self):
        if self.k < 1 or self.k > SIGN_CUBE_CAP:
            raise ConfigError(f"tuple size must be in 1..{SIGN_CUBE_CAP}, got {self.k}")
        if self.restarts < 1:
            raise ConfigError("need at least one restart")
        if self.local_steps < 1:
            raise ConfigError("need at least one local step")
        if self.seed < 0:
            raise ConfigError("seed must be nonnegative")


@dataclass
class NormEstimate:
    """A certified lower bound for the free-lattice norm of an expression."""

    lower_bound: float
    objective: float
    constraint: float
    witness: np.ndarray
    certificate_signs: tuple[float, ...]
    restarts: int
    evaluations: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "lower_bound": self.lower_bound,
            "objective": self.objective,
            "constraint": self.constraint,
            "witness": [list(row) for row in self.witness],
            "certificate_signs": list(self.certificate_signs),
            "restarts": self.restarts,
            "evaluations": self.evaluations,
            "seed": self.seed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _objective(expr, space, XB):
    """sum_i |f(x_i*)| for each tuple in the batch XB of shape (B, k, d)."""
    B, k, d = XB.shape
    vals = eval_batch(expr, space, XB.reshape(B * k, d))
    if not np.all(np.isfinite(vals)):
        raise ValueError("expression evaluated to a non-finite value")
    return np.abs(vals.reshape(B, k)).sum(axis=1)


def fbl_lower_bound(expr: HomExpr, space: Space, config: SearchConfig) -> NormEstimate:
    """Best lower bound for the norm found by seeded multistart hill climbing.

    Restarts draw standard-normal tuples from streams derived from
    (seed, restart index), then refine by single-coordinate perturbations with
    a geometrically decaying step.  Restart trajectories are independent, so
    results are deterministic and monotone in the restart budget.
    """
    k, d = config.k, space.dim
    S = kernels.sign_patterns(k)
    q = space.q
    evals = 0

    def ratios(XB):
        nonlocal evals
        evals += XB.shape[0]
        obj = _objective(expr, space, XB)
        C = kernels.constraint_batch(XB, S, q)
        with np.errstate(divide="ignore", invalid="ignore"):
            r = np.where(C > 0.0, obj / np.where(C > 0.0, C, 1.0), -np.inf)
        return r

    R = config.restarts
    X = np.empty((R, k, d))
    for r in range(R):
        rng = np.random.default_rng(np.random.SeedSequence(config.seed, spawn_key=(r,)))
        X[r] = rng.standard_normal((k, d))
    cur = ratios(X)

    # one candidate per (functional, coordinate, sign)
    n_moves = 2 * k * d
    deltas = np.zeros((n_moves, k, d))
    m = 0
    for i in range(k):
        for j in range(d):
            for s in (1.0, -1.0):
                deltas[m, i, j] = s
                m += 1

    step = np.full(R, STEP_INIT)
    rounds_left = np.full(R, DECAY_ROUNDS, dtype=int)
    moves_left = np.full(R, config.local_steps, dtype=int)
    active = np.arange(R)

    while active.size:
        cand = X[active, None, :, :] + step[active, None, None, None] * deltas[None]
        flat = cand.reshape(-1, k, d)
        r = ratios(flat).reshape(active.size, n_moves)
        best_idx = r.argmax(axis=1)
        best_val = r[np.arange(active.size), best_idx]
        improved = best_val > cur[active]

        acc = active[improved]
        X[acc] = cand[improved, best_idx[improved]]
        cur[acc] = best_val[improved]
        moves_left[acc] -= 1

        # a round ends when no move improves or the move budget is spent
        decayed = np.concatenate([active[~improved], acc[moves_left[acc] == 0]])
        step[decayed] *= STEP_DECAY
        rounds_left[decayed] -= 1
        moves_left[decayed] = config.local_steps

        active = active[rounds_left[active] > 0]

    best = int(np.argmax(cur))
    witness = X[best]
    C, eps = tuple_constraint(space, witness)
    if C == 0.0:
        raise ValueError("search converged to an all-zero tuple")
    obj = float(_objective(expr, space, witness[None])[0])
    return NormEstimate(
        lower_bound=obj / C,
        objective=obj,
        constraint=C,
        witness=witness.copy(),
        certificate_signs=tuple(float(e) for e in eps),
        restarts=config.restarts,
        evaluations=evals,
        seed=config.seed,
    )


def dim1_norm(expr: HomExpr, space: Space) -> float:
    """Closed form at dimension 1: the norm equals max(|f(1)|, |f(-1)|).

    Independent oracle: any admissible tuple's objective is bounded by this
    value via homogeneity, and the single functional +-1 attains it.
    """
    if space.dim != 1:
        raise ConfigError("closed form only applies in dimension 1")
    fp = eval_batch(expr, space, np.array([[1.0], [-1.0]]))
    return float(np.abs(fp).max())


@dataclass
class UpperBound:
    """Grid-estimated Claim-type upper bound: |support| * sup over faces."""

    value: float
    face_sup: float
    support: tuple[int, ...]
    grid: int
    approximate: bool = True

    def to_dict(self) -> dict:
        return {
            "upper_bound": self.value,
            "face_sup": self.face_sup,
            "support": list(self.support),
            "grid": self.grid,
            "approximate": self.approximate,
        }


def upper_bound_finite_coords(
    expr: HomExpr,
    space: Space,
    support,
    grid: int = 33,
    probe_samples: int = 64,
    probe_seed: int = 0,
) -> UpperBound:
    """Upper bound for f over ell_1^d when f depends only on `support`.

    The bound is sup over the faces of the sup-norm unit cube (restricted to
    the support coordinates) of |f|, times the support size.  The sup is a
    grid estimate; grid points include all cube vertices, so for piecewise
    linear f whose kinks lie on the grid the bound is exact.
    """
    if space.p != 1.0:
        raise ConfigError("the finite-coordinate upper bound requires an ell_1 space")
    support = tuple(sorted(set(int(a) for a in support)))
    if not support or support[0] < 1 or support[-1] > space.dim:
        raise ConfigError(f"support must be a nonempty subset of 1..{space.dim}")

    _probe_dependence(expr, space, support, probe_samples, probe_seed)

    s = len(support)
    cols = [a - 1 for a in support]
    ticks = np.linspace(-1.0, 1.0, grid)
    points = []
    for face_pos, face_sign in product(range(s), (1.0, -1.0)):
        free = [c for i, c in enumerate(cols) if i != face_pos]
        for combo in product(ticks, repeat=s - 1):
            x = np.zeros(space.dim)
            x[cols[face_pos]] = face_sign
            for c, v in zip(free, combo):
                x[c] = v
            points.append(x)
    vals = np.abs(eval_batch(expr, space, np.array(points)))
    face_sup = float(vals.max())
    return UpperBound(value=face_sup * s, face_sup=face_sup, support=support, grid=grid)


def _probe_dependence(expr, space, support, samples, seed):
    off = [j for j in range(space.dim) if (j + 1) not in support]
    if not off:
        return
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(101,)))
    X = rng.standard_normal((samples, space.dim))
    X[:, off] = 0.0
    base = eval_batch(expr, space, X)
    Y = X.copy()
    Y[:, off] = rng.standard_normal((samples, len(off)))
    perturbed = eval_batch(expr, space, Y)
    bad = np.nonzero(perturbed != base)[0]
    if bad.size:
        i = int(bad[0])
        raise DependenceError(
            f"function depends on coordinates outside {support}: "
            f"value changed from {base[i]} to {perturbed[i]} under an "
            "off-support perturbation"
        )
