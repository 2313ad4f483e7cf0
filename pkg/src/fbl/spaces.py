"""Finite-dimensional Banach spaces with a normalized 1-unconditional basis.

Supported norm families are ell_p and weighted ell_p.  Coordinates are always
taken with respect to the *normalized* basis (every basis vector has norm 1).
In those coordinates a weighted ell_p norm is isometrically a plain ell_p
norm, so after the weights are divided out at construction both families
evaluate with the same closed forms; the original weights are retained only
for display.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Space",
    "DimensionMismatch",
    "SpaceSyntaxError",
    "parse_space",
    "join",
    "meet",
    "vabs",
    "pos",
]


class DimensionMismatch(ValueError):
    """Vector or functional length does not match the space dimension."""


class SpaceSyntaxError(ValueError):
    """Malformed textual space description."""


def _lp_norm(coords: np.ndarray, p: float) -> float:
    a = np.abs(coords)
    if p == math.inf:
        return float(a.max(initial=0.0))
    if p == 1.0:
        return float(a.sum())
    if p == 2.0:
        return float(np.sqrt(np.dot(a, a)))
    return float(np.power(np.power(a, p).sum(), 1.0 / p))


@dataclass(frozen=True)
class Space:
    """A d-dimensional ell_p (or weighted ell_p) space.

    `weights` records the weights supplied by the user; they are divided out
    of the basis at construction (the basis is normalized), so they do not
    enter the norm formulas.
    """

    dim: int
    p: float
    family: str = "lp"
    weights: tuple[float, ...] = field(default=())

    def __post_init__(self):
        if self.dim < 1 or self.dim != int(self.dim):
            raise ValueError(f"dimension must be a positive integer, got {self.dim}")
        if not (1.0 <= self.p <= math.inf):
            raise ValueError(f"p must lie in [1, inf], got {self.p}")
        if self.weights:
            if len(self.weights) != self.dim:
                raise ValueError("weight list length must equal the dimension")
            if any(w <= 0 for w in self.weights):
                raise ValueError("weights must be strictly positive")

    @classmethod
    def lp(cls, p: float, dim: int) -> "Space":
        return cls(dim=dim, p=float(p))

    @classmethod
    def weighted_lp(cls, p: float, weights) -> "Space":
        weights = tuple(float(w) for w in weights)
        return cls(dim=len(weights), p=float(p), family="weighted_lp", weights=weights)

    @property
    def q(self) -> float:
        """Conjugate exponent: 1/p + 1/q = 1."""
        if self.p == 1.0:
            return math.inf
        if self.p == math.inf:
            return 1.0
        return self.p / (self.p - 1.0)

    def _check(self, coords) -> np.ndarray:
        a = np.asarray(coords, dtype=np.float64)
        if a.shape != (self.dim,):
            raise DimensionMismatch(
                f"expected {self.dim} coordinates, got shape {a.shape}"
            )
        return a

    def norm(self, x) -> float:
        """Norm of a vector given by its coordinates in the normalized basis."""
        return _lp_norm(self._check(x), self.p)

    def dual_norm(self, xstar) -> float:
        """Dual norm of a functional given by its biorthogonal coordinates."""
        return _lp_norm(self._check(xstar), self.q)

    def apply(self, xstar, x) -> float:
        """Evaluate the functional at the vector: sum of coordinate products."""
        return float(np.dot(self._check(xstar), self._check(x)))

    def basis_vector(self, n: int) -> np.ndarray:
        """The n-th normalized basis vector (1-based index)."""
        if not 1 <= n <= self.dim:
            raise IndexError(f"basis index {n} out of range 1..{self.dim}")
        e = np.zeros(self.dim)
        e[n - 1] = 1.0
        return e

    def __str__(self):
        if self.p == math.inf:
            tag = "linf"
        elif self.p == 1.0:
            tag = "l1"
        elif self.p == 2.0:
            tag = "l2"
        else:
            tag = f"lp:{self.p:g}"
        if self.family == "weighted_lp":
            return f"wlp:{self.p:g}:[{','.join(f'{w:g}' for w in self.weights)}]"
        return f"{tag}:{self.dim}"


def join(x, y) -> np.ndarray:
    """Coordinatewise maximum."""
    x, y = np.asarray(x, float), np.asarray(y, float)
    if x.shape != y.shape:
        raise DimensionMismatch(f"shapes {x.shape} and {y.shape} differ")
    return np.maximum(x, y)


def meet(x, y) -> np.ndarray:
    """Coordinatewise minimum."""
    x, y = np.asarray(x, float), np.asarray(y, float)
    if x.shape != y.shape:
        raise DimensionMismatch(f"shapes {x.shape} and {y.shape} differ")
    return np.minimum(x, y)


def vabs(x) -> np.ndarray:
    """Coordinatewise absolute value."""
    return np.abs(np.asarray(x, float))


def pos(x) -> np.ndarray:
    """Coordinatewise positive part."""
    return np.maximum(np.asarray(x, float), 0.0)


_SPACE_RE = re.compile(
    r"^(l1|l2|linf):(\d+)$|^lp:([0-9.]+|inf):(\d+)$|^wlp:([0-9.]+|inf):\[([^\]]*)\]$"
)


def parse_space(text: str) -> Space:
    """Parse the CLI space syntax: l1:4, l2:6, linf:3, lp:2.5:4, wlp:2:[1,0.5,0.25]."""
    m = _SPACE_RE.match(text.strip())
    if not m:
        raise SpaceSyntaxError(f"cannot parse space description {text!r}")
    if m.group(1):
        p = {"l1": 1.0, "l2": 2.0, "linf": math.inf}[m.group(1)]
        return Space.lp(p, int(m.group(2)))
    if m.group(3):
        p = math.inf if m.group(3) == "inf" else float(m.group(3))
        if p < 1.0:
            raise SpaceSyntaxError(f"p must be >= 1, got {p}")
        return Space.lp(p, int(m.group(4)))
    p = math.inf if m.group(5) == "inf" else float(m.group(5))
    if p < 1.0:
        raise SpaceSyntaxError(f"p must be >= 1, got {p}")
    try:
        weights = [float(w) for w in m.group(6).split(",") if w.strip()]
    except ValueError as exc:
        raise SpaceSyntaxError(f"bad weight list in {text!r}") from exc
    if not weights:
        raise SpaceSyntaxError("weight list is empty")
    return Space.weighted_lp(p, weights)
