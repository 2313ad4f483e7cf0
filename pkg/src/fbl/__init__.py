"""Numerical workbench for free Banach lattices over finite-dimensional spaces."""

from .spaces import Space, parse_space, join, meet, vabs, pos, DimensionMismatch
from .homfun import (
    LiftParams,
    HomExpr,
    Delta,
    Scale,
    Add,
    Abs,
    Pos,
    Join,
    Meet,
    BuiltinF,
    BuiltinH,
    parse,
    to_text,
    eval_expr,
    eval_batch,
    eval_g,
    eval_f,
    eval_h,
    ExprSyntaxError,
)
from .fblnorm import (
    SearchConfig,
    NormEstimate,
    UpperBound,
    tuple_constraint,
    fbl_lower_bound,
    dim1_norm,
    upper_bound_finite_coords,
)
from .lifting import LiftingSystem, beta_apply, T_apply, T_lattice_check

__version__ = "0.1.0"
