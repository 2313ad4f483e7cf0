"""Numerical verification harness for the lifting construction.

Each check runs a batch of instances against an independent oracle or an
exact identity and returns a CheckReport.  Inequality checks use an absolute
slack tolerance of 1e-9; identity checks (biorthogonality, disjointness) are
exact because the generator formulas clamp to literal zeros.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .fblnorm import (
    SearchConfig,
    fbl_lower_bound,
    l1_extreme_point_constraint,
    tuple_constraint,
    SIGN_CUBE_CAP,
    ConfigError,
)
from .homfun import Add, BuiltinF, BuiltinH, Scale, eval_batch
from .lifting import LiftingSystem, T_apply, beta_apply
from .spaces import Space

__all__ = [
    "SLACK_TOL",
    "CheckReport",
    "lemma_unconditional_instance",
    "check_lemma44",
    "check_normspan",
    "check_freenorm",
    "check_disjoint",
    "check_biorthogonal",
    "check_beta_section",
]

SLACK_TOL = 1e-9


@dataclass
class CheckReport:
    check: str
    instances: int
    failures: list = field(default_factory=list)
    worst_slack: float | None = None
    seed: int | None = None
    config: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def merge_slack(self, slack: float):
        if self.worst_slack is None or slack < self.worst_slack:
            self.worst_slack = slack

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "instances": self.instances,
            "failures": self.failures,
            "worst_slack": self.worst_slack,
            "seed": self.seed,
            "config": self.config,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))


# ---------------------------------------------------------------------------
# sign-averaging inequality for biorthogonal functionals


def lemma_unconditional_instance(space: Space, ms, functionals) -> tuple[float, float]:
    """One instance of the sign-averaging inequality.

    Left side: dual norm of sum_i |x_i*(e_{m_i})| e_{m_i}*; right side: the
    tuple constraint sup_{x in B} sum_i |x_i*(x)|.  Functionals must lie in
    the dual unit ball.  The two sides use independent code paths (closed-form
    dual norm vs. sign-cube enumeration).
    """
    X = np.asarray(functionals, dtype=np.float64)
    for row in X:
        if space.dual_norm(row) > 1.0 + SLACK_TOL:
            raise ValueError("functionals must lie in the dual unit ball")
    z = np.zeros(space.dim)
    for m, row in zip(ms, X):
        z[m - 1] += abs(row[m - 1])
    lhs = space.dual_norm(z)
    rhs, _ = tuple_constraint(space, X)
    return lhs, rhs


def check_lemma44(
    space: Space | None = None,
    instances: int = 1000,
    max_l: int = 6,
    seed: int = 0,
    dims=(2, 3, 4, 5, 6, 7, 8),
    ps=(1.0, 1.5, 2.0, 3.0, math.inf),
) -> CheckReport:
    """Randomized suite for the sign-averaging inequality.

    With `space` given, dimension and exponent are fixed; otherwise each
    instance draws them from `dims` x `ps`.  Every ell_1 instance additionally
    cross-checks the sign-cube constraint against the extreme-point formula.
    """
    if max_l > SIGN_CUBE_CAP:
        raise ConfigError(f"max tuple size {max_l} exceeds the sign-cube cap")
    report = CheckReport(
        check="lemma44",
        instances=instances,
        seed=seed,
        config={"max_l": max_l, "space": str(space) if space else None},
    )
    for i in range(instances):
        rng = _rng(seed, 1, i)
        sp = space or Space.lp(ps[rng.integers(len(ps))], int(rng.integers(dims[0], dims[-1] + 1)))
        l = int(rng.integers(1, max_l + 1))
        X = rng.standard_normal((l, sp.dim))
        for row in X:
            row /= max(1.0, sp.dual_norm(row))
        ms = rng.integers(1, sp.dim + 1, size=l)
        lhs, rhs = lemma_unconditional_instance(sp, ms, X)
        report.merge_slack(rhs - lhs)
        if lhs > rhs + SLACK_TOL:
            report.failures.append(
                {"instance": i, "space": str(sp), "lhs": lhs, "rhs": rhs,
                 "ms": [int(m) for m in ms], "functionals": X.tolist()}
            )
        if sp.p == 1.0:
            oracle = l1_extreme_point_constraint(X)
            if rhs != oracle:
                report.failures.append(
                    {"instance": i, "space": str(sp), "constraint": rhs,
                     "extreme_point_oracle": oracle, "kind": "oracle-mismatch"}
                )
    return report


# ---------------------------------------------------------------------------
# lifting construction checks


def check_biorthogonal(system: LiftingSystem) -> CheckReport:
    """The generator/biorthogonal matrix f_n(e_j*) must be exactly the identity."""
    d = system.space.dim
    F = np.stack([eval_batch(g, system.space, np.eye(d)) for g in system.generators])
    report = CheckReport(check="biorthogonal", instances=d * d,
                         config={"space": str(system.space)})
    dev = np.abs(F - np.eye(d))
    report.worst_slack = -float(dev.max())
    for n, j in zip(*np.nonzero(dev)):
        report.failures.append({"n": int(n + 1), "j": int(j + 1), "value": float(F[n, j])})
    return report


def check_disjoint(system: LiftingSystem, samples: int = 10_000, seed: int = 0) -> CheckReport:
    """Pairwise pointwise min of the generators is exactly zero at every sample."""
    d = system.space.dim
    rng = _rng(seed, 2)
    X = rng.standard_normal((samples, d))
    F = np.stack([eval_batch(g, system.space, X) for g in system.generators])
    report = CheckReport(check="disjoint", instances=samples, seed=seed,
                         config={"space": str(system.space)})
    worst = 0.0
    for n in range(d):
        for l in range(n + 1, d):
            m = np.minimum(F[n], F[l])
            worst = max(worst, float(m.max(initial=0.0)))
            for i in np.nonzero(m != 0.0)[0]:
                report.failures.append(
                    {"n": n + 1, "l": l + 1, "xstar": X[i].tolist(),
                     "min_value": float(m[i])}
                )
    report.worst_slack = -worst
    return report


def check_beta_section(system: LiftingSystem, samples: int = 1000, seed: int = 0,
                       tol: float = 1e-12) -> CheckReport:
    """beta composed with the lift is the identity on random vectors."""
    d = system.space.dim
    rng = _rng(seed, 3)
    report = CheckReport(check="beta_section", instances=samples, seed=seed,
                         config={"space": str(system.space), "tol": tol})
    for i in range(samples):
        x = rng.standard_normal(d)
        err = float(np.abs(beta_apply(T_apply(system, x), system.space) - x).max())
        report.merge_slack(tol - err)
        if err > tol:
            report.failures.append({"instance": i, "x": x.tolist(), "error": err})
    return report


def check_normspan(system: LiftingSystem, coefficients, search: SearchConfig) -> CheckReport:
    """Every tuple the search visits respects the span-norm inequality.

    The search's best ratio dominates all visited ratios, so bounding it
    bounds them all: best <= norm of the coefficient vector, to slack 1e-9.
    """
    a = np.asarray(coefficients, dtype=np.float64)
    expr = Add(Scale(float(c), g) for c, g in zip(a, system.generators))
    est = fbl_lower_bound(expr, system.space, search)
    rhs = system.space.norm(a)
    report = CheckReport(
        check="normspan", instances=1, seed=search.seed,
        config={"space": str(system.space), "coefficients": a.tolist(),
                "k": search.k, "restarts": search.restarts},
    )
    report.worst_slack = rhs - est.lower_bound
    if est.lower_bound > rhs + SLACK_TOL:
        report.failures.append(
            {"coefficients": a.tolist(), "ratio": est.lower_bound, "norm": rhs,
             "witness": est.witness.tolist()}
        )
    return report


def check_freenorm(system: LiftingSystem, n: int, k: int, search: SearchConfig,
                   samples: int = 1000) -> CheckReport:
    """Norm of the truncation error is bounded by the cutoff tail sum.

    For n + k >= d the truncation equals the generator identically and the
    difference is checked to be exactly zero at random samples.
    """
    d = system.space.dim
    diff = Add([BuiltinH(n, k, system.params), Scale(-1.0, BuiltinF(n, system.params))])
    report = CheckReport(
        check="freenorm", instances=1, seed=search.seed,
        config={"space": str(system.space), "n": n, "k": k},
    )
    if n + k >= d:
        rng = _rng(search.seed, 4, n, k)
        X = rng.standard_normal((samples, d))
        vals = eval_batch(diff, system.space, X)
        report.instances = samples
        report.worst_slack = -float(np.abs(vals).max(initial=0.0))
        for i in np.nonzero(vals != 0.0)[0]:
            report.failures.append({"xstar": X[i].tolist(), "difference": float(vals[i])})
        return report
    bound = system.params.tail_bound(n + k, d)
    est = fbl_lower_bound(diff, system.space, search)
    report.config["tail_bound"] = bound
    report.worst_slack = bound - est.lower_bound
    if est.lower_bound > bound + SLACK_TOL:
        report.failures.append(
            {"n": n, "k": k, "ratio": est.lower_bound, "tail_bound": bound,
             "witness": est.witness.tolist()}
        )
    return report
