"""Command-line front end: norm estimation, lifting verification, inequality suites.

Reports are JSON on standard output (or --out); a human summary goes to
standard error.  Exit codes: 0 pass, 1 check failure, 2 input parse error,
3 configuration error.  All randomness derives from --seed.
"""

from __future__ import annotations

import argparse
import json
import sys

from .fblnorm import ConfigError, SearchConfig, fbl_lower_bound, SIGN_CUBE_CAP
from .homfun import ExprSyntaxError, LiftParams, parse
from .lifting import LiftingSystem
from .spaces import SpaceSyntaxError, parse_space
from . import verify

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_PARSE_ERROR = 2
EXIT_CONFIG_ERROR = 3

__all__ = ["main", "run"]


def _parse_mseq(text: str) -> LiftParams:
    if text == "pow2":
        return LiftParams()
    if text == "harmonic":
        raise ConfigError("mseq 'harmonic' rejected: sum of 1/M_n diverges")
    if text.startswith("custom:"):
        body = text[len("custom:"):].strip("[]")
        try:
            values = tuple(float(v) for v in body.split(",") if v.strip())
        except ValueError as exc:
            raise ConfigError(f"bad custom M sequence {text!r}") from exc
        try:
            return LiftParams(kind="custom", m_values=values)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    raise ConfigError(f"unknown mseq {text!r} (expected pow2 or custom:LIST)")


def _emit(payload: dict, out_path: str | None) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _summary(line: str) -> None:
    print(line, file=sys.stderr)


def cmd_norm(args) -> int:
    params = _parse_mseq(args.mseq)
    space = parse_space(args.space)
    expr = parse(args.expr, params)
    config = SearchConfig(k=args.k, restarts=args.restarts,
                          local_steps=args.local_steps, seed=args.seed)
    est = fbl_lower_bound(expr, space, config)
    _emit(est.to_dict(), args.out)
    _summary(f"norm lower bound {est.lower_bound:.9g} "
             f"(objective {est.objective:.9g} / constraint {est.constraint:.9g})")
    return EXIT_OK


def cmd_lift_verify(args) -> int:
    params = _parse_mseq(args.mseq)
    space = parse_space(args.space)
    system = LiftingSystem(space, params)
    search = SearchConfig(k=args.k, restarts=args.restarts,
                          local_steps=args.local_steps, seed=args.seed)

    reports = [
        verify.check_biorthogonal(system),
        verify.check_disjoint(system, samples=args.instances, seed=args.seed),
        verify.check_beta_section(system, seed=args.seed),
    ]
    rng_reports = []
    import numpy as np

    rng = np.random.default_rng(np.random.SeedSequence(args.seed, spawn_key=(9,)))
    for _ in range(args.coeff_vectors):
        a = rng.standard_normal(space.dim)
        rng_reports.append(verify.check_normspan(system, a, search))
    reports.append(_merge(rng_reports, "normspan"))

    free_reports = []
    for n in range(1, space.dim + 1):
        for k in range(0, space.dim - n + 1):
            free_reports.append(verify.check_freenorm(system, n, k, search))
    reports.append(_merge(free_reports, "freenorm"))

    payload = {"space": str(space), "checks": [r.to_dict() for r in reports],
               "passed": all(r.passed for r in reports), "seed": args.seed}
    _emit(payload, args.out)
    for r in reports:
        _summary(f"{r.check}: {'pass' if r.passed else 'FAIL'} "
                 f"({r.instances} instances, worst slack {r.worst_slack})")
    return EXIT_OK if payload["passed"] else EXIT_CHECK_FAILED


def _merge(reports, name):
    merged = verify.CheckReport(check=name, instances=0)
    for r in reports:
        merged.instances += r.instances
        merged.failures.extend(r.failures)
        if r.worst_slack is not None:
            merged.merge_slack(r.worst_slack)
        merged.seed = r.seed
    return merged


def cmd_lemma44(args) -> int:
    if args.l > SIGN_CUBE_CAP:
        raise ConfigError(f"tuple size {args.l} exceeds the sign-cube cap {SIGN_CUBE_CAP}")
    space = parse_space(args.space) if args.space else None
    report = verify.check_lemma44(space, instances=args.instances,
                                  max_l=args.l, seed=args.seed)
    _emit(report.to_dict(), args.out)
    _summary(f"lemma44: {'pass' if report.passed else 'FAIL'} "
             f"({report.instances} instances, worst slack {report.worst_slack})")
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fbl",
                                 description="free-Banach-lattice numerical workbench")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, space_required=True):
        p.add_argument("--space", required=space_required, default=None,
                       help="space syntax, e.g. l1:4, l2:6, linf:3, lp:2.5:4, wlp:2:[1,0.5,0.25]")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--mseq", default="pow2", help="pow2 | custom:LIST")
        p.add_argument("--ramp", default="linear", choices=["linear"])
        p.add_argument("--out", default=None, help="write the JSON report here")

    p = sub.add_parser("norm", help="lower-bound the norm of an expression")
    common(p)
    p.add_argument("--expr", required=True)
    p.add_argument("--k", type=int, default=2, help="tuple size")
    p.add_argument("--restarts", type=int, default=100)
    p.add_argument("--local-steps", type=int, default=8, dest="local_steps")
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("lift-verify", help="run the lifting verification suite")
    common(p)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--restarts", type=int, default=8)
    p.add_argument("--local-steps", type=int, default=8, dest="local_steps")
    p.add_argument("--instances", type=int, default=10_000,
                   help="samples for the disjointness check")
    p.add_argument("--coeff-vectors", type=int, default=20, dest="coeff_vectors")
    p.set_defaults(func=cmd_lift_verify)

    p = sub.add_parser("lemma44", help="sign-averaging inequality property suite")
    common(p, space_required=False)
    p.add_argument("--instances", type=int, default=10_000)
    p.add_argument("--l", type=int, default=6, help="max tuple size")
    p.set_defaults(func=cmd_lemma44)

    return ap


def run(argv=None) -> int:
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad flags, which matches the parse-error code
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ExprSyntaxError, SpaceSyntaxError) as exc:
        payload = {"error": {"message": str(exc)}}
        if isinstance(exc, ExprSyntaxError):
            payload["error"]["position"] = exc.position
        _emit(payload, getattr(args, "out", None))
        _summary(f"parse error: {exc}")
        return EXIT_PARSE_ERROR
    except (ConfigError, ValueError) as exc:
        _emit({"error": {"message": str(exc)}}, getattr(args, "out", None))
        _summary(f"config error: {exc}")
        return EXIT_CONFIG_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
