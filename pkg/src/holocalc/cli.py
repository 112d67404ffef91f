"""Command-line front end.

Subcommands: apply (evaluate f(T) on a matrix), homology (Betti numbers and
diagnostics), verify (the homology-compatibility check), measure (the tower
measure of a function), diagnose (ratio/root convergence report).  All
reports are deterministic JSON documents with a top-level schema version.

Exit codes: 0 success, 1 verification or convergence failure, 2 input error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

from . import chains, jsonio, matfunc, measure
from .series import ConvergenceError, ratio_test, root_test

SCHEMA = 1


@dataclass
class RunConfig:
    command: str
    function: str | None = None
    matrix: str | None = None
    complex_path: str | None = None
    endo: str | None = None
    out: str | None = None
    grading: str | None = None
    tol: float = 1e-10
    p: float = 1.0
    depth: int = 64
    max_terms: int = 500
    rank_tol: float = 1e-9

    def check(self) -> None:
        if not 0 < self.p <= 1:
            raise jsonio.InputError("p must lie in (0, 1]")
        if self.tol <= 0:
            raise jsonio.InputError("tol must be positive")
        if self.depth < 0 or self.max_terms < 1 or self.rank_tol <= 0:
            raise jsonio.InputError("depth, max-terms and rank-tol must be positive")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="holocalc",
        description="Entire-function calculus on matrices and bounded chain complexes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, *, function=False, matrix=False, complex_=False, endo=False):
        if function:
            sp.add_argument("--function", required=True, help="function spec JSON file")
        if matrix:
            sp.add_argument("--matrix", required=True, help="matrix JSON file")
        if complex_:
            sp.add_argument("--complex", dest="complex_path", required=True,
                            help="chain complex JSON file")
            sp.add_argument("--grading", choices=["homological", "cohomological"],
                            default=None, help="override the file's grading")
            sp.add_argument("--rank-tol", type=float, default=1e-9)
        if endo:
            sp.add_argument("--endo", required=True, help="chain endomorphism JSON file")
        sp.add_argument("--tol", type=float, default=1e-10)
        sp.add_argument("--max-terms", type=int, default=500)
        sp.add_argument("--out", default=None, help="write the report here instead of stdout")

    sp = sub.add_parser("apply", help="evaluate f(T) by tail-bounded partial sums")
    common(sp, function=True, matrix=True)

    sp = sub.add_parser("homology", help="Betti numbers and validation diagnostics")
    common(sp, complex_=True)

    sp = sub.add_parser("verify", help="check H(f(T)) = f(H(T)) degree by degree")
    common(sp, function=True, complex_=True, endo=True)

    sp = sub.add_parser("measure", help="tower measure of an entire function")
    common(sp, function=True)
    sp.add_argument("--p", type=float, default=1.0)
    sp.add_argument("--depth", type=int, default=64)

    sp = sub.add_parser("diagnose", help="ratio and root convergence tests")
    common(sp, function=True)
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command)
    for name in ("function", "matrix", "complex_path", "endo", "out", "grading",
                 "tol", "p", "depth", "max_terms", "rank_tol"):
        if hasattr(args, name):
            setattr(cfg, name, getattr(args, name))
    cfg.check()
    return cfg


def _run_apply(cfg: RunConfig) -> tuple[int, dict]:
    f = jsonio.function_from_json(jsonio.load_document(cfg.function))
    mat = jsonio.matrix_from_json(jsonio.load_document(cfg.matrix))
    try:
        result, report = matfunc.func_calc_series(f, mat, cfg.tol, cfg.max_terms)
        code, error = 0, None
    except ConvergenceError as exc:
        result, report = exc.partial, exc.report
        code, error = 1, str(exc)
    doc = {
        "schema": SCHEMA,
        "command": "apply",
        "result": jsonio.matrix_to_json(result),
        "convergence": {
            "terms_used": report.terms_used,
            "tail_bound": report.tail_bound,
            "op_norm": report.op_norm,
            "stopped_by": report.stopped_by,
        },
    }
    if error:
        doc["error"] = error
    return code, doc


def _run_homology(cfg: RunConfig) -> tuple[int, dict]:
    cx = jsonio.complex_from_json(jsonio.load_document(cfg.complex_path), cfg.grading)
    checks = chains.validate(cx)
    basis = chains.homology_basis(cx, cfg.rank_tol)
    doc = {
        "schema": SCHEMA,
        "command": "homology",
        "d_min": cx.d_min,
        "dims": list(cx.dims),
        "betti": list(basis.betti),
        "rank_ambiguous": list(basis.ambiguous),
        "d_squared_residuals": [e.residual for e in checks.d_squared],
        "valid": checks.passed,
    }
    return (0 if checks.passed else 1), doc


def _run_verify(cfg: RunConfig) -> tuple[int, dict]:
    f = jsonio.function_from_json(jsonio.load_document(cfg.function))
    cx = jsonio.complex_from_json(jsonio.load_document(cfg.complex_path), cfg.grading)
    endo = jsonio.endo_from_json(jsonio.load_document(cfg.endo), cx.dims)
    try:
        report = chains.verify_homology_compat(
            cx, endo, f, tol=cfg.tol, rank_tol=cfg.rank_tol, max_terms=cfg.max_terms)
    except ValueError as exc:
        raise jsonio.InputError(str(exc)) from None
    doc = {
        "schema": SCHEMA,
        "command": "verify",
        "passed": report.passed,
        "max_delta": report.max_delta,
        "degrees": [
            {
                "degree": e.degree,
                "delta": e.delta,
                "bound": e.bound,
                "used_oracle": e.used_oracle,
                "passed": e.passed,
            }
            for e in report.entries
        ],
    }
    return (0 if report.passed else 1), doc


def _run_measure(cfg: RunConfig) -> tuple[int, dict]:
    f = jsonio.function_from_json(jsonio.load_document(cfg.function))
    try:
        mu = measure.series_measure(f, cfg.p, cfg.depth)
    except ValueError as exc:
        return 1, {"schema": SCHEMA, "command": "measure", "error": str(exc)}
    doc = {
        "schema": SCHEMA,
        "command": "measure",
        "p": mu.p,
        "depth": mu.depth,
        "c0": mu.bound_c,
        "witness_p": mu.witness_p,
        "level_norms": mu.level_norms(),
        "coherent": mu.is_coherent(),
    }
    return 0, doc


def _run_diagnose(cfg: RunConfig) -> tuple[int, dict]:
    f = jsonio.function_from_json(jsonio.load_document(cfg.function))
    n_max = max(cfg.max_terms, 2)
    ratio = ratio_test(f, n_max)
    doc = {
        "schema": SCHEMA,
        "command": "diagnose",
        "n_max": n_max,
        "ratio": {
            "n_used": ratio.n_used,
            "limit_estimate": ratio.limit_estimate,
            "zero_coefficient_indices": ratio.zero_coefficient_indices,
            "verdict": ratio.verdict,
        },
        "root_estimate": root_test(f, n_max),
    }
    return 0, doc


_RUNNERS = {
    "apply": _run_apply,
    "homology": _run_homology,
    "verify": _run_verify,
    "measure": _run_measure,
    "diagnose": _run_diagnose,
}


def run(cfg: RunConfig) -> tuple[int, dict]:
    """Execute one command; returns (exit code, report document)."""
    return _RUNNERS[cfg.command](cfg)


def _emit(doc: dict, out: str | None) -> None:
    text = jsonio.dumps(doc) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from_args(args)
        code, doc = run(cfg)
    except jsonio.InputError as exc:
        _emit({"schema": SCHEMA, "error": str(exc)}, getattr(args, "out", None))
        return 2
    _emit(doc, cfg.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
