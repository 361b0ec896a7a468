"""Command line front end.

Exit codes for ``check``: 0 proven ZPD, 1 proven not ZPD, 2 unknown.
Other failures: 64 unreadable input, 65 inconsistent request (zero divisor
under ``--assume-no-zero-divisors``, missing layout, field mismatch), and
1 for a certificate that does not verify.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

from . import __version__
from .algebra import Algebra, a_squared, classify, ker_mu
from .catalog import CatalogError, build, parse_field
from .constructions import (
    LayoutMissing,
    check_kernel_decomposition,
    check_pure_tensor_decomposition,
    direct_sum,
)
from .decision import (
    DEFAULT_MAX_ENUMERATION,
    DEFAULT_MAX_SAMPLES,
    ProvenZPD,
    SaturationBudget,
    Unknown,
    Verdict,
    ZeroDivisorFound,
    decide,
    verify_certificate,
)
from .formats import (
    FormatError,
    algebra_to_json,
    certificate_to_json,
    dumps,
    field_to_json,
    load_algebra,
    load_certificate,
    verdict_to_json,
)
from .linalg import BudgetExceeded

EXIT_ZPD = 0
EXIT_NOT_ZPD = 1
EXIT_UNKNOWN = 2
EXIT_PARSE = 64
EXIT_MISUSE = 65

VERDICT_EXIT = {"ProvenZPD": EXIT_ZPD, "ProvenNotZPD": EXIT_NOT_ZPD, "Unknown": EXIT_UNKNOWN}


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which would read as "Unknown"
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def _fail(code: int, message: str) -> int:
    sys.stderr.write(dumps({"error": message, "exit_code": code}))
    return code


def _emit(doc: dict, out: str | None = None):
    text = dumps(doc)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _default_budget() -> int | None:
    env = os.environ.get("ZPD_BUDGET")
    return int(env) if env else None


def make_budget(alg: Algebra, budget: int | None, seed: int) -> SaturationBudget:
    """``budget`` caps samples over Q and projective points over F_p."""
    if budget is None:
        budget = _default_budget()
    if budget is None:
        return SaturationBudget(DEFAULT_MAX_SAMPLES, seed, DEFAULT_MAX_ENUMERATION)
    if alg.field.is_prime_field:
        return SaturationBudget(DEFAULT_MAX_SAMPLES, seed, budget)
    return SaturationBudget(budget, seed, DEFAULT_MAX_ENUMERATION)


def build_report(alg: Algebra, budget: SaturationBudget, assume_no_zero_divisors: bool = False,
                 cert_path: str | None = None) -> tuple[dict, int]:
    """Decide ``alg`` and assemble the JSON report and exit code.

    Raises :class:`ZeroDivisorFound` on flag misuse.  When ``cert_path`` is
    given the certificate is written there and referenced by path.
    """
    n = alg.dim
    dim_a2 = a_squared(alg).dim
    dim_ker = ker_mu(alg).dim
    try:
        verdict: Verdict = decide(alg, budget, assume_no_zero_divisors)
    except BudgetExceeded as exc:
        verdict = Unknown(0, 0, dim_ker, reason=f"enumeration budget exceeded: {exc}")

    report = {
        "tool": "zpd",
        "tool_version": __version__,
        "algebra": alg.name,
        "field": field_to_json(alg.field),
        "input_hash": alg.structure_hash,
        "verdict": verdict_to_json(verdict),
        "dims": {"n": n, "dim_A2": dim_a2, "dim_ker": dim_ker, "dim_span": verdict.dim_span},
        "budget": {
            "max_samples": budget.max_samples,
            "max_enumeration": budget.max_enumeration,
            "prng_seed": budget.prng_seed,
        },
        "assume_no_zero_divisors": assume_no_zero_divisors,
    }
    if isinstance(verdict, ProvenZPD):
        cert_doc = certificate_to_json(verdict.certificate, alg)
        check = verify_certificate(alg, verdict.certificate)
        if not check.ok:  # pragma: no cover - decision and verifier disagree
            raise RuntimeError(f"emitted certificate failed verification: {check.failures}")
        report["certificate_verified"] = True
        if cert_path:
            Path(cert_path).write_text(dumps(cert_doc))
            report["certificate"] = {"path": str(cert_path)}
        else:
            report["certificate"] = cert_doc
    return report, VERDICT_EXIT[verdict.kind]


# ---------------------------------------------------------------------------
# commands


def cmd_check(args) -> int:
    alg = load_algebra(args.path)
    budget = make_budget(alg, args.budget, args.seed)
    t0 = time.perf_counter()
    try:
        report, code = build_report(alg, budget, args.assume_no_zero_divisors, args.emit_cert)
    except ZeroDivisorFound as exc:
        return _fail(EXIT_MISUSE, f"--assume-no-zero-divisors contradicted: {exc}")
    except ValueError as exc:
        return _fail(EXIT_MISUSE, str(exc))
    if args.timing:
        report["timing"] = {"seconds": round(time.perf_counter() - t0, 6)}
    _emit(report)
    return code


def cmd_catalog(args) -> int:
    field, params = args.field, args.params
    if field is None and params is not None:
        # two positionals: NAME FIELD, unless the second is not a field
        try:
            parse_field(params)
            field, params = params, None
        except CatalogError:
            pass
    if field is None:
        field = "Q"
    try:
        alg = build(args.name, params, field)
    except (CatalogError, ValueError) as exc:
        return _fail(EXIT_MISUSE, str(exc))
    _emit(algebra_to_json(alg), args.output)
    return 0


def cmd_dsum(args) -> int:
    algs = [load_algebra(p) for p in args.paths]
    try:
        alg = direct_sum(algs)
    except ValueError as exc:
        return _fail(EXIT_MISUSE, str(exc))
    _emit(algebra_to_json(alg), args.output)
    return 0


def cmd_verify(args) -> int:
    alg = load_algebra(args.algebra)
    cert, cert_hash = load_certificate(args.certificate)
    report = verify_certificate(alg, cert)
    failures = list(report.failures)
    if cert_hash is not None and cert_hash != alg.structure_hash:
        failures.insert(0, "algebra_hash does not match the algebra")
    doc = {
        "ok": not failures,
        "dim_span": report.dim_span,
        "dim_ker": report.dim_ker,
        "pairs": len(cert),
        "failures": failures,
    }
    _emit(doc)
    return 0 if not failures else 1


def cmd_props(args) -> int:
    alg = load_algebra(args.path)
    doc = {"algebra": alg.name, "dim": alg.dim, "field": field_to_json(alg.field)}
    doc.update(classify(alg).as_dict(alg.field))
    _emit(doc)
    return 0


def cmd_lemmas(args) -> int:
    alg = load_algebra(args.path)
    try:
        ker = check_kernel_decomposition(alg)
    except LayoutMissing as exc:
        return _fail(EXIT_MISUSE, str(exc))
    doc = {
        "algebra": alg.name,
        "layout": list(alg.layout),
        "kernel_decomposition": ker.holds,
        "kernel_dims": {"lhs": ker.lhs_dim, "rhs": ker.rhs_dim},
        "pure_tensor_decomposition": None,
        "dims": None,
    }
    if alg.field.is_prime_field:
        budget = args.budget or _default_budget() or DEFAULT_MAX_ENUMERATION
        try:
            pure = check_pure_tensor_decomposition(alg, budget)
        except BudgetExceeded as exc:
            return _fail(EXIT_UNKNOWN, str(exc))
        doc["pure_tensor_decomposition"] = pure.holds
        doc["dims"] = {"lhs": pure.lhs_dim, "rhs": pure.rhs_dim}
    _emit(doc)
    return 0 if ker.holds and doc["pure_tensor_decomposition"] is not False else 1


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="zpd", description="Decide whether finite-dimensional algebras are "
                                        "zero product determined.")
    p.add_argument("--version", action="version", version=f"zpd {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", help="decide ZPD and print a JSON report")
    c.add_argument("path", help="algebra file or catalog:NAME(PARAMS)@FIELD")
    c.add_argument("--budget", type=int, default=None,
                   help="max samples over Q / max projective points over F_p (env ZPD_BUDGET)")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--assume-no-zero-divisors", action="store_true")
    c.add_argument("--emit-cert", metavar="PATH")
    c.add_argument("--timing", action="store_true", help="add wall-clock timing to the report")
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("catalog", help="write a catalog algebra as an algebra file")
    c.add_argument("name", help="e.g. sl, heisenberg, parabolic_sl, or sl(3)")
    c.add_argument("params", nargs="?", help='comma-separated parameters, e.g. "3,[1,2]"')
    c.add_argument("field", nargs="?", help="Q, F5, GF(7), ...")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_catalog)

    c = sub.add_parser("dsum", help="direct sum of algebra files")
    c.add_argument("paths", nargs="+")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_dsum)

    c = sub.add_parser("verify", help="verify a certificate against an algebra")
    c.add_argument("algebra")
    c.add_argument("certificate")
    c.set_defaults(func=cmd_verify)

    c = sub.add_parser("props", help="classification flags")
    c.add_argument("path")
    c.set_defaults(func=cmd_props)

    c = sub.add_parser("lemmas", help="direct-sum decomposition checks")
    c.add_argument("path")
    c.add_argument("--budget", type=int, default=None)
    c.set_defaults(func=cmd_lemmas)
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        return _fail(EXIT_PARSE, str(exc))


if __name__ == "__main__":
    sys.exit(main())
