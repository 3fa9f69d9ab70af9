"""Command-line interface.

Exit codes: 0 for PASS/success, 1 for a FAIL verdict, 2 for usage or
input-file errors.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import reports
from .algebra import parse_rational
from .geometry import (
    EinsteinCandidate,
    bochner_normalize,
    build_potential,
    certify_exact,
    det_numerator,
    ma_log_residual,
    projective_induction_check,
)
from .oracle import ORACLE_MAX_DIMENSION, rotation_project, zspace_det_numerator
from .reports import SpecFileError, load_json
from .solver import EngineError, extract_constraints, sweep

PASS, FAIL, USAGE = 0, 1, 2


class _Usage(Exception):
    pass


def _rational_arg(raw: str) -> Fraction:
    try:
        return parse_rational(raw)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _dims_arg(raw: str):
    parts = raw.split("..")
    try:
        if len(parts) == 1:
            a = b = int(parts[0])
        elif len(parts) == 2:
            a, b = int(parts[0]), int(parts[1])
        else:
            raise ValueError
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A..B or a single integer, got {raw!r}")
    if a < 1 or b < a:
        raise argparse.ArgumentTypeError(f"dimension range {raw!r} is empty or invalid")
    return (a, b)


def _emit(text: str, out_path) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rotke",
        description="Exact verification and classification of rotation-invariant "
        "Kahler-Einstein potentials of Bochner form.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, spec=True):
        if spec:
            p.add_argument("--spec", required=True, metavar="PATH", help="JSON spec file")
        p.add_argument("--format", choices=["json", "text"], default="text")
        p.add_argument("--out", metavar="PATH", help="write the report to PATH instead of stdout")

    p = sub.add_parser("verify", help="check the Einstein identity for a numeric potential")
    add_common(p)
    p.add_argument("--lambda", dest="lam", type=_rational_arg, metavar="p/q",
                   help="Einstein constant; overrides the spec file")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="truncation-free certificate (default)")
    mode.add_argument("--degree", type=int, metavar="D", help="check the residual up to total degree D only")

    p = sub.add_parser("constraints", help="emit the residual coefficient equations for a symbolic spec")
    add_common(p)
    p.add_argument("--degree", type=int, metavar="D", help="residual truncation degree")

    p = sub.add_parser("sweep", help="enumerate candidate supports and classify every solution")
    add_common(p, spec=False)
    p.add_argument("--dims", type=_dims_arg, required=True, metavar="A..B")
    p.add_argument("--max-codim", type=int, default=3, metavar="K")
    p.add_argument("--deg-cap", type=int, default=None, metavar="C")
    p.add_argument("--degree", type=int, default=None, metavar="D", help="residual truncation degree")
    p.add_argument("--jobs", type=int, default=1, metavar="N")

    p = sub.add_parser("induced", help="test whether e^Phi - 1 has nonnegative coefficients")
    add_common(p)
    p.add_argument("--degree", type=int, default=8, metavar="D")

    p = sub.add_parser("normalize", help="rescale a potential into Bochner coordinates")
    add_common(p)
    p.add_argument("--degree", type=int, default=8, metavar="D")

    p = sub.add_parser("oracle-check", help="compare the metric determinant against the z-space oracle")
    add_common(p)

    return parser


def _load_spec(args):
    spec, lam_file = reports.parse_spec(load_json(args.spec), where=args.spec)
    return spec, lam_file


def cmd_verify(args) -> int:
    spec, lam = _load_spec(args)
    if getattr(args, "lam", None) is not None:
        lam = args.lam
    if lam is None:
        raise _Usage("verify needs an Einstein constant: pass --lambda p/q or put it in the spec file")
    if not spec.is_numeric():
        raise _Usage("verify needs numeric coefficients; use the constraints command for symbolic specs")
    if args.degree is not None:
        if args.degree < 1:
            raise _Usage("--degree must be >= 1")
        residual = ma_log_residual(build_potential(spec, args.degree), lam)
        payload = reports.verify_degree_payload(spec, lam, args.degree, residual)
    else:
        cert = certify_exact(EinsteinCandidate(spec, lam))
        payload = reports.verify_payload(spec, cert)
    text = reports.render_json(payload) if args.format == "json" else reports.verify_text(payload)
    _emit(text, args.out)
    return PASS if payload["status"] == "PASS" else FAIL


def cmd_constraints(args) -> int:
    spec, _ = _load_spec(args)
    if spec.is_numeric():
        raise _Usage("constraints needs at least one symbolic coefficient; use verify for numeric specs")
    trunc = args.degree if args.degree is not None else spec.max_degree() + 2
    if trunc < spec.max_degree() + 1:
        raise _Usage(f"--degree must be >= {spec.max_degree() + 1} for this spec")
    system = extract_constraints(spec, trunc)
    payload = reports.constraints_payload(system, trunc)
    text = reports.render_json(payload) if args.format == "json" else reports.constraints_text(payload)
    _emit(text, args.out)
    return PASS


def cmd_sweep(args) -> int:
    if args.max_codim < 0:
        raise _Usage("--max-codim must be >= 0")
    if args.jobs < 1:
        raise _Usage("--jobs must be >= 1")
    a, b = args.dims
    report = sweep(
        range(a, b + 1),
        args.max_codim,
        deg_cap=args.deg_cap,
        trunc=args.degree,
        jobs=args.jobs,
    )
    payload = reports.sweep_payload(report)
    text = reports.render_json(payload) if args.format == "json" else reports.sweep_text(payload)
    _emit(text, args.out)
    counts = report.counts()
    ok = counts.get("UNRESOLVED", 0) == 0 and not report.has_unknown()
    return PASS if ok else FAIL


def cmd_induced(args) -> int:
    if args.degree < 1:
        raise _Usage("--degree must be >= 1")
    phi = reports.parse_potential(load_json(args.spec), args.degree, where=args.spec)
    report = projective_induction_check(phi)
    payload = reports.induced_payload(report)
    text = reports.render_json(payload) if args.format == "json" else reports.induced_text(payload)
    _emit(text, args.out)
    return PASS if report.induced_up_to_trunc else FAIL


def cmd_normalize(args) -> int:
    if args.degree < 1:
        raise _Usage("--degree must be >= 1")
    phi = reports.parse_potential(load_json(args.spec), args.degree, where=args.spec)
    try:
        normalized, scaling = bochner_normalize(phi)
    except ValueError as exc:
        raise _Usage(str(exc))
    payload = reports.normalize_payload(normalized, scaling)
    text = reports.render_json(payload) if args.format == "json" else reports.normalize_text(payload)
    _emit(text, args.out)
    return PASS


def cmd_oracle_check(args) -> int:
    spec, _ = _load_spec(args)
    if not spec.is_numeric():
        raise _Usage("oracle-check needs numeric coefficients")
    if spec.n > ORACLE_MAX_DIMENSION:
        raise _Usage(f"the z-space oracle only supports n <= {ORACLE_MAX_DIMENSION}")
    fast = det_numerator(build_potential(spec, spec.n * (2 * spec.max_degree() - 1)))
    slow = {m: c for m, c in rotation_project(zspace_det_numerator(spec)).items() if c}
    match = {m: c.constant_value() for m, c in fast.terms.items()} == slow
    payload = {
        "schema": reports.SCHEMA,
        "kind": "oracle-check",
        "status": "PASS" if match else "FAIL",
        "terms": len(fast.terms),
        "spec": reports.emit_spec(spec),
    }
    if args.format == "json":
        text = reports.render_json(payload)
    else:
        text = f"{'status':<12}{payload['status']}\n{'terms':<12}{payload['terms']}\n"
    _emit(text, args.out)
    return PASS if match else FAIL


_COMMANDS = {
    "verify": cmd_verify,
    "constraints": cmd_constraints,
    "sweep": cmd_sweep,
    "induced": cmd_induced,
    "normalize": cmd_normalize,
    "oracle-check": cmd_oracle_check,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (_Usage, SpecFileError) as exc:
        print(f"rotke {args.command}: {exc}", file=sys.stderr)
        return USAGE
    except EngineError as exc:
        print(f"rotke {args.command}: internal consistency failure: {exc}", file=sys.stderr)
        return FAIL


if __name__ == "__main__":
    sys.exit(main())
