"""Command-line interface: ``hyperinv {count, expand, eval, verify}``.

Exit codes: 0 success, 1 a requested check failed, 2 input error,
3 resource cap exceeded, 4 singular input or unsupported domain.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import calculus as calc
from . import engine, special
from .combinatorics import ResourceCapError, enumerate_classes, enumerate_semimagic, hn_formula
from .io import InputError, expansion_to_json, expansion_to_latex, read_tensor, tensor_to_dict
from .verify import PUBLISHED_H44, format_report, run_suite

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_CAP, EXIT_DOMAIN = 0, 1, 2, 3, 4

# squares and classes quoted in the literature that enumeration contradicts
PUBLISHED_COUNTS = {(4, 4): {"squares": PUBLISHED_H44, "classes": 40}}


class DomainError(ValueError):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=False)


def cmd_count(args) -> int:
    n, r = args.n, args.r
    if n < 1 or r < 0:
        raise InputError("--n must be >= 1 and --r must be >= 0")
    squares = enumerate_semimagic(n, r, engine.resolve_cap(args.cap))
    classes = enumerate_classes(n, r, engine.resolve_cap(args.cap))
    report = {"n": n, "r": r, "squares": len(squares), "classes": len(classes)}
    notes = []
    if n <= 4:
        report["formula"] = hn_formula(n, r)
        if report["formula"] != len(squares):
            notes.append(f"closed form {report['formula']} disagrees with enumeration {len(squares)}")
    published = PUBLISHED_COUNTS.get((n, r))
    if published:
        if published["squares"] != len(squares):
            notes.append(f"erratum: published square count {published['squares']}, enumeration gives {len(squares)}")
        if published["classes"] != len(classes):
            notes.append(f"erratum: published class count {published['classes']}, enumeration gives {len(classes)}")
    report["notes"] = notes
    print(_dump(report))
    return EXIT_OK


def cmd_expand(args) -> int:
    exp = engine.build_expansion(args.rank, args.order, args.cap)
    if args.format == "latex":
        sys.stdout.write(expansion_to_latex(exp))
    else:
        print(expansion_to_json(exp))
    return EXIT_OK


def cmd_eval(args) -> int:
    A, _ = read_tensor(args.tensor)
    cap = args.cap
    out = {"rank": A.rank, "dim": A.dim}
    status = EXIT_OK
    requested = any([args.oracle, args.det, args.inverse, args.charpoly, args.ch_check, args.hyperdet222])
    if args.order_s is not None or not requested:
        s = args.order_s if args.order_s is not None else 1
        if s < 1:
            raise InputError("--order-s must be >= 1")
        out["order"] = s
        out["discriminant"] = engine.discriminant(A, s, cap=cap)
        if args.oracle:
            out["oracle"] = engine.discriminant_oracle(A, None, s, cap)
    elif args.oracle:
        raise InputError("--oracle needs --order-s")
    if args.det:
        if A.rank % 2 == 0 and A.dim >= 2:
            out["det"] = calc.det_epsilon(A)
        else:
            out["det"] = engine.discriminant_oracle(A, None, A.dim, cap)
    if args.inverse:
        if A.rank == 2:
            inv = calc.inverse_rank2(A)
        elif A.rank % 2 == 0:
            inv = calc.inverse_even_rank(A)
        elif A.rank == 3 and A.dim == 2:
            inv = special.thirdrank_inverse_d2(A)
        else:
            raise DomainError(f"no inverse available for rank {A.rank}, dim {A.dim}")
        out["inverse"] = tensor_to_dict(inv)
    if args.charpoly:
        if A.rank != 2:
            raise DomainError("--charpoly needs a rank-2 tensor")
        out["charpoly"] = list(calc.char_poly(A).coefficients)
    if args.ch_check:
        if A.rank == 2:
            R = calc.ch_residual_rank2(A)
            scale = max(1.0, float(np.linalg.norm(A.data, 2))) ** A.dim
            tol = 1e-9
        elif A.rank == 4:
            R = calc.ch_residual_rank4(A, cap=cap)
            scale = max(1.0, A.scale()) ** A.dim
            tol = 1e-8
        else:
            raise DomainError("--ch-check needs rank 2 or rank 4")
        resid = float(np.max(np.abs(R.data)))
        ok = resid <= tol * scale
        out["ch_check"] = {"max_abs_residual": resid, "tolerance": tol * scale, "pass": ok}
        if not ok:
            status = EXIT_CHECK
    if args.hyperdet222:
        if A.rank != 3 or A.dim != 2:
            raise DomainError("--hyperdet222 needs a rank-3, dim-2 tensor")
        out["hyperdet222"] = special.cayley_hyperdet(A)
    print(_dump(out))
    return status


def cmd_verify(args) -> int:
    results = run_suite(args.seed, args.suite)
    sys.stdout.write(format_report(results, args.seed, args.suite))
    return EXIT_CHECK if any(r.status == "FAIL" for r in results) else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hyperinv", description="Polynomial invariants of hypermatrices.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("count", help="count semi-magic squares and their classes")
    c.add_argument("--n", type=int, required=True, help="order of the squares")
    c.add_argument("--r", type=int, required=True, help="common row/column sum")
    c.add_argument("--cap", type=int, default=None, help="maximum number of squares")
    c.set_defaults(func=cmd_count)

    e = sub.add_parser("expand", help="class coefficients of a discriminant")
    e.add_argument("--rank", type=int, required=True, choices=engine.SUPPORTED_RANKS)
    e.add_argument("--order", type=int, required=True)
    e.add_argument("--format", choices=("json", "latex"), default="json")
    e.add_argument("--cap", type=int, default=None, help="maximum number of permutation tuples")
    e.set_defaults(func=cmd_expand)

    v = sub.add_parser("eval", help="evaluate invariants of a tensor file")
    v.add_argument("--tensor", required=True, help="path to a JSON tensor document")
    v.add_argument("--order-s", type=int, default=None, help="discriminant order s")
    v.add_argument("--oracle", action="store_true", help="also compute the direct tuple sum")
    v.add_argument("--det", action="store_true", help="top discriminant / determinant")
    v.add_argument("--inverse", action="store_true", help="inverse hypermatrix")
    v.add_argument("--charpoly", action="store_true", help="characteristic polynomial (rank 2)")
    v.add_argument("--ch-check", action="store_true", help="Cayley-Hamilton residual (rank 2 or 4)")
    v.add_argument("--hyperdet222", action="store_true", help="Cayley hyperdeterminant (2x2x2)")
    v.add_argument("--cap", type=int, default=None)
    v.set_defaults(func=cmd_eval)

    s = sub.add_parser("verify", help="run the verification suite")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--suite", choices=("fast", "all"), default="fast")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceCapError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAP
    except (calc.SingularError, DomainError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
