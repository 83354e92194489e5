"""Command line front end: inspect operators, build implementers, run verification suites.

Exit codes: 0 all checks pass, 1 some check failed, 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from .checks import (
    CRITERIA,
    Check,
    Report,
    decomposition_checks,
    exact_check,
    implementer_checks,
    inspect_info,
    verify_all,
)
from .clifford import FiniteSelfdualSpace, minimality_check, quasi_basis_residual, watatani_index
from .decompose import curve_v_phi, example_U
from .io import SpecError, dump_operator, load_operator, relation_residuals
from .sampling import random_bogoliubov, random_complex, random_fock_vector, random_with_kernel
from .selfdual import BogoliubovOp, identity

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _load_bogoliubov(path) -> BogoliubovOp:
    op = load_operator(path)
    if isinstance(op, BogoliubovOp):
        return op
    # declared as a plain operator: validate it now so the diagnostic names the relation
    for name, res in relation_residuals(op).items():
        if res > 1e-12:
            raise SpecError(f"relation violated: {name} (max residual {res:.3e})")
    try:
        return BogoliubovOp(op)
    except ValueError as exc:
        raise SpecError(str(exc)) from exc


def _test_vectors(rng, count, n_modes=12, max_particles=4):
    return [random_fock_vector(n_modes, max_particles, 4, rng) for _ in range(count)]


def cmd_inspect(args) -> Report:
    v = _load_bogoliubov(args.path)
    report = Report(command=f"inspect {args.path}", seed=args.seed)
    report.info.update(inspect_info(v))
    report.add(Check("isometry relations of V", "operator spec", max(relation_residuals(v.op).values()), args.tol or 1e-12))
    return report


def cmd_implement(args) -> Report:
    v = _load_bogoliubov(args.path)
    rng = np.random.default_rng(args.seed)
    report = Report(command=f"implement {args.path}", seed=args.seed)
    report.info.update({"index": v.index, "family_size": 2 ** (v.index // 2), "vectors": args.vectors})
    vectors = _test_vectors(rng, args.vectors)
    generators = [random_complex(v.op.window + v.index + 2, rng) for _ in range(args.generators)]
    report.add(implementer_checks(v, vectors, generators, args.tol, label="V"))
    return report


def cmd_decompose(args) -> Report:
    v = _load_bogoliubov(args.path)
    rng = np.random.default_rng(args.seed)
    report = Report(command=f"decompose {args.path}", seed=args.seed)
    report.info.update({"index": v.index})
    report.add(decomposition_checks(v, _test_vectors(rng, args.vectors, n_modes=8, max_particles=3), args.tol, label="V"))
    return report


def cmd_watatani(args) -> Report:
    if args.dim_k % 2 or not 0 <= args.dim_k2 <= args.dim_k:
        raise SpecError("dim K must be even and 0 <= dim K2 <= dim K")
    rng = np.random.default_rng(args.seed)
    space = FiniteSelfdualSpace(args.dim_k // 2)
    split = np.eye(args.dim_k)[:, args.dim_k - args.dim_k2 :]
    index = watatani_index(space, split)
    report = Report(command=f"watatani {args.dim_k} {args.dim_k2}", seed=args.seed)
    report.info["index"] = round(index, 12)
    tol = args.tol or 1e-10
    report.add(Check("Index E = 2^dim K2", "Watatani index", abs(index - 2**args.dim_k2), tol))
    worst = 0.0
    for _ in range(args.samples):
        a = rng.normal(size=(space.fock_dim,) * 2) + 1j * rng.normal(size=(space.fock_dim,) * 2)
        worst = max(worst, quasi_basis_residual(space, split, a))
    report.add(Check("sum_b E(a B_b) B_b* = a", "quasi-basis", worst, tol))
    mc = minimality_check(space, split, rng)
    report.add(Check("Ind(E) E(a) = sum_b B_b a B_b*", "minimality", max(mc["monomial_residual"], mc["random_residual"], mc["nontrivial_sum_norm"]), tol))
    return report


def cmd_verify_all(args) -> Report:
    criteria = None
    if args.criteria:
        criteria = {int(x) for x in args.criteria.split(",")}
        if not criteria <= {n for n, _, _ in CRITERIA}:
            raise SpecError(f"criteria must be drawn from 1..{len(CRITERIA)}")
    return verify_all(seed=args.seed, tol=args.tol, criteria=criteria)


def cmd_spec(args) -> Report:
    """Write an operator spec file for one of the built-in operators."""
    rng = np.random.default_rng(args.seed)
    if args.kind == "identity":
        v = BogoliubovOp(identity("K"))
    elif args.kind == "curve":
        v = curve_v_phi(args.phi)
    elif args.kind == "example-u":
        v = example_U()
    elif args.kind == "random":
        if args.kernel:
            v = random_with_kernel(args.window_modes, args.index, args.kernel, rng)
        else:
            v = random_bogoliubov(args.window_modes, args.index, rng)
    dump_operator(v, args.output)
    report = Report(command=f"spec {args.kind}", seed=args.seed)
    report.info.update({"output": args.output, "index": v.index, "window": v.op.window})
    report.add(exact_check("written operator reloads", "operator spec", int(load_operator(args.output).op.allclose(v.op)), 1))
    return report


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=42, help="random seed (default 42)")
    common.add_argument("--tol", type=float, default=None, help="override the numeric tolerances of the suite")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="output_format", action="store_const", const="json", help="print the JSON report")
    fmt.add_argument("--human", dest="output_format", action="store_const", const="human", help="print a table (default)")
    common.add_argument("--report", metavar="FILE", help="also write the JSON report to FILE")

    parser = argparse.ArgumentParser(prog="bogofock", description="Implementers of Bogoliubov endomorphisms in Fock space.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("inspect", parents=[common], help="index, d_V, kernels and spectrum of S_V")
    p.add_argument("path")
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("implement", parents=[common], help="build the implementers and check Cuntz relations and intertwining")
    p.add_argument("path")
    p.add_argument("--vectors", type=int, default=20, help="number of random test vectors")
    p.add_argument("--generators", type=int, default=20, help="number of random field generators")
    p.set_defaults(func=cmd_implement)

    p = sub.add_parser("decompose", parents=[common], help="factor V = U W and check the implementer factorization")
    p.add_argument("path")
    p.add_argument("--vectors", type=int, default=10)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("watatani", parents=[common], help="index of the conditional expectation C(K) -> C(K1)")
    p.add_argument("dim_k", type=int)
    p.add_argument("dim_k2", type=int)
    p.add_argument("--samples", type=int, default=10)
    p.set_defaults(func=cmd_watatani)

    p = sub.add_parser("verify-all", parents=[common], help="run every acceptance criterion")
    p.add_argument("--criteria", help="comma-separated subset, e.g. 1,3,6")
    p.set_defaults(func=cmd_verify_all)

    p = sub.add_parser("spec", parents=[common], help="write an operator spec file")
    p.add_argument("kind", choices=["identity", "curve", "example-u", "random"])
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--phi", type=float, default=np.pi / 8, help="angle for the curve operator")
    p.add_argument("--window-modes", type=int, default=2)
    p.add_argument("--index", type=int, default=2)
    p.add_argument("--kernel", type=int, default=0, help="dimension of ker V11 for random operators")
    p.set_defaults(func=cmd_spec)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        report = args.func(args)
    except (ValueError, OSError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report.timing["total_seconds"] = round(time.perf_counter() - start, 3)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(report.to_dict(), fh, indent=1, sort_keys=True)
            fh.write("\n")
    if args.output_format == "json":
        print(json.dumps(report.to_dict(), indent=1, sort_keys=True))
    else:
        print(report.human())
    return EXIT_PASS if report.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
