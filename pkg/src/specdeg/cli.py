"""Command-line interface.

Commands operate on JSON problem files describing the pair (L, N):

    {"k": 2,
     "L": [[1, 0], [0, -1]],
     "N": {"type": "linear", "matrix": [[0, -1], [1, 0]]},
     "name": "optional"}

N payloads by type: "linear" -> "matrix" (k x k), "constant" ->
"vector" (length k), "polynomial" -> "components" (one list per output
coordinate of {"coef": number, "exp": length-k integer list}).

Exit codes: 0 ok, 2 input error, 3 numeric failure, 4 mathematical
precondition violated.
"""

import argparse
import json
import sys

import numpy as np

from . import examples, perturbed, spectral
from .errors import (
    AdmissibilityError,
    BranchStartError,
    CorrectorFailureError,
    DegenerateDifferentialError,
    InconclusiveBranchError,
    NotARootError,
    NotIsolatedError,
    PreconditionError,
    ProblemFileError,
    SpecdegError,
    UnsupportedMapError,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERIC = 3
EXIT_PRECONDITION = 4

_PRECONDITION_ERRORS = (
    AdmissibilityError,
    BranchStartError,
    DegenerateDifferentialError,
    NotARootError,
    NotIsolatedError,
    PreconditionError,
    UnsupportedMapError,
)
_NUMERIC_ERRORS = (CorrectorFailureError, InconclusiveBranchError)


def _require_keys(obj, allowed, required, what):
    unknown = set(obj) - set(allowed)
    if unknown:
        raise ProblemFileError(f"unknown fields in {what}: {sorted(unknown)}")
    missing = set(required) - set(obj)
    if missing:
        raise ProblemFileError(f"missing fields in {what}: {sorted(missing)}")


def _as_matrix(data, k, what):
    arr = np.asarray(data, dtype=float)
    if arr.shape != (k, k):
        raise ProblemFileError(f"{what} has shape {arr.shape}, expected ({k}, {k})")
    return arr


def _parse_nonlinear(obj, k):
    if not isinstance(obj, dict):
        raise ProblemFileError("N must be an object with a 'type' field")
    kind = obj.get("type")
    if kind == "linear":
        _require_keys(obj, ("type", "matrix"), ("type", "matrix"), "N")
        return perturbed.NonlinearMap.linear(_as_matrix(obj["matrix"], k, "N.matrix"))
    if kind == "constant":
        _require_keys(obj, ("type", "vector"), ("type", "vector"), "N")
        vec = np.asarray(obj["vector"], dtype=float)
        if vec.shape != (k,):
            raise ProblemFileError(f"N.vector has shape {vec.shape}, expected ({k},)")
        return perturbed.NonlinearMap.constant(vec)
    if kind == "polynomial":
        _require_keys(obj, ("type", "components"), ("type", "components"), "N")
        comps = obj["components"]
        if not isinstance(comps, list) or len(comps) != k:
            raise ProblemFileError(f"N.components must be a list of length {k}")
        parsed = []
        for i, comp in enumerate(comps):
            terms = []
            for term in comp:
                _require_keys(term, ("coef", "exp"), ("coef", "exp"),
                              f"N.components[{i}] term")
                exp = term["exp"]
                if len(exp) != k or any(int(e) != e or e < 0 for e in exp):
                    raise ProblemFileError(
                        f"N.components[{i}] exponent {exp!r} must be "
                        f"{k} non-negative integers"
                    )
                terms.append((float(term["coef"]), tuple(int(e) for e in exp)))
            parsed.append(terms)
        return perturbed.NonlinearMap.polynomial(parsed)
    raise ProblemFileError(
        f"N.type must be 'linear', 'constant' or 'polynomial', got {kind!r}"
    )


def load_problem(path):
    """Parse a JSON problem file into a Problem."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as e:
        raise ProblemFileError(f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ProblemFileError(f"{path} is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise ProblemFileError("problem file must be a JSON object")
    _require_keys(data, ("k", "L", "N", "name"), ("k", "L", "N"), "problem file")
    k = data["k"]
    if not isinstance(k, int) or k < 1:
        raise ProblemFileError(f"k must be a positive integer, got {k!r}")
    L = _as_matrix(data["L"], k, "L")
    N = _parse_nonlinear(data["N"], k)
    try:
        return perturbed.Problem(k, L, N, str(data.get("name", "")))
    except SpecdegError as e:
        raise ProblemFileError(str(e)) from e


def problem_dict(prob):
    """Problem as a dict in the problem-file format (inverse of load)."""
    N = prob.N
    if N.kind == "linear":
        n_obj = {"type": "linear",
                 "matrix": np.asarray(N.payload, dtype=float).tolist()}
    elif N.kind == "constant":
        n_obj = {"type": "constant",
                 "vector": np.asarray(N.payload, dtype=float).tolist()}
    else:
        n_obj = {"type": "polynomial",
                 "components": [
                     [{"coef": float(c), "exp": list(e)} for c, e in comp]
                     for comp in N.payload
                 ]}
    out = {"k": prob.k, "L": np.asarray(prob.L, dtype=float).tolist(),
           "N": n_obj}
    if prob.name:
        out["name"] = prob.name
    return out


def _fmt_vec(v):
    return "[" + ", ".join(repr(float(x)) for x in v) + "]"


def cmd_eigen(args):
    prob = load_problem(args.file)
    for es in spectral.eigensets(prob.L, tol=args.tol):
        print(f"lambda = {es.lam!r}  alg = {es.algebraic_multiplicity}  "
              f"geo = {es.geometric_multiplicity}")
        for w in es.kernel_basis:
            print(f"  kernel: {_fmt_vec(w)}")
    return EXIT_OK


def _match_eigenset(L, lam):
    for es in spectral.eigensets(L):
        a, b = es.root.isolating_interval
        if a < lam < b or es.lam == lam:
            return es
    raise NotARootError(f"{lam!r} is not an eigenvalue within tolerance")


def cmd_degree(args):
    prob = load_problem(args.file)
    es = _match_eigenset(prob.L, args.lam)
    deg = spectral.ldegree_eigenset(prob.L, es)
    print(f"eigenset lambda = {es.lam!r}: degree {deg.value:+d} ({deg.method})")
    if args.point is not None:
        v = np.asarray(args.point, dtype=float)
        if v.shape != (prob.k,):
            raise ProblemFileError(
                f"--point needs {prob.k} components, got {v.shape[0]}"
            )
        nrm = np.linalg.norm(v)
        if nrm == 0.0:
            raise ProblemFileError("--point must be a nonzero vector")
        v = v / nrm
        resid = float(np.linalg.norm(prob.L @ v - es.lam * v))
        if resid > 1e-8 * max(1.0, float(np.linalg.norm(prob.L))):
            raise PreconditionError(
                f"--point is not an eigenvector for lambda = {es.lam!r} "
                f"(residual {resid:.2e})"
            )
        p = spectral.Eigenpoint(es.lam, v)
        formula = spectral.ldegree_eigenpoint_formula(prob.L, p)
        print(f"eigenpoint degree {formula.value:+d} ({formula.method})")
        try:
            oracle = spectral.ldegree_eigenpoint_oracle(prob.L, p)
            print(f"eigenpoint degree {oracle.value:+d} ({oracle.method})")
        except DegenerateDifferentialError as e:
            print(f"differential oracle unavailable: {e}")
    return EXIT_OK


def cmd_interval_degree(args):
    prob = load_problem(args.file)
    value = spectral.interval_degree(prob.L, args.a, args.b)
    print(f"degree over ({args.a!r}, {args.b!r}): {value:+d}")
    return EXIT_OK


def cmd_probe(args):
    prob = load_problem(args.file)
    report = spectral.degree_stability_probe(
        prob.L, args.a, args.b, args.radius, trials=args.trials, seed=args.seed
    )
    values = ", ".join(f"{v:+d}" for v in sorted(report.values))
    print(f"observed degrees: {{{values}}}  "
          f"(trials {report.trials}, skipped {report.skipped_inadmissible})")
    print(f"violation: {report.violation}")
    return EXIT_OK


def _classification_dict(c):
    if isinstance(c, perturbed.ClosedLoop):
        return {"type": "ClosedLoop"}
    if isinstance(c, perturbed.UnboundedExceededBound):
        return {"type": "UnboundedExceededBound", "bound": c.bound}
    return {"type": "Stalled", "reason": c.reason}


def _branch_record(prob, start_lam, start_v, opts, branches):
    return {
        "problem": prob.name,
        "start": {"lambda": float(start_lam),
                  "v": [float(x) for x in start_v]},
        "options": {"h0": opts.h0, "min_step": opts.min_step,
                    "max_step": opts.max_step, "bound": opts.bound,
                    "max_points": opts.max_points,
                    "newton_tol": opts.newton_tol},
        "branches": [
            {
                "classification": _classification_dict(b.classification),
                "trivial_solutions": [
                    {"s": p.s, "lambda": p.lam, "v": [float(x) for x in p.v]}
                    for p in b.trivial_solutions_met
                ],
                "points": [[p.s, p.lam] + [float(x) for x in p.v]
                           for p in b.points],
            }
            for b in branches
        ],
    }


def _write_record(record, path, fmt, k):
    if fmt == "json":
        text = json.dumps(record, indent=2)
    else:
        header = "branch,s,lambda," + ",".join(f"v{i+1}" for i in range(k))
        lines = [header]
        for bi, b in enumerate(record["branches"]):
            for row in b["points"]:
                lines.append(f"{bi}," + ",".join("%.17g" % x for x in row))
        text = "\n".join(lines)
    if path is None:
        print(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def cmd_continue(args):
    prob = load_problem(args.file)
    v = np.asarray(args.start_v, dtype=float)
    if v.shape != (prob.k,):
        raise ProblemFileError(
            f"--start-v needs {prob.k} components, got {v.shape[0]}"
        )
    nrm = np.linalg.norm(v)
    if nrm == 0.0:
        raise ProblemFileError("--start-v must be a nonzero vector")
    v = v / nrm
    resid = float(np.linalg.norm(prob.L @ v - args.start_lam * v))
    if resid > 1e-8 * max(1.0, float(np.linalg.norm(prob.L))):
        raise BranchStartError(
            f"start is not a trivial solution: ||L v - lambda v|| = {resid:.2e}"
        )
    opts = perturbed.TraceOptions(h0=args.step, bound=args.bound,
                                  max_points=args.max_points)
    branches = perturbed.trace_component(prob, args.start_lam, v, opts)
    for b in branches:
        c = b.classification
        print(f"classification: {c!r}  points: {len(b.points)}")
        for p in b.trivial_solutions_met:
            print(f"  trivial solution: lambda = {p.lam!r}  v = {_fmt_vec(p.v)}")
    record = _branch_record(prob, args.start_lam, v, opts, branches)
    if args.out is not None or args.format == "json":
        _write_record(record, args.out, args.format, prob.k)
    return EXIT_OK


def cmd_eigenpairs(args):
    prob = load_problem(args.file)
    pts = perturbed.eigenpair_curve_linear(
        prob, (args.smin, args.smax), (args.lmin, args.lmax), args.res
    )
    lines = ["s,lambda"] + ["%.17g,%.17g" % (s, lam) for s, lam in pts]
    text = "\n".join(lines)
    if args.out is None:
        print(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return EXIT_OK


def cmd_verify(args):
    ids = list(range(1, 7)) if args.all else [args.example]
    for eid in ids:
        if eid not in range(1, 7):
            raise ProblemFileError(f"no built-in example {eid!r} (use 1..6)")
    all_ok = True
    for eid in ids:
        report = examples.verify_example(eid)
        status = "pass" if report.passed else "FAIL"
        note = ""
        if eid == 5:
            note = "  (even multiplicity: persistence not expected)"
        print(f"example {eid}: {status}{note}")
        for c in report.checks:
            mark = "ok " if c.ok else "BAD"
            print(f"  {mark} start lambda={c.start[0]!r} v={list(c.start[1])}: "
                  f"{type(c.classification).__name__}, "
                  f"distance {c.max_distance:.2e}, "
                  f"{len(c.trivials)} trivial solution(s)"
                  + (f"  [{c.note}]" if c.note else ""))
        all_ok = all_ok and report.passed
    return EXIT_OK if all_ok else EXIT_NUMERIC


def build_parser():
    parser = argparse.ArgumentParser(
        prog="specdeg",
        description="Degrees of eigenvalue problems on the sphere and "
                    "continuation of perturbed solution branches.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eigen", help="list eigensets of L")
    p.add_argument("file")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_eigen)

    p = sub.add_parser("degree", help="degree of an eigenset or eigenpoint")
    p.add_argument("file")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--point", type=float, nargs="+", default=None)
    p.set_defaults(func=cmd_degree)

    p = sub.add_parser("interval-degree", help="degree over (a, b)")
    p.add_argument("file")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.set_defaults(func=cmd_interval_degree)

    p = sub.add_parser("probe", help="interval-degree stability under "
                                     "random perturbations of L")
    p.add_argument("file")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("continue", help="trace the solution branch through "
                                        "a trivial solution")
    p.add_argument("file")
    p.add_argument("--start-lambda", dest="start_lam", type=float,
                   required=True)
    p.add_argument("--start-v", type=float, nargs="+", required=True)
    p.add_argument("--step", type=float, default=0.02)
    p.add_argument("--bound", type=float, default=10.0)
    p.add_argument("--max-points", type=int, default=200000)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_continue)

    p = sub.add_parser("eigenpairs", help="sample the eigenpair curve of "
                                          "L + sN (linear N only)")
    p.add_argument("file")
    p.add_argument("--smin", type=float, default=-3.0)
    p.add_argument("--smax", type=float, default=3.0)
    p.add_argument("--lmin", type=float, default=-3.0)
    p.add_argument("--lmax", type=float, default=3.0)
    p.add_argument("--res", type=int, default=200)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_eigenpairs)

    p = sub.add_parser("verify", help="check built-in examples against "
                                      "their reference curves")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--example", type=int)
    group.add_argument("--all", action="store_true")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ProblemFileError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except _PRECONDITION_ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PRECONDITION
    except _NUMERIC_ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except SpecdegError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
