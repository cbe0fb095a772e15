"""Command line front end.

Exit codes: 0 success (including a "not dissociated" answer), 1 when a run
finds a violated property or fails to produce what was asked, 2 on usage
or input errors.  JSON output echoes the run configuration under ``config``.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from typing import Optional

from . import algebra, basis, construction, dissociation, search
from .group import ElementSet, GroupSpec, parse_group
from .validation import check_group, parse_elements, read_element_file

DEFAULT_SEED = 0

EXIT_OK, EXIT_FINDING, EXIT_USAGE = 0, 1, 2


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    group: Optional[str] = None
    elements: Optional[str] = None
    input: Optional[str] = None
    seed: int = DEFAULT_SEED
    limits: dict = field(default_factory=dict)
    format: str = "json"
    options: dict = field(default_factory=dict)


def _load_set(args, name: str = "elements", file_attr: str = "input") -> ElementSet:
    inline = getattr(args, name, None)
    path = getattr(args, file_attr, None)
    if inline is None and path is None:
        raise InputError(f"no elements: pass --{name.replace('_', '-')} or --{file_attr}")
    rows = read_element_file(path) if path else parse_elements(inline)
    return _to_set(args, rows)


def _to_set(args, rows) -> ElementSet:
    if args.group is None:
        raise InputError("--group is required")
    group = parse_group(args.group)
    for r in rows:
        if len(r) != group.dim:
            raise InputError(f"element {r} has {len(r)} coordinates, group {args.group} has {group.dim}")
    reduced = list(dict.fromkeys(group.reduce(r) for r in rows))
    return ElementSet(group, tuple(reduced))


def _cmd_check(args):
    A = _load_set(args)
    method = args.method
    if method == "auto":
        method = "nullcomb" if len(A) <= dissociation.nullcomb_limit() else "sums"
    if method == "nullcomb":
        ok, w = dissociation.is_dissociated_nullcomb(A, args.max_k)
    else:
        ok, w = dissociation.is_dissociated_sums(A, args.max_k)
    out = {"dissociated": ok}
    if w is not None:
        out["witness"] = w.to_json()
    return out, EXIT_OK


def _cmd_basis(args):
    A = _load_set(args)
    lam = basis.greedy_maximal(A, order=args.order, seed=args.seed)
    return {"basis": lam.tolist(), "size": len(lam), "maximal": basis.is_maximal_in(lam, A)}, EXIT_OK


def _cmd_decompose(args):
    lam = _load_set(args)
    if not dissociation.is_dissociated(lam):
        raise InputError("basis elements are not dissociated")
    target = lam.group.reduce(parse_elements(args.target)[0])
    try:
        c = basis.decompose(target, lam)
    except basis.NoRepresentation:
        return {"target": list(target), "representable": False}, EXIT_FINDING
    return {"target": list(target), "representable": True, "c": list(c)}, EXIT_OK


def _cmd_maximal_all(args):
    A = _load_set(args)
    found = search.enumerate_maximal(A, args.max_k)
    return {"count": len(found), "sizes": [len(x) for x in found],
            "maximal": [x.tolist() for x in found]}, EXIT_OK


def _cmd_bound2(args):
    if args.sizes:
        lam_size, m_size = (int(v) for v in args.sizes.split(","))
        r = basis.bound_report(lam_size, m_size)
        return {"report": r.to_json(), "all_ok": r.all_ok}, EXIT_OK if r.all_ok else EXIT_FINDING
    A = _load_set(args)
    if args.lam is not None and args.m is not None:
        lam, M = _to_set(args, parse_elements(args.lam)), _to_set(args, parse_elements(args.m))
    else:
        found = search.enumerate_maximal(A, args.max_k)
        lam = max(found, key=len)
        M = min(found, key=len)
    try:
        r = basis.check_theorem2(lam, M, A)
    except basis.NotMaximalError as exc:
        raise InputError(str(exc)) from None
    out = {"Lambda": lam.tolist(), "M": M.tolist(), "report": r.to_json(), "all_ok": r.all_ok}
    return out, EXIT_OK if r.all_ok else EXIT_FINDING


def _cmd_bound3(args):
    A = _load_set(args)
    lam = _to_set(args, parse_elements(args.lam)) if args.lam else \
        basis.greedy_maximal(A, order=args.order, seed=args.seed)
    r = algebra.check_theorem3(A, lam)
    return {"Lambda": lam.tolist(), "report": r.to_json()}, EXIT_OK if r.holds else EXIT_FINDING


def _cmd_rank(args):
    A = _load_set(args)
    out = {"rank": algebra.subgroup_rank(A)}
    try:
        out["closure_rank"] = algebra.closure_rank(A)
    except ValueError:
        out["closure_rank"] = None
    return out, EXIT_OK


def _cmd_orth_prob(args):
    m = args.m if args.m is not None else args.plus + args.minus
    tc = construction.TypeCount(args.plus, args.minus, m)
    p = construction.orth_probability(tc)
    bound = construction.orth_probability_bound(tc)
    return {"m_plus": args.plus, "m_minus": args.minus, "exact": f"{p.numerator}/{p.denominator}",
            "value": float(p), "vandermonde_ok": p == construction.orth_probability_vandermonde(tc),
            "bound": bound, "below_bound": float(p) < bound,
            "type_count": construction.type_count(m, args.plus, args.minus)}, EXIT_OK


def _cmd_union_bound(args):
    return {"report": construction.union_bound(args.m, args.n).to_json()}, EXIT_OK


def _cmd_minimal_n(args):
    n = construction.minimal_n(args.m)
    return {"m": args.m, "minimal_n": n}, EXIT_OK


def _cmd_construct(args):
    try:
        res = construction.construct(args.m, args.n, args.trials, args.seed)
    except construction.ExhaustedTrials as exc:
        return {"success": False, "m": exc.m, "n": exc.n, "trials": exc.trials,
                "failures": exc.failures}, EXIT_FINDING
    return {"success": True, "m": args.m, "n": res.n, "trial": res.trial,
            "elements": res.elements.tolist(), "union_bound": res.report.to_json()}, EXIT_OK


def _cmd_success_rate(args):
    n = args.n if args.n is not None else construction.minimal_n(args.m)
    rate = construction.success_rate(args.m, n, args.trials, args.seed)
    ub = construction.union_bound(args.m, n)
    return {"m": args.m, "n": n, "trials": args.trials, "success_rate": rate,
            "union_bound_total": ub.total}, EXIT_OK


def _cmd_ln(args):
    r = search.largest_in_hypercube(args.n, args.budget)
    out = {"L": r.size, "exhausted": r.exhausted, "nodes_visited": r.nodes_visited,
           "best": r.best.tolist()}
    return out, EXIT_OK


def _cmd_max_dissoc(args):
    A = _load_set(args)
    return search.max_dissociated(A, args.budget).to_json(), EXIT_OK


def _cmd_stress2(args):
    spec = search.CorpusSpec(parse_group(args.group), args.size, args.count, args.low, args.high)
    rep = search.theorem2_stress(spec, args.seed)
    return rep.to_json(), EXIT_FINDING if rep.violations else EXIT_OK


def _add_set_args(p, group_required=True):
    p.add_argument("--group", required=group_required, help="free:<n> | mod:<e>^<k>")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--elements", help='inline elements, e.g. "1,0;0,1"')
    src.add_argument("--input", help="element file: one comma-separated element per line")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dissoc", description="Dissociated sets in abelian groups.")
    parser.add_argument("--format", choices=("json", "text"), default="json")
    sub = parser.add_subparsers(dest="command", required=True)

    def cmd(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=func)
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS)
        return p

    p = cmd("check", _cmd_check, "test whether a set is dissociated")
    _add_set_args(p)
    p.add_argument("--method", choices=("auto", "nullcomb", "sums"), default="auto")
    p.add_argument("--max-k", type=int, default=None)

    p = cmd("basis", _cmd_basis, "greedy maximal dissociated subset")
    _add_set_args(p)
    p.add_argument("--order", choices=("input", "lex", "reverse", "random"), default="input")

    p = cmd("decompose", _cmd_decompose, "write an element over a dissociated basis")
    _add_set_args(p)
    p.add_argument("--target", required=True)

    p = cmd("maximal-all", _cmd_maximal_all, "all maximal dissociated subsets")
    _add_set_args(p)
    p.add_argument("--max-k", type=int, default=None)

    p = cmd("bound2", _cmd_bound2, "size bounds between two maximal dissociated subsets")
    _add_set_args(p, group_required=False)
    p.add_argument("--lam", help="first maximal subset (inline)")
    p.add_argument("--m", help="second maximal subset (inline)")
    p.add_argument("--sizes", help="only evaluate the bounds for sizes LAMBDA,M")
    p.add_argument("--max-k", type=int, default=None)

    p = cmd("bound3", _cmd_bound3, "rank bounds in Z_e^k")
    _add_set_args(p)
    p.add_argument("--lam", help="maximal subset (inline); default greedy")
    p.add_argument("--order", choices=("input", "lex", "reverse", "random"), default="input")

    p = cmd("rank", _cmd_rank, "rank of the generated subgroup of Z_e^k")
    _add_set_args(p)

    p = cmd("orth-prob", _cmd_orth_prob, "probability a random 0/1 vector is orthogonal to s")
    p.add_argument("--plus", type=int, required=True)
    p.add_argument("--minus", type=int, required=True)
    p.add_argument("--m", type=int, default=None)

    p = cmd("union-bound", _cmd_union_bound, "union-bound sum for (m, n)")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)

    p = cmd("minimal-n", _cmd_minimal_n, "least n passing the union bound")
    p.add_argument("--m", type=int, required=True)

    p = cmd("construct", _cmd_construct, "random m-element dissociated subset of {0,1}^n")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--trials", type=int, default=200)

    p = cmd("success-rate", _cmd_success_rate, "fraction of covering random candidates")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--trials", type=int, default=200)

    p = cmd("ln", _cmd_ln, "largest dissociated subset of {0,1}^n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--budget", type=int, default=None)

    p = cmd("max-dissoc", _cmd_max_dissoc, "largest dissociated subset of a set")
    _add_set_args(p)
    p.add_argument("--budget", type=int, default=None)

    p = cmd("stress2", _cmd_stress2, "two-basis bounds over a random corpus")
    p.add_argument("--group", default="free:1")
    p.add_argument("--size", type=int, default=8)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--low", type=int, default=1)
    p.add_argument("--high", type=int, default=100)
    return parser


def _config(args) -> dict:
    skip = {"func", "command", "group", "elements", "input", "seed", "format"}
    limits = {k: v for k, v in vars(args).items() if k in ("max_k", "trials", "budget")}
    options = {k: v for k, v in vars(args).items() if k not in skip and k not in limits}
    cfg = RunConfig(command=args.command, group=getattr(args, "group", None),
                    elements=getattr(args, "elements", None), input=getattr(args, "input", None),
                    seed=args.seed, limits=limits, format=args.format, options=options)
    return asdict(cfg)


def _emit(report: dict, fmt: str, stream) -> None:
    if fmt == "json":
        stream.write(json.dumps(report, separators=(",", ":")) + "\n")
        return
    for key, value in report.items():
        if key == "config":
            continue
        stream.write(f"{key}: {json.dumps(value) if isinstance(value, (dict, list)) else value}\n")


def main(argv=None, stdout=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        report, code = args.func(args)
    except (InputError, ValueError, OSError, OverflowError) as exc:
        sys.stderr.write(f"dissoc {args.command}: error: {exc}\n")
        return EXIT_USAGE
    report["config"] = _config(args)
    _emit(report, args.format, stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
