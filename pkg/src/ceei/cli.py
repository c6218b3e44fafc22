"""Command-line front door: solve, check, search, and gen subcommands.

Each invocation writes exactly one JSON report to stdout and keeps
diagnostics on stderr.  Exit codes are uniform across subcommands:

    0  verdict holds / solution found / document written
    1  verdict fails / no solution exists
    2  invalid input (syntax, schema, invariants, bad parameters)
    3  the equilibrium solver did not converge
    4  an enumeration guard was exceeded
    5  a truncated search left the question undecided

Exact rationals are reported as {"exact": "19/20", "decimal": 0.95} pairs;
plain floats stay plain.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from . import search
from .equilibrium import SolverConfig, solve_eg
from .errors import (
    CeeiError,
    DimensionMismatch,
    DocumentSyntaxError,
    EmptyMultiset,
    InconclusiveSearch,
    InstanceTooLarge,
    InvalidAssignment,
    InvariantError,
    NonConvergence,
    NotBinary,
    NotIdenticalUtilities,
    SchemaError,
    SumMismatch,
    WindowViolation,
    ZeroUtility,
)
from .fairness import (
    is_envy_free,
    is_pareto_optimal_discrete,
    verify_ceei_disc,
    verify_ceei_frac,
)
from .instances import (
    PartitionInput,
    ThreePartitionInput,
    from_partition,
    from_three_partition,
    gen_random,
    instance_digest,
    parse_assignment,
    parse_instance,
    serialize_instance,
)
from .model import (
    DominatingAssignment,
    EnvyPair,
    KktViolation,
    PriceSupport,
    ViolatingBundle,
)

EXIT_HOLDS = 0
EXIT_FAILS = 1
EXIT_INVALID = 2
EXIT_NO_CONVERGENCE = 3
EXIT_TOO_LARGE = 4
EXIT_INCONCLUSIVE = 5

_INVALID_INPUT = (
    DocumentSyntaxError,
    SchemaError,
    InvariantError,
    InvalidAssignment,
    DimensionMismatch,
    EmptyMultiset,
    WindowViolation,
    SumMismatch,
    NotBinary,
    NotIdenticalUtilities,
    ZeroUtility,
    OSError,
    ValueError,
)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    started = time.monotonic()
    try:
        report, code = args.handler(args)
    except NonConvergence as exc:
        return _fail(exc, EXIT_NO_CONVERGENCE)
    except InstanceTooLarge as exc:
        return _fail(exc, EXIT_TOO_LARGE)
    except _INVALID_INPUT as exc:
        return _fail(exc, EXIT_INVALID)
    except CeeiError as exc:
        return _fail(exc, EXIT_INVALID)
    report["timings"] = {"total_seconds": time.monotonic() - started}
    print(json.dumps(report, indent=2))
    return code


def _fail(exc, code):
    print(f"error: {exc}", file=sys.stderr)
    return code


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="ceei",
        description="Equilibrium solver and fairness verifiers for indivisible-object assignment.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="compute the fractional equilibrium")
    solve.add_argument("instance", help="path to an instance document")
    solve.add_argument("--tolerance", type=float, default=1e-10, help="relative utility convergence tolerance")
    solve.add_argument("--max-iter", type=int, default=100_000)
    solve.add_argument("--seed", type=int, default=None, help="seed for randomized starting bids")
    _common_flags(solve)
    solve.set_defaults(handler=_cmd_solve)

    check = sub.add_parser("check", help="verify a fairness notion for a discrete assignment")
    check.add_argument("instance")
    check.add_argument("assignment", help="path to an {\"owner\": [...]} document")
    check.add_argument("notion", choices=["ef", "po", "ceei-frac", "ceei-disc"])
    check.add_argument("--limit-nodes", type=int, default=None, help="enumeration guard override")
    _common_flags(check)
    check.set_defaults(handler=_cmd_check)

    searchp = sub.add_parser("search", help="search for discrete assignments")
    searchp.add_argument("instance")
    searchp.add_argument(
        "target",
        choices=["mnw", "ceei-frac", "ceei-disc", "binary-mnw", "identical-ceei-disc"],
    )
    searchp.add_argument("--limit-nodes", type=int, default=None)
    searchp.add_argument("--limit-seconds", type=float, default=None)
    _common_flags(searchp)
    searchp.set_defaults(handler=_cmd_search)

    gen = sub.add_parser("gen", help="generate an instance document")
    gen.add_argument("kind", choices=["random", "partition", "3partition"])
    gen.add_argument("--out", required=True, help="output path for the instance document")
    gen.add_argument("-n", "--agents", type=int, default=2)
    gen.add_argument("-m", "--objects", type=int, default=4)
    gen.add_argument("--max-util", type=int, default=100)
    gen.add_argument("--binary", action="store_true")
    gen.add_argument("--seed", type=int, default=None)
    gen.add_argument("--set", dest="integers", default=None, help="comma-separated integers (partition)")
    gen.add_argument("--weights", default=None, help="comma-separated weights (3partition)")
    gen.add_argument("--bound", type=int, default=None, help="target sum W (3partition)")
    _common_flags(gen)
    gen.set_defaults(handler=_cmd_gen)

    return parser


def _common_flags(sub):
    sub.add_argument("--format", choices=["json"], default="json")


def _cmd_solve(args):
    inst = _read_instance(args.instance)
    config = SolverConfig(convergence_tolerance=args.tolerance, max_iterations=args.max_iter)
    solution = solve_eg(inst, config, seed=args.seed)
    report = _report("solve", inst)
    report["config"] = {
        "tolerance": args.tolerance,
        "max_iter": args.max_iter,
        "seed": args.seed,
    }
    report["result"] = {
        "u_star": [_number(u) for u in solution.u_star],
        "p_star": [_number(p) for p in solution.p_star],
        "x": [[_number(v) for v in row] for row in solution.x.rows],
        "iterations": solution.iterations,
        "kkt_residual": solution.kkt_residual,
        "certified_exact": solution.certified,
    }
    return report, EXIT_HOLDS


def _cmd_check(args):
    inst = _read_instance(args.instance)
    y = parse_assignment(_read(args.assignment), inst)
    if args.notion == "ef":
        verdict = is_envy_free(inst, y)
    elif args.notion == "po":
        verdict = _guarded(is_pareto_optimal_discrete, inst, y, args.limit_nodes)
    elif args.notion == "ceei-frac":
        verdict = verify_ceei_frac(inst, y)
    else:
        verdict = _guarded(verify_ceei_disc, inst, y, args.limit_nodes)
    report = _report("check", inst)
    report["config"] = {"notion": args.notion, "limit_nodes": args.limit_nodes}
    report["result"] = {
        "owner": list(y.owner),
        "holds": verdict.holds,
        "certificate": _certificate(verdict.certificate),
    }
    return report, EXIT_HOLDS if verdict.holds else EXIT_FAILS


def _guarded(op, inst, y, limit):
    if limit is None:
        return op(inst, y)
    return op(inst, y, limit=limit)


def _cmd_search(args):
    inst = _read_instance(args.instance)
    budgets = search.SearchBudgets(max_nodes=args.limit_nodes, max_seconds=args.limit_seconds)
    report = _report("search", inst)
    report["config"] = {
        "target": args.target,
        "limit_nodes": args.limit_nodes,
        "limit_seconds": args.limit_seconds,
    }

    if args.target in ("mnw", "binary-mnw"):
        if args.target == "mnw":
            result = search.max_nash_discrete(inst, budgets)
        else:
            result = search.binary_max_nash(inst)
        report["result"] = {
            "status": "optimal" if result.optimal else "truncated",
            "owner": list(result.best.owner),
            "welfare": _number(result.welfare),
            "nodes_explored": result.nodes_explored,
        }
        return report, EXIT_HOLDS if result.optimal else EXIT_INCONCLUSIVE

    if args.target == "ceei-frac":
        try:
            found = search.exists_ceei_frac_discrete(inst, budgets)
        except InconclusiveSearch as exc:
            report["result"] = {
                "status": "inconclusive",
                "nodes_explored": exc.nodes_explored,
                "best_welfare": _number(exc.best_welfare),
            }
            return report, EXIT_INCONCLUSIVE
        if found is None:
            report["result"] = {"status": "none"}
            return report, EXIT_FAILS
        report["result"] = {"status": "found", "owner": list(found.owner)}
        return report, EXIT_HOLDS

    if args.target == "ceei-disc":
        limit = args.limit_nodes if args.limit_nodes is not None else search.DEFAULT_ENUM_LIMIT
        found = search.exists_ceei_disc_bruteforce(inst, limit=limit)
        if found is None:
            report["result"] = {"status": "none"}
            return report, EXIT_FAILS
        y, prices = found
        report["result"] = {
            "status": "found",
            "owner": list(y.owner),
            "prices": [_number(p) for p in prices],
        }
        return report, EXIT_HOLDS

    found = search.find_ceei_disc_identical(inst)
    if found is None:
        report["result"] = {"status": "none"}
        return report, EXIT_FAILS
    utility = sum((inst.utilities[0][j] for j in found.bundle(0)), Fraction(0))
    report["result"] = {
        "status": "found",
        "owner": list(found.owner),
        "utility_per_agent": _number(utility),
    }
    return report, EXIT_HOLDS


def _cmd_gen(args):
    if args.kind == "random":
        inst = gen_random(args.agents, args.objects, args.max_util, binary=args.binary, seed=args.seed)
        params = {
            "agents": args.agents,
            "objects": args.objects,
            "max_util": args.max_util,
            "binary": args.binary,
            "seed": args.seed,
        }
    elif args.kind == "partition":
        if not args.integers:
            raise SchemaError("set", "partition generation needs --set")
        inst = from_partition(PartitionInput(_parse_ints(args.integers, "set")))
        params = {"set": args.integers}
    else:
        if not args.weights or args.bound is None:
            raise SchemaError("weights", "3partition generation needs --weights and --bound")
        inst = from_three_partition(
            ThreePartitionInput(_parse_ints(args.weights, "weights"), args.bound)
        )
        params = {"weights": args.weights, "bound": args.bound}

    document = serialize_instance(inst)
    with open(args.out, "w", encoding="utf-8") as handle:
        handle.write(document + "\n")
    report = _report("gen", inst)
    report["config"] = {"kind": args.kind, **params}
    report["result"] = {"written": args.out}
    return report, EXIT_HOLDS


def _parse_ints(text, field):
    try:
        return [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise SchemaError(field, "expected comma-separated integers") from exc


def _read(path):
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _read_instance(path):
    return parse_instance(_read(path))


def _report(command, inst):
    return {
        "command": command,
        "instance": {
            "digest": instance_digest(inst),
            "agents": inst.n,
            "objects": inst.m,
        },
    }


def _number(value):
    if isinstance(value, Fraction):
        rendered = str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
        return {"exact": rendered, "decimal": float(value)}
    return value


def _certificate(cert):
    if cert is None:
        return None
    if isinstance(cert, EnvyPair):
        return {"type": "envy_pair", "envious": cert.envious, "envied": cert.envied}
    if isinstance(cert, DominatingAssignment):
        return {"type": "dominating_assignment", "owner": list(cert.assignment.owner)}
    if isinstance(cert, PriceSupport):
        return {"type": "price_support", "prices": [_number(p) for p in cert.prices]}
    if isinstance(cert, ViolatingBundle):
        return {"type": "violating_bundle", "agent": cert.agent, "objects": list(cert.objects)}
    if isinstance(cert, KktViolation):
        return {
            "type": "ratio_gap",
            "agent": cert.agent,
            "object": cert.object,
            "gap": _number(cert.ratio_gap),
        }
    raise TypeError(f"unknown certificate {cert!r}")


if __name__ == "__main__":
    sys.exit(main())
