"""Command-line surface: solve, oracle, gen, check.

Reports are deterministic JSON (sorted keys); every rational appears as an
authoritative exact string alongside a float approximation for readability.
Exit codes: 0 solved within bound, 2 near-feasibility unattainable,
3 infeasible, 4 resource limit exceeded, 1 usage or parse error.
"""

import argparse
import json
import random
import sys

from .apps import scheduling_to_config
from .errors import (
    InstanceFormatError,
    InvalidInstanceError,
    NearfeasError,
    ResourceLimitError,
    ZeroColumnUnsupported,
)
from .generate import gen_config, gen_general, gen_nonneg, gen_scheduling
from .instances import (
    ApproxParams,
    GeneralIP,
    NFoldConfigInstance,
    NFoldNonnegInstance,
    instance_from_dict,
    instance_to_dict,
)
from .oracle import brute_force
from .rationals import as_rat, format_rat, to_float
from .results import SolveStatus
from .solver_config import solve_nfold_config
from .solver_general import solve_general
from .solver_nfold import solve_nfold

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_UNATTAINABLE = 2
EXIT_INFEASIBLE = 3
EXIT_RESOURCE = 4

_STATUS_EXIT = {
    SolveStatus.OK: EXIT_OK,
    SolveStatus.NEAR_FEASIBILITY_UNATTAINABLE: EXIT_UNATTAINABLE,
    SolveStatus.INFEASIBLE: EXIT_INFEASIBLE,
}


def _rat_json(report, key, value):
    if value is None:
        report[key] = None
        report[f"{key}_approx"] = None
    else:
        report[key] = format_rat(value)
        report[f"{key}_approx"] = to_float(value)


def _solution_json(x):
    if x is None:
        return None
    if x and isinstance(x[0], tuple):
        return [[int(v) for v in blk] for blk in x]
    return [int(v) for v in x]


def _result_report(kind, epsilon, result):
    report = {
        "kind": kind,
        "epsilon": format_rat(epsilon),
        "status": result.status.value,
        "within_bound": bool(result.report.within_bound) if result.report else False,
        "refinements": result.refinements,
        "solve_stats": {
            "lp_pivots": result.stats.lp_pivots,
            "bb_nodes": result.stats.bb_nodes,
        },
        "x": _solution_json(result.x),
        "notes": list(result.notes),
    }
    _rat_json(report, "objective", result.objective)
    if result.report is not None:
        report["mode"] = result.report.mode
        report["residual"] = [format_rat(v) for v in result.report.residual]
        report["residual_approx"] = [to_float(v) for v in result.report.residual]
        _rat_json(report, "max_abs_residual", result.report.max_abs_residual)
        _rat_json(report, "bound", result.report.bound)
    else:
        report["mode"] = None
        report["residual"] = []
        report["residual_approx"] = []
        _rat_json(report, "max_abs_residual", None)
        _rat_json(report, "bound", None)
    report["delta_used"] = format_rat(result.delta_used) if result.delta_used is not None else None
    return report


def _emit(report, json_out):
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    sys.stdout.write(text)
    if json_out:
        with open(json_out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load(path):
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InstanceFormatError("$", f"invalid JSON: {exc}") from exc
    if isinstance(data, dict) and data.get("kind") == "scheduling":
        if data.get("format") != 1:
            raise InstanceFormatError("$.format", "missing or unsupported format (need 1)")
        if "jobs" not in data or "cmax" not in data:
            raise InstanceFormatError("$", "scheduling instance needs jobs and cmax")
        return data
    return instance_from_dict(data)


def _dispatch(inst, pipeline):
    if isinstance(inst, dict):  # scheduling
        if pipeline not in ("auto", "nfold-config"):
            raise InvalidInstanceError(
                [f"pipeline {pipeline} cannot solve a scheduling instance"]
            )
        return "scheduling"
    table = {
        GeneralIP: ("general", "general"),
        NFoldConfigInstance: ("nfold_config", "nfold-config"),
        NFoldNonnegInstance: ("nfold_nonneg", "nfold"),
    }
    kind, expected = table[type(inst)]
    if pipeline not in ("auto", expected):
        raise InvalidInstanceError(
            [f"pipeline {pipeline} cannot solve a {kind} instance"]
        )
    return kind


def _oracle_section(inst, result):
    orc = brute_force(inst)
    section = {"feasible": orc.feasible}
    _rat_json(section, "optimum", orc.optimum)
    ok = True
    if result.status == SolveStatus.OK:
        if orc.feasible:
            le = result.objective <= orc.optimum
            section["objective_le_opt"] = bool(le)
            section["objective_guarantee_vacuous"] = False
            ok = le and result.report.within_bound
        else:
            section["objective_le_opt"] = None
            section["objective_guarantee_vacuous"] = True
    else:
        # an exactly-feasible instance embeds into every relaxed model, so
        # neither "infeasible" nor "unattainable" may coexist with a feasible
        # oracle verdict
        section["objective_le_opt"] = None
        section["objective_guarantee_vacuous"] = True
        ok = not orc.feasible
    section["check_passed"] = bool(ok)
    return section, ok


def cmd_solve(args):
    inst = _load(args.input)
    kind = _dispatch(inst, args.pipeline)
    epsilon = as_rat(args.epsilon)
    params = ApproxParams.build(
        epsilon,
        delta_override=as_rat(args.delta) if args.delta else None,
        refinement_limit=args.refine_limit,
        node_limit=args.node_limit,
    )

    schedule_section = None
    if kind == "scheduling":
        core, decode = scheduling_to_config(
            inst["jobs"], inst["cmax"], costs=inst.get("costs")
        )
        result = solve_nfold_config(core, params)
        if result.x is not None:
            d = decode(result.x)
            maxp = max((as_rat(v) for row in inst["jobs"] for v in row), default=as_rat(0))
            bound = as_rat(inst["cmax"]) + epsilon * maxp
            schedule_section = {
                "assignment": list(d.assignment),
                "loads": [format_rat(v) for v in d.loads],
                "makespan": format_rat(d.makespan),
                "makespan_approx": to_float(d.makespan),
                "makespan_bound": format_rat(bound),
                "makespan_within_bound": bool(d.makespan <= bound),
            }
            if inst.get("costs") is not None:
                schedule_section["cost"] = format_rat(d.cost)
        check_inst = core
    elif kind == "general":
        result = solve_general(inst, params)
        check_inst = inst
    elif kind == "nfold_config":
        result = solve_nfold_config(inst, params)
        check_inst = inst
    else:
        result = solve_nfold(inst, params)
        check_inst = inst

    report = _result_report(kind, epsilon, result)
    if schedule_section is not None:
        report["schedule"] = schedule_section
    exit_code = _STATUS_EXIT[result.status]

    if args.oracle_check:
        section, ok = _oracle_section(check_inst, result)
        report["oracle"] = section
        if not ok:
            _emit(report, args.json_out)
            sys.stderr.write(
                "oracle check failed: objective "
                f"{report['objective']} vs optimum {section['optimum']}, "
                f"max residual {report['max_abs_residual']} vs bound {report['bound']}\n"
            )
            return EXIT_USAGE

    _emit(report, args.json_out)
    return exit_code


def cmd_oracle(args):
    inst = _load(args.input)
    if isinstance(inst, dict):
        inst, _ = scheduling_to_config(inst["jobs"], inst["cmax"], costs=inst.get("costs"))
    orc = brute_force(inst, cap=args.cap)
    report = {"feasible": orc.feasible}
    _rat_json(report, "optimum", orc.optimum)
    report["witness"] = _solution_json(orc.witness)
    _emit(report, args.json_out)
    return EXIT_OK if orc.feasible else EXIT_INFEASIBLE


def cmd_gen(args):
    rng = random.Random(args.seed)
    if args.kind == "general":
        inst = gen_general(rng, m=args.m, n=args.n, delta_max=args.delta_max)
        data = instance_to_dict(inst)
    elif args.kind == "nfold-config":
        inst = gen_config(rng, n_blocks=args.blocks, s=args.s, t=args.t)
        data = instance_to_dict(inst)
    elif args.kind == "nfold-nonneg":
        inst = gen_nonneg(rng, n_blocks=args.blocks, s_a=args.s, s_d=args.s, t=args.t)
        data = instance_to_dict(inst)
    else:
        data = gen_scheduling(rng, n_jobs=args.n, m_machines=args.m)
    text = json.dumps(data, indent=2, sort_keys=True) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_check(args):
    inst = _load(args.input)
    if isinstance(inst, dict):
        scheduling_to_config(inst["jobs"], inst["cmax"], costs=inst.get("costs"))
        problems = []
    else:
        from .instances import validate_config, validate_general, validate_nonneg

        if isinstance(inst, GeneralIP):
            problems, _ = validate_general(inst)
        elif isinstance(inst, NFoldConfigInstance):
            problems, _ = validate_config(inst)
        else:
            problems = validate_nonneg(inst)
    if problems:
        for p in problems:
            sys.stderr.write(p + "\n")
        return EXIT_USAGE
    sys.stdout.write("ok\n")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="nearfeas",
        description="Exact-rational approximation pipelines for integer programs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve an instance file")
    p.add_argument("--input", required=True)
    p.add_argument("--epsilon", required=True, help='rational, e.g. "1/5"')
    p.add_argument(
        "--pipeline",
        choices=["auto", "general", "nfold-config", "nfold"],
        default="auto",
    )
    p.add_argument("--oracle-check", action="store_true")
    p.add_argument("--json-out", default=None)
    p.add_argument("--refine-limit", type=int, default=12)
    p.add_argument("--node-limit", type=int, default=10**6)
    p.add_argument("--delta", default=None, help="override the initial box width")
    p.add_argument("--seed", type=int, default=None, help="recorded only; solving is deterministic")
    p.add_argument("--workers", type=int, default=1, help="oracle partitioning only")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="exact brute-force solve")
    p.add_argument("--input", required=True)
    p.add_argument("--cap", type=int, default=10**7)
    p.add_argument("--json-out", default=None)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gen", help="generate a random instance")
    p.add_argument(
        "--kind",
        choices=["general", "nfold-config", "nfold-nonneg", "scheduling"],
        required=True,
    )
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--blocks", type=int, default=4)
    p.add_argument("--s", type=int, default=2)
    p.add_argument("--t", type=int, default=2)
    p.add_argument("--delta-max", type=int, default=5)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("check", help="validate an instance file")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ResourceLimitError as exc:
        sys.stderr.write(f"resource limit: {exc}\n")
        return EXIT_RESOURCE
    except (InstanceFormatError, InvalidInstanceError, ZeroColumnUnsupported) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except FileNotFoundError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except NearfeasError as exc:
        sys.stderr.write(f"internal error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
