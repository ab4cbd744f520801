"""Command-line entry point.

Exit status: 0 partitionable / colourable / artifact verified, 2 certified
hard / not colourable / artifact rejected, 1 input error, 3 internal
invariant failure (including the shifting safety cap).
"""

from __future__ import annotations

import argparse
import random
import sys
from typing import Any, Optional, Sequence

from .degeneracy import VectorFunction, validate_partition
from .digraph import Digraph, components
from .engine import InvariantError, PreconditionError, SolveOutcome, solve
from .fileformat import (
    FormatError,
    Instance,
    certificate_to_dict,
    parse_artifacts,
    parse_instance,
    partition_to_dict,
    render_report,
)
from .hardpairs import recognize_hard_pair, validate_certificate
from .oracle import (
    BudgetExceeded,
    DEFAULT_BUDGET,
    oracle_solve,
    random_connected_digraph,
    random_connected_eulerian_digraph,
    random_function,
    random_tight_function,
)
from .reductions import (
    dichromatic_partition,
    list_color,
    list_s_color,
    s_degenerate_partition,
)

EXIT_OK, EXIT_INPUT, EXIT_HARD, EXIT_INTERNAL = 0, 1, 2, 3


class InputError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def _load(path: str) -> Instance:
    return parse_instance(_read(path))


def _need_f(inst: Instance) -> VectorFunction:
    if inst.f is None:
        raise InputError("this command needs function lines ('f v x1 ... xp')")
    return inst.f


def _need_lists(inst: Instance):
    if inst.lists is None:
        raise InputError("this command needs list lines ('l v c1 ... ck')")
    return inst.lists


def _outcome_report(command: str, D: Digraph, f: VectorFunction, out: SolveOutcome) -> dict[str, Any]:
    comps = []
    for c in out.components:
        entry: dict[str, Any] = {"vertices": [v + 1 for v in sorted(c.vertices)]}
        if c.partition is not None:
            entry["outcome"] = "partition"
            entry["partition"] = partition_to_dict(c.partition)
        else:
            assert c.certificate is not None
            entry["outcome"] = "hard"
            entry["certificate"] = certificate_to_dict(c.certificate)
        comps.append(entry)
    P = out.partition()
    report: dict[str, Any] = {
        "command": command,
        "outcome": "partition" if out.partitionable else "hard",
        "n": D.n,
        "p": out.p,
        "components_total": len(out.components),
        "components_hard": sum(1 for c in out.components if not c.partitionable),
        "shifts": out.shifts,
    }
    if P is not None:
        report["partition_valid"] = bool(validate_partition(D, f, P))
    report["certificates_valid"] = all(bool(validate_certificate(D, f, c)) for c in out.certificates)
    report["partition"] = None if P is None else partition_to_dict(P)
    report["components"] = comps
    return report


def cmd_partition(args, inst: Instance) -> tuple[int, dict[str, Any]]:
    f = _need_f(inst)
    out = solve(inst.D, f, debug=args.debug)
    report = _outcome_report("partition", inst.D, f, out)
    if args.debug:
        report["checked_states"] = out.checked_states
    return (EXIT_OK if out.partitionable else EXIT_HARD), report


def cmd_check_hard(args, inst: Instance) -> tuple[int, dict[str, Any]]:
    f = _need_f(inst)
    comps = []
    hard = 0
    for comp in components(inst.D):
        cert = recognize_hard_pair(inst.D, f, comp)
        entry: dict[str, Any] = {"vertices": [v + 1 for v in sorted(comp)]}
        if cert is None:
            entry["outcome"] = "not hard"
        else:
            hard += 1
            entry["outcome"] = "hard"
            entry["certificate"] = certificate_to_dict(cert)
        comps.append(entry)
    report = {
        "command": "check-hard",
        "outcome": "hard" if hard else "not hard",
        "n": inst.D.n,
        "p": f.p,
        "components_total": len(comps),
        "components_hard": hard,
        "components": comps,
    }
    return (EXIT_HARD if hard else EXIT_OK), report


def cmd_validate(args, inst: Instance) -> tuple[int, dict[str, Any]]:
    f = _need_f(inst)
    arts = parse_artifacts(_read(args.artifact))
    D = inst.D
    messages = []
    covered: set[int] = set()
    for P in arts.partitions:
        if P.p != f.p:
            messages.append(f"partition has p = {P.p}, instance has p = {f.p}")
            continue
        bad = [v for v in P.vertices if not 0 <= v < D.n]
        if bad:
            messages.append(f"partition names vertices outside 1..{D.n}")
            continue
        vs = set(P.vertices)
        if any(not comp <= vs for comp in components(D, vs)) or any(
            (comp & vs) and not comp <= vs for comp in components(D)
        ):
            messages.append("partition does not cover whole components")
        check = validate_partition(D, f, P, vs)
        if not check:
            messages.append(check.message)
        covered |= vs
    for cert in arts.certificates:
        check = validate_certificate(D, f, cert)
        if not check:
            messages.append(check.message)
        covered |= set(cert.vertices)
    if not arts.partitions and not arts.certificates:
        messages.append("no partition or certificate found")
    elif covered != set(range(D.n)):
        messages.append(f"artifacts do not cover vertices {sorted(v + 1 for v in set(range(D.n)) - covered)}")
    report = {
        "command": "validate",
        "outcome": "valid" if not messages else "invalid",
        "partitions": len(arts.partitions),
        "certificates": len(arts.certificates),
        "messages": messages,
    }
    return (EXIT_OK if not messages else EXIT_HARD), report


def _coloring_report(command: str, D: Digraph, res, extra: dict[str, Any]) -> dict[str, Any]:
    report: dict[str, Any] = {"command": command, "outcome": "colorable" if res.colorable else "not colorable"}
    report.update(extra)
    report["n"] = D.n
    if res.colorable:
        report["coloring"] = [[v + 1, c] for v, c in sorted(res.coloring.items())]
    return report


def cmd_list_color(args, inst: Instance) -> tuple[int, dict[str, Any]]:
    L = _need_lists(inst)
    res = list_color(inst.D, L)
    report = _coloring_report("list-color", inst.D, res, {})
    if not res.colorable:
        report["evidence"] = [
            {
                "vertices": [v + 1 for v in sorted(e.component)],
                "eulerian_tight": e.eulerian_tight,
                "block_shapes_ok": e.shapes_ok,
                "colour_sets_ok": e.union_ok,
                "blocks": [
                    {"vertices": [v + 1 for v in b.vertices], "shape": b.shape, "colours": sorted(b.colours)}
                    for b in e.blocks
                ],
            }
            for e in res.evidence
        ]
        report["components"] = [
            {"certificate": certificate_to_dict(e.certificate)} for e in res.evidence
        ]
    return (EXIT_OK if res.colorable else EXIT_HARD), report


def _reduction_report(
    command: str, D: Digraph, entry: int, out: SolveOutcome, extra: dict[str, Any]
) -> dict[str, Any]:
    f = VectorFunction.constant(D.n, (entry,) * out.p)
    report = _outcome_report(command, D, f, out)
    for k, v in extra.items():
        report[k] = v
    return report


def cmd_brooks(args, inst: Instance) -> tuple[int, dict[str, Any]]:
    out = dichromatic_partition(inst.D, args.p)
    report = _reduction_report("brooks", inst.D, 1, out, {"max_degree": inst.D.max_degree()})
    return (EXIT_OK if out.partitionable else EXIT_HARD), report


def cmd_s_color(args, inst: Instance) -> tuple[int, dict[str, Any]]:
    out = s_degenerate_partition(inst.D, args.s, args.p)
    report = _reduction_report("s-color", inst.D, args.s, out, {"s": args.s, "max_degree": inst.D.max_degree()})
    return (EXIT_OK if out.partitionable else EXIT_HARD), report


def cmd_list_s_color(args, inst: Instance) -> tuple[int, dict[str, Any]]:
    L = _need_lists(inst)
    res = list_s_color(inst.D, L, args.s)
    report = _coloring_report("list-s-color", inst.D, res, {"s": args.s})
    if not res.colorable:
        report["evidence"] = [
            {
                "vertices": [v + 1 for v in sorted(e.component)],
                "shape_condition": e.shape_ok,
                "list_condition": e.lists_ok,
            }
            for e in res.evidence
        ]
        report["components"] = [
            {"certificate": certificate_to_dict(e.certificate)} for e in res.evidence
        ]
    return (EXIT_OK if res.colorable else EXIT_HARD), report


def cmd_oracle(args, inst: Instance) -> tuple[int, dict[str, Any]]:
    f = _need_f(inst)
    res = oracle_solve(inst.D, f, budget=args.budget)
    report: dict[str, Any] = {
        "command": "oracle",
        "outcome": "partition" if res.feasible else "infeasible",
        "n": inst.D.n,
        "p": f.p,
        "assignments_checked": res.assignments_checked,
        "partition": None if res.partition is None else partition_to_dict(res.partition),
    }
    return (EXIT_OK if res.feasible else EXIT_HARD), report


def run_fuzz(n_max: int, p_max: int, seed: int, count: int, budget: int) -> dict[str, Any]:
    """Random instances checked against the oracle; deterministic per seed."""
    rng = random.Random(seed)
    agree = hard = skipped = 0
    disagreements = []
    for k in range(count):
        n = rng.randint(1, n_max)
        p = rng.randint(1, p_max)
        if p**n > budget:
            skipped += 1
            continue
        if rng.random() < 0.5:
            D = random_connected_eulerian_digraph(rng, n, rng.randint(0, 2 * n), rng.choice([2, 3, n]))
            f = random_tight_function(rng, D, p)
        else:
            D = random_connected_digraph(rng, n, rng.random())
            f = random_function(rng, D, p, 3, 0.1)
        out = solve(D, f)
        feasible = oracle_solve(D, f, budget=budget).feasible
        if feasible == out.partitionable:
            agree += 1
        else:
            disagreements.append(k)
        hard += not out.partitionable
    return {
        "command": "fuzz",
        "outcome": "agree" if not disagreements else "disagree",
        "seed": seed,
        "cases": count,
        "checked": agree + len(disagreements),
        "skipped_over_budget": skipped,
        "hard": hard,
        "disagreements": disagreements,
    }


def cmd_fuzz(args) -> tuple[int, dict[str, Any]]:
    report = run_fuzz(args.n_max, args.p, args.seed, args.count, args.budget)
    return (EXIT_OK if not report["disagreements"] else EXIT_INTERNAL), report


COMMANDS = {
    "partition": cmd_partition,
    "check-hard": cmd_check_hard,
    "validate": cmd_validate,
    "list-color": cmd_list_color,
    "brooks": cmd_brooks,
    "s-color": cmd_s_color,
    "list-s-color": cmd_list_s_color,
    "oracle": cmd_oracle,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="oracle assignment budget")

    parser = argparse.ArgumentParser(
        prog="fpartition",
        description="f-partitions of digraphs into weakly degenerate parts, with hard-pair certificates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_: str, instance: bool = True) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help_, parents=[common])
        if instance:
            sp.add_argument("instance", help="instance file, or - for stdin")
        return sp

    sp = add("partition", "find an f-partition or certify a hard pair")
    sp.add_argument("--debug", action="store_true", help="re-validate every shifting state")
    add("check-hard", "structural hard-pair recognition")
    sp = add("validate", "check a partition file, certificate file or report")
    sp.add_argument("artifact")
    add("list-color", "list colouring with acyclic colour classes")
    sp = add("brooks", "colour with max{Delta+, Delta-} colours (or --p)")
    sp.add_argument("--p", type=int, default=None)
    sp = add("s-color", "partition into weakly s-degenerate parts")
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--p", type=int, default=None)
    sp = add("list-s-color", "list colouring with weakly s-degenerate classes")
    sp.add_argument("--s", type=int, required=True)
    add("oracle", "exhaustive reference search")
    sp = add("fuzz", "compare solver and oracle on random instances", instance=False)
    sp.add_argument("--n-max", type=int, default=6)
    sp.add_argument("--p", type=int, default=2, help="largest p to sample")
    sp.add_argument("--count", type=int, default=200)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "fuzz":
            code, report = cmd_fuzz(args)
        else:
            inst = _load(args.instance)
            code, report = COMMANDS[args.command](args, inst)
    except (InputError, FormatError, PreconditionError, BudgetExceeded, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except InvariantError as e:
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    sys.stdout.write(render_report(report, args.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
