#!/usr/local/bin/python3
# coding: utf-8

# plonkalab - main.py
# Command-line front end: python src/main.py <verb> ...

import argparse
import logging
import random
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

from algebra.core import FiniteAlgebra
from algebra.relations import Partition
from algebra.terms import identity_counterexample, is_regular, parse_identity, parse_term
from config import FREE_BOOLEAN_CAP, LOG_LEVEL, PLONKA_SEED, ReportText
from formats.dot import lattice_dot, semilattice_dot, system_dot
from formats.json_io import (
    algebra_to_dict,
    dump,
    load_json,
    parse_algebra,
    parse_pairs,
    parse_partition,
    parse_semilattice,
    parse_system,
    partition_to_list,
    system_to_dict,
    systems_index,
    write_json,
)
from plonka.congruence import (
    AlgebraCongruence,
    all_congruences,
    all_system_congruences,
    audit_pair,
    cg,
    cg_plonka,
    check_factor_theorem,
    check_si_theorem,
    has_absorbing_element,
    is_factor_pair,
    is_subdirectly_irreducible,
    monolith,
    permutable,
    quotient_plonka,
    to_system_congruence,
)
from plonka.free import boolean_free_provider, free_plonka
from plonka.sums import (
    PartitionFunction,
    compose,
    decompose,
    partition_function_diagnostics,
    partition_function_from_term,
    semilattice_of_subalgebras_diagnostics,
)
from plonka.system import DirectSystem, star, validate_system
from plonka.varieties import catalog_algebras, catalog_entry, catalog_systems, check_suite, suite_by_name
from utils import aligned, format_blocks
from utils.error_handling import (
    Diagnostic,
    ParseError,
    PlonkaError,
    ValidationError,
    describe_error,
    has_errors,
    setup_comprehensive_logging,
)
from utils.stats_logger import track_resources

logger = logging.getLogger(__name__)

PROVIDERS = {"boolean": (boolean_free_provider, "Boolean algebras")}


@dataclass
class Report:
    machine: dict[str, Any]
    human: str = ""
    exit_code: int = 0
    diagnostics: list[Diagnostic] = field(default_factory=list)

    def render(self, machine_only: bool) -> str:
        if machine_only:
            return dump(self.machine)
        lines = [self.human.strip()] if self.human.strip() else []
        lines += [str(d) for d in self.diagnostics]
        return "\n".join([*lines, dump(self.machine)])


def _failed(machine: dict, human: str, diagnostics: list[Diagnostic]) -> Report:
    machine["diagnostics"] = [d.as_dict() for d in diagnostics]
    return Report(machine, human, 2 if has_errors(diagnostics) else 0, diagnostics)


# loading; "@name" picks a catalog entry instead of a file


def _load_algebra(source: str) -> FiniteAlgebra:
    if source.startswith("@"):
        for alg in catalog_algebras():
            if alg.name == source[1:]:
                return alg
        return compose(catalog_entry(source[1:])).algebra
    return parse_algebra(source)


def _load_system(source: str, validate: bool = True) -> DirectSystem:
    if source.startswith("@"):
        return catalog_entry(source[1:])
    return parse_system(source, validate)


def _load_any(source: str) -> FiniteAlgebra | DirectSystem:
    if source.startswith("@"):
        name = source[1:]
        if any(d.name == name for d in catalog_systems()):
            return catalog_entry(name)
        return _load_algebra(source)
    data = load_json(source)
    return parse_system(data) if isinstance(data, dict) and "fibers" in data else parse_algebra(data)


def _partition_function(alg: FiniteAlgebra, given: str) -> PartitionFunction:
    text = given.strip()
    if text.startswith("[") or text.endswith(".json") or Path(text).is_file():
        table = load_json(text)
        try:
            return PartitionFunction(alg, table, "table")
        except (TypeError, ValueError) as e:
            raise ParseError(f"pf: expected an {alg.size}x{alg.size} table of indices ({e})") from None
    return partition_function_from_term(alg, parse_term(text))


def _blocks(p: Partition, labels=None) -> str:
    return format_blocks(p.blocks, labels)


# verbs


def cmd_validate(args) -> Report:
    d = _load_system(args.system, validate=False)
    diagnostics = validate_system(d)
    if has_errors(diagnostics):
        human = ReportText.validate_failed.format(len(diagnostics))
    else:
        human = ReportText.validate_ok
    return _failed({"system": d.name, "valid": not has_errors(diagnostics)}, human, diagnostics)


def cmd_compose(args) -> Report:
    d = _load_system(args.system)
    ps = compose(d)
    fibers = ", ".join(f"{d.index.labels[i]}: {f.size}" for i, f in enumerate(d.fibers))
    machine = {"algebra": algebra_to_dict(ps.algebra), "locate": [list(x) for x in ps.locate]}
    return Report(machine, ReportText.compose.format(d.index.size, ps.algebra.size, fibers))


def cmd_decompose(args) -> Report:
    alg = _load_algebra(args.algebra)
    ps = decompose(alg, _partition_function(alg, args.pf))
    d = ps.origin
    rows = [[d.index.labels[i], "{" + ",".join(f.labels) + "}"] for i, f in enumerate(d.fibers)]
    machine = {"system": system_to_dict(d), "locate": [list(x) for x in ps.locate]}
    return Report(machine, ReportText.decompose.format(d.index.size, aligned(rows)))


def cmd_check_pf(args) -> Report:
    alg = _load_algebra(args.algebra)
    pf = _partition_function(alg, args.pf)
    diagnostics = partition_function_diagnostics(pf)
    ok = not has_errors(diagnostics)
    human = f"{pf.source or 'table'} is {'a' if ok else 'not a'} partition function on {alg.name or 'the algebra'}"
    return _failed({"partition_function": ok, "source": pf.source}, human, diagnostics)


def cmd_check_sos(args) -> Report:
    alg = _load_algebra(args.algebra)
    blocks = parse_partition(args.blocks, alg.size, "blocks")
    order = parse_semilattice(args.order, "order")
    diagnostics = semilattice_of_subalgebras_diagnostics(alg, blocks, order, args.least)
    ok = not has_errors(diagnostics)
    human = f"{_blocks(blocks, alg.labels)} is {'a' if ok else 'not a'} semilattice of subalgebras"
    return _failed({"semilattice_of_subalgebras": ok}, human, diagnostics)


def cmd_congruences(args) -> Report:
    d = _load_system(args.system)
    ps = compose(d)
    con = all_congruences(ps.algebra, cap=args.cap)
    system_cons = all_system_congruences(d, cap=args.cap)
    images = [to_system_congruence(ps, th) for th in con]
    bijective = len(set(images)) == len(images) and set(images) == set(system_cons)
    rows = [
        [_blocks(th.partition, ps.algebra.labels), _blocks(sc.C, d.index.labels), " ".join(_blocks(t) for t in sc.theta)]
        for th, sc in zip(con, images)
    ]
    machine = {
        "congruences": [partition_to_list(th.partition) for th in con],
        "system_congruences": [
            {"C": partition_to_list(sc.C), "theta": [partition_to_list(t) for t in sc.theta]} for sc in system_cons
        ],
        "bijection": bijective,
    }
    human = ReportText.congruences.format(len(con), len(system_cons), "verified" if bijective else "BROKEN")
    human += aligned([["theta", "C_theta", "theta_ii"], *rows])
    return Report(machine, human, 0 if bijective else 2)


def _random_pairs(rng: random.Random, n: int) -> list[tuple[int, int]]:
    return [(rng.randrange(n), rng.randrange(n)) for _ in range(rng.randint(1, 3))]


def cmd_cg(args) -> Report:
    d = _load_system(args.system)
    ps = compose(d)
    if args.random is not None:
        rng = random.Random(args.seed)
        mismatches = []
        for _ in range(args.random):
            pairs = _random_pairs(rng, ps.algebra.size)
            if cg_plonka(ps, pairs).partition != cg(ps.algebra, pairs).partition:
                mismatches.append([list(p) for p in pairs])
        machine = {"trials": args.random, "seed": args.seed, "mismatches": mismatches}
        human = f"{args.random} random relation set(s), {len(mismatches)} mismatch(es) between fiberwise and direct Cg"
        return Report(machine, human, 2 if mismatches else 0)
    if args.pairs is None:
        raise ParseError("cg: give --pairs or --random")
    pairs = parse_pairs(args.pairs)
    fiberwise, direct = cg_plonka(ps, pairs), cg(ps.algebra, pairs)
    agrees = fiberwise.partition == direct.partition
    machine = {"pairs": [list(p) for p in pairs], "cg": partition_to_list(fiberwise.partition), "agrees": agrees}
    human = f"Cg = {_blocks(fiberwise.partition, ps.algebra.labels)} (direct closure {'agrees' if agrees else 'DIFFERS'})"
    return Report(machine, human, 0 if agrees else 2)


def cmd_quotient(args) -> Report:
    d = _load_system(args.system)
    ps = compose(d)
    th = AlgebraCongruence(ps.algebra, parse_partition(args.theta, ps.algebra.size))
    q = quotient_plonka(ps, th)
    human = ReportText.compose.format(q.index.size, q.size, ", ".join(f"{q.index.labels[i]}: {f.size}" for i, f in enumerate(q.fibers)))
    return Report({"system": system_to_dict(q)}, human)


def cmd_factor(args) -> Report:
    d = _load_system(args.system)
    ps = compose(d)
    th1 = AlgebraCongruence(ps.algebra, parse_partition(args.theta1, ps.algebra.size, "theta1"))
    th2 = AlgebraCongruence(ps.algebra, parse_partition(args.theta2, ps.algebra.size, "theta2"))
    factor = is_factor_pair(ps.algebra, th1, th2)
    holds = check_factor_theorem(ps, th1, th2)
    machine = {"factor_pair": factor, "permutable": permutable(th1, th2), "theorem_holds": holds}
    rows = [["factor pair", str(factor)], ["permutable", str(machine["permutable"])], ["theorem holds", str(holds)]]
    report = _failed(machine, aligned(rows), audit_pair(ps, th1, th2))
    if not holds:
        report.exit_code = 2
    return report


def cmd_si(args) -> Report:
    alg = _load_algebra(args.algebra)
    mono = monolith(alg, cap=args.cap)
    machine = {"si": mono is not None, "monolith": partition_to_list(mono.partition) if mono else None}
    return Report(machine, ReportText.si.format(mono is not None, _blocks(mono.partition, alg.labels) if mono else "-"))


def cmd_star_si(args) -> Report:
    alg = _load_algebra(args.algebra)
    star_si = is_subdirectly_irreducible(compose(star(alg)).algebra, cap=args.cap)
    if alg.size == 1:
        right = True
    else:
        right = is_subdirectly_irreducible(alg, cap=args.cap) and has_absorbing_element(alg) is None
    holds = check_si_theorem(alg, cap=args.cap)
    machine = {"star_si": star_si, "si_without_absorbing": right, "theorem_holds": holds}
    return Report(machine, ReportText.star_si.format(star_si, right, holds), 0 if holds else 2)


def cmd_free(args) -> Report:
    make, variety = PROVIDERS[args.variety]
    n = args.generators if args.generators is not None else FREE_BOOLEAN_CAP
    report = free_plonka(n, make())
    if args.emit:
        write_json(system_to_dict(report.system), args.emit)
    machine = {
        "variety": args.variety,
        "generators": n,
        "predicted": report.predicted,
        "actual": report.actual,
        "generator_locations": dict(report.generator_locations),
        "fiber_sizes": [f.size for f in report.system.fibers],
    }
    return Report(machine, ReportText.free.format(n, variety, report.predicted, report.actual))


def cmd_check_suite(args) -> Report:
    alg = _load_algebra(args.algebra)
    result = check_suite(alg, suite_by_name(args.suite), args.with_witness)
    rows = [[label, text, "ok" if cex is None else f"fails at {cex}"] for label, text, cex in result.results]
    if result.witness is not None:
        label, text, cex = result.witness
        rows.append([f"witness {label}".strip(), text, "holds" if cex is None else f"fails at {cex}"])
    return Report(result.as_dict(), aligned(rows), 0 if result.passes_suite else 2)


def cmd_check_id(args) -> Report:
    ident = parse_identity(args.identity)
    machine: dict[str, Any] = {"identity": str(ident), "regular": is_regular(ident)}
    lines = [f"{ident}: {'regular' if machine['regular'] else 'irregular'}"]
    exit_code = 0
    if args.algebra:
        alg = _load_algebra(args.algebra)
        cex = identity_counterexample(alg, ident)
        machine["holds"] = cex is None
        machine["counterexample"] = cex
        lines.append(f"{alg.name or 'algebra'}: {'holds' if cex is None else f'fails at {cex}'}")
        exit_code = 0 if cex is None else 2
    return Report(machine, "\n".join(lines), exit_code)


def cmd_catalog(args) -> Report:
    if args.emit:
        name = args.emit
        if any(d.name == name for d in catalog_systems()):
            return Report(system_to_dict(catalog_entry(name)))
        for alg in catalog_algebras():
            if alg.name == name:
                return Report(algebra_to_dict(alg))
        raise ValidationError(f"no catalog entry named {name!r}")
    if args.systems:
        entries = systems_index(catalog_systems())
        rows = [[e["name"], str(e["index"]), str(e["size"]), e["signature"]] for e in entries]
        return Report({"systems": entries}, aligned([["name", "index", "size", "signature"], *rows]))
    entries = [{"name": a.name, "size": a.size, "signature": str(a.signature)} for a in catalog_algebras()]
    rows = [[e["name"], str(e["size"]), e["signature"]] for e in entries]
    return Report({"algebras": entries}, aligned([["name", "size", "signature"], *rows]))


def cmd_export_dot(args) -> Report:
    value = _load_any(args.source)
    if args.kind == "con":
        alg = compose(value).algebra if isinstance(value, DirectSystem) else value
        partitions = [th.partition for th in all_congruences(alg, cap=args.cap)]
        text = lattice_dot(partitions, alg.labels, f"Con({alg.name})" if alg.name else "Con")
    elif not isinstance(value, DirectSystem):
        raise ValidationError(f"export-dot --kind {args.kind} needs a system")
    elif args.kind == "index":
        text = semilattice_dot(value.index, value.name or "index")
    else:
        text = system_dot(value)
    return Report({"kind": args.kind, "dot": text}, text)


COMMANDS: dict[str, Callable[[argparse.Namespace], Report]] = {
    "validate": cmd_validate,
    "compose": cmd_compose,
    "decompose": cmd_decompose,
    "check-pf": cmd_check_pf,
    "check-sos": cmd_check_sos,
    "congruences": cmd_congruences,
    "cg": cmd_cg,
    "quotient": cmd_quotient,
    "factor": cmd_factor,
    "si": cmd_si,
    "star-si": cmd_star_si,
    "free": cmd_free,
    "check-suite": cmd_check_suite,
    "check-id": cmd_check_id,
    "catalog": cmd_catalog,
    "export-dot": cmd_export_dot,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="plonkalab", description="Płonka sums of finite algebras")
    parser.add_argument("--log-level", default=LOG_LEVEL)
    parser.add_argument("--json", action="store_true", help="print the machine section only")
    parser.add_argument("--cap", type=int, default=None, help="size cap for enumerations")
    parser.add_argument("--seed", type=int, default=PLONKA_SEED)
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    for verb in ("validate", "compose", "congruences"):
        sub.add_parser(verb).add_argument("system")
    for verb in ("decompose", "check-pf"):
        p = sub.add_parser(verb)
        p.add_argument("algebra")
        p.add_argument("--pf", required=True, help="binary term or table.json")
    p = sub.add_parser("check-sos")
    p.add_argument("algebra")
    p.add_argument("--blocks", required=True)
    p.add_argument("--order", required=True, help="semilattice JSON on the blocks")
    p.add_argument("--least", type=int, default=None)
    p = sub.add_parser("cg")
    p.add_argument("system")
    p.add_argument("--pairs")
    p.add_argument("--random", type=int)
    p = sub.add_parser("quotient")
    p.add_argument("system")
    p.add_argument("--theta", required=True)
    p = sub.add_parser("factor")
    p.add_argument("system")
    p.add_argument("--theta1", required=True)
    p.add_argument("--theta2", required=True)
    for verb in ("si", "star-si"):
        sub.add_parser(verb).add_argument("algebra")
    p = sub.add_parser("free")
    p.add_argument("--variety", choices=sorted(PROVIDERS), default="boolean")
    p.add_argument("--generators", type=int)
    p.add_argument("--emit")
    p = sub.add_parser("check-suite")
    p.add_argument("algebra")
    p.add_argument("--suite", required=True)
    p.add_argument("--with-witness", action="store_true")
    p = sub.add_parser("check-id")
    p.add_argument("identity")
    p.add_argument("--regular", action="store_true", help="report regularity (always included)")
    p.add_argument("--algebra")
    p = sub.add_parser("catalog")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--list", action="store_true")
    group.add_argument("--systems", action="store_true")
    group.add_argument("--emit")
    p = sub.add_parser("export-dot")
    p.add_argument("source")
    p.add_argument("--kind", choices=["index", "con", "system"], default="index")
    return parser


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except ParseError as e:
        print(describe_error(e), file=err)
        return e.exit_code
    setup_comprehensive_logging(args.log_level)
    try:
        with track_resources(args.verb):
            report = COMMANDS[args.verb](args)
    except PlonkaError as e:
        print(describe_error(e), file=err)
        for d in e.diagnostics:
            print(str(d), file=err)
        return e.exit_code
    print(report.render(args.json), file=out)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(run())
