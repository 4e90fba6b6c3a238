#!/usr/bin/env python3
# coding: utf-8

# plonkalab - json_io.py
# JSON documents for algebras, semilattices, systems and partitions

import json
import logging
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from algebra.core import FiniteAlgebra, Operation, Signature
from algebra.relations import Partition
from algebra.semilattice import JoinSemilattice, semilattice_diagnostics
from plonka.system import DirectSystem, require_valid
from utils import canonical_json
from utils.error_handling import ParseError, ValidationError, raise_on_errors

logger = logging.getLogger(__name__)


def load_json(source: str | Path | dict | list) -> Any:
    """A parsed document from a dict, a file path or JSON text."""
    if isinstance(source, (dict, list)):
        return source
    text = str(source)
    path = Path(text)
    if not text.lstrip().startswith(("{", "[")):
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise ParseError(f"cannot read {path}: {e.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"line {e.lineno} column {e.colno}: {e.msg}") from None


def _field(data: Any, key: str, path: str, kind: type | tuple[type, ...]):
    where = f"{path}.{key}" if path else key
    if not isinstance(data, dict):
        raise ParseError(f"{path or '<root>'}: expected an object")
    if key not in data:
        raise ParseError(f"{where}: missing field")
    value = data[key]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise ParseError(f"{where}: expected {getattr(kind, '__name__', kind)}")
    return value


def _ints(values: Any, path: str) -> list[int]:
    if not isinstance(values, list) or any(not isinstance(x, int) or isinstance(x, bool) for x in values):
        raise ParseError(f"{path}: expected a list of integers")
    return values


def _index_array(value: Any, where: str, expected: str) -> np.ndarray:
    try:
        arr = np.asarray(value)
    except (TypeError, ValueError):
        raise ParseError(f"{where}: expected {expected}") from None
    if arr.size and arr.dtype.kind not in "iu":
        raise ParseError(f"{where}: expected {expected}, got {arr.dtype.name} cells")
    return arr.astype(np.int64)


def algebra_to_dict(alg: FiniteAlgebra) -> dict:
    tables = {}
    for op in alg.signature.operations:
        tables[op.name] = alg.constant(op.name) if op.arity == 0 else alg.table_nd(op.name).tolist()
    return {
        "name": alg.name,
        "signature": [{"name": op.name, "arity": op.arity} for op in alg.signature.operations],
        "elements": list(alg.labels),
        "tables": tables,
    }


def parse_algebra(source: Any, path: str = "") -> FiniteAlgebra:
    data = load_json(source)
    operations = []
    for r, entry in enumerate(_field(data, "signature", path, list)):
        where = f"{path}.signature[{r}]" if path else f"signature[{r}]"
        operations.append(Operation(_field(entry, "name", where, str), _field(entry, "arity", where, int)))
    signature = Signature(tuple(operations))
    elements = _field(data, "elements", path, list)
    n = len(elements)
    raw = _field(data, "tables", path, dict)
    tables = {}
    for op in signature.operations:
        where = f"{path}.tables.{op.name}" if path else f"tables.{op.name}"
        if op.name not in raw:
            raise ParseError(f"{where}: missing table")
        value = raw[op.name]
        if op.arity == 0:
            if not isinstance(value, int) or isinstance(value, bool):
                raise ParseError(f"{where}: a constant is given by an element index")
            tables[op.name] = [value]
            continue
        arr = _index_array(value, where, "a nested array of element indices")
        if arr.shape != (n,) * op.arity:
            raise ParseError(f"{where}: expected shape {(n,) * op.arity}, got {arr.shape}")
        tables[op.name] = arr.reshape(-1)
    return FiniteAlgebra(signature, tuple(str(x) for x in elements), tables, str(data.get("name", "")))


def semilattice_to_dict(s: JoinSemilattice) -> dict:
    return {"size": s.size, "join": s.join.tolist(), "least": s.least, "labels": list(s.labels)}


def parse_semilattice(source: Any, path: str = "") -> JoinSemilattice:
    data = load_json(source)
    size = _field(data, "size", path, int)
    join = _field(data, "join", path, list)
    where = f"{path}.join" if path else "join"
    table = _index_array(join, where, "a square array of indices")
    if table.shape != (size, size):
        raise ParseError(f"{where}: expected shape {(size, size)}, got {table.shape}")
    least = data.get("least")
    if least is not None and (not isinstance(least, int) or isinstance(least, bool)):
        raise ParseError(f"{path}.least: expected an index or null")
    s = JoinSemilattice(table, tuple(data.get("labels", ())), least)
    raise_on_errors(semilattice_diagnostics(s), ValidationError, where)
    if least is not None and least != s.least:
        raise ValidationError(f"{path}.least: declared {least}, the join table gives {s.least}")
    return s


def system_to_dict(d: DirectSystem) -> dict:
    return {
        "name": d.name,
        "index": semilattice_to_dict(d.index),
        "fibers": [algebra_to_dict(f) for f in d.fibers],
        "transitions": [{"from": i, "to": j, "map": list(m)} for (i, j), m in d.transitions.items() if i != j],
    }


def parse_system(source: Any, validate: bool = True) -> DirectSystem:
    data = load_json(source)
    index = parse_semilattice(_field(data, "index", "", dict), "index")
    fibers = [parse_algebra(f, f"fibers[{r}]") for r, f in enumerate(_field(data, "fibers", "", list))]
    transitions = {}
    for r, entry in enumerate(_field(data, "transitions", "", list)):
        where = f"transitions[{r}]"
        key = (_field(entry, "from", where, int), _field(entry, "to", where, int))
        if key in transitions:
            raise ParseError(f"{where}: duplicate map for {key}")
        transitions[key] = tuple(_ints(_field(entry, "map", where, list), f"{where}.map"))
    d = DirectSystem(index, tuple(fibers), transitions, str(data.get("name", "")))
    return require_valid(d) if validate else d


def partition_to_list(p: Partition) -> list[list[int]]:
    return [list(block) for block in p.blocks]


def parse_partition(source: Any, size: int, path: str = "theta") -> Partition:
    """Blocks as a list of lists; omitted elements form singleton blocks."""
    blocks = load_json(source)
    if not isinstance(blocks, list) or any(not isinstance(b, list) for b in blocks):
        raise ParseError(f"{path}: expected a list of blocks")
    listed = {x for b in blocks for x in _ints(b, path)}
    return Partition.from_blocks(size, [*blocks, *([x] for x in range(size) if x not in listed)])


def parse_pairs(source: Any, path: str = "pairs") -> list[tuple[int, int]]:
    data = load_json(source)
    if not isinstance(data, list) or any(not isinstance(p, list) or len(p) != 2 for p in data):
        raise ParseError(f"{path}: expected a list of [a, b] pairs")
    return [tuple(_ints(p, path)) for p in data]


def dump(value: Any) -> str:
    return canonical_json(value)


def write_json(value: Any, target: str | Path):
    Path(target).write_text(dump(value) + "\n", encoding="utf-8")
    logger.info(f"wrote {target}")


def systems_index(systems: Sequence[DirectSystem]) -> list[dict]:
    return [{"name": d.name, "index": d.index.size, "size": d.size, "signature": str(d.signature)} for d in systems]
