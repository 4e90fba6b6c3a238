#!/usr/bin/env python3
# coding: utf-8

# plonkalab - dot.py
# Graphviz text for index semilattices, congruence lattices and systems

from typing import Sequence

from algebra.relations import Partition
from algebra.semilattice import JoinSemilattice, hasse_covers
from plonka.congruence import lattice_covers
from plonka.system import DirectSystem
from utils import format_blocks


def _quote(text: str) -> str:
    return '"' + str(text).replace("\\", "\\\\").replace('"', '\\"') + '"'


def _graph(name: str, nodes: Sequence[str], edges: Sequence[tuple[int, int]], extra: Sequence[str] = ()) -> str:
    lines = [f"digraph {_quote(name)} {{", "  rankdir=BT;"]
    lines += [f"  n{k} [label={_quote(label)}];" for k, label in enumerate(nodes)]
    lines += [f"  n{a} -> n{b};" for a, b in edges]
    lines += [f"  {line}" for line in extra]
    lines.append("}")
    return "\n".join(lines) + "\n"


def semilattice_dot(s: JoinSemilattice, name: str = "index") -> str:
    """Hasse diagram, least element at the bottom."""
    return _graph(name, s.labels, hasse_covers(s))


def lattice_dot(partitions: Sequence[Partition], labels: Sequence[str] | None = None, name: str = "Con") -> str:
    nodes = [format_blocks(p.blocks, labels) for p in partitions]
    return _graph(name, nodes, lattice_covers(partitions))


def system_dot(d: DirectSystem) -> str:
    """Index covers with one cluster per fiber and the transition maps as edge labels."""
    covers = hasse_covers(d.index)
    extra = []
    for i, fiber in enumerate(d.fibers):
        extra.append(f"subgraph cluster_{i} {{ label={_quote(d.index.labels[i])}; n{i}; }}")
    labelled = []
    for a, b in covers:
        image = ",".join(d.fibers[b].labels[x] for x in d.transitions[(a, b)])
        labelled.append(f"n{a} -> n{b} [label={_quote(image)}];")
    nodes = [f"{d.index.labels[i]}: {{{','.join(f.labels)}}}" for i, f in enumerate(d.fibers)]
    return _graph(d.name or "system", nodes, [], [*labelled, *extra])
