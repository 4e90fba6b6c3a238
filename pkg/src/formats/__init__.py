#!/usr/bin/env python3
# coding: utf-8

# plonkalab - __init__.py

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
    system_to_dict,
)
