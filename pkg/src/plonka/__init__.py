#!/usr/bin/env python3
# coding: utf-8

# plonkalab - __init__.py

from plonka.congruence import (
    AlgebraCongruence,
    SystemCongruence,
    all_congruences,
    all_system_congruences,
    audit_congruence,
    cg,
    cg_plonka,
    check_factor_theorem,
    check_si_theorem,
    from_system_congruence,
    generated_system_congruence,
    is_subdirectly_irreducible,
    monolith,
    quotient_plonka,
    to_system_congruence,
)
from plonka.free import BooleanFreeProvider, FreeFiberProvider, free_count, free_plonka
from plonka.sums import PartitionFunction, PlonkaSum, compose, decompose, extend_hom
from plonka.system import DirectSystem, SystemMorphism, star, validate_system
