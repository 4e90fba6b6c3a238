#!/usr/bin/env python3
# coding: utf-8

# plonkalab - __init__.py

from algebra.core import (
    FiniteAlgebra,
    Homomorphism,
    Operation,
    Signature,
    check_homomorphism,
    congruence_closure,
    direct_product,
    extend_from_generators,
    generated_subalgebra,
    quotient_algebra,
    trivial_algebra,
)
from algebra.relations import Partition, Relation
from algebra.semilattice import JoinSemilattice, chain, diamond, leq
from algebra.terms import (
    App,
    Identity,
    Var,
    eval_term,
    is_regular,
    parse_identity,
    parse_term,
    render_term,
    satisfies_identity,
)
