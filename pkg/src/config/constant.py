#!/usr/local/bin/python3
# coding: utf-8


class ReportText:

    validate_ok = "System is a valid semilattice direct system."

    validate_failed = "System failed validation with {} diagnostic(s):"

    compose = """
Płonka sum over {} index element(s), {} element(s) in total.
Fibers (index: size): {}
"""

    decompose = """
Decomposition into {} fiber(s) over the index semilattice:
{}
"""

    congruences = """
Con(A) has {} element(s); Con(system) has {} element(s).
Bijection theta -> (C_theta, theta_ii) is {}.
"""

    free = """
Free algebra on {} generator(s) in the regularization of {}.
Predicted size: {}
Actual size:    {}
"""

    si = """
Subdirectly irreducible: {}
Monolith: {}
"""

    star_si = """
star(B) subdirectly irreducible: {}
B subdirectly irreducible and without absorbing element: {}
Theorem holds: {}
"""


class Severity:
    ERROR = "error"
    WARNING = "warning"
