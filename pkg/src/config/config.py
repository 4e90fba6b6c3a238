#!/usr/local/bin/python3
# coding: utf-8

import os


def get_env(name: str, default=None):
    val = os.getenv(name, default)
    if val is None:
        return None
    if isinstance(val, str):
        if val.lower() == "true":
            return True
        if val.lower() == "false":
            return False
        if val.isdigit():
            return int(val)
    return val


# size caps
ALGEBRA_CAP: int = get_env("ALGEBRA_CAP", 12)
SEMILATTICE_CAP: int = get_env("SEMILATTICE_CAP", 10)
SYSTEM_CAP: int = get_env("SYSTEM_CAP", 10)  # total elements for the system-congruence oracle
SYSTEM_INDEX_CAP: int = get_env("SYSTEM_INDEX_CAP", 4)
FREE_BOOLEAN_CAP: int = get_env("FREE_BOOLEAN_CAP", 2)  # CLI default for --generators
FREE_INDEX_CAP: int = get_env("FREE_INDEX_CAP", 6)

# single override for the algebra and semilattice caps
PLONKA_CAP = get_env("PLONKA_CAP")

# randomized commands
PLONKA_SEED: int = get_env("PLONKA_SEED", 20240601)

LOG_LEVEL = get_env("LOG_LEVEL", "INFO")
SHOW_PROGRESS = get_env("SHOW_PROGRESS", False)

# For advance users
# Tables are flat row-major arrays of length n**k; memory grows fast past this arity.
ARITY_CAP = 4
# B_3 already has 256 elements.
BOOLEAN_PROVIDER_LIMIT = 3


def algebra_cap(cap: int | None = None) -> int:
    if cap is not None:
        return cap
    override = get_env("PLONKA_CAP", PLONKA_CAP)
    return override if isinstance(override, int) else ALGEBRA_CAP


def semilattice_cap(cap: int | None = None) -> int:
    if cap is not None:
        return cap
    override = get_env("PLONKA_CAP", PLONKA_CAP)
    return override if isinstance(override, int) else SEMILATTICE_CAP
