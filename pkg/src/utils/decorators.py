"""
Decorators guarding the exhaustive enumerations with size caps
"""
import functools
import logging
from typing import Callable

from config import algebra_cap, semilattice_cap, SYSTEM_CAP

from .error_handling import SizeCapExceeded

_CAPS: dict[str, Callable[[int | None], int]] = {
    "algebra": algebra_cap,
    "semilattice": semilattice_cap,
    "system": lambda cap: cap if cap is not None else SYSTEM_CAP,
}


def size_capped(kind: str, measure: Callable = lambda subject: subject.size):
    """Reject subjects larger than the configured cap before any work starts.

    The wrapped function must accept a ``cap`` keyword; it is forwarded untouched.
    """

    def decorator(func):
        @functools.wraps(func)
        def wrapper(subject, *args, cap: int | None = None, **kwargs):
            limit = _CAPS[kind](cap)
            size = measure(subject)
            if size > limit:
                logging.info(f"{func.__name__} refused a {kind} of size {size} (cap {limit})")
                raise SizeCapExceeded(f"{func.__name__}: {kind} has {size} elements, cap is {limit}")
            return func(subject, *args, cap=cap, **kwargs)

        return wrapper

    return decorator
