#!/usr/bin/env python3
# coding: utf-8

# plonkalab - __init__.py

import json
from typing import Iterable, Sequence


def timeof_fmt(seconds: int | float):
    periods = [("d", 86400), ("h", 3600), ("m", 60), ("s", 1)]
    result = ""
    for period_name, period_seconds in periods:
        if seconds >= period_seconds:
            period_value, seconds = divmod(seconds, period_seconds)
            result += f"{int(period_value)}{period_name}"
    return result or f"{seconds * 1000:.0f}ms"


def format_blocks(blocks: Iterable[Sequence[int]], labels: Sequence[str] | None = None) -> str:
    # {a,b}|{c}
    def name(x):
        return labels[x] if labels is not None else str(x)

    return "|".join("{" + ",".join(name(x) for x in block) + "}" for block in blocks)


def canonical_json(value) -> str:
    return json.dumps(value, sort_keys=True, ensure_ascii=False, indent=2)


def aligned(rows: Sequence[Sequence[str]]) -> str:
    """Render rows as left-aligned text columns"""
    if not rows:
        return ""
    widths = [max(len(str(r[c])) for r in rows if c < len(r)) for c in range(max(len(r) for r in rows))]
    return "\n".join("  ".join(str(cell).ljust(widths[c]) for c, cell in enumerate(row)).rstrip() for row in rows)
