#!/usr/bin/env python3
# coding: utf-8

# plonkalab - stats_logger.py
# Resource usage logging for single command runs

import contextlib
import logging
import time

import psutil

from utils import timeof_fmt

logger = logging.getLogger(__name__)


def _process_stats() -> dict:
    proc = psutil.Process()
    memory = proc.memory_info()
    cpu = proc.cpu_times()
    return {"rss": memory.rss, "cpu": cpu.user + cpu.system}


def log_resource_usage(label: str, started: float | None = None):
    """Log memory and CPU time of the current process"""
    try:
        stats = _process_stats()
        elapsed = f", Wall: {timeof_fmt(time.perf_counter() - started)}" if started is not None else ""
        logger.info(
            f"Resource Stats - {label} - "
            f"Memory: {stats['rss'] / 1024**2:.1f}MB RSS, "
            f"CPU: {stats['cpu']:.2f}s{elapsed}"
        )
    except Exception as e:
        logger.error(f"Error logging resource stats: {e}")


@contextlib.contextmanager
def track_resources(label: str):
    started = time.perf_counter()
    logger.debug(f"{label} started")
    try:
        yield
    finally:
        log_resource_usage(label, started)
