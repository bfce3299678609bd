"""Example problems, each runnable bare or under a rewrite schedule."""

from __future__ import annotations

from functools import lru_cache

from ..errors import ConfigError
from .base import DECISION, FUNCTION, ProblemInstance
from .binary_sum import BinarySum, build_pr, build_pr_scanner
from .matrices import MatrixPair, build_p2, build_p3, build_p5, build_p6
from .ones import CountInput, build_p4, build_p4_scanner
from .sat import build_p1

BUILDERS = {
    "pr": build_pr,
    "pr-scanner": build_pr_scanner,
    "p1": build_p1,
    "p2": build_p2,
    "p3": build_p3,
    "p4": build_p4,
    "p4-scanner": build_p4_scanner,
    "p5": build_p5,
    "p6": build_p6,
}


@lru_cache(maxsize=None)
def get_problem(name: str) -> ProblemInstance:
    """Problem by id; built machines are immutable, so one copy is shared."""
    try:
        return BUILDERS[name.lower()]()
    except KeyError:
        raise ConfigError(f"unknown problem {name!r}; choose from {', '.join(BUILDERS)}") from None


__all__ = [
    "BUILDERS",
    "BinarySum",
    "CountInput",
    "DECISION",
    "FUNCTION",
    "MatrixPair",
    "ProblemInstance",
    "build_p1",
    "build_p2",
    "build_p3",
    "build_p4",
    "build_p4_scanner",
    "build_p5",
    "build_p6",
    "build_pr",
    "build_pr_scanner",
    "get_problem",
]
