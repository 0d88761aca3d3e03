from __future__ import annotations

from src.core.types import Mode

from .scaling import (
    UNCONDITIONAL_2C,
    DecisionInputs,
    case_of,
    case2_terms,
    select_mode,
    throughput_ratio,
)

__all__ = [
    "Mode",
    "UNCONDITIONAL_2C",
    "DecisionInputs",
    "case_of",
    "case2_terms",
    "select_mode",
    "throughput_ratio",
]
