from __future__ import annotations

from .program import (
    Block,
    ExecutionCursor,
    InstructionCost,
    Workload,
    block_cost,
    dump_workload,
    generate_workload,
    remaining_cost,
    split_block,
)

__all__ = [
    "Block",
    "ExecutionCursor",
    "InstructionCost",
    "Workload",
    "block_cost",
    "dump_workload",
    "generate_workload",
    "remaining_cost",
    "split_block",
]
