from __future__ import annotations

import math
import pathlib
from dataclasses import dataclass
from typing import Literal

import numpy as np

from src.core.errors import ContractViolation, DomainError
from src.core.storage import write_text
from src.core.types import Mode
from src.energy.capacitor import PlatformCosts

ParallelBy = Literal["instructions", "blocks"]


@dataclass(frozen=True)
class InstructionCost:
    time: float
    energy: float

    def __post_init__(self) -> None:
        if self.time <= 0 or self.energy <= 0:
            raise DomainError("instruction time and energy must be positive")

    @classmethod
    def from_platform(cls, time: float, costs: PlatformCosts) -> "InstructionCost":
        return cls(time=time, energy=time * costs.p_active_1c)


@dataclass(frozen=True)
class Block:
    id: int
    parallelizable: bool
    instruction_count: int
    cost: InstructionCost

    def __post_init__(self) -> None:
        if self.instruction_count <= 0:
            raise DomainError(f"block {self.id} must hold at least one instruction")


@dataclass(frozen=True)
class Workload:
    blocks: tuple[Block, ...]
    total_instructions: int

    def __post_init__(self) -> None:
        counted = sum(b.instruction_count for b in self.blocks)
        if counted != self.total_instructions:
            raise DomainError(
                f"total_instructions={self.total_instructions} but blocks hold {counted}"
            )

    @classmethod
    def of(cls, blocks: list[Block]) -> "Workload":
        total = sum(b.instruction_count for b in blocks)
        return cls(blocks=tuple(blocks), total_instructions=total)

    @property
    def parallel_instructions(self) -> int:
        return sum(b.instruction_count for b in self.blocks if b.parallelizable)


@dataclass(frozen=True)
class ExecutionCursor:
    block_index: int = 0
    instructions_done_in_block: int = 0

    def is_at_block_start(self) -> bool:
        return self.instructions_done_in_block == 0

    def advance(self, instructions: int, workload: Workload) -> "ExecutionCursor":
        """Move forward inside the current block; rolls over at its end."""
        block = workload.blocks[self.block_index]
        done = self.instructions_done_in_block + instructions
        if done > block.instruction_count:
            raise ContractViolation(
                f"cursor overran block {block.id}: {done} > {block.instruction_count}"
            )
        if done == block.instruction_count:
            return ExecutionCursor(self.block_index + 1, 0)
        return ExecutionCursor(self.block_index, done)

    def finished(self, workload: Workload) -> bool:
        return self.block_index >= len(workload.blocks)

    def instructions_before(self, workload: Workload) -> int:
        return (
            sum(b.instruction_count for b in workload.blocks[: self.block_index])
            + self.instructions_done_in_block
        )


def _block_sizes(rng: np.random.Generator, total: int, mean_block_size: int) -> list[int]:
    lo = max(1, mean_block_size // 2)
    hi = max(lo, (3 * mean_block_size) // 2)
    sizes: list[int] = []
    remaining = total
    while remaining > 0:
        size = int(rng.integers(lo, hi, endpoint=True))
        size = min(size, remaining)
        sizes.append(size)
        remaining -= size
    return sizes


def _assign_parallel(
    rng: np.random.Generator, sizes: list[int], fraction: float, by: ParallelBy
) -> list[bool]:
    n = len(sizes)
    if fraction <= 0.0:
        return [False] * n
    if fraction >= 1.0:
        return [True] * n
    order = rng.permutation(n)
    flags = [False] * n
    if by == "blocks":
        for idx in order[: int(round(fraction * n))]:
            flags[int(idx)] = True
        return flags
    # greedy fill in shuffled order; a block is taken when it moves the share closer to target
    target = fraction * sum(sizes)
    acc = 0
    for idx in order:
        size = sizes[int(idx)]
        if abs(acc + size - target) <= abs(acc - target):
            flags[int(idx)] = True
            acc += size
    return flags


def generate_workload(
    seed: int,
    total_instructions: int,
    parallel_fraction: float,
    mean_block_size: int,
    cost: InstructionCost,
    parallel_by: ParallelBy = "instructions",
) -> Workload:
    if total_instructions <= 0:
        raise DomainError("total_instructions must be positive")
    if mean_block_size < 1:
        raise DomainError("mean_block_size must be at least 1")
    if not 0.0 <= parallel_fraction <= 1.0:
        raise DomainError("parallel_fraction must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    sizes = _block_sizes(rng, total_instructions, mean_block_size)
    flags = _assign_parallel(rng, sizes, parallel_fraction, parallel_by)
    blocks = [
        Block(id=i, parallelizable=flag, instruction_count=size, cost=cost)
        for i, (size, flag) in enumerate(zip(sizes, flags))
    ]
    return Workload(blocks=tuple(blocks), total_instructions=total_instructions)


def split_block(block: Block) -> tuple[int, int]:
    if not block.parallelizable:
        raise ContractViolation(f"block {block.id} is not parallelizable")
    half_a = math.ceil(block.instruction_count / 2)
    return half_a, block.instruction_count - half_a


def block_cost(
    instructions: int, mode: Mode, cost: InstructionCost, costs: PlatformCosts
) -> tuple[float, float]:
    """Uninterrupted (time, energy) to run ``instructions`` in ``mode``."""
    if instructions <= 0:
        return 0.0, 0.0
    if mode is Mode.SINGLE:
        return instructions * cost.time, instructions * cost.energy
    time = math.ceil(instructions / 2) * cost.time
    return time, time * costs.p_active_2c


def remaining_cost(
    cursor: ExecutionCursor, workload: Workload, mode: Mode, costs: PlatformCosts
) -> tuple[float, float]:
    if cursor.finished(workload):
        return 0.0, 0.0
    block = workload.blocks[cursor.block_index]
    left = block.instruction_count - cursor.instructions_done_in_block
    return block_cost(left, mode, block.cost, costs)


def dump_workload(workload: Workload, path: pathlib.Path) -> None:
    lines = ["id,parallelizable,count"]
    lines += [
        f"{b.id},{int(b.parallelizable)},{b.instruction_count}" for b in workload.blocks
    ]
    write_text(path, "\n".join(lines) + "\n")
