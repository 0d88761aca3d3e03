import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.core.errors import ContractViolation, DomainError
from src.core.types import Mode
from src.workload.program import (
    Block,
    ExecutionCursor,
    Workload,
    block_cost,
    dump_workload,
    generate_workload,
    remaining_cost,
    split_block,
)
from tests.helpers import COST, blocks, config_with


def _share(workload: Workload) -> float:
    return workload.parallel_instructions / workload.total_instructions


def test_generate_all_or_nothing_parallel():
    full = generate_workload(42, 1_000_000, 1.0, 10_000, COST)
    none = generate_workload(42, 1_000_000, 0.0, 10_000, COST)
    assert all(b.parallelizable for b in full.blocks)
    assert not any(b.parallelizable for b in none.blocks)


def test_generate_eighty_percent_share():
    workload = generate_workload(7, 1_000_000, 0.8, 10_000, COST)
    assert 0.78 <= _share(workload) <= 0.82


def test_generate_by_block_count():
    workload = generate_workload(7, 1_000_000, 0.8, 10_000, COST, parallel_by="blocks")
    flagged = sum(b.parallelizable for b in workload.blocks)
    assert flagged == round(0.8 * len(workload.blocks))


def test_generate_is_seed_deterministic():
    a = generate_workload(3, 200_000, 0.5, 5_000, COST)
    b = generate_workload(3, 200_000, 0.5, 5_000, COST)
    c = generate_workload(4, 200_000, 0.5, 5_000, COST)
    assert a == b
    assert a != c


@settings(max_examples=50, deadline=None)
@given(
    seed=st.integers(0, 2**32 - 1),
    total=st.integers(1, 300_000),
    fraction=st.floats(0.0, 1.0),
    mean=st.integers(100, 20_000),
)
def test_generate_preserves_total(seed, total, fraction, mean):
    workload = generate_workload(seed, total, fraction, mean, COST)
    assert sum(b.instruction_count for b in workload.blocks) == total
    assert [b.id for b in workload.blocks] == list(range(len(workload.blocks)))


def test_generate_rejects_bad_arguments():
    with pytest.raises(DomainError):
        generate_workload(1, 0, 0.5, 100, COST)
    with pytest.raises(DomainError):
        generate_workload(1, 100, 1.5, 100, COST)
    with pytest.raises(DomainError):
        generate_workload(1, 100, 0.5, 0, COST)


def test_split_block():
    assert split_block(Block(0, True, 1000, COST)) == (500, 500)
    assert split_block(Block(0, True, 1001, COST)) == (501, 500)
    assert split_block(Block(0, True, 1, COST)) == (1, 0)
    with pytest.raises(ContractViolation):
        split_block(Block(0, False, 1000, COST))


def test_remaining_cost_per_mode():
    costs = config_with().costs
    workload = blocks((1000, True))
    start = ExecutionCursor()
    time, energy = remaining_cost(start, workload, Mode.SINGLE, costs)
    assert time == pytest.approx(10e-3)
    assert energy == pytest.approx(100e-6)
    time, energy = remaining_cost(start, workload, Mode.DUAL, costs)
    assert time == pytest.approx(5e-3)
    assert energy == pytest.approx(100e-6)
    end = start.advance(1000, workload)
    assert remaining_cost(end, workload, Mode.SINGLE, costs) == (0.0, 0.0)


def test_dual_core_odd_block_rounds_up():
    costs = config_with().costs
    time, _ = block_cost(1001, Mode.DUAL, COST, costs)
    assert time == pytest.approx(501 * 10e-6)


def test_cursor_rolls_over_and_counts():
    workload = blocks((100, False), (50, True))
    cursor = ExecutionCursor().advance(60, workload)
    assert cursor == ExecutionCursor(0, 60)
    assert cursor.instructions_before(workload) == 60
    cursor = cursor.advance(40, workload)
    assert cursor.is_at_block_start()
    assert cursor.block_index == 1
    cursor = cursor.advance(50, workload)
    assert cursor.finished(workload)
    assert cursor.instructions_before(workload) == 150


def test_cursor_cannot_overrun_a_block():
    workload = blocks((100, False))
    with pytest.raises(ContractViolation):
        ExecutionCursor().advance(101, workload)


def test_workload_total_must_match():
    with pytest.raises(DomainError):
        Workload(blocks=(Block(0, False, 10, COST),), total_instructions=11)


def test_dump_workload(tmp_path):
    out = tmp_path / "w.csv"
    dump_workload(blocks((10, False), (20, True)), out)
    assert out.read_text().splitlines() == ["id,parallelizable,count", "0,0,10", "1,1,20"]
