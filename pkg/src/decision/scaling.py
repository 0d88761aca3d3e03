from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Union

from src.core.errors import DomainError
from src.core.types import Mode

UNCONDITIONAL_2C: Literal["unconditional-2C"] = "unconditional-2C"
Ratio = Union[float, Literal["unconditional-2C"]]


@dataclass(frozen=True)
class DecisionInputs:
    p_hat: float
    p_1c: float
    p_2c: float
    e_hm: float

    def __post_init__(self) -> None:
        if not self.p_1c < self.p_2c:
            raise DomainError("decision needs p_1c < p_2c")
        if self.e_hm <= 0:
            raise DomainError("decision needs e_hm > 0")


def case_of(inputs: DecisionInputs) -> int:
    if inputs.p_hat >= inputs.p_2c:
        return 0
    if inputs.p_hat < inputs.p_1c:
        return 1
    return 2


def case2_terms(inputs: DecisionInputs) -> tuple[float, float]:
    """(Th_1C, Th_2C) over one 2C discharge-and-recharge window."""
    e, p = inputs.e_hm, inputs.p_hat
    discharge = e / (inputs.p_2c - p)
    return discharge + e / p, 2 * discharge


def throughput_ratio(inputs: DecisionInputs) -> Ratio:
    case = case_of(inputs)
    if case == 0:
        return UNCONDITIONAL_2C
    if case == 1:
        # 2 * dt_2c / dt_1c with dt_mode = E / (P_mode - P̂); E cancels
        p = inputs.p_hat
        return 2 * (inputs.p_1c - p) / (inputs.p_2c - p)
    th_1c, th_2c = case2_terms(inputs)
    return th_2c / th_1c


def select_mode(inputs: DecisionInputs) -> Mode:
    ratio = throughput_ratio(inputs)
    if isinstance(ratio, str) or ratio >= 1:
        return Mode.DUAL
    return Mode.SINGLE
