from __future__ import annotations

from typing import TYPE_CHECKING

from src.core.types import Mode
from src.policies.adamica import AdamicaPolicy, AdamicaSetup
from src.policies.base import Policy
from src.policies.pearl import PearlConfig, PearlPolicy
from src.policies.rockclimb import RockClimbPolicy, RockClimbSetup

if TYPE_CHECKING:
    from src.core.config import SimulationConfig


def build_policy(config: "SimulationConfig") -> Policy:
    kind = config.policy
    if kind.name == "pearl":
        return PearlPolicy(
            PearlConfig(
                setting=kind.setting,
                thresholds=config.thresholds,
                spec=config.capacitor,
                jit_guard=config.jit_guard,
                jit_collapse=config.jit_collapse,
            )
        )
    if kind.name == "adamica":
        # only V_H of this set is watched; the backup level comes from params
        return AdamicaPolicy(
            AdamicaSetup(
                setting=kind.setting, params=config.adamica, thresholds=config.base_thresholds
            )
        )
    return RockClimbPolicy(
        RockClimbSetup(
            mode=Mode.parse(kind.setting),
            params=config.rockclimb,
            thresholds=config.thresholds,
        )
    )
