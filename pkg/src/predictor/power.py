from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

from src.core.errors import ConfigError, DomainError
from src.core.types import Mode
from src.energy.capacitor import PlatformCosts


@dataclass(frozen=True)
class PredictorConfig:
    alpha: float = 0.2
    p_clamp_max: float = 0.1

    def __post_init__(self) -> None:
        if not 0 < self.alpha <= 1:
            raise ConfigError("alpha must lie in (0, 1]", field="predictor.alpha")
        if self.p_clamp_max <= 0:
            raise ConfigError("must be positive", field="predictor.p_clamp_max_mw")


@dataclass(frozen=True)
class PredictorState:
    p_hat: float
    dt_1c: float = 0.0
    dt_2c: float = 0.0
    t_mid_hit: Optional[float] = None
    timer_deadline: float = 0.0
    # discharge began exactly at V_H, so the active-power estimate applies
    anchored: bool = False
    # active-power estimate from the last V_M hit, waiting for its charging partner
    pending_estimate: Optional[float] = None

    @classmethod
    def initial(cls, costs: PlatformCosts) -> "PredictorState":
        return cls(p_hat=costs.p_active_1c)

    def add_active_time(self, mode: Mode, dt: float) -> "PredictorState":
        if mode is Mode.SINGLE:
            return replace(self, dt_1c=self.dt_1c + dt)
        return replace(self, dt_2c=self.dt_2c + dt)


def _clamp(value: float, cfg: PredictorConfig) -> float:
    return min(max(value, 0.0), cfg.p_clamp_max)


def estimate_active_power(
    dt_1c: float, dt_2c: float, p_1c: float, p_2c: float, e_hm: float
) -> float:
    total = dt_1c + dt_2c
    if total <= 0:
        raise DomainError("active-power estimate needs a positive active time")
    return max(0.0, (dt_1c * p_1c + dt_2c * p_2c - e_hm) / total)


def estimate_charging_power(charge_duration: float, e_hm: float) -> float:
    if charge_duration <= 0:
        raise DomainError(f"charge duration must be positive, got {charge_duration}")
    return e_hm / charge_duration


def estimate_off_charging_power(gap: float, duration: float) -> float:
    """Recharge from the off floor to V_H after a power failure."""
    return estimate_charging_power(duration, gap)


def ewma_update(
    state: PredictorState, est_1: float, est_2: float, cfg: PredictorConfig
) -> PredictorState:
    p_hat = (1 - cfg.alpha) * state.p_hat + cfg.alpha * (est_1 + est_2) / 2
    return replace(state, p_hat=_clamp(p_hat, cfg), dt_1c=0.0, dt_2c=0.0)


def timer_period(mode: Mode, e_hm: float, costs: PlatformCosts) -> float:
    return e_hm / costs.p_active(mode)


def optimistic_bump(
    state: PredictorState,
    mode: Mode,
    costs: PlatformCosts,
    cfg: PredictorConfig,
    *,
    e_hm: float,
) -> PredictorState:
    """Timer expired with no V_M hit, so ambient covers ``mode``: step P̂ toward its power.

    Never moves P̂ down; at or above ``p_active(mode)`` the estimate is left alone.
    """
    stepped = (1 - cfg.alpha) * state.p_hat + cfg.alpha * costs.p_active(mode)
    p_hat = _clamp(max(state.p_hat, stepped), cfg)
    return replace(
        state,
        p_hat=p_hat,
        timer_deadline=state.timer_deadline + timer_period(mode, e_hm, costs),
    )
