"""Network power and energy estimation from equipment economics.

Follows the index methodology: only rigs whose daily electricity cost per
TH/s stays within a profitability threshold of daily revenue per TH/s count;
the bounds come from the best and worst profitable rig, the best guess from
an equally-weighted basket of all of them.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import DataError, LeaksimError

HOURS_PER_YEAR = 8760  # no leap handling


class EmptyProfitableSetError(LeaksimError):
    """No equipment is profitable; power bounds are undefined and callers
    must not divide by an empty basket."""


@dataclass(frozen=True)
class Equipment:
    model: str
    efficiency_j_per_th: float

    def __post_init__(self):
        if not self.efficiency_j_per_th > 0:
            raise DataError(f"equipment {self.model!r} needs efficiency > 0")


@dataclass(frozen=True)
class NetworkParams:
    """One snapshot of the network-level inputs to the power model."""

    hashrate_ths: float
    subsidy_btc_per_block: float
    fees_btc_per_block: float
    btc_price_usd: float
    electricity_price_usd_per_kwh: float
    pue: float
    blocks_per_day: float = 144.0
    profitability_threshold: float = 1.0  # cost/revenue ratio ceiling

    def __post_init__(self):
        if not self.hashrate_ths > 0:
            raise DataError("hashrate_ths must be positive")
        if not self.btc_price_usd > 0:
            raise DataError("btc_price_usd must be positive")
        if not self.blocks_per_day > 0:
            raise DataError("blocks_per_day must be positive")
        if not self.profitability_threshold > 0:
            raise DataError("profitability_threshold must be positive")
        if self.subsidy_btc_per_block < 0 or self.fees_btc_per_block < 0:
            raise DataError("block rewards cannot be negative")
        if self.electricity_price_usd_per_kwh < 0:
            raise DataError("electricity price cannot be negative")
        if self.pue < 1.0:
            raise DataError(f"pue {self.pue} < 1")


@dataclass(frozen=True)
class PowerEstimate:
    lower_gw: float
    best_gw: float
    upper_gw: float
    annual_twh: float
    profitable_models: tuple[str, ...]

    def __post_init__(self):
        if not self.lower_gw <= self.best_gw <= self.upper_gw:
            raise DataError("power bounds must satisfy lower <= best <= upper")
        expected = self.best_gw * HOURS_PER_YEAR / 1000.0
        if abs(self.annual_twh - expected) > 1e-9 * max(abs(expected), 1.0):
            raise DataError(
                f"annual_twh {self.annual_twh!r} inconsistent with best_gw x 8.760 = {expected!r}"
            )


def revenue_per_ths_day(params: NetworkParams) -> float:
    """USD earned per (TH/s)-day by the average unit of hash rate."""
    reward_btc = params.subsidy_btc_per_block + params.fees_btc_per_block
    return params.blocks_per_day * reward_btc * params.btc_price_usd / params.hashrate_ths


def electricity_cost_per_ths_day(equipment: Equipment, params: NetworkParams) -> float:
    # J/TH is numerically W per (TH/s); W x 24 h / 1000 = kWh per day
    return equipment.efficiency_j_per_th * 24.0 * params.electricity_price_usd_per_kwh / 1000.0


def profitable_set(equipment: list[Equipment], params: NetworkParams) -> list[Equipment]:
    """Equipment whose cost/revenue ratio stays within the threshold."""
    if not equipment:
        raise DataError("equipment list is empty")
    revenue = revenue_per_ths_day(params)
    ceiling = params.profitability_threshold * revenue
    profitable = [eq for eq in equipment if electricity_cost_per_ths_day(eq, params) <= ceiling]
    if not profitable:
        raise EmptyProfitableSetError(
            f"no profitable equipment at revenue {revenue:.6g} USD/(TH/s)/day"
        )
    return profitable


def estimate_power(params: NetworkParams, equipment: list[Equipment]) -> PowerEstimate:
    """Lower/best/upper network power draw and annual energy.

    All three bounds scale the network hash rate by a rig efficiency and the
    PUE overhead; the basket average is unweighted.
    """
    profitable = profitable_set(equipment, params)
    efficiencies = [eq.efficiency_j_per_th for eq in profitable]
    mean_eff = sum(efficiencies) / len(efficiencies)
    # the mean lies in [min, max] mathematically; keep float drift from
    # breaking the bound ordering
    mean_eff = min(max(mean_eff, min(efficiencies)), max(efficiencies))
    watts = lambda eff: params.hashrate_ths * eff * params.pue  # noqa: E731
    lower_gw = watts(min(efficiencies)) / 1e9
    upper_gw = watts(max(efficiencies)) / 1e9
    best_gw = watts(mean_eff) / 1e9
    annual_twh = best_gw * HOURS_PER_YEAR / 1000.0
    return PowerEstimate(
        lower_gw=lower_gw,
        best_gw=best_gw,
        upper_gw=upper_gw,
        annual_twh=annual_twh,
        profitable_models=tuple(eq.model for eq in profitable),
    )
