"""Minimum master transmit power for a target pair of rates."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List

from .downlink_region import ReceiverModel
from .errors import HarvestLinkError, RateInfeasible, TargetInfeasible
from .joint_region import (RatePair, Strategy, TddControls, _split_ru_at, _split_controls_for_rd,
                           downlink_power, energy_power, min_orthogonal_power,
                           orthogonal_required_power, ru_max, split_cap_rate, uplink_power)
from .link_model import FEAS_RTOL, LinkParams
from .numerics import bisect_root


@dataclass(frozen=True)
class PlanResult:
    p0_min: float
    controls: TddControls
    receiver: ReceiverModel
    strategy: Strategy


@dataclass(frozen=True)
class SavingsRow:
    receiver: ReceiverModel
    strategy: Strategy
    p0_min: float
    saving: float  # fraction of the baseline power saved


def _orthogonal_plan(p: LinkParams, target: RatePair, lam: float, power: float) -> TddControls:
    pu = uplink_power(p, target.ru, lam)
    rho = (pu + p.pp) / (p.eta * p.path_gain * power) if power > 0 else 1.0
    return TddControls(lam, min(rho, 1.0), pu)


def _optimum_lambda(p: LinkParams, target: RatePair) -> float:
    # downlink need falls and harvest need rises with lam; the minimax sits at the crossing
    gap = lambda lam: downlink_power(p, target.rd, lam) - energy_power(p, target.ru, lam)
    if gap(0.0) <= 0:
        return 0.0
    if gap(1.0) >= 0:
        return 1.0
    # tiny downlink rates cross at tiny lam, so search in log(lam)
    floor = -700.0
    if gap(math.exp(floor)) <= 0:
        return math.exp(floor)
    return math.exp(bisect_root(lambda s: gap(math.exp(s)), floor, 0.0, tol=1e-15))


def _bisect_power(feasible, lo: float, hi: float, rtol: float = 1e-11) -> float:
    """Smallest power in ``(lo, hi]`` accepted by the monotone test ``feasible``."""
    for _ in range(200):
        if feasible(hi):
            break
        lo, hi = hi, 2.0 * hi
    else:
        raise TargetInfeasible("no feasible transmit power found")
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    return hi


def _split_feasible(p: LinkParams, target: RatePair, strategy: Strategy):
    def ok(p0: float) -> bool:
        if p0 <= 0:
            return False
        if strategy is Strategy.HALVING:
            return _split_ru_at(p, p0, target.rd, 0.5) >= target.ru
        if target.ru > ru_max(ReceiverModel.POWER_SPLITTING, p, p0) * (1 + FEAS_RTOL):
            return False
        try:
            rd, _ = split_cap_rate(p, p0, target.ru)
        except RateInfeasible:
            return False
        return rd >= target.rd
    return ok


def min_power(rx: ReceiverModel, strategy: Strategy, p: LinkParams, target: RatePair) -> PlanResult:
    """Smallest master power ``p0`` at which ``target`` lies in the achievable region."""
    if not isinstance(target, RatePair):
        target = RatePair(*target)
    if p.path_gain <= 0:
        raise TargetInfeasible("zero path gain")

    if rx is ReceiverModel.OPTIMUM:
        lam = 0.5 if strategy is Strategy.HALVING else _optimum_lambda(p, target)
        power = max(downlink_power(p, target.rd, lam), energy_power(p, target.ru, lam))
        ctl = TddControls(lam, 1.0, uplink_power(p, target.ru, lam))
    elif rx is ReceiverModel.ORTHOGONAL:
        if strategy is Strategy.HALVING:
            lam, power = 0.5, orthogonal_required_power(p, target.rd, target.ru, 0.5)
        else:
            lam, power = min_orthogonal_power(p, target.rd, target.ru)
        ctl = _orthogonal_plan(p, target, lam, power)
    elif rx is ReceiverModel.POWER_SPLITTING:
        # the optimum receiver bounds the power from below, the orthogonal one from above
        lo = min_power(ReceiverModel.OPTIMUM, strategy, p, target).p0_min
        hi = min_power(ReceiverModel.ORTHOGONAL, strategy, p, target).p0_min
        power = _bisect_power(_split_feasible(p, target, strategy), lo * (1 - 1e-9), hi)
        if strategy is Strategy.HALVING:
            ctl = _split_controls_for_rd(p, power, target.rd, 0.5, target.ru)
        else:
            ctl = split_cap_rate(p, power, target.ru)[1]
    else:
        raise TypeError(rx)

    if not math.isfinite(power):
        raise TargetInfeasible(f"target {target} needs unbounded power")
    return PlanResult(power, ctl, rx, strategy)


def savings_report(p: LinkParams, target: RatePair) -> List[SavingsRow]:
    """Power needed by each receiver/strategy and its saving over orthogonal halving."""
    if not isinstance(target, RatePair):
        target = RatePair(*target)
    base = min_power(ReceiverModel.ORTHOGONAL, Strategy.HALVING, p, target).p0_min
    rows = []
    for rx in (ReceiverModel.ORTHOGONAL, ReceiverModel.POWER_SPLITTING, ReceiverModel.OPTIMUM):
        for st in (Strategy.HALVING, Strategy.OPTIMAL):
            pw = min_power(rx, st, p, target).p0_min
            rows.append(SavingsRow(rx, st, pw, 1.0 - pw / base))
    return rows


def saving(rows: List[SavingsRow], better: tuple, worse: tuple) -> float:
    """Fraction of power ``better`` saves relative to ``worse``; each is ``(receiver, strategy)``."""
    pick = {(r.receiver, r.strategy): r.p0_min for r in rows}
    try:
        return 1.0 - pick[better] / pick[worse]
    except KeyError as exc:
        raise HarvestLinkError(f"no row for {exc.args[0]}") from None
