"""Joint downlink/uplink capacity-rate region of a TDD link.

A fraction ``lam`` of each period carries the downlink (power ``p0/lam``
while on, ``p0`` on average). The child harvests ``eta*L*rho*p0`` on
average whatever ``lam`` is, pays ``pp`` for processing and spends the
rest, ``pu``, on the uplink during the remaining ``1 - lam``.

* optimum receiver: closed form through the W_{-1} Lambert branch;
* orthogonal receiver: bisection on the uplink rate around a convex
  minimisation of the master power in ``lam``;
* power-splitting receiver: annealing over ``lam`` for the downlink rate
  at a fixed uplink rate, cross-checked by a dense grid.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Iterable, List, Tuple

import numpy as np

from .downlink_region import CurveSample, ReceiverModel, RegionCurve, cap_energy, ps_max
from .errors import HarvestLinkError, InvalidLambda, RateInfeasible, SplitInfeasible
from .link_model import FEAS_RTOL, LinkParams, harvested_power
from .numerics import (AnnealSchedule, Branch, INV_E, anneal_maximize, bisect_root,
                       lambert_w, minimize_unimodal)
from .uplink_throughput import uplink_capacity

LOG2 = math.log(2.0)
_EXP_CAP = 700.0

# Default stop test for the orthogonal-receiver bisection, relative to p0.
STOP_RTOL = 1e-10
# A coarser absolute stop test for the uplink-rate bisection, in watts.
COARSE_STOP_ATOL = 1e-3


class Strategy(enum.Enum):
    OPTIMAL = "optimal"
    HALVING = "halving"


@dataclass(frozen=True)
class RatePair:
    rd: float
    ru: float

    def __post_init__(self):
        for name in ("rd", "ru"):
            v = getattr(self, name)
            if not (v >= 0 and math.isfinite(v)):
                raise HarvestLinkError(f"{name} must be finite and nonnegative, got {v!r}")


@dataclass(frozen=True)
class TddControls:
    """Time split ``lam``, energy power share ``rho`` and average uplink power ``pu``.

    The optimum receiver harvests the whole signal, so its ``rho`` is 1.
    """

    lam: float
    rho: float
    pu: float

    def as_dict(self) -> dict:
        return {"lambda": self.lam, "rho": self.rho}


@dataclass(frozen=True)
class Region3dSample:
    rd: float
    pr: float
    ru: float


# -- power accounting ---------------------------------------------------------

def _share_power(rate: float, share: float, bandwidth: float, noise_over_gain: float) -> float:
    """Average power that carries ``rate`` in a time share ``share`` of the period."""
    if rate == 0:
        return 0.0
    if share <= 0:
        return math.inf
    x = rate / (share * bandwidth) * LOG2
    if x > _EXP_CAP:
        return math.inf
    return share * noise_over_gain * math.expm1(x)


def downlink_power(p: LinkParams, rd: float, lam: float) -> float:
    """Master power whose information part supports ``rd`` in time share ``lam``."""
    return _share_power(rd, lam, p.bandwidth, p.sigma0_2 / p.path_gain)


def uplink_power(p: LinkParams, ru: float, lam: float) -> float:
    """Average child transmit power for ``ru`` in the uplink share ``1 - lam``."""
    return _share_power(ru, 1.0 - lam, p.bandwidth, p.sigma_up / p.path_gain)


def energy_power(p: LinkParams, ru: float, lam: float) -> float:
    """Master power whose harvest pays for ``ru`` plus processing."""
    return (uplink_power(p, ru, lam) + p.pp) / (p.eta * p.path_gain)


def orthogonal_required_power(p: LinkParams, rd: float, ru: float, lam: float) -> float:
    """Total master power the orthogonal receiver needs for ``(rd, ru)`` at split ``lam``."""
    if not 0.0 <= lam <= 1.0:
        raise InvalidLambda(f"lambda must lie in [0, 1], got {lam!r}")
    total = downlink_power(p, rd, lam) + energy_power(p, ru, lam)
    if not math.isfinite(total):
        raise InvalidLambda(f"required power diverges at lambda={lam!r}")
    return total


def min_orthogonal_power(p: LinkParams, rd: float, ru: float, tol: float = 1e-12) -> Tuple[float, float]:
    """``(lam, P)`` minimising the orthogonal receiver's required power (convex in ``lam``)."""
    return minimize_unimodal(lambda lam: downlink_power(p, rd, lam) + energy_power(p, ru, lam),
                             0.0, 1.0, tol=tol)


# -- region extents ------------------------------------------------------------

def ru_max(rx: ReceiverModel, p: LinkParams, p0: float) -> float:
    """Uplink rate with no downlink traffic: all power goes to harvesting."""
    return uplink_capacity(p, harvested_power(p, p0), include_pp=True)


def rd_max(rx: ReceiverModel, p: LinkParams, p0: float) -> float:
    """Downlink rate with no uplink traffic (whole period on the downlink)."""
    if rx is ReceiverModel.OPTIMUM:
        return p.bandwidth * math.log1p(p.path_gain * p0 / p.sigma0_2) / LOG2
    try:
        return cap_energy(rx, p, p0, 0.0)
    except HarvestLinkError as exc:
        raise RateInfeasible(str(exc)) from None


# -- optimum receiver -------------------------------------------------------------

def optimum_lambda_star(p: LinkParams, p0: float, rd: float) -> float:
    """Smallest downlink share that carries ``rd`` at power ``p0``.

    Writing ``x = 1/lam`` the tight downlink constraint is
    ``2**(rd*x/B) = A0*x + 1`` with ``A0 = L*p0/sigma0^2``, whose nonzero
    root is ``x = -W_{-1}(-u e^{-u}) / c - 1/A0`` with ``c = rd ln2 / B``
    and ``u = c/A0``.
    """
    if rd < 0:
        raise RateInfeasible("rd must be nonnegative")
    if rd == 0:
        return 0.0
    top = rd_max(ReceiverModel.OPTIMUM, p, p0)
    if rd > top * (1 + FEAS_RTOL):
        raise RateInfeasible(f"rd={rd:g} exceeds the downlink limit {top:g}")
    if rd >= top:
        return 1.0
    a0 = p.path_gain * p0 / p.sigma0_2
    c = rd * LOG2 / p.bandwidth
    u = c / a0
    z = -u * math.exp(-u)
    lam = math.nan
    if z + INV_E > 1e-12:
        w = lambert_w(Branch.SECONDARY, z)
        lam = 1.0 / (-w / c - 1.0 / a0)
    if not (0 < lam <= 1) or abs(downlink_power(p, rd, lam) - p0) > 1e-9 * p0:
        # ill-conditioned near the branch point: solve the tight constraint directly
        lam = bisect_root(lambda s: downlink_power(p, rd, s) - p0, 0.0, 1.0, tol=1e-16)
    return min(lam, 1.0)


def _optimum_solution(p: LinkParams, p0: float, rd: float) -> Tuple[float, TddControls]:
    lam = optimum_lambda_star(p, p0, rd)
    spare = harvested_power(p, p0) - p.pp
    if spare <= 0 or lam >= 1:
        return 0.0, TddControls(lam, 1.0, max(spare, 0.0))
    up = 1.0 - lam
    ru = up * p.bandwidth * math.log1p(p.path_gain * spare / (up * p.sigma_up)) / LOG2
    return ru, TddControls(lam, 1.0, spare)


def optimum_cap_rate(p: LinkParams, p0: float, rd: float) -> float:
    """Capacity-rate function C(rd) of the optimum receiver."""
    return _optimum_solution(p, p0, rd)[0]


# -- orthogonal receiver ------------------------------------------------------------

def _orthogonal_controls(p: LinkParams, p0: float, ru: float, lam: float) -> TddControls:
    pu = uplink_power(p, ru, lam)
    rho = (pu + p.pp) / (p.eta * p.path_gain * p0) if p0 > 0 else 1.0
    return TddControls(lam, min(max(rho, 0.0), 1.0), pu)


def orthogonal_cap_rate(p: LinkParams, p0: float, rd: float, *, stop_tol: float = None,
                        max_iter: int = 300) -> Tuple[float, TddControls]:
    """C(rd) of the orthogonal receiver by bisection on the uplink rate.

    Each step minimises the required master power over ``lam`` for the
    trial ``(rd, ru)`` and moves the bracket on whether that minimum
    exceeds ``p0``. Stops once ``|P(lam*) - p0| <= stop_tol`` (watts,
    default ``STOP_RTOL * p0``; ``COARSE_STOP_ATOL`` gives the
    coarser 1 mW test).
    """
    if rd < 0:
        raise RateInfeasible("rd must be nonnegative")
    tol = STOP_RTOL * p0 if stop_tol is None else stop_tol
    lam0, pmin0 = min_orthogonal_power(p, rd, 0.0)
    if pmin0 > p0 * (1 + FEAS_RTOL):
        raise RateInfeasible(f"rd={rd:g} needs {pmin0:g} W even with no uplink traffic")
    hi = ru_max(ReceiverModel.ORTHOGONAL, p, p0)
    if pmin0 >= p0 or hi == 0:
        return 0.0, _orthogonal_controls(p, p0, 0.0, lam0)
    lo = 0.0
    ru, lam = 0.0, lam0
    for _ in range(max_iter):
        ru = 0.5 * (lo + hi)
        lam, pmin = min_orthogonal_power(p, rd, ru)
        if pmin > p0:
            hi = ru
        else:
            lo = ru
        if abs(pmin - p0) <= tol or hi - lo <= 1e-14 * hi:
            break
    return ru, _orthogonal_controls(p, p0, ru, lam)


# -- power-splitting receiver ------------------------------------------------------------

def _split_rho(p: LinkParams, p0: float, ru: float, lam: float) -> float:
    return (uplink_power(p, ru, lam) + p.pp) / (p.eta * p.path_gain * p0)


def split_rho_of_lambda(p: LinkParams, p0: float, ru: float, lam: float) -> float:
    """Energy share that exactly funds uplink rate ``ru`` with downlink share ``lam``."""
    if not 0.0 <= lam < 1.0 and not (lam == 1.0 and ru == 0):
        raise InvalidLambda(f"lambda must lie in [0, 1), got {lam!r}")
    rho = _split_rho(p, p0, ru, lam)
    if rho > 1 + FEAS_RTOL:
        raise SplitInfeasible(f"uplink rate {ru:g} needs rho={rho:g} > 1 at lambda={lam:g}")
    return min(rho, 1.0)


def _split_rd(p: LinkParams, p0: float, ru: float, lam: float) -> float:
    """Downlink rate of the power-splitting receiver at split ``lam`` (``-inf`` if infeasible)."""
    rho = _split_rho(p, p0, ru, lam)
    if rho > 1 + FEAS_RTOL:
        return -math.inf
    if lam <= 0:
        return 0.0
    share = max(1.0 - rho, 0.0)
    if p.sigma_p2 == 0:
        snr = p.path_gain * p0 / (lam * p.sigma_a2)
    else:
        snr = p.path_gain * share * p0 / lam / (share * p.sigma_a2 + p.sigma_p2)
    return lam * p.bandwidth * math.log1p(snr) / LOG2


def split_downlink_rates(p: LinkParams, p0: float, ru: float, lams: np.ndarray) -> np.ndarray:
    """Vectorised :func:`_split_rd` over an array of splits."""
    lams = np.asarray(lams, dtype=float)
    L, B = p.path_gain, p.bandwidth
    up = 1.0 - lams
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        if ru > 0:
            x = ru / (up * B) * LOG2
            pu = np.where(x > _EXP_CAP, np.inf, up * p.sigma_up / L * np.expm1(np.minimum(x, _EXP_CAP)))
        else:
            pu = np.zeros_like(lams)
        rho = (pu + p.pp) / (p.eta * L * p0)
        share = np.clip(1.0 - rho, 0.0, None)
        if p.sigma_p2 == 0:
            snr = L * p0 / (lams * p.sigma_a2)
        else:
            snr = L * share * p0 / lams / (share * p.sigma_a2 + p.sigma_p2)
        rd = lams * B * np.log1p(snr) / LOG2
    rd = np.where(lams <= 0, 0.0, rd)
    return np.where(rho > 1 + FEAS_RTOL, -np.inf, rd)


def split_lambda_max(p: LinkParams, p0: float, ru: float) -> float:
    """Largest downlink share at which the harvest still funds uplink rate ``ru``."""
    rho0 = _split_rho(p, p0, ru, 0.0)
    if rho0 > 1 + FEAS_RTOL:
        raise RateInfeasible(f"ru={ru:g} exceeds the uplink limit {ru_max(ReceiverModel.POWER_SPLITTING, p, p0):g}")
    if ru == 0:
        return 1.0
    if rho0 >= 1:
        return 0.0
    return bisect_root(lambda lam: _split_rho(p, p0, ru, lam) - 1.0, 0.0, 1.0, tol=1e-15)


def _grid_argmax(f, values: np.ndarray, grid: np.ndarray, tol: float = 1e-13) -> Tuple[float, float]:
    """Refine the best grid point by golden section between its neighbours."""
    i = int(np.argmax(values))
    a = grid[max(i - 1, 0)]
    b = grid[min(i + 1, len(grid) - 1)]
    x, neg = minimize_unimodal(lambda s: -f(s), float(a), float(b), tol=tol)
    if -neg >= values[i]:
        return x, -neg
    return float(grid[i]), float(values[i])


def split_cap_rate(p: LinkParams, p0: float, ru: float, *,
                   schedule: AnnealSchedule = AnnealSchedule(),
                   grid_step: float = 1e-4) -> Tuple[float, TddControls]:
    """C(ru) of the power-splitting receiver: max downlink rate at uplink rate ``ru``.

    Runs annealing over ``lam`` and, independently, a grid with step
    ``grid_step``; both are polished and the better result is returned.
    """
    if ru < 0:
        raise RateInfeasible("ru must be nonnegative")
    lam_hi = split_lambda_max(p, p0, ru)

    def controls(lam):
        rho = min(_split_rho(p, p0, ru, lam), 1.0)
        return TddControls(lam, rho, max(harvested_power(p, p0) * rho - p.pp, 0.0))

    if lam_hi <= 0:
        return 0.0, controls(0.0)
    f = lambda lam: _split_rd(p, p0, ru, lam)
    a_lam, a_val = anneal_maximize(f, 0.0, lam_hi, schedule)
    n = max(2, math.ceil(lam_hi / grid_step))
    grid = np.linspace(0.0, lam_hi, n + 1)
    g_lam, g_val = _grid_argmax(f, split_downlink_rates(p, p0, ru, grid), grid)
    lam, val = (a_lam, a_val) if a_val >= g_val else (g_lam, g_val)
    return max(val, 0.0), controls(lam)


def _split_ru_at(p: LinkParams, p0: float, rd: float, lam: float) -> float:
    """Uplink rate of the power-splitting receiver carrying ``rd`` at split ``lam``."""
    if rd > 0 and lam <= 0:
        return -math.inf
    L = p.path_gain
    x = rd / (lam * p.bandwidth) * LOG2 if rd > 0 else 0.0
    if x > _EXP_CAP:
        return -math.inf
    snr_need = math.expm1(x)
    if p.sigma_p2 == 0:
        if rd > 0 and L * p0 / lam <= snr_need * p.sigma_a2:
            return -math.inf
        share = 0.0
    else:
        room = L * p0 / lam - snr_need * p.sigma_a2 if lam > 0 else math.inf
        if room <= 0:
            return -math.inf
        share = snr_need * p.sigma_p2 / room
    if share > 1 + FEAS_RTOL:
        return -math.inf
    pu = p.eta * L * (1.0 - min(share, 1.0)) * p0 - p.pp
    if pu < -FEAS_RTOL * p.pp:
        return -math.inf
    up = 1.0 - lam
    if up <= 0 or pu <= 0:
        return 0.0
    return up * p.bandwidth * math.log1p(L * pu / (up * p.sigma_up)) / LOG2


def _split_uplink_rates(p: LinkParams, p0: float, rd: float, lams: np.ndarray) -> np.ndarray:
    """Vectorised :func:`_split_ru_at`."""
    L, B = p.path_gain, p.bandwidth
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        if rd > 0:
            x = rd / (lams * B) * LOG2
            snr_need = np.where(x > _EXP_CAP, np.inf, np.expm1(np.minimum(x, _EXP_CAP)))
        else:
            snr_need = np.zeros_like(lams)
        room = L * p0 / lams - snr_need * p.sigma_a2
        if p.sigma_p2 == 0:
            share = np.zeros_like(lams)
            bad = (snr_need > 0) & ~(room > 0)
        else:
            share = np.where(snr_need > 0, snr_need * p.sigma_p2 / room, 0.0)
            bad = ~(room > 0) | (share > 1 + FEAS_RTOL)
        pu = p.eta * L * (1.0 - np.minimum(share, 1.0)) * p0 - p.pp
        bad |= pu < -FEAS_RTOL * p.pp
        up = 1.0 - lams
        ru = up * B * np.log1p(L * np.clip(pu, 0.0, None) / (up * p.sigma_up)) / LOG2
        ru = np.where(up <= 0, 0.0, ru)
    bad |= (rd > 0) & (lams <= 0)
    return np.where(bad, -np.inf, ru)


def split_uplink_cap_rate(p: LinkParams, p0: float, rd: float,
                          grid_step: float = 1e-4) -> Tuple[float, TddControls]:
    """Max uplink rate of the power-splitting receiver at downlink rate ``rd``.

    The dual parameterisation of :func:`split_cap_rate`: for each ``lam``
    the split ``rho`` is set so the downlink carries exactly ``rd``; the
    leftover harvest feeds the uplink. Searched by grid plus polish.
    """
    if rd < 0:
        raise RateInfeasible("rd must be nonnegative")
    f = lambda lam: _split_ru_at(p, p0, rd, lam)
    grid = np.linspace(0.0, 1.0, math.ceil(1.0 / grid_step) + 1)
    vals = _split_uplink_rates(p, p0, rd, grid)
    if not np.isfinite(vals).any():
        raise RateInfeasible(f"rd={rd:g} is not achievable at p0={p0:g} W")
    lam, ru = _grid_argmax(f, vals, grid)
    return max(ru, 0.0), _split_controls_for_rd(p, p0, rd, lam, ru)


def _split_controls_for_rd(p, p0, rd, lam, ru) -> TddControls:
    pu = uplink_power(p, ru, lam) if lam < 1 else 0.0
    rho = min((pu + p.pp) / (p.eta * p.path_gain * p0), 1.0)
    return TddControls(lam, rho, pu)


# -- halving strategy --------------------------------------------------------------------

def halving_cap_rate(rx: ReceiverModel, p: LinkParams, p0: float, rd: float) -> Tuple[float, TddControls]:
    """Max uplink rate at downlink rate ``rd`` with the period split in half."""
    lam = 0.5
    if rx is ReceiverModel.POWER_SPLITTING:
        ru = _split_ru_at(p, p0, rd, lam)
        if ru == -math.inf:
            raise RateInfeasible(f"rd={rd:g} is not achievable with a halved period")
        return ru, _split_controls_for_rd(p, p0, rd, lam, ru)
    need = downlink_power(p, rd, lam)
    if rx is ReceiverModel.OPTIMUM:
        if need > p0 * (1 + FEAS_RTOL):
            raise RateInfeasible(f"rd={rd:g} is not achievable with a halved period")
        rho, spare = 1.0, harvested_power(p, p0) - p.pp
    else:
        rho = 1.0 - need / p0
        spare = p.eta * p.path_gain * rho * p0 - p.pp
        if spare < -FEAS_RTOL * max(p.pp, 1e-300):
            raise RateInfeasible(f"rd={rd:g} is not achievable with a halved period")
    spare = max(spare, 0.0)
    ru = lam * p.bandwidth * math.log1p(p.path_gain * spare / (lam * p.sigma_up)) / LOG2
    return ru, TddControls(lam, min(max(rho, 0.0), 1.0), spare)


def halving_rd_max(rx: ReceiverModel, p: LinkParams, p0: float) -> float:
    lam, L, B = 0.5, p.path_gain, p.bandwidth
    if rx is ReceiverModel.OPTIMUM:
        info = p0
        return lam * B * math.log1p(L * info / (lam * p.sigma0_2)) / LOG2
    rho = p.pp / (p.eta * L * p0)
    if rho > 1 + FEAS_RTOL:
        raise RateInfeasible("processing power exceeds the harvest")
    share = max(1.0 - rho, 0.0)
    if rx is ReceiverModel.ORTHOGONAL:
        snr = L * share * p0 / (lam * p.sigma0_2)
    elif p.sigma_p2 == 0:
        snr = L * p0 / (lam * p.sigma_a2)
    else:
        snr = L * share * p0 / lam / (share * p.sigma_a2 + p.sigma_p2)
    return lam * B * math.log1p(snr) / LOG2


# -- unified views -----------------------------------------------------------------------

def cap_rate(rx: ReceiverModel, p: LinkParams, p0: float, rd: float,
             strategy: Strategy = Strategy.OPTIMAL) -> Tuple[float, TddControls]:
    """C(rd) for any receiver and strategy, returning the optimising controls."""
    if strategy is Strategy.HALVING:
        return halving_cap_rate(rx, p, p0, rd)
    if rx is ReceiverModel.OPTIMUM:
        return _optimum_solution(p, p0, rd)
    if rx is ReceiverModel.ORTHOGONAL:
        return orthogonal_cap_rate(p, p0, rd)
    return split_uplink_cap_rate(p, p0, rd)


def joint_boundary(rx: ReceiverModel, p: LinkParams, p0: float, n_points: int,
                   strategy: Strategy = Strategy.OPTIMAL, seed: int = 0) -> RegionCurve:
    """Sample the (rd, ru) boundary at ``n_points`` points.

    The power-splitting receiver with the optimal strategy is swept in the
    uplink rate and annealed per point with seed ``seed ^ index``; every
    other case is swept uniformly in the downlink rate.
    """
    if n_points < 2:
        raise HarvestLinkError("n_points must be at least 2")
    samples: List[CurveSample] = []
    if rx is ReceiverModel.POWER_SPLITTING and strategy is Strategy.OPTIMAL:
        top = ru_max(rx, p, p0)
        for i in range(n_points):
            ru = top * i / (n_points - 1)
            rd, ctl = split_cap_rate(p, p0, ru, schedule=AnnealSchedule(seed=seed ^ i))
            samples.append(CurveSample(rd, ru, ctl.as_dict()))
        samples.sort(key=lambda s: s.x)
    else:
        top = rd_max(rx, p, p0) if strategy is Strategy.OPTIMAL else halving_rd_max(rx, p, p0)
        for i in range(n_points):
            rd = top * i / (n_points - 1)
            ru, ctl = cap_rate(rx, p, p0, rd, strategy)
            samples.append(CurveSample(rd, ru, ctl.as_dict()))
    curve = RegionCurve("rd", "ru", "bit/s", "bit/s", samples, rx, p0, p, strategy.value)
    curve.validate()
    return curve


def region3d(rx: ReceiverModel, p: LinkParams, p0: float, pr_grid: Iterable[float],
             rd_grid: Iterable[float], strategy: Strategy = Strategy.OPTIMAL) -> List[Region3dSample]:
    """Max uplink rate over a grid of (residual power, downlink rate) pairs.

    The residual power ``pr`` is an extra constant drain on the harvest,
    added to ``pp`` in the energy balance only. Pairs outside the region
    are omitted.
    """
    out = []
    rd_grid = list(rd_grid)
    limit = ps_max(p, p0)
    for pr in pr_grid:
        if pr < 0:
            raise HarvestLinkError("residual power must be nonnegative")
        if pr > limit * (1 + FEAS_RTOL):
            continue
        q = replace(p, pp=p.pp + min(pr, limit))
        for rd in rd_grid:
            if rd < 0:
                raise HarvestLinkError("rd must be nonnegative")
            try:
                ru, _ = cap_rate(rx, q, p0, rd, strategy)
            except RateInfeasible:
                continue
            out.append(Region3dSample(rd, pr, ru))
    return out
