"""Capacity-energy tradeoff of the downlink for three receiver designs.

For a stored-power target ``ps`` the child must harvest ``ps + pp``; the
remaining received power carries information. The optimum receiver gets
both from the same signal, the orthogonal receiver separates them in
time, and the power-splitting receiver splits the RF signal before the
processing-stage noise is added.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .errors import HarvestLinkError, InfeasibleStorage
from .link_model import FEAS_RTOL, LinkParams, harvested_power

LOG2 = math.log(2.0)


class ReceiverModel(enum.Enum):
    OPTIMUM = "optimum"
    ORTHOGONAL = "orthogonal"
    POWER_SPLITTING = "split"


@dataclass(frozen=True)
class CurveSample:
    x: float
    y: float
    controls: dict = field(default_factory=dict)


@dataclass
class RegionCurve:
    """Ordered boundary samples of a two-dimensional achievable region."""

    x_name: str
    y_name: str
    x_unit: str
    y_unit: str
    samples: List[CurveSample]
    receiver: ReceiverModel
    p0: float
    params: LinkParams
    strategy: Optional[str] = None

    @property
    def xs(self) -> np.ndarray:
        return np.array([s.x for s in self.samples])

    @property
    def ys(self) -> np.ndarray:
        return np.array([s.y for s in self.samples])

    def validate(self) -> None:
        """Raise if the tradeoff-boundary invariants do not hold."""
        xs, ys = self.xs, self.ys
        if len(xs) > 1:
            if not np.all(np.diff(xs) > 0):
                raise HarvestLinkError("curve x values are not strictly increasing")
            # allow rounding noise on flat stretches
            slack = 1e-9 * max(1.0, float(np.max(np.abs(ys))))
            if not np.all(np.diff(ys) <= slack):
                raise HarvestLinkError("curve y values increase along the boundary")
        for s in self.samples:
            for k, v in s.controls.items():
                if not 0.0 <= v <= 1.0:
                    raise HarvestLinkError(f"control {k}={v!r} outside [0, 1]")


def ps_max(p: LinkParams, p0: float) -> float:
    """Largest storable power: harvest minus processing, clamped at zero."""
    return max(0.0, harvested_power(p, p0) - p.pp)


def _check_storage(p: LinkParams, p0: float, ps: float) -> None:
    if ps < 0:
        raise InfeasibleStorage("stored power must be nonnegative")
    need = ps + p.pp
    have = harvested_power(p, p0)
    if need > have * (1 + FEAS_RTOL) + 1e-300:
        raise InfeasibleStorage(f"storing {ps:g} W needs {need:g} W but only {have:g} W is harvested")


def rho_for_storage(p: LinkParams, p0: float, ps: float) -> float:
    """Power share sent to the energy branch so that exactly ``ps`` is stored."""
    _check_storage(p, p0, ps)
    if p0 == 0:
        return 1.0
    rho = (ps + p.pp) / (p.eta * p.path_gain * p0)
    return min(rho, 1.0)


def _split_snr(p: LinkParams, info_power: float, rho: float) -> float:
    """SNR of the information branch of the power-splitting receiver."""
    share = 1.0 - rho
    if p.sigma_p2 == 0:
        # rho -> 1 limit is well defined when processing noise vanishes
        return p.path_gain * info_power / p.sigma_a2
    return p.path_gain * share * info_power / (share * p.sigma_a2 + p.sigma_p2)


def cap_energy(rx: ReceiverModel, p: LinkParams, p0: float, ps: float) -> float:
    """Capacity-energy function C(ps): max downlink rate when ``ps`` is stored."""
    _check_storage(p, p0, ps)
    B, L = p.bandwidth, p.path_gain
    if rx is ReceiverModel.OPTIMUM:
        snr = L * p0 / p.sigma0_2
    elif rx is ReceiverModel.ORTHOGONAL:
        rho = rho_for_storage(p, p0, ps)
        snr = L * (1.0 - rho) * p0 / p.sigma0_2
    elif rx is ReceiverModel.POWER_SPLITTING:
        rho = rho_for_storage(p, p0, ps)
        snr = _split_snr(p, p0, rho)
    else:
        raise TypeError(rx)
    return B * math.log1p(max(snr, 0.0)) / LOG2


def downlink_boundary(rx: ReceiverModel, p: LinkParams, p0: float, n_points: int) -> RegionCurve:
    """Sample C(ps) at ``n_points`` uniformly spaced stored powers on [0, ps_max]."""
    if n_points < 2:
        raise HarvestLinkError("n_points must be at least 2")
    top = ps_max(p, p0)
    grid = [0.0] if top == 0 else [top * i / (n_points - 1) for i in range(n_points)]
    samples = []
    for ps in grid:
        ctrl = {} if rx is ReceiverModel.OPTIMUM else {"rho": rho_for_storage(p, p0, ps)}
        samples.append(CurveSample(ps, cap_energy(rx, p, p0, ps), ctrl))
    curve = RegionCurve("ps", "rd", "W", "bit/s", samples, rx, p0, p)
    curve.validate()
    return curve
