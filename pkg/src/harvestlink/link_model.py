"""Link constants and the elementary power and rate formulas.

All quantities are SI: watts, hertz, bits/s, meters. The same transmit
power drives both the harvesting path and the information path, so no
function here takes a signalling-format argument.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

from .errors import HarvestLinkError, NonpositiveNoise

# Relative slack used when a quantity should sit exactly on a feasibility
# boundary but lands a few ulps outside it.
FEAS_RTOL = 1e-12


@dataclass(frozen=True)
class LinkParams:
    """Physical constants of the master/child link.

    ``g`` and ``h`` are linear power gains, ``alpha`` the path-loss
    exponent, ``eta`` the RF-to-DC conversion efficiency, ``pp`` the
    child's processing power. ``sigma_a2`` and ``sigma_p2`` split the
    receiver noise into an RF part and a processing part. The master's
    receiver noise defaults to their sum.
    """

    g: float
    h: float
    d: float
    alpha: float
    eta: float
    bandwidth: float
    sigma_a2: float
    sigma_p2: float
    pp: float
    uplink_noise: Optional[float] = None

    def __post_init__(self):
        for name in ("g", "h", "d", "alpha", "eta", "bandwidth", "sigma_a2", "sigma_p2", "pp"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise HarvestLinkError(f"{name} must be finite, got {v!r}")
        if self.d <= 0:
            raise HarvestLinkError("distance must be positive")
        if self.bandwidth <= 0:
            raise HarvestLinkError("bandwidth must be positive")
        if not 0 < self.eta <= 1:
            raise HarvestLinkError("eta must lie in (0, 1]")
        if self.pp < 0:
            raise HarvestLinkError("processing power must be nonnegative")
        if self.sigma_a2 < 0 or self.sigma_p2 < 0:
            raise HarvestLinkError("noise powers must be nonnegative")
        if self.sigma_a2 + self.sigma_p2 <= 0:
            raise NonpositiveNoise("total noise power must be positive")
        if self.uplink_noise is not None and not (math.isfinite(self.uplink_noise) and self.uplink_noise > 0):
            raise NonpositiveNoise("uplink noise must be positive")
        if self.g <= 0 or self.h <= 0:
            raise HarvestLinkError("gains must be positive")
        if self.path_gain > 1:
            warnings.warn(f"path gain {self.path_gain:g} exceeds 1", stacklevel=3)

    @property
    def path_gain(self) -> float:
        """L = g*h / d**alpha."""
        return self.g * self.h / self.d**self.alpha

    @property
    def sigma0_2(self) -> float:
        return self.sigma_a2 + self.sigma_p2

    @property
    def sigma_up(self) -> float:
        return self.sigma0_2 if self.uplink_noise is None else self.uplink_noise


def _nonneg(name: str, x: float) -> float:
    if not (x >= 0 and math.isfinite(x)):
        raise HarvestLinkError(f"{name} must be finite and nonnegative, got {x!r}")
    return float(x)


def received_power(p: LinkParams, p0: float) -> float:
    return p.path_gain * _nonneg("p0", p0)


def harvested_power(p: LinkParams, p0: float) -> float:
    """Maximum average harvested power eta*L*p0."""
    return p.eta * received_power(p, p0)


def awgn_capacity(p: LinkParams, tx_power: float, noise: float) -> float:
    if not noise > 0:
        raise NonpositiveNoise(f"noise must be positive, got {noise!r}")
    snr = p.path_gain * _nonneg("tx_power", tx_power) / noise
    return p.bandwidth * math.log1p(snr) / math.log(2)


def min_tx_power_for_rate(p: LinkParams, r: float, noise: float) -> float:
    """Inverse of :func:`awgn_capacity` in the transmit power."""
    r = _nonneg("rate", r)
    return noise / p.path_gain * math.expm1(r / p.bandwidth * math.log(2))


def preset_far() -> LinkParams:
    """50 m link: 10 dB antennas, 1 mW noise split 0.8/0.2, 5 mW processing."""
    return LinkParams(g=10.0, h=1.0, d=50.0, alpha=2.0, eta=1.0, bandwidth=1e3,
                      sigma_a2=0.8e-3, sigma_p2=0.2e-3, pp=5e-3)


def preset_body_area() -> LinkParams:
    """2 m body-area link with unity antenna gain, otherwise as the far preset."""
    return LinkParams(g=1.0, h=1.0, d=2.0, alpha=2.0, eta=1.0, bandwidth=1e3,
                      sigma_a2=0.8e-3, sigma_p2=0.2e-3, pp=5e-3)
