"""Uplink throughput of a child powered by a random harvest stream.

The closed forms give the throughput limit when only the mean harvest
matters. :func:`simulate_save_and_transmit` runs the save-then-transmit
policy slot by slot and reports how close a finite horizon gets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import HarvestLinkError, InvalidFraction, NonpositiveSlots
from .link_model import LinkParams

LOG2 = math.log(2.0)

ARRIVAL_KINDS = ("constant", "exponential", "bernoulli", "uniform")
_ALIASES = {"exp": "exponential", "const": "constant", "bern": "bernoulli", "unif": "uniform"}


@dataclass(frozen=True)
class ArrivalProcess:
    """I.i.d. per-slot harvested power with a given mean.

    ``shape`` is the on-probability for ``bernoulli`` (the power in an on
    slot is ``mean/shape``) and the half-width relative to the mean for
    ``uniform`` (values in ``mean*(1 +/- shape)``).
    """

    kind: str
    mean: float
    seed: int = 0
    shape: Optional[float] = None

    def __post_init__(self):
        kind = _ALIASES.get(self.kind, self.kind)
        if kind not in ARRIVAL_KINDS:
            raise HarvestLinkError(f"unknown arrival kind {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        if not (self.mean >= 0 and math.isfinite(self.mean)):
            raise HarvestLinkError("arrival mean must be finite and nonnegative")
        if kind == "bernoulli" and self.shape is not None and not 0 < self.shape <= 1:
            raise HarvestLinkError("bernoulli on-probability must lie in (0, 1]")
        if kind == "uniform" and self.shape is not None and not 0 <= self.shape <= 1:
            raise HarvestLinkError("uniform half-width must lie in [0, 1]")

    def sample(self, n: int) -> np.ndarray:
        rng = np.random.default_rng(self.seed)
        m = self.mean
        if self.kind == "constant":
            return np.full(n, m)
        if self.kind == "exponential":
            return rng.exponential(m, n) if m > 0 else np.zeros(n)
        if self.kind == "bernoulli":
            q = 0.5 if self.shape is None else self.shape
            return np.where(rng.random(n) < q, m / q, 0.0)
        w = 1.0 if self.shape is None else self.shape
        return rng.uniform(m * (1 - w), m * (1 + w), n)

    @classmethod
    def parse(cls, spec: str, seed: int = 0) -> "ArrivalProcess":
        """Build from ``"kind:mean"`` or ``"kind:mean:shape"``."""
        parts = spec.split(":")
        if len(parts) not in (2, 3):
            raise HarvestLinkError(f"arrival spec {spec!r} is not KIND:MEAN")
        try:
            mean = float(parts[1])
            shape = float(parts[2]) if len(parts) == 3 else None
        except ValueError as exc:
            raise HarvestLinkError(f"arrival spec {spec!r}: {exc}") from None
        return cls(parts[0].strip().lower(), mean, seed, shape)


@dataclass
class EnergyTrace:
    """Per-slot record of one save-and-transmit run (powers in W, battery in J)."""

    slot_length: float
    harvested: np.ndarray
    transmitted: np.ndarray
    drain: np.ndarray
    battery: np.ndarray
    initial_battery: float
    achieved_rate: float
    outage_slots: int
    tx_power: float

    @property
    def min_battery(self) -> float:
        return float(min(self.initial_battery, self.battery.min()))

    def balance_residual(self) -> float:
        """Largest deviation from the slot-to-slot energy balance."""
        prev = np.concatenate([[self.initial_battery], self.battery[:-1]])
        expect = prev + (self.harvested - self.transmitted - self.drain) * self.slot_length
        return float(np.max(np.abs(expect - self.battery)))


def uplink_capacity(p: LinkParams, ps: float, include_pp: bool = True) -> float:
    """Uplink rate sustainable from an average harvest of ``ps`` watts."""
    avail = ps - (p.pp if include_pp else 0.0)
    if avail <= 0:
        return 0.0
    return p.bandwidth * math.log1p(p.path_gain * avail / p.sigma_up) / LOG2


def constant_rate_power(p: LinkParams, c: float) -> float:
    """Average child power (transmit plus processing) needed for a constant rate ``c``."""
    if c < 0:
        raise HarvestLinkError("rate must be nonnegative")
    return p.sigma_up / p.path_gain * math.expm1(c / p.bandwidth * LOG2) + p.pp


def simulate_save_and_transmit(p: LinkParams, arrivals: ArrivalProcess, n_slots: int,
                               save_fraction: float = 0.01, slot_length: float = 1.0,
                               initial_battery: float = 0.0) -> EnergyTrace:
    """Bank energy for the first slots, then transmit at constant power.

    The transmit power is ``mean - pp``. The radio draws ``pp`` only in
    slots where it transmits. A slot that cannot cover ``tx + pp`` from
    the battery plus that slot's harvest is skipped and counted as an
    outage.
    """
    if n_slots < 1:
        raise NonpositiveSlots("n_slots must be at least 1")
    if not 0 <= save_fraction < 1:
        raise InvalidFraction("save_fraction must lie in [0, 1)")
    if not slot_length > 0:
        raise HarvestLinkError("slot_length must be positive")

    harvested = arrivals.sample(n_slots)
    n_save = math.ceil(save_fraction * n_slots)
    pt = max(arrivals.mean - p.pp, 0.0)
    per_slot = (pt + p.pp) * slot_length
    transmitting = pt > 0

    transmitted = np.zeros(n_slots)
    drain = np.zeros(n_slots)
    battery = np.empty(n_slots)
    e = float(initial_battery)
    outages = 0
    ok_slots = 0
    dt = slot_length
    for n, h in enumerate(harvested.tolist()):
        e += h * dt
        if n >= n_save and transmitting:
            if e >= per_slot * (1 - 1e-12):
                transmitted[n] = pt
                drain[n] = p.pp
                e = max(e - per_slot, 0.0)
                ok_slots += 1
            else:
                outages += 1
        battery[n] = e

    rate = ok_slots / n_slots * (p.bandwidth * math.log1p(p.path_gain * pt / p.sigma_up) / LOG2)
    return EnergyTrace(slot_length, harvested, transmitted, drain, battery,
                       float(initial_battery), rate, outages, pt)
