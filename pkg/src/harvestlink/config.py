"""Flat ``key = value`` link configuration files."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional, Union

from .errors import ConfigError, HarvestLinkError
from .link_model import LinkParams

REQUIRED = ("d_m", "h", "alpha", "bandwidth_hz", "sigma_a2_w", "sigma_p2_w", "pp_w", "p0_w")
OPTIONAL = ("eta", "uplink_noise_w", "g_db", "g_linear")


@dataclass(frozen=True)
class Config:
    link: LinkParams
    p0: float


def parse_config(text: str) -> Dict[str, float]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out: Dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, _, value = (s.strip() for s in line.partition("="))
        if key not in REQUIRED and key not in OPTIONAL:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            out[key] = float(value)
        except ValueError:
            raise ConfigError(f"line {lineno}: {key} is not a number: {value!r}") from None
    return out


def config_from_mapping(kv: Dict[str, float]) -> Config:
    missing = [k for k in REQUIRED if k not in kv]
    if missing:
        raise ConfigError(f"missing keys: {', '.join(missing)}")
    if ("g_db" in kv) == ("g_linear" in kv):
        raise ConfigError("give exactly one of g_db and g_linear")
    g = 10 ** (kv["g_db"] / 10) if "g_db" in kv else kv["g_linear"]
    noise: Optional[float] = kv.get("uplink_noise_w")
    try:
        link = LinkParams(g=g, h=kv["h"], d=kv["d_m"], alpha=kv["alpha"], eta=kv.get("eta", 1.0),
                          bandwidth=kv["bandwidth_hz"], sigma_a2=kv["sigma_a2_w"],
                          sigma_p2=kv["sigma_p2_w"], pp=kv["pp_w"], uplink_noise=noise)
    except HarvestLinkError as exc:
        raise ConfigError(str(exc)) from None
    if not (kv["p0_w"] >= 0 and math.isfinite(kv["p0_w"])):
        raise ConfigError("p0_w must be finite and nonnegative")
    return Config(link, kv["p0_w"])


def load_config(path: Union[str, Path]) -> Config:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    return config_from_mapping(parse_config(text))
