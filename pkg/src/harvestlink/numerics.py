"""Scalar numerical kernels: Lambert W, golden section, bisection, annealing."""

from __future__ import annotations

import bisect
import enum
import math
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

from .errors import DomainError, InvalidInterval, NoSignChange

INV_E = math.exp(-1.0)
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0  # 0.618...


class Branch(enum.Enum):
    PRINCIPAL = 0
    SECONDARY = -1


def _branch_point_series(z: float, sign: float) -> float:
    # expansion of W around z = -1/e in p = sqrt(2(ez + 1))
    p = sign * math.sqrt(max(0.0, 2.0 * (math.e * z + 1.0)))
    return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p**3


def lambert_w(branch: Branch, z: float) -> float:
    """Real Lambert W, the inverse of ``w -> w*exp(w)``.

    The principal branch covers ``[-1/e, inf)`` with ``w >= -1``; the
    secondary branch covers ``[-1/e, 0)`` with ``w <= -1``. Values a few
    ulps below ``-1/e`` are snapped onto the branch point.
    """
    z = float(z)
    if not math.isfinite(z):
        raise DomainError(f"lambert_w needs a finite argument, got {z!r}")
    if z < -INV_E:
        if z < -INV_E - 1e-15:
            raise DomainError(f"z = {z!r} is below the branch point -1/e")
        z = -INV_E
    if branch is Branch.SECONDARY and z >= 0:
        raise DomainError("the secondary branch is only defined on [-1/e, 0)")
    if z == -INV_E:
        return -1.0
    if branch is Branch.PRINCIPAL and z == 0.0:
        return 0.0

    if branch is Branch.PRINCIPAL:
        if z < -0.25:
            w = _branch_point_series(z, 1.0)
        elif z < 3.0:
            w = math.log1p(z)
        else:
            lz = math.log(z)
            w = lz - math.log(lz)
    else:
        if z < -0.25:
            w = _branch_point_series(z, -1.0)
        else:
            l1 = math.log(-z)
            l2 = math.log(-l1)
            w = l1 - l2 + l2 / l1

    # Halley iteration
    for _ in range(64):
        ew = math.exp(w)
        f = w * ew - z
        wp1 = w + 1.0
        if wp1 == 0.0:
            break
        dw = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
        w -= dw
        if abs(dw) <= 1e-15 * (1.0 + abs(w)):
            break
    return w


def minimize_unimodal(f: Callable[[float], float], lo: float, hi: float,
                      tol: float = 1e-10, max_iter: int = 500) -> Tuple[float, float]:
    """Golden-section search for the minimum of a unimodal ``f`` on ``[lo, hi]``.

    Returns ``(argmin, min)``. The endpoints are compared at the end so a
    monotone ``f`` yields the boundary minimiser. ``f`` may return ``inf``
    at the endpoints.
    """
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi < lo:
        raise InvalidInterval(f"bad interval [{lo!r}, {hi!r}]")
    if not tol > 0:
        raise InvalidInterval("tol must be positive")
    a, b = lo, hi
    x1 = b - INV_PHI * (b - a)
    x2 = a + INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    it = 0
    while b - a > tol and it < max_iter:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - INV_PHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + INV_PHI * (b - a)
            f2 = f(x2)
        it += 1
    x, fx = (x1, f1) if f1 <= f2 else (x2, f2)
    for xe in (lo, hi):
        fe = f(xe)
        if fe < fx:
            x, fx = xe, fe
    return x, fx


def golden_iterations(width: float, tol: float) -> int:
    """Number of contractions golden section needs to shrink ``width`` to ``tol``."""
    if width <= tol:
        return 0
    return math.ceil(math.log(tol / width) / math.log(INV_PHI))


def bisect_root(f: Callable[[float], float], lo: float, hi: float,
                tol: float = 1e-12, max_iter: int = 200) -> float:
    """Root of a continuous ``f`` bracketed by ``[lo, hi]``.

    Only the sign of ``f`` is used, so infinite values at the bracket ends
    are fine.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if (flo > 0) == (fhi > 0) or math.isnan(flo) or math.isnan(fhi):
        raise NoSignChange(f"f({lo!r}) = {flo!r} and f({hi!r}) = {fhi!r} share a sign")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= tol or mid in (lo, hi):
            break
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class AnnealSchedule:
    t_initial: float = 1.0
    t_min: float = 1e-6
    ratio: float = 0.95
    seed: int = 0

    def __post_init__(self):
        if not self.t_initial > self.t_min > 0:
            raise ValueError("need t_initial > t_min > 0")
        if not 0 < self.ratio < 1:
            raise ValueError("cooling ratio must lie in (0, 1)")


def accept_move(de: float, temperature: float, draw: float) -> bool:
    """Metropolis rule: uphill always; downhill rejected iff exp(de/T) < draw."""
    if de >= 0:
        return True
    return not math.exp(de / temperature) < draw


def anneal_maximize(f: Callable[[float], float], lo: float, hi: float,
                    sched: AnnealSchedule = AnnealSchedule(), *,
                    polish: bool = True, polish_tol: float = 1e-12) -> Tuple[float, float]:
    """Maximise ``f`` on ``[lo, hi]`` by simulated annealing with uniform proposals.

    Every proposal is drawn uniformly from the whole interval and the
    temperature cools geometrically until it reaches ``t_min``. The
    best point seen is tracked; with ``polish`` it is refined by golden
    section between its nearest sampled neighbours, which brackets the
    maximiser whenever ``f`` is unimodal.
    """
    if hi < lo:
        raise InvalidInterval(f"bad interval [{lo!r}, {hi!r}]")
    rng = np.random.default_rng(sched.seed)
    width = hi - lo
    x = lo + width * rng.random()
    fx = f(x)
    best_x, best_f = x, fx
    seen = [x]
    t = sched.t_initial
    while t > sched.t_min:
        cand = lo + width * rng.random()
        fc = f(cand)
        seen.append(cand)
        if fc > best_f:
            best_x, best_f = cand, fc
        if accept_move(fc - fx, t, rng.random()):
            x, fx = cand, fc
        t *= sched.ratio

    if polish and width > 0:
        pts = sorted(set(seen) | {lo, hi})
        i = bisect.bisect_left(pts, best_x)
        a = pts[max(i - 1, 0)]
        b = pts[min(i + 1, len(pts) - 1)]
        xp, neg = minimize_unimodal(lambda s: -f(s), a, b, tol=max(polish_tol, 4e-16 * max(1.0, abs(b)))
                                    )
        if -neg > best_f:
            best_x, best_f = xp, -neg
    return best_x, best_f
