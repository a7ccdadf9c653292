"""Acceptance criteria, each checked at its stated tolerance and time budget.

Run under pytest for the summary block, or directly with
``python tests/test_acceptance.py`` for one PASS/FAIL line per criterion.
"""

import math
import sys
import time
from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))
import oracles  # noqa: E402

from harvestlink.downlink_region import ReceiverModel, cap_energy, ps_max  # noqa: E402
from harvestlink.green_planner import min_power, saving, savings_report  # noqa: E402
from harvestlink.joint_region import (RatePair, Strategy, downlink_power, joint_boundary,  # noqa: E402
                                      optimum_cap_rate, optimum_lambda_star, orthogonal_cap_rate,
                                      orthogonal_required_power, rd_max, ru_max, split_cap_rate)
from harvestlink.link_model import awgn_capacity, preset_body_area, preset_far  # noqa: E402
from harvestlink.numerics import AnnealSchedule  # noqa: E402
from harvestlink.uplink_throughput import (ArrivalProcess, simulate_save_and_transmit,  # noqa: E402
                                           uplink_capacity)

A = preset_far()
B = preset_body_area()
CA = oracles.link_a()
P0 = 10.0
OPT, ORTH, SPLIT = ReceiverModel.OPTIMUM, ReceiverModel.ORTHOGONAL, ReceiverModel.POWER_SPLITTING
RECEIVERS = (OPT, ORTH, SPLIT)


def rel_err(x, ref):
    return abs(x - ref) / abs(ref)


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


def check_1():
    cap_ref = 1000 * math.log2(41)   # 5357.55 bit/s
    ps_ref = 0.035
    best = math.inf
    for _ in range(5):
        with Timer() as t:
            cap = awgn_capacity(A, P0, A.sigma0_2)
            top = ps_max(A, P0)
        best = min(best, t.elapsed)
    ok = rel_err(cap, cap_ref) <= 1e-6 and rel_err(top, ps_ref) <= 1e-6 and best < 1e-3
    return ok, f"capacity {cap:.6f} bit/s, ps_max {top:.6g} W, {best * 1e6:.1f} us"


def check_2():
    with Timer() as t:
        orth0 = cap_energy(ORTH, A, P0, 0.0)
        split0 = cap_energy(SPLIT, A, P0, 0.0)
        opt_vals = [cap_energy(OPT, A, P0, ps) for ps in (0.0, 0.01, 0.035)]
        grid = np.linspace(0.0, ps_max(A, P0), 512)
        rows = [[cap_energy(rx, A, P0, ps) for rx in (ORTH, SPLIT, OPT)] for ps in grid]
    split_ref = oracles.split_energy_rate_grid(CA, P0, 0.0)
    nested = all(o <= s * (1 + 1e-12) + 1e-9 and s <= m * (1 + 1e-12) for o, s, m in rows)
    ok = (rel_err(orth0, 1000 * math.log2(36)) <= 1e-6
          and rel_err(split0, split_ref) <= 1e-6
          and all(rel_err(v, 1000 * math.log2(41)) <= 1e-6 for v in opt_vals)
          and nested and t.elapsed < 1.0)
    return ok, (f"orthogonal {orth0:.2f}, split {split0:.3f} (grid {split_ref:.3f}), "
                f"optimum {opt_vals[0]:.2f}, nested at 512 points: {nested}, {t.elapsed:.3f} s")


def check_3():
    top = rd_max(OPT, A, P0)
    rds = [top * i / 101 for i in range(1, 101)]
    with Timer() as t:
        lams = [optimum_lambda_star(A, P0, rd) for rd in rds]
        rates = [optimum_cap_rate(A, P0, rd) for rd in rds]
    dlam = max(abs(l - oracles.lambda_star_grid(CA, P0, rd)) for l, rd in zip(lams, rds))
    drate = max(rel_err(r, oracles.optimum_rate_grid(CA, P0, rd)) for r, rd in zip(rates, rds))
    ok = dlam <= 1e-4 and drate <= 1e-3 and t.elapsed < 5.0
    return ok, f"max |dlambda| {dlam:.2e}, max rate error {drate:.2e}, {t.elapsed:.3f} s"


def _second_difference_check(n=10_000, seed=2024):
    rng = np.random.default_rng(seed)
    worst, checked = math.inf, 0
    for rd, ru, lam in zip(rng.uniform(0, 5000, n), rng.uniform(0, 500, n), rng.uniform(0.05, 0.95, n)):
        # convex functions have nonnegative second differences at every step,
        # so a wide step keeps rounding far below the threshold
        h = 0.01 * min(lam, 1 - lam)
        try:
            lo = orthogonal_required_power(A, rd, ru, lam - h)
            mid = orthogonal_required_power(A, rd, ru, lam)
            hi = orthogonal_required_power(A, rd, ru, lam + h)
        except ValueError:
            continue  # overflowed to an infinite power
        worst = min(worst, (lo - 2 * mid + hi) / (h * h))
        checked += 1
    return worst, checked


def _symbolic_form_check():
    sympy = pytest.importorskip("sympy")
    lam, a0, b0 = sympy.symbols("lambda A0 B0", positive=True)
    f = a0 * lam * (sympy.exp(b0 / lam) - 1)
    claimed = a0 * b0 ** 2 / lam ** 3 * sympy.exp(b0 / lam)
    symbolic_ok = sympy.simplify(sympy.diff(f, lam, 2) - claimed) == 0
    # the closed form against a numeric second difference of the downlink term
    worst = 0.0
    for rd, x in ((800.0, 0.3), (2000.0, 0.5), (3500.0, 0.8)):
        av, bv = A.sigma0_2 / A.path_gain, rd * math.log(2) / A.bandwidth
        h = 1e-4
        num = (downlink_power(A, rd, x - h) - 2 * downlink_power(A, rd, x) + downlink_power(A, rd, x + h)) / h**2
        exact = float(claimed.subs({a0: av, b0: bv, lam: x}))
        worst = max(worst, rel_err(num, exact))
    return symbolic_ok, worst


def check_4():
    with Timer() as t:
        worst, checked = _second_difference_check()
    symbolic_ok, form_err = _symbolic_form_check()
    ok = worst >= -1e-9 and checked >= 9000 and symbolic_ok and form_err <= 1e-6 and t.elapsed < 1.0
    return ok, (f"min second difference {worst:.3e} over {checked} triples, closed form "
                f"{'matches' if symbolic_ok else 'differs'} (numeric error {form_err:.1e}), {t.elapsed:.3f} s")


def check_5():
    top = rd_max(ORTH, A, P0)
    rds = [top * i / 127 for i in range(128)]
    with Timer() as t:
        ru2000, _ = orthogonal_cap_rate(A, P0, 2000.0)
        curve = [orthogonal_cap_rate(A, P0, rd)[0] for rd in rds]
    nested = oracles.orthogonal_rate_nested(CA, P0, 2000.0)
    worst = 0.0
    for rd, ru in zip(rds, curve):
        ref = oracles.orthogonal_rate_lambda_grid(CA, P0, rd)
        ref = 0.0 if ref is None else ref
        # the last point is exactly zero on both sides
        worst = max(worst, abs(ru - ref) / ref if ref > 0 else abs(ru))
    ok = abs(ru2000 - nested) <= 2.0 and worst <= 1e-3 and t.elapsed < 30.0
    return ok, (f"C(2000) = {ru2000:.3f} vs nested grid {nested:.0f}, 128-point max error "
                f"{worst:.2e}, {t.elapsed:.2f} s")


def check_6():
    top = ru_max(SPLIT, A, P0)
    rus = [top * i / 31 for i in range(32)]
    with Timer() as t:
        first = [split_cap_rate(A, P0, ru, schedule=AnnealSchedule(seed=i)) for i, ru in enumerate(rus)]
    again = [split_cap_rate(A, P0, ru, schedule=AnnealSchedule(seed=i)) for i, ru in enumerate(rus)]
    identical = repr(first) == repr(again)
    worst = 0.0
    for ru, (rd, _) in zip(rus, first):
        ref = oracles.split_rate_grid(CA, P0, ru)
        worst = max(worst, abs(rd - ref) / ref if ref > 0 else abs(rd))
    ok = worst <= 1e-3 and identical and t.elapsed < 30.0
    return ok, f"max error {worst:.2e} at 32 points, repeat identical: {identical}, {t.elapsed:.2f} s"


def check_7():
    closed = uplink_capacity(A, 0.04)
    rates, violations = [], 0
    with Timer() as t:
        for n in (10**3, 10**4, 10**5, 10**6):
            tr = simulate_save_and_transmit(A, ArrivalProcess("exponential", 0.04, seed=42), n, 0.01)
            violations += int(tr.min_battery < 0) + int(tr.balance_residual() > 1e-9 * tr.harvested.sum())
            rates.append(tr.achieved_rate)
    inversions = sum(b < a for a, b in zip(rates, rates[1:]))
    ok = rates[-1] >= 0.95 * closed and violations == 0 and inversions <= 1 and t.elapsed < 10.0
    return ok, (f"rates {', '.join(f'{r:.2f}' for r in rates)} vs {closed:.2f}, "
                f"{violations} causality violations, {inversions} inversions, {t.elapsed:.2f} s")


def check_8():
    target = RatePair(2000.0, 3000.0)
    with Timer() as t:
        half = min_power(ORTH, Strategy.HALVING, B, target).p0_min
        orth = min_power(ORTH, Strategy.OPTIMAL, B, target).p0_min
        opt = min_power(OPT, Strategy.OPTIMAL, B, target).p0_min
    s1, s2 = 1 - orth / half, 1 - opt / orth
    ok = 0.34 <= s1 <= 0.42 and 0.36 <= s2 <= 0.42 and t.elapsed < 1.0
    return ok, f"optimal vs halving {s1:.1%}, optimum vs orthogonal {s2:.1%}, {t.elapsed:.3f} s"


def check_9():
    with Timer() as t:
        far = []
        for k in (1, 2, 10):
            q = replace(A, g=A.g / k)  # path gain L0/k
            far.append(ru_max(OPT, q, P0) / rd_max(OPT, q, P0))
        near = {}
        for rx in RECEIVERS:
            near[rx] = []
            for k in (1, 2, 10):
                q = replace(B, g=B.g / k)
                near[rx].append(ru_max(rx, q, 1.0) / rd_max(rx, q, 1.0))
    dec = lambda xs: all(b < a for a, b in zip(xs, xs[1:]))
    ok = dec(far) and all(dec(v) for v in near.values()) and t.elapsed < 1.0
    return ok, (f"50 m optimum ratios {', '.join(f'{r:.4f}' for r in far)}; 2 m all receivers "
                f"decreasing: {all(dec(v) for v in near.values())}, {t.elapsed:.3f} s")


def check_10():
    worst = 0.0
    with Timer() as t:
        for rx in RECEIVERS:
            curve = joint_boundary(rx, A, P0, 64)
            for s in curve.samples:
                got = min_power(rx, Strategy.OPTIMAL, A, RatePair(s.x, s.y)).p0_min
                worst = max(worst, rel_err(got, P0))
    ok = worst <= 1e-4 and t.elapsed < 60.0
    return ok, f"max relative error {worst:.2e} over 192 points, {t.elapsed:.2f} s"


CRITERIA = {
    1: ("downlink baseline", check_1),
    2: ("capacity-energy endpoints and nesting", check_2),
    3: ("closed-form downlink share", check_3),
    4: ("convexity of the orthogonal power", check_4),
    5: ("orthogonal bisection", check_5),
    6: ("annealed split search", check_6),
    7: ("save-and-transmit simulator", check_7),
    8: ("green-system savings", check_8),
    9: ("doubly near-far", check_9),
    10: ("region/planner duality", check_10),
}


def run(num):
    name, fn = CRITERIA[num]
    ok, detail = fn()
    return ok, f"[{'PASS' if ok else 'FAIL'}] criterion {num:2d} {name}: {detail}"


@pytest.mark.parametrize("num", sorted(CRITERIA))
def test_criterion(num):
    from conftest import ACCEPTANCE_LINES
    ok, line = run(num)
    ACCEPTANCE_LINES[num] = line
    print(line)
    assert ok, line


if __name__ == "__main__":
    results = [run(n) for n in sorted(CRITERIA)]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
