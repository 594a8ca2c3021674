"""A fully hand-controlled coincidence scenario, shared by several tests.

Sixteen weekly baskets: eight weeks of {A, B} followed by eight weeks of
{C, D}.  Any basket window >= 2 yields exactly two pills whose change
points are known in advance:

    entrance A @ week 0     exit B @ week 7
    entrance C @ week 8     exit D @ week 15

Price paths are chosen per stock to hit every classification branch, and
``brute_force_cells`` recomputes the table with plain loops over the raw
price dicts — no PriceSeries bisection, no evaluator code.
"""

import datetime
from statistics import fmean, stdev

from tangled_string import PriceSeries, from_baskets, months_to_days

START = datetime.date(2010, 1, 1)


def week(k: int) -> datetime.date:
    return START + datetime.timedelta(weeks=k)


def build_sequence():
    baskets = [["A", "B"]] * 8 + [["C", "D"]] * 8
    labels = [week(k).isoformat() for k in range(16)]
    return from_baskets(baskets, labels)


def step_path(step_week: int, before: float, after: float):
    """Weekly observations from week -30 to week 45, stepping after step_week."""
    return [
        (week(k), before if k <= step_week else after) for k in range(-30, 46)
    ]


def noisy_then_flat(step_week: int, low: float, high: float, after: float):
    return [
        (week(k), (low if k % 2 == 0 else high) if k <= step_week else after)
        for k in range(-30, 46)
    ]


def pure_step_prices() -> dict:
    """Every entrance stock steps up at its change point; exits mixed."""
    return {
        "A": step_path(0, 100.0, 110.0),
        "B": [(week(k), 100.0) for k in range(-30, 46)],  # exactly flat
        "C": step_path(8, 100.0, 110.0),
        "D": step_path(15, 100.0, 90.0),  # decrease after its exit
    }


def mixed_prices() -> dict:
    """Adds an increase that fails the sigma rule (C is noisy before)."""
    prices = pure_step_prices()
    prices["C"] = noisy_then_flat(8, 95.0, 105.0, 103.0)
    return prices


KNOWN_PAIRS = {
    "entrance": [("A", week(0)), ("C", week(8))],
    "exit": [("B", week(7)), ("D", week(15))],
}


def price_series(raw: dict) -> PriceSeries:
    return PriceSeries(raw)


def brute_force_cells(raw_prices: dict, deltas_months, comparison="mean") -> dict:
    """Independent enumeration over the known change-point pairs."""
    cells = {}
    for role, pairs in KNOWN_PAIRS.items():
        for delta in deltas_months:
            horizon = datetime.timedelta(days=months_to_days(delta))
            evaluated = decrease = increase = gt_sigma = flat = dropped = 0
            for symbol, day in pairs:
                observations = raw_prices[symbol]
                before = [
                    value
                    for obs_day, value in observations
                    if day - horizon <= obs_day < day
                ]
                after = [
                    value
                    for obs_day, value in observations
                    if day < obs_day <= day + horizon
                ]
                if not before or not after:
                    dropped += 1
                    continue
                evaluated += 1
                if comparison == "mean":
                    level_before, level_after = fmean(before), fmean(after)
                else:
                    level_before, level_after = before[-1], after[-1]
                if level_after > level_before:
                    increase += 1
                    sigma = stdev(before) if len(before) >= 2 else 0.0
                    if level_after - level_before > sigma:
                        gt_sigma += 1
                elif level_after < level_before:
                    decrease += 1
                else:
                    flat += 1
            cells[(role, delta)] = {
                "evaluated": evaluated,
                "decrease": decrease,
                "increase": increase,
                "increase_gt_sigma": gt_sigma,
                "flat": flat,
                "dropped": dropped,
            }
    return cells
