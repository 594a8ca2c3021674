"""Coincidence evaluator, delay checks, and synthetic generation."""

import datetime

import pytest

from tangled_string import (
    ENTRANCE,
    EXIT,
    PLAIN,
    DetectionScore,
    EmptyEvaluationError,
    EvalParams,
    PriceSeries,
    RegimeSpec,
    SyntheticSpec,
    TangleParams,
    change_points,
    coincidence_table,
    from_baskets,
    from_plain,
    generate_synthetic,
    months_to_days,
    score_detection,
    tangle,
    tolerant_delay_check,
)

from eval_scenario import (
    KNOWN_PAIRS,
    brute_force_cells,
    build_sequence,
    mixed_prices,
    price_series,
    pure_step_prices,
    week,
)


# ---------------------------------------------------------------- horizons


def test_months_to_days_rounds_to_whole_weeks():
    assert months_to_days(3) == 91
    assert months_to_days(6) == 182
    assert months_to_days(12) == 364
    assert months_to_days(24) == 728


def test_months_to_days_single_month():
    # 4.33 weeks rounds to 4 whole weeks.
    assert months_to_days(1) == 28


# ------------------------------------------------------- scenario plumbing


def scenario_pairs(params: EvalParams):
    seq = build_sequence()
    points = {}
    for w in params.windows:
        points[w] = change_points(tangle(seq, TangleParams(window_w=w)))
    return seq, points


def test_scenario_change_points_match_plan():
    seq = build_sequence()
    result = tangle(seq, TangleParams(window_w=3))
    got = {
        (p.role, p.token, p.time_label)
        for p in change_points(result)
    }
    want = set()
    for role, pairs in KNOWN_PAIRS.items():
        for token, day in pairs:
            want.add((role, token, day.isoformat()))
    assert got == want


def test_pair_pooling_dedupes_across_windows():
    seq = build_sequence()
    table = coincidence_table(
        seq,
        price_series(pure_step_prices()),
        EvalParams(windows=(3, 4), deltas_months=(3,)),
    )
    # Four distinct (token, date) pairs despite two windows contributing.
    assert table.pair_counts == {ENTRANCE: 2, EXIT: 2}


# ------------------------------------------------------------ step scenario


def test_pure_step_table_matches_brute_force():
    seq = build_sequence()
    raw = pure_step_prices()
    params = EvalParams(windows=(3, 4), deltas_months=(3, 6, 12))
    table = coincidence_table(seq, price_series(raw), params)
    expect = brute_force_cells(raw, params.deltas_months)
    for role in (ENTRANCE, EXIT):
        for delta in params.deltas_months:
            cell = table.cell(role, delta)
            want = expect[(role, delta)]
            assert cell.evaluated == want["evaluated"], (role, delta)
            assert cell.decrease == want["decrease"], (role, delta)
            assert cell.increase == want["increase"], (role, delta)
            assert cell.increase_gt_sigma == want["increase_gt_sigma"]
            assert cell.flat == want["flat"], (role, delta)
            assert cell.dropped == want["dropped"], (role, delta)


def test_pure_step_literal_values():
    seq = build_sequence()
    table = coincidence_table(
        seq,
        price_series(pure_step_prices()),
        EvalParams(windows=(3, 4), deltas_months=(3,)),
    )
    ent = table.cell(ENTRANCE, 3)
    # A and C both step up cleanly from a dead-flat base: sigma is zero,
    # so both increases clear the threshold.
    assert ent.evaluated == 2
    assert ent.increase == 2
    assert ent.increase_gt_sigma == 2
    assert ent.decrease == 0
    assert ent.increase_fraction == 1.0
    assert ent.increase_gt_sigma_fraction == 1.0

    ex = table.cell(EXIT, 3)
    # B never moves (flat, excluded from fractions); D drops after exit.
    assert ex.evaluated == 2
    assert ex.flat == 1
    assert ex.decrease == 1
    assert ex.comparable == 1
    assert ex.decrease_fraction == 1.0


def test_noisy_increase_fails_sigma_rule():
    seq = build_sequence()
    raw = mixed_prices()
    params = EvalParams(windows=(3, 4), deltas_months=(3,))
    table = coincidence_table(seq, price_series(raw), params)
    expect = brute_force_cells(raw, (3,))

    ent = table.cell(ENTRANCE, 3)
    want = expect[(ENTRANCE, 3)]
    assert ent.increase == want["increase"] == 2
    # C's before-window alternates 95/105: the mean rises to 103 after,
    # but the move is smaller than one standard deviation.
    assert ent.increase_gt_sigma == want["increase_gt_sigma"] == 1


def test_endpoint_comparison_matches_brute_force():
    seq = build_sequence()
    raw = mixed_prices()
    params = EvalParams(
        windows=(3, 4), deltas_months=(3, 6), comparison="endpoint"
    )
    table = coincidence_table(seq, price_series(raw), params)
    expect = brute_force_cells(raw, (3, 6), comparison="endpoint")
    for role in (ENTRANCE, EXIT):
        for delta in (3, 6):
            cell = table.cell(role, delta)
            want = expect[(role, delta)]
            assert cell.increase == want["increase"]
            assert cell.decrease == want["decrease"]
            assert cell.flat == want["flat"]


def test_missing_symbol_is_dropped_not_fatal(caplog):
    seq = build_sequence()
    raw = pure_step_prices()
    del raw["D"]
    table = coincidence_table(
        seq,
        price_series(raw),
        EvalParams(windows=(3,), deltas_months=(3,)),
    )
    ex = table.cell(EXIT, 3)
    assert ex.dropped == 1
    assert ex.evaluated == 1


def test_empty_price_window_is_dropped():
    seq = build_sequence()
    raw = pure_step_prices()
    # A has no observations before week 5: its entrance at week 0 has an
    # empty before-window and must be dropped rather than classified.
    raw["A"] = [(week(k), 100.0) for k in range(5, 46)]
    table = coincidence_table(
        seq,
        price_series(raw),
        EvalParams(windows=(3,), deltas_months=(3,)),
    )
    ent = table.cell(ENTRANCE, 3)
    assert ent.dropped == 1
    assert ent.evaluated == 1


def test_no_pairs_raises():
    seq = from_baskets([["A"], ["B"]], ["2010-01-01", "2010-01-08"])
    with pytest.raises(EmptyEvaluationError):
        coincidence_table(
            seq,
            price_series(pure_step_prices()),
            EvalParams(windows=(1,), deltas_months=(3,)),
        )


def test_undated_sequence_rejected():
    seq = from_baskets([["A", "B"]] * 4 + [["C", "D"]] * 4)
    with pytest.raises(ValueError):
        coincidence_table(
            seq,
            price_series(pure_step_prices()),
            EvalParams(windows=(3,), deltas_months=(3,)),
        )


def test_table_rows_and_dict_round_trip():
    seq = build_sequence()
    params = EvalParams(windows=(3, 4), deltas_months=(3, 6))
    table = coincidence_table(seq, price_series(pure_step_prices()), params)
    rows = table.to_rows()
    # 2 roles x 2 horizons x 3 metrics, long format for CSV.
    assert len(rows) == 12
    assert {row[0] for row in rows} == {ENTRANCE, EXIT}
    assert {row[2] for row in rows} == {
        "decrease",
        "increase",
        "increase_gt_sigma",
    }
    doc = table.to_dict()
    assert doc["pairs"] == {ENTRANCE: 2, EXIT: 2}
    assert len(doc["cells"]) == 4
    assert doc["params"]["windows"] == [3, 4]


def test_eval_params_validation():
    with pytest.raises(ValueError):
        EvalParams(windows=())
    with pytest.raises(ValueError):
        EvalParams(windows=(0,))
    with pytest.raises(ValueError):
        EvalParams(deltas_months=(-3,))
    with pytest.raises(ValueError):
        EvalParams(comparison="median")


# ------------------------------------------------------------- delay check


def test_tolerant_delay_check_hand_case():
    seq = from_plain(["A", "B", "A", "C", "D", "C"])
    params = TangleParams(window_w=2, variant=PLAIN)
    points = change_points(tangle(seq, params))
    roles = [(p.event_index, p.role) for p in points]
    assert roles == [(0, ENTRANCE), (2, EXIT), (3, ENTRANCE), (5, EXIT)]

    # With no grace period each entrance is checked on a prefix that ends
    # at its own basket, before the match that creates the pill exists.
    strict = tolerant_delay_check(seq, params, 0)
    assert [r.stable for r in strict] == [False, True, False, True]

    relaxed = tolerant_delay_check(seq, params, 2)
    assert all(r.stable for r in relaxed)


def test_delay_check_records_prefix_length():
    seq = from_plain(["A", "B", "A", "C", "D", "C"])
    params = TangleParams(window_w=2, variant=PLAIN)
    records = tolerant_delay_check(seq, params, 2)
    # First point sees three baskets; the last prefix clamps to the end.
    assert records[0].prefix_baskets == 3
    assert records[-1].prefix_baskets == 6


def test_delay_check_rejects_negative_tolerance():
    seq = from_plain(["A", "B", "A"])
    params = TangleParams(window_w=2, variant=PLAIN)
    with pytest.raises(ValueError):
        tolerant_delay_check(seq, params, -1)


# --------------------------------------------------------------- synthesis


def make_spec(seed=7):
    return SyntheticSpec(
        regimes=(
            RegimeSpec(vocabulary=("a1", "a2", "a3", "a4"), length_baskets=10),
            RegimeSpec(vocabulary=("b1", "b2", "b3", "b4"), length_baskets=10),
        ),
        noise_rate=0.0,
        seed=seed,
        basket_size=3,
    )


def test_synthetic_is_deterministic():
    seq1, b1 = generate_synthetic(make_spec())
    seq2, b2 = generate_synthetic(make_spec())
    assert seq1 == seq2
    assert b1 == b2


def test_synthetic_seed_changes_output():
    seq1, _ = generate_synthetic(make_spec(seed=1))
    seq2, _ = generate_synthetic(make_spec(seed=2))
    assert seq1 != seq2


def test_synthetic_boundaries_and_shape():
    seq, boundaries = generate_synthetic(make_spec())
    assert boundaries == [10]
    assert seq.basket_count == 20
    assert seq.length == 60
    # Weekly labels, ISO format, strictly increasing.
    labels = [seq.time_label(b) for b in range(20)]
    days = [datetime.date.fromisoformat(lbl) for lbl in labels]
    for earlier, later in zip(days, days[1:]):
        assert (later - earlier).days == 7


def test_synthetic_respects_regime_vocabulary():
    seq, boundaries = generate_synthetic(make_spec())
    cut = boundaries[0]
    for event in seq.events():
        vocab = ("a1", "a2", "a3", "a4") if event.basket_index < cut else (
            "b1",
            "b2",
            "b3",
            "b4",
        )
        assert event.token in vocab


def test_synthetic_noise_borrows_foreign_tokens():
    spec = SyntheticSpec(
        regimes=(
            RegimeSpec(vocabulary=("a1", "a2"), length_baskets=30),
            RegimeSpec(vocabulary=("b1", "b2"), length_baskets=30),
        ),
        noise_rate=0.5,
        seed=11,
        basket_size=4,
    )
    seq, _ = generate_synthetic(spec)
    first_regime_tokens = {
        e.token for e in seq.events() if e.basket_index < 30
    }
    assert first_regime_tokens & {"b1", "b2"}


def test_synthetic_requires_regimes():
    with pytest.raises(ValueError):
        generate_synthetic(SyntheticSpec(regimes=()))


# ------------------------------------------------------------- detection


def test_detection_within_tolerance():
    score = score_detection(detected=[53], planted=[50], tolerance=5)
    assert score.matches == 1
    assert score.precision == 1.0
    assert score.recall == 1.0


def test_detection_outside_tolerance():
    score = score_detection(detected=[53], planted=[50], tolerance=2)
    assert score.matches == 0
    assert score.precision == 0.0
    assert score.recall == 0.0


def test_detection_empty_detected():
    score = score_detection(detected=[], planted=[50], tolerance=5)
    assert score.precision == 1.0
    assert score.recall == 0.0


def test_detection_is_one_to_one():
    # Two detections near one planted boundary: only one may claim it.
    score = score_detection(detected=[49, 51], planted=[50], tolerance=3)
    assert score.matches == 1
    assert score.precision == 0.5
    assert score.recall == 1.0


def test_detection_prefers_nearest_then_earlier():
    score = score_detection(detected=[50], planted=[48, 52], tolerance=4)
    assert score.matches == 1
    assert score.recall == 0.5


def test_detection_rejects_negative_tolerance():
    with pytest.raises(ValueError):
        score_detection(detected=[1], planted=[1], tolerance=-1)


def test_detection_score_fields():
    score = score_detection(detected=[10, 20], planted=[11], tolerance=1)
    assert isinstance(score, DetectionScore)
    assert score.detected == 2
    assert score.planted == 1
    assert score.matches == 1
