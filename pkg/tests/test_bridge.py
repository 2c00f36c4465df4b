"""The end-to-end decision tree."""

import numpy as np
import pytest

from suborbit import Budgets, CONFIRMED, INCONCLUSIVE, REDUCED, run_case


def test_direct_case_112():
    case = run_case((1, 1, 2), (1.0, 2.0, 3.0), seed=42)
    assert case.conclusion == CONFIRMED
    assert case.m_a_value == 3 == case.dims_m.r
    assert case.regular_kprime is True
    assert case.x_pi_regular is True
    assert case.kronecker["kronecker"] is True
    assert case.completeness_mt["complete"] is True
    assert case.completeness_mt["span_dim"] == 3
    assert case.completeness_m["span_dim"] == 4
    assert case.okr_witness_coords is not None


def test_reduced_case_114():
    case = run_case((1, 1, 4), (1.0, 2.0, 3.0), seed=42)
    assert case.conclusion == REDUCED
    red = case.reduction
    assert red["dim_g0"] == 17
    assert red["rank_g0"] == 5
    assert red["dim_z_g0"] == 2
    assert red["rank_g0"] - red["dim_z_g0"] == 3 == red["r_m"] == red["r_m0"]
    assert red["matches_expected_form"]
    assert red["equivalent_partition"] == [1, 1, 2]
    assert all(red["checks"].values())
    inner = case.inner_case
    assert inner.conclusion == CONFIRMED
    assert inner.multiplicities == (1, 1, 2)


def test_symmetric_two_block_cases():
    for mult in [(1, 1), (1, 3), (2, 2)]:
        case = run_case(mult, tuple(float(j + 1) for j in range(len(mult))), seed=42)
        assert case.conclusion == CONFIRMED, mult
        assert any("symmetric" in note for note in case.notes)


def test_consistency_of_routes_at_witness():
    case = run_case((1, 2, 3), (1.0, 2.0, 3.0), seed=11)
    assert case.conclusion == CONFIRMED
    # both pencil conditions hold at the same witnessed point, in agreement
    # with the moment and nilpotent routes
    assert case.kronecker["singular_ok"] and case.kronecker["pencil_ok"]
    assert case.m_a_value == case.dims_m.r
    assert case.x_pi_regular


def test_reseeding_stability():
    for seed in range(5):
        case = run_case((1, 1, 2), (1.0, 2.0, 3.0), seed=seed)
        assert case.conclusion == CONFIRMED, seed


def test_unsorted_input_is_canonicalized():
    case = run_case((2, 1, 1), (3.0, 1.0, 2.0), seed=0)
    assert case.multiplicities == (1, 1, 2)
    assert case.spectrum == (1.0, 2.0, 3.0)
    assert case.conclusion == CONFIRMED
    assert any("reordered" in n for n in case.notes)


def test_invalid_inputs_raise():
    with pytest.raises(ValueError):
        run_case((1, 1, 2), (1.0, 2.0, 2.0), seed=0)
    with pytest.raises(ValueError):
        run_case((0, 2), (1.0, 2.0), seed=0)


def test_budget_exhaustion_is_inconclusive():
    case = run_case((1, 1, 2), (1.0, 2.0, 3.0), seed=0,
                    budgets=Budgets(okr_attempts=0))
    assert case.conclusion == INCONCLUSIVE
    assert any("budget" in note for note in case.notes)


def test_case_serializes():
    import json
    case = run_case((1, 1, 4), (1.0, 2.0, 3.0), seed=1)
    doc = case.to_dict()
    assert doc["inner_case"]["conclusion"] == CONFIRMED
    json.dumps(doc)
