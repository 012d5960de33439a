"""
Unit tests for the sandwich audit.
"""

from src.bounds.audit import (
    AUDIT_COLUMNS,
    central_binomial_rows,
    chernoff_sandwich_rows,
    layer_rows,
    median_rows,
    sandwich_audit,
    small_p_rows,
)


def test_chernoff_pair_brackets_exact_tail():
    """Test the reverse and forward Chernoff bounds sandwich the same tail."""
    rows = chernoff_sandwich_rows([20, 40], [0.4, 0.5], [0.0, 1.0], n_min=10)
    assert len(rows) == 2 * 2 * 2 * 2
    assert not any(r["violated"] for r in rows)
    for lower, upper in zip(rows[::2], rows[1::2]):
        assert lower["bound_name"] == "reverse_chernoff"
        assert upper["bound_name"] == "chernoff"
        assert lower["exact_or_mc_reference"] == upper["exact_or_mc_reference"]
        assert upper["value"] >= upper["exact_or_mc_reference"]


def test_precondition_failures_are_never_violations():
    """Test rows outside the n floor are reported but not flagged."""
    rows = chernoff_sandwich_rows([20], [0.5], [0.0], n_min=100)
    reverse = rows[0]
    assert not reverse["preconds_ok"]
    assert not reverse["violated"]


def test_individual_families_hold():
    """Test small-p, layer, central binomial and median rows."""
    rows = (
        small_p_rows([10, 20], [0, 1, 2, 3])
        + layer_rows([[10], [10, 10]], [0.3, 0.5], [1, 3, 5])
        + central_binomial_rows(range(16, 41, 2))
        + median_rows(30, [0.2, 0.5])
    )
    assert rows
    assert not any(r["violated"] for r in rows)


def test_layer_rows_record_sizes():
    """Test layer rows name their layer sizes."""
    rows = layer_rows([[20, 8]], [0.5], [3])
    assert rows[0]["params"].endswith(";d=20,8")


def test_layer_rows_monte_carlo():
    """Test the Monte Carlo oracle also finds no violations."""
    rows = layer_rows([[10, 10]], [0.5], [1, 5], mc_samples=20000, seed=3)
    assert not any(r["violated"] for r in rows)


def test_sandwich_audit_frame():
    """Test the full audit on a reduced grid."""
    frame = sandwich_audit(n_values=[10, 20, 30], include_median=False)
    assert list(frame.columns) == AUDIT_COLUMNS
    assert not frame["violated"].any()
    assert {"chernoff", "reverse_chernoff", "small_p", "layer4", "central_binomial"} <= set(
        frame["bound_name"]
    )
