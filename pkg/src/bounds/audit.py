"""
Sandwich audit: every bound against its exact (or Monte Carlo) reference
over small parameter grids.
"""

import logging
import math
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd

from src.bounds.binomial import exact_binomial_tail, median_check
from src.bounds.inequalities import (
    central_binomial_lower,
    chernoff_upper,
    reverse_chernoff_lower,
    small_p_tail_upper,
    weighted_tail_exact,
    weighted_tail_mc,
    weighted_tail_upper,
)
from src.core.models import BoundResult, WeightedBinomialSpec

logger = logging.getLogger(__name__)

AUDIT_COLUMNS = [
    "bound_name",
    "params",
    "value",
    "preconds_ok",
    "exact_or_mc_reference",
    "violated",
]

DEFAULT_LAYERS = ([10], [10, 10], [10, 10, 10], [20, 8], [6, 6, 6])


def _params(bound: BoundResult) -> str:
    return ";".join(f"{k}={v:g}" for k, v in bound.params.items())


def _row(bound: BoundResult, reference: float, violated: bool) -> Dict[str, Any]:
    return {
        "bound_name": bound.name,
        "params": _params(bound),
        "value": bound.value,
        "preconds_ok": bound.preconditions_met,
        "exact_or_mc_reference": reference,
        "violated": bool(violated and bound.preconditions_met),
    }


def chernoff_sandwich_rows(
    n_values: Sequence[int],
    p_values: Sequence[float],
    c_values: Sequence[float],
    n_min: int,
) -> List[Dict[str, Any]]:
    """
    reverse_chernoff_lower <= P(S >= n/2 + C) <= chernoff_upper with t = δn + C,
    so both bounds refer to the same tail event.
    """
    rows = []
    for n in n_values:
        for p in p_values:
            delta = 0.5 - p
            for c in c_values:
                m = math.ceil(n / 2.0 + c - 1e-12)
                exact = exact_binomial_tail(n, p, m)
                lower = reverse_chernoff_lower(n, delta, c, n_min=n_min)
                upper = chernoff_upper(n, p, delta * n + c)
                rows.append(_row(lower, exact, lower.value > exact))
                rows.append(_row(upper, exact, exact > upper.value))
    return rows


def small_p_rows(n_values: Sequence[int], m_values: Sequence[int]) -> List[Dict[str, Any]]:
    rows = []
    for n in n_values:
        for p in (1.0 / (n * n), 0.5 / (n * n)):
            for m in m_values:
                if m > n:
                    continue
                bound = small_p_tail_upper(n, p, m)
                exact = exact_binomial_tail(n, p, m)
                rows.append(_row(bound, exact, exact > bound.value))
    return rows


def layer_rows(
    layers: Sequence[Sequence[int]],
    p_values: Sequence[float],
    t_values: Sequence[int],
    mc_samples: int = 0,
    seed: int = 0,
) -> List[Dict[str, Any]]:
    """
    Weighted tail bound against the exact convolution, or against a Monte Carlo
    estimate (violation beyond a 3σ band) when ``mc_samples`` is positive.
    """
    rows = []
    for sizes in layers:
        for p in p_values:
            spec = WeightedBinomialSpec(layer_sizes=list(sizes), p=p)
            for t in t_values:
                bound = weighted_tail_upper(spec, t)
                if mc_samples > 0:
                    frac, se = weighted_tail_mc(spec, t, mc_samples, seed)
                    rows.append(_row(bound, frac, frac - 3.0 * se > bound.value))
                else:
                    exact = weighted_tail_exact(spec, t)
                    rows.append(_row(bound, exact, exact > bound.value))
                rows[-1]["params"] += ";d=" + ",".join(str(d) for d in sizes)
    return rows


def central_binomial_rows(n_values: Sequence[int]) -> List[Dict[str, Any]]:
    rows = []
    for n in n_values:
        if n % 2:
            continue
        for m in range(0, n // 8 + 1):
            bound = central_binomial_lower(n, m)
            exact = math.comb(n, n // 2 + m)
            # compare in log space, the coefficients overflow floats for large n
            violated = bound.log_value is not None and bound.log_value > math.log(exact)
            rows.append(_row(bound, float(exact), violated))
    return rows


def median_rows(n_max: int, p_values: Sequence[float]) -> List[Dict[str, Any]]:
    rows = []
    for n in range(1, n_max + 1):
        for p in p_values:
            check = median_check(n, p)
            rows.append(
                {
                    "bound_name": "binomial_median",
                    "params": f"n={n};p={p:g}",
                    "value": 0.5,
                    "preconds_ok": True,
                    "exact_or_mc_reference": check.above,
                    "violated": not check.holds,
                }
            )
    return rows


def sandwich_audit(
    n_values: Optional[Sequence[int]] = None,
    p_values: Sequence[float] = (0.3, 0.4, 0.5),
    c_values: Sequence[float] = (0.0, 1.0),
    n_min: int = 10,
    mc_samples: int = 0,
    seed: int = 0,
    include_median: bool = True,
) -> pd.DataFrame:
    """
    Evaluate every bound family against its reference.

    Args:
        n_values: Binomial sizes, default 10..30
        p_values: Success probabilities for the Chernoff pair
        c_values: Offsets C above n/2
        n_min: Floor passed to the reverse Chernoff precondition
        mc_samples: Monte Carlo samples for the weighted tail, 0 for exact convolution
        seed: Seed of the Monte Carlo oracle
        include_median: Also check the binomial median sandwich for n <= 200

    Returns:
        DataFrame with AUDIT_COLUMNS; ``violated`` is only set on rows whose
        preconditions hold
    """
    ns = list(n_values) if n_values is not None else list(range(10, 31))
    rows = chernoff_sandwich_rows(ns, p_values, c_values, n_min)
    rows += small_p_rows(ns, (0, 1, 2, 3, 5))
    rows += layer_rows(DEFAULT_LAYERS, (0.3, 0.5), (1, 3, 5), mc_samples, seed)
    rows += central_binomial_rows(range(16, 201, 2))
    if include_median:
        rows += median_rows(200, [round(0.1 * i, 1) for i in range(1, 10)])

    frame = pd.DataFrame(rows, columns=AUDIT_COLUMNS)
    violations = int(frame["violated"].sum())
    if violations:
        logger.warning(f"Sandwich audit found {violations} violations")
    else:
        logger.info(f"Sandwich audit: {len(frame)} rows, no violations")
    return frame
