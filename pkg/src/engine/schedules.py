"""
Threshold schedules: parsing, the majority rule and the slack helpers of the
generous multi-round processes.
"""

import math
from typing import Optional

from pydantic import ValidationError

from src.core.exceptions import BoundDomainError, ScheduleError
from src.core.models import ThresholdSchedule
from src.graphs.families import Graph, HypercubeGraph


def majority_threshold(g: Graph) -> int:
    """⌈d/2⌉ for a d-regular graph (equals d/2 for even d)."""
    return (g.degree + 1) // 2


def boot1(r: int, t: int) -> ThresholdSchedule:
    """One relaxed round at r - t, then r."""
    return ThresholdSchedule.bootk(r, 1, t)


def boot3(r: int, t: int) -> ThresholdSchedule:
    """Three relaxed rounds at r - 3t, r - 2t, r - t, then r."""
    return ThresholdSchedule.bootk(r, 3, t)


def parse_schedule(text: str, g: Optional[Graph] = None) -> ThresholdSchedule:
    """
    Parse ``majority``, ``constant:<r>`` or ``bootk:<r>,<k>,<t>``.

    ``r`` may itself be ``majority`` inside a bootk spec. ``t`` may be ``auto``
    (the hypercube slack of Q_n) or ``eps=<x>`` (the d-regular slack for k
    rounds). These forms need the graph to resolve.

    Raises:
        ScheduleError: If the text is malformed
    """
    text = text.strip()
    kind, _, arg = text.partition(":")

    def resolve_r(token: str) -> int:
        token = token.strip()
        if token == "majority":
            if g is None:
                raise ScheduleError("a graph is required to resolve the majority threshold")
            return majority_threshold(g)
        try:
            return int(token)
        except ValueError as e:
            raise ScheduleError(f"threshold must be an integer or 'majority', got {token!r}") from e

    def resolve_t(token: str, k: int) -> int:
        token = token.strip()
        if token != "auto" and not token.startswith("eps="):
            return int(token)
        if g is None:
            raise ScheduleError(f"a graph is required to resolve slack {token!r}")
        try:
            if token == "auto":
                if not isinstance(g, HypercubeGraph):
                    raise ScheduleError(f"slack 'auto' needs a hypercube, got {g.spec}")
                return hypercube_slack(g.n)
            return regular_slack(g.degree, k, float(token[len("eps=") :]))
        except BoundDomainError as e:
            raise ScheduleError(str(e)) from e

    try:
        if kind == "majority" and not arg:
            return ThresholdSchedule.constant(resolve_r("majority"))
        if kind == "constant":
            return ThresholdSchedule.constant(resolve_r(arg))
        if kind == "bootk":
            parts = arg.split(",")
            if len(parts) != 3:
                raise ScheduleError(f"bootk schedule must be bootk:<r>,<k>,<t>, got {text!r}")
            k = int(parts[1].strip())
            return ThresholdSchedule.bootk(resolve_r(parts[0]), k, resolve_t(parts[2], k))
    except (ValidationError, ValueError) as e:
        raise ScheduleError(f"invalid schedule {text!r}: {e}") from e
    raise ScheduleError(
        f"unknown schedule {text!r}; use majority, constant:<r> or bootk:<r>,<k>,<t>"
    )


def require_generous(strict: ThresholdSchedule, generous: ThresholdSchedule) -> None:
    """
    Raises:
        ScheduleError: If ``generous`` exceeds ``strict`` in some round
    """
    if not generous.is_pointwise_at_most(strict):
        raise ScheduleError(
            f"{generous.label} is not pointwise at most {strict.label}; schedules not comparable"
        )


def hypercube_slack(n: int) -> int:
    """⌊√(n / log n)⌋, the per-round slack of the three-round process on Q_n."""
    if n < 2:
        raise BoundDomainError(f"hypercube slack needs n >= 2, got {n}")
    return int(math.floor(math.sqrt(n / math.log(n))))


def regular_slack(d: int, k: int, eps: float) -> int:
    """⌊eps·d / (3k)⌋, the per-round slack of the k-round process on d-regular graphs."""
    if d < 1 or k < 1 or eps <= 0:
        raise BoundDomainError(f"regular slack needs d, k >= 1 and eps > 0, got {d}, {k}, {eps}")
    return int(math.floor(eps * d / (3 * k)))
