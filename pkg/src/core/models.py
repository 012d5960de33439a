"""
Pydantic models for domain values and API schemas.
"""

import math
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.core.exceptions import GraphSpecError, ScheduleError

# ============= Dynamics Models =============


class ThresholdSchedule(BaseModel):
    """Per-round infection thresholds.

    ``constant(r)`` uses r in every round. ``bootk(r, k, t)`` relaxes the first
    k rounds: round m < k uses r - (k - m) * t, later rounds use r. Relaxed
    thresholds are clamped to 1 so a vertex always needs an infected neighbour
    during relaxation; ``constant(0)`` is kept as the degenerate rule that
    infects everything in one round.
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["constant", "bootk"] = "constant"
    r: int = Field(ge=0)
    k: int = Field(0, ge=0)
    t: int = Field(0, ge=0)

    @model_validator(mode="after")
    def _check_kind(self) -> "ThresholdSchedule":
        if self.kind == "constant" and (self.k or self.t):
            raise ValueError("constant schedules take no relaxed rounds or slack")
        return self

    @classmethod
    def constant(cls, r: int) -> "ThresholdSchedule":
        return cls(kind="constant", r=r)

    @classmethod
    def bootk(cls, r: int, k: int, t: int) -> "ThresholdSchedule":
        return cls(kind="bootk", r=r, k=k, t=t)

    @property
    def relaxed_rounds(self) -> int:
        """Number of leading rounds whose threshold differs from r."""
        return self.k if self.kind == "bootk" else 0

    def threshold_at(self, m: int) -> int:
        """Threshold applied when computing A^(m+1) from A^(m)."""
        if m < 0:
            raise ScheduleError(f"round index must be >= 0, got {m}")
        if self.kind == "constant":
            return self.r
        if m >= self.k:
            return self.r
        return max(self.r - (self.k - m) * self.t, 1)

    def is_pointwise_at_most(self, other: "ThresholdSchedule") -> bool:
        """True if this schedule's threshold never exceeds ``other``'s."""
        horizon = max(self.relaxed_rounds, other.relaxed_rounds) + 1
        return all(self.threshold_at(m) <= other.threshold_at(m) for m in range(horizon))

    @property
    def label(self) -> str:
        if self.kind == "constant":
            return f"constant:{self.r}"
        return f"bootk:{self.r},{self.k},{self.t}"


# ============= Estimation Models =============


class TrialPlan(BaseModel):
    """Seeded Monte Carlo configuration for one infection probability."""

    p: float = Field(ge=0.0, le=1.0)
    trials: int = Field(ge=1)
    master_seed: int = Field(ge=0, lt=2**64)
    schedule: ThresholdSchedule


class Estimate(BaseModel):
    """Percolation-probability estimate with a Wilson interval."""

    p: float
    trials: int = Field(ge=1)
    successes: int = Field(ge=0)
    p_hat: float = Field(ge=0.0, le=1.0)
    ci_lo: float = Field(ge=0.0, le=1.0)
    ci_hi: float = Field(ge=0.0, le=1.0)

    @model_validator(mode="after")
    def _check_order(self) -> "Estimate":
        if self.successes > self.trials:
            raise ValueError("successes cannot exceed trials")
        if not self.ci_lo <= self.p_hat <= self.ci_hi:
            raise ValueError("interval must contain the point estimate")
        return self


class ProbeRecord(BaseModel):
    """One bisection probe, as written to the probe log."""

    p: float
    trials: int
    successes: int
    ci_lo: float
    ci_hi: float
    seed: int
    decision: Literal["below", "above", "undecided"]


class CriticalEstimate(BaseModel):
    """Bracket around the infection level where percolation crosses ``target``."""

    target: float = 0.5
    method: Literal["bisection", "quantile"] = "bisection"
    pc_hat: float
    p_lo: float
    p_hi: float
    converged: bool
    reason: str = ""
    degenerate: bool = False
    probes: List[ProbeRecord] = []

    @property
    def width(self) -> float:
        return self.p_hi - self.p_lo


class WindowEstimate(BaseModel):
    """Quantiles p_alpha and p_(1-alpha) of the percolation curve."""

    alpha: float
    lower: CriticalEstimate
    upper: CriticalEstimate

    @property
    def width(self) -> float:
        return self.upper.pc_hat - self.lower.pc_hat


# ============= Bound Models =============


class BoundResult(BaseModel):
    """An evaluated bound together with its precondition flags."""

    name: str
    value: float
    log_value: Optional[float] = None
    direction: Literal["upper", "lower"]
    preconditions: Dict[str, bool] = {}
    params: Dict[str, float] = {}
    details: Dict[str, float] = {}

    @property
    def preconditions_met(self) -> bool:
        return all(self.preconditions.values())


class WeightedBinomialSpec(BaseModel):
    """Y_k = sum_i i * X_i with X_i ~ Bin(d_i, p)."""

    layer_sizes: List[int] = Field(min_length=1)
    p: float = Field(gt=0.0, lt=1.0)

    @model_validator(mode="after")
    def _check_sizes(self) -> "WeightedBinomialSpec":
        if any(d < 0 for d in self.layer_sizes):
            raise ValueError("layer sizes must be non-negative")
        return self

    @property
    def k(self) -> int:
        return len(self.layer_sizes)

    @property
    def mean(self) -> float:
        return self.p * sum(i * d for i, d in enumerate(self.layer_sizes, start=1))

    @property
    def spread(self) -> int:
        """D(k) = sum_i i^2 * d_i."""
        return sum(i * i * d for i, d in enumerate(self.layer_sizes, start=1))


# ============= Geometry Models =============


class SphereNeighborProfile(BaseModel):
    """f_i = max |S(x,i) ∩ Γ(y)| over x and y outside B(x, i-1), for i = 1..k."""

    graph: str
    k: int = Field(ge=1)
    f: List[int]
    exact: bool = True
    samples: Optional[int] = None

    def f_at(self, i: int) -> int:
        """f_i, with f_0 read as 1 (a vertex has at most one neighbour equal to x)."""
        if i == 0:
            return 1
        if not 1 <= i <= len(self.f):
            raise GraphSpecError(f"profile covers radii 1..{len(self.f)}, asked for {i}")
        return self.f[i - 1]


class DistancePartition(BaseModel):
    """Classes with a guaranteed minimum pairwise distance."""

    classes: List[List[int]]
    min_distance: int
    class_bound: int

    @property
    def num_classes(self) -> int:
        return len(self.classes)

    @property
    def sizes(self) -> List[int]:
        return [len(c) for c in self.classes]


class PartitionVerdict(BaseModel):
    """Result of an exhaustive partition check."""

    disjoint: bool
    covers: bool
    distance_ok: bool
    count_ok: bool
    min_observed_distance: Optional[int] = None

    @property
    def ok(self) -> bool:
        return self.disjoint and self.covers and self.distance_ok and self.count_ok


class AuditReport(BaseModel):
    """Structural and statistical independence audit of one vertex class."""

    rounds: int
    structural_ok: bool
    trials: int
    pairs: int
    max_abs_correlation: float
    threshold: float
    fraction_below: float
    marginal_frequencies: List[float]
    marginal_ok: bool


# ============= Experiment Models =============


class ExperimentConfig(BaseModel):
    """Everything that determines the bytes of one CLI run."""

    graph: str
    schedule: str = "majority"
    p: Optional[float] = Field(None, ge=0.0, le=1.0)
    p_grid: Optional[str] = None
    trials: int = Field(500, ge=1)
    seed: int = Field(ge=0, lt=2**64)
    output: Optional[str] = None
    workers: int = Field(1, ge=1)
    coupled: bool = True

    def p_values(self) -> List[float]:
        """Expand ``lo:hi:step`` (inclusive) or fall back to the single ``p``."""
        if self.p_grid is None:
            if self.p is None:
                raise ValueError("either p or p_grid is required")
            return [self.p]
        try:
            lo, hi, step = (float(part) for part in self.p_grid.split(":"))
        except ValueError as e:
            raise ValueError(f"p-grid must be lo:hi:step, got {self.p_grid!r}") from e
        if step <= 0 or hi < lo or lo < 0 or hi > 1:
            raise ValueError(f"invalid p-grid {self.p_grid!r}")
        count = math.floor((hi - lo) / step + 1e-9) + 1
        return [round(lo + i * step, 12) for i in range(count)]


# ============= API Request Models =============


class ProfileRequest(BaseModel):
    graph: str
    k: int = Field(ge=1, le=16)
    samples: Optional[int] = Field(None, ge=1)
    seed: int = 0


class SphereRequest(BaseModel):
    graph: str
    x: int = Field(ge=0)
    k: int = Field(ge=0)
    limit: int = Field(1000, ge=0, description="Maximum members returned")


class ProbabilityRequest(BaseModel):
    graph: str
    schedule: str = "majority"
    p: float = Field(ge=0.0, le=1.0)
    trials: int = Field(1000, ge=1, le=10**6)
    seed: Optional[int] = None


class ExactRequest(BaseModel):
    graph: str
    schedule: str = "majority"
    p: float = Field(ge=0.0, le=1.0)


class CriticalRequest(BaseModel):
    graph: str
    schedule: str = "majority"
    tol: float = Field(0.01, gt=0.0, lt=1.0)
    trials: int = Field(1000, ge=1, le=10**5)
    seed: Optional[int] = None
    method: Literal["bisection", "quantile"] = "bisection"


class ChernoffRequest(BaseModel):
    n: int = Field(ge=1)
    p: float = Field(gt=0.0, lt=1.0)
    t: float = Field(ge=0.0)
    side: Literal["upper", "lower"] = "upper"


class ReverseChernoffRequest(BaseModel):
    n: int = Field(ge=3)
    delta: float = Field(ge=0.0, lt=0.5)
    c: float = Field(0.0, ge=0.0)


class LayerRequest(BaseModel):
    layer_sizes: List[int] = Field(min_length=1)
    p: float = Field(gt=0.0, lt=1.0)
    t: int = Field(ge=1)


class SmallPRequest(BaseModel):
    n: int = Field(ge=1)
    p: float = Field(gt=0.0, lt=1.0)
    m: int = Field(ge=0)


class CentralBinomialRequest(BaseModel):
    n: int = Field(ge=2)
    m: int = Field(ge=0)


class HypercubePartitionRequest(BaseModel):
    n: int = Field(ge=1, le=16)
    x: int = Field(0, ge=0)
    k: int = Field(ge=1)
