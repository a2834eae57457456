"""Weighted logrank statistic, weight schemes and normal numerics.

The statistic is oriented so that a positive value means the control arm
had more events than expected, i.e. evidence in favour of the experimental
arm.  All tests are one-sided.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .exceptions import DegenerateVarianceError, DegenerateWeightsError, ValidationError
from .survival import RiskTable

__all__ = [
    "WeightScheme",
    "TestResult",
    "normal_cdf",
    "normal_quantile",
    "make_weights",
    "weighted_logrank",
    "logrank_terms",
]


def normal_cdf(z):
    """Standard normal distribution function."""
    return special.ndtr(z)


def normal_quantile(p):
    """Standard normal quantile function for ``0 < p < 1``."""
    p_arr = np.asarray(p, dtype=np.float64)
    if np.any(~((p_arr > 0) & (p_arr < 1))):
        raise ValidationError(f"probability must lie in (0, 1), got {p!r}")
    return special.ndtri(p)


@dataclass(frozen=True, eq=False)
class WeightScheme:
    """Per-event-time weights aligned with the rows of a :class:`RiskTable`.

    ``variance_null`` optionally flags rows whose weight is a convention
    rather than identified by the data (exhausted risk sets).
    """

    weights: np.ndarray
    label: str = "custom"
    variance_null: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        w = np.array(self.weights, dtype=np.float64)
        if w.ndim != 1:
            raise ValidationError("weights must be one-dimensional")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise ValidationError("weights must be finite and non-negative")
        if not np.any(w > 0):
            raise DegenerateWeightsError(f"all weights are zero ({self.label})")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    def __len__(self):
        return self.weights.size


@dataclass(frozen=True)
class TestResult:
    """Outcome of a one-sided test; positive ``z`` favours the experimental arm."""

    __test__ = False  # not a pytest class

    statistic: float
    variance: float
    z: float
    p_one_sided: float
    method: str = ""
    t_star: float | None = None

    @classmethod
    def from_statistic(cls, statistic, variance, method="", t_star=None):
        if not variance > 0:
            raise DegenerateVarianceError(f"degenerate variance ({method or 'test'})")
        z = statistic / np.sqrt(variance)
        return cls(float(statistic), float(variance), float(z), float(normal_cdf(-z)), method, t_star)

    @property
    def chi2(self) -> float:
        return self.z**2

    @property
    def p_two_sided(self) -> float:
        return float(2.0 * normal_cdf(-abs(self.z)))

    def rejects(self, alpha: float = 0.025) -> bool:
        return self.z > normal_quantile(1.0 - alpha)


def make_weights(table: RiskTable, scheme: str = "standard", t_star: float | None = None) -> WeightScheme:
    """Build a weight scheme for ``table``.

    Parameters
    ----------
    scheme : {'standard', 'threshold', 'modest'}
        ``standard`` gives unit weights.  ``threshold`` gives zero weight to
        event times before ``t_star`` and unit weight from ``t_star`` on.
        ``modest`` gives the modestly weighted scheme pivoting at ``t_star``.
    """
    if scheme == "standard":
        return WeightScheme(np.ones(table.k), "standard")
    if t_star is None or not t_star >= 0:
        raise ValidationError(f"t_star must be >= 0 for scheme {scheme!r}")
    if scheme == "threshold":
        w = (table.event_times >= t_star).astype(np.float64)
        return WeightScheme(w, f"threshold({t_star:g})")
    if scheme == "modest":
        from .modest import modest_scores

        return modest_scores(table, t_star)[0]
    raise ValidationError(f"unknown weight scheme {scheme!r}")


def logrank_terms(table: RiskTable) -> tuple[np.ndarray, np.ndarray]:
    """Per-row observed-minus-expected control events and hypergeometric variances."""
    n0 = table.n_risk[0].astype(np.float64)
    n1 = table.n_risk[1].astype(np.float64)
    n = n0 + n1
    d = table.d.astype(np.float64)
    o_minus_e = table.events[0] - d * n0 / n
    denom = n * n * (n - 1.0)
    var = np.divide(n0 * n1 * d * (n - d), denom, out=np.zeros_like(n), where=n > 1)
    return o_minus_e, var


def weighted_logrank(table: RiskTable, w: WeightScheme | np.ndarray, t_star: float | None = None) -> TestResult:
    """Weighted logrank test with the hypergeometric plug-in variance.

    Raises
    ------
    DegenerateVarianceError
        If the variance is zero.
    """
    if not isinstance(w, WeightScheme):
        w = WeightScheme(w)
    if len(w) != table.k:
        raise ValidationError(f"{len(w)} weights for a table with {table.k} event times")
    o_minus_e, var = logrank_terms(table)
    u = float(w.weights @ o_minus_e)
    v = float((w.weights**2) @ var)
    return TestResult.from_statistic(u, v, w.label, t_star)
