"""Modestly weighted logrank test.

Event scores are held at 1 for event times before the pivot ``t_star``;
from the last pre-pivot event time on, the logrank weight is frozen.  The
resulting scores are non-increasing for every data set, which is what makes
the test safe when the experimental arm is uniformly worse.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import ValidationError
from .logrank import TestResult, WeightScheme, weighted_logrank
from .scores import ScoreSet, score_statistic, weights_to_scores
from .survival import RiskTable

__all__ = ["ModestConfig", "pivot_index", "modest_scores", "modest_test"]


@dataclass(frozen=True)
class ModestConfig:
    t_star: float

    def __post_init__(self):
        if not (np.isfinite(self.t_star) and self.t_star >= 0):
            raise ValidationError(f"t_star must be finite and >= 0, got {self.t_star!r}")


def pivot_index(table: RiskTable, t_star: float) -> int:
    """Number of event times strictly before ``t_star``."""
    return int(np.searchsorted(table.event_times, t_star, side="left"))


def modest_scores(table: RiskTable, config: ModestConfig | float) -> tuple[WeightScheme, ScoreSet]:
    """Weights and scores of the modestly weighted test pivoting at ``t_star``.

    With unit event scores the weight recursion reduces to a running product
    of ``n_j / (n_j - d_j)``, i.e. the reciprocal pooled Kaplan-Meier
    estimate.  An exhausted final row keeps the previous weight.
    """
    if not isinstance(config, ModestConfig):
        config = ModestConfig(float(config))
    j_star = pivot_index(table, config.t_star)
    n = table.n.astype(np.float64)
    d = table.d.astype(np.float64)
    exhausted = table.exhausted
    growth = np.divide(n, n - d, out=np.ones_like(n), where=~exhausted)
    w = np.empty(table.k)
    w[:j_star] = np.cumprod(growth[:j_star])
    w[j_star:] = w[j_star - 1] if j_star > 0 else 1.0
    scheme = WeightScheme(w, f"modest({config.t_star:g})", variance_null=exhausted.copy())
    return scheme, weights_to_scores(table, scheme)


def modest_test(table: RiskTable, t_star: float, variance: str = "plugin") -> TestResult:
    """Modestly weighted logrank test.

    Parameters
    ----------
    variance : {'plugin', 'permutation'}
        ``plugin`` uses the hypergeometric variance of the weighted logrank
        statistic; ``permutation`` uses the score-statistic variance.
    """
    scheme, scores = modest_scores(table, t_star)
    if variance == "plugin":
        return weighted_logrank(table, scheme, t_star=t_star)
    if variance == "permutation":
        res = score_statistic(table, scores)
        return TestResult.from_statistic(res.statistic, res.variance, scheme.label, t_star)
    raise ValidationError(f"unknown variance {variance!r}")
