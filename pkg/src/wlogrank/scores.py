"""Score-statistic form of weighted logrank tests.

Every subject carries a score: ``c_j`` for an event at ``t_j`` and ``C_j``
for a censoring in ``[t_j, t_{j+1})`` (``C_0 = 0`` before the first event).
Summing the control arm's scores gives the same number as the weighted
logrank statistic; the permutation variance treats the arm labels as
exchangeable, which assumes equal censoring distributions in the two arms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateVarianceError, NoEventsError, ValidationError
from .logrank import WeightScheme
from .survival import RiskTable

__all__ = [
    "ScoreSet",
    "ScoreTestResult",
    "weights_to_scores",
    "scores_to_weights",
    "score_statistic",
    "is_monotone",
    "centering",
]


@dataclass(frozen=True, eq=False)
class ScoreSet:
    """Event scores ``c`` (length k) and censoring scores ``C`` (length k + 1)."""

    event_scores: np.ndarray
    censor_scores: np.ndarray

    def __post_init__(self):
        c = np.array(self.event_scores, dtype=np.float64)
        C = np.array(self.censor_scores, dtype=np.float64)
        if C.size != c.size + 1:
            raise ValidationError("censor_scores must have one more entry than event_scores")
        c.setflags(write=False)
        C.setflags(write=False)
        object.__setattr__(self, "event_scores", c)
        object.__setattr__(self, "censor_scores", C)

    @property
    def c(self) -> np.ndarray:
        return self.event_scores

    @property
    def C(self) -> np.ndarray:
        return self.censor_scores


@dataclass(frozen=True)
class ScoreTestResult:
    statistic: float
    variance: float
    z: float


def weights_to_scores(table: RiskTable, w: WeightScheme | np.ndarray) -> ScoreSet:
    """Convert logrank weights into event and censoring scores."""
    weights = w.weights if isinstance(w, WeightScheme) else np.asarray(w, dtype=np.float64)
    if weights.size != table.k:
        raise ValidationError(f"{weights.size} weights for a table with {table.k} event times")
    C = np.concatenate([[0.0], -np.cumsum(weights * table.d / table.n)])
    return ScoreSet(weights + C[1:], C)


def scores_to_weights(table: RiskTable, c, w1: float | None = None) -> WeightScheme:
    """Recover logrank weights from event scores by forward recursion.

    The first weight is ``c_1 n_1 / (n_1 - d_1)`` unless ``w1`` is given.
    On an exhausted row (``n_j == d_j``) the event score does not depend on
    the weight; such rows carry the previous weight forward and are flagged
    in ``variance_null``.  A leading exhausted row uses ``w1`` or 1.
    """
    if table.k == 0:
        raise NoEventsError("no events")
    c = np.asarray(c, dtype=np.float64)
    if c.size != table.k:
        raise ValidationError(f"{c.size} scores for a table with {table.k} event times")
    n = table.n.astype(np.float64)
    d = table.d.astype(np.float64)
    exhausted = table.exhausted
    w = np.empty(table.k)
    if exhausted[0]:
        w[0] = 1.0 if w1 is None else w1
    else:
        w[0] = c[0] * n[0] / (n[0] - d[0]) if w1 is None else w1
    for j in range(1, table.k):
        if exhausted[j]:
            w[j] = w[j - 1]
        else:
            w[j] = (w[j - 1] + c[j] - c[j - 1]) * n[j] / (n[j] - d[j])
    return WeightScheme(w, "from-scores", variance_null=exhausted.copy())


def centering(table: RiskTable, scores: ScoreSet) -> float:
    """Total score over all subjects; zero for a valid score set."""
    return float(table.d @ scores.c + table.l @ scores.C)


def score_statistic(table: RiskTable, scores: ScoreSet) -> ScoreTestResult:
    """Control-arm score sum with its permutation variance.

    Raises
    ------
    DegenerateVarianceError
        If the permutation variance is zero.
    """
    c, C = scores.c, scores.C
    if c.size != table.k:
        raise ValidationError("score set does not match the table")
    s = float(table.events[0] @ c + table.censored[0] @ C)
    n0, n1 = table.arm_sizes
    N = n0 + n1
    spread = float(table.d @ c**2 + table.l @ C**2)
    var = n0 * n1 / (N * (N - 1)) * spread if N > 1 else 0.0
    if not var > 0:
        raise DegenerateVarianceError("degenerate permutation variance")
    return ScoreTestResult(s, var, s / np.sqrt(var))


def is_monotone(scores: ScoreSet, tol: float = 1e-12) -> bool:
    """True if scores never reward an earlier event over a later one.

    Requires non-increasing event scores, non-increasing censoring scores
    and ``c_j >= C_j`` at every event time.
    """
    c, C = scores.c, scores.C
    return bool(
        np.all(np.diff(c) <= tol)
        and np.all(np.diff(C) <= tol)
        and np.all(c - C[1:] >= -tol)
    )
