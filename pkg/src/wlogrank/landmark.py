"""Landmark comparison of Kaplan-Meier survival at a fixed time."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .exceptions import DegenerateVarianceError, NoEventsError, ValidationError
from .logrank import TestResult
from .survival import Dataset, KMCurve, SubjectRecord, as_dataset, kaplan_meier


def _curve(data: Dataset, arm: int) -> KMCurve | None:
    try:
        return kaplan_meier(data, arm)
    except NoEventsError:
        return None


def landmark_from_curves(km0: KMCurve | None, km1: KMCurve | None, t_star: float) -> TestResult:
    """Wald statistic for ``S_1(t*) - S_0(t*)`` with Greenwood variances.

    A ``None`` curve stands for an arm without events (survival 1, variance 0).
    """
    s0, v0 = km0.at(t_star) if km0 is not None else (1.0, 0.0)
    s1, v1 = km1.at(t_star) if km1 is not None else (1.0, 0.0)
    var = v0 + v1
    if not var > 0:
        raise DegenerateVarianceError(f"degenerate landmark variance at t*={t_star:g}")
    return TestResult.from_statistic(s1 - s0, var, f"landmark({t_star:g})", t_star)


def landmark_test(data: Dataset | Sequence[SubjectRecord], t_star: float) -> TestResult:
    """One-sided landmark test at ``t_star``; positive ``z`` favours arm 1."""
    if not (np.isfinite(t_star) and t_star >= 0):
        raise ValidationError(f"t_star must be finite and >= 0, got {t_star!r}")
    data = as_dataset(data)
    return landmark_from_curves(_curve(data, 0), _curve(data, 1), t_star)
