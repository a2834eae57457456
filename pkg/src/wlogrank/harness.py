"""Monte Carlo power study and relative efficiency.

Within a replication every method is applied to the same simulated data
set.  Analyses that cannot produce a standardized statistic count as
non-rejections and are tallied in ``degenerate_count``.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DegenerateError, NoEventsError, ValidationError
from .landmark import landmark_from_curves
from .logrank import make_weights, normal_quantile, weighted_logrank
from .modest import modest_test
from .simulate import ScenarioSpec, TrialDesign, get_scenario, replication_rng, simulate_trial
from .survival import Dataset, RiskTable, arm_curves, build_risk_table

__all__ = [
    "Method",
    "parse_methods",
    "StudyConfig",
    "PowerRow",
    "evaluate_methods",
    "run_power_study",
    "relative_efficiency",
    "rows_to_csv",
]

FAMILIES = ("lrt", "wlrt", "mwlrt", "landmark")


@dataclass(frozen=True)
class Method:
    family: str
    t_star: float | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValidationError(f"unknown method family {self.family!r}")
        if self.family == "lrt":
            if self.t_star is not None:
                raise ValidationError("lrt takes no t*")
        elif self.t_star is None or not (math.isfinite(self.t_star) and self.t_star >= 0):
            raise ValidationError(f"{self.family} needs a finite t* >= 0")

    @property
    def label(self) -> str:
        return self.family if self.t_star is None else f"{self.family}({self.t_star:g})"


def _number(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ValidationError(f"not a number: {text!r}") from None


def parse_methods(text: str) -> list[Method]:
    """Parse ``lrt,wlrt:6,mwlrt:3:30:3,landmark:27`` into methods.

    ``family:start:stop:step`` expands to an inclusive grid.
    """
    methods = []
    for item in text.split(","):
        parts = item.strip().split(":")
        family = parts[0]
        if len(parts) == 1:
            methods.append(Method(family))
        elif len(parts) == 2:
            methods.append(Method(family, _number(parts[1])))
        elif len(parts) == 4:
            start, stop, step = (_number(p) for p in parts[1:])
            if not step > 0 or stop < start:
                raise ValidationError(f"bad grid {item!r}")
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            methods.extend(Method(family, round(start + i * step, 10)) for i in range(count))
        else:
            raise ValidationError(f"bad method descriptor {item!r}")
    return methods


@dataclass(frozen=True)
class StudyConfig:
    scenarios: tuple[str, ...] = ("I", "II", "III", "IV")
    methods: tuple[Method, ...] = field(
        default_factory=lambda: tuple(parse_methods("lrt,wlrt:6,mwlrt:3:30:3,landmark:15:30:3"))
    )
    n_reps: int = 10_000
    alpha_one_sided: float = 0.025
    master_seed: int = 20190101
    design: TrialDesign = field(default_factory=TrialDesign)
    variance: str = "plugin"

    def __post_init__(self):
        if self.n_reps < 1:
            raise ValidationError("n_reps must be >= 1")
        if not 0 < self.alpha_one_sided < 0.5:
            raise ValidationError("alpha must lie in (0, 0.5)")
        if self.variance not in ("plugin", "permutation"):
            raise ValidationError(f"unknown variance {self.variance!r}")
        if not self.methods:
            raise ValidationError("no methods")


@dataclass(frozen=True)
class PowerRow:
    scenario: str
    method: str
    t_star: float | None
    n_reps: int
    rejections: int
    degenerate_count: int

    @property
    def rejection_rate(self) -> float:
        return self.rejections / self.n_reps

    @property
    def mc_se(self) -> float:
        p = self.rejection_rate
        return math.sqrt(p * (1 - p) / self.n_reps)


def evaluate_methods(
    data: Dataset | RiskTable, methods, variance: str = "plugin"
) -> list[float | None]:
    """Standardized statistic of each method on one data set (None if degenerate)."""
    try:
        table = data if isinstance(data, RiskTable) else build_risk_table(data)
    except NoEventsError:
        return [None] * len(methods)
    curves = None
    out = []
    for m in methods:
        try:
            if m.family == "lrt":
                res = weighted_logrank(table, make_weights(table, "standard"))
            elif m.family == "wlrt":
                res = weighted_logrank(table, make_weights(table, "threshold", m.t_star))
            elif m.family == "mwlrt":
                res = modest_test(table, m.t_star, variance)
            else:
                if curves is None:
                    curves = arm_curves(table)
                res = landmark_from_curves(*curves, m.t_star)
            out.append(res.z)
        except DegenerateError:
            out.append(None)
    return out


def _run_block(args) -> tuple[np.ndarray, np.ndarray]:
    spec, design, methods, variance, crit, seed, reps = args
    rejections = np.zeros(len(methods), dtype=np.int64)
    degenerate = np.zeros(len(methods), dtype=np.int64)
    for rep in reps:
        data = simulate_trial(spec, design, replication_rng(seed, spec.id, rep))
        for i, z in enumerate(evaluate_methods(data, methods, variance)):
            if z is None:
                degenerate[i] += 1
            elif z > crit:
                rejections[i] += 1
    return rejections, degenerate


def run_power_study(
    config: StudyConfig, workers: int = 1, scenarios: dict[str, ScenarioSpec] | None = None
) -> list[PowerRow]:
    """Rejection rates for every scenario and method in ``config``.

    ``scenarios`` may supply custom specifications by id; otherwise ids are
    looked up in the built-in catalogue.  Results do not depend on
    ``workers``.
    """
    crit = float(normal_quantile(1.0 - config.alpha_one_sided))
    methods = list(config.methods)
    rows = []
    n_blocks = max(1, workers) * 4
    for sid in config.scenarios:
        spec = (scenarios or {}).get(sid) or get_scenario(sid)
        blocks = [
            (spec, config.design, methods, config.variance, crit, config.master_seed, range(lo, config.n_reps, n_blocks))
            for lo in range(min(n_blocks, config.n_reps))
        ]
        if workers > 1:
            with ProcessPoolExecutor(workers) as pool:
                results = list(pool.map(_run_block, blocks))
        else:
            results = [_run_block(b) for b in blocks]
        rejections = sum(r for r, _ in results)
        degenerate = sum(d for _, d in results)
        for m, r, d in zip(methods, rejections, degenerate):
            rows.append(PowerRow(sid, m.label, m.t_star, config.n_reps, int(r), int(d)))
    return rows


def relative_efficiency(power_a: float, power_b: float, alpha_one_sided: float = 0.025) -> float:
    """Sample-size efficiency of test A relative to test B, in percent.

    The squared ratio of standardized drifts implied by each power under a
    normal approximation.
    """
    for p in (power_a, power_b):
        if not 0 < p < 1:
            raise ValidationError(f"power must lie in (0, 1), got {p!r}")
    z_alpha = normal_quantile(1.0 - alpha_one_sided)
    ratio = (z_alpha + normal_quantile(power_a)) / (z_alpha + normal_quantile(power_b))
    return float(100.0 * ratio**2)


CSV_HEADER = ["scenario", "method", "t_star", "n_reps", "rejections", "rejection_rate", "mc_se", "degenerate_count"]


def _g(x) -> str:
    return "" if x is None else f"{x:.17g}"


def rows_to_csv(rows: list[PowerRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in rows:
        writer.writerow(
            [r.scenario, r.method, _g(r.t_star), r.n_reps, r.rejections, _g(r.rejection_rate), _g(r.mc_se), r.degenerate_count]
        )
    return buf.getvalue()
