"""Two-arm trial simulation with piecewise-exponential survival.

Subjects enter uniformly over the accrual period and are followed until a
calendar data cut-off; survival beyond the cut-off is censored.

Randomness is keyed, not sequential: every replication draws from its own
Philox stream derived from ``(master_seed, scenario, replication)``, so a
data set does not depend on which worker generated it or in which order.
"""

from __future__ import annotations

import math
import warnings
import zlib
from dataclasses import dataclass, field

import numpy as np

from .exceptions import ValidationError
from .survival import Dataset

__all__ = [
    "ArmDistribution",
    "ScenarioSpec",
    "TrialDesign",
    "scenario_catalog",
    "get_scenario",
    "sample_survival",
    "replication_rng",
    "simulate_trial",
]

LN2 = math.log(2.0)


@dataclass(frozen=True)
class ArmDistribution:
    """Piecewise-constant hazard: ``rates[i]`` applies on ``[breakpoints[i-1], breakpoints[i])``."""

    rates: tuple[float, ...]
    breakpoints: tuple[float, ...] = ()

    def __post_init__(self):
        rates = tuple(float(r) for r in self.rates)
        breaks = tuple(float(b) for b in self.breakpoints)
        if len(rates) != len(breaks) + 1:
            raise ValidationError("need exactly one more rate than breakpoints")
        if any(not (r > 0 and math.isfinite(r)) for r in rates):
            raise ValidationError("rates must be positive and finite")
        if any(b <= 0 for b in breaks) or any(b2 <= b1 for b1, b2 in zip(breaks, breaks[1:])):
            raise ValidationError("breakpoints must be positive and strictly increasing")
        object.__setattr__(self, "rates", rates)
        object.__setattr__(self, "breakpoints", breaks)

    @classmethod
    def exponential(cls, rate: float) -> "ArmDistribution":
        return cls((rate,))

    def _knots(self):
        starts = np.array((0.0,) + self.breakpoints)
        rates = np.array(self.rates)
        widths = np.diff(starts)
        cumhaz = np.concatenate([[0.0], np.cumsum(rates[:-1] * widths)])
        return starts, rates, cumhaz

    def hazard(self, t):
        starts, rates, _ = self._knots()
        return rates[np.searchsorted(starts, t, side="right") - 1]

    def cumulative_hazard(self, t):
        starts, rates, cumhaz = self._knots()
        t = np.asarray(t, dtype=np.float64)
        seg = np.searchsorted(starts, t, side="right") - 1
        return cumhaz[seg] + rates[seg] * (t - starts[seg])

    def survival(self, t):
        return np.exp(-self.cumulative_hazard(t))


@dataclass(frozen=True)
class ScenarioSpec:
    id: str
    control: ArmDistribution
    experimental: ArmDistribution
    description: str = field(default="", compare=False)


@dataclass(frozen=True)
class TrialDesign:
    n_per_arm: int = 100
    accrual_months: float = 12.0
    cutoff_months: float = 36.0

    def __post_init__(self):
        if int(self.n_per_arm) != self.n_per_arm or self.n_per_arm < 1:
            raise ValidationError("n_per_arm must be a positive integer")
        if not (self.accrual_months > 0 and math.isfinite(self.accrual_months)):
            raise ValidationError("accrual_months must be positive")
        if not (self.cutoff_months > 0 and math.isfinite(self.cutoff_months)):
            raise ValidationError("cutoff_months must be positive")
        if self.cutoff_months < self.accrual_months:
            warnings.warn("data cut-off precedes end of accrual", stacklevel=2)


def scenario_catalog() -> list[ScenarioSpec]:
    """The four reference scenarios; control is exponential with median 15."""
    control = ArmDistribution.exponential(LN2 / 15)
    return [
        ScenarioSpec("I", control, ArmDistribution.exponential(LN2 / 15), "identical survival"),
        ScenarioSpec(
            "II", control, ArmDistribution((LN2 / 9, 0.04), (6.0,)),
            "experimental uniformly worse, crossing hazards",
        ),
        ScenarioSpec("III", control, ArmDistribution.exponential(LN2 / 24), "proportional hazards"),
        ScenarioSpec(
            "IV", control, ArmDistribution((LN2 / 15, LN2 / 30), (6.0,)),
            "delayed effect after 6 months",
        ),
    ]


def get_scenario(scenario_id: str) -> ScenarioSpec:
    for spec in scenario_catalog():
        if spec.id == scenario_id:
            return spec
    raise ValidationError(f"unknown scenario {scenario_id!r}")


def sample_survival(dist: ArmDistribution, u):
    """Invert the survival function: return ``t`` with ``S(t) = u``.

    ``u`` may be a scalar or an array, every entry in ``(0, 1)``.
    """
    u_arr = np.asarray(u, dtype=np.float64)
    if np.any(~((u_arr > 0) & (u_arr < 1))):
        raise ValidationError("u must lie in (0, 1)")
    starts, rates, cumhaz = dist._knots()
    target = -np.log(u_arr)
    seg = np.searchsorted(cumhaz, target, side="right") - 1
    t = starts[seg] + (target - cumhaz[seg]) / rates[seg]
    return float(t) if t.ndim == 0 else t


def _scenario_key(scenario_id: str) -> int:
    return zlib.crc32(scenario_id.encode("utf-8"))


def replication_rng(master_seed: int, scenario_id: str, replication: int) -> np.random.Generator:
    """Counter-based generator for one replication of one scenario."""
    seq = np.random.SeedSequence(int(master_seed), spawn_key=(_scenario_key(scenario_id), int(replication)))
    return np.random.Generator(np.random.Philox(seq))


def simulate_trial(spec: ScenarioSpec, design: TrialDesign, rng: np.random.Generator) -> Dataset:
    """Simulate one trial; arm 0 subjects first, then arm 1.

    Subjects not yet enrolled at the cut-off are left out.
    """
    n = int(design.n_per_arm)
    tiny = np.nextafter(0.0, 1.0)
    times, events = [], []
    arms = []
    for i, dist in enumerate((spec.control, spec.experimental)):
        entry = rng.uniform(0.0, design.accrual_months, n)
        survival = sample_survival(dist, rng.uniform(tiny, 1.0, n))
        follow_up = design.cutoff_months - entry
        # only reachable when the cut-off falls inside the accrual period
        enrolled = follow_up > 0
        times.append(np.minimum(survival, follow_up)[enrolled])
        events.append((survival <= follow_up)[enrolled])
        arms.append(np.full(int(enrolled.sum()), i, dtype=np.int8))
    return Dataset(np.concatenate(times), np.concatenate(events), np.concatenate(arms))
