"""Weighted and modestly weighted logrank tests with a trial simulator."""

from .exceptions import (
    DegenerateError,
    DegenerateVarianceError,
    DegenerateWeightsError,
    NoEventsError,
    SurvivalError,
    ValidationError,
)
from .harness import Method, PowerRow, StudyConfig, parse_methods, relative_efficiency, run_power_study
from .landmark import landmark_test
from .logrank import TestResult, WeightScheme, make_weights, normal_cdf, normal_quantile, weighted_logrank
from .modest import ModestConfig, modest_scores, modest_test
from .scores import ScoreSet, ScoreTestResult, is_monotone, score_statistic, scores_to_weights, weights_to_scores
from .simulate import (
    ArmDistribution,
    ScenarioSpec,
    TrialDesign,
    replication_rng,
    sample_survival,
    scenario_catalog,
    simulate_trial,
)
from .survival import Dataset, KMCurve, RiskTable, SubjectRecord, build_risk_table, kaplan_meier, read_csv, write_csv

__version__ = "0.1.0"
