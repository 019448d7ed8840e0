"""Common-source and specific-source generative models.

Both scenarios are univariate random-effects models: a source effect ``d``
drawn around the population mean and within-source noise for every object.
Samplers follow that hierarchical construction literally; the joint laws are
provided separately so the two can be checked against each other.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .stats_core import BivariateNormalLaw, RngStream


class Scenario(enum.Enum):
    COMMON_SOURCE = "CommonSource"
    SPECIFIC_SOURCE = "SpecificSource"


class Hypothesis(enum.Enum):
    H0 = "H0"
    H1 = "H1"


class SuspectTruth(enum.Enum):
    HA = "HA"
    HB = "HB"


def _check_finite(**values):
    for name, value in values.items():
        if not math.isfinite(value):
            raise ParameterError(f"{name} must be finite, got {value}")


def _check_positive(**values):
    for name, value in values.items():
        if not value > 0:
            raise ParameterError(f"{name} must be > 0, got {value}")


def _check_nonnegative(**values):
    for name, value in values.items():
        if not value >= 0:
            raise ParameterError(f"{name} must be >= 0, got {value}")


@dataclass(frozen=True)
class CommonSourceParams:
    """Two traces, each from a random population source.

    ``var_d`` may be zero (no source effect); the within-source variances
    must be strictly positive.
    """

    mu: float
    var_d: float
    var_u1: float
    var_u2: float

    def __post_init__(self):
        _check_finite(mu=self.mu, var_d=self.var_d, var_u1=self.var_u1, var_u2=self.var_u2)
        _check_nonnegative(var_d=self.var_d)
        _check_positive(var_u1=self.var_u1, var_u2=self.var_u2)


@dataclass(frozen=True)
class SpecificSourceParams:
    """A trace of disputed origin and a control from the known Source X."""

    mu: float
    var_d: float
    mu_d: float
    var_u: float
    var_s: float

    def __post_init__(self):
        _check_finite(mu=self.mu, var_d=self.var_d, mu_d=self.mu_d,
                      var_u=self.var_u, var_s=self.var_s)
        _check_nonnegative(var_d=self.var_d)
        _check_positive(var_u=self.var_u, var_s=self.var_s)

    def as_common_source(self) -> CommonSourceParams:
        """Read the trace/control pair as two traces (u1 = trace, u2 = control)."""
        return CommonSourceParams(mu=self.mu, var_d=self.var_d,
                                  var_u1=self.var_u, var_u2=self.var_s)


@dataclass(frozen=True)
class TwoSuspectParams:
    """Two candidate sources A and B, each with one control object."""

    mu_a: float
    var_a: float
    mu_b: float
    var_b: float
    var_u: float

    def __post_init__(self):
        _check_finite(mu_a=self.mu_a, var_a=self.var_a, mu_b=self.mu_b,
                      var_b=self.var_b, var_u=self.var_u)
        _check_positive(var_a=self.var_a, var_b=self.var_b, var_u=self.var_u)


@dataclass(frozen=True)
class EvidencePair:
    trace: float
    control: float
    scenario: Scenario
    truth: Hypothesis


def cs_joint_law(p: CommonSourceParams, h: Hypothesis) -> BivariateNormalLaw:
    """Joint law of the two traces under ``h``."""
    cov = p.var_d if h is Hypothesis.H0 else 0.0
    return BivariateNormalLaw(
        mean=(p.mu, p.mu),
        covariance=((p.var_d + p.var_u1, cov), (cov, p.var_d + p.var_u2)),
    )


def ss_joint_law(p: SpecificSourceParams, h: Hypothesis) -> BivariateNormalLaw:
    """Joint law of (trace, control) under ``h``; the two are independent."""
    if h is Hypothesis.H0:
        mean, var_trace = (p.mu_d, p.mu_d), p.var_u
    else:
        mean, var_trace = (p.mu, p.mu_d), p.var_d + p.var_u
    return BivariateNormalLaw(mean=mean, covariance=((var_trace, 0.0), (0.0, p.var_s)))


def sample_pairs(p, h: Hypothesis, stream: RngStream, n: int):
    """Draw ``n`` (trace, control) pairs as two arrays.

    The draw order is fixed: source effects first, then trace noise, then
    control noise, each as a block of ``n`` standard normals.
    """
    if isinstance(p, SpecificSourceParams):
        d = stream.standard_normal(n) * math.sqrt(p.var_d)
        u = stream.standard_normal(n) * math.sqrt(p.var_u)
        s = stream.standard_normal(n) * math.sqrt(p.var_s)
        if h is Hypothesis.H0:
            trace = p.mu_d + u
        else:
            trace = p.mu + d + u
        control = p.mu_d + s
        return trace, control
    if isinstance(p, CommonSourceParams):
        d1 = stream.standard_normal(n) * math.sqrt(p.var_d)
        d2 = stream.standard_normal(n) * math.sqrt(p.var_d)
        u1 = stream.standard_normal(n) * math.sqrt(p.var_u1)
        u2 = stream.standard_normal(n) * math.sqrt(p.var_u2)
        trace = p.mu + d1 + u1
        control = p.mu + (d1 if h is Hypothesis.H0 else d2) + u2
        return trace, control
    raise ParameterError(f"unsupported parameter record {type(p).__name__}")


def sample_pair(p, h: Hypothesis, stream: RngStream) -> EvidencePair:
    """Draw one evidence pair under hypothesis ``h``."""
    trace, control = sample_pairs(p, h, stream, 1)
    scenario = (Scenario.SPECIFIC_SOURCE if isinstance(p, SpecificSourceParams)
                else Scenario.COMMON_SOURCE)
    return EvidencePair(trace=float(trace[0]), control=float(control[0]),
                        scenario=scenario, truth=h)


def sample_two_suspect_arrays(p: TwoSuspectParams, truth: SuspectTruth, stream: RngStream, n: int):
    a = stream.standard_normal(n) * math.sqrt(p.var_a)
    b = stream.standard_normal(n) * math.sqrt(p.var_b)
    u = stream.standard_normal(n) * math.sqrt(p.var_u)
    e_a = p.mu_a + a
    e_b = p.mu_b + b
    e_u = (p.mu_a if truth is SuspectTruth.HA else p.mu_b) + u
    return e_u, e_a, e_b


def sample_two_suspect(p: TwoSuspectParams, truth: SuspectTruth, stream: RngStream):
    """Draw ``(e_u, e_a, e_b)``: one trace and one control from each source."""
    e_u, e_a, e_b = sample_two_suspect_arrays(p, truth, stream, 1)
    return float(e_u[0]), float(e_a[0]), float(e_b[0])


def covariance_standard_errors(trace: np.ndarray, control: np.ndarray) -> np.ndarray:
    """Monte Carlo standard errors of the sample covariance entries."""
    n = trace.size
    xc = trace - trace.mean()
    yc = control - control.mean()
    products = (xc * xc, xc * yc, yc * yc)
    se = [np.std(v, ddof=1) / math.sqrt(n) for v in products]
    return np.array([[se[0], se[1]], [se[1], se[2]]])
