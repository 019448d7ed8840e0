"""Likelihood ratios with known parameters.

All ratios are formed as differences of log densities and reported as an
:class:`LrResult`, which keeps the log10 value as the source of truth so
values beyond double range are still carried faithfully.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .generative import (
    CommonSourceParams,
    EvidencePair,
    Hypothesis,
    SpecificSourceParams,
    TwoSuspectParams,
    cs_joint_law,
)
from .stats_core import NormalLaw, bivariate_normal_log_pdf, normal_log_pdf

LN10 = math.log(10.0)


class ModelTag(enum.Enum):
    LR_CS = "LR_CS"
    LR_SS = "LR_SS"
    LR_AB = "LR_AB"
    SLR_CS = "SLR_CS"
    SLR_SS_ES = "SLR_SS_ES"
    SLR_SS_UNC = "SLR_SS_UNC"
    SLR_SS_EU = "SLR_SS_EU"
    SLR_ASY = "SLR_ASY"
    FRSTAT = "FRSTAT"


HYPOTHESES = {
    ModelTag.LR_CS: "H0_CS vs H1_CS",
    ModelTag.LR_SS: "H0_SS vs H1_SS",
    ModelTag.LR_AB: "HA vs HB",
    ModelTag.SLR_CS: "H0_CS vs H1_CS",
    ModelTag.SLR_SS_ES: "H0_SS vs H1_SS (conditioned on e_s)",
    ModelTag.SLR_SS_UNC: "H0_SS vs H1_SS (unconditioned)",
    ModelTag.SLR_SS_EU: "H0_SS vs H1_SS (conditioned on e_u)",
    ModelTag.SLR_ASY: "H0_SS vs H1_CS (asymmetric)",
    ModelTag.FRSTAT: "H0_SS vs H1_SS (tail ratio)",
}


@dataclass(frozen=True)
class LrResult:
    """A likelihood ratio, or a score-based stand-in for one.

    ``is_limit`` marks values obtained as an analytic limit (score exactly
    zero); ``extrapolated`` marks empirical values evaluated outside the
    support of the fitted densities.  ``diagnostics`` holds model specific
    side quantities that are reported but not folded into the value.
    """

    log10_value: float
    model_tag: ModelTag
    hypotheses: str
    is_limit: bool = False
    extrapolated: bool = False
    diagnostics: dict = field(default_factory=dict, compare=False)

    @classmethod
    def from_log(cls, ln_value: float, tag: ModelTag, **kwargs) -> "LrResult":
        return cls(log10_value=float(ln_value) / LN10, model_tag=tag,
                   hypotheses=kwargs.pop("hypotheses", HYPOTHESES[tag]), **kwargs)

    @property
    def value(self) -> float:
        if self.log10_value > 308.5:
            return math.inf
        if self.log10_value < -330:
            return 0.0
        return 10.0 ** self.log10_value

    @property
    def is_infinite(self) -> bool:
        """True when the value cannot be represented as a positive finite double."""
        v = self.value
        return not (math.isfinite(v) and v > 0)

    def retagged(self, tag: ModelTag, **kwargs) -> "LrResult":
        return replace(self, model_tag=tag, hypotheses=HYPOTHESES[tag], **kwargs)


def _trace_control(pair):
    if isinstance(pair, EvidencePair):
        return pair.trace, pair.control
    trace, control = pair
    return trace, control


def ln_lr_cs(trace, control, p: CommonSourceParams):
    """Natural-log common-source LR; accepts arrays."""
    trace = np.asarray(trace, dtype=float)
    control = np.asarray(control, dtype=float)
    num = bivariate_normal_log_pdf(np.stack([trace, control], axis=-1), cs_joint_law(p, Hypothesis.H0))
    den = (normal_log_pdf(trace, NormalLaw(p.mu, p.var_d + p.var_u1))
           + normal_log_pdf(control, NormalLaw(p.mu, p.var_d + p.var_u2)))
    return num - den


def ln_lr_ss(trace, p: SpecificSourceParams):
    """Natural-log specific-source LR; depends on the trace only."""
    return (normal_log_pdf(trace, NormalLaw(p.mu_d, p.var_u))
            - normal_log_pdf(trace, NormalLaw(p.mu, p.var_d + p.var_u)))


def lr_cs(pair, p: CommonSourceParams) -> LrResult:
    """Common-source LR for two traces (or a trace read against a control)."""
    if isinstance(p, SpecificSourceParams):
        p = p.as_common_source()
    trace, control = _trace_control(pair)
    return LrResult.from_log(float(ln_lr_cs(trace, control, p)), ModelTag.LR_CS)


def lr_ss(pair, p: SpecificSourceParams) -> LrResult:
    """Specific-source LR: trace density under Source X over the population density.

    The control drops out because its law is the same under both hypotheses.
    """
    trace, _ = _trace_control(pair)
    return LrResult.from_log(float(ln_lr_ss(trace, p)), ModelTag.LR_SS)


def ln_lr_two_suspect(e_u, p: TwoSuspectParams):
    return (normal_log_pdf(e_u, NormalLaw(p.mu_a, p.var_u))
            - normal_log_pdf(e_u, NormalLaw(p.mu_b, p.var_u)))


def swap_suspects(p: TwoSuspectParams) -> TwoSuspectParams:
    return TwoSuspectParams(mu_a=p.mu_b, var_a=p.var_b, mu_b=p.mu_a, var_b=p.var_a, var_u=p.var_u)


def lr_two_suspect(e_u: float, p: TwoSuspectParams) -> LrResult:
    """LR of "trace from A" against "trace from B".

    Swapping the roles of A and B (:func:`swap_suspects`) gives the
    reciprocal.
    """
    return LrResult.from_log(float(ln_lr_two_suspect(e_u, p)), ModelTag.LR_AB)
