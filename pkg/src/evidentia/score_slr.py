"""Score-based likelihood ratios for the squared-difference score.

Under the normal generative models the difference between two objects is
normal, so every score sampling distribution is a scaled chi-squared law
with one degree of freedom, possibly noncentral.  Each model below is a
choice of which objects are held fixed ("anchored") and which are resampled
when those sampling distributions are built.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import EstimationError
from .exact_lr import LN10, LrResult, ModelTag, lr_ss
from .generative import (
    CommonSourceParams,
    EvidencePair,
    SpecificSourceParams,
    SuspectTruth,
    TwoSuspectParams,
)
from .stats_core import (
    NormalLaw,
    ScaledChiSq1,
    normal_log_pdf,
    scaled_chisq1_log_cdf,
    scaled_chisq1_log_pdf,
    scaled_chisq1_log_sf,
)


class ScoreKind(enum.Enum):
    SQUARED_DIFFERENCE = "SquaredDifference"


@dataclass(frozen=True)
class ScoreFunction:
    kind: ScoreKind = ScoreKind.SQUARED_DIFFERENCE
    descriptor: str = "squared Euclidean distance (a - b)**2"

    def __call__(self, a, b):
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        out = (a - b) ** 2
        return out[()] if out.ndim == 0 else out


SQUARED_DIFFERENCE = ScoreFunction()


def score(a, b, f: ScoreFunction = SQUARED_DIFFERENCE):
    return f(a, b)


class Anchoring(enum.Enum):
    NONE = "None"
    CONTROL = "ControlAnchored"
    TRACE = "TraceAnchored"


@dataclass(frozen=True)
class SlrContext:
    """The pair of score laws a model compares, with the anchoring behind them."""

    params: object
    anchoring: Anchoring
    numerator_law: ScaledChiSq1
    denominator_law: ScaledChiSq1


# ---------------------------------------------------------------------------
# Score sampling distributions
# ---------------------------------------------------------------------------


def cs_score_context(p: CommonSourceParams) -> SlrContext:
    """Same random source versus two random sources, nothing anchored."""
    within = p.var_u1 + p.var_u2
    return SlrContext(p, Anchoring.NONE,
                      ScaledChiSq1(within), ScaledChiSq1(within + 2.0 * p.var_d))


def ss_control_anchored_context(e_s: float, p: SpecificSourceParams) -> SlrContext:
    """Traces from Source X, or from the population, compared to the fixed control."""
    return SlrContext(
        p, Anchoring.CONTROL,
        ScaledChiSq1.of_squared_normal(p.mu_d - e_s, p.var_u),
        ScaledChiSq1.of_squared_normal(p.mu - e_s, p.var_u + p.var_d),
    )


def ss_unconditioned_context(p: SpecificSourceParams) -> SlrContext:
    """As the control-anchored model, but the Source X control is resampled per pair."""
    return SlrContext(
        p, Anchoring.NONE,
        ScaledChiSq1.of_squared_normal(0.0, p.var_u + p.var_s),
        ScaledChiSq1.of_squared_normal(p.mu - p.mu_d, p.var_d + p.var_u + p.var_s),
    )


def ss_trace_anchored_context(e_u: float, p: SpecificSourceParams) -> SlrContext:
    """Source X controls compared to the fixed trace; identical under both hypotheses."""
    law = ScaledChiSq1.of_squared_normal(e_u - p.mu_d, p.var_s)
    return SlrContext(p, Anchoring.TRACE, law, law)


def asym_denominator_law(e_u: float, p: SpecificSourceParams) -> ScaledChiSq1:
    """Controls from random population sources compared to the fixed trace."""
    return ScaledChiSq1.of_squared_normal(e_u - p.mu, p.var_d + p.var_s)


def asym_context(pair, p: SpecificSourceParams, conditioned: bool = True) -> SlrContext:
    e_u, e_s = _trace_control(pair)
    numerator = (ss_control_anchored_context(e_s, p).numerator_law if conditioned
                 else ss_unconditioned_context(p).numerator_law)
    return SlrContext(p, Anchoring.TRACE, numerator, asym_denominator_law(e_u, p))


def two_suspect_anchored_context(anchor_value: float, p: TwoSuspectParams,
                                 anchor: SuspectTruth) -> SlrContext:
    """Score laws with the trace compared to one suspect's fixed control.

    The numerator is always the anchored suspect's hypothesis.
    """
    law_a = ScaledChiSq1.of_squared_normal(p.mu_a - anchor_value, p.var_u)
    law_b = ScaledChiSq1.of_squared_normal(p.mu_b - anchor_value, p.var_u)
    num, den = (law_a, law_b) if anchor is SuspectTruth.HA else (law_b, law_a)
    return SlrContext(p, Anchoring.CONTROL, num, den)


def slr_cs_crossing(p: CommonSourceParams) -> float:
    """Score at which the two common-source laws have equal density."""
    s0 = p.var_u1 + p.var_u2
    s1 = s0 + 2.0 * p.var_d
    if s1 == s0:
        return math.inf
    return math.log(s1 / s0) / (1.0 / s0 - 1.0 / s1)


# ---------------------------------------------------------------------------
# Ratios
# ---------------------------------------------------------------------------


def score_log_ratio(value: float, numerator: ScaledChiSq1, denominator: ScaledChiSq1):
    """Natural-log density ratio at a score, and whether a limit was used.

    Both densities behave like ``exp(-lam/2) / sqrt(2 pi scale x)`` as the
    score goes to zero, so the ratio has a finite limit there even though
    each density diverges.
    """
    if value == 0:
        ln = (0.5 * math.log(denominator.scale / numerator.scale)
              - 0.5 * (numerator.noncentrality - denominator.noncentrality))
        return ln, True
    ln = float(scaled_chisq1_log_pdf(value, numerator)) - float(scaled_chisq1_log_pdf(value, denominator))
    return ln, False


def _trace_control(pair):
    if isinstance(pair, EvidencePair):
        return pair.trace, pair.control
    trace, control = pair
    return float(trace), float(control)


def _ratio_result(pair, ctx: SlrContext, tag: ModelTag, **diagnostics) -> LrResult:
    e_u, e_s = _trace_control(pair)
    ln, is_limit = score_log_ratio(float(score(e_u, e_s)), ctx.numerator_law, ctx.denominator_law)
    return LrResult.from_log(ln, tag, is_limit=is_limit, diagnostics=diagnostics)


def slr_cs(pair, p) -> LrResult:
    """Common-source SLR.  Specific-source parameters are read with u1 = trace, u2 = control."""
    if isinstance(p, SpecificSourceParams):
        p = p.as_common_source()
    return _ratio_result(pair, cs_score_context(p), ModelTag.SLR_CS)


def slr_ss_es(pair, p: SpecificSourceParams) -> LrResult:
    """Suspect-centred SLR conditioned on the observed control."""
    _, e_s = _trace_control(pair)
    return _ratio_result(pair, ss_control_anchored_context(e_s, p), ModelTag.SLR_SS_ES)


def ks_critical_value(n: int, alpha: float = 1e-3) -> float:
    """One-sample Kolmogorov-Smirnov critical value at level ``alpha``."""
    from scipy.stats import kstwo

    return float(kstwo.ppf(1.0 - alpha, n))


def validate_unconditioned_laws(p: SpecificSourceParams, n_mc: int, stream) -> dict:
    """Simulate the unconditioned experiments and test the closed-form laws.

    Returns the KS statistics of both laws; raises :class:`EstimationError`
    when either exceeds the 0.1% critical value.
    """
    from scipy.stats import kstest

    from .empirical import ThoughtExperiment, run_thought_experiment
    from .generative import Hypothesis, Scenario

    if n_mc < 10**4:
        raise EstimationError(f"n_mc must be >= 10**4, got {n_mc}")
    ctx = ss_unconditioned_context(p)
    crit = ks_critical_value(n_mc)
    stats = {}
    for h, law in ((Hypothesis.H0, ctx.numerator_law), (Hypothesis.H1, ctx.denominator_law)):
        t = ThoughtExperiment(Scenario.SPECIFIC_SOURCE, h, Anchoring.CONTROL,
                              n_pairs=n_mc, resample_control=True)
        sample = run_thought_experiment(t, p, stream)
        ks = kstest(sample.scores, lambda x: np.exp(scaled_chisq1_log_cdf(x, law))).statistic
        stats[f"ks_{h.value}"] = float(ks)
        if ks > crit:
            raise EstimationError(
                f"unconditioned {h.value} law rejected by simulation (KS {ks:.4g} > {crit:.4g})")
    stats["ks_critical"] = crit
    return stats


def slr_ss_es_unconditioned(pair, p: SpecificSourceParams, n_mc: int = 10**4, stream=None) -> LrResult:
    """Suspect-centred SLR where Source X controls are resampled with every trace.

    When ``stream`` is given the closed-form laws are first checked against
    ``n_mc`` simulated scores and the KS statistics are attached as
    diagnostics.
    """
    diagnostics = validate_unconditioned_laws(p, n_mc, stream) if stream is not None else {}
    return _ratio_result(pair, ss_unconditioned_context(p), ModelTag.SLR_SS_UNC, **diagnostics)


def slr_ss_eu(pair, p: SpecificSourceParams) -> LrResult:
    """Trace-centred SLR.

    The score part compares two identical laws, so only the trace density
    ratio survives and the result is the specific-source LR itself.  The
    score part is still computed and returned as ``score_ratio``.
    """
    e_u, _ = _trace_control(pair)
    ctx = ss_trace_anchored_context(e_u, p)
    ln, _ = score_log_ratio(float(score(*_trace_control(pair))), ctx.numerator_law, ctx.denominator_law)
    base = lr_ss(pair, p)
    return base.retagged(ModelTag.SLR_SS_EU, diagnostics={"score_ratio": math.exp(ln)})


def slr_asym(pair, p: SpecificSourceParams, conditioned: bool = True) -> LrResult:
    """Asymmetric SLR: Source X in the numerator, population controls in the denominator.

    Only the score ratio is returned as the value.  The leftover density
    ratio ``f(e_s | Source X) / f(e_u | population)`` does not cancel and is
    reported as ``second_factor_log10``.
    """
    e_u, e_s = _trace_control(pair)
    second = (normal_log_pdf(e_s, NormalLaw(p.mu_d, p.var_s))
              - normal_log_pdf(e_u, NormalLaw(p.mu, p.var_d + p.var_u)))
    return _ratio_result(pair, asym_context(pair, p, conditioned), ModelTag.SLR_ASY,
                         second_factor_log10=float(second) / LN10, conditioned=conditioned)


def frstat_ratio(pair, p: SpecificSourceParams) -> LrResult:
    """Tail-probability ratio at the observed score.

    ``alpha = P(score > s | H0)`` is the chance of wrongly excluding Source X
    at threshold ``s``; ``beta = P(score <= s | H1)`` the chance of wrongly
    identifying it.  The value is ``alpha / beta`` so that, as for the
    density ratios, large values favour H0.
    """
    e_u, e_s = _trace_control(pair)
    ctx = ss_control_anchored_context(e_s, p)
    s = float(score(e_u, e_s))
    log_alpha = float(scaled_chisq1_log_sf(s, ctx.numerator_law))
    log_beta = float(scaled_chisq1_log_cdf(s, ctx.denominator_law))
    if log_beta == -math.inf:
        ln = math.inf
    else:
        ln = log_alpha - log_beta
    return LrResult.from_log(ln, ModelTag.FRSTAT,
                             diagnostics={"alpha": math.exp(log_alpha), "beta": math.exp(log_beta)})


def slr_two_suspect_anchored(e_u: float, anchor_value: float, p: TwoSuspectParams,
                             anchor: SuspectTruth) -> LrResult:
    """Suspect-centred SLR for the two-suspect problem, anchored on one control.

    The anchored suspect's hypothesis is in the numerator, so a coherent
    pair of evaluations would have values on opposite sides of one.
    """
    ctx = two_suspect_anchored_context(anchor_value, p, anchor)
    ln, is_limit = score_log_ratio(float(score(e_u, anchor_value)), ctx.numerator_law, ctx.denominator_law)
    label = "HA vs HB (anchored on e_a)" if anchor is SuspectTruth.HA else "HB vs HA (anchored on e_b)"
    return LrResult.from_log(ln, ModelTag.SLR_SS_ES, hypotheses=label, is_limit=is_limit)
