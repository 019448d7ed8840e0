import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from evidentia import score_slr
from evidentia.errors import EstimationError
from evidentia.exact_lr import ModelTag, lr_ss
from evidentia.generative import (
    CommonSourceParams,
    EvidencePair,
    Hypothesis,
    Scenario,
    SpecificSourceParams,
    SuspectTruth,
    TwoSuspectParams,
)
from evidentia.score_slr import (
    SQUARED_DIFFERENCE,
    Anchoring,
    ScaledChiSq1,
    asym_denominator_law,
    cs_score_context,
    frstat_ratio,
    ks_critical_value,
    score,
    score_log_ratio,
    slr_asym,
    slr_cs,
    slr_cs_crossing,
    slr_ss_es,
    slr_ss_es_unconditioned,
    slr_ss_eu,
    slr_two_suspect_anchored,
    ss_control_anchored_context,
    ss_trace_anchored_context,
    ss_unconditioned_context,
    two_suspect_anchored_context,
    validate_unconditioned_laws,
)
from evidentia.stats_core import RngStream, scaled_chisq1_log_pdf

CONFIG_A = SpecificSourceParams(mu=10.0, var_d=10.0, mu_d=9.0, var_u=2.0, var_s=1.0)
CS_A = CONFIG_A.as_common_source()

# Frozen from tools/compute_oracles.py.
SLR_CS_S10 = {"closed": 0.6499665371740707, "mc_ratio": 0.6547410320807469}
FRSTAT_A = {"e_s": 9.3, "e_u": 8.0, "alpha": 0.3686995787396484,
            "beta": 0.2869034541066495, "ratio": 1.2850998252624493}


def pair(t, c):
    return EvidencePair(t, c, Scenario.SPECIFIC_SOURCE, Hypothesis.H0)


ss_params = st.builds(
    SpecificSourceParams,
    mu=st.floats(-20, 20), var_d=st.floats(0.01, 20), mu_d=st.floats(-20, 20),
    var_u=st.floats(0.05, 10), var_s=st.floats(1e-5, 10))
values = st.floats(-30, 30)


def test_score_function():
    assert score(3.0, 1.0) == 4.0 == SQUARED_DIFFERENCE(1.0, 3.0)
    np.testing.assert_array_equal(score(np.array([0.0, 2.0]), 1.0), [1.0, 1.0])


class TestCommonSource:
    def test_closed_form_oracle(self):
        r = slr_cs((math.sqrt(10.0), 0.0), CS_A)
        assert r.value == pytest.approx(SLR_CS_S10["closed"], rel=1e-12)
        assert r.value == pytest.approx(SLR_CS_S10["mc_ratio"], rel=0.05)
        assert r.model_tag is ModelTag.SLR_CS

    def test_laws(self):
        ctx = cs_score_context(CS_A)
        assert ctx.numerator_law == ScaledChiSq1(3.0)
        assert ctx.denominator_law == ScaledChiSq1(23.0)
        assert ctx.anchoring is Anchoring.NONE

    def test_no_source_effect_gives_one(self):
        p = CommonSourceParams(mu=10.0, var_d=0.0, var_u1=2.0, var_u2=1.0)
        for t in (0.0, 1.3, 7.0):
            assert slr_cs((t, 4.0), p).value == 1.0
        assert slr_cs_crossing(p) == math.inf

    def test_crossing(self):
        c = slr_cs_crossing(CS_A)
        assert slr_cs((math.sqrt(c), 0.0), CS_A).log10_value == pytest.approx(0.0, abs=1e-12)
        assert slr_cs((math.sqrt(c) * 0.9, 0.0), CS_A).value > 1 > slr_cs((math.sqrt(c) * 1.1, 0.0), CS_A).value

    def test_decreasing_in_score(self):
        v = [slr_cs((math.sqrt(s), 0.0), CS_A).log10_value for s in np.linspace(0.01, 200, 50)]
        assert np.all(np.diff(v) < 0)

    def test_zero_score_limit(self):
        r = slr_cs((5.0, 5.0), CS_A)
        assert r.is_limit
        assert r.value == pytest.approx(math.sqrt(23.0 / 3.0), rel=1e-14)
        # The limit is approached continuously.
        near = slr_cs((5.0 + 1e-7, 5.0), CS_A)
        assert near.value == pytest.approx(r.value, rel=1e-6)

    def test_symmetry_in_trace_and_control(self):
        p = CommonSourceParams(mu=0.0, var_d=3.0, var_u1=1.0, var_u2=1.0)
        assert slr_cs((1.0, 4.0), p) == slr_cs((4.0, 1.0), p)


class TestControlAnchored:
    def test_laws(self):
        ctx = ss_control_anchored_context(9.3, CONFIG_A)
        assert ctx.numerator_law == ScaledChiSq1.of_squared_normal(9.0 - 9.3, 2.0)
        assert ctx.denominator_law == ScaledChiSq1.of_squared_normal(10.0 - 9.3, 12.0)

    def test_matches_histogram_ratio(self):
        # 10^7 simulated scores per hypothesis with the control fixed; density
        # ratio from counts in narrow log-score bins around each evaluation point.
        rng = np.random.default_rng(77)
        e_s = 9.0 + rng.standard_normal()
        n = 10**7
        h0 = (9.0 + rng.normal(0, math.sqrt(2.0), n) - e_s) ** 2
        h1 = (10.0 + rng.normal(0, math.sqrt(10.0), n) + rng.normal(0, math.sqrt(2.0), n) - e_s) ** 2
        lo, hi = np.quantile(h0, [0.05, 0.95])
        lo = max(lo, np.quantile(h1, 0.02))
        traces = e_s + np.sqrt(np.exp(rng.uniform(np.log(lo), np.log(hi), 100))) * rng.choice([-1, 1], 100)
        ls0, ls1 = np.sort(np.log(h0)), np.sort(np.log(h1))
        hw = 0.01
        worst = 0.0
        for t in traces:
            s = (t - e_s) ** 2
            c0 = np.searchsorted(ls0, math.log(s) + hw) - np.searchsorted(ls0, math.log(s) - hw)
            c1 = np.searchsorted(ls1, math.log(s) + hw) - np.searchsorted(ls1, math.log(s) - hw)
            worst = max(worst, abs(c0 / c1 / slr_ss_es(pair(t, e_s), CONFIG_A).value - 1))
        assert worst < 0.05

    @given(ss_params, values)
    def test_pdf_ratio_identity(self, p, e_s):
        # Numerator law is the squared trace-minus-control under H0.
        t = e_s + 1.5
        r = slr_ss_es(pair(t, e_s), p)
        ctx = ss_control_anchored_context(e_s, p)
        ln = scaled_chisq1_log_pdf(2.25, ctx.numerator_law) - scaled_chisq1_log_pdf(2.25, ctx.denominator_law)
        assert r.log10_value == pytest.approx(ln / math.log(10), rel=1e-12, abs=1e-12)


class TestUnconditioned:
    def test_laws(self):
        ctx = ss_unconditioned_context(CONFIG_A)
        assert ctx.numerator_law == ScaledChiSq1(3.0)
        assert ctx.denominator_law == ScaledChiSq1.of_squared_normal(1.0, 13.0)

    def test_validated_by_simulation(self):
        r = slr_ss_es_unconditioned(pair(8.0, 9.0), CONFIG_A, n_mc=10**4, stream=RngStream(0))
        assert r.model_tag is ModelTag.SLR_SS_UNC
        assert r.diagnostics["ks_H0"] < r.diagnostics["ks_critical"]
        assert r.diagnostics["ks_H1"] < r.diagnostics["ks_critical"]
        assert r == slr_ss_es_unconditioned(pair(8.0, 9.0), CONFIG_A)

    def test_wrong_law_is_rejected(self, monkeypatch):
        good = score_slr.ss_unconditioned_context

        def wrong(p):
            ctx = good(p)
            return score_slr.SlrContext(p, ctx.anchoring, ScaledChiSq1(2.0), ctx.denominator_law)

        monkeypatch.setattr(score_slr, "ss_unconditioned_context", wrong)
        with pytest.raises(EstimationError):
            validate_unconditioned_laws(CONFIG_A, 10**4, RngStream(1))

    def test_too_few_draws(self):
        with pytest.raises(EstimationError):
            validate_unconditioned_laws(CONFIG_A, 100, RngStream(1))


class TestTraceAnchored:
    @given(ss_params, values, values)
    def test_equals_specific_source_lr(self, p, t, c):
        r = slr_ss_eu(pair(t, c), p)
        assert r.log10_value == lr_ss(pair(t, c), p).log10_value
        assert r.model_tag is ModelTag.SLR_SS_EU
        if t != c:
            assert abs(r.diagnostics["score_ratio"] - 1) < 1e-12

    def test_laws_identical(self):
        ctx = ss_trace_anchored_context(4.0, CONFIG_A)
        assert ctx.numerator_law == ctx.denominator_law == ScaledChiSq1.of_squared_normal(-5.0, 1.0)


class TestAsymmetric:
    def test_value_and_second_factor(self):
        e_u, e_s = 8.0, 9.3
        r = slr_asym(pair(e_u, e_s), CONFIG_A)
        num = ss_control_anchored_context(e_s, CONFIG_A).numerator_law
        den = asym_denominator_law(e_u, CONFIG_A)
        assert den == ScaledChiSq1.of_squared_normal(e_u - 10.0, 11.0)
        s = (e_u - e_s) ** 2
        ln = scaled_chisq1_log_pdf(s, num) - scaled_chisq1_log_pdf(s, den)
        assert r.log10_value == pytest.approx(ln / math.log(10), rel=1e-13)
        second = (stats.norm.logpdf(e_s, 9.0, 1.0) - stats.norm.logpdf(e_u, 10.0, math.sqrt(12.0)))
        assert r.diagnostics["second_factor_log10"] == pytest.approx(second / math.log(10), rel=1e-12)
        assert r.diagnostics["conditioned"] is True

    def test_unconditioned_variant(self):
        r = slr_asym(pair(8.0, 9.3), CONFIG_A, conditioned=False)
        num = ss_unconditioned_context(CONFIG_A).numerator_law
        den = asym_denominator_law(8.0, CONFIG_A)
        ln, _ = score_log_ratio(1.69, num, den)
        assert r.log10_value == pytest.approx(ln / math.log(10), rel=1e-12)


class TestFrstat:
    def test_quadrature_oracle(self):
        r = frstat_ratio(pair(FRSTAT_A["e_u"], FRSTAT_A["e_s"]), CONFIG_A)
        assert r.value == pytest.approx(FRSTAT_A["ratio"], rel=1e-9)
        assert r.diagnostics["alpha"] == pytest.approx(FRSTAT_A["alpha"], rel=1e-9)
        assert r.diagnostics["beta"] == pytest.approx(FRSTAT_A["beta"], rel=1e-9)

    def test_zero_score(self):
        r = frstat_ratio(pair(9.0, 9.0), CONFIG_A)
        assert r.value == math.inf
        assert r.diagnostics["alpha"] == 1.0 and r.diagnostics["beta"] == 0.0

    def test_orientation(self):
        # Small scores support H0; large ones H1.
        assert frstat_ratio(pair(9.2, 9.0), CONFIG_A).value > 1
        assert frstat_ratio(pair(20.0, 9.0), CONFIG_A).value < 1

    def test_decreasing_in_score(self):
        v = [frstat_ratio(pair(9.0 + d, 9.0), CONFIG_A).log10_value for d in np.linspace(0.01, 15, 60)]
        assert np.all(np.diff(v) < 0)


class TestTwoSuspect:
    p = TwoSuspectParams(mu_a=0.0, var_a=1.0, mu_b=4.0, var_b=2.0, var_u=1.0)

    def test_numerator_is_anchor(self):
        ctx_a = two_suspect_anchored_context(0.3, self.p, SuspectTruth.HA)
        ctx_b = two_suspect_anchored_context(0.3, self.p, SuspectTruth.HB)
        assert ctx_a.numerator_law == ctx_b.denominator_law
        assert ctx_a.numerator_law == ScaledChiSq1.of_squared_normal(-0.3, 1.0)

    def test_supports_nearby_source(self):
        assert slr_two_suspect_anchored(0.2, 0.1, self.p, SuspectTruth.HA).value > 1
        assert slr_two_suspect_anchored(3.9, 4.2, self.p, SuspectTruth.HB).value > 1

    @given(values, values)
    def test_relabelling(self, e_u, anchor):
        swapped = TwoSuspectParams(mu_a=4.0, var_a=2.0, mu_b=0.0, var_b=1.0, var_u=1.0)
        a = slr_two_suspect_anchored(e_u, anchor, self.p, SuspectTruth.HA)
        b = slr_two_suspect_anchored(e_u, anchor, swapped, SuspectTruth.HB)
        assert a.log10_value == pytest.approx(b.log10_value, rel=1e-14, abs=1e-14)


def test_ks_critical_value():
    assert ks_critical_value(10**6) == pytest.approx(1.9495 / 1000, rel=1e-3)
    assert ks_critical_value(100, 0.05) == pytest.approx(stats.kstwo.ppf(0.95, 100))
