import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from evidentia.errors import ParameterError
from evidentia.generative import (
    CommonSourceParams,
    Hypothesis,
    Scenario,
    SpecificSourceParams,
    SuspectTruth,
    TwoSuspectParams,
    covariance_standard_errors,
    cs_joint_law,
    sample_pair,
    sample_pairs,
    sample_two_suspect,
    sample_two_suspect_arrays,
    ss_joint_law,
)
from evidentia.stats_core import RngStream

CS = CommonSourceParams(mu=10.0, var_d=10.0, var_u1=2.0, var_u2=1.0)
CONFIG_B = SpecificSourceParams(mu=10.0, var_d=10.0, mu_d=0.0, var_u=2.0, var_s=1.0)


def test_cs_covariance():
    law = cs_joint_law(CS, Hypothesis.H0)
    assert law.mean == (10.0, 10.0)
    assert law.covariance == ((12.0, 10.0), (10.0, 11.0))
    assert cs_joint_law(CS, Hypothesis.H1).covariance == ((12.0, 0.0), (0.0, 11.0))


def test_ss_law_config_b():
    law = ss_joint_law(CONFIG_B, Hypothesis.H1)
    assert law.mean == (10.0, 0.0)
    assert law.covariance == ((12.0, 0.0), (0.0, 1.0))
    assert ss_joint_law(CONFIG_B, Hypothesis.H0).covariance == ((2.0, 0.0), (0.0, 1.0))


@pytest.mark.parametrize("h", list(Hypothesis))
def test_cs_sample_moments(h):
    t, c = sample_pairs(CS, h, RngStream(3, 1), 10**6)
    emp = np.cov(np.vstack([t, c]), ddof=1)
    target = np.array(cs_joint_law(CS, h).covariance)
    se = covariance_standard_errors(t, c)
    assert np.all(np.abs(emp - target) < 5 * se)
    assert np.all(np.abs(emp - target) <= 0.01 * np.abs(target).max())


@pytest.mark.parametrize("h", list(Hypothesis))
def test_ss_sample_moments(h):
    t, c = sample_pairs(CONFIG_B, h, RngStream(4, 2), 10**6)
    law = ss_joint_law(CONFIG_B, h)
    sd_trace = math.sqrt(law.covariance[0][0])
    assert abs(t.mean() - law.mean[0]) < 4 * sd_trace / 1000
    assert abs(c.mean() - law.mean[1]) < 4 / 1000
    emp = np.cov(np.vstack([t, c]))
    assert np.all(np.abs(emp - np.array(law.covariance)) < 5 * covariance_standard_errors(t, c))


def test_sample_pair_is_first_row_of_batch():
    pair = sample_pair(CONFIG_B, Hypothesis.H1, RngStream(8, 5))
    t, c = sample_pairs(CONFIG_B, Hypothesis.H1, RngStream(8, 5), 1)
    assert (pair.trace, pair.control) == (t[0], c[0])
    assert pair.scenario is Scenario.SPECIFIC_SOURCE and pair.truth is Hypothesis.H1
    assert sample_pair(CS, Hypothesis.H0, RngStream(8)).scenario is Scenario.COMMON_SOURCE


def test_control_law_same_under_both_hypotheses():
    # Same stream, same control noise: controls agree exactly.
    _, c0 = sample_pairs(CONFIG_B, Hypothesis.H0, RngStream(1), 100)
    _, c1 = sample_pairs(CONFIG_B, Hypothesis.H1, RngStream(1), 100)
    assert np.array_equal(c0, c1)


def test_zero_source_variance_allowed():
    p = SpecificSourceParams(mu=3.0, var_d=0.0, mu_d=3.0, var_u=1.0, var_s=1.0)
    t0, _ = sample_pairs(p, Hypothesis.H0, RngStream(2), 1000)
    t1, _ = sample_pairs(p, Hypothesis.H1, RngStream(2), 1000)
    assert np.array_equal(t0, t1)


@pytest.mark.parametrize("kwargs", [
    dict(var_u=0.0), dict(var_s=-1.0), dict(var_d=-0.1), dict(mu=math.nan), dict(var_u=math.inf)])
def test_invalid_specific_source(kwargs):
    base = dict(mu=10.0, var_d=10.0, mu_d=0.0, var_u=2.0, var_s=1.0)
    with pytest.raises(ParameterError):
        SpecificSourceParams(**{**base, **kwargs})


def test_invalid_common_source():
    with pytest.raises(ParameterError):
        CommonSourceParams(mu=0.0, var_d=1.0, var_u1=0.0, var_u2=1.0)


def test_invalid_two_suspect():
    with pytest.raises(ParameterError):
        TwoSuspectParams(mu_a=0, var_a=0, mu_b=1, var_b=1, var_u=1)


def test_unsupported_params():
    with pytest.raises(ParameterError):
        sample_pairs(TwoSuspectParams(0, 1, 1, 1, 1), Hypothesis.H0, RngStream(0), 3)


def test_as_common_source():
    cs = CONFIG_B.as_common_source()
    assert (cs.mu, cs.var_d, cs.var_u1, cs.var_u2) == (10.0, 10.0, 2.0, 1.0)


@pytest.mark.parametrize("truth", list(SuspectTruth))
def test_two_suspect_moments(truth):
    p = TwoSuspectParams(mu_a=-2.0, var_a=0.5, mu_b=3.0, var_b=2.0, var_u=1.5)
    e_u, e_a, e_b = sample_two_suspect_arrays(p, truth, RngStream(6), 10**6)
    src = p.mu_a if truth is SuspectTruth.HA else p.mu_b
    assert abs(e_u.mean() - src) < 4 * math.sqrt(1.5) / 1000
    assert abs(e_a.var() - 0.5) < 0.01 and abs(e_b.var() - 2.0) < 0.02
    assert abs(np.corrcoef(e_u, e_a)[0, 1]) < 0.01


@given(st.integers(0, 2**32), st.integers(0, 1000))
def test_sampling_is_deterministic(seed, sid):
    p = TwoSuspectParams(0.0, 1.0, 1.0, 1.0, 1.0)
    assert sample_two_suspect(p, SuspectTruth.HA, RngStream(seed, sid)) == \
        sample_two_suspect(p, SuspectTruth.HA, RngStream(seed, sid))
    assert sample_pair(CONFIG_B, Hypothesis.H1, RngStream(seed, sid)) == \
        sample_pair(CONFIG_B, Hypothesis.H1, RngStream(seed, sid))
