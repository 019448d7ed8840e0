import csv
import io
import math

import numpy as np
import pytest

from evidentia.errors import DegenerateLawError, ParameterError
from evidentia.exact_lr import lr_cs, lr_ss, lr_two_suspect, swap_suspects
from evidentia.experiments import (
    COMPARED_MODELS,
    CSV_COLUMNS,
    Comparison,
    ExperimentConfig,
    ProjectionToy,
    SearchSpace,
    anchored_slrs,
    evaluate_pair,
    incoherence_search,
    standard_config,
    projection_demo,
    records_to_csv,
    replicate_stream,
    run_config,
    scalar_projection,
    search_projection_flip,
    summarize_model,
)
from evidentia.generative import Hypothesis, SpecificSourceParams, SuspectTruth, TwoSuspectParams, sample_pair

# Pinned from the seed-0 search over the default box, 10^4 trials.
WITNESS_9 = dict(
    params=TwoSuspectParams(mu_a=3.3208543514727076, var_a=4.154120610047707, mu_b=-0.6196657333079694,
                            var_b=1.2796825938252525, var_u=2.012936962764421),
    truth=SuspectTruth.HB, e_u=1.3499100127663641, e_a=3.200101495867448, e_b=-0.7847821202818622,
    log10_slr_a=0.3509328103, log10_slr_b=0.2321177067,
)
FLIP_TOY = ProjectionToy(e_a=(3.0, 0.0), e_b=(0.5, 3.0), e_u=(1.2, 0.9), var=0.5)


@pytest.fixture(scope="module")
def small_run():
    return run_config(standard_config("A", n_reps=60, seed=5))


def test_standard_configs():
    a, b, c = (standard_config(n).params for n in "ABC")
    assert (a.mu, a.var_d, a.var_u, a.mu_d, a.var_s) == (10.0, 10.0, 2.0, 9.0, 1.0)
    assert (b.mu_d, b.var_s) == (0.0, 1.0)
    assert (c.mu_d, c.var_s) == (9.0, 1e-5)
    assert standard_config("B_precise").params.var_s == 1e-5
    with pytest.raises(ParameterError):
        standard_config("D")
    with pytest.raises(ParameterError):
        ExperimentConfig("x", a, n_reps=0)


def test_comparison_columns():
    assert Comparison.CS_VS_SS.y_columns == ("lr_cs",)
    assert Comparison("SLRESvsSS").y_columns == ("slr_ss_es",)
    assert Comparison.ALL.y_columns == COMPARED_MODELS


def test_evaluate_pair_uses_each_model():
    p = standard_config("A").params
    pair = sample_pair(p, Hypothesis.H1, replicate_stream(1, 0, Hypothesis.H1))
    r = evaluate_pair(0, pair, p)
    assert r.lr_ss == lr_ss(pair, p)
    assert r.lr_cs == lr_cs(pair, p.as_common_source())
    assert r.slr_ss_eu.log10_value == r.lr_ss.log10_value


def test_run_is_ordered_and_reproducible(small_run):
    records, summary = small_run
    assert [(r.truth, r.rep_id) for r in records] == (
        [(Hypothesis.H0, i) for i in range(60)] + [(Hypothesis.H1, i) for i in range(60)])
    again, _ = run_config(standard_config("A", n_reps=60, seed=5))
    assert records_to_csv(records) == records_to_csv(again)
    other, _ = run_config(standard_config("A", n_reps=60, seed=6))
    assert records_to_csv(records) != records_to_csv(other)


def test_replicate_does_not_depend_on_run_size(small_run):
    records, _ = small_run
    fewer, _ = run_config(standard_config("A", n_reps=10, seed=5))
    assert fewer[:10] == records[:10]


def test_csv(small_run):
    records, _ = small_run
    text = records_to_csv(records)
    rows = list(csv.DictReader(io.StringIO(text)))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert len(rows) == len(records)
    r0 = records[0]
    assert float(rows[0]["e_u"]) == r0.e_u
    assert float(rows[0]["lr_ss"]) == r0.lr_ss.value
    assert {row["truth"] for row in rows} == {"H0_SS", "H1_SS"}


def test_csv_marks_infinite_values():
    # Config B H0 with a trace far below the population mean gives a huge LR.
    p = SpecificSourceParams(mu=10.0, var_d=10.0, mu_d=-200.0, var_u=1.0, var_s=1.0)
    pair = sample_pair(p, Hypothesis.H0, replicate_stream(0, 0, Hypothesis.H0))
    r = evaluate_pair(0, pair, p)
    assert r.lr_ss.is_infinite
    assert ",inf," in records_to_csv([r])
    s = summarize_model([r], "lr_cs")
    assert s.n_excluded == 1 and s.n_used == 0


def test_summary(small_run):
    records, summary = small_run
    eu = summary.get(Hypothesis.H1, "slr_ss_eu")
    assert eu.median_abs_log10_gap == 0 and eu.fraction_overestimating == 0
    cs = summary.get(Hypothesis.H1, "lr_cs")
    h1 = [r for r in records if r.truth is Hypothesis.H1]
    assert cs.fraction_overestimating == pytest.approx(np.mean([r.lr_cs.log10_value > r.lr_ss.log10_value
                                                                for r in h1]))
    assert -1 <= cs.rank_correlation <= 1
    text = summary.to_text()
    assert text.startswith("config A") and "slr_asym" in text


class TestIncoherence:
    def test_pinned_witness(self):
        w = WITNESS_9
        slr_a, slr_b = anchored_slrs(w["e_u"], w["e_a"], w["e_b"], w["params"])
        assert slr_a.value > 1 and slr_b.value > 1
        assert slr_a.log10_value == pytest.approx(w["log10_slr_a"], abs=1e-9)
        assert slr_b.log10_value == pytest.approx(w["log10_slr_b"], abs=1e-9)
        # The exact LR stays coherent on the same evidence.
        p = w["params"]
        assert lr_two_suspect(w["e_u"], p).value * lr_two_suspect(w["e_u"], swap_suspects(p)).value == \
            pytest.approx(1.0, abs=1e-12)

    def test_search_finds_both_kinds(self):
        report = incoherence_search(n_trials=200, seed=0)
        assert report.count() == report.count("both_own") + report.count("both_other")
        first = next(w for w in report.witnesses if w.kind == "both_own")
        assert first.trial == 9
        assert first.e_u == WITNESS_9["e_u"] and first.params == WITNESS_9["params"]
        assert report.max_reciprocity_error < 1e-12

    def test_search_space_respected(self):
        space = SearchSpace(mean_range=(0.0, 1.0), var_range=(1.0, 2.0))
        report = incoherence_search(space, n_trials=300, seed=4)
        for w in report.witnesses:
            assert 0 <= w.params.mu_a <= 1 and 1 <= w.params.var_u <= 2

    def test_invalid(self):
        with pytest.raises(ParameterError):
            incoherence_search(n_trials=0)


class TestProjection:
    def test_scalar_projection(self):
        assert scalar_projection((3.0, 4.0), (1.0, 0.0)) == 3.0
        assert scalar_projection((3.0, 4.0), (0.0, 2.0)) == 4.0
        with pytest.raises(DegenerateLawError):
            scalar_projection((1.0, 1.0), (0.0, 0.0))

    def test_pinned_flip(self):
        ds = projection_demo(FLIP_TOY, n_pseudo=1000, seed=3)
        assert ds.is_flip
        assert ds.log10_lr_ab > 0
        assert ds.onto_a.log10_slr == pytest.approx(-1.1943, abs=1e-3)
        assert ds.onto_b.log10_slr == pytest.approx(-1.5101, abs=1e-3)
        # KDE of 1000 pseudo-traces agrees on direction and roughly in size.
        assert ds.onto_a.log10_slr_empirical < 0 and ds.onto_b.log10_slr_empirical < 0
        assert abs(ds.onto_a.log10_slr_empirical - ds.onto_a.log10_slr) < 0.3

    def test_search_reproduces_pinned_toy(self):
        toy = search_projection_flip((3.0, 0.0), (0.5, 3.0), var=0.5)
        assert toy.e_a == FLIP_TOY.e_a and toy.e_b == FLIP_TOY.e_b and toy.var == FLIP_TOY.var
        assert toy.e_u == pytest.approx(FLIP_TOY.e_u, abs=1e-12)

    def test_no_flip_for_trace_at_a(self):
        toy = ProjectionToy(e_a=(3.0, 0.0), e_b=(0.5, 3.0), e_u=(3.0, 0.0), var=0.5)
        ds = projection_demo(toy, seed=1)
        assert not ds.is_flip and ds.onto_a.favours == "A" and ds.onto_b.favours == "A"

    def test_tie_is_not_a_flip(self):
        ds = projection_demo(ProjectionToy((1.0, 1.0), (1.0, 1.0), (1.0, 1.0)), seed=1)
        assert ds.onto_a.favours == "neither" and not ds.is_flip

    def test_invalid(self):
        with pytest.raises(ParameterError):
            ProjectionToy((1, 0), (0, 1), (1, 1), var=0)
        with pytest.raises(DegenerateLawError):
            projection_demo(ProjectionToy((0, 0), (0, 1), (1, 1)))
        with pytest.raises(ParameterError):
            projection_demo(FLIP_TOY, n_pseudo=10)

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_projection_moments(self, seed):
        ds = projection_demo(FLIP_TOY, n_pseudo=4000, seed=seed)
        assert abs(ds.onto_a.from_a.mean() - 3.0) < 4 * math.sqrt(0.5 / 4000)
        assert abs(ds.onto_a.from_b.var() - 0.5) < 0.05
