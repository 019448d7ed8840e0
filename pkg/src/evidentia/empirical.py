"""Score sampling distributions built by simulation.

A :class:`ThoughtExperiment` says which objects are drawn from where and
which one is held fixed; :func:`run_thought_experiment` carries it out on a
generative model and returns the resulting scores.  Densities of those
scores are then estimated with a KDE on the log-score scale, giving
data-driven score-based likelihood ratios that can be set against the
closed forms in :mod:`evidentia.score_slr`.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ._parallel import ordered_map
from .errors import ConfigurationError
from .exact_lr import LrResult, ModelTag
from .generative import CommonSourceParams, Hypothesis, Scenario, SpecificSourceParams
from .score_slr import Anchoring
from .stats_core import Kde1D, RngStream, kde_build, kde_log_pdf, kde_to_kernel_space

CHUNK_PAIRS = 1 << 16
DEFAULT_PAIRS = 10**5


@dataclass(frozen=True)
class ThoughtExperiment:
    """Recipe for a score sampling distribution.

    Supported recipes:

    * common source, no anchoring: one trace and one control from the same
      random source (H0) or from two random sources (H1);
    * common source, H1, trace anchored: controls from random population
      sources compared to the fixed trace (asymmetric denominator);
    * specific source, control anchored: traces from Source X (H0) or from
      random population sources (H1) compared to the fixed control, or to a
      fresh Source X control per pair if ``resample_control``;
    * specific source, trace anchored: Source X controls compared to the
      fixed trace, under either hypothesis.

    ``n_sources`` limits the number of distinct population sources; pairs
    then cycle through that pool.  ``None`` draws a fresh source every time.
    """

    scenario: Scenario
    hypothesis: Hypothesis
    anchoring: Anchoring = Anchoring.NONE
    anchor_value: float | None = None
    n_pairs: int = DEFAULT_PAIRS
    n_sources: int | None = None
    resample_control: bool = False

    def __post_init__(self):
        if self.n_pairs < 50:
            raise ConfigurationError(f"n_pairs must be >= 50, got {self.n_pairs}")
        if self.n_sources is not None and self.n_sources < 2:
            raise ConfigurationError(f"n_sources must be >= 2, got {self.n_sources}")
        needs_value = (self.anchoring is Anchoring.TRACE
                       or (self.anchoring is Anchoring.CONTROL and not self.resample_control))
        if needs_value:
            if self.anchor_value is None or not math.isfinite(self.anchor_value):
                raise ConfigurationError(f"{self.anchoring.value} experiment needs a finite anchor_value")
        elif self.anchor_value is not None:
            raise ConfigurationError("anchor_value given for an experiment that does not use it")
        cs = self.scenario is Scenario.COMMON_SOURCE
        valid = (
            (cs and self.anchoring is Anchoring.NONE)
            or (cs and self.anchoring is Anchoring.TRACE and self.hypothesis is Hypothesis.H1)
            or (not cs and self.anchoring in (Anchoring.CONTROL, Anchoring.TRACE))
        )
        if not valid:
            raise ConfigurationError(
                f"no sampling recipe for {self.scenario.value}/{self.hypothesis.value}"
                f"/{self.anchoring.value}")
        if self.resample_control and self.anchoring is not Anchoring.CONTROL:
            raise ConfigurationError("resample_control only applies to control-anchored experiments")

    @property
    def label(self) -> str:
        parts = [self.scenario.value, self.hypothesis.value, self.anchoring.value]
        if self.resample_control:
            parts.append("resampled")
        return "/".join(parts)


@dataclass(eq=False)
class ScoreSample:
    scores: np.ndarray
    experiment: ThoughtExperiment
    root_seed: int
    stream_id: int

    @cached_property
    def kde(self) -> Kde1D:
        return kde_build(self.scores, transform="log")

    def to_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["index", "score"])
            for i, s in enumerate(self.scores):
                writer.writerow([i, repr(float(s))])


def read_scores_csv(path) -> np.ndarray:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        return np.array([float(row["score"]) for row in reader])


def _source_effects(stream: RngStream, var_d: float, n: int, pool, index):
    if pool is None:
        return stream.standard_normal(n) * math.sqrt(var_d)
    return pool[index % pool.size]


def _distinct_partner(index, pool_size):
    # A different pool member for every index, cycling through all offsets.
    offset = 1 + (index // pool_size) % (pool_size - 1)
    return (index + offset) % pool_size


def _chunk_scores(t: ThoughtExperiment, p, stream: RngStream, start: int, n: int, pool):
    idx = np.arange(start, start + n)
    if t.scenario is Scenario.COMMON_SOURCE:
        d1 = _source_effects(stream, p.var_d, n, pool, idx)
        if t.anchoring is Anchoring.TRACE:
            control = p.mu + d1 + stream.standard_normal(n) * math.sqrt(p.var_u2)
            return (t.anchor_value - control) ** 2
        if t.hypothesis is Hypothesis.H0:
            d2 = d1
        elif pool is None:
            d2 = stream.standard_normal(n) * math.sqrt(p.var_d)
        else:
            d2 = pool[_distinct_partner(idx, pool.size)]
        trace = p.mu + d1 + stream.standard_normal(n) * math.sqrt(p.var_u1)
        control = p.mu + d2 + stream.standard_normal(n) * math.sqrt(p.var_u2)
        return (trace - control) ** 2

    if t.anchoring is Anchoring.TRACE:
        control = p.mu_d + stream.standard_normal(n) * math.sqrt(p.var_s)
        return (t.anchor_value - control) ** 2
    if t.hypothesis is Hypothesis.H0:
        trace = p.mu_d + stream.standard_normal(n) * math.sqrt(p.var_u)
    else:
        d = _source_effects(stream, p.var_d, n, pool, idx)
        trace = p.mu + d + stream.standard_normal(n) * math.sqrt(p.var_u)
    if t.resample_control:
        control = p.mu_d + stream.standard_normal(n) * math.sqrt(p.var_s)
    else:
        control = t.anchor_value
    return (trace - control) ** 2


def run_thought_experiment(t: ThoughtExperiment, p, stream: RngStream) -> ScoreSample:
    """Simulate ``t.n_pairs`` scores under the recipe ``t``.

    Work is split into fixed-size chunks, each drawing from its own child
    stream, so results do not depend on how the chunks are scheduled.
    """
    expected = CommonSourceParams if t.scenario is Scenario.COMMON_SOURCE else SpecificSourceParams
    if not isinstance(p, expected):
        raise ConfigurationError(
            f"{t.scenario.value} experiment needs {expected.__name__}, got {type(p).__name__}")
    pool = None
    if t.n_sources is not None:
        pool_stream = stream.child(0)
        pool = pool_stream.standard_normal(t.n_sources) * math.sqrt(p.var_d)

    starts = list(range(0, t.n_pairs, CHUNK_PAIRS))

    def work(i_start):
        i, start = i_start
        n = min(CHUNK_PAIRS, t.n_pairs - start)
        return _chunk_scores(t, p, stream.child(i + 1), start, n, pool)

    scores = np.concatenate(ordered_map(work, enumerate(starts)))
    return ScoreSample(scores=scores, experiment=t, root_seed=stream.root_seed,
                       stream_id=stream.stream_id)


def _same_anchor(a: ThoughtExperiment, b: ThoughtExperiment) -> bool:
    return (a.scenario is b.scenario and a.anchoring is b.anchoring
            and a.anchor_value == b.anchor_value and a.resample_control == b.resample_control)


def empirical_slr(score_value: float, h0_sample: ScoreSample, h1_sample: ScoreSample,
                  strict: bool = True, tag: ModelTag = ModelTag.SLR_SS_ES) -> LrResult:
    """Ratio of the two KDE densities at ``score_value``.

    ``strict`` requires both samples to come from the same scenario and
    anchoring.  Pass ``strict=False`` for deliberately mismatched models
    such as the asymmetric SLR.
    """
    if strict and not _same_anchor(h0_sample.experiment, h1_sample.experiment):
        raise ConfigurationError(
            f"samples mismatch: {h0_sample.experiment.label} vs {h1_sample.experiment.label}")
    k0, k1 = h0_sample.kde, h1_sample.kde
    ln = float(kde_log_pdf(score_value, k0)) - float(kde_log_pdf(score_value, k1))
    extrapolated = False
    for k in (k0, k1):
        t = float(kde_to_kernel_space(score_value, k))
        lo, hi = k.support
        if not lo <= t <= hi:
            extrapolated = True
    return LrResult.from_log(ln, tag, extrapolated=extrapolated,
                             hypotheses=f"{h0_sample.experiment.label} vs {h1_sample.experiment.label}")
