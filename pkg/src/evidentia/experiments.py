"""Simulation studies comparing LR and SLR models with the specific-source LR.

Every replicate samples a (trace, control) pair under the specific-source
generative model, under both hypotheses, and evaluates every model on it.
The same pair is read as two traces for the common-source models
(u1 = trace, u2 = control).
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import spearmanr

from ._parallel import ordered_map
from .errors import DegenerateLawError, ParameterError
from .exact_lr import LrResult, lr_cs, lr_ss, lr_two_suspect, swap_suspects
from .generative import (
    EvidencePair,
    Hypothesis,
    SpecificSourceParams,
    SuspectTruth,
    TwoSuspectParams,
    sample_pair,
    sample_two_suspect,
)
from .score_slr import frstat_ratio, slr_asym, slr_cs, slr_ss_es, slr_ss_eu, slr_two_suspect_anchored
from .stats_core import RngStream, kde_build, kde_log_pdf

CSV_COLUMNS = ("rep_id", "truth", "e_u", "e_s", "lr_ss", "lr_cs", "slr_cs",
               "slr_ss_es", "slr_ss_eu", "slr_asym", "frstat")
MODEL_COLUMNS = CSV_COLUMNS[4:]
COMPARED_MODELS = MODEL_COLUMNS[1:]

TRUTH_LABELS = {Hypothesis.H0: "H0_SS", Hypothesis.H1: "H1_SS"}


class Comparison(enum.Enum):
    CS_VS_SS = "CSvsSS"
    SLRCS_VS_SS = "SLRCSvsSS"
    SLRES_VS_SS = "SLRESvsSS"
    ASY_VS_SS = "ASYvsSS"
    ALL = "ALL"

    @property
    def y_columns(self) -> tuple:
        return {
            Comparison.CS_VS_SS: ("lr_cs",),
            Comparison.SLRCS_VS_SS: ("slr_cs",),
            Comparison.SLRES_VS_SS: ("slr_ss_es",),
            Comparison.ASY_VS_SS: ("slr_asym",),
            Comparison.ALL: COMPARED_MODELS,
        }[self]


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    params: SpecificSourceParams
    n_reps: int = 1000
    comparison: Comparison = Comparison.ALL
    seed: int = 42
    truths: tuple = (Hypothesis.H0, Hypothesis.H1)

    def __post_init__(self):
        if self.n_reps < 1:
            raise ParameterError(f"n_reps must be >= 1, got {self.n_reps}")


def standard_config(name: str, n_reps: int = 1000, seed: int = 42,
                 comparison: Comparison = Comparison.ALL) -> ExperimentConfig:
    """One of the shipped parameter sets.

    ``A``: common, variable control source; ``B``: rare, variable;
    ``C``: common, near-constant control source; ``B_precise``: rare and
    near-constant (second row of the common-source SLR comparison).
    """
    base = dict(mu=10.0, var_d=10.0, var_u=2.0)
    table = {
        "A": dict(mu_d=9.0, var_s=1.0),
        "B": dict(mu_d=0.0, var_s=1.0),
        "C": dict(mu_d=9.0, var_s=1e-5),
        "B_precise": dict(mu_d=0.0, var_s=1e-5),
    }
    if name not in table:
        raise ParameterError(f"unknown standard config {name!r}; choose from {sorted(table)}")
    return ExperimentConfig(name=name, params=SpecificSourceParams(**base, **table[name]),
                            n_reps=n_reps, seed=seed, comparison=comparison)


@dataclass(frozen=True)
class ExperimentRecord:
    rep_id: int
    truth: Hypothesis
    e_u: float
    e_s: float
    lr_ss: LrResult
    lr_cs: LrResult
    slr_cs: LrResult
    slr_ss_es: LrResult
    slr_ss_eu: LrResult
    slr_asym: LrResult
    frstat: LrResult

    def log10(self, column: str) -> float:
        return getattr(self, column).log10_value


def evaluate_pair(rep_id: int, pair: EvidencePair, p: SpecificSourceParams) -> ExperimentRecord:
    return ExperimentRecord(
        rep_id=rep_id, truth=pair.truth, e_u=pair.trace, e_s=pair.control,
        lr_ss=lr_ss(pair, p),
        lr_cs=lr_cs(pair, p.as_common_source()),
        slr_cs=slr_cs(pair, p),
        slr_ss_es=slr_ss_es(pair, p),
        slr_ss_eu=slr_ss_eu(pair, p),
        slr_asym=slr_asym(pair, p),
        frstat=frstat_ratio(pair, p),
    )


def replicate_stream(seed: int, rep_id: int, truth: Hypothesis) -> RngStream:
    return RngStream(seed, 2 * rep_id + (0 if truth is Hypothesis.H0 else 1))


@dataclass(frozen=True)
class ModelSummary:
    model: str
    n_used: int
    n_excluded: int
    fraction_overestimating: float
    fraction_misleading_low: float
    fraction_misleading_high: float
    median_abs_log10_gap: float
    rank_correlation: float

    @property
    def fraction_misleading_sign(self) -> float:
        return self.fraction_misleading_low + self.fraction_misleading_high


@dataclass
class SummaryStats:
    """Per (config, truth, model) comparison of a model against ``lr_ss``.

    ``fraction_misleading_low`` counts ``lr_ss < 1 < model`` and
    ``fraction_misleading_high`` counts ``model < 1 < lr_ss``.
    """

    config: str
    by_truth: dict = field(default_factory=dict)

    def get(self, truth: Hypothesis, model: str) -> ModelSummary:
        return self.by_truth[truth][model]

    def to_text(self) -> str:
        lines = [f"config {self.config}"]
        head = (f"  {'truth':6} {'model':10} {'n':>5} {'excl':>4} {'over':>6} "
                f"{'mis<1':>6} {'mis>1':>6} {'med|gap|':>9} {'rho':>7}")
        lines.append(head)
        for truth, models in self.by_truth.items():
            for m in models.values():
                lines.append(
                    f"  {TRUTH_LABELS[truth]:6} {m.model:10} {m.n_used:5d} {m.n_excluded:4d} "
                    f"{m.fraction_overestimating:6.3f} {m.fraction_misleading_low:6.3f} "
                    f"{m.fraction_misleading_high:6.3f} {m.median_abs_log10_gap:9.4f} "
                    f"{m.rank_correlation:7.4f}")
        return "\n".join(lines) + "\n"


def summarize_model(records, model: str) -> ModelSummary:
    ok = [r for r in records if not (r.lr_ss.is_infinite or getattr(r, model).is_infinite)]
    n = len(ok)
    excluded = len(records) - n
    if n == 0:
        return ModelSummary(model, 0, excluded, math.nan, math.nan, math.nan, math.nan, math.nan)
    ref = np.array([r.lr_ss.log10_value for r in ok])
    val = np.array([r.log10(model) for r in ok])
    if n > 1 and np.ptp(ref) > 0 and np.ptp(val) > 0:
        rho = float(spearmanr(ref, val).statistic)
    else:
        rho = math.nan
    return ModelSummary(
        model=model, n_used=n, n_excluded=excluded,
        fraction_overestimating=float(np.mean(val > ref)),
        fraction_misleading_low=float(np.mean((ref < 0) & (val > 0))),
        fraction_misleading_high=float(np.mean((ref > 0) & (val < 0))),
        median_abs_log10_gap=float(np.median(np.abs(val - ref))),
        rank_correlation=rho,
    )


def summarize(name: str, records) -> SummaryStats:
    stats = SummaryStats(config=name)
    truths = sorted({r.truth for r in records}, key=lambda h: h.value)
    for truth in truths:
        subset = [r for r in records if r.truth is truth]
        stats.by_truth[truth] = {m: summarize_model(subset, m) for m in COMPARED_MODELS}
    return stats


def run_config(c: ExperimentConfig):
    """Run every replicate of ``c`` under each truth; returns ``(records, summary)``.

    Records are ordered by truth, then ``rep_id``.  Replicate ``i`` under
    truth ``h`` always uses stream ``replicate_stream(c.seed, i, h)``.
    """

    def one(job):
        truth, rep_id = job
        pair = sample_pair(c.params, truth, replicate_stream(c.seed, rep_id, truth))
        return evaluate_pair(rep_id, pair, c.params)

    jobs = [(truth, i) for truth in c.truths for i in range(c.n_reps)]
    records = ordered_map(one, jobs)
    return records, summarize(c.name, records)


def _fmt(value: float) -> str:
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format(value, ".17g")


def records_to_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow([r.rep_id, TRUTH_LABELS[r.truth], _fmt(r.e_u), _fmt(r.e_s)]
                        + [_fmt(getattr(r, m).value) for m in MODEL_COLUMNS])
    return buf.getvalue()


def write_records_csv(records, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(records_to_csv(records))


# ---------------------------------------------------------------------------
# Coherence of suspect-centred SLRs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SearchSpace:
    mean_range: tuple = (-5.0, 5.0)
    var_range: tuple = (0.1, 5.0)


@dataclass(frozen=True)
class IncoherenceWitness:
    """Evidence on which the A-anchored and B-anchored SLRs point the same way.

    Both SLRs carry their own anchored source in the numerator.  ``kind`` is
    ``"both_own"`` when each supports its anchored source (both > 1) and
    ``"both_other"`` when each supports the other one (both < 1).
    """

    trial: int
    params: TwoSuspectParams
    truth: SuspectTruth
    e_u: float
    e_a: float
    e_b: float
    log10_slr_a: float
    log10_slr_b: float
    log10_lr_ab: float

    @property
    def kind(self) -> str:
        return "both_own" if self.log10_slr_a > 0 else "both_other"


@dataclass
class IncoherenceReport:
    n_trials: int
    witnesses: list
    max_reciprocity_error: float

    def count(self, kind: str | None = None) -> int:
        return sum(1 for w in self.witnesses if kind is None or w.kind == kind)


def anchored_slrs(e_u: float, e_a: float, e_b: float, p: TwoSuspectParams):
    slr_a = slr_two_suspect_anchored(e_u, e_a, p, SuspectTruth.HA)
    slr_b = slr_two_suspect_anchored(e_u, e_b, p, SuspectTruth.HB)
    return slr_a, slr_b


def incoherence_search(space: SearchSpace = SearchSpace(), n_trials: int = 10**4,
                       seed: int = 0) -> IncoherenceReport:
    """Random search for evidence on which anchored SLRs are not reciprocal in sign.

    Each trial draws parameters uniformly from ``space``, a generating
    source at random, and evidence from the two-suspect model.  The exact
    LR is checked for reciprocity on every trial.
    """
    if n_trials < 1:
        raise ParameterError(f"n_trials must be >= 1, got {n_trials}")

    def trial(i):
        stream = RngStream(seed, i)
        lo_m, hi_m = space.mean_range
        lo_v, hi_v = space.var_range
        mu_a, mu_b = stream.uniform(lo_m, hi_m, 2)
        var_a, var_b, var_u = stream.uniform(lo_v, hi_v, 3)
        p = TwoSuspectParams(mu_a=float(mu_a), var_a=float(var_a), mu_b=float(mu_b),
                             var_b=float(var_b), var_u=float(var_u))
        truth = SuspectTruth.HA if stream.uniform() < 0.5 else SuspectTruth.HB
        e_u, e_a, e_b = sample_two_suspect(p, truth, stream)
        lr_ab = lr_two_suspect(e_u, p)
        lr_ba = lr_two_suspect(e_u, swap_suspects(p))
        recip = abs(lr_ab.value * lr_ba.value - 1.0)
        slr_a, slr_b = anchored_slrs(e_u, e_a, e_b, p)
        witness = None
        if (slr_a.log10_value > 0) == (slr_b.log10_value > 0) and slr_a.log10_value != 0:
            witness = IncoherenceWitness(i, p, truth, e_u, e_a, e_b, slr_a.log10_value,
                                         slr_b.log10_value, lr_ab.log10_value)
        return witness, recip

    results = ordered_map(trial, range(n_trials))
    witnesses = [w for w, _ in results if w is not None]
    return IncoherenceReport(n_trials=n_trials, witnesses=witnesses,
                             max_reciprocity_error=max(r for _, r in results))


# ---------------------------------------------------------------------------
# Projection picture in a two dimensional feature space
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProjectionToy:
    """Two sources in the plane, isotropic within-source variance, one trace."""

    e_a: tuple
    e_b: tuple
    e_u: tuple
    var: float = 0.05

    def __post_init__(self):
        if not self.var > 0:
            raise ParameterError(f"var must be > 0, got {self.var}")


def scalar_projection(x, onto) -> np.ndarray:
    """Length of the orthogonal projection of ``x`` onto the direction ``onto``."""
    onto = np.asarray(onto, dtype=float)
    norm = float(np.hypot(*onto))
    if norm == 0:
        raise DegenerateLawError("cannot project onto a zero-length vector")
    return np.asarray(x, dtype=float) @ onto / norm


@dataclass
class AnchorProjection:
    """Projections of pseudo-traces and of ``e_u`` onto one anchor vector."""

    anchor: str
    from_a: np.ndarray
    from_b: np.ndarray
    e_u: float
    law_a: tuple
    law_b: tuple
    log10_slr: float
    log10_slr_empirical: float

    @property
    def favours(self) -> str:
        """Source supported by this anchored SLR (numerator is the anchor's source)."""
        own, other = (("A", "B") if self.anchor == "a" else ("B", "A"))
        if self.log10_slr == 0:
            return "neither"
        return own if self.log10_slr > 0 else other


@dataclass
class ProjectionDataset:
    toy: ProjectionToy
    onto_a: AnchorProjection
    onto_b: AnchorProjection
    log10_lr_ab: float

    @property
    def is_flip(self) -> bool:
        """A-anchored evaluation favours B and B-anchored favours A."""
        return self.onto_a.favours == "B" and self.onto_b.favours == "A"


def _normal_ln(x, mean, var):
    return -0.5 * (math.log(2 * math.pi * var) + (x - mean) ** 2 / var)


def _project_onto(anchor: str, toy: ProjectionToy, from_a, from_b) -> AnchorProjection:
    v = toy.e_a if anchor == "a" else toy.e_b
    pa, pb = scalar_projection(from_a, v), scalar_projection(from_b, v)
    pu = float(scalar_projection(toy.e_u, v))
    law_a = (float(scalar_projection(toy.e_a, v)), toy.var)
    law_b = (float(scalar_projection(toy.e_b, v)), toy.var)
    ln_a, ln_b = _normal_ln(pu, *law_a), _normal_ln(pu, *law_b)
    emp_a = float(kde_log_pdf(pu, kde_build(pa)))
    emp_b = float(kde_log_pdf(pu, kde_build(pb)))
    sign = 1.0 if anchor == "a" else -1.0
    return AnchorProjection(anchor, pa, pb, pu, law_a, law_b,
                            sign * (ln_a - ln_b) / math.log(10),
                            sign * (emp_a - emp_b) / math.log(10))


def projection_demo(toy: ProjectionToy, n_pseudo: int = 1000, seed: int = 0) -> ProjectionDataset:
    """Project pseudo-traces from both sources onto each source's vector.

    Scores here are inner products with the anchor (scalar projections).
    The returned dataset holds both projected samples per anchor, their
    normal laws, the projection of ``e_u`` and the anchored SLRs, closed
    form and from KDEs of the pseudo-traces.
    """
    if n_pseudo < 100:
        raise ParameterError(f"n_pseudo must be >= 100, got {n_pseudo}")
    for name in ("e_a", "e_b"):
        if float(np.hypot(*getattr(toy, name))) == 0:
            raise DegenerateLawError(f"{name} has zero length")
    stream = RngStream(seed, 0)
    sd = math.sqrt(toy.var)
    from_a = np.asarray(toy.e_a) + sd * stream.standard_normal((n_pseudo, 2))
    from_b = np.asarray(toy.e_b) + sd * stream.standard_normal((n_pseudo, 2))
    eu = np.asarray(toy.e_u, dtype=float)
    d2a = float(np.sum((eu - toy.e_a) ** 2))
    d2b = float(np.sum((eu - toy.e_b) ** 2))
    log10_lr = (d2b - d2a) / (2 * toy.var) / math.log(10)
    return ProjectionDataset(toy, _project_onto("a", toy, from_a, from_b),
                             _project_onto("b", toy, from_a, from_b), log10_lr)


def search_projection_flip(e_a, e_b, var: float = 0.5, n_grid: int = 41) -> ProjectionToy | None:
    """Grid search for a trace position that produces the projection flip.

    Scans the bounding box of the two source vectors for positions at
    least half as long as the shorter source vector where the exact LR
    favours A while the A-anchored projection SLR favours B and the
    B-anchored one favours A.  Returns the position where the weaker of
    the two flipped SLRs is strongest, or ``None`` if the grid has none.
    """
    a, b = np.asarray(e_a, float), np.asarray(e_b, float)
    pts = np.array([a, b, (0.0, 0.0)])
    xs = np.linspace(pts[:, 0].min(), pts[:, 0].max(), n_grid)
    ys = np.linspace(pts[:, 1].min(), pts[:, 1].max(), n_grid)
    na, nb = a / np.hypot(*a), b / np.hypot(*b)
    min_norm = 0.5 * min(np.hypot(*a), np.hypot(*b))
    best, best_strength = None, 0.0
    for x in xs:
        for y in ys:
            u = np.array([x, y])
            if np.sum((u - a) ** 2) >= np.sum((u - b) ** 2):
                continue
            pa, pb = u @ na, u @ nb
            if pa <= 0 or pb <= 0 or np.hypot(*u) < min_norm:
                continue
            # log SLRs in units of 1 / (2 var), each with its anchor in the numerator
            slr_a = (pa - b @ na) ** 2 - (pa - a @ na) ** 2
            slr_b = (pb - a @ nb) ** 2 - (pb - b @ nb) ** 2
            if slr_a < 0 and slr_b < 0:
                strength = min(-slr_a, -slr_b)
                if strength > best_strength:
                    best, best_strength = (float(x), float(y)), strength
    if best is None:
        return None
    return ProjectionToy(e_a=tuple(map(float, a)), e_b=tuple(map(float, b)), e_u=best, var=var)
