"""Likelihood ratios and score-based likelihood ratios for forensic evidence.

Exact LRs for the common- and specific-source problems, closed-form score
laws for the squared-difference score, empirical SLRs from simulated score
samples, and the simulation studies that compare them.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConfigurationError,
    DegenerateLawError,
    DomainError,
    EstimationError,
    EvidentiaError,
    ParameterError,
)
from .exact_lr import LrResult, ModelTag, lr_cs, lr_ss, lr_two_suspect  # noqa: E402
from .generative import (  # noqa: E402
    CommonSourceParams,
    EvidencePair,
    Hypothesis,
    Scenario,
    SpecificSourceParams,
    SuspectTruth,
    TwoSuspectParams,
)
from .score_slr import (  # noqa: E402
    frstat_ratio,
    slr_asym,
    slr_cs,
    slr_ss_es,
    slr_ss_es_unconditioned,
    slr_ss_eu,
    slr_two_suspect_anchored,
)
from .stats_core import RngStream  # noqa: E402

__all__ = [
    "CommonSourceParams", "ConfigurationError", "DegenerateLawError", "DomainError",
    "EstimationError", "EvidencePair", "EvidentiaError", "Hypothesis", "LrResult", "ModelTag",
    "ParameterError", "RngStream", "Scenario", "SpecificSourceParams", "SuspectTruth",
    "TwoSuspectParams", "frstat_ratio", "lr_cs", "lr_ss", "lr_two_suspect", "slr_asym",
    "slr_cs", "slr_ss_es", "slr_ss_es_unconditioned", "slr_ss_eu", "slr_two_suspect_anchored",
]
