"""Exact-arithmetic engine for skew PBW extensions: normal-form rewriting,
lifted coefficient maps, a differential graded calculus, and a pipeline that
certifies differential smoothness at desk scale."""

from .coefficients import (
    CoeffEndo,
    CoeffPoly,
    CoeffRing,
    CoeffSigmaDerivation,
    apply_endo,
    apply_sder,
    commutation_audit,
)
from .calculus import CalculusSpec, DGen, DiffForm, IntegralForm, build_calculus, theorem_spec
from .core import Presentation, Relation, SkewPoly
from .corpus import CORPUS_NAMES, corpus, corpus_doc, corpus_source
from .dsl import ParseError, PresentationDoc, build_presentation, parse_presentation, render_presentation
from .errors import (
    CompatibilityError,
    ConfigError,
    HypothesisError,
    NotAVolumeFormError,
    SpbwError,
    UnsupportedCaseError,
    UnsupportedPresentationError,
)
from .extended import (
    AlgebraEndo,
    ExtendedDerivation,
    extend_delta,
    extend_sigma,
    hypothesis_check,
    verify_twisted_leibniz,
)
from .gkdim import FiltrationTable, SmoothnessReport, filtration_dims, gk_estimate, smoothness_verdict
from .ore import OreCaseData, ore_case_classify, ore_delta_from_p, ore_nu_maps
from .pipeline import run_smooth
from .report import Report
from .scalars import Scalar

__version__ = "0.1.0"
