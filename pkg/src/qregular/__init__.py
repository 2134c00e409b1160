"""Exact linear representations of q-regular sequences and the asymptotics
of their summatory functions."""

from .asymptotics import (
    AsymptoticExpansion,
    ErrorTerm,
    FluctuationEstimate,
    InconclusiveJSRError,
    NonConvergentError,
    SmoothingResult,
    Term,
    TheoremHypothesisError,
    choose_R,
    expansion,
    fourier_coefficients,
    minimal_smoothing_order,
    sample_fluctuation,
    sample_fluctuations,
    smoothing_analysis,
)
from .core import (
    LinearRepresentation,
    RepresentationError,
    digits,
    dump_representation,
    evaluate,
    evaluate_prefix,
    load_representation,
    representation_from_dict,
    representation_to_dict,
    validate,
)
from .dandc import (
    DandCProblem,
    build_h_rep,
    classify,
    cross_check,
    d_values,
    dandc_oracle,
    minmax_fixture,
)
from .rational import RationalMatrix, format_rational, parse_rational
from .spectral import (
    NumericalAmbiguityError,
    eigenstructure,
    jordan_index,
    joint_spectral_radius,
    simple_growth_check,
)
from .summation import (
    direct_ksum,
    iterated_summatory_rep,
    naive_iterated_summatory_rep,
    summatory_rep,
)

__version__ = "0.1.0"
