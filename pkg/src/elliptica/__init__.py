"""Exact computations with positively elliptic algebras over Q."""

from .casebook import exceptional_lists, paper_examples, sweep_halperin, sweep_types
from .degreetypes import (
    FilterVerdict,
    SacReport,
    SamplingError,
    enumerate_degree_types,
    filter_pipeline,
    representable,
    sac_check,
    sample_presentation,
)
from .derivations import Derivation, DerivationSpace, HalperinReport, apply, derivation_space, halperin_check
from .quotient import (
    DegreeType,
    EllipticityReport,
    HilbertData,
    InconsistentDegreeType,
    PreconditionError,
    Presentation,
    PresentationError,
    detect_adapted_splitting,
    expected_hilbert,
    formal_dimension,
    hilbert_function,
    is_positively_elliptic,
    jacobian_class,
    normal_form,
    reduce_mod_ideal,
    reduce_to_pure_model,
)
from .ring import GradedContext, ParseError, Polynomial, RingError, format_polynomial, parse_polynomial

__version__ = "0.1.0"
