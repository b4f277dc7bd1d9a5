"""Scalar-diffraction holography simulation with variance-based sensitivity
analysis of the forward-model hyperparameters (wavelength, pixel pitch, SLM
resolution, propagation distance)."""

from ._version import __version__
from .exceptions import DegenerateInputError, MalformedHeaderError, VarianceZeroError
from .experiment import (
    CampaignConfig,
    CampaignResult,
    ComparisonResult,
    default_optics_bounds,
    load_corpus,
    load_results_csv,
    optics_from_params,
    run_forward_model_comparison,
    run_sensitivity_campaign,
)
from .field import ComplexField, field_from_target, resize_bilinear
from .metrics import MetricRecord, accuracy, metric_record, minmax_normalize, psnr, ssim
from .pgm import load_grayscale, save_grayscale
from .propagation import (
    AngularSpectrumPropagator,
    FourierPropagator,
    OpticsConfig,
    asm_transfer,
    make_propagator,
    propagate_asm,
    propagate_fourier,
    unitary_dft2,
)
from .retrieval import GerchbergSaxton, GsConfig, GsTrace, gs_run
from .rng import combine_seeds, random_phase
from .scoring import (
    AnchorPoints,
    CompositeWeights,
    anchor_points,
    complexity_correlation,
    composite_metric,
    generalization_metric,
    gs_weighted_metric,
    resilience_metric,
    resilience_neighborhood,
)
from .sensitivity import (
    Parameter,
    ParameterBounds,
    SaltelliDesign,
    SobolIndices,
    saltelli_design,
    sobol_indices,
    sobol_points,
)
from .stats import TestResult, pearson, spearman, wilcoxon_signed_rank

__all__ = [
    "__version__",
    "AnchorPoints",
    "AngularSpectrumPropagator",
    "CampaignConfig",
    "CampaignResult",
    "ComparisonResult",
    "ComplexField",
    "CompositeWeights",
    "DegenerateInputError",
    "FourierPropagator",
    "GerchbergSaxton",
    "GsConfig",
    "GsTrace",
    "MalformedHeaderError",
    "MetricRecord",
    "OpticsConfig",
    "Parameter",
    "ParameterBounds",
    "SaltelliDesign",
    "SobolIndices",
    "TestResult",
    "VarianceZeroError",
    "accuracy",
    "anchor_points",
    "asm_transfer",
    "combine_seeds",
    "complexity_correlation",
    "composite_metric",
    "default_optics_bounds",
    "field_from_target",
    "generalization_metric",
    "gs_run",
    "gs_weighted_metric",
    "load_corpus",
    "load_grayscale",
    "load_results_csv",
    "make_propagator",
    "metric_record",
    "minmax_normalize",
    "optics_from_params",
    "pearson",
    "propagate_asm",
    "propagate_fourier",
    "psnr",
    "random_phase",
    "resilience_metric",
    "resilience_neighborhood",
    "resize_bilinear",
    "run_forward_model_comparison",
    "run_sensitivity_campaign",
    "saltelli_design",
    "save_grayscale",
    "sobol_indices",
    "sobol_points",
    "spearman",
    "ssim",
    "unitary_dft2",
    "wilcoxon_signed_rank",
]
