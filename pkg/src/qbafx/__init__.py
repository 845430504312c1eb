"""Quantitative bipolar argumentation: gradual semantics and edge attribution.

The package evaluates argument strengths under three gradual semantics and
explains a chosen topic argument by attributing its strength to the
framework's attack and support edges with Shapley values, computed exactly
or by Monte Carlo sampling. Structural edge classification, executable
property checks, random framework generation and a small CLI round out the
toolkit.
"""

from .analysis import (
    EdgeClass,
    EdgeKind,
    SignPrediction,
    classify_edge,
    paths_to_topic,
    predict_sign,
)
from .attribution import (
    AttributionMap,
    Contribution,
    ConvergenceFailure,
    EfficiencyReport,
    ExactSizeLimitError,
    classify_attributions,
    classify_contribution,
    efficiency_decomposition,
    exact_attribution,
    monte_carlo_attribution,
    neutrality_epsilon,
    subset_weight,
)
from .experiments import (
    BenchmarkRow,
    ConvergenceTrace,
    GenerationError,
    GenSpec,
    benchmark_runtime,
    generate,
    trace_convergence,
)
from .io import (
    DocumentError,
    QbafDocument,
    export_dot,
    load_document,
    parse_qbaf,
    path_contribution,
    read_qbaf_file,
    serialize_qbaf,
)
from .model import (
    ArgumentId,
    Edge,
    FrameworkValidationError,
    InvalidBaseScoresError,
    InvalidSubsetError,
    Polarity,
    Qbaf,
    QbafError,
    UnknownArgumentError,
    attack,
    support,
)
from .properties import (
    CheckStatus,
    PropertyReport,
    check_counterfactuality,
    check_dominance,
    check_dummy,
    check_efficiency,
    check_monotonicity,
    check_qualitative_invariability,
    check_quantitative_variability,
    check_stability,
    check_symmetry,
)
from .semantics import (
    ConvergenceConfig,
    Semantics,
    StrengthAssignment,
    aggregate_df_quad,
    aggregate_qe,
    aggregate_reb,
    evaluate,
    is_acyclic,
    topological_order,
)

__version__ = "0.1.0"

__all__ = [
    "ArgumentId",
    "AttributionMap",
    "BenchmarkRow",
    "CheckStatus",
    "Contribution",
    "ConvergenceConfig",
    "ConvergenceFailure",
    "ConvergenceTrace",
    "DocumentError",
    "Edge",
    "EdgeClass",
    "EdgeKind",
    "EfficiencyReport",
    "ExactSizeLimitError",
    "FrameworkValidationError",
    "GenSpec",
    "GenerationError",
    "InvalidBaseScoresError",
    "InvalidSubsetError",
    "Polarity",
    "PropertyReport",
    "Qbaf",
    "QbafDocument",
    "QbafError",
    "Semantics",
    "SignPrediction",
    "StrengthAssignment",
    "UnknownArgumentError",
    "aggregate_df_quad",
    "aggregate_qe",
    "aggregate_reb",
    "attack",
    "benchmark_runtime",
    "check_counterfactuality",
    "check_dominance",
    "check_dummy",
    "check_efficiency",
    "check_monotonicity",
    "check_qualitative_invariability",
    "check_quantitative_variability",
    "check_stability",
    "check_symmetry",
    "classify_attributions",
    "classify_contribution",
    "classify_edge",
    "efficiency_decomposition",
    "evaluate",
    "exact_attribution",
    "export_dot",
    "generate",
    "is_acyclic",
    "load_document",
    "monte_carlo_attribution",
    "neutrality_epsilon",
    "parse_qbaf",
    "path_contribution",
    "paths_to_topic",
    "predict_sign",
    "read_qbaf_file",
    "serialize_qbaf",
    "subset_weight",
    "support",
    "topological_order",
    "trace_convergence",
]
