"""Lift a chart metric and a two-form to an even Riemannian metric on the
antitangent bundle, then machine-check the identities the construction is
supposed to satisfy (pairing formulas, naturality under chart maps, the
exterior-calculus bracket table, and the classical limit)."""

from supersasaki.cartan import (
    CartanField,
    CheckOutcome,
    CheckReport,
    cartan_commutators,
    de_rham,
    interior,
    lie_derivative,
    super_commutator,
    verify_proposition,
)
from supersasaki.geometry import (
    AlmostSymplectic,
    Chart,
    ChristoffelSymbols,
    GeometryError,
    MetricTensor,
    OneForm,
    VectorFieldM,
    acs_candidate,
    bilinear_eval,
    christoffel,
    christoffel_fd,
    covariant_derivative,
    flat,
    metric_compatibility_residual,
    torsion_residual,
    vector_commutator,
)
from supersasaki.grassmann import (
    EVEN,
    ODD,
    GeneratorTable,
    GradedError,
    GradedExpr,
    epsilon,
    gmul,
    graded_equal,
    graded_to_text,
    gsubstitute,
    parse_graded,
    partial,
)
from supersasaki.sasakilift import (
    LiftedGeometry,
    VectorFieldPTM,
    classical_sasaki,
    lift_geometry,
    nabla_dot,
    pairing_closed_form,
    pairing_via_lift,
    ptm_table,
    random_base_field,
    random_field,
    super_sasaki,
    tptm_table,
    vector_field_on_base,
    vertical_lift,
)
from supersasaki.specfiles import (
    GeometrySpec,
    SpecError,
    load_base_field,
    load_geometry,
    load_map,
    load_ptm_field,
)
from supersasaki.symexpr import OracleConfig, ParseError, expr_equal, parse_expr
from supersasaki.transform import (
    NaturalityReport,
    SmoothMap,
    check_naturality,
    field_pullback,
    is_isometry,
    is_symplectomorphism,
    pairing_invariance,
    prolong,
    pullback,
    pullback_metric,
    pullback_two_form,
    transform_christoffel,
    transform_tensors,
)

__version__ = "0.1.0"

__all__ = [
    "AlmostSymplectic",
    "CartanField",
    "Chart",
    "CheckOutcome",
    "CheckReport",
    "ChristoffelSymbols",
    "EVEN",
    "GeneratorTable",
    "GeometryError",
    "GeometrySpec",
    "GradedError",
    "GradedExpr",
    "LiftedGeometry",
    "MetricTensor",
    "NaturalityReport",
    "ODD",
    "OneForm",
    "OracleConfig",
    "ParseError",
    "SmoothMap",
    "SpecError",
    "VectorFieldM",
    "VectorFieldPTM",
    "acs_candidate",
    "bilinear_eval",
    "cartan_commutators",
    "check_naturality",
    "christoffel",
    "christoffel_fd",
    "classical_sasaki",
    "covariant_derivative",
    "de_rham",
    "epsilon",
    "expr_equal",
    "field_pullback",
    "flat",
    "gmul",
    "graded_equal",
    "graded_to_text",
    "gsubstitute",
    "interior",
    "is_isometry",
    "is_symplectomorphism",
    "lie_derivative",
    "lift_geometry",
    "load_base_field",
    "load_geometry",
    "load_map",
    "load_ptm_field",
    "metric_compatibility_residual",
    "nabla_dot",
    "pairing_closed_form",
    "pairing_invariance",
    "pairing_via_lift",
    "parse_expr",
    "parse_graded",
    "partial",
    "prolong",
    "ptm_table",
    "pullback",
    "pullback_metric",
    "pullback_two_form",
    "random_base_field",
    "random_field",
    "super_commutator",
    "super_sasaki",
    "torsion_residual",
    "tptm_table",
    "transform_christoffel",
    "transform_tensors",
    "vector_commutator",
    "vector_field_on_base",
    "verify_proposition",
    "vertical_lift",
]
