"""Phase retrieval with finite frames.

Construct frames, certify whether magnitudes of frame coefficients
determine a vector up to a global phase, produce explicit ambiguity
witnesses when they do not, and recover vectors from magnitude
measurements (exactly over the reals, heuristically over the complexes).
"""

from .linalg import DEFAULT_TOL, Tolerance
from .frames import (
    COMPLEX,
    REAL,
    CoefficientRange,
    Frame,
    FrameBounds,
    analysis,
    analysis_matrix,
    apply_invertible,
    canonical_dual,
    canonical_parseval,
    coefficient_range,
    frame_from_dict,
    frame_operator,
    frame_to_dict,
    gen_full_spark,
    gen_random,
    gen_repeated_tail,
    gen_windowed_fourier,
    load_frame,
    save_frame,
    synthesis,
)
from .magnitude import (
    SignPattern,
    apply_sign_pattern,
    canonical_ray,
    load_measurement,
    magnitude_map,
    measurement_from_dict,
    measurement_to_dict,
    project_vanishing,
    ray_equal,
    save_measurement,
)
from .injectivity import (
    VERDICT_INJECTIVE,
    VERDICT_NECESSARY,
    VERDICT_NOT_INJECTIVE,
    FullSpark,
    FullSparkEquivalence,
    InjectivityCertificate,
    certificate_to_dict,
    certify,
    complement_property,
    complex_size_check,
    full_spark_test,
    necessary_condition_for_M_2N_minus_1,
    sharpness_check,
    verify_witness,
    witness_pair,
)
from .reconstruct import (
    STATUS_AMBIGUOUS,
    STATUS_HEURISTIC_FAIL,
    STATUS_HEURISTIC_SUCCESS,
    STATUS_NO_SOLUTION,
    STATUS_UNIQUE,
    ReconstructionResult,
    SearchBudgetExceeded,
    enumerate_ambiguities,
    error_reduction,
    reconstruct_complex,
    reconstruct_real,
    result_to_dict,
)
from .experiments import (
    CellResult,
    ExperimentConfig,
    ExperimentReport,
    ThinSetWitness,
    run_complex_genericity,
    run_dense_interior_real,
    run_equivalence_invariance,
    run_real_genericity,
    write_report_csv,
    write_report_json,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_TOL",
    "Tolerance",
    "COMPLEX",
    "REAL",
    "CoefficientRange",
    "Frame",
    "FrameBounds",
    "analysis",
    "analysis_matrix",
    "apply_invertible",
    "canonical_dual",
    "canonical_parseval",
    "coefficient_range",
    "frame_from_dict",
    "frame_operator",
    "frame_to_dict",
    "gen_full_spark",
    "gen_random",
    "gen_repeated_tail",
    "gen_windowed_fourier",
    "load_frame",
    "save_frame",
    "synthesis",
    "SignPattern",
    "apply_sign_pattern",
    "canonical_ray",
    "load_measurement",
    "magnitude_map",
    "measurement_from_dict",
    "measurement_to_dict",
    "project_vanishing",
    "ray_equal",
    "save_measurement",
    "VERDICT_INJECTIVE",
    "VERDICT_NECESSARY",
    "VERDICT_NOT_INJECTIVE",
    "FullSpark",
    "FullSparkEquivalence",
    "InjectivityCertificate",
    "certificate_to_dict",
    "certify",
    "complement_property",
    "complex_size_check",
    "full_spark_test",
    "necessary_condition_for_M_2N_minus_1",
    "sharpness_check",
    "verify_witness",
    "witness_pair",
    "STATUS_AMBIGUOUS",
    "STATUS_HEURISTIC_FAIL",
    "STATUS_HEURISTIC_SUCCESS",
    "STATUS_NO_SOLUTION",
    "STATUS_UNIQUE",
    "ReconstructionResult",
    "SearchBudgetExceeded",
    "enumerate_ambiguities",
    "error_reduction",
    "reconstruct_complex",
    "reconstruct_real",
    "result_to_dict",
    "CellResult",
    "ExperimentConfig",
    "ExperimentReport",
    "ThinSetWitness",
    "run_complex_genericity",
    "run_dense_interior_real",
    "run_equivalence_invariance",
    "run_real_genericity",
    "write_report_csv",
    "write_report_json",
    "__version__",
]
