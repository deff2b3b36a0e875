"""Forward-error bounds for floating-point inner products.

Closed-form deterministic and probabilistic (concentration-based) bounds
for the relative error of sequentially accumulated inner products, a
reduced-precision simulator that extracts every per-operation roundoff
with error-free transformations, seeded test-vector families, and a
desk-scale experiment harness with a CLI front end.
"""

from .bounds import (
    BoundReport,
    CoefficientVector,
    amplifier,
    azuma_tail,
    bound_report,
    coeffs_indep,
    coeffs_martingale,
    compact_upper,
    crossover_dimension,
    det_perturbation_bound,
    det_roundoff_indep,
    det_roundoff_martingale,
    det_roundoff_trad,
    gamma,
    gamma_classic_bound,
    prob_perturbation_bound,
    prob_roundoff_indep,
    prob_roundoff_martingale,
    simplest_prob_bound,
)
from .exceptions import EvenDimension, InputNotRepresentable, ZeroInnerProduct
from .experiments import (
    ExperimentConfig,
    SweepRecord,
    azuma_monte_carlo,
    run_sweep,
    violation_scan,
)
from .generators import FAMILIES, VectorPair, generate
from .precision import PrecisionSpec, probabilistic_factor
from .simulate import (
    RoundoffTrace,
    accumulate,
    accumulate_model1,
    accumulate_value,
    exact_inner_product,
    perturb_vectors,
    relative_error,
)

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "CoefficientVector",
    "EvenDimension",
    "ExperimentConfig",
    "FAMILIES",
    "InputNotRepresentable",
    "PrecisionSpec",
    "RoundoffTrace",
    "SweepRecord",
    "VectorPair",
    "ZeroInnerProduct",
    "accumulate",
    "accumulate_model1",
    "accumulate_value",
    "amplifier",
    "azuma_monte_carlo",
    "azuma_tail",
    "bound_report",
    "coeffs_indep",
    "coeffs_martingale",
    "compact_upper",
    "crossover_dimension",
    "det_perturbation_bound",
    "det_roundoff_indep",
    "det_roundoff_martingale",
    "det_roundoff_trad",
    "exact_inner_product",
    "gamma",
    "gamma_classic_bound",
    "generate",
    "perturb_vectors",
    "prob_perturbation_bound",
    "prob_roundoff_indep",
    "prob_roundoff_martingale",
    "probabilistic_factor",
    "relative_error",
    "run_sweep",
    "simplest_prob_bound",
    "violation_scan",
    "__version__",
]
