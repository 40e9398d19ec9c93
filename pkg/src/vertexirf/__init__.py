"""Numerical library for elliptic R-matrices of face and vertex type, the
intertwining-vector transform between them, difference-operator twists of
dynamical L-operators and the explicit intertwiners relating the two
resulting categories, plus residual-based verification suites."""

from .belavin import (BelavinRMatrix, BObject, build_RB,
                      check_reference_independence, check_rll_B,
                      check_z_periodicity, diagonal_solution_converse,
                      dual_B, morphism_check_B, tensor_B, trivial_B,
                      vector_rep_B, verify_belavin_properties)
from .config import ModuliConfig, format_complex, parse_complex
from .diffops import (DBObject, DiffOp, canonical_I, canonical_intertwiner,
                      check_E01_DB, check_I_structure, diffop_inverse,
                      diffop_residual, functor_F, functor_H,
                      morphism_check_DB, proportionality, prop4_intertwiner,
                      shift_exp, tensor_intertwiners, tilde_S, twist,
                      untilde, verify_lemma1)
from .errors import (ConvergenceError, DomainError, PoleError, SamplingError,
                     SingularFactorError, WeightError)
from .felder import (FObject, build_RF, check_lambda_periodicity,
                     check_rll_F, check_unitarity_F, check_weight_zero,
                     dual_F, dual_F_morphism, morphism_check_F, tensor_F,
                     tensor_F_morphisms, trivial_F, vector_rep_F,
                     verify_dqybe)
from .irf import build_S, check_det_ratio, verify_irf_components, verify_vertex_irf
from .sampling import (ResidualAccumulator, ResidualReport, lambda_grid,
                       sample_points)
from .suites import SUITES, RunReport, SuiteSpec, list_suites, run_suite
from .theta import alpha_beta, chi, phi_vec, theta, theta_char
from .weights import HModule, WeightKey, WeightVector

__version__ = "0.1.0"
