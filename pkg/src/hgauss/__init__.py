"""Exact computations with Gaussian functionals on algebraic compact quantum groups."""

from .exact import I, ONE, ZERO, ResourceLimitError, Scalar, ScalarMatrix, psd_check, rref, smith_normal_form
from .freestar import NCPoly, TensorPoly, parse_poly, parse_tensor
from .gaussian import (
    GaussianDatum,
    check_classical,
    check_consistency,
    check_drift,
    solve_gaussian_space,
    wick_eval,
    wick_eval_recursive,
)
from .groups import (
    central_gaussian,
    class2_quotient,
    gaussian_part_dual,
    make_group,
    torsion_free_reduce,
)
from .hopf import HopfPresentation, catalogue, group_algebra, hopf_axiom_probe, su_q2
from .ideals import build_bounded_quotient, kac_generators, kinfty_probe, membership, s_squared, scaling_action
from .semigroup import convolution_power, exp_state, state_positivity_probe
from .syntax import ParseError

__version__ = "0.1.0"
