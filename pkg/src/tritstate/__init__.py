"""Identify classes of d-valued functions of a dit from one oracle state."""

from .algebra import Ray, canonicalize_ray, cos_angle, inner_product, is_orthogonal
from .errors import InadmissibleEncoding, PromiseViolation, ResourceCapError, ZeroVectorError
from .oracle import (
    Alphabet,
    DitFunction,
    Encoding,
    enumerate_functions,
    oracle_vector,
    roots_of_unity_encoding,
)
from .partition import decompose_bases, orthogonality_graph, partition_rays, verify_mub
from .search import (
    conjecture_probe,
    final_system_determinant,
    lower_bound_scan,
    min_bases_for_encoding,
    proof_step_checks,
)
from .simulator import PromiseProblem, identify_class, measure, prepare_state, run_protocol

__version__ = "0.1.0"
