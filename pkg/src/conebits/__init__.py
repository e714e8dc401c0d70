"""Bit streams from face counts of symmetric simplicial complexes.

Build f- and h-vectors of iterated cones, duals of simplices and palindromic
h-vectors; certify them against Dehn–Sommerville and McMullen's conditions;
pack them into bit streams; and run a native subset of the SP 800-22
statistical tests on the result.
"""

__version__ = "0.1.0"

from .bitcodec import (
    BitStream,
    encode_integer,
    encode_vector,
    encode_vector_byte_aligned,
    read_stream,
    write_stream,
)
from .combinatorics import (
    FVector,
    GraphSummary,
    HVector,
    RngConfig,
    binomial,
    cone_f,
    cone_h,
    f_of_graph,
    f_to_h,
    h_to_f,
    is_symmetrical,
    iterate_cone,
    palindromic_h,
    random_graph,
    read_vector,
    simplex_dual_f,
    write_vector,
)
from .gtheorem import (
    GVector,
    McMullenReport,
    check_dehn_sommerville,
    check_mcmullen,
    cone_failure_threshold,
    g_vector,
    macaulay_rep,
    polytope_profile,
    pseudo_power,
    vertex_equation_holds,
)
from .sts import SuiteParams, SuiteReport, TestResult, run_suite
