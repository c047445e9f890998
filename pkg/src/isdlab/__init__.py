"""Information set decoding laboratory: GF(2) algebra, concrete decoders,
a locality-sensitive-filtering near-neighbour engine and asymptotic cost
models with a parameter optimiser."""

from .gf2 import (
    BitMatrix, BitVector, Permutation, SystematicForm, hamming_distance, hamming_weight,
    mat_vec_mul, permute_columns, to_systematic,
)
from .instances import (
    IsdInstance, brute_force_min_weight, generate_instance, gv_relative_weight, gv_weight,
    verify_solution,
)
from .solvers import (
    DecodingParams, ListEntry, MemoryCapExceeded, SolverStats, bjmm_solve, build_half_lists,
    dumer_solve, merge_on_window, mmt_solve, prange_solve, predicted_trials,
)
from .lsf import (
    FilterCode, LsfParams, LsfStructure, build_filter_code, exhaustive_code, lsf_insert,
    lsf_query, lsf_remove, nn_dumer_solve, relevant_filters,
)
from .fileio import format_instance, parse_instance, read_instance, write_instance

__version__ = "0.1.0"
