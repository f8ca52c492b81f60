"""Exact-arithmetic invariants of singularities in characteristic p.

Frobenius roots of submodules of R^l over F_p, test ideals tau(f^alpha) and
their jumping exponents, list test modules with their jump sets, and
b-functions of square matrices over R[t].  All arithmetic is exact.
"""

from .bfun import (
    BFunctionResult,
    EulerWeight,
    b_function,
    euler_eigenvalue_candidates,
    graph_generator,
    weight_to_theta_digits,
)
from .errors import (
    FsingError,
    InternalConsistencyError,
    PolyParseError,
    ProblemFormatError,
    RankMismatchError,
    ResourceLimitExceeded,
    StabilizationError,
)
from .frobenius import (
    StableRootResult,
    bracket_power,
    d_closure,
    frobenius_root,
    stable_root,
)
from .listmod import (
    ChainEstimate,
    HFamily,
    JumpReport,
    MatrixList,
    TMatrix,
    assemble_A,
    decompose_A,
    estimate_jumping_numbers,
    h_expand,
    list_test_module,
    load_problem,
    load_problem_file,
    s_set,
)
from .modgb import (
    Submodule,
    VectorR,
    contains,
    contains_all,
    equals,
    groebner_basis,
    module_sum,
    prune_generators,
)
from .polyring import (
    CharConfig,
    Poly,
    PowerCache,
    Ring,
    frobenius_decompose,
    frobenius_power,
    grevlex_key,
    poly_parse,
)
from .rationals import ChainFit, GridRational, detect_chain_limit, snap_interval
from .testideal import (
    SeReport,
    f_jumping_exponents,
    s_set_simple,
    simple_list_I,
    simple_list_tau,
    tau_f,
    tau_f_stable,
)

__version__ = "0.1.0"
