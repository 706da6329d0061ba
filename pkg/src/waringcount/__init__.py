"""Exact and approximate counting of combinatorial structures by evaluating
black-box generating polynomials at the points of explicit power-sum
decompositions of elementary symmetric polynomials."""

from .core import (
    BlackBoxPolynomial,
    LinearForm,
    SparsePolynomial,
    WaringDecomposition,
    WaringTerm,
    apply_operator,
    concat,
    elementary_symmetric,
    expand,
    homogeneity_probe,
    operator_on_sparse,
)
from .decomp import (
    DecompositionSpec,
    build_decomposition,
    char2_permanent_points,
    colorcoding_decomposition,
    decomposition_from_json,
    decomposition_to_json,
    direct_power_sum,
    lee_elementary,
    monomial_product_decomposition,
    perfect_splitter_composed,
    ryser_elementary,
    splitter_composed,
)
from .engines import (
    ApproxConfig,
    CountReport,
    DetectionReport,
    approx_multilinear_sum,
    certify_support_intersection,
    count_automorphisms,
    count_hamiltonian,
    count_set_partitions,
    count_simple_cycles,
    count_subgraphs_approx,
    detect_multilinear_char2,
    exact_multilinear_sum,
    permanent,
)
from .errors import (
    ConsistencyError,
    ContractViolation,
    DomainError,
    ParseError,
    SizeBudgetError,
)
from .genpoly import (
    Graph,
    SetSystem,
    TreeDecomposition,
    cycle_poly,
    exhaustive_decomposition,
    hom_poly,
    partition_poly,
    prod_poly,
    sparse_blackbox,
)
from .gf2 import GF2mField, GFBlackBox, gf_sparse_blackbox
from .rng import CounterRng
from .splitters import (
    BalanceReport,
    FunctionFamily,
    SplitterSpec,
    hash_family_lower_bound,
    sample_balanced_splitter,
    sample_perfect_splitter,
    sample_verified_balanced,
    sample_verified_perfect,
    verify_balanced,
    verify_perfect,
)

__version__ = "0.1.0"
