"""Exact-arithmetic workbench for tensor modules over the Witt algebra W_d.

The package builds the modules F = V (x) A_d from a catalog of gl_d fiber
modules, verifies the defining operator identities exactly over rational
scalars, replays the coefficient-extraction steps behind the irreducibility
argument, and produces finite certificates and budgeted evidence for
reducibility, cyclicity, and isomorphism questions.
"""

__version__ = "0.1.0"

from .exactlinalg import (
    LatticeVector,
    QVector,
    Rational,
    SparseVector,
    SubspaceBasis,
    contains,
    dot,
    format_rational,
    parse_rational,
    rref_basis,
    vandermonde_solve,
)
from .glmodules import (
    BasisKey,
    GlModuleSpec,
    InjectiveOnTruncation,
    ModuleVector,
    Nilpotent,
    apply_E,
    basis_enumerate,
    basis_vector,
    classify_operator,
    explicit,
    exterior,
    nilsson,
    symmetric,
    verify_gl_bracket,
)
from .structure import (
    ClosureBudget,
    CyclicityReport,
    GradedSubspace,
    IsoResult,
    NoCertificate,
    ReducibilityCertificate,
    Window,
    certify_reducible_fundamental,
    closure_reach,
    derham_map,
    derham_source_config,
    derham_target_config,
    find_cyclic_budget,
    is_window_cyclic,
    iso_criterion,
    verify_derham_intertwines,
)
from .wittaction import (
    FSpaceConfig,
    FVector,
    OperatorPolynomial,
    WittOperator,
    WittSum,
    act,
    act_sum,
    basis_fvector,
    bracket,
    cartan,
    extract_coefficient,
    interpolate_operator_polynomial,
    lattice_box,
    operator_box,
    replay_claim1,
    replay_claim2,
    shifted,
    verify_representation,
    weight_of,
)
