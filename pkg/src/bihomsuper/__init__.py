"""Exact-arithmetic toolkit for twisted graded Lie brackets.

Construct binary and ternary BiHom-Lie superalgebras from structure
constants, verify every defining identity exactly over the rationals, induce
ternary brackets from linear forms, solve twisted-derivation spaces, and
check Rota-Baxter and Nijenhuis operators together with the brackets and
deformations they generate.
"""

from .core import (
    EVEN,
    ODD,
    BihomError,
    DimensionError,
    GradedMap,
    LinearForm,
    ParityError,
    PreconditionError,
    Scalar,
    StructureTensor2,
    StructureTensor3,
    SuperSpace,
    TheoremContradictionError,
    WedgePair,
    commute,
    parity_components,
)
from .linalg import invert_matrix, kernel_basis, solve_linear
from .algebras import (
    BiHomLieSuperalgebra,
    ThreeBiHomLieSuperalgebra,
    TwistError,
    VerificationReport,
    Violation,
    make_twist_2,
    make_twist_3,
    verify_3bihom_jacobi,
    verify_3bihom_jacobi_cyclic,
    verify_3bihom_skewsymmetry,
    verify_bihom_jacobi,
    verify_bihom_skewsymmetry,
    verify_multiplicativity2,
    verify_multiplicativity3,
)
from .tau import TauWitness, bracket_annihilating_forms, check_tau_conditions, induce_tau
from .derivations import (
    DerivationQuery,
    DerivationSpace,
    check_derivation_transfer,
    check_quasiderivation_transfer,
    is_derivation_2,
    is_derivation_3,
    is_quasiderivation_2,
    is_quasiderivation_3,
    solve_derivation_space,
    solve_derivation_space_2,
    supercommutator,
    twist_power,
)
from .rota_baxter import (
    RotaBaxterOperator,
    check_inverse_derivation_equivalence,
    check_rb_transfer_criterion,
    is_rb2,
    is_rb3,
    make_projection_twisted_algebra,
    make_rb_bracket,
)
from .deformations import (
    DeformationPair,
    build_trivial_deformation,
    check_2cocycle,
    check_deformation,
    check_derivation_nijenhuis_rb_equivalence,
    check_nijenhuis_rb_compatibility,
    check_nijenhuis_transfer,
    is_nijenhuis_2,
    is_nijenhuis_3,
    make_n_bracket_1,
    make_n_bracket_2,
    omega_compose,
)
from .documents import (
    AlgebraDocument,
    DocumentError,
    document_digest,
    load_document,
    parse_document,
    save_document,
    serialize_document,
)
from .cli import RunReport, run_pipeline

__version__ = "0.1.0"
