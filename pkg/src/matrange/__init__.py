"""matrange: matrix ranges, membership SDPs, and minimal presentations."""

from .matcore import (
    MatrixTuple,
    herm_split,
    herm_join,
    direct_sum,
    direct_sum_all,
    compress,
    conjugate,
    tuple_to_json,
    tuple_to_dict,
    tuple_from_dict,
)
from .decomp import (
    BlockDecomposition,
    commutant_basis,
    dedup,
    irreducible_decomposition,
    unitary_equivalent,
)
from .sdp import (
    SdpOutcome,
    SdpProblem,
    SolveOptions,
    max_mineig,
    solve,
    verify_outcome,
)
from .convexity import (
    ChoiCertificate,
    MembershipVerdict,
    Pencil,
    PolytopeBody,
    exposing_pencil,
    inclusion,
    membership,
    separating_pencil,
    wmax_membership,
    wmin_membership,
)
from .extreme import (
    EquivalenceWitness,
    MinimalReport,
    classify_crucial,
    is_fully_compressed,
    minimal_presentation,
    recover_unitary,
    wmin_minimal_tuple,
)
from . import errors

__all__ = [
    "MatrixTuple",
    "herm_split",
    "herm_join",
    "direct_sum",
    "direct_sum_all",
    "compress",
    "conjugate",
    "tuple_to_json",
    "tuple_to_dict",
    "tuple_from_dict",
    "BlockDecomposition",
    "commutant_basis",
    "dedup",
    "irreducible_decomposition",
    "unitary_equivalent",
    "SdpOutcome",
    "SdpProblem",
    "SolveOptions",
    "max_mineig",
    "solve",
    "verify_outcome",
    "ChoiCertificate",
    "MembershipVerdict",
    "Pencil",
    "PolytopeBody",
    "exposing_pencil",
    "inclusion",
    "membership",
    "separating_pencil",
    "wmax_membership",
    "wmin_membership",
    "EquivalenceWitness",
    "MinimalReport",
    "classify_crucial",
    "is_fully_compressed",
    "minimal_presentation",
    "recover_unitary",
    "wmin_minimal_tuple",
    "errors",
]
