"""bideform: exact computation with graded bialgebras, their graded
bialgebra cohomology, and their graded deformations."""

from ._kernel import BACKEND as KERNEL_BACKEND
from .fields import QQ, GF, Field, PrimeField, RationalField
from .linalg import Matrix, rref, kernel_basis, solve, ff_rank
from .graded import (
    GradedSpace,
    GradedMap,
    TensorPower,
    tensor_power,
    tensor_map,
    flip_23,
    augmentation_split,
)
from .bialgebra import (
    GradedBialgebra,
    SweedlerExpansion,
    LiftingTables,
    verify_bialgebra,
    builtin_example,
    parse_bialgebra,
    emit_bialgebra,
    parse_lifting_tables,
)
from .cohomology import (
    Cochain,
    TotalCochain,
    CohomologyResult,
    StructuralMaps,
    structural_maps,
    delta_h,
    delta_c,
    total_differential,
    cochain_basis,
    cohomology,
    parse_total_cochain,
    emit_total_cochain,
)
from .deformation import (
    Deformation,
    DeformationMorphism,
    ObstructionClass,
    ExtensionResult,
    TrivializationResult,
    CohomologyClass,
    verify_deformation,
    truncated_ring_oracle,
    restrict,
    full_level,
    first_order_class,
    deformation_from_cocycle,
    verify_isomorphism,
    conjugate,
    obstruction,
    extend,
    trivialize,
    rigidity_check,
    lifting_decompose,
    tables_from_deformation,
    parse_deformation,
    emit_deformation,
)

__version__ = "0.1.0"
