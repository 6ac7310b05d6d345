"""Finite flat group schemes over perfect fields, via semilinear algebra.

The package is organised bottom-up:

``field``, ``witt``, ``covector``
    Arithmetic of F_{p^n}, truncated p-typical Witt vectors, and unipotent
    covectors.
``zq``, ``chain``
    Fast W(F_{p^n})/p^m arithmetic and matrices over chain rings (Smith
    normal form, kernels, cokernels, sigma-semilinear maps).
``dieudonne``, ``group_scheme``
    Finite-length modules with Frobenius and Verschiebung, their duals,
    decompositions and isomorphism tests; the group-scheme facade.
``cartier``
    V-complete modules presented as sums of unit/additive/formal/finite
    summands, with truncation and colimit calculators.
``cohomology``
    Geometric packets and the derived-pushforward calculators built on them.
``serialize``
    Canonical JSON for every value the CLI reads or writes.
"""

from .cartier import (
    AdditiveSummand,
    CartierModule,
    ComplexHResult,
    ConnectedDmReport,
    CwPiece,
    FiniteSummand,
    FormalSummand,
    TwoTermComplex,
    UnitSummand,
    cm_colimit_piece,
    cm_complex_h,
    cm_connected_dm,
    cm_mod_v_torsion,
    cm_new,
    cm_tc_n,
    cm_trunc,
    cm_v_torsion,
)
from .chain import (
    ChainRingMatrix,
    SemilinearMap,
    SmithDecomposition,
    compose,
    elementary_divisors,
    howell_form,
    identity_matrix,
    is_invertible,
    kernel_free,
    matrix_from_rows,
    matrix_from_witt,
    matrix_inv,
    matmul,
    row_span_contains,
    semilinear_cokernel,
    semilinear_kernel,
    smith_decompose,
    solve_free,
    solve_mod,
    transpose,
    zero_matrix,
)
from .cohomology import (
    CohomReport,
    DegreeData,
    FormalGroupReport,
    GeometricPacket,
    h_alpha_p,
    h_mu_p,
    h_omega_nu,
    h_z_p,
    les_check,
    packet_new,
    packet_validate,
    parallelogram_check,
    phi_fl_report,
    phi_obstruction,
    projective_bundle_mu,
    psi_report,
)
from .covector import (
    Covector,
    covector_F,
    covector_V,
    covector_add,
    covector_from_witt,
    covector_neg,
    covector_new,
    covector_sub,
    covector_to_witt,
    covector_zero,
)
from .dieudonne import (
    INDETERMINATE,
    DieudonneModule,
    DmMap,
    FourwayDecomposition,
    dm_alpha,
    dm_direct_sum,
    dm_dual,
    dm_equal,
    dm_exact_check,
    dm_fourway,
    dm_from_witt,
    dm_length,
    dm_map_new,
    dm_mu,
    dm_new,
    dm_ss_kernel,
    dm_v_stable_part,
    dm_word_cokernel,
    dm_word_kernel,
    dm_zero,
    dm_zmod,
    module_iso_test,
)
from .errors import (
    EnvelopeExceeded,
    FfgsError,
    FieldMismatch,
    MissingDegree,
    MissingDeRhamData,
    NotEquivariant,
    PrecisionExceeded,
    SchemaError,
    ShapeError,
    UnstableTruncation,
)
from .field import FieldSpec, embed_field, make_field
from .group_scheme import (
    GroupScheme,
    GsClassification,
    HeightOneData,
    atom_display_name,
    gs_atom,
    gs_classify,
    gs_dual,
    gs_from_module,
    gs_height,
    gs_height_one,
    gs_order,
)
from .serialize import from_jsonable, packet_from_jsonable, packet_to_jsonable, parse, serialize, to_jsonable
from .witt import (
    WittPolynomial,
    WittVector,
    teichmuller,
    witt_add,
    witt_mul,
    witt_mult_p,
    witt_neg,
    witt_one,
    witt_poly,
    witt_smul,
    witt_structure,
    witt_sub,
    witt_zero,
)
from .zq import ZqRing, from_zq, to_zq, zq_ring

__version__ = "0.1.0"
