"""Flat-cohomology calculators over a geometric packet.

A packet carries, per cohomological degree i of a proper variety over a
perfect field k = F_q:

* ``wo``   — H^i(X, W O_X) as a Cartier module in summand form;
* ``o``    — H^i(X, O_X) with the p-power Frobenius (sigma-linear matrix A_i);
* ``b``    — H^i(X, B Omega^1) with the Cartier operator (twist -1) and a flag
  saying whether the level tower has stabilized;
* ``d``    — the boundary matrix H^i(O) -> H^i(B Omega^1) of dlog;
* ``etale_corank`` — declared etale corank (not derivable from the above).

The calculators return the group-scheme reports for R^i f_* of alpha_p, Z/p,
mu_{p^n}, omega_n and nu_n, the Artin-Mazur functors Phi/Psi with their
canonical decompositions, and exactness / commutation checks for the defining
diagrams.

Degree lookup follows one rule: the degree a caller asks about must be
declared, while neighboring degrees used as auxiliary input are zero-filled
when absent.  Negative degrees are always empty.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cartier import (
    CartierModule,
    CwPiece,
    FiniteSummand,
    AdditiveSummand,
    FormalSummand,
    UnitSummand,
    ConnectedDmReport,
    cm_colimit_piece,
    cm_connected_dm,
    cm_mod_v_torsion,
    cm_new,
    cm_v_torsion,
)
from .chain import (
    ChainRingMatrix,
    SemilinearMap,
    compose as sl_compose,
    identity_matrix,
    kernel_free,
    matmul,
    mat_sigma,
    smith_decompose,
    solve_mod,
    zero_matrix,
)
from .dieudonne import (
    DieudonneModule,
    dm_direct_sum,
    dm_exact_check,
    dm_length,
    dm_map_new,
    dm_new,
    dm_v_stable_part,
    dm_zero,
    _check_equivariance,
)
from .errors import (
    BadParameter,
    MissingDegree,
    MissingDeRhamData,
    NotEquivariant,
    SchemaError,
    ShapeError,
)
from .field import FieldSpec
from .zq import ZqRing, zq_ring

__all__ = [
    "DegreeData",
    "GeometricPacket",
    "CohomReport",
    "FormalGroupReport",
    "packet_new",
    "packet_validate",
    "h_alpha_p",
    "h_z_p",
    "h_mu_p",
    "h_omega_nu",
    "phi_fl_report",
    "phi_obstruction",
    "psi_report",
    "les_check",
    "parallelogram_check",
    "projective_bundle_mu",
]

FqMat = "tuple[tuple[tuple[int, ...], ...], ...]"


@dataclass(frozen=True)
class DegreeData:
    """One cohomological degree of a packet; de Rham fields may be absent."""

    wo: CartierModule
    o_dim: int = 0
    o_matrix: "FqMat | None" = None
    b_dim: int = 0
    b_matrix: "FqMat | None" = None
    b_stabilized: bool = True
    d_matrix: "FqMat | None" = None
    etale_corank: "int | None" = None
    o_twist: int = 1
    b_twist: int = -1

    @property
    def has_derham(self) -> bool:
        return self.o_matrix is not None


@dataclass(frozen=True)
class GeometricPacket:
    field: FieldSpec
    witt_precision: int
    v_precision: int
    extension_policy: str
    degrees: "dict[int, DegreeData]"
    name: str = ""


@dataclass(frozen=True)
class CohomReport:
    """R^i f_* G as (finite group scheme) + (vector group) + (etale rank)."""

    coefficient: str
    degree: int
    finite_part: DieudonneModule
    vector_dim: int
    etale_rank: "int | None"
    extension_status: str
    warnings: "tuple[str, ...]" = ()


@dataclass(frozen=True)
class FormalGroupReport:
    kind: str
    degree: int
    connected: ConnectedDmReport
    inf_obstruction: DieudonneModule
    etale_corank: "int | None"
    mult_corank: int
    unipotent_dim: int
    extension_status: str
    warnings: "tuple[str, ...]" = ()


def packet_new(
    field: FieldSpec,
    degrees: "dict[int, DegreeData]",
    witt_precision: int = 6,
    v_precision: int = 6,
    extension_policy: str = "split",
    name: str = "",
) -> GeometricPacket:
    P = GeometricPacket(field, witt_precision, v_precision, extension_policy, dict(degrees), name)
    packet_validate(P)
    return P


# -- degree access -----------------------------------------------------------


def _empty_degree(P: GeometricPacket) -> DegreeData:
    wo = cm_new(P.field, [], P.v_precision, P.witt_precision)
    return DegreeData(wo, 0, (), 0, (), True, (), 0)


def _aux(P: GeometricPacket, j: int) -> DegreeData:
    return P.degrees[j] if j in P.degrees else _empty_degree(P)


def _target(P: GeometricPacket, i: int) -> DegreeData:
    if i < 0 or i not in P.degrees:
        raise MissingDegree(f"degree {i} not present in packet")
    return P.degrees[i]


def _derham(dd: DegreeData) -> DegreeData:
    if not dd.has_derham:
        raise MissingDeRhamData("degree carries no o/b/d data")
    return dd


# -- F_q linear algebra (precision-1 chain matrices) --------------------------


def _r1(field: FieldSpec) -> ZqRing:
    return zq_ring(field, 1)


def _fq_mat(field: FieldSpec, grid, rows: int, cols: int) -> ChainRingMatrix:
    R = _r1(field)
    if len(grid) != rows or any(len(r) != cols for r in grid):
        raise ShapeError(f"matrix must be {rows}x{cols}")
    ent = tuple(tuple(tuple(c % R.pm for c in e) for e in row) for row in grid)
    return ChainRingMatrix(R, rows, cols, ent)


def _fq_rank(A: ChainRingMatrix) -> int:
    if not A.rows or not A.cols:
        return 0
    return sum(1 for e in smith_decompose(A).exponents if e == 0)


def _fq_ker_basis(A: ChainRingMatrix) -> ChainRingMatrix:
    """Columns form a k-basis of ker(A) inside k^cols."""
    R = A.ring
    if not A.cols:
        return ChainRingMatrix(R, 0, 0, ())
    if not A.rows:
        return identity_matrix(R, A.cols)
    cols = [g for _, g in kernel_free(A)]
    return ChainRingMatrix(R, A.cols, len(cols), tuple(tuple(c[i] for c in cols) for i in range(A.cols)))


def _fq_coker(A: ChainRingMatrix) -> tuple[int, ChainRingMatrix, ChainRingMatrix]:
    """coker(A) inside k^rows: (dimension, projection t x rows, section rows x t).

    projection . section = id and projection . A = 0, so the pair identifies
    the quotient with a direct complement of the image.
    """
    R = A.ring
    rows = A.rows
    if not rows:
        z = ChainRingMatrix(R, 0, 0, ())
        return 0, z, z
    if not A.cols:
        I = identity_matrix(R, rows)
        return rows, I, I
    S = smith_decompose(A)
    free = [k for k in range(rows) if k >= len(S.exponents) or S.exponents[k] > 0]
    proj = ChainRingMatrix(R, len(free), rows, tuple(S.U.entries[k] for k in free))
    sect = ChainRingMatrix(R, rows, len(free), tuple(tuple(S.Uinv.entries[i][k] for k in free) for i in range(rows)))
    return len(free), proj, sect


def _stable_rank(A: ChainRingMatrix) -> int:
    """Rank of A . sigma(A) ... sigma^{t-1}(A) for t = dim: the semisimple
    rank of the sigma-linear operator x -> A sigma(x)."""
    t = A.rows
    if not t:
        return 0
    f = SemilinearMap(A, 1, (1,) * t, (1,) * t)
    acc = f
    for _ in range(t - 1):
        acc = sl_compose(acc, f)
    return _fq_rank(acc.matrix)


def _is_zero_mat(A: ChainRingMatrix) -> bool:
    return all(not any(e) for row in A.entries for e in row)


# -- co-Witt side ---------------------------------------------------------------


def _cw_module(P: GeometricPacket, j: int) -> CartierModule:
    """Degree-j cohomology of the unipotent co-Witt sheaf: wo_j mod V-torsion
    with the V-torsion of degree j+1 attached as a finite correction."""
    summands = list(cm_mod_v_torsion(_aux(P, j).wo).summands)
    tor = cm_v_torsion(_aux(P, j + 1).wo)
    if tor.rank:
        summands.append(FiniteSummand(tor))
    return cm_new(P.field, summands, P.v_precision, P.witt_precision)


def _wo_free(P: GeometricPacket, j: int) -> CartierModule:
    """wo_j with finite summands dropped: the part whose coker F / ker F
    predict the B Omega^1 tower."""
    summands = [s for s in _aux(P, j).wo.summands if not isinstance(s, FiniteSummand)]
    return cm_new(P.field, summands, P.v_precision, P.witt_precision)


def _merge_pieces(
    field: FieldSpec, coker: CwPiece, ker: CwPiece, policy: str
) -> tuple[DieudonneModule, int, str]:
    parts = [m for m in (coker.finite, ker.finite) if m.rank]
    finite = dm_direct_sum(*parts) if parts else dm_zero(field)
    coker_trivial = not coker.finite.rank and not coker.vector_dim
    ker_trivial = not ker.finite.rank and not ker.vector_dim
    if coker_trivial or ker_trivial:
        status = "canonical"
    else:
        status = "split-assumed" if policy == "split" else "undetermined"
    return finite, coker.vector_dim + ker.vector_dim, status


# -- validation -------------------------------------------------------------------


def packet_validate(P: GeometricPacket) -> dict:
    """Fatal structural checks, then warning-level semantic cross-checks."""
    if P.witt_precision < 1 or P.v_precision < 1:
        raise SchemaError("precisions must be >= 1")
    if P.extension_policy not in ("split", "strict"):
        raise SchemaError(f"unknown extension policy {P.extension_policy!r}")
    n = P.field.n
    for i, dd in sorted(P.degrees.items()):
        path = f"degrees[{i}]"
        if i < 0:
            raise SchemaError(f"{path}: negative degree")
        if dd.wo.field != P.field:
            raise SchemaError(f"{path}.wo: field mismatch")
        if dd.wo.v_precision != P.v_precision or dd.wo.witt_precision != P.witt_precision:
            raise SchemaError(f"{path}.wo: precision mismatch with packet")
        if dd.etale_corank is not None and dd.etale_corank < 0:
            raise SchemaError(f"{path}.etale_corank: negative")
        if dd.o_twist != 1:
            raise SchemaError(f"{path}.o: Frobenius twist must be +1")
        if dd.b_twist != -1:
            raise SchemaError(f"{path}.b: Cartier twist must be -1")
        if dd.o_matrix is None:
            if dd.o_dim or dd.b_dim:
                raise SchemaError(f"{path}: dims declared without matrices")
            continue
        for mat, rows, cols, tag in (
            (dd.o_matrix, dd.o_dim, dd.o_dim, "o"),
            (dd.b_matrix, dd.b_dim, dd.b_dim, "b"),
            (dd.d_matrix, dd.b_dim, dd.o_dim, "d"),
        ):
            if mat is None:
                raise SchemaError(f"{path}.{tag}: matrix missing")
            if len(mat) != rows or any(len(r) != cols for r in mat):
                raise ShapeError(f"{path}.{tag}: expected {rows}x{cols}")
            for r in mat:
                for e in r:
                    if len(e) != n or any(not isinstance(c, int) for c in e):
                        raise SchemaError(f"{path}.{tag}: entries must be length-{n} coefficient tuples")

    warnings: list[str] = []
    if P.v_precision >= 3:
        # The B Omega^1 tower is determined by the W O side: level dimension
        # = len coker(F | H^i) + len ker(F | H^{i+1}), stable or growing with
        # the slope of those colimits.  Disagreement is suspicious, not fatal.
        for i in sorted(P.degrees):
            dd = P.degrees[i]
            if not dd.has_derham:
                continue
            ck = cm_colimit_piece(_wo_free(P, i), "F", 1, "coker")
            kr = cm_colimit_piece(_wo_free(P, i + 1), "F", 1, "ker")
            stable_dim = dm_length(ck.finite) + dm_length(kr.finite)
            slope = ck.vector_dim + kr.vector_dim
            if dd.b_stabilized:
                if slope:
                    warnings.append(f"degrees[{i}].b: declared stable but the W O side predicts a growing tower")
                elif dd.b_dim != stable_dim:
                    warnings.append(f"degrees[{i}].b: dim {dd.b_dim} != {stable_dim} predicted by the W O side")
            else:
                if not slope:
                    warnings.append(f"degrees[{i}].b: declared growing but the W O side predicts stabilization")
                elif dd.b_dim != slope * P.v_precision:
                    warnings.append(
                        f"degrees[{i}].b: level dim {dd.b_dim} != slope {slope} x precision {P.v_precision}"
                    )
    else:
        warnings.append("v_precision < 3: W O / B Omega^1 cross-checks skipped")
    return {"valid": True, "warnings": warnings}


# -- additive-group coefficients ----------------------------------------------------


def h_alpha_p(P: GeometricPacket, i: int) -> CohomReport:
    """R^i f_* alpha_p from [O ->F O]: coker(F | H^{i-1}) is a vector group of
    the corank of A_{i-1}; ker(F | H^i) splits as G_a^{dim ker A_i} x
    alpha_p^{rank A_i}."""
    dd = _derham(_target(P, i))
    prev = _aux(P, i - 1)
    if (i - 1) in P.degrees:
        _derham(prev)
    A_prev = _fq_mat(P.field, prev.o_matrix or (), prev.o_dim, prev.o_dim)
    A_cur = _fq_mat(P.field, dd.o_matrix, dd.o_dim, dd.o_dim)
    corank_prev = prev.o_dim - _fq_rank(A_prev)
    rank_cur = _fq_rank(A_cur)
    vector = corank_prev + (dd.o_dim - rank_cur)
    if rank_cur:
        Z = zero_matrix(_r1(P.field), rank_cur, rank_cur)
        finite = dm_new(P.field, (1,) * rank_cur, Z, Z)
    else:
        finite = dm_zero(P.field)
    if corank_prev == 0 or dd.o_dim == 0:
        status = "canonical"
    else:
        status = "split-assumed" if P.extension_policy == "split" else "undetermined"
    return CohomReport("alpha_p", i, finite, vector, 0, status)


def h_z_p(P: GeometricPacket, i: int) -> CohomReport:
    """R^i f_* Z/p from [O ->(1-F) O]: etale of rank the semisimple rank of
    the Frobenius matrix."""
    if i < 0:
        return CohomReport("z_p", i, dm_zero(P.field), 0, 0, "canonical")
    dd = _derham(_target(P, i))
    A = _fq_mat(P.field, dd.o_matrix, dd.o_dim, dd.o_dim)
    return CohomReport("z_p", i, dm_zero(P.field), 0, _stable_rank(A), "canonical")


# -- mu_{p^n} --------------------------------------------------------------------------


def _graded_mu_pieces(P: GeometricPacket, i: int, aux: bool = False):
    """The two graded pieces of H^i([O ->d B Omega^1]):

    * ker(d_i) with the Frobenius matrix restricted along the basis;
    * coker(d_{i-1}) with the Cartier operator pushed to the quotient.

    Returns (ker_mod, FK, K, cok_mod, Vbar, proj, sect, prev, dd).
    """
    field = P.field
    if aux:
        dd = _aux(P, i)
        if i in P.degrees:
            _derham(dd)
    else:
        dd = _derham(_target(P, i))
    prev = _aux(P, i - 1)
    if (i - 1) in P.degrees:
        _derham(prev)
    R = _r1(field)
    A = _fq_mat(field, dd.o_matrix or (), dd.o_dim, dd.o_dim)
    D = _fq_mat(field, dd.d_matrix or (), dd.b_dim, dd.o_dim)
    K = _fq_ker_basis(D)
    t_ker = K.cols
    if t_ker:
        sol_cols = []
        AK = matmul(A, mat_sigma(K, 1))
        for j in range(t_ker):
            b = tuple(AK.entries[s][j] for s in range(dd.o_dim))
            c = solve_mod(K, b, (1,) * dd.o_dim)
            if c is None:
                raise NotEquivariant("F does not stabilize ker(d): packet violates d.F = 0")
            sol_cols.append(c)
        FK = ChainRingMatrix(R, t_ker, t_ker, tuple(tuple(col[s] for col in sol_cols) for s in range(t_ker)))
        ker_mod = dm_new(field, (1,) * t_ker, FK, zero_matrix(R, t_ker, t_ker))
    else:
        FK = zero_matrix(R, 0, 0)
        ker_mod = dm_zero(field)

    Dp = _fq_mat(field, prev.d_matrix or (), prev.b_dim, prev.o_dim)
    Cp = _fq_mat(field, prev.b_matrix or (), prev.b_dim, prev.b_dim)
    t_cok, proj, sect = _fq_coker(Dp)
    if t_cok:
        Vbar = matmul(proj, matmul(Cp, mat_sigma(sect, -1)))
        cok_mod = dm_new(field, (1,) * t_cok, zero_matrix(R, t_cok, t_cok), Vbar)
    else:
        Vbar = zero_matrix(R, 0, 0)
        cok_mod = dm_zero(field)
    return ker_mod, FK, K, cok_mod, Vbar, proj, sect, prev, dd


def h_mu_p(P: GeometricPacket, i: int, n: int = 1) -> CohomReport:
    """R^i f_* mu_{p^n}.

    n = 1 reads the de Rham description H^i([O ->d B Omega^1]) with its
    graded Frobenius / Cartier actions; n > 1 evaluates p^n on the co-Witt
    side.  The etale part is taken from the declared corank.
    """
    if n < 1:
        raise BadParameter("mu_{p^n} needs n >= 1")
    coefficient = "mu_p" if n == 1 else f"mu_p^{n}"
    dd = _target(P, i)
    etale = dd.etale_corank
    warnings: tuple[str, ...] = ()
    if etale is None:
        warnings = ("etale corank not declared: reported as absent",)
    if n > 1:
        ck = cm_colimit_piece(_cw_module(P, i - 1), "p", n, "coker")
        kr = cm_colimit_piece(_cw_module(P, i), "p", n, "ker")
        finite, vector, status = _merge_pieces(P.field, ck, kr, P.extension_policy)
        return CohomReport(coefficient, i, finite, vector, etale, status, warnings)

    ker_mod, _, _, cok_mod, _, _, _, prev, _ = _graded_mu_pieces(P, i)
    vector = 0
    cok_finite = cok_mod
    if not prev.b_stabilized and cok_mod.rank:
        # Growing tower: the V-divided part of the cokernel is a vector group
        # of dimension the slope; only the part where the Cartier operator
        # stays bijective survives as a finite group.
        if prev.b_dim % P.v_precision:
            raise ShapeError("growing b tower must have level dim = slope x v_precision")
        vector = prev.b_dim // P.v_precision
        cok_finite = dm_v_stable_part(cok_mod)
    parts = [m for m in (cok_finite, ker_mod) if m.rank]
    finite = dm_direct_sum(*parts) if parts else dm_zero(P.field)
    cok_trivial = not cok_finite.rank and not vector
    if cok_trivial or not ker_mod.rank:
        status = "canonical"
    else:
        status = "split-assumed" if P.extension_policy == "split" else "undetermined"
    return CohomReport(coefficient, i, finite, vector, etale, status, warnings)


def h_omega_nu(P: GeometricPacket, i: int, n: int, kind: str = "omega") -> CohomReport:
    """R-hat^i f_* omega_n (V^n on co-Witt degrees i-1, i) or nu_n (F^n on
    degrees i, i+1)."""
    if n < 1:
        raise BadParameter(f"{kind}_n needs n >= 1")
    if kind not in ("omega", "nu"):
        raise BadParameter(f"unknown coefficient kind {kind!r}")
    _target(P, i)
    if kind == "omega":
        ck = cm_colimit_piece(_cw_module(P, i - 1), "V", n, "coker")
        kr = cm_colimit_piece(_cw_module(P, i), "V", n, "ker")
    else:
        ck = cm_colimit_piece(_cw_module(P, i), "F", n, "coker")
        kr = cm_colimit_piece(_cw_module(P, i + 1), "F", n, "ker")
    finite, vector, status = _merge_pieces(P.field, ck, kr, P.extension_policy)
    return CohomReport(f"{kind}_{n}", i, finite, vector, 0, status)


# -- Artin-Mazur functors ----------------------------------------------------------------


def phi_fl_report(P: GeometricPacket, i: int) -> FormalGroupReport:
    """Phi^i: connected smooth part from wo_i mod V-torsion, infinitesimal
    obstruction from the V-torsion of degree i+1."""
    dd = _target(P, i)
    connected = cm_connected_dm(cm_mod_v_torsion(dd.wo))
    inf = cm_v_torsion(_aux(P, i + 1).wo)
    if not inf.rank:
        status = "canonical"
    else:
        status = "split-assumed" if P.extension_policy == "split" else "undetermined"
    return FormalGroupReport(
        "phi_fl", i, connected, inf, 0, connected.mult_corank, connected.unipotent_dim, status
    )


def phi_obstruction(P: GeometricPacket, i: int) -> DieudonneModule:
    """V-power-torsion of wo_i; zero exactly when Phi^i is prorepresentable."""
    return cm_v_torsion(_target(P, i).wo)


def psi_report(P: GeometricPacket, i: int) -> FormalGroupReport:
    """Psi^i: the enlarged functor, whose unipotent part also sees the
    additive summands one degree down."""
    dd = _target(P, i)
    connected = cm_connected_dm(cm_mod_v_torsion(dd.wo))
    inf = cm_v_torsion(_aux(P, i + 1).wo)
    mult = sum(s.rank for s in dd.wo.summands if isinstance(s, UnitSummand))
    uni = sum(s.rank for s in dd.wo.summands if isinstance(s, AdditiveSummand))
    uni += sum(s.mult for s in dd.wo.summands if isinstance(s, FormalSummand))
    uni += sum(s.rank for s in _aux(P, i - 1).wo.summands if isinstance(s, AdditiveSummand))
    warnings: tuple[str, ...] = ()
    if dd.etale_corank is None:
        warnings = ("etale corank not declared: connected-etale sequence incomplete",)
    if not inf.rank:
        status = "canonical"
    else:
        status = "split-assumed" if P.extension_policy == "split" else "undetermined"
    return FormalGroupReport("psi", i, connected, inf, dd.etale_corank, mult, uni, status, warnings)


# -- diagram checks -----------------------------------------------------------------------


def _h_o_module(P: GeometricPacket, dd: DegreeData) -> DieudonneModule:
    A = _fq_mat(P.field, dd.o_matrix or (), dd.o_dim, dd.o_dim)
    return dm_new(P.field, (1,) * dd.o_dim, A, zero_matrix(_r1(P.field), dd.o_dim, dd.o_dim))


def _h_b_module(P: GeometricPacket, dd: DegreeData) -> DieudonneModule:
    C = _fq_mat(P.field, dd.b_matrix or (), dd.b_dim, dd.b_dim)
    return dm_new(P.field, (1,) * dd.b_dim, zero_matrix(_r1(P.field), dd.b_dim, dd.b_dim), C)


def _h_c_module(P: GeometricPacket, i: int, aux: bool = False):
    """Graded H^i([O -> B Omega^1]) = coker(d_{i-1}) + ker(d_i), together with
    iota: H^{i-1}(B) -> H^i and pi: H^i -> H^i(O)."""
    R = _r1(P.field)
    ker_mod, FK, K, cok_mod, Vbar, proj, _, prev, dd = _graded_mu_pieces(P, i, aux=aux)
    t1, t2 = cok_mod.rank, ker_mod.rank
    r = t1 + t2
    F = [[R.zero()] * r for _ in range(r)]
    V = [[R.zero()] * r for _ in range(r)]
    for a in range(t1):
        for b in range(t1):
            V[a][b] = Vbar.entries[a][b]
    for a in range(t2):
        for b in range(t2):
            F[t1 + a][t1 + b] = FK.entries[a][b]
    C = dm_new(
        P.field,
        (1,) * r,
        ChainRingMatrix(R, r, r, tuple(tuple(row) for row in F)),
        ChainRingMatrix(R, r, r, tuple(tuple(row) for row in V)),
    )
    iota = ChainRingMatrix(
        R,
        r,
        prev.b_dim,
        tuple(
            tuple(proj.entries[a]) if a < t1 else tuple(R.zero() for _ in range(prev.b_dim))
            for a in range(r)
        ),
    )
    pi = ChainRingMatrix(
        R,
        dd.o_dim,
        r,
        tuple(
            tuple(R.zero() for _ in range(t1)) + tuple(K.entries[s][j] for j in range(t2))
            for s in range(dd.o_dim)
        ),
    )
    return C, iota, pi


def les_check(P: GeometricPacket, i: int) -> dict:
    """Exactness of the window

        H^{i-1}(B) -> H^i(C) -> H^i(O) ->d H^i(B) -> H^{i+1}(C)

    as a complex of modules, with per-map equivariance reported separately:
    a corrupted boundary matrix breaks d's equivariance before it breaks
    positional exactness.
    """
    dd = _derham(_target(P, i))
    prev = _aux(P, i - 1)
    HBprev = _h_b_module(P, prev)
    HO = _h_o_module(P, dd)
    HB = _h_b_module(P, dd)
    HC, iota_prev, pi = _h_c_module(P, i)
    HC_next, iota_cur, _ = _h_c_module(P, i + 1, aux=True)
    D = _fq_mat(P.field, dd.d_matrix, dd.b_dim, dd.o_dim)
    window = [
        ("iota", HBprev, HC, iota_prev),
        ("pi", HC, HO, pi),
        ("d", HO, HB, D),
        ("iota", HB, HC_next, iota_cur),
    ]
    maps = []
    equivariant: dict[str, bool] = {}
    for k, (name, src, dst, mat) in enumerate(window):
        f = dm_map_new(src, dst, mat, check=False)
        try:
            _check_equivariance(f)
            equivariant[f"{name}@{k}"] = True
        except NotEquivariant:
            equivariant[f"{name}@{k}"] = False
        maps.append(f)
    all_eq = all(equivariant.values())
    positions: "dict[str, bool | None]" = {"H^i(C)": None, "H^i(O)": None, "H^i(B)": None}
    if all_eq:
        interior = dm_exact_check(maps)["exact_at"][1:-1]
        positions = {"H^i(C)": interior[0], "H^i(O)": interior[1], "H^i(B)": interior[2]}
    return {
        "degree": i,
        "maps_equivariant": equivariant,
        "positions": positions,
        "exact": all_eq and all(positions.values()),
    }


def parallelogram_check(P: GeometricPacket, i: int) -> dict:
    """Commutation constraints around degree i: d kills the image of F, the
    Cartier operator kills the image of d, the graded F and Cartier actions
    on H^i(C) compose to zero (= p at precision one), and pi . iota = 0."""
    _derham(_target(P, i))
    checks: dict[str, bool] = {}
    for j, degd in (("i-1", _aux(P, i - 1)), ("i", _aux(P, i))):
        A = _fq_mat(P.field, degd.o_matrix or (), degd.o_dim, degd.o_dim)
        C = _fq_mat(P.field, degd.b_matrix or (), degd.b_dim, degd.b_dim)
        D = _fq_mat(P.field, degd.d_matrix or (), degd.b_dim, degd.o_dim)
        checks[f"d.F=0@{j}"] = _is_zero_mat(matmul(D, A))
        checks[f"C.d=0@{j}"] = _is_zero_mat(matmul(C, mat_sigma(D, -1)))
    HC, iota_prev, pi = _h_c_module(P, i)
    checks["F.C=0"] = _is_zero_mat(matmul(HC.F, mat_sigma(HC.V, 1)))
    checks["C.F=0"] = _is_zero_mat(matmul(HC.V, mat_sigma(HC.F, -1)))
    checks["pi.iota=0"] = _is_zero_mat(matmul(pi, iota_prev))
    return {"degree": i, "checks": checks, "commutes": all(checks.values())}


# -- projective bundle transfer ------------------------------------------------------------


def projective_bundle_mu(P: GeometricPacket, i: int) -> CohomReport:
    """R^i of mu_p on a P^1-bundle over the packet's variety:
    h_mu_p(i) + h_z_p(i-2)."""
    mu = h_mu_p(P, i)
    zp = h_z_p(P, i - 2)
    parts = [m for m in (mu.finite_part, zp.finite_part) if m.rank]
    finite = dm_direct_sum(*parts) if parts else dm_zero(P.field)
    severity = {"canonical": 0, "split-assumed": 1, "undetermined": 2}
    status = max((mu.extension_status, zp.extension_status), key=severity.__getitem__)
    return CohomReport(
        "projective_bundle_mu_p",
        i,
        finite,
        mu.vector_dim + zp.vector_dim,
        (mu.etale_rank or 0) + (zp.etale_rank or 0),
        status,
        mu.warnings,
    )
