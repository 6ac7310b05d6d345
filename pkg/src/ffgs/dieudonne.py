"""Finite-length modules over the Dieudonne ring D = W(k)_sigma[F, V].

A module is stored as a profile (m_1 >= ... >= m_r, the module being
⊕_i W_{m_i} as a W(k)-module) together with matrices for F (twist +1,
F(a x) = sigma(a) F(x)) and V (twist -1), subject to FV = VF = p.  Entry
(i, j) of an operator matrix is a class mod p^{m_i} and needs valuation
at least m_i - m_j to give a well-defined map W_{m_j} -> W_{m_i}.

Duality transposes the matrices, swaps F and V with a sigma-twist, and
rescales by p^{m_j - m_i}; with canonically reduced entries this is an
exact involution on stored data, not just up to isomorphism.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .config import CONFIG
from .errors import (
    AnnihilatorViolation,
    BadParameter,
    BudgetExceeded,
    NotComposable,
    NotEquivariant,
    RelationViolation,
    ShapeError,
)
from .field import FieldSpec
from .chain import (
    ChainRingMatrix,
    Profile,
    SemilinearMap,
    check_profile,
    compose as sl_compose,
    identity_matrix,
    kernel_free,
    matmul,
    mat_sigma,
    matrix_from_witt,
    semilinear_cokernel,
    semilinear_kernel,
    smith_decompose,
    solve_mod,
    zero_matrix,
)
from .chain import _diag_scale_rows, _dot
from .witt import WittVector
from .zq import Zq, ZqRing, from_zq, to_zq, zq_ring

__all__ = [
    "DieudonneModule",
    "DmMap",
    "FourwayDecomposition",
    "INDETERMINATE",
    "Indeterminate",
    "dm_new",
    "dm_from_witt",
    "dm_zero",
    "dm_mu",
    "dm_alpha",
    "dm_zmod",
    "dm_ss_kernel",
    "dm_equal",
    "dm_length",
    "dm_dual",
    "dm_direct_sum",
    "dm_op_map",
    "dm_word_kernel",
    "dm_word_cokernel",
    "dm_v_stable_part",
    "dm_fourway",
    "dm_map_new",
    "dm_exact_check",
    "module_iso_test",
]


@dataclass(frozen=True)
class DieudonneModule:
    field: FieldSpec
    profile: Profile
    F: ChainRingMatrix
    V: ChainRingMatrix

    @property
    def ring(self) -> ZqRing:
        return self.F.ring

    @property
    def rank(self) -> int:
        return len(self.profile)

    def f_map(self) -> SemilinearMap:
        return SemilinearMap(self.F, 1, self.profile, self.profile)

    def v_map(self) -> SemilinearMap:
        return SemilinearMap(self.V, -1, self.profile, self.profile)

    def witt_matrices(self) -> tuple[tuple[tuple[WittVector, ...], ...], tuple[tuple[WittVector, ...], ...]]:
        return self.F.witt_entries(), self.V.witt_entries()

    def __str__(self) -> str:
        if not self.profile:
            return "0"
        return f"DM(profile={self.profile}, q={self.field.q()})"


def _reduce_matrix(mat: ChainRingMatrix, profile: Profile) -> ChainRingMatrix:
    R = mat.ring
    ent = tuple(
        tuple(R.reduce_to(e, profile[i]) for e in row) for i, row in enumerate(mat.entries)
    )
    return ChainRingMatrix(R, mat.rows, mat.cols, ent)


def _to_ring(x: Zq, R: ZqRing) -> Zq:
    """Reinterpret a representative at another precision (canonical lift or cut)."""
    return tuple(c % R.pm for c in x)


def _mat_to_ring(mat: ChainRingMatrix, R: ZqRing) -> ChainRingMatrix:
    ent = tuple(tuple(_to_ring(e, R) for e in row) for row in mat.entries)
    return ChainRingMatrix(R, mat.rows, mat.cols, ent)


def _check_operator(mat: ChainRingMatrix, profile: Profile, name: str) -> None:
    R = mat.ring
    for i, mi in enumerate(profile):
        for j, mj in enumerate(profile):
            need = mi - mj
            if need > 0 and R.val(mat.entries[i][j]) < need:
                raise AnnihilatorViolation(
                    f"{name}[{i}][{j}] has valuation {R.val(mat.entries[i][j])}, needs >= {need}"
                )


def _check_fv(F: ChainRingMatrix, V: ChainRingMatrix, profile: Profile) -> None:
    R = F.ring
    p = R.field.p
    fv = matmul(F, mat_sigma(V, 1))
    vf = matmul(V, mat_sigma(F, -1))
    for prod, label in ((fv, "F.V"), (vf, "V.F")):
        for i, mi in enumerate(profile):
            for j in range(len(profile)):
                want = R.scalar(p) if i == j else R.zero()
                diff = R.sub(prod.entries[i][j], want)
                if R.val(diff) < mi:
                    raise RelationViolation(f"{label} != p at entry ({i}, {j})")


def dm_new(field: FieldSpec, profile: Profile, F: ChainRingMatrix, V: ChainRingMatrix) -> DieudonneModule:
    profile = tuple(profile)
    m = profile[0] if profile else 1
    check_profile(profile, m)
    R = zq_ring(field, m)
    if F.ring != R or V.ring != R:
        raise BadParameter("operator matrices must live over W_{max(profile)}(k)")
    r = len(profile)
    if F.shape != (r, r) or V.shape != (r, r):
        raise ShapeError(f"operator matrices must be {r}x{r}")
    F = _reduce_matrix(F, profile)
    V = _reduce_matrix(V, profile)
    _check_operator(F, profile, "F")
    _check_operator(V, profile, "V")
    _check_fv(F, V, profile)
    return DieudonneModule(field, profile, F, V)


def dm_from_witt(field: FieldSpec, profile: Profile, F_grid, V_grid) -> DieudonneModule:
    m = max(profile) if profile else 1
    return dm_new(field, tuple(profile), matrix_from_witt(field, m, F_grid), matrix_from_witt(field, m, V_grid))


def dm_zero(field: FieldSpec) -> DieudonneModule:
    R = zq_ring(field, 1)
    empty = ChainRingMatrix(R, 0, 0, ())
    return DieudonneModule(field, (), empty, empty)


def dm_mu(field: FieldSpec, a: int = 1) -> DieudonneModule:
    """Multiplicative atom: W_a with F = sigma, V = p sigma^{-1}."""
    if a < 1:
        raise BadParameter("atom size must be >= 1")
    R = zq_ring(field, a)
    F = ChainRingMatrix(R, 1, 1, ((R.one(),),))
    V = ChainRingMatrix(R, 1, 1, ((R.scalar(field.p),),))
    return dm_new(field, (a,), F, V)


def dm_zmod(field: FieldSpec, a: int = 1) -> DieudonneModule:
    """Etale atom: W_a with F = p sigma, V = sigma^{-1} (the dual of dm_mu)."""
    return dm_dual(dm_mu(field, a))


def dm_alpha(field: FieldSpec, a: int = 1) -> DieudonneModule:
    """Infinitesimal unipotent chain: k[V]/(V^a) with F = 0."""
    if a < 1:
        raise BadParameter("atom size must be >= 1")
    R = zq_ring(field, 1)
    z, one = R.zero(), R.one()
    F = zero_matrix(R, a, a)
    V = ChainRingMatrix(
        R, a, a, tuple(tuple(one if i == j + 1 else z for j in range(a)) for i in range(a))
    )
    return dm_new(field, (1,) * a, F, V)


def dm_ss_kernel(field: FieldSpec) -> DieudonneModule:
    """Length-2 local-local module k^2 with F e_1 = V e_1 = e_2."""
    R = zq_ring(field, 1)
    z, one = R.zero(), R.one()
    N = ChainRingMatrix(R, 2, 2, ((z, z), (one, z)))
    return dm_new(field, (1, 1), N, N)


def dm_equal(a: DieudonneModule, b: DieudonneModule) -> bool:
    return (
        a.field == b.field
        and a.profile == b.profile
        and a.F.entries == b.F.entries
        and a.V.entries == b.V.entries
    )


def dm_length(M: DieudonneModule) -> int:
    """W(k)-length; the underlying group scheme has order p^length."""
    return sum(M.profile)


def dm_dual(M: DieudonneModule) -> DieudonneModule:
    R = M.ring
    r = M.rank
    prof = M.profile

    def flip(mat: ChainRingMatrix, twist: int) -> ChainRingMatrix:
        ent = []
        for j in range(r):
            row = []
            for i in range(r):
                e = mat.entries[i][j]
                d = prof[j] - prof[i]
                if d >= 0:
                    e = R.smul(R.field.p**d, e)
                else:
                    e = R.div_p(e, -d)
                row.append(R.reduce_to(R.sigma(e, twist), prof[j]))
            ent.append(tuple(row))
        return ChainRingMatrix(R, r, r, tuple(ent))

    Fd = flip(M.V, 1)
    Vd = flip(M.F, -1)
    return dm_new(M.field, prof, Fd, Vd)


def dm_direct_sum(*mods: DieudonneModule) -> DieudonneModule:
    mods = tuple(M for M in mods if M.rank)
    if not mods:
        raise BadParameter("direct sum needs at least one nonzero summand (use dm_zero)")
    field = mods[0].field
    if any(M.field != field for M in mods):
        raise BadParameter("summands over different fields")
    pairs = []  # (profile entry, block index, index within block)
    for b, M in enumerate(mods):
        for i, e in enumerate(M.profile):
            pairs.append((e, b, i))
    order = sorted(range(len(pairs)), key=lambda t: (-pairs[t][0], pairs[t][1], pairs[t][2]))
    profile = tuple(pairs[t][0] for t in order)
    m = profile[0]
    R = zq_ring(field, m)

    def block_entry(mat_attr: str, a: int, b: int) -> Zq:
        _, blk_a, ia = pairs[order[a]]
        _, blk_b, ib = pairs[order[b]]
        if blk_a != blk_b:
            return R.zero()
        M = mods[blk_a]
        return _to_ring(getattr(M, mat_attr).entries[ia][ib], R)

    n = len(profile)
    F = ChainRingMatrix(R, n, n, tuple(tuple(block_entry("F", a, b) for b in range(n)) for a in range(n)))
    V = ChainRingMatrix(R, n, n, tuple(tuple(block_entry("V", a, b) for b in range(n)) for a in range(n)))
    return dm_new(field, profile, F, V)


# -- operator words -------------------------------------------------------------


def dm_op_map(M: DieudonneModule, op: str, count: int = 1) -> SemilinearMap:
    """The semilinear map F^count, V^count or p^count on M."""
    if count < 0:
        raise BadParameter("operator power must be >= 0")
    R = M.ring
    r = M.rank
    if op == "p":
        mat = identity_matrix(R, r)
        mat = ChainRingMatrix(
            R, r, r, tuple(tuple(R.smul(R.field.p**count, e) for e in row) for row in mat.entries)
        )
        return SemilinearMap(_reduce_matrix(mat, M.profile), 0, M.profile, M.profile)
    if op == "F":
        base, tw = M.F, 1
    elif op == "V":
        base, tw = M.V, -1
    else:
        raise BadParameter(f"unknown operator {op!r}")
    mat = identity_matrix(R, r)
    twist = 0
    for _ in range(count):
        mat = matmul(base, mat_sigma(mat, tw))
        twist += tw
    return SemilinearMap(_reduce_matrix(mat, M.profile), twist, M.profile, M.profile)


def _induced_operator(
    R: ZqRing,
    emb: ChainRingMatrix,
    ambient_profile: Profile,
    sub_profile: Profile,
    op: SemilinearMap,
) -> ChainRingMatrix:
    """Matrix of op restricted to the submodule spanned by emb's columns."""
    cols = []
    for t in range(emb.cols):
        x = tuple(emb.entries[i][t] for i in range(emb.rows))
        rhs = op.apply(x)
        c = solve_mod(emb, rhs, ambient_profile)
        if c is None:
            raise RelationViolation("submodule is not stable under the operator")
        cols.append(tuple(R.reduce_to(c[s], sub_profile[s]) for s in range(len(sub_profile))))
    ent = tuple(tuple(col[s] for col in cols) for s in range(len(sub_profile)))
    return ChainRingMatrix(R, len(sub_profile), emb.cols, ent)


def _submodule_as_module(M: DieudonneModule, profile: Profile, emb: ChainRingMatrix) -> DieudonneModule:
    """Package an F,V-stable submodule (given by generator columns) as a module."""
    R = M.ring
    if not profile:
        return dm_zero(M.field)
    Fi = _induced_operator(R, emb, M.profile, profile, M.f_map())
    Vi = _induced_operator(R, emb, M.profile, profile, M.v_map())
    Rs = zq_ring(M.field, profile[0])
    return dm_new(M.field, profile, _mat_to_ring(Fi, Rs), _mat_to_ring(Vi, Rs))


def dm_word_kernel(M: DieudonneModule, op: str, count: int = 1) -> tuple[DieudonneModule, ChainRingMatrix]:
    """Kernel of F^count/V^count/p^count with its embedding into M."""
    T = dm_op_map(M, op, count)
    profile, emb = semilinear_kernel(T)
    return _submodule_as_module(M, profile, emb), emb


def dm_v_stable_part(M: DieudonneModule) -> DieudonneModule:
    """The image of V^length: the largest submodule on which V is bijective."""
    if not M.rank:
        return M
    T = dm_op_map(M, "V", dm_length(M))
    profile, emb = _span_structure(M.ring, M.profile, T.matrix)
    return _submodule_as_module(M, profile, emb)


def dm_word_cokernel(M: DieudonneModule, op: str, count: int = 1) -> tuple[DieudonneModule, ChainRingMatrix]:
    """Cokernel of F^count/V^count/p^count with the projection from M."""
    T = dm_op_map(M, op, count)
    profile, proj, sect = semilinear_cokernel(T)
    if not profile:
        return dm_zero(M.field), proj
    R = M.ring

    def induced(opm: SemilinearMap) -> ChainRingMatrix:
        mid = matmul(opm.matrix, mat_sigma(sect, opm.twist))
        out = matmul(proj, mid)
        return _reduce_matrix(out, profile)

    Fi = induced(M.f_map())
    Vi = induced(M.v_map())
    Rq = zq_ring(M.field, profile[0])
    return dm_new(M.field, profile, _mat_to_ring(Fi, Rq), _mat_to_ring(Vi, Rq)), proj


# -- Fitting decomposition -------------------------------------------------------


@dataclass(frozen=True)
class FourwayDecomposition:
    """Splitting by the stable kernel/image of V (rows) and of F (columns).

    connected x etale for V, unipotent x multiplicative for F; the
    etale-multiplicative cell vanishes for every finite module since F and V
    cannot both be bijective when FV = p is nilpotent.
    """

    module: DieudonneModule
    connected_unipotent: DieudonneModule
    connected_multiplicative: DieudonneModule
    etale_unipotent: DieudonneModule
    etale_multiplicative: DieudonneModule

    def cells(self) -> dict[str, DieudonneModule]:
        return {
            "connected_unipotent": self.connected_unipotent,
            "connected_multiplicative": self.connected_multiplicative,
            "etale_unipotent": self.etale_unipotent,
            "etale_multiplicative": self.etale_multiplicative,
        }


def _image_columns(T: SemilinearMap) -> ChainRingMatrix:
    return T.matrix


def _span_intersection(
    R: ZqRing, ambient: Profile, A: ChainRingMatrix, B: ChainRingMatrix
) -> ChainRingMatrix:
    """Generators of span(A cols) ∩ span(B cols) inside ⊕ W_{ambient}."""
    m = R.m
    r = len(ambient)
    joint = ChainRingMatrix(
        R,
        r,
        A.cols + B.cols,
        tuple(
            tuple(A.entries[i]) + tuple(R.neg(e) for e in B.entries[i]) for i in range(r)
        ),
    )
    scaled = _diag_scale_rows(joint, [m - t for t in ambient])
    gens = kernel_free(scaled)
    cols = []
    for _, vec in gens:
        col = tuple(_dot(R, A.entries[i], vec[: A.cols]) for i in range(r))
        if any(R.val(col[i]) < ambient[i] for i in range(r)):
            cols.append(tuple(R.reduce_to(col[i], ambient[i]) for i in range(r)))
    if not cols:
        return zero_matrix(R, r, 0)
    return ChainRingMatrix(R, r, len(cols), tuple(tuple(c[i] for c in cols) for i in range(r)))


def _span_structure(R: ZqRing, ambient: Profile, span: ChainRingMatrix) -> tuple[Profile, ChainRingMatrix]:
    """Canonical profile and generators for a submodule given by spanning columns."""
    m = R.m
    if span.cols == 0:
        return (), span
    scaled = _diag_scale_rows(span, [m - t for t in ambient])
    rel = kernel_free(scaled)
    if rel:
        H = ChainRingMatrix(
            R, span.cols, len(rel), tuple(tuple(r[1][i] for r in rel) for i in range(span.cols))
        )
        sd = smith_decompose(H)
        orders = list(sd.exponents) + [m] * (span.cols - len(sd.exponents))
        basis = sd.Uinv
    else:
        orders = [m] * span.cols
        basis = identity_matrix(R, span.cols)
    new_gens = matmul(span, basis)
    keep = sorted(
        ((orders[k], k) for k in range(span.cols) if orders[k] > 0), key=lambda t: (-t[0], t[1])
    )
    profile = tuple(t[0] for t in keep)
    cols = [
        tuple(R.reduce_to(new_gens.entries[i][k], ambient[i]) for i in range(len(ambient)))
        for _, k in keep
    ]
    if not cols:
        return (), zero_matrix(R, len(ambient), 0)
    emb = ChainRingMatrix(
        R, len(ambient), len(cols), tuple(tuple(c[i] for c in cols) for i in range(len(ambient)))
    )
    return profile, emb


def dm_fourway(M: DieudonneModule) -> FourwayDecomposition:
    R = M.ring
    L = max(dm_length(M), 1)
    if not M.rank:
        z = dm_zero(M.field)
        return FourwayDecomposition(M, z, z, z, z)
    TV = dm_op_map(M, "V", L)
    TF = dm_op_map(M, "F", L)
    _, KV = semilinear_kernel(TV)
    _, KF = semilinear_kernel(TF)
    IV = _image_columns(TV)
    IF = _image_columns(TF)

    def cell(A: ChainRingMatrix, B: ChainRingMatrix) -> DieudonneModule:
        span = _span_intersection(R, M.profile, A, B)
        profile, emb = _span_structure(R, M.profile, span)
        return _submodule_as_module(M, profile, emb)

    return FourwayDecomposition(
        M,
        connected_unipotent=cell(KV, KF),
        connected_multiplicative=cell(KV, IF),
        etale_unipotent=cell(IV, KF),
        etale_multiplicative=cell(IV, IF),
    )


# -- maps and exactness ----------------------------------------------------------


@dataclass(frozen=True)
class DmMap:
    """A W(k)-linear, F- and V-equivariant map between modules."""

    src: DieudonneModule
    dst: DieudonneModule
    matrix: ChainRingMatrix


def dm_map_new(src: DieudonneModule, dst: DieudonneModule, matrix: ChainRingMatrix, check: bool = True) -> DmMap:
    if src.field != dst.field:
        raise NotComposable("source and target over different fields")
    m = max([1, *src.profile, *dst.profile])
    R = zq_ring(src.field, m)
    if matrix.shape != (dst.rank, src.rank):
        raise ShapeError(f"map matrix must be {dst.rank}x{src.rank}")
    if matrix.ring != R:
        raise BadParameter(f"map matrix must live over W_{m}(k)")
    for i, mi in enumerate(dst.profile):
        for j, mj in enumerate(src.profile):
            if mi - mj > 0 and R.val(matrix.entries[i][j]) < mi - mj:
                raise AnnihilatorViolation(f"map entry ({i}, {j}) not well-defined")
    ent = tuple(
        tuple(R.reduce_to(e, dst.profile[i]) for e in row) for i, row in enumerate(matrix.entries)
    )
    matrix = ChainRingMatrix(R, matrix.rows, matrix.cols, ent)
    f = DmMap(src, dst, matrix)
    if check:
        _check_equivariance(f)
    return f


def _check_equivariance(f: DmMap) -> None:
    R = f.matrix.ring
    Fs, Vs = _mat_to_ring(f.src.F, R), _mat_to_ring(f.src.V, R)
    Fd, Vd = _mat_to_ring(f.dst.F, R), _mat_to_ring(f.dst.V, R)
    lhs_f = matmul(f.matrix, Fs)
    rhs_f = matmul(Fd, mat_sigma(f.matrix, 1))
    lhs_v = matmul(f.matrix, Vs)
    rhs_v = matmul(Vd, mat_sigma(f.matrix, -1))
    for lhs, rhs, name in ((lhs_f, rhs_f, "F"), (lhs_v, rhs_v, "V")):
        for i, mi in enumerate(f.dst.profile):
            for j in range(f.src.rank):
                if R.val(R.sub(lhs.entries[i][j], rhs.entries[i][j])) < mi:
                    raise NotEquivariant(f"map does not commute with {name} at entry ({i}, {j})")


def dm_map_compose(g: DmMap, f: DmMap) -> DmMap:
    if f.dst.profile != g.src.profile or not dm_equal(f.dst, g.src):
        raise NotComposable("maps are not composable")
    m = max([1, *f.src.profile, *g.dst.profile])
    R = zq_ring(f.src.field, m)
    return dm_map_new(
        f.src, g.dst, matmul(_mat_to_ring(g.matrix, R), _mat_to_ring(f.matrix, R)), check=False
    )


def _map_kernel_span(f: DmMap) -> ChainRingMatrix:
    R = f.matrix.ring
    T = SemilinearMap(f.matrix, 0, f.src.profile, f.dst.profile)
    _, emb = semilinear_kernel(T)
    return emb


def _map_image_span(f: DmMap) -> ChainRingMatrix:
    return f.matrix


def _span_contains(R: ZqRing, ambient: Profile, span: ChainRingMatrix, col: tuple[Zq, ...]) -> bool:
    return solve_mod(span, col, ambient) is not None


def dm_exact_check(maps: "list[DmMap]") -> dict:
    """Validate a complex of equivariant maps and test exactness at each joint.

    ``maps = [f_0, f_1, ...]`` with f_k : M_k -> M_{k+1}; the sequence is
    implicitly extended by zero on both ends, so exactness is also reported
    at the first module (f_0 injective?) and the last (f_last surjective?).
    """
    if not maps:
        raise BadParameter("empty sequence")
    for a, b in zip(maps, maps[1:]):
        if not dm_equal(a.dst, b.src):
            raise NotComposable("consecutive maps do not match")
    for f in maps:
        _check_equivariance(f)
    exact: list[bool] = []
    first = maps[0]
    exact.append(_map_kernel_span(first).cols == 0)
    for f, g in zip(maps, maps[1:]):
        mid = g.src
        R = zq_ring(mid.field, max(mid.profile) if mid.profile else 1)
        img = _mat_to_ring(_map_image_span(f), R)
        ker = _mat_to_ring(_map_kernel_span(g), R)
        comp_zero = all(
            _span_contains(R, mid.profile, ker, tuple(img.entries[i][j] for i in range(img.rows)))
            for j in range(img.cols)
        )
        ok = comp_zero and all(
            _span_contains(R, mid.profile, img, tuple(ker.entries[i][j] for i in range(ker.rows)))
            for j in range(ker.cols)
        )
        exact.append(ok)
    last = maps[-1]
    Rl = last.matrix.ring
    cprof, _, _ = semilinear_cokernel(SemilinearMap(last.matrix, 0, last.src.profile, last.dst.profile))
    exact.append(cprof == ())
    return {"equivariant": True, "exact_at": exact, "exact": all(exact)}


# -- isomorphism testing ----------------------------------------------------------


class Indeterminate:
    """Result of an isomorphism search that hit its budget: neither True nor False."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __bool__(self) -> bool:
        raise TypeError("Indeterminate result cannot be coerced to bool")

    def __repr__(self) -> str:
        return "Indeterminate"


INDETERMINATE = Indeterminate()


def _word_image_length(M: DieudonneModule, a: int, b: int) -> int:
    """Length of the image of F^a V^b (a genuine isomorphism invariant)."""
    if not M.rank:
        return 0
    fa = dm_op_map(M, "F", a)
    vb = dm_op_map(M, "V", b)
    T = sl_compose(fa, vb) if a and b else (fa if a else vb)
    kprof, _ = semilinear_kernel(T)
    return dm_length(M) - sum(kprof)


def _invariant_screen(M: DieudonneModule, N: DieudonneModule) -> bool:
    if M.profile != N.profile:
        return False
    bound = min(CONFIG.iso_length_bound, 4)
    for a in range(bound + 1):
        for b in range(bound + 1 - a):
            if a == b == 0:
                continue
            if _word_image_length(M, a, b) != _word_image_length(N, a, b):
                return False
    fw_m, fw_n = dm_fourway(M), dm_fourway(N)
    for key in ("connected_unipotent", "connected_multiplicative", "etale_unipotent", "etale_multiplicative"):
        if fw_m.cells()[key].profile != fw_n.cells()[key].profile:
            return False
    return True


def _elements_of_order(R: ZqRing, profile: Profile, order_exp: int):
    """All x in ⊕ W_{profile} with p^order_exp x = 0."""
    p, n = R.field.p, R.field.n
    ranges = []
    for e in profile:
        cap = min(order_exp, e)
        lo = e - cap
        pool = []
        for digits in itertools.product(range(p), repeat=cap * n):
            x = tuple(sum(digits[i * n + t] * p ** (lo + i) for i in range(cap)) for t in range(n))
            pool.append(x)
        ranges.append(pool)
    yield from itertools.product(*ranges)


def module_iso_test(M: DieudonneModule, N: DieudonneModule, budget: "int | None" = None):
    """True / False / INDETERMINATE for M ≅ N as D_k-modules.

    Structural equality short-circuits to True; invariant mismatches give a
    definite False; otherwise a budgeted exhaustive search over generator
    images decides, raising through to INDETERMINATE when the candidate
    space exceeds the budget.
    """
    if M.field != N.field:
        return False
    if dm_equal(M, N):
        return True
    if not _invariant_screen(M, N):
        return False
    if not M.rank:
        return True
    budget = CONFIG.iso_search_budget if budget is None else budget
    Rn = N.ring
    r = M.rank
    pool_cap = max(1024, budget // 8)
    for mi in M.profile:
        size = 1
        for nj in N.profile:
            size *= Rn.field.q ** min(mi, nj)
        if size > pool_cap:
            return INDETERMINATE
    pools = [list(_elements_of_order(Rn, N.profile, mi)) for mi in M.profile]
    FN, VN = N.f_map(), N.v_map()

    def add_vec(a, b):
        return tuple(Rn.add(x, y) for x, y in zip(a, b))

    def smul_vec(c: Zq, a):
        return tuple(Rn.mul(c, x) for x in a)

    # Equivariance of column i (op(g_i) = sum_j A[j][i] g_j) only involves
    # generators {i} | {j : A[j][i] != 0}; scheduling each condition at the
    # depth where its last generator is assigned prunes the DFS hard.
    schedule: list[list[tuple[ChainRingMatrix, SemilinearMap, int]]] = [[] for _ in range(r)]
    for A, opN in ((M.F, FN), (M.V, VN)):
        for i in range(r):
            last = i
            for j in range(r):
                if any(A.entries[j][i]):
                    last = max(last, j)
            schedule[last].append((A, opN, i))

    zero_vec = tuple(Rn.zero() for _ in range(N.rank))

    def condition_holds(A, opN, i, images) -> bool:
        want = opN.apply(images[i])
        have = zero_vec
        for j in range(r):
            c = A.entries[j][i]
            if any(c):
                have = add_vec(have, smul_vec(c, images[j]))
        return all(
            Rn.val(Rn.sub(want[t], have[t])) >= N.profile[t] for t in range(N.rank)
        )

    nodes = 0
    images: list = [None] * r

    class _Budget(Exception):
        pass

    def dfs(depth: int) -> bool:
        nonlocal nodes
        if depth == r:
            span = ChainRingMatrix(
                Rn, N.rank, r,
                tuple(tuple(images[j][i] for j in range(r)) for i in range(N.rank)),
            )
            sprof, _ = _span_structure(Rn, N.profile, span)
            return sum(sprof) == dm_length(N)  # equal lengths: onto => iso
        for cand in pools[depth]:
            nodes += 1
            if nodes > budget:
                raise _Budget
            images[depth] = cand
            if all(condition_holds(A, opN, i, images) for A, opN, i in schedule[depth]):
                if dfs(depth + 1):
                    return True
        images[depth] = None
        return False

    try:
        return dfs(0)
    except _Budget:
        return INDETERMINATE
