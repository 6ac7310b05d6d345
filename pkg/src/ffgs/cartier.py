"""V-adically truncated Cartier modules over E = W(k)_sigma[F][[V]].

A module is a finite direct sum of four standard summand kinds:

* ``unit(r, U)`` — W(k)^r with F = U.sigma invertible and V = p F^{-1}
  (multiplicative type; U is stored at witt_precision digits);
* ``additive(s)`` — k_sigma[[V]]^s with F = 0;
* ``formal(h, mult)`` — copies of E g / E(F - V^h) g, the Cartier module of a
  one-dimensional formal group of height h + 1;
* ``finite(M)`` — a finite-length Dieudonne module carried along verbatim.

Truncation at level L means M/V^L M and has a closed form per summand.  The
level-L quotients form a direct system along x -> Vx, and the functors
ker/coker of p^n, F^n, V^n are evaluated in the colimit of that system: a
piece either stabilizes (finite answer), dies (some transition power is
forced into the image of the endomorphism: V^n kills coker(V^n), V = pF^{-1}
kills unit cokernels, V^h M ⊆ FM kills formal F-cokernels), or grows with
constant slope (vector-group answer).  Stable pieces are reported at the
first stable level so answers do not depend on the working precision.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .errors import BadParameter, PrecisionExceeded, ShapeError, UnstableTruncation
from .field import FieldSpec
from .chain import ChainRingMatrix, is_invertible, matmul, mat_sigma, matrix_inv, solve_mod, zero_matrix
from .dieudonne import (
    DieudonneModule,
    dm_direct_sum,
    dm_length,
    dm_new,
    dm_v_stable_part,
    dm_word_cokernel,
    dm_word_kernel,
    dm_zero,
    module_iso_test,
)
from .dieudonne import _span_structure
from .zq import ZqRing, zq_ring

__all__ = [
    "UnitSummand",
    "AdditiveSummand",
    "FormalSummand",
    "FiniteSummand",
    "CartierModule",
    "TwoTermComplex",
    "ComplexHResult",
    "ConnectedDmReport",
    "CwPiece",
    "cm_new",
    "cm_trunc",
    "cm_tc_n",
    "cm_v_torsion",
    "cm_mod_v_torsion",
    "cm_connected_dm",
    "cm_complex_h",
    "cm_colimit_piece",
]

DEFAULT_V_PRECISION = 6
DEFAULT_WITT_PRECISION = 6


@dataclass(frozen=True)
class UnitSummand:
    rank: int
    F_unit: ChainRingMatrix

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise BadParameter("unit summand rank must be >= 1")
        if self.F_unit.shape != (self.rank, self.rank):
            raise ShapeError("unit matrix shape mismatch")
        if not is_invertible(self.F_unit):
            raise BadParameter("unit summand matrix must be invertible mod p")


@dataclass(frozen=True)
class AdditiveSummand:
    rank: int

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise BadParameter("additive summand rank must be >= 1")


@dataclass(frozen=True)
class FormalSummand:
    h: int
    mult: int = 1

    def __post_init__(self) -> None:
        if self.h < 1:
            raise BadParameter("formal summand needs h >= 1 (h = 0 is a unit summand)")
        if self.mult < 1:
            raise BadParameter("formal summand multiplicity must be >= 1")


@dataclass(frozen=True)
class FiniteSummand:
    module: DieudonneModule


CartierSummand = "UnitSummand | AdditiveSummand | FormalSummand | FiniteSummand"


@dataclass(frozen=True)
class CartierModule:
    field: FieldSpec
    summands: tuple
    v_precision: int = DEFAULT_V_PRECISION
    witt_precision: int = DEFAULT_WITT_PRECISION


def cm_new(
    field: FieldSpec,
    summands,
    v_precision: int = DEFAULT_V_PRECISION,
    witt_precision: int = DEFAULT_WITT_PRECISION,
) -> CartierModule:
    if v_precision < 1 or witt_precision < 1:
        raise BadParameter("precisions must be >= 1")
    for s in summands:
        if isinstance(s, FiniteSummand) and s.module.field != field:
            raise BadParameter("finite summand over a different field")
        if isinstance(s, UnitSummand) and s.F_unit.ring.field != field:
            raise BadParameter("unit summand over a different field")
    return CartierModule(field, tuple(summands), v_precision, witt_precision)


# -- truncation closed forms ----------------------------------------------------


def _conv(e, R: ZqRing):
    return tuple(c % R.pm for c in e)


def _trunc_unit(field: FieldSpec, U: ChainRingMatrix, L: int) -> DieudonneModule:
    R = zq_ring(field, L)
    r = U.rows
    UL = ChainRingMatrix(R, r, r, tuple(tuple(_conv(e, R) for e in row) for row in U.entries))
    Vmat = mat_sigma(matrix_inv(UL), -1)
    p = field.p
    Vmat = ChainRingMatrix(R, r, r, tuple(tuple(R.smul(p, e) for e in row) for row in Vmat.entries))
    return dm_new(field, (L,) * r, UL, Vmat)


def _trunc_additive_copy(field: FieldSpec, L: int) -> DieudonneModule:
    R = zq_ring(field, 1)
    z, one = R.zero(), R.one()
    F = zero_matrix(R, L, L)
    V = ChainRingMatrix(R, L, L, tuple(tuple(one if i == j + 1 else z for j in range(L)) for i in range(L)))
    return dm_new(field, (1,) * L, F, V)


def _formal_profile(h: int, L: int) -> tuple[int, ...]:
    gens = min(h + 1, L)
    return tuple(-(-(L - i) // (h + 1)) for i in range(gens))


def _trunc_formal_copy(field: FieldSpec, h: int, L: int) -> DieudonneModule:
    profile = _formal_profile(h, L)
    g = len(profile)
    R = zq_ring(field, profile[0])
    z, one, pp = R.zero(), R.one(), R.scalar(field.p)
    Fent = [[z] * g for _ in range(g)]
    Vent = [[z] * g for _ in range(g)]
    # e_i = V^i g; relations V^{h+1} = p, F g = V^h g, F V^i g = p V^{i-1} g
    for i in range(g - 1):
        Vent[i + 1][i] = one
    if g == h + 1:
        Vent[0][g - 1] = pp
        Fent[h][0] = one
    for i in range(1, g):
        Fent[i - 1][i] = pp
    F = ChainRingMatrix(R, g, g, tuple(tuple(r) for r in Fent))
    V = ChainRingMatrix(R, g, g, tuple(tuple(r) for r in Vent))
    return dm_new(field, profile, F, V)


def _summand_trunc(field: FieldSpec, s, L: int) -> "list[DieudonneModule]":
    if isinstance(s, UnitSummand):
        return [_trunc_unit(field, s.F_unit, L)]
    if isinstance(s, AdditiveSummand):
        return [_trunc_additive_copy(field, L) for _ in range(s.rank)]
    if isinstance(s, FormalSummand):
        return [_trunc_formal_copy(field, s.h, L) for _ in range(s.mult)]
    if isinstance(s, FiniteSummand):
        return [s.module]
    raise BadParameter(f"unknown summand {s!r}")


def cm_trunc(M: CartierModule, L: int) -> DieudonneModule:
    """The finite-length quotient M/V^L M."""
    if L < 1:
        raise BadParameter("truncation level must be >= 1")
    if L > M.v_precision:
        raise PrecisionExceeded(f"level {L} exceeds v_precision {M.v_precision}")
    parts: list[DieudonneModule] = []
    for s in M.summands:
        parts.extend(p for p in _summand_trunc(M.field, s, L) if p.rank)
    if not parts:
        return dm_zero(M.field)
    return dm_direct_sum(*parts)


# -- V-torsion ------------------------------------------------------------------


def _dm_v_nilpotent_part(M: DieudonneModule) -> DieudonneModule:
    if not M.rank:
        return M
    K, _ = dm_word_kernel(M, "V", dm_length(M))
    return K


def cm_v_torsion(M: CartierModule) -> DieudonneModule:
    """The V-power-torsion of M: unit/additive/formal summands are torsion-free."""
    parts = [
        _dm_v_nilpotent_part(s.module)
        for s in M.summands
        if isinstance(s, FiniteSummand)
    ]
    parts = [p for p in parts if p.rank]
    if not parts:
        return dm_zero(M.field)
    return dm_direct_sum(*parts)


def cm_mod_v_torsion(M: CartierModule) -> CartierModule:
    out = []
    for s in M.summands:
        if isinstance(s, FiniteSummand):
            rest = dm_v_stable_part(s.module)
            if rest.rank:
                out.append(FiniteSummand(rest))
        else:
            out.append(s)
    return CartierModule(M.field, tuple(out), M.v_precision, M.witt_precision)


# -- connected part of the colimit ------------------------------------------------


@dataclass(frozen=True)
class ConnectedDmReport:
    """Description of colim_V M/V^n: the Dieudonne module of the connected
    formal group the pro-module represents, in closed-form summand labels.

    Finite summands die in the colimit; their V-torsion is flagged as the
    leftover (it obstructs formal smoothness rather than contributing)."""

    summands: tuple[str, ...]
    unipotent_dim: int
    mult_corank: int
    finite_leftover: DieudonneModule


def cm_connected_dm(M: CartierModule) -> ConnectedDmReport:
    labels: list[str] = []
    uni = 0
    mult = 0
    for s in M.summands:
        if isinstance(s, UnitSummand):
            labels.append(f"multiplicative of corank {s.rank}")
            mult += s.rank
        elif isinstance(s, AdditiveSummand):
            labels.append(f"additive of dimension {s.rank}")
            uni += s.rank
        elif isinstance(s, FormalSummand):
            labels.append(f"formal group of dimension {s.mult} and height {s.h + 1}")
            uni += s.mult
        else:
            tor = _dm_v_nilpotent_part(s.module)
            if tor.rank:
                labels.append("finite with V-torsion (not formally smooth)")
            else:
                labels.append("finite etale (vanishes in colimit)")
    return ConnectedDmReport(tuple(labels), uni, mult, cm_v_torsion(M))


# -- TC_n ------------------------------------------------------------------------


def cm_tc_n(M: CartierModule, n: int) -> DieudonneModule:
    """TC_n of the colimit: the V^n-kernel, computed at level n+1 and
    verified stable against level n+2."""
    if n < 1:
        raise BadParameter("tc level must be >= 1")
    if n > M.v_precision - 1:
        raise PrecisionExceeded(f"tc_{n} needs v_precision > {n}")
    T1, T2 = cm_trunc(M, n + 1), cm_trunc(M, n + 2)
    K1 = dm_word_kernel(T1, "V", n)[0] if T1.rank else T1
    K2 = dm_word_kernel(T2, "V", n)[0] if T2.rank else T2
    r = module_iso_test(K1, K2)
    if r is not True:
        raise UnstableTruncation(f"tc_{n} not stable between levels {n + 1} and {n + 2}")
    return K2


# -- two-term complexes in the colimit ---------------------------------------------


@dataclass(frozen=True)
class TwoTermComplex:
    """[M ->(endo) M] with endo one of p^n, F^n, V^n on a Cartier module."""

    module: CartierModule
    op: str
    power: int

    def __post_init__(self) -> None:
        if self.op not in ("p", "F", "V"):
            raise BadParameter(f"unknown endomorphism {self.op!r}")
        if self.power < 1:
            raise BadParameter("endomorphism power must be >= 1")


@dataclass(frozen=True)
class ComplexHResult:
    """Graded hypercohomology of [M_prev/M_cur ->(endo) same] at fixed level."""

    coker: DieudonneModule
    ker: DieudonneModule
    assembled: "DieudonneModule | None"
    extension_status: str


@dataclass(frozen=True)
class CwPiece:
    """A colimit-evaluated kernel/cokernel: stable finite part plus the
    dimension of the part growing with constant slope (a vector group)."""

    finite: DieudonneModule
    vector_dim: int


def _lift_matrix(R2: ZqRing, rows: int, cols: int) -> ChainRingMatrix:
    one, z = R2.one(), R2.zero()
    return ChainRingMatrix(
        R2, rows, cols, tuple(tuple(one if i == j else z for j in range(cols)) for i in range(rows))
    )


def _transition_on_kernel(
    M1: DieudonneModule, M2: DieudonneModule, K1, emb1, K2, emb2
) -> "ChainRingMatrix | None":
    """Matrix of the V-transition K1 -> K2 over M2's ring, or None if it
    fails to land in K2 (cannot happen for genuine direct-system data)."""
    R2 = M2.ring
    lift = _lift_matrix(R2, M2.rank, M1.rank)
    emb1_l = ChainRingMatrix(
        R2, M2.rank, emb1.cols,
        tuple(
            tuple(_conv(emb1.entries[i][t], R2) if i < M1.rank else R2.zero() for t in range(emb1.cols))
            for i in range(M2.rank)
        ),
    ) if M2.rank >= M1.rank else None
    if emb1_l is None:
        raise ShapeError("transition with shrinking generator set")
    tau = matmul(M2.V, mat_sigma(emb1_l, -1))
    cols = []
    for t in range(emb1.cols):
        y = tuple(tau.entries[i][t] for i in range(M2.rank))
        c = solve_mod(emb2, y, M2.profile)
        if c is None:
            return None
        cols.append(tuple(R2.reduce_to(c[s], K2.profile[s]) for s in range(K2.rank)))
    return ChainRingMatrix(
        R2, K2.rank, emb1.cols, tuple(tuple(col[i] for col in cols) for i in range(K2.rank))
    )


def _is_bijective_transition(K1: DieudonneModule, K2: DieudonneModule, C: ChainRingMatrix) -> bool:
    if dm_length(K1) != dm_length(K2):
        return False
    if not K2.rank:
        return True
    profile, _ = _span_structure(C.ring, K2.profile, C)
    return sum(profile) == dm_length(K2)


def _stable_kernel(trunc, op: str, n: int, start: int, N: int) -> DieudonneModule:
    """Scan levels from ``start`` for the first V-transition-stable kernel.

    Returning the first stable level makes the answer independent of N, so
    reports do not move when the working precision is raised."""
    for L in range(start, N):
        M1, M2 = trunc(L), trunc(L + 1)
        K1, emb1 = dm_word_kernel(M1, op, n)
        K2, emb2 = dm_word_kernel(M2, op, n)
        if K1.profile != K2.profile:
            continue
        if not K1.rank:
            return K1
        C = _transition_on_kernel(M1, M2, K1, emb1, K2, emb2)
        if C is not None and _is_bijective_transition(K1, K2, C):
            return K1
    raise UnstableTruncation(f"kernel of {op}^{n} did not stabilize below level {N}")


def _growth_checked_dim(trunc, op: str, n: int, side: str, N: int, slope: int) -> int:
    """Verify the kernel/cokernel tower grows with the expected slope."""
    word = dm_word_kernel if side == "ker" else dm_word_cokernel
    for L in (N - 1, N):
        K, _ = word(trunc(L), op, n)
        if dm_length(K) != slope * L:
            raise UnstableTruncation(
                f"expected pure slope-{slope} growth for {op}^{n}, level {L} has length {dm_length(K)}"
            )
    return slope


def _colimit_pieces(M: CartierModule, op: str, n: int, side: str) -> tuple[list[DieudonneModule], int]:
    field = M.field
    N = M.v_precision
    if n > N - 2:
        raise PrecisionExceeded(f"{op}^{n} colimit evaluation needs v_precision >= {n + 2}")
    finites: list[DieudonneModule] = []
    vector = 0
    for s in M.summands:
        if isinstance(s, FiniteSummand):
            # not part of the V-divided tower: evaluated verbatim
            word = dm_word_kernel if side == "ker" else dm_word_cokernel
            K, _ = word(s.module, op, n)
            if K.rank:
                finites.append(K)
            continue
        if isinstance(s, UnitSummand):
            if side == "coker":
                # V = p.(unit), so V^n lies in the image of each of p^n and
                # V^n, and F is invertible: every cokernel transition is
                # nilpotent and the colimit vanishes.
                continue
            if op == "F":
                continue  # F invertible on every truncation
            trunc = lambda L, _s=s: _trunc_unit(field, _s.F_unit, L)
            finites.append(_stable_kernel(trunc, op, n, n + 1, N))
            continue
        if isinstance(s, AdditiveSummand):
            trunc = lambda L: _trunc_additive_copy(field, L)
            if op == "V":
                if side == "coker":
                    continue  # transitions factor through V^n: nilpotent
                K = _stable_kernel(trunc, op, n, n + 1, N)
                finites.extend([K] * s.rank)
            else:
                # F = 0 and p = FV = 0: the full tower, growing with slope 1
                vector += s.rank * _growth_checked_dim(trunc, op, n, side, N, 1)
            continue
        if isinstance(s, FormalSummand):
            if side == "coker":
                # transitions die: by V^n itself for coker(V^n), by
                # V^{n(h+1)} = p^n for coker(p^n), and by V^{nh} M ⊆ F^n M
                # for coker(F^n).
                continue
            start = max(n + 1, s.h + 1)
            if start >= N:
                raise PrecisionExceeded(f"formal(h={s.h}) needs v_precision > {start}")
            trunc = lambda L, _s=s: _trunc_formal_copy(field, _s.h, L)
            K = _stable_kernel(trunc, op, n, start, N)
            finites.extend([K] * s.mult)
            continue
        raise BadParameter(f"unknown summand {s!r}")
    return finites, vector


def _sum_or_zero(field: FieldSpec, parts: list[DieudonneModule]) -> DieudonneModule:
    parts = [p for p in parts if p.rank]
    if not parts:
        return dm_zero(field)
    return dm_direct_sum(*parts)


def cm_colimit_piece(M: CartierModule, op: str, n: int, side: str) -> CwPiece:
    """ker/coker of p^n, F^n or V^n evaluated in the colimit of M/V^L.

    Each summand contributes a piece that stabilizes (finite), dies under
    the V-transitions (dropped), or grows with constant slope (vector)."""
    if side not in ("ker", "coker"):
        raise BadParameter(f"side must be 'ker' or 'coker', got {side!r}")
    if n < 1:
        raise BadParameter("endomorphism power must be >= 1")
    finites, vector = _colimit_pieces(M, op, n, side)
    return CwPiece(_sum_or_zero(M.field, finites), vector)


def cm_complex_h(
    X: TwoTermComplex, M_prev: CartierModule, policy: str = "split"
) -> ComplexHResult:
    """Graded hypercohomology of the two-term complex [M ->(endo) M].

    The degree-i piece splits along 0 -> coker(f on M_prev) -> H^i -> ker(f
    on M_cur) -> 0; both sides are computed on the stored-precision
    truncations.  The extension is assembled as a direct sum under the split
    policy, or canonically when either piece vanishes."""
    n = X.power
    Mp = cm_trunc(M_prev, M_prev.v_precision)
    Mc = cm_trunc(X.module, X.module.v_precision)
    coker_fin = dm_word_cokernel(Mp, X.op, n)[0] if Mp.rank else Mp
    ker_fin = dm_word_kernel(Mc, X.op, n)[0] if Mc.rank else Mc
    field = X.module.field
    if not coker_fin.rank or not ker_fin.rank:
        status = "canonical"
        assembled = _sum_or_zero(field, [coker_fin, ker_fin])
    elif policy == "split":
        status = "split-assumed"
        assembled = _sum_or_zero(field, [coker_fin, ker_fin])
    else:
        status = "undetermined"
        assembled = None
    return ComplexHResult(coker_fin, ker_fin, assembled, status)
