"""Exact linear algebra over the chain ring R = W_m(F_q) = Z_q/p^m.

Every ideal of R is (p^e), every element is unit * p^e, and finitely
generated modules are direct sums of W_e's — so Smith decomposition with
full unimodular bookkeeping and the Howell normal form (canonical row-span
representative, with zero-saturation rows folded in during elimination)
carry over verbatim from the Z/p^m case.  Matrices act on columns:
T(e_j) = sum_k A[k][j] e_k; a semilinear map with twist ``a`` sends x to
A . sigma^a(x).

Graded sources/targets ⊕_j W_{s_j} are handled by the scaling trick: a
congruence A x = 0 (mod p^{t_i} in row i) is the free equation
diag(p^{m-t_i}) A x = 0 over R, and quotient-module presentations reduce to
two nested Smith computations.  All profiles are descending tuples of
exponents in 1..m.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BadParameter, ShapeError, TwistViolation
from .field import FieldSpec
from .witt import WittVector
from .zq import Zq, ZqRing, from_zq, to_zq, zq_ring

__all__ = [
    "ChainRingMatrix",
    "SmithDecomposition",
    "SemilinearMap",
    "matrix_from_witt",
    "matrix_from_rows",
    "identity_matrix",
    "zero_matrix",
    "matmul",
    "matadd",
    "matsub",
    "mat_sigma",
    "mat_scale",
    "transpose",
    "smith_decompose",
    "howell_form",
    "elementary_divisors",
    "kernel_free",
    "solve_free",
    "solve_mod",
    "matrix_inv",
    "is_invertible",
    "row_span_contains",
    "semilinear_kernel",
    "semilinear_cokernel",
    "compose",
    "profile_length",
    "check_profile",
]

Profile = tuple[int, ...]


def check_profile(profile: Profile, m: int) -> None:
    if any(not 1 <= e <= m for e in profile):
        raise BadParameter(f"profile {profile} not within 1..{m}")
    if any(profile[i] < profile[i + 1] for i in range(len(profile) - 1)):
        raise BadParameter(f"profile {profile} must be descending")


def profile_length(profile: Profile) -> int:
    return sum(profile)


@dataclass(frozen=True)
class ChainRingMatrix:
    """Immutable matrix over Z_q/p^m; ``entries[i][j]`` is row i, column j."""

    ring: ZqRing
    rows: int
    cols: int
    entries: tuple[tuple[Zq, ...], ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ShapeError("entry grid does not match declared shape")

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def entry(self, i: int, j: int) -> Zq:
        return self.entries[i][j]

    def witt_entries(self) -> tuple[tuple[WittVector, ...], ...]:
        R = self.ring
        return tuple(tuple(from_zq(e, R) for e in row) for row in self.entries)

    def is_zero(self) -> bool:
        return all(not any(e) for row in self.entries for e in row)

    def __str__(self) -> str:
        grid = self.witt_entries()
        return "\n".join("[" + "  ".join(str(w) for w in row) + "]" for row in grid)


def matrix_from_rows(ring: ZqRing, rows: "list[list[Zq]] | tuple", cols: "int | None" = None) -> ChainRingMatrix:
    rows = tuple(tuple(e) for e in rows)
    ncols = len(rows[0]) if rows else (cols if cols is not None else 0)
    if cols is not None and rows and ncols != cols:
        raise ShapeError("cols mismatch")
    if cols is not None:
        ncols = cols
    return ChainRingMatrix(ring, len(rows), ncols, rows)


def matrix_from_witt(field: FieldSpec, m: int, grid) -> ChainRingMatrix:
    """Build from a grid of WittVectors of length m."""
    R = zq_ring(field, m)
    ent = tuple(tuple(to_zq(w, R) for w in row) for row in grid)
    rows = len(ent)
    cols = len(ent[0]) if rows else 0
    return ChainRingMatrix(R, rows, cols, ent)


def identity_matrix(ring: ZqRing, n: int) -> ChainRingMatrix:
    one, zero = ring.one(), ring.zero()
    return ChainRingMatrix(
        ring, n, n, tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))
    )


def zero_matrix(ring: ZqRing, rows: int, cols: int) -> ChainRingMatrix:
    z = ring.zero()
    return ChainRingMatrix(ring, rows, cols, tuple((z,) * cols for _ in range(rows)))


def matmul(a: ChainRingMatrix, b: ChainRingMatrix) -> ChainRingMatrix:
    if a.ring != b.ring:
        raise ShapeError("matrices over different rings")
    if a.cols != b.rows:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    R = a.ring
    out = []
    for i in range(a.rows):
        row = []
        for j in range(b.cols):
            acc = R.zero()
            for k in range(a.cols):
                e = a.entries[i][k]
                if any(e):
                    acc = R.add(acc, R.mul(e, b.entries[k][j]))
            row.append(acc)
        out.append(tuple(row))
    return ChainRingMatrix(R, a.rows, b.cols, tuple(out))


def matadd(a: ChainRingMatrix, b: ChainRingMatrix) -> ChainRingMatrix:
    if a.shape != b.shape or a.ring != b.ring:
        raise ShapeError("shape/ring mismatch in matadd")
    R = a.ring
    ent = tuple(
        tuple(R.add(x, y) for x, y in zip(ra, rb)) for ra, rb in zip(a.entries, b.entries)
    )
    return ChainRingMatrix(R, a.rows, a.cols, ent)


def matsub(a: ChainRingMatrix, b: ChainRingMatrix) -> ChainRingMatrix:
    if a.shape != b.shape or a.ring != b.ring:
        raise ShapeError("shape/ring mismatch in matsub")
    R = a.ring
    ent = tuple(
        tuple(R.sub(x, y) for x, y in zip(ra, rb)) for ra, rb in zip(a.entries, b.entries)
    )
    return ChainRingMatrix(R, a.rows, a.cols, ent)


def mat_sigma(a: ChainRingMatrix, power: int) -> ChainRingMatrix:
    R = a.ring
    ent = tuple(tuple(R.sigma(e, power) for e in row) for row in a.entries)
    return ChainRingMatrix(R, a.rows, a.cols, ent)


def mat_scale(c: Zq, a: ChainRingMatrix) -> ChainRingMatrix:
    R = a.ring
    ent = tuple(tuple(R.mul(c, e) for e in row) for row in a.entries)
    return ChainRingMatrix(R, a.rows, a.cols, ent)


def transpose(a: ChainRingMatrix) -> ChainRingMatrix:
    ent = tuple(tuple(a.entries[i][j] for i in range(a.rows)) for j in range(a.cols))
    return ChainRingMatrix(a.ring, a.cols, a.rows, ent)


# -- Smith decomposition -------------------------------------------------------


@dataclass(frozen=True)
class SmithDecomposition:
    """U @ A @ V = diag(p^exponents), with U, V invertible and inverses tracked.

    ``exponents`` has length min(rows, cols); the value m stands for a zero
    diagonal entry (p^m = 0 in R).
    """

    ring: ZqRing
    exponents: tuple[int, ...]
    U: ChainRingMatrix
    Uinv: ChainRingMatrix
    V: ChainRingMatrix
    Vinv: ChainRingMatrix


def smith_decompose(a: ChainRingMatrix) -> SmithDecomposition:
    R = a.ring
    m = R.m
    rows, cols = a.shape
    A = [[e for e in row] for row in a.entries]
    U = [[R.one() if i == j else R.zero() for j in range(rows)] for i in range(rows)]
    Ui = [[R.one() if i == j else R.zero() for j in range(rows)] for i in range(rows)]
    V = [[R.one() if i == j else R.zero() for j in range(cols)] for i in range(cols)]
    Vi = [[R.one() if i == j else R.zero() for j in range(cols)] for i in range(cols)]

    def row_swap(M, i, j):
        M[i], M[j] = M[j], M[i]

    def col_swap(M, i, j):
        for r in M:
            r[i], r[j] = r[j], r[i]

    def row_scale(M, i, u):
        M[i] = [R.mul(u, e) for e in M[i]]

    def row_addmul(M, dst, src, c):
        M[dst] = [R.add(x, R.mul(c, y)) for x, y in zip(M[dst], M[src])]

    def col_addmul(M, dst, src, c):
        for r in M:
            r[dst] = R.add(r[dst], R.mul(c, r[src]))

    exps: list[int] = []
    k = 0
    lim = min(rows, cols)
    while k < lim:
        best_v, bi, bj = m, -1, -1
        for i in range(k, rows):
            for j in range(k, cols):
                v = R.val(A[i][j])
                if v < best_v:
                    best_v, bi, bj = v, i, j
                    if v == 0:
                        break
            if best_v == 0:
                break
        if bi < 0:
            break
        if bi != k:
            row_swap(A, k, bi)
            row_swap(U, k, bi)
            col_swap(Ui, k, bi)
        if bj != k:
            col_swap(A, k, bj)
            col_swap(V, k, bj)
            row_swap(Vi, k, bj)
        v, u = R.unit_part(A[k][k])
        uinv = R.inv(u)
        row_scale(A, k, uinv)
        row_scale(U, k, uinv)
        for t in range(rows):  # Ui <- Ui * diag(..u..)
            Ui[t][k] = R.mul(Ui[t][k], u)
        pe = R.scalar(R.field.p**v)
        for i in range(k + 1, rows):
            if any(A[i][k]):
                q = R.div_p(A[i][k], v)
                nq = R.neg(q)
                row_addmul(A, i, k, nq)
                row_addmul(U, i, k, nq)
                col_addmul(Ui, k, i, q)
        for j in range(k + 1, cols):
            if any(A[k][j]):
                q = R.div_p(A[k][j], v)
                nq = R.neg(q)
                col_addmul(A, j, k, nq)
                col_addmul(V, j, k, nq)
                row_addmul(Vi, k, j, q)
        exps.append(v)
        k += 1
    while len(exps) < lim:
        exps.append(m)

    def freeze(M, r, c):
        return ChainRingMatrix(R, r, c, tuple(tuple(row) for row in M))

    return SmithDecomposition(
        R,
        tuple(exps),
        freeze(U, rows, rows),
        freeze(Ui, rows, rows),
        freeze(V, cols, cols),
        freeze(Vi, cols, cols),
    )


def elementary_divisors(a: ChainRingMatrix) -> list[int]:
    """Exponents of the invariant factors, ascending; m stands for a zero factor."""
    return sorted(smith_decompose(a).exponents)


def is_invertible(a: ChainRingMatrix) -> bool:
    if a.rows != a.cols:
        return False
    return all(e == 0 for e in smith_decompose(a).exponents)


def matrix_inv(a: ChainRingMatrix) -> ChainRingMatrix:
    sd = smith_decompose(a)
    if any(sd.exponents):
        raise BadParameter("matrix is not invertible")
    return matmul(sd.V, sd.U)


# -- kernels and solving -------------------------------------------------------


def kernel_free(a: ChainRingMatrix) -> list[tuple[int, tuple[Zq, ...]]]:
    """Generators of {x in R^cols : A x = 0}.

    Returns (order_exponent, column) pairs: the kernel is the direct sum of
    the cyclic modules R * col, each isomorphic to W_{order_exponent}.
    """
    R = a.ring
    m = R.m
    sd = smith_decompose(a)
    gens: list[tuple[int, tuple[Zq, ...]]] = []
    for k in range(a.cols):
        d = sd.exponents[k] if k < len(sd.exponents) else m
        if d == 0:
            continue
        scale = R.scalar(R.field.p ** (m - d))
        col = tuple(R.mul(scale, sd.V.entries[i][k]) for i in range(a.cols))
        gens.append((d, col))
    return gens


def solve_free(a: ChainRingMatrix, b: tuple[Zq, ...]) -> "tuple[Zq, ...] | None":
    """Any x with A x = b over R^free, or None."""
    R = a.ring
    if len(b) != a.rows:
        raise ShapeError("rhs length mismatch")
    sd = smith_decompose(a)
    ub = [
        _dot(R, sd.U.entries[i], b)
        for i in range(a.rows)
    ]
    z: list[Zq] = [R.zero()] * a.cols
    for k in range(a.rows):
        if k < len(sd.exponents) and k < a.cols:
            d = sd.exponents[k]
            if R.val(ub[k]) < d:
                return None
            z[k] = R.div_p(ub[k], d) if d else ub[k]
            if d >= R.m:
                z[k] = R.zero()
        else:
            if any(ub[k]):
                return None
    return tuple(
        _dot(R, sd.V.entries[i], tuple(z)) for i in range(a.cols)
    )


def _dot(R: ZqRing, row, vec) -> Zq:
    acc = R.zero()
    for c, x in zip(row, vec):
        if any(c) and any(x):
            acc = R.add(acc, R.mul(c, x))
    return acc


def _diag_scale_rows(a: ChainRingMatrix, exps: "list[int] | tuple[int, ...]") -> ChainRingMatrix:
    R = a.ring
    p = R.field.p
    ent = tuple(
        tuple(R.smul(p ** exps[i], e) for e in row) for i, row in enumerate(a.entries)
    )
    return ChainRingMatrix(R, a.rows, a.cols, ent)


def solve_mod(a: ChainRingMatrix, b: tuple[Zq, ...], row_moduli: Profile) -> "tuple[Zq, ...] | None":
    """Any x with (A x)_i = b_i mod p^{row_moduli[i]}, x over free R^cols."""
    R = a.ring
    m = R.m
    if len(row_moduli) != a.rows:
        raise ShapeError("row moduli length mismatch")
    scaled = _diag_scale_rows(a, [m - t for t in row_moduli])
    sb = tuple(R.smul(R.field.p ** (m - t), x) for t, x in zip(row_moduli, b))
    return solve_free(scaled, sb)


def row_span_contains(a: ChainRingMatrix, v: tuple[Zq, ...]) -> bool:
    """Is v in the R-row-span of a (free coordinates)?"""
    return solve_free(transpose(a), v) is not None


# -- Howell normal form --------------------------------------------------------


def howell_form(a: ChainRingMatrix) -> ChainRingMatrix:
    """Canonical representative of the row span of ``a``.

    Pivots are p^e at strictly increasing columns, entries below a pivot are
    zero, entries above are reduced mod p^e, and the zero-saturation rows
    p^{m-e} * (pivot row) are folded into the elimination so equal spans give
    byte-equal forms.  Zero rows are dropped from the output.
    """
    R = a.ring
    m = R.m
    p = R.field.p
    cols = a.cols
    work: list[list[Zq]] = [list(row) for row in a.entries if any(any(e) for e in row)]
    fixed: list[tuple[int, int, list[Zq]]] = []  # (pivot col, exponent, row)
    for col in range(cols):
        best, best_v = -1, m
        for idx, r in enumerate(work):
            v = R.val(r[col])
            if v < best_v:
                best, best_v = idx, v
        if best < 0:
            continue
        r0 = work.pop(best)
        e = best_v
        _, u = R.unit_part(r0[col])
        uinv = R.inv(u)
        r0 = [R.mul(uinv, x) for x in r0]
        pe = p**e
        for r in work:
            if any(r[col]):
                q = R.div_p(r[col], e)
                for j in range(col, cols):
                    r[j] = R.sub(r[j], R.mul(q, r0[j]))
        for _, _, fr in fixed:
            c = fr[col]
            rem = tuple(x % pe for x in c)
            diff = R.sub(c, rem)
            if any(diff):
                q = R.div_p(diff, e)
                for j in range(col, cols):
                    fr[j] = R.sub(fr[j], R.mul(q, r0[j]))
        fixed.append((col, e, r0))
        if e > 0:
            sat = [R.smul(p ** (m - e), x) for x in r0]
            if any(any(x) for x in sat):
                work.append(sat)
    assert all(not any(any(e) for e in r) for r in work), "howell elimination left residue"
    rows = tuple(tuple(r) for _, _, r in fixed if any(any(e) for e in r))
    return ChainRingMatrix(R, len(rows), cols, rows)


# -- semilinear maps -----------------------------------------------------------


@dataclass(frozen=True)
class SemilinearMap:
    """x -> A . sigma^twist(x) from ⊕_j W_{src_profile[j]} to ⊕_i W_{tgt_profile[i]}.

    Entry (i, j) is only meaningful mod p^{tgt_profile[i]} and must have
    valuation >= tgt_profile[i] - src_profile[j] for the map to be defined;
    validation lives with the callers (``dm_new``).
    """

    matrix: ChainRingMatrix
    twist: int
    src_profile: Profile
    tgt_profile: Profile

    def __post_init__(self) -> None:
        if self.matrix.rows != len(self.tgt_profile) or self.matrix.cols != len(self.src_profile):
            raise ShapeError(
                f"matrix {self.matrix.shape} vs profiles (tgt {len(self.tgt_profile)}, src {len(self.src_profile)})"
            )

    @property
    def ring(self) -> ZqRing:
        return self.matrix.ring

    def apply(self, x: tuple[Zq, ...]) -> tuple[Zq, ...]:
        R = self.ring
        sx = tuple(R.sigma(c, self.twist) for c in x)
        return tuple(_dot(R, row, sx) for row in self.matrix.entries)


def compose(f: SemilinearMap, g: SemilinearMap) -> SemilinearMap:
    """f after g: x -> f(g(x)); twists add, matrix = A_f . sigma^{twist_f}(A_g)."""
    if f.src_profile != g.tgt_profile:
        raise ShapeError("composition profile mismatch")
    mat = matmul(f.matrix, mat_sigma(g.matrix, f.twist))
    return SemilinearMap(mat, f.twist + g.twist, g.src_profile, f.tgt_profile)


def _reduce_col_to_profile(R: ZqRing, col: tuple[Zq, ...], profile: Profile) -> tuple[Zq, ...]:
    return tuple(R.reduce_to(c, e) for c, e in zip(col, profile))


def semilinear_kernel(T: SemilinearMap) -> tuple[Profile, ChainRingMatrix]:
    """Kernel of T as an abstract profile plus an embedding matrix.

    Columns of the embedding are the generator images inside the source
    ⊕_j W_{s_j} (coordinates reduced mod p^{s_j}); column k generates a
    W_{profile[k]} summand and the sum is direct.
    """
    R = T.ring
    m = R.m
    p = R.field.p
    src, tgt = T.src_profile, T.tgt_profile
    # sigma^twist is a profile-preserving bijection: solve the linear part first
    scaled = _diag_scale_rows(T.matrix, [m - t for t in tgt])
    lin_gens = kernel_free(scaled)
    if not lin_gens:
        return (), zero_matrix(R, len(src), 0)
    G = ChainRingMatrix(
        R, len(src), len(lin_gens), tuple(tuple(g[1][i] for g in lin_gens) for i in range(len(src)))
    )
    # relations of the quotient by L = ⊕ p^{s_j} e_j: columns c with G c in L
    scaledG = _diag_scale_rows(G, [m - s for s in src])
    rel = kernel_free(scaledG)
    if rel:
        H = ChainRingMatrix(
            R, len(lin_gens), len(rel), tuple(tuple(r[1][i] for r in rel) for i in range(len(lin_gens)))
        )
        sd = smith_decompose(H)
        orders = list(sd.exponents) + [m] * (len(lin_gens) - len(sd.exponents))
        basis_change = sd.Uinv  # new generator i = G . Uinv e_i, order p^{orders[i]}
    else:
        orders = [m] * len(lin_gens)
        basis_change = identity_matrix(R, len(lin_gens))
    new_gens = matmul(G, basis_change)
    keep = [(orders[k], k) for k in range(len(lin_gens)) if orders[k] > 0]
    keep.sort(key=lambda t: (-t[0], t[1]))
    profile = tuple(t[0] for t in keep)
    cols = []
    for order, k in keep:
        col = tuple(new_gens.entries[i][k] for i in range(len(src)))
        col = tuple(R.sigma(c, -T.twist) for c in col)
        cols.append(_reduce_col_to_profile(R, col, src))
    emb = ChainRingMatrix(
        R, len(src), len(cols), tuple(tuple(c[i] for c in cols) for i in range(len(src)))
    )
    return profile, emb


def semilinear_cokernel(T: SemilinearMap) -> tuple[Profile, ChainRingMatrix, ChainRingMatrix]:
    """Cokernel of T: (profile, projection, section).

    projection maps target coordinates to cokernel coordinates (row k only
    meaningful mod p^{profile[k]}); section columns are representatives in
    the target of each cokernel generator.  The image of a twisted map
    equals the column span of its matrix plus the target relations, so the
    twist plays no role here.
    """
    R = T.ring
    p = R.field.p
    m = R.m
    tgt = T.tgt_profile
    r = len(tgt)
    rel_cols = []
    for i, t in enumerate(tgt):
        col = [R.zero()] * r
        col[i] = R.scalar(p**t)
        rel_cols.append(tuple(col))
    pres_entries = tuple(
        tuple(T.matrix.entries[i]) + tuple(rc[i] for rc in rel_cols) for i in range(r)
    )
    P = ChainRingMatrix(R, r, T.matrix.cols + r, pres_entries)
    sd = smith_decompose(P)
    orders = list(sd.exponents) + [m] * (r - len(sd.exponents))
    keep = [(orders[k], k) for k in range(r) if orders[k] > 0]
    keep.sort(key=lambda t: (-t[0], t[1]))
    profile = tuple(t[0] for t in keep)
    proj_rows = []
    sect_cols = []
    for order, k in keep:
        proj_rows.append(tuple(sd.U.entries[k][j] for j in range(r)))
        sect_cols.append(tuple(sd.Uinv.entries[i][k] for i in range(r)))
    proj = ChainRingMatrix(R, len(keep), r, tuple(proj_rows))
    sect = ChainRingMatrix(
        R, r, len(keep), tuple(tuple(c[i] for c in sect_cols) for i in range(r))
    )
    return profile, proj, sect
