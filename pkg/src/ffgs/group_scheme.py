"""Finite commutative group schemes over k = F_{p^n}.

Over a perfect field such a scheme splits canonically into a p-primary part
— recorded here through its Dieudonne module — and a prime-to-p part, which
is etale and is recorded by its chain of invariant factors.  Frobenius and
Verschiebung kernels, Cartier duality and the height-1 dictionary all act
through the module; the coprime part only contributes to the order.

Height-1 schemes (V = 0 on the module) biject with pairs (V-space, rho)
where rho is a sigma-linear endomorphism; the module of G_p(V, rho) is the
space itself with F = rho, and the dictionary is read back verbatim.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .errors import BadParameter
from .field import FieldSpec, Fq
from .chain import ChainRingMatrix
from .dieudonne import (
    INDETERMINATE,
    DieudonneModule,
    dm_alpha,
    dm_direct_sum,
    dm_dual,
    dm_equal,
    dm_fourway,
    dm_length,
    dm_mu,
    dm_new,
    dm_op_map,
    dm_ss_kernel,
    dm_word_cokernel,
    dm_word_kernel,
    dm_zero,
    dm_zmod,
    module_iso_test,
)
from .zq import zq_ring

__all__ = [
    "GroupScheme",
    "HeightOneData",
    "GsClassification",
    "gs_atom",
    "gs_from_module",
    "gs_height_one",
    "gs_dual",
    "gs_order",
    "gs_frobenius_kernel",
    "gs_verschiebung_kernel",
    "gs_height",
    "gs_classify",
    "atom_display_name",
]


@dataclass(frozen=True)
class GroupScheme:
    p_part: DieudonneModule
    etale_coprime: tuple[int, ...] = ()
    label: "str | None" = None

    @property
    def field(self) -> FieldSpec:
        return self.p_part.field

    def __str__(self) -> str:
        if self.label:
            return self.label
        parts = []
        if self.p_part.rank:
            parts.append(str(self.p_part))
        for d in self.etale_coprime:
            parts.append(f"Z/{d}")
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class HeightOneData:
    """A d-dimensional k-space with a sigma-linear endomorphism rho."""

    field: FieldSpec
    dimension: int
    rho: tuple[tuple[Fq, ...], ...]

    def __post_init__(self) -> None:
        if len(self.rho) != self.dimension or any(len(r) != self.dimension for r in self.rho):
            raise BadParameter("rho must be a dimension x dimension matrix")


def _check_coprime(field: FieldSpec, factors: tuple[int, ...]) -> None:
    for d in factors:
        if d < 2:
            raise BadParameter("invariant factors must be >= 2")
        if d % field.p == 0:
            raise BadParameter(f"invariant factor {d} is not coprime to p={field.p}")
    for a, b in zip(factors, factors[1:]):
        if b % a != 0:
            raise BadParameter("invariant factors must form a divisibility chain")


def gs_from_module(
    M: DieudonneModule, etale_coprime: tuple[int, ...] = (), label: "str | None" = None
) -> GroupScheme:
    _check_coprime(M.field, tuple(etale_coprime))
    return GroupScheme(M, tuple(etale_coprime), label)


def atom_display_name(kind: str, a: int = 1) -> str:
    if kind == "mu":
        return "mu_p" if a == 1 else f"mu_p^{a}"
    if kind == "zmod":
        return "Z/p" if a == 1 else f"Z/p^{a}"
    if kind == "alpha":
        return "alpha_p" if a == 1 else f"alpha_p^{a}"
    if kind == "ss_kernel":
        return "M11"
    raise BadParameter(f"unknown atom kind {kind!r}")


def gs_atom(field: FieldSpec, kind: str, a: int = 1) -> GroupScheme:
    """Atoms: mu(p^a), zmod(p^a), alpha(p^a), ss_kernel, constant(d) coprime to p."""
    if kind == "mu":
        return GroupScheme(dm_mu(field, a), (), atom_display_name(kind, a))
    if kind == "zmod":
        return GroupScheme(dm_zmod(field, a), (), atom_display_name(kind, a))
    if kind == "alpha":
        return GroupScheme(dm_alpha(field, a), (), atom_display_name(kind, a))
    if kind == "ss_kernel":
        if a != 1:
            raise BadParameter("ss_kernel takes no size parameter")
        return GroupScheme(dm_ss_kernel(field), (), "M11")
    if kind == "constant":
        _check_coprime(field, (a,))
        return GroupScheme(dm_zero(field), (a,), f"Z/{a}")
    raise BadParameter(f"unknown atom kind {kind!r}")


def gs_height_one(data: HeightOneData) -> GroupScheme:
    field = data.field
    d = data.dimension
    if d == 0:
        return GroupScheme(dm_zero(field))
    R = zq_ring(field, 1)
    # at precision 1 a Zq representative is exactly an F_q coefficient tuple
    F = ChainRingMatrix(R, d, d, tuple(tuple(tuple(c % field.p for c in e) for e in row) for row in data.rho))
    V = ChainRingMatrix(R, d, d, tuple((R.zero(),) * d for _ in range(d)))
    return GroupScheme(dm_new(field, (1,) * d, F, V))


def gs_dual(G: GroupScheme) -> GroupScheme:
    return GroupScheme(dm_dual(G.p_part), G.etale_coprime, None)


def gs_order(G: GroupScheme) -> int:
    return G.field.p ** dm_length(G.p_part) * math.prod(G.etale_coprime)


def gs_frobenius_kernel(G: GroupScheme, a: int = 1) -> GroupScheme:
    """G[F^a]; its module is the V^a-kernel, and coprime parts drop out."""
    if a < 1:
        raise BadParameter("kernel power must be >= 1")
    K, _ = dm_word_kernel(G.p_part, "V", a)
    return GroupScheme(K)


def gs_verschiebung_kernel(G: GroupScheme, a: int = 1) -> GroupScheme:
    if a < 1:
        raise BadParameter("kernel power must be >= 1")
    K, _ = dm_word_kernel(G.p_part, "F", a)
    return GroupScheme(K)


def gs_height(G: GroupScheme) -> "int | None":
    """Least a with V^a = 0 on the p-part; None when V is not nilpotent."""
    M = G.p_part
    if not M.rank:
        return 0
    R = M.ring
    for a in range(dm_length(M) + 1):
        T = dm_op_map(M, "V", a)
        if all(
            R.val(T.matrix.entries[i][j]) >= M.profile[i]
            for i in range(M.rank)
            for j in range(M.rank)
        ):
            return a
    return None


# -- classification ----------------------------------------------------------------


@dataclass(frozen=True)
class GsClassification:
    order: int
    height: "int | None"
    cell_lengths: dict[str, int]
    decomposition: "tuple[str, ...] | None"
    decomposition_status: str  # resolved | indeterminate | no_atom_match
    self_dual: str  # yes | no | unknown
    height_one: "HeightOneData | None"
    etale_coprime: tuple[int, ...]


def _partitions(t: int, largest: int):
    if t == 0:
        yield ()
        return
    for part in range(min(t, largest), 0, -1):
        for rest in _partitions(t - part, part):
            yield (part,) + rest


def _cell_candidates(field: FieldSpec, cell: str, profile: tuple[int, ...]):
    """Atom multisets whose combined profile could match a fourway cell."""
    if not profile:
        yield ()
        return
    if cell == "connected_multiplicative":
        yield tuple(("mu", a) for a in profile)
        return
    if cell == "etale_unipotent":
        yield tuple(("zmod", a) for a in profile)
        return
    if cell == "connected_unipotent":
        if any(e != 1 for e in profile):
            return  # no listed atom has a profile entry above 1
        t = len(profile)
        for part in _partitions(t, t):
            counts: dict[int, int] = {}
            for x in part:
                counts[x] = counts.get(x, 0) + 1
            # each size-2 part can independently be alpha(p^2) or M11
            two = counts.get(2, 0)
            base = tuple(("alpha", x) for x in part if x != 2)
            for n_ss in range(two + 1):
                yield base + (("ss_kernel", 1),) * n_ss + (("alpha", 2),) * (two - n_ss)
        return
    if cell == "etale_multiplicative":
        if profile:
            return
        yield ()


def _atom_module(field: FieldSpec, spec: tuple[str, int]) -> DieudonneModule:
    kind, a = spec
    if kind == "mu":
        return dm_mu(field, a)
    if kind == "zmod":
        return dm_zmod(field, a)
    if kind == "alpha":
        return dm_alpha(field, a)
    return dm_ss_kernel(field)


def _decompose_cell(cellname: str, M: DieudonneModule) -> "tuple[tuple[str, ...] | None, str]":
    if not M.rank:
        return (), "resolved"
    field = M.field
    saw_indeterminate = False
    for cand in _cell_candidates(field, cellname, M.profile):
        mods = [_atom_module(field, s) for s in cand]
        S = dm_direct_sum(*mods) if mods else dm_zero(field)
        r = module_iso_test(M, S)
        if r is INDETERMINATE:
            saw_indeterminate = True
        elif r:
            return tuple(atom_display_name(k, a) for k, a in cand), "resolved"
    return None, ("indeterminate" if saw_indeterminate else "no_atom_match")


def gs_classify(G: GroupScheme) -> GsClassification:
    M = G.p_part
    fw = dm_fourway(M)
    cells = fw.cells()
    cell_lengths = {name: dm_length(mod) for name, mod in cells.items()}
    height = gs_height(G)

    pieces: list[str] = []
    status = "resolved"
    for name, mod in cells.items():
        dec, st = _decompose_cell(name, mod)
        if dec is None:
            status = st
            pieces = []
            break
        pieces.extend(dec)
    decomposition = tuple(sorted(pieces)) if status == "resolved" else None
    if decomposition is not None:
        decomposition = decomposition + tuple(f"Z/{d}" for d in G.etale_coprime)

    sd = module_iso_test(M, dm_dual(M))
    self_dual = "unknown" if sd is INDETERMINATE else ("yes" if sd else "no")

    h1: "HeightOneData | None" = None
    if height is not None and height <= 1:
        rho = tuple(
            tuple(tuple(c % M.field.p for c in M.F.entries[i][j]) for j in range(M.rank))
            for i in range(M.rank)
        )
        h1 = HeightOneData(M.field, M.rank, rho)

    return GsClassification(
        order=gs_order(G),
        height=height,
        cell_lengths=cell_lengths,
        decomposition=decomposition,
        decomposition_status=status,
        self_dual=self_dual,
        height_one=h1,
        etale_coprime=G.etale_coprime,
    )
