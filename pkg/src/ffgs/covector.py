"""Unipotent Witt covectors CW^u(F_q) = colim(W_n, V).

A covector is a finitely supported sequence (..., a_{-2}, a_{-1}, a_0); the
class of x in W_n is the covector (a_{-(n-1)}, ..., a_0) = (x_0, ..., x_{n-1})
and the colimit identification strips leading zeros.  Addition embeds both
operands into W_N with N = support(u) + support(v) and adds there; the
result is independent of any larger N because the V-transition maps are
additive (property-checked in the tests).  Frobenius acts componentwise,
Verschiebung shifts indices down by one (dropping a_0), and FV = VF = p.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BadTarget, FieldMismatch
from .field import FieldSpec, Fq
from .witt import WittVector, witt_add, witt_neg

__all__ = [
    "Covector",
    "covector_new",
    "covector_zero",
    "covector_add",
    "covector_neg",
    "covector_sub",
    "covector_F",
    "covector_V",
    "covector_from_witt",
    "covector_to_witt",
]


@dataclass(frozen=True)
class Covector:
    """Canonical (leading-zero-stripped) unipotent covector; components end at index 0."""

    field: FieldSpec
    components: tuple[Fq, ...]

    @property
    def support(self) -> int:
        return len(self.components)

    def is_zero(self) -> bool:
        return not self.components

    def __str__(self) -> str:
        if not self.components:
            return "(...0)"
        return "(...0, " + ", ".join(str(list(c)) for c in self.components) + ")"


def covector_new(field: FieldSpec, components: "tuple[Fq, ...] | list[Fq]") -> Covector:
    comps = tuple(tuple(c) for c in components)
    start = 0
    while start < len(comps) and not any(comps[start]):
        start += 1
    return Covector(field, comps[start:])


def covector_zero(field: FieldSpec) -> Covector:
    return Covector(field, ())


def covector_from_witt(w: WittVector) -> Covector:
    return covector_new(w.field, w.components)


def covector_to_witt(u: Covector, length: int) -> WittVector:
    """Representative in W_length; needs length >= support."""
    if length < max(1, u.support):
        raise BadTarget(f"length {length} < support {u.support}")
    pad = (u.field.zero(),) * (length - u.support)
    return WittVector(u.field, pad + u.components)


def covector_add(u: Covector, v: Covector) -> Covector:
    if u.field != v.field:
        raise FieldMismatch("covectors over different fields")
    if u.is_zero():
        return v
    if v.is_zero():
        return u
    n = u.support + v.support
    w = witt_add(covector_to_witt(u, n), covector_to_witt(v, n))
    return covector_from_witt(w)


def covector_neg(u: Covector) -> Covector:
    if u.is_zero():
        return u
    return covector_from_witt(witt_neg(covector_to_witt(u, u.support)))


def covector_sub(u: Covector, v: Covector) -> Covector:
    return covector_add(u, covector_neg(v))


def covector_F(u: Covector) -> Covector:
    fld = u.field
    return covector_new(fld, tuple(fld.frob(c, 1) for c in u.components))


def covector_V(u: Covector) -> Covector:
    """(Vu)_{-i} = u_{-(i+1)}: shift towards index 0, a_0 falls away."""
    return covector_new(u.field, u.components[:-1])
