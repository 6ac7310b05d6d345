"""Truncated p-typical Witt vectors W_m(F_{p^n}) with symbolic structure polynomials.

The universal addition/multiplication polynomials S_i, P_i are computed by
the integer ghost recursion

    p^i * S_i  =  w_i(X) + w_i(Y) - sum_{j<i} p^j S_j^{p^{i-j}},
    w_i(Z)     =  sum_{j<=i} p^j Z_j^{p^{i-j}},

with every intermediate reduced mod p^{i+1}: a coefficient of S_j known mod p
determines S_j^{p^e} mod p^{e+1} by repeated p-th powers (x = y mod p^s
implies x^p = y^p mod p^{s+1}), which is exactly the precision the division
by p^i needs.  Tables are memoized per (p, i, kind); their size grows
super-exponentially in i (p=2: 2, 3, 7, 29, 219, 4565, 275323 terms), so the
practical envelope is length <= 6 fast / 7 slow at p=2, <= 4 at p=3, <= 3 at
p=5.  Everything downstream of this module uses the isomorphic Z_q/p^m
representation instead (see :mod:`ffgs.zq`); the two are cross-checked in
the test suite.

Monomials are packed into a single integer, 16 bits of exponent per
variable slot: slots 0..15 hold X_0..X_15, slots 16..31 hold Y_0..Y_15.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from .config import CONFIG
from .errors import (
    BadParameter,
    BadTarget,
    EnvelopeExceeded,
    FieldMismatch,
    LengthMismatch,
    OverflowGuard,
)
from .field import FieldSpec, Fq

__all__ = [
    "WittVector",
    "WittPolynomial",
    "witt_poly",
    "witt_zero",
    "witt_one",
    "teichmuller",
    "witt_add",
    "witt_neg",
    "witt_sub",
    "witt_mul",
    "witt_smul",
    "witt_structure",
    "witt_mult_p",
]

_BITS = 16
_YOFF = 16
_Kind = Literal["sum", "product", "neg"]

# -- packed-monomial polynomial helpers (dict: packed-exponents -> int coeff) --


def _guard_exponent(e: int) -> None:
    if e >= (1 << _BITS):
        raise OverflowGuard(f"monomial exponent {e} exceeds packed budget")


def _pmul(a: dict[int, int], b: dict[int, int], mod: int) -> dict[int, int]:
    out: dict[int, int] = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            key = ma + mb
            c = out.get(key, 0) + ca * cb
            out[key] = c % mod
    return {k: v for k, v in out.items() if v}


def _ppow_p(a: dict[int, int], p: int, mod: int) -> dict[int, int]:
    """a^p by square-and-multiply on packed dicts, coefficients mod ``mod``."""
    result = {0: 1}
    base = a
    e = p
    while e:
        if e & 1:
            result = _pmul(result, base, mod)
        if e > 1:
            base = _pmul(base, base, mod)
        e >>= 1
    return result


def _padd(a: dict[int, int], b: dict[int, int], mod: int) -> dict[int, int]:
    out = dict(a)
    for m, c in b.items():
        s = (out.get(m, 0) + c) % mod
        if s:
            out[m] = s
        else:
            out.pop(m, None)
    return out


def _mono(slot: int, exp: int) -> int:
    _guard_exponent(exp)
    return exp << (_BITS * slot)


def _ghost(i: int, p: int, offset: int, mod: int) -> dict[int, int]:
    """w_i = sum_{j<=i} p^j X_j^{p^{i-j}} over slots offset..offset+i."""
    out: dict[int, int] = {}
    for j in range(i + 1):
        coeff = pow(p, j, mod) if p**j < mod else 0
        if coeff:
            out = _padd(out, {_mono(offset + j, p ** (i - j)): coeff}, mod)
    return out


_tables: dict[tuple[int, int, str], dict[int, int]] = {}


def _staged_power(poly_mod_p: dict[int, int], p: int, stages: int) -> dict[int, int]:
    """poly^{p^stages} mod p^{stages+1}, from poly known mod p."""
    acc = poly_mod_p
    for s in range(1, stages + 1):
        acc = _ppow_p(acc, p, p ** (s + 1))
    return acc


def _structure_table(p: int, i: int, kind: _Kind) -> dict[int, int]:
    """S_i / P_i / N_i reduced mod p, as packed dict.  Memoized, write-once idempotent."""
    key = (p, i, kind)
    cached = _tables.get(key)
    if cached is not None:
        return cached
    if i >= CONFIG.max_witt_length:
        raise EnvelopeExceeded(
            f"structure polynomial index {i} >= configured max length {CONFIG.max_witt_length}"
        )
    if i == 0:
        if kind == "sum":
            table = {_mono(0, 1): 1, _mono(_YOFF, 1): 1}
        elif kind == "product":
            table = {_mono(0, 1) + _mono(_YOFF, 1): 1}
        else:
            table = {_mono(0, 1): p - 1}
        _tables.setdefault(key, table)
        return _tables[key]

    mod = p ** (i + 1)
    if kind == "sum":
        num = _padd(_ghost(i, p, 0, mod), _ghost(i, p, _YOFF, mod), mod)
    elif kind == "product":
        num = _pmul(_ghost(i, p, 0, mod), _ghost(i, p, _YOFF, mod), mod)
    else:
        num = {m: (-c) % mod for m, c in _ghost(i, p, 0, mod).items()}
    for j in range(i):
        prev = _structure_table(p, j, kind)
        powed = _staged_power(prev, p, i - j)
        pj = p**j
        num = _padd(num, {m: (-c * pj) % mod for m, c in powed.items()}, mod)
    pi = p**i
    table: dict[int, int] = {}
    for m, c in num.items():
        if c % pi:
            raise AssertionError(f"ghost recursion numerator not divisible by p^{i}")
        r = (c // pi) % p
        if r:
            table[m] = r
    _tables.setdefault(key, table)
    return _tables[key]


def _unpack(packed: int) -> tuple[tuple[str, int, int], ...]:
    out = []
    slot = 0
    while packed:
        e = packed & ((1 << _BITS) - 1)
        if e:
            name, idx = ("X", slot) if slot < _YOFF else ("Y", slot - _YOFF)
            out.append((name, idx, e))
        packed >>= _BITS
        slot += 1
    return tuple(out)


@dataclass(frozen=True)
class WittPolynomial:
    """Universal structure polynomial over F_p in variables X_j, Y_j.

    ``terms`` is a deterministic tuple of (coefficient, monomial) pairs with
    monomial = tuple of (variable, index, exponent).
    """

    p: int
    index: int
    kind: str
    terms: tuple[tuple[int, tuple[tuple[str, int, int], ...]], ...]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for coeff, mono in self.terms:
            factors = [
                f"{name}{idx}" + (f"^{e}" if e > 1 else "") for name, idx, e in mono
            ]
            body = "*".join(factors) if factors else "1"
            parts.append(body if coeff == 1 else f"{coeff}*{body}")
        return " + ".join(parts)

    def evaluate(self, field: FieldSpec, xs: tuple[Fq, ...], ys: tuple[Fq, ...]) -> Fq:
        cache: dict[tuple[str, int, int], Fq] = {}
        acc = field.zero()
        for coeff, mono in self.terms:
            term = field.scalar(coeff)
            for name, idx, e in mono:
                key = (name, idx, e)
                val = cache.get(key)
                if val is None:
                    base = xs[idx] if name == "X" else ys[idx]
                    val = field.pow_(base, e)
                    cache[key] = val
                term = field.mul(term, val)
            acc = field.add(acc, term)
        return acc


def witt_poly(p: int, i: int, kind: str) -> WittPolynomial:
    """The i-th structure polynomial for p: kind 'sum' (S_i), 'product' (P_i) or 'neg' (N_i)."""
    if kind not in ("sum", "product", "neg"):
        raise BadParameter(f"unknown kind {kind!r}")
    if i < 0:
        raise BadParameter("index must be >= 0")
    table = _structure_table(p, i, kind)  # type: ignore[arg-type]
    terms = tuple((c, _unpack(m)) for m, c in sorted(table.items()))
    return WittPolynomial(p, i, kind, terms)


# -- Witt vectors -------------------------------------------------------------


@dataclass(frozen=True)
class WittVector:
    """Element of W_m(F_q): m components, each an F_q element tuple."""

    field: FieldSpec
    components: tuple[Fq, ...]

    @property
    def length(self) -> int:
        return len(self.components)

    def is_zero(self) -> bool:
        return all(not any(c) for c in self.components)

    def __str__(self) -> str:
        return "(" + ", ".join(str(list(c)) for c in self.components) + ")"


def _check_pair(u: WittVector, v: WittVector) -> None:
    if u.field != v.field:
        raise FieldMismatch("Witt vectors over different fields")
    if u.length != v.length:
        raise LengthMismatch(f"lengths {u.length} != {v.length}")


def witt_zero(field: FieldSpec, m: int) -> WittVector:
    if m < 1:
        raise BadParameter("length must be >= 1")
    return WittVector(field, ((field.zero(),) * m))


def witt_one(field: FieldSpec, m: int) -> WittVector:
    return teichmuller(field, field.one(), m)


def teichmuller(field: FieldSpec, a: Fq, m: int) -> WittVector:
    """Multiplicative representative [a] = (a, 0, ..., 0)."""
    if m < 1:
        raise BadParameter("length must be >= 1")
    return WittVector(field, (a,) + (field.zero(),) * (m - 1))


def _eval_structure(u: WittVector, v: WittVector, kind: _Kind) -> WittVector:
    field = u.field
    p = field.p
    comps = []
    for i in range(u.length):
        table = _structure_table(p, i, kind)
        cache: dict[int, Fq] = {}
        acc = field.zero()
        for packed, coeff in table.items():
            term = field.scalar(coeff)
            mono = packed
            slot = 0
            while mono:
                e = mono & ((1 << _BITS) - 1)
                if e:
                    key = (slot << _BITS) | e
                    val = cache.get(key)
                    if val is None:
                        base = u.components[slot] if slot < _YOFF else v.components[slot - _YOFF]
                        val = field.pow_(base, e)
                        cache[key] = val
                    term = field.mul(term, val)
                mono >>= _BITS
                slot += 1
            acc = field.add(acc, term)
        comps.append(acc)
    return WittVector(field, tuple(comps))


def witt_add(u: WittVector, v: WittVector) -> WittVector:
    _check_pair(u, v)
    return _eval_structure(u, v, "sum")


def witt_mul(u: WittVector, v: WittVector) -> WittVector:
    _check_pair(u, v)
    return _eval_structure(u, v, "product")


def witt_neg(u: WittVector) -> WittVector:
    field = u.field
    if field.p != 2:
        return WittVector(field, tuple(field.neg(c) for c in u.components))
    return _eval_structure(u, u, "neg")


def witt_sub(u: WittVector, v: WittVector) -> WittVector:
    return witt_add(u, witt_neg(v))


def witt_smul(c: int, u: WittVector) -> WittVector:
    """Integer scalar multiple: repeated addition via binary expansion (c can be negative)."""
    if c < 0:
        return witt_neg(witt_smul(-c, u))
    acc = witt_zero(u.field, u.length)
    base = u
    while c:
        if c & 1:
            acc = witt_add(acc, base)
        if c > 1:
            base = witt_add(base, base)
        c >>= 1
    return acc


def witt_structure(u: WittVector, kind: str, target_length: "int | None" = None) -> WittVector:
    """Apply a structure map: 'F' (Frobenius, same length), 'V' (Verschiebung,
    length m+1) or 'R' (restriction, length target_length <= m)."""
    field = u.field
    m = u.length
    if kind == "F":
        if target_length not in (None, m):
            raise BadTarget("F preserves length")
        return WittVector(field, tuple(field.frob(c, 1) for c in u.components))
    if kind == "V":
        if target_length not in (None, m + 1):
            raise BadTarget(f"V maps length {m} to {m + 1}")
        return WittVector(field, (field.zero(),) + u.components)
    if kind == "R":
        t = m if target_length is None else target_length
        if not 1 <= t <= m:
            raise BadTarget(f"restriction target {t} not in 1..{m}")
        return WittVector(field, u.components[:t])
    raise BadParameter(f"unknown structure map {kind!r}")


def witt_mult_p(u: WittVector) -> WittVector:
    """p * u inside W_m: equals R(V(F(u))) = (0, u_0^p, ..., u_{m-2}^p)."""
    field = u.field
    shifted = (field.zero(),) + tuple(field.frob(c, 1) for c in u.components[:-1])
    return WittVector(field, shifted)
