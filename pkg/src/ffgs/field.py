"""Arithmetic in finite fields F_{p^n}, p odd or 2, n >= 1.

Elements are plain tuples of ``n`` integers in ``[0, p)`` — coefficients of
``1, x, ..., x^{n-1}`` in F_p[x]/(modulus), constant term first.  All
operations live on :class:`FieldSpec` so the element type stays cheap; the
spec object is frozen and hashable and doubles as the interning key for
derived tables (Frobenius matrices, Witt structure polynomials, ...).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from .config import CONFIG
from .errors import BadParameter, EnvelopeExceeded, FieldMismatch, NonPrime, ReducibleModulus

Fq = tuple[int, ...]

__all__ = ["Fq", "FieldSpec", "make_field", "embed_field"]


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


# -- dense F_p[x] helpers (coefficient lists, constant first, no trailing zeros) --


def _ptrim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _pmulmod(f: list[int], g: list[int], mod: list[int], p: int) -> list[int]:
    out = [0] * (len(f) + len(g) - 1) if f and g else []
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return _prem(out, mod, p)


def _prem(f: list[int], mod: list[int], p: int) -> list[int]:
    f = [c % p for c in f]
    dm = len(mod) - 1
    inv_lead = pow(mod[-1], -1, p)
    _ptrim(f)
    while len(f) - 1 >= dm:
        c = f[-1] * inv_lead % p
        shift = len(f) - 1 - dm
        for i, m in enumerate(mod):
            f[shift + i] = (f[shift + i] - c * m) % p
        f.pop()  # leading coefficient is zero by construction
        _ptrim(f)
    return f


def _ppowmod(f: list[int], e: int, mod: list[int], p: int) -> list[int]:
    result = [1]
    base = _prem(list(f), mod, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, mod, p)
        base = _pmulmod(base, base, mod, p)
        e >>= 1
    return result


def _pgcd(f: list[int], g: list[int], p: int) -> list[int]:
    f, g = _ptrim(list(f)), _ptrim(list(g))
    while g:
        f, g = g, _prem(f, g, p)
        _ptrim(g)
    return f


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _is_irreducible(modulus: tuple[int, ...], p: int) -> bool:
    """Deterministic test: x^{p^n} = x (mod f) and gcd(x^{p^{n/l}} - x, f) = 1 for prime l | n."""
    mod = list(modulus)
    n = len(mod) - 1
    if n < 1 or mod[-1] % p == 0:
        return False
    x = [0, 1]
    xq = _ppowmod(x, p**n, mod, p)
    diff = [(a - b) % p for a, b in itertools.zip_longest(xq, x, fillvalue=0)]
    if _ptrim(_prem(diff, mod, p)):
        return False
    for ell in _prime_factors(n):
        xe = _ppowmod(x, p ** (n // ell), mod, p)
        diff = [(a - b) % p for a, b in itertools.zip_longest(xe, x, fillvalue=0)]
        g = _pgcd(diff, mod, p)
        if len(g) != 1:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Immutable description of F_{p^n} = F_p[x]/(modulus).

    ``modulus`` has length n+1, constant term first, leading coefficient 1.
    Use :func:`make_field` instead of constructing directly; the factory
    validates primality/irreducibility and picks a canonical modulus.
    """

    p: int
    n: int
    modulus: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p**self.n

    def zero(self) -> Fq:
        return (0,) * self.n

    def one(self) -> Fq:
        return (1,) + (0,) * (self.n - 1)

    def scalar(self, c: int) -> Fq:
        return (c % self.p,) + (0,) * (self.n - 1)

    def gen(self) -> Fq:
        """Class of x (only a field generator for n > 1; equals 0 shifted for n = 1)."""
        if self.n == 1:
            return self.one()
        return (0, 1) + (0,) * (self.n - 2)

    def element(self, coeffs: "list[int] | tuple[int, ...]") -> Fq:
        if len(coeffs) != self.n:
            raise BadParameter(f"expected {self.n} coefficients, got {len(coeffs)}")
        return tuple(c % self.p for c in coeffs)

    def elements(self) -> Iterator[Fq]:
        """All q elements, lexicographic in (c_0, ..., c_{n-1})."""
        for t in itertools.product(range(self.p), repeat=self.n):
            yield t

    # -- arithmetic ---------------------------------------------------------

    def add(self, a: Fq, b: Fq) -> Fq:
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a: Fq, b: Fq) -> Fq:
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a: Fq) -> Fq:
        p = self.p
        return tuple((-x) % p for x in a)

    def mul(self, a: Fq, b: Fq) -> Fq:
        if self.n == 1:
            return ((a[0] * b[0]) % self.p,)
        prod = [0] * (2 * self.n - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        red = _prem([c % self.p for c in prod], list(self.modulus), self.p)
        red += [0] * (self.n - len(red))
        return tuple(red)

    def smul(self, c: int, a: Fq) -> Fq:
        p = self.p
        c %= p
        return tuple((c * x) % p for x in a)

    def inv(self, a: Fq) -> Fq:
        if not any(a):
            raise ZeroDivisionError("inverse of zero field element")
        return self.pow_(a, self.q - 2)

    def pow_(self, a: Fq, e: int) -> Fq:
        if e < 0:
            return self.pow_(self.inv(a), -e)
        result = self.one()
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def is_zero(self, a: Fq) -> bool:
        return not any(a)

    # -- Frobenius ----------------------------------------------------------

    def frob(self, a: Fq, power: int = 1) -> Fq:
        """sigma^power(a) = a^{p^power}; any integer power (sigma^n = id)."""
        k = power % self.n
        if k == 0:
            return a
        table = _frob_matrix(self, k)
        p = self.p
        out = [0] * self.n
        for col, c in enumerate(a):
            if c:
                tc = table[col]
                for row in range(self.n):
                    out[row] = (out[row] + c * tc[row]) % p
        return tuple(out)


@lru_cache(maxsize=None)
def _frob_matrix(spec: FieldSpec, k: int) -> tuple[tuple[int, ...], ...]:
    """Column ``j`` = coefficients of (x^j)^{p^k} mod modulus; Frobenius is F_p-linear."""
    mod = list(spec.modulus)
    cols = []
    for j in range(spec.n):
        img = _ppowmod([0] * j + [1], spec.p**k, mod, spec.p)
        img += [0] * (spec.n - len(img))
        cols.append(tuple(img))
    return tuple(cols)


@lru_cache(maxsize=None)
def _canonical_modulus(p: int, n: int) -> tuple[int, ...]:
    for tail in itertools.product(range(p), repeat=n):
        cand = tuple(tail) + (1,)
        if _is_irreducible(cand, p):
            return cand
    raise AssertionError("no irreducible polynomial found")  # unreachable


def make_field(p: int, n: int, modulus: "tuple[int, ...] | list[int] | None" = None) -> FieldSpec:
    """Construct F_{p^n}.

    With ``modulus`` omitted the canonical choice is the monic irreducible
    of degree n whose coefficient tuple (c_0, ..., c_{n-1}) is smallest in
    lexicographic order.  Raises :class:`NonPrime` / :class:`ReducibleModulus`
    on bad input and :class:`EnvelopeExceeded` outside the configured limits.
    """
    if not _is_prime(p):
        raise NonPrime(f"p = {p} is not prime")
    if n < 1:
        raise BadParameter(f"n = {n} must be >= 1")
    if p > CONFIG.max_p or n > CONFIG.max_n:
        raise EnvelopeExceeded(f"(p, n) = ({p}, {n}) outside envelope (max {CONFIG.max_p}, {CONFIG.max_n})")
    if modulus is None:
        modulus = _canonical_modulus(p, n)
    else:
        modulus = tuple(c % p for c in modulus[:-1]) + (modulus[-1],)
        if len(modulus) != n + 1:
            raise ReducibleModulus(f"modulus must have degree {n}")
        if modulus[-1] != 1:
            raise ReducibleModulus("modulus must be monic")
        if not _is_irreducible(modulus, p):
            raise ReducibleModulus(f"modulus {list(modulus)} is reducible over F_{p}")
    return FieldSpec(p, n, modulus)


def embed_field(src: FieldSpec, dst: FieldSpec):
    """Return the lex-smallest F_p-algebra embedding F_{p^n} -> F_{p^{n t}}.

    Needs src.p == dst.p and src.n | dst.n.  Returned function maps element
    tuples of ``src`` to element tuples of ``dst`` (evaluation at the
    lex-smallest root of src.modulus in dst).
    """
    if src.p != dst.p:
        raise FieldMismatch("different characteristic")
    if dst.n % src.n:
        raise BadParameter(f"F_{{p^{src.n}}} does not embed in F_{{p^{dst.n}}}")
    root = None
    for cand in dst.elements():
        acc = dst.zero()
        power = dst.one()
        for c in src.modulus:
            acc = dst.add(acc, dst.smul(c, power))
            power = dst.mul(power, cand)
        if dst.is_zero(acc):
            root = cand
            break
    assert root is not None

    def embed(a: Fq) -> Fq:
        acc = dst.zero()
        power = dst.one()
        for c in a:
            acc = dst.add(acc, dst.smul(c, power))
            power = dst.mul(power, root)
        return acc

    return embed
