"""Internal fast representation of W_m(F_q) as Z_q/p^m.

For perfect residue fields the truncated Witt ring W_m(F_{p^n}) is
isomorphic to (Z/p^m)[x]/(f~) where f~ is the monic integer lift of the
field modulus.  Elements here are tuples of n integers in [0, p^m) —
coordinates in the power basis — and every ring operation is plain modular
polynomial arithmetic, which is what makes the linear algebra layers fast
(the symbolic structure polynomials of :mod:`ffgs.witt` are infeasible
beyond small lengths).

The dictionary with Witt coordinates is

    (a_0, ..., a_{m-1})  <->  sum_i p^i [a_i^{p^{-i}}]

with [.] the Teichmueller lift; Frobenius on Witt vectors corresponds to
the canonical lift ``sigma`` of x -> x^p (computed by Newton-lifting a root
of f~), Verschiebung to z -> p * sigma^{-1}(z), restriction to reduction
mod a smaller p-power.  Round-trips are exact; the test suite cross-checks
this lane against the symbolic one wherever tables are affordable.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache

from .errors import BadParameter, BadTarget, FieldMismatch, LengthMismatch
from .field import FieldSpec, Fq
from .witt import WittVector

Zq = tuple[int, ...]

__all__ = ["Zq", "ZqRing", "zq_ring", "to_zq", "from_zq"]


@dataclass(frozen=True)
class ZqRing:
    """Arithmetic context for Z_q/p^m; construct via :func:`zq_ring`."""

    field: FieldSpec
    m: int
    pm: int = dc_field(init=False, compare=False, repr=False)
    _fmod: tuple[int, ...] = dc_field(init=False, compare=False, repr=False)
    _sigma_mats: tuple[tuple[tuple[int, ...], ...], ...] = dc_field(
        init=False, compare=False, repr=False
    )

    def __post_init__(self) -> None:
        if self.m < 1:
            raise BadParameter("precision must be >= 1")
        object.__setattr__(self, "pm", self.field.p**self.m)
        object.__setattr__(self, "_fmod", tuple(c % self.pm for c in self.field.modulus))
        object.__setattr__(self, "_sigma_mats", self._build_sigma())

    # -- basic ring ops ------------------------------------------------------

    def zero(self) -> Zq:
        return (0,) * self.field.n

    def one(self) -> Zq:
        return (1,) + (0,) * (self.field.n - 1)

    def scalar(self, c: int) -> Zq:
        return (c % self.pm,) + (0,) * (self.field.n - 1)

    def is_zero(self, z: Zq) -> bool:
        return not any(z)

    def add(self, a: Zq, b: Zq) -> Zq:
        pm = self.pm
        return tuple((x + y) % pm for x, y in zip(a, b))

    def sub(self, a: Zq, b: Zq) -> Zq:
        pm = self.pm
        return tuple((x - y) % pm for x, y in zip(a, b))

    def neg(self, a: Zq) -> Zq:
        pm = self.pm
        return tuple((-x) % pm for x in a)

    def smul(self, c: int, a: Zq) -> Zq:
        pm = self.pm
        c %= pm
        return tuple((c * x) % pm for x in a)

    def mul(self, a: Zq, b: Zq) -> Zq:
        n = self.field.n
        pm = self.pm
        if n == 1:
            return ((a[0] * b[0]) % pm,)
        prod = [0] * (2 * n - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        # reduce degrees >= n using monic f~
        fmod = self._fmod
        for d in range(2 * n - 2, n - 1, -1):
            c = prod[d] % pm
            if c:
                shift = d - n
                for i in range(n):
                    prod[shift + i] = (prod[shift + i] - c * fmod[i]) % pm
            prod[d] = 0
        return tuple(c % pm for c in prod[:n])

    def pow_(self, a: Zq, e: int) -> Zq:
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

    # -- valuation / units ---------------------------------------------------

    def val(self, z: Zq) -> int:
        """p-adic valuation, in 0..m (m for zero); R is unramified so it is
        the minimum coefficient valuation."""
        if not any(z):
            return self.m
        p = self.field.p
        v = 0
        cs = list(z)
        while all(c % p == 0 for c in cs):
            cs = [c // p for c in cs]
            v += 1
        return v

    def is_unit(self, z: Zq) -> bool:
        p = self.field.p
        return any(c % p for c in z)

    def div_p(self, z: Zq, e: int = 1) -> Zq:
        """Exact division by p^e; caller must guarantee val(z) >= e."""
        pe = self.field.p**e
        assert all(c % pe == 0 for c in z), "inexact division by p"
        return tuple(c // pe for c in z)

    def unit_part(self, z: Zq) -> tuple[int, Zq]:
        """Write z = p^v * u with u a unit (u arbitrary for z = 0); returns (v, u)."""
        v = self.val(z)
        if v >= self.m:
            return self.m, self.one()
        return v, self.div_p(z, v)

    def inv(self, z: Zq) -> Zq:
        """Newton inversion of a unit: u <- u(2 - z u), quadratic convergence from mod p."""
        if not self.is_unit(z):
            raise ZeroDivisionError("inverse of non-unit")
        p = self.field.p
        fld = self.field
        res = self.residue(z)
        u = self.teich(fld.inv(res))  # any lift of the residue inverse works
        two = self.scalar(2)
        prec = 1
        while prec < self.m:
            u = self.mul(u, self.sub(two, self.mul(z, u)))
            prec *= 2
        return u

    # -- residue field / Teichmueller ----------------------------------------

    def residue(self, z: Zq) -> Fq:
        p = self.field.p
        return tuple(c % p for c in z)

    def teich(self, b: Fq) -> Zq:
        """Teichmueller lift: the unique root of x^q = x reducing to b."""
        if not any(b):
            return self.zero()
        z: Zq = tuple(b)
        # x -> x^q contracts towards the multiplicative lift, one digit per step
        for _ in range(self.m - 1):
            z = self.pow_(z, self.field.q)
        return z

    # -- sigma (canonical Frobenius lift) --------------------------------------

    def _build_sigma(self):
        n = self.field.n
        if n == 1:
            ident = ((1,),)
            return (ident,)
        pm = self.pm
        p = self.field.p
        # Newton-lift the root: y = x^p mod (f~, p), then y <- y - f(y)/f'(y)
        y = self._poly_eval_basis(p)
        prec = 1
        while prec < self.m:
            fy = self._eval_fmod(y)
            dfy = self._eval_dfmod(y)
            y = self.sub(y, self.mul(fy, self.inv(dfy)))
            prec *= 2
        mats = [tuple(tuple(int(i == j) for j in range(n)) for i in range(n))]
        # column j of sigma-matrix = coordinates of y^j
        cols = [self.one()]
        for _ in range(1, n):
            cols.append(self.mul(cols[-1], y))
        sigma1 = tuple(tuple(cols[j][i] % pm for j in range(n)) for i in range(n))
        mats.append(sigma1)
        for _ in range(2, n):
            mats.append(_matmul_mod(mats[-1], sigma1, pm))
        return tuple(mats)

    def _poly_eval_basis(self, e: int) -> Zq:
        """x^e computed in the residue field, coefficients lifted (Newton seed)."""
        fld = self.field
        xe = fld.pow_(fld.gen(), e)
        return tuple(int(c) for c in xe)

    def _eval_fmod(self, y: Zq) -> Zq:
        acc = self.zero()
        power = self.one()
        for c in self._fmod:
            acc = self.add(acc, self.smul(c, power))
            power = self.mul(power, y)
        return acc

    def _eval_dfmod(self, y: Zq) -> Zq:
        acc = self.zero()
        power = self.one()
        for i, c in enumerate(self._fmod):
            if i >= 1:
                acc = self.add(acc, self.smul(i * c, power))
                power = self.mul(power, y)
        return acc

    def sigma(self, z: Zq, power: int = 1) -> Zq:
        """sigma^power(z); sigma^n = id, negative powers allowed."""
        n = self.field.n
        k = power % n
        if k == 0:
            return z
        mat = self._sigma_mats[k]
        pm = self.pm
        out = [0] * n
        for col, c in enumerate(z):
            if c:
                for row in range(n):
                    out[row] = (out[row] + c * mat[row][col]) % pm
        return tuple(out)

    def reduce_to(self, z: Zq, m_target: int) -> Zq:
        """Reduction Z_q/p^m -> Z_q/p^{m_target} (coefficients mod p^{m_target})."""
        if m_target > self.m:
            raise BadTarget("cannot reduce to higher precision")
        pt = self.field.p**m_target
        return tuple(c % pt for c in z)


def _matmul_mod(a, b, mod):
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) % mod for j in range(n))
        for i in range(n)
    )


@lru_cache(maxsize=None)
def zq_ring(field: FieldSpec, m: int) -> ZqRing:
    return ZqRing(field, m)


def to_zq(w: WittVector, ring: "ZqRing | None" = None) -> Zq:
    """Witt coordinates -> Z_q/p^m via sum_i p^i [a_i^{p^{-i}}]."""
    R = ring if ring is not None else zq_ring(w.field, w.length)
    if R.field != w.field:
        raise FieldMismatch("ring/vector field mismatch")
    if R.m != w.length:
        raise LengthMismatch(f"ring precision {R.m} != vector length {w.length}")
    fld = w.field
    acc = R.zero()
    for i, a in enumerate(w.components):
        if any(a):
            t = R.teich(fld.frob(a, -i))
            acc = R.add(acc, R.smul(fld.p**i, t))
    return acc


def from_zq(z: Zq, ring: ZqRing) -> WittVector:
    """Inverse dictionary: digit-by-digit Teichmueller expansion."""
    fld = ring.field
    comps = []
    cur = z
    for i in range(ring.m):
        d = ring.residue(cur)
        comps.append(fld.frob(d, i))
        cur = ring.div_p(ring.sub(cur, ring.teich(d)), 1)
    return WittVector(fld, tuple(comps))
