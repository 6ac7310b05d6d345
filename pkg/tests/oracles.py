"""Independent oracles the suite checks the library against.

Everything here is built from different primitives than the package:
integer polynomial arithmetic and the ghost map instead of universal
structure polynomials, brute-force point enumeration instead of semilinear
rank theory, and dense F_p Gaussian elimination instead of chain-ring
normal forms.  Nothing imports from ``ffgs``.
"""

from __future__ import annotations

import itertools

# -- Z[x]/(f~): a p-torsion-free lift of F_{p^n} -------------------------------------
#
# Elements are integer coefficient lists of length n (constant first); f~ is
# the monic integer lift of the field modulus.  The ghost map on W_m of this
# ring is injective, so Witt arithmetic can be done on ghost components and
# inverted by exact division.


class LiftRing:
    def __init__(self, p: int, modulus: "tuple[int, ...]"):
        self.p = p
        self.n = len(modulus) - 1
        self.mod = [c % p for c in modulus]
        assert self.mod[-1] == 1, "modulus must be monic"

    def zero(self) -> list[int]:
        return [0] * self.n

    def add(self, a, b):
        return [x + y for x, y in zip(a, b)]

    def sub(self, a, b):
        return [x - y for x, y in zip(a, b)]

    def smul(self, c: int, a):
        return [c * x for x in a]

    def mul(self, a, b):
        n = self.n
        prod = [0] * (2 * n - 1) if n else []
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        # reduce by the monic modulus
        for d in range(len(prod) - 1, n - 1, -1):
            c = prod[d]
            if c:
                prod[d] = 0
                for k in range(n):
                    prod[d - self.n + k] -= c * self.mod[k]
        return prod[:n] + [0] * (n - len(prod))

    def pow_(self, a, e: int):
        out = [1] + [0] * (self.n - 1)
        base = list(a)
        while e:
            if e & 1:
                out = self.mul(out, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return out

    def divexact(self, a, c: int):
        out = []
        for x in a:
            q, r = divmod(x, c)
            if r:
                raise ArithmeticError(f"ghost recursion: {x} not divisible by {c}")
            out.append(q)
        return out

    def residue(self, a) -> tuple[int, ...]:
        return tuple(x % self.p for x in a)


def ghost(ring: LiftRing, comps: list) -> list:
    """w_i = sum_j p^j a_j^(p^(i-j)), 0 <= i < len(comps)."""
    p = ring.p
    out = []
    for i in range(len(comps)):
        acc = ring.zero()
        for j in range(i + 1):
            acc = ring.add(acc, ring.smul(p**j, ring.pow_(comps[j], p ** (i - j))))
        out.append(acc)
    return out


def unghost(ring: LiftRing, ghosts: list) -> list:
    p = ring.p
    comps: list = []
    for i, g in enumerate(ghosts):
        acc = g
        for j in range(i):
            acc = ring.sub(acc, ring.smul(p**j, ring.pow_(comps[j], p ** (i - j))))
        comps.append(ring.divexact(acc, p**i))
    return comps


def oracle_witt(p: int, modulus, a_comps, b_comps, op: str):
    """Witt-vector ``op`` over F_{p^n} computed via integer ghosts.

    Components are tuples of n integers in 0..p-1; returns the same shape.
    ``b_comps`` is ignored for the unary ops.
    """
    ring = LiftRing(p, modulus)
    A = [list(c) for c in a_comps]
    ga = ghost(ring, A)
    if op in ("add", "mul", "sub"):
        gb = ghost(ring, [list(c) for c in b_comps])
        fn = {"add": ring.add, "mul": ring.mul, "sub": ring.sub}[op]
        gc = [fn(x, y) for x, y in zip(ga, gb)]
    elif op == "neg":
        gc = [ring.smul(-1, x) for x in ga]
    elif op == "mult_p":
        gc = [ring.smul(p, x) for x in ga]
    elif op.startswith("smul:"):
        gc = [ring.smul(int(op[5:]), x) for x in ga]
    else:
        raise ValueError(op)
    return tuple(ring.residue(c) for c in unghost(ring, gc))


# -- tiny finite fields for brute-force point counting -------------------------------
#
# F_{p^k} as F_p[y]/(g) with elements encoded as base-p integers; built by a
# root/gcd-free irreducibility sieve so the construction shares nothing with
# the package's field tower.


def _fp_polmul(a, b, p, g):
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    k = len(g) - 1
    for d in range(len(prod) - 1, k - 1, -1):
        c = prod[d]
        if c:
            prod[d] = 0
            for t in range(k):
                prod[d - k + t] = (prod[d - k + t] - c * g[t]) % p
    prod = prod[:k]
    return prod + [0] * (k - len(prod))


def _fp_polpow(a, e, p, g):
    out = [1] + [0] * (len(g) - 2)
    base = list(a)
    while e:
        if e & 1:
            out = _fp_polmul(out, base, p, g)
        e >>= 1
        if e:
            base = _fp_polmul(base, base, p, g)
    return out


def _is_irreducible(g, p):
    """g monic of degree k is irreducible iff y^(p^k) = y mod g and
    gcd-style: y^(p^(k/r)) != y for every prime r | k."""
    k = len(g) - 1
    y = [0, 1] + [0] * (k - 2) if k >= 2 else [0]
    if k == 1:
        return True
    t = _fp_polpow(y, p**k, p, g)
    if t != y:
        return False
    for r in set(_prime_factors(k)):
        t = _fp_polpow(y, p ** (k // r), p, g)
        if t == y:
            return False
    return True


def _prime_factors(k: int):
    out = []
    d = 2
    while d * d <= k:
        while k % d == 0:
            out.append(d)
            k //= d
        d += 1
    if k > 1:
        out.append(k)
    return out


class SmallField:
    """F_{p^k} with int-encoded elements, for exhaustive enumeration."""

    def __init__(self, p: int, k: int):
        self.p = p
        self.k = k
        self.size = p**k
        g = None
        for tail in itertools.product(range(p), repeat=k):
            cand = list(tail) + [1]
            if _is_irreducible(cand, p):
                g = cand
                break
        assert g is not None
        self.g = g

    def decode(self, e: int) -> list[int]:
        out = []
        for _ in range(self.k):
            e, r = divmod(e, self.p)
            out.append(r)
        return out

    def encode(self, coeffs) -> int:
        e = 0
        for c in reversed(list(coeffs)):
            e = e * self.p + (c % self.p)
        return e

    def add(self, a: int, b: int) -> int:
        return self.encode([x + y for x, y in zip(self.decode(a), self.decode(b))])

    def sub(self, a: int, b: int) -> int:
        return self.encode([x - y for x, y in zip(self.decode(a), self.decode(b))])

    def mul(self, a: int, b: int) -> int:
        return self.encode(_fp_polmul(self.decode(a), self.decode(b), self.p, self.g))

    def pow_(self, a: int, e: int) -> int:
        return self.encode(_fp_polpow(self.decode(a), e, self.p, self.g))

    def embed_root(self, modulus) -> int:
        """Lex-smallest root in this field of a monic F_p polynomial."""
        for cand in range(self.size):
            acc, power = 0, self.encode([1])
            for c in modulus:
                acc = self.add(acc, self.mul(self.encode([c]), power))
                power = self.mul(power, cand)
            if acc == 0:
                return cand
        raise ArithmeticError("modulus has no root here")

    def embed_element(self, coeffs, root: int) -> int:
        acc, power = 0, self.encode([1])
        for c in coeffs:
            acc = self.add(acc, self.mul(self.encode([c]), power))
            power = self.mul(power, root)
        return acc


def count_additive_kernel(p, modulus, a_grid, t: int, kind: str) -> int:
    """#{x in F_{q^t}^d : A x^(p) = 0} (kind 'alpha') or x = A x^(p) ('zp').

    ``a_grid`` is a d x d grid of F_q elements given as coefficient tuples
    over the field F_p[x]/(modulus); q = p^n.
    """
    n = len(modulus) - 1
    d = len(a_grid)
    K = SmallField(p, n * t)
    root = K.embed_root([c % p for c in modulus])
    A = [[K.embed_element(e, root) for e in row] for row in a_grid]
    count = 0
    for xs in itertools.product(range(K.size), repeat=d):
        fs = [K.pow_(x, p) for x in xs]
        ok = True
        for i in range(d):
            acc = 0
            for j in range(d):
                acc = K.add(acc, K.mul(A[i][j], fs[j]))
            want = 0 if kind == "alpha" else xs[i]
            if acc != want:
                ok = False
                break
        if ok:
            count += 1
    return count


# -- dense F_p linear algebra ---------------------------------------------------------


def fp_rank(p: int, rows) -> int:
    mat = [list(r) for r in rows]
    rank = 0
    cols = len(mat[0]) if mat else 0
    for c in range(cols):
        piv = next((r for r in range(rank, len(mat)) if mat[r][c] % p), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = pow(mat[rank][c], -1, p)
        mat[rank] = [(x * inv) % p for x in mat[rank]]
        for r in range(len(mat)):
            if r != rank and mat[r][c] % p:
                f = mat[r][c]
                mat[r] = [(x - f * y) % p for x, y in zip(mat[r], mat[rank])]
        rank += 1
        if rank == len(mat):
            break
    return rank
