import random

import pytest

from ffgs import (
    WittVector,
    make_field,
    teichmuller,
    witt_add,
    witt_mul,
    witt_mult_p,
    witt_neg,
    witt_one,
    witt_smul,
    witt_structure,
    witt_sub,
    witt_zero,
)
from ffgs.errors import BadParameter, BadTarget

from .oracles import oracle_witt

rng = random.Random(202)

CASES = [(2, 1, 3), (2, 2, 3), (3, 1, 2), (3, 2, 2), (5, 1, 2)]


def rand_witt(f, m):
    return WittVector(f, tuple(tuple(rng.randrange(f.p) for _ in range(f.n)) for _ in range(m)))


@pytest.mark.parametrize("p,n,m", CASES)
def test_ops_match_ghost_oracle(p, n, m):
    f = make_field(p, n)
    for _ in range(40):
        a, b = rand_witt(f, m), rand_witt(f, m)
        got_add = witt_add(a, b).components
        got_mul = witt_mul(a, b).components
        got_sub = witt_sub(a, b).components
        assert got_add == oracle_witt(p, f.modulus, a.components, b.components, "add")
        assert got_mul == oracle_witt(p, f.modulus, a.components, b.components, "mul")
        assert got_sub == oracle_witt(p, f.modulus, a.components, b.components, "sub")
        assert witt_neg(a).components == oracle_witt(p, f.modulus, a.components, None, "neg")
        assert witt_mult_p(a).components == oracle_witt(p, f.modulus, a.components, None, "mult_p")
        c = rng.randrange(-6, 7)
        assert witt_smul(c, a).components == oracle_witt(p, f.modulus, a.components, None, f"smul:{c}")


@pytest.mark.parametrize("p,n,m", CASES)
def test_ring_axioms(p, n, m):
    f = make_field(p, n)
    zero, one = witt_zero(f, m), witt_one(f, m)
    for _ in range(25):
        a, b, c = rand_witt(f, m), rand_witt(f, m), rand_witt(f, m)
        assert witt_add(a, b).components == witt_add(b, a).components
        assert witt_mul(a, b).components == witt_mul(b, a).components
        assert witt_add(witt_add(a, b), c).components == witt_add(a, witt_add(b, c)).components
        assert witt_mul(witt_mul(a, b), c).components == witt_mul(a, witt_mul(b, c)).components
        lhs = witt_mul(a, witt_add(b, c))
        rhs = witt_add(witt_mul(a, b), witt_mul(a, c))
        assert lhs.components == rhs.components
        assert witt_add(a, witt_neg(a)).is_zero()
        assert witt_add(a, zero).components == a.components
        assert witt_mul(a, one).components == a.components


@pytest.mark.parametrize("p,n,m", CASES)
def test_teichmuller_multiplicative(p, n, m):
    f = make_field(p, n)
    for _ in range(20):
        a = tuple(rng.randrange(p) for _ in range(n))
        b = tuple(rng.randrange(p) for _ in range(n))
        ta, tb = teichmuller(f, a, m), teichmuller(f, b, m)
        assert witt_mul(ta, tb).components == teichmuller(f, f.mul(a, b), m).components
        # Teichmuller lifts have zero higher components
        assert all(not any(c) for c in ta.components[1:])
        assert ta.components[0] == a


@pytest.mark.parametrize("p,n,m", CASES)
def test_fv_vf_p_identity(p, n, m):
    f = make_field(p, n)
    for _ in range(25):
        u = rand_witt(f, m)
        fv = witt_structure(witt_structure(u, "V"), "F")
        vf = witt_structure(witt_structure(u, "F"), "V")
        assert fv.components == vf.components
        # FV = VF = multiplication by p on W_{m+1}
        ext = WittVector(f, u.components + (f.zero(),))
        assert fv.components == witt_smul(p, ext).components
        # and inside W_m itself, p*u = witt_mult_p(u)
        assert witt_smul(p, u).components == witt_mult_p(u).components


def test_structure_map_shapes():
    f = make_field(2, 1)
    u = rand_witt(f, 3)
    assert witt_structure(u, "F").length == 3
    assert witt_structure(u, "V").length == 4
    assert witt_structure(u, "V").components[0] == f.zero()
    assert witt_structure(u, "R", 2).components == u.components[:2]


def test_structure_map_errors():
    f = make_field(2, 1)
    u = rand_witt(f, 3)
    with pytest.raises(BadTarget):
        witt_structure(u, "F", 2)
    with pytest.raises(BadTarget):
        witt_structure(u, "V", 3)
    with pytest.raises(BadTarget):
        witt_structure(u, "R", 4)
    with pytest.raises(BadTarget):
        witt_structure(u, "R", 0)
    with pytest.raises(BadParameter):
        witt_structure(u, "Q")
