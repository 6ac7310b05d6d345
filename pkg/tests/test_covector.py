import random

import pytest

from ffgs import (
    covector_F,
    covector_V,
    covector_add,
    covector_from_witt,
    covector_neg,
    covector_new,
    covector_sub,
    covector_to_witt,
    covector_zero,
    make_field,
    witt_add,
    witt_smul,
    witt_structure,
)

rng = random.Random(404)

CASES = [(2, 1, 3, 6), (2, 2, 3, 6), (3, 1, 2, 4)]


def rand_cov(field, max_support):
    s = rng.randint(0, max_support)
    comps = tuple(tuple(rng.randrange(field.p) for _ in range(field.n)) for _ in range(s))
    return covector_new(field, comps)


@pytest.mark.parametrize("p,n,max_s,env", CASES)
def test_addition_independent_of_embedding_length(p, n, max_s, env):
    field = make_field(p, n)
    for _ in range(40):
        u, v = rand_cov(field, max_s), rand_cov(field, max_s)
        s = covector_add(u, v)
        for length in range(max(1, u.support + v.support), env + 1):
            alt = covector_from_witt(
                witt_add(covector_to_witt(u, length), covector_to_witt(v, length))
            )
            assert alt == s


@pytest.mark.parametrize("p,n,max_s,env", CASES)
def test_group_laws(p, n, max_s, env):
    field = make_field(p, n)
    for _ in range(40):
        u, v = rand_cov(field, max_s), rand_cov(field, max_s)
        w = rand_cov(field, 1)
        s = covector_add(u, v)
        assert covector_add(v, u) == s
        assert covector_add(u, covector_zero(field)) == u
        assert covector_add(u, covector_neg(u)).is_zero()
        assert covector_sub(s, v) == u
        if u.support + v.support + w.support <= env - 1:
            assert covector_add(s, w) == covector_add(u, covector_add(v, w))


@pytest.mark.parametrize("p,n,max_s,env", CASES)
def test_frobenius_verschiebung(p, n, max_s, env):
    field = make_field(p, n)
    for _ in range(40):
        u, v = rand_cov(field, max_s), rand_cov(field, max_s)
        s = covector_add(u, v)
        assert covector_F(s) == covector_add(covector_F(u), covector_F(v))
        assert covector_V(s) == covector_add(covector_V(u), covector_V(v))
        assert covector_F(covector_V(u)) == covector_V(covector_F(u))
        if u.support:
            pu = covector_from_witt(witt_smul(p, covector_to_witt(u, min(env, u.support + 1))))
            assert covector_F(covector_V(u)) == pu


@pytest.mark.parametrize("p,n,max_s,env", CASES)
def test_verschiebung_matches_witt_restriction(p, n, max_s, env):
    field = make_field(p, n)
    for _ in range(40):
        u = rand_cov(field, max_s)
        if u.support < 2:
            continue
        x = covector_to_witt(u, u.support)
        rx = witt_structure(x, "R", u.support - 1)
        assert covector_V(u) == covector_from_witt(rx)


@pytest.mark.parametrize("p,n,max_s,env", CASES)
def test_witt_round_trip(p, n, max_s, env):
    field = make_field(p, n)
    for _ in range(40):
        u = rand_cov(field, max_s)
        if not u.support:
            continue
        back = covector_to_witt(covector_from_witt(covector_to_witt(u, env)), env)
        assert back == covector_to_witt(u, env)
