import random

import pytest

from ffgs import (
    HeightOneData,
    atom_display_name,
    dm_alpha,
    dm_mu,
    dm_zmod,
    gs_atom,
    gs_classify,
    gs_dual,
    gs_from_module,
    gs_height,
    gs_height_one,
    gs_order,
    make_field,
    module_iso_test,
)
from ffgs.dieudonne import dm_direct_sum
from ffgs.errors import BadParameter
from ffgs.group_scheme import gs_frobenius_kernel, gs_verschiebung_kernel

rng = random.Random(707)


@pytest.fixture(scope="module")
def f2():
    return make_field(2, 1)


@pytest.fixture(scope="module")
def f3():
    return make_field(3, 1)


@pytest.fixture(scope="module")
def f4():
    return make_field(2, 2)


def test_atom_orders(f2, f3, f4):
    for field in (f2, f3, f4):
        p = field.p
        for kind in ("mu", "zmod", "alpha"):
            for a in (1, 2, 3):
                assert gs_order(gs_atom(field, kind, a)) == p**a
        assert gs_order(gs_atom(field, "ss_kernel")) == p**2
    assert gs_order(gs_atom(f2, "constant", 5)) == 5
    assert gs_order(gs_atom(f3, "constant", 8)) == 8
    with pytest.raises(BadParameter):
        gs_atom(f2, "constant", 6)  # not coprime to p


def test_atom_display_names():
    assert atom_display_name("mu") == "mu_p"
    assert atom_display_name("mu", 3) == "mu_p^3"
    assert atom_display_name("zmod") == "Z/p"
    assert atom_display_name("zmod", 2) == "Z/p^2"
    assert atom_display_name("alpha", 2) == "alpha_p^2"
    assert atom_display_name("ss_kernel") == "M11"
    with pytest.raises(BadParameter):
        atom_display_name("nope")


def test_heights(f2, f3):
    for field in (f2, f3):
        assert gs_height(gs_atom(field, "mu", 1)) == 1
        assert gs_height(gs_atom(field, "mu", 2)) == 2
        assert gs_height(gs_atom(field, "alpha", 1)) == 1
        assert gs_height(gs_atom(field, "alpha", 3)) == 3
        assert gs_height(gs_atom(field, "ss_kernel")) == 2
        assert gs_height(gs_atom(field, "zmod", 1)) is None  # V bijective
        assert gs_height(gs_atom(field, "constant", 7)) == 0


def test_duality(f2):
    mu2 = gs_atom(f2, "mu", 2)
    assert module_iso_test(gs_dual(mu2).p_part, dm_zmod(f2, 2)) is True
    G = gs_from_module(dm_alpha(f2, 1), (3,))
    D = gs_dual(G)
    assert D.etale_coprime == (3,)
    assert gs_order(D) == gs_order(G)


def test_frobenius_verschiebung_kernels(f2):
    mu2 = gs_atom(f2, "mu", 2)
    assert module_iso_test(gs_frobenius_kernel(mu2).p_part, dm_mu(f2, 1)) is True
    assert gs_order(gs_verschiebung_kernel(mu2)) == 1
    zm2 = gs_atom(f2, "zmod", 2)
    assert gs_order(gs_frobenius_kernel(zm2)) == 1
    assert module_iso_test(gs_verschiebung_kernel(zm2).p_part, dm_zmod(f2, 1)) is True
    al = gs_atom(f2, "alpha", 1)
    assert module_iso_test(gs_frobenius_kernel(al).p_part, dm_alpha(f2, 1)) is True
    assert module_iso_test(gs_verschiebung_kernel(al).p_part, dm_alpha(f2, 1)) is True


def test_height_one_dictionary_identity_and_zero(f2, f3, f4):
    for field in (f2, f3, f4):
        sigma = HeightOneData(field, 1, ((field.one(),),))
        assert module_iso_test(gs_height_one(sigma).p_part, dm_mu(field, 1)) is True
        zero = HeightOneData(field, 1, ((field.zero(),),))
        assert module_iso_test(gs_height_one(zero).p_part, dm_alpha(field, 1)) is True


def rand_rho(field, d):
    return tuple(
        tuple(tuple(rng.randrange(field.p) for _ in range(field.n)) for _ in range(d))
        for _ in range(d)
    )


def test_height_one_round_trip(f2, f3, f4):
    for field in (f2, f3, f4):
        for _ in range(8):
            d = rng.randint(1, 3)
            data = HeightOneData(field, d, rand_rho(field, d))
            G = gs_height_one(data)
            c = gs_classify(G)
            assert c.height is not None and c.height <= 1
            assert c.height_one is not None
            assert c.height_one.dimension == d
            assert c.height_one.rho == data.rho


def test_classify_atoms(f2, f3):
    for field in (f2, f3):
        c = gs_classify(gs_atom(field, "ss_kernel"))
        assert c.decomposition == ("M11",)
        assert c.height == 2
        assert c.self_dual == "yes"
        c2 = gs_classify(gs_atom(field, "mu", 2))
        assert c2.decomposition == ("mu_p^2",)
        assert c2.self_dual == "no"
        c3 = gs_classify(gs_atom(field, "alpha", 1))
        assert c3.decomposition == ("alpha_p",)
        assert c3.self_dual == "yes"


def test_classify_composite(f2):
    M = dm_direct_sum(dm_mu(f2, 2), dm_zmod(f2, 1), dm_alpha(f2, 1))
    G = gs_from_module(M, (3,))
    c = gs_classify(G)
    assert c.order == 2**4 * 3
    assert c.decomposition == ("Z/p", "alpha_p", "mu_p^2", "Z/3")
    assert c.decomposition_status == "resolved"
    assert c.cell_lengths["connected_multiplicative"] == 2
    assert c.cell_lengths["etale_unipotent"] == 1
    assert c.cell_lengths["connected_unipotent"] == 1
    assert c.cell_lengths["etale_multiplicative"] == 0


def test_classify_distinguishes_alpha_squared_from_m11(f2):
    sq = gs_from_module(dm_direct_sum(dm_alpha(f2, 1), dm_alpha(f2, 1)))
    c = gs_classify(sq)
    assert c.decomposition == ("alpha_p", "alpha_p")
    c2 = gs_classify(gs_atom(f2, "alpha", 2))
    assert c2.decomposition == ("alpha_p^2",)
