import pytest

from ffgs import (
    AdditiveSummand,
    FiniteSummand,
    FormalSummand,
    TwoTermComplex,
    UnitSummand,
    cm_colimit_piece,
    cm_complex_h,
    cm_connected_dm,
    cm_mod_v_torsion,
    cm_new,
    cm_tc_n,
    cm_trunc,
    cm_v_torsion,
    dm_alpha,
    dm_direct_sum,
    dm_length,
    dm_mu,
    dm_ss_kernel,
    dm_word_kernel,
    dm_zmod,
    make_field,
    module_iso_test,
)
from ffgs.errors import BadParameter, PrecisionExceeded

from .conftest import unit1, wo


@pytest.fixture(scope="module", params=[(2, 1), (3, 1), (2, 2)], ids=["F2", "F3", "F4"])
def field(request):
    return make_field(*request.param)


def four_kinds(field):
    return {
        "unit": wo(field, [unit1(field)]),
        "additive": wo(field, [AdditiveSummand(1)]),
        "formal": wo(field, [FormalSummand(1, 1)]),
        "finite": wo(field, [FiniteSummand(dm_direct_sum(dm_zmod(field, 2), dm_alpha(field, 1)))]),
    }


def test_trunc_closed_forms(field):
    M = four_kinds(field)
    assert module_iso_test(cm_trunc(M["unit"], 3), dm_mu(field, 3)) is True
    assert module_iso_test(cm_trunc(M["additive"], 3), dm_alpha(field, 3)) is True
    # height-2 formal group: its p-torsion truncation is the supersingular kernel
    assert module_iso_test(cm_trunc(M["formal"], 2), dm_ss_kernel(field)) is True
    fin = cm_trunc(M["finite"], 1)
    assert module_iso_test(fin, dm_direct_sum(dm_zmod(field, 2), dm_alpha(field, 1))) is True


def test_trunc_level_one_unit_is_multiplicative(field):
    T = cm_trunc(wo(field, [unit1(field)]), 1)
    R = T.ring
    assert T.profile == (1,)
    assert all(R.val(e) >= 1 for row in T.V.entries for e in row)  # V = 0
    assert R.is_unit(T.F.entries[0][0])  # F bijective


@pytest.mark.parametrize("n", [1, 2, 3])
def test_tc_equals_kernel_of_deeper_truncation(field, n):
    for M in four_kinds(field).values():
        tc = cm_tc_n(M, n)
        deep = cm_trunc(M, n + 2)
        want = dm_word_kernel(deep, "V", n)[0] if deep.rank else deep
        assert module_iso_test(tc, want) is True


def test_v_torsion_split(field):
    mixed = wo(
        field,
        [
            unit1(field),
            AdditiveSummand(1),
            FiniteSummand(dm_direct_sum(dm_zmod(field, 1), dm_alpha(field, 2))),
        ],
    )
    tor = cm_v_torsion(mixed)
    assert module_iso_test(tor, dm_alpha(field, 2)) is True
    rest = cm_mod_v_torsion(mixed)
    kinds = [type(s).__name__ for s in rest.summands]
    assert kinds == ["UnitSummand", "AdditiveSummand", "FiniteSummand"]
    assert module_iso_test(rest.summands[2].module, dm_zmod(field, 1)) is True
    # torsion-free modules pass through unchanged
    clean = wo(field, [unit1(field)])
    assert cm_v_torsion(clean).rank == 0
    assert cm_mod_v_torsion(clean).summands == clean.summands


def test_connected_report_labels(field):
    M = wo(
        field,
        [
            unit1(field),
            AdditiveSummand(2),
            FormalSummand(2, 1),
            FiniteSummand(dm_alpha(field, 1)),
            FiniteSummand(dm_zmod(field, 1)),
        ],
    )
    rep = cm_connected_dm(M)
    assert rep.summands == (
        "multiplicative of corank 1",
        "additive of dimension 2",
        "formal group of dimension 1 and height 3",
        "finite with V-torsion (not formally smooth)",
        "finite etale (vanishes in colimit)",
    )
    assert rep.unipotent_dim == 3
    assert rep.mult_corank == 1
    assert module_iso_test(rep.finite_leftover, dm_alpha(field, 1)) is True


def test_colimit_unit_pieces(field):
    M = wo(field, [unit1(field)])
    for op in ("p", "F", "V"):
        piece = cm_colimit_piece(M, op, 1, "coker")
        assert piece.finite.rank == 0 and piece.vector_dim == 0
    assert cm_colimit_piece(M, "F", 1, "ker").finite.rank == 0
    kp = cm_colimit_piece(M, "p", 1, "ker")
    assert module_iso_test(kp.finite, dm_mu(field, 1)) is True and kp.vector_dim == 0
    kp2 = cm_colimit_piece(M, "p", 2, "ker")
    assert module_iso_test(kp2.finite, dm_mu(field, 2)) is True
    kv = cm_colimit_piece(M, "V", 1, "ker")
    assert module_iso_test(kv.finite, dm_mu(field, 1)) is True


def test_colimit_additive_pieces(field):
    M = wo(field, [AdditiveSummand(2)])
    assert cm_colimit_piece(M, "V", 1, "coker").finite.rank == 0
    kv = cm_colimit_piece(M, "V", 2, "ker")
    assert kv.vector_dim == 0
    assert module_iso_test(kv.finite, dm_direct_sum(dm_alpha(field, 2), dm_alpha(field, 2))) is True
    # F = 0 and p = 0: both sides of F^n and p^n grow one dimension per copy
    for op in ("F", "p"):
        for side in ("ker", "coker"):
            piece = cm_colimit_piece(M, op, 1, side)
            assert piece.finite.rank == 0 and piece.vector_dim == 2


def test_colimit_formal_pieces(field):
    M = wo(field, [FormalSummand(1, 1)])
    for op in ("p", "F", "V"):
        assert cm_colimit_piece(M, op, 1, "coker").finite.rank == 0
    kp = cm_colimit_piece(M, "p", 1, "ker")
    assert dm_length(kp.finite) == 2  # G[p] of a height-2 group
    assert module_iso_test(kp.finite, dm_ss_kernel(field)) is True
    assert dm_length(cm_colimit_piece(M, "F", 1, "ker").finite) == 1
    assert dm_length(cm_colimit_piece(M, "V", 1, "ker").finite) == 1
    assert dm_length(cm_colimit_piece(M, "F", 2, "ker").finite) == 2
    # height 3, dimension 1: module-side ker V^n tracks the dimension,
    # ker F^n tracks h, and G[p^n] has length n (h + 1)
    M3 = wo(field, [FormalSummand(2, 1)])
    assert dm_length(cm_colimit_piece(M3, "V", 1, "ker").finite) == 1
    assert dm_length(cm_colimit_piece(M3, "F", 1, "ker").finite) == 2
    assert dm_length(cm_colimit_piece(M3, "V", 2, "ker").finite) == 2
    assert dm_length(cm_colimit_piece(M3, "p", 1, "ker").finite) == 3


def test_colimit_finite_pieces(field):
    fin = dm_direct_sum(dm_zmod(field, 2), dm_alpha(field, 1))
    M = wo(field, [FiniteSummand(fin)])
    kp = cm_colimit_piece(M, "p", 1, "ker")
    want = dm_word_kernel(fin, "p", 1)[0]
    assert module_iso_test(kp.finite, want) is True
    ck = cm_colimit_piece(M, "V", 1, "coker")
    assert dm_length(ck.finite) == 1  # V is onto the etale part, kills alpha


def test_precision_guards(field):
    M = wo(field, [unit1(field)], v=3)
    with pytest.raises(PrecisionExceeded):
        cm_trunc(M, 4)
    with pytest.raises(PrecisionExceeded):
        cm_tc_n(M, 3)
    with pytest.raises(PrecisionExceeded):
        cm_colimit_piece(M, "p", 2, "ker")
    tall = wo(field, [FormalSummand(4, 1)], v=4)
    with pytest.raises(PrecisionExceeded):
        cm_colimit_piece(tall, "p", 1, "ker")
    with pytest.raises(BadParameter):
        cm_tc_n(M, 0)
    with pytest.raises(BadParameter):
        cm_colimit_piece(M, "p", 1, "image")
    with pytest.raises(BadParameter):
        cm_new(field, [], 0, 1)


def test_two_term_complex_validation(field):
    M = wo(field, [unit1(field)])
    with pytest.raises(BadParameter):
        TwoTermComplex(M, "q", 1)
    with pytest.raises(BadParameter):
        TwoTermComplex(M, "F", 0)


def test_complex_h_policies(field):
    cur = wo(field, [FiniteSummand(dm_alpha(field, 1))])
    prev = wo(field, [FiniteSummand(dm_alpha(field, 1))])
    X = TwoTermComplex(cur, "F", 1)
    res = cm_complex_h(X, prev, "split")
    assert module_iso_test(res.coker, dm_alpha(field, 1)) is True
    assert module_iso_test(res.ker, dm_alpha(field, 1)) is True
    assert res.extension_status == "split-assumed"
    assert dm_length(res.assembled) == 2
    strict = cm_complex_h(X, prev, "strict")
    assert strict.extension_status == "undetermined" and strict.assembled is None

    # one side zero: the extension is canonical under either policy
    ez = wo(field, [FiniteSummand(dm_zmod(field, 1))])
    Xz = TwoTermComplex(ez, "V", 1)
    rz = cm_complex_h(Xz, ez, "strict")
    assert rz.extension_status == "canonical"
    assert rz.ker.rank == 0
    assert module_iso_test(rz.assembled, dm_word_kernel(dm_zmod(field, 1), "V", 1)[0]) is True or rz.assembled.rank == 0
