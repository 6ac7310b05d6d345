"""Shared fixtures: the four reference packets, parameterized by precision.

The builders are the source of truth for the bundled ``packets/*.json``
files; ``test_serialize`` pins that correspondence byte-for-byte.
"""

from __future__ import annotations

import pytest

from ffgs import (
    AdditiveSummand,
    DegreeData,
    FormalSummand,
    UnitSummand,
    cm_new,
    make_field,
    matrix_from_rows,
    packet_new,
    zq_ring,
)

W = 6
N = 6

ONE1 = (((1,),),)
ZERO1 = (((0,),),)


def unit1(field, w=W):
    Rw = zq_ring(field, w)
    return UnitSummand(1, matrix_from_rows(Rw, [[Rw.one()]]))


def wo(field, summands, w=W, v=N):
    return cm_new(field, summands, v, w)


def shift(t):
    """Superdiagonal t x t matrix over F_p: kills e_0, shifts e_{i+1} -> e_i."""
    return tuple(tuple((1,) if j == i + 1 else (0,) for j in range(t)) for i in range(t))


def e0col(t):
    return tuple(((1,) if i == 0 else (0,),) for i in range(t))


def build_elliptic_ordinary(w=W, v=N):
    k = make_field(2, 1)
    degs = {
        0: DegreeData(wo(k, [unit1(k, w)], w, v), 1, ONE1, 0, (), True, (), 0),
        1: DegreeData(wo(k, [unit1(k, w)], w, v), 1, ONE1, 0, (), True, (), 1),
        2: DegreeData(wo(k, [], w, v), 0, (), 0, (), True, (), 1),
        3: DegreeData(wo(k, [], w, v), 0, (), 0, (), True, (), 0),
    }
    return packet_new(k, degs, w, v, "split", "elliptic_ordinary")


def build_elliptic_supersingular(w=W, v=N):
    k = make_field(2, 1)
    degs = {
        0: DegreeData(wo(k, [unit1(k, w)], w, v), 1, ONE1, 1, ZERO1, True, ZERO1, 0),
        1: DegreeData(wo(k, [FormalSummand(1, 1)], w, v), 1, ZERO1, 0, (), True, (), 0),
        2: DegreeData(wo(k, [], w, v), 0, (), 0, (), True, (), 0),
        3: DegreeData(wo(k, [], w, v), 0, (), 0, (), True, (), 0),
    }
    return packet_new(k, degs, w, v, "split", "elliptic_supersingular")


def build_k3_ordinary(w=W, v=N):
    k = make_field(3, 1)
    degs = {
        0: DegreeData(wo(k, [unit1(k, w)], w, v), 1, ONE1, 0, (), True, (), 0),
        1: DegreeData(wo(k, [], w, v), 0, (), 0, (), True, (), 0),
        2: DegreeData(wo(k, [unit1(k, w)], w, v), 1, ONE1, 0, (), True, (), 20),
        3: DegreeData(wo(k, [], w, v), 0, (), 0, (), True, (), 0),
    }
    return packet_new(k, degs, w, v, "split", "k3_ordinary")


def build_k3_supersingular(w=W, v=N):
    k = make_field(3, 1)
    degs = {
        0: DegreeData(wo(k, [unit1(k, w)], w, v), 1, ONE1, 0, (), True, (), 0),
        1: DegreeData(wo(k, [], w, v), 0, (), v, shift(v), False, tuple(() for _ in range(v)), 0),
        2: DegreeData(wo(k, [AdditiveSummand(1)], w, v), 1, ZERO1, v, shift(v), False, e0col(v), 22),
        3: DegreeData(wo(k, [], w, v), 0, (), 0, (), True, (), 0),
    }
    return packet_new(k, degs, w, v, "split", "k3_supersingular")


BUILDERS = {
    "elliptic_ordinary": build_elliptic_ordinary,
    "elliptic_supersingular": build_elliptic_supersingular,
    "k3_ordinary": build_k3_ordinary,
    "k3_supersingular": build_k3_supersingular,
}


@pytest.fixture(scope="session")
def packets():
    return {name: build() for name, build in BUILDERS.items()}


@pytest.fixture(scope="session")
def f2():
    return make_field(2, 1)


@pytest.fixture(scope="session")
def f3():
    return make_field(3, 1)


@pytest.fixture(scope="session")
def f4():
    return make_field(2, 2)
