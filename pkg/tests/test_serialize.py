import json
import random
from importlib import resources
from pathlib import Path

import pytest

from ffgs import (
    AdditiveSummand,
    ChainRingMatrix,
    cm_connected_dm,
    covector_new,
    dm_alpha,
    dm_direct_sum,
    dm_equal,
    dm_mu,
    dm_new,
    dm_ss_kernel,
    dm_zmod,
    gs_from_module,
    h_mu_p,
    make_field,
    matmul,
    matrix_inv,
    parse,
    phi_fl_report,
    serialize,
    teichmuller,
)
from ffgs.chain import is_invertible, mat_sigma
from ffgs.errors import AnnihilatorViolation, SchemaError, ShapeError

from .conftest import BUILDERS, unit1, wo

rng = random.Random(808)

REPO = Path(__file__).resolve().parents[1]


def rand_module(field):
    atoms = [
        lambda: dm_mu(field, rng.randint(1, 2)),
        lambda: dm_zmod(field, rng.randint(1, 2)),
        lambda: dm_alpha(field, rng.randint(1, 2)),
        lambda: dm_ss_kernel(field),
    ]
    parts = [atoms[rng.randrange(4)]() for _ in range(rng.randint(1, 3))]
    M = dm_direct_sum(*parts)
    R = M.ring
    p = field.p
    # random change of basis keeps the module valid but scrambles the matrices
    for _ in range(20):
        ent = []
        for i in range(M.rank):
            row = []
            for j in range(M.rank):
                need = max(0, M.profile[i] - M.profile[j])
                row.append(R.smul(p**need, tuple(rng.randrange(R.pm) for _ in range(field.n))))
            ent.append(tuple(row))
        P = ChainRingMatrix(R, M.rank, M.rank, tuple(ent))
        if not is_invertible(P):
            continue
        Pi = matrix_inv(P)
        try:
            return dm_new(
                field,
                M.profile,
                matmul(Pi, matmul(M.F, mat_sigma(P, 1))),
                matmul(Pi, matmul(M.V, mat_sigma(P, -1))),
            )
        except (AnnihilatorViolation, ShapeError):
            continue
    return M


def test_round_trip_every_kind(f2, f4, packets):
    samples = [
        f4,
        teichmuller(f4, (1, 1), 3),
        covector_new(f2, ((1,), (0,), (1,))),
        dm_ss_kernel(f2),
        gs_from_module(dm_mu(f2, 2), (3,), "toy"),
        wo(f4, [unit1(f4), AdditiveSummand(2)]),
        cm_connected_dm(wo(f2, [unit1(f2)])),
        h_mu_p(packets["elliptic_ordinary"], 1),
        phi_fl_report(packets["elliptic_supersingular"], 1),
        packets["k3_supersingular"],
    ]
    for x in samples:
        text = serialize(x)
        back = parse(text)
        assert serialize(back) == text
    # lists round-trip elementwise
    batch = [h_mu_p(packets["elliptic_ordinary"], i) for i in (0, 1, 2)]
    assert serialize(parse(serialize(batch))) == serialize(batch)


def test_random_module_round_trips():
    fields = [make_field(2, 1), make_field(3, 1), make_field(2, 2)]
    for i in range(100):
        M = rand_module(fields[i % 3])
        text = serialize(M)
        back = parse(text)
        assert dm_equal(back, M)
        assert serialize(back) == text


def test_canonical_text_shape(packets):
    text = serialize(packets["elliptic_ordinary"])
    assert text.endswith("\n") and not text.endswith("\n\n")
    obj = json.loads(text)
    assert list(obj) == sorted(obj)
    # canonical form is stable under re-parsing
    assert serialize(parse(text)) == text


def test_bundled_packets_match_builders():
    pkg = resources.files("ffgs")
    for name, build in BUILDERS.items():
        shipped = pkg.joinpath(f"packets/{name}.json").read_text()
        assert shipped == serialize(build())


def test_schema_copies_identical():
    root = (REPO / "schemas" / "ffgs_packet_v1.json").read_text()
    shipped = resources.files("ffgs").joinpath("schemas/ffgs_packet_v1.json").read_text()
    assert root == shipped
    json.loads(root)  # well-formed


def test_parse_error_reports_position():
    with pytest.raises(SchemaError, match=r"line 1"):
        parse('{"kind": "field", ')


def test_missing_key_error_names_path(f2):
    obj = json.loads(serialize(dm_ss_kernel(f2)))
    del obj["profile"]
    with pytest.raises(SchemaError, match=r"\$: missing key 'profile'"):
        parse(json.dumps(obj))
    obj2 = json.loads(serialize(dm_ss_kernel(f2)))
    del obj2["field"]["p"]
    with pytest.raises(SchemaError, match=r"\$\.field: missing key 'p'"):
        parse(json.dumps(obj2))


def test_unknown_kind_rejected():
    with pytest.raises(SchemaError, match="unknown kind"):
        parse('{"kind": "widget"}')
    with pytest.raises(SchemaError, match="kind"):
        parse('{"profile": []}')


def test_packet_b_requires_o(packets):
    obj = json.loads(serialize(packets["elliptic_supersingular"]))
    del obj["degrees"]["0"]["o"]
    with pytest.raises(SchemaError, match="without 'o'"):
        parse(json.dumps(obj))


def test_packet_version_pinned(packets):
    obj = json.loads(serialize(packets["elliptic_ordinary"]))
    obj["schema"] = "ffgs_packet_v0"
    with pytest.raises(SchemaError, match="ffgs_packet_v1"):
        parse(json.dumps(obj))


def test_packet_degree_keys_must_be_integers(packets):
    obj = json.loads(serialize(packets["elliptic_ordinary"]))
    obj["degrees"]["one"] = obj["degrees"].pop("1")
    with pytest.raises(SchemaError, match="degree keys"):
        parse(json.dumps(obj))
