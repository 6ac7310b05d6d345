"""JSON serialization for every domain type.

Objects serialize to tagged dicts (``"kind": "dieudonne_module"`` etc.);
geometric packets use the ``ffgs_packet_v1`` file layout with a ``"schema"``
version key instead.  ``serialize`` emits canonical text — sorted keys,
two-space indent, LF — so identical objects produce byte-identical files,
and ``parse . serialize`` is the identity on every type below.

Parsing validates structure with JSON-path diagnostics and hands the result
to the ordinary constructors (``dm_new``, ``cm_new``, ``packet_new``), so a
file that parses is also mathematically valid.
"""

from __future__ import annotations

import json

from .cartier import (
    AdditiveSummand,
    CartierModule,
    ConnectedDmReport,
    FiniteSummand,
    FormalSummand,
    UnitSummand,
    cm_new,
)
from .chain import ChainRingMatrix
from .cohomology import (
    CohomReport,
    DegreeData,
    FormalGroupReport,
    GeometricPacket,
    packet_new,
)
from .covector import Covector, covector_new
from .dieudonne import DieudonneModule, dm_new
from .errors import SchemaError
from .field import FieldSpec, make_field
from .group_scheme import GroupScheme, gs_from_module
from .witt import WittVector
from .zq import zq_ring

__all__ = [
    "serialize",
    "parse",
    "to_jsonable",
    "from_jsonable",
    "packet_to_jsonable",
    "packet_from_jsonable",
]


def serialize(x) -> str:
    return json.dumps(to_jsonable(x), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def parse(text: str):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from None
    return from_jsonable(obj)


# -- generic helpers -----------------------------------------------------------


def _need(obj: dict, key: str, path: str):
    if key not in obj:
        raise SchemaError(f"{path}: missing key {key!r}")
    return obj[key]


def _int(x, path: str) -> int:
    if not isinstance(x, int) or isinstance(x, bool):
        raise SchemaError(f"{path}: expected an integer, got {type(x).__name__}")
    return x


def _str(x, path: str) -> str:
    if not isinstance(x, str):
        raise SchemaError(f"{path}: expected a string, got {type(x).__name__}")
    return x


def _bool(x, path: str) -> bool:
    if not isinstance(x, bool):
        raise SchemaError(f"{path}: expected a boolean, got {type(x).__name__}")
    return x


def _list(x, path: str) -> list:
    if not isinstance(x, list):
        raise SchemaError(f"{path}: expected an array, got {type(x).__name__}")
    return x


def _dict(x, path: str) -> dict:
    if not isinstance(x, dict):
        raise SchemaError(f"{path}: expected an object, got {type(x).__name__}")
    return x


def _element(x, path: str) -> tuple[int, ...]:
    return tuple(_int(c, f"{path}[{k}]") for k, c in enumerate(_list(x, path)))


def _grid(x, path: str) -> tuple:
    rows = _list(x, path)
    return tuple(
        tuple(_element(e, f"{path}[{i}][{j}]") for j, e in enumerate(_list(row, f"{path}[{i}]")))
        for i, row in enumerate(rows)
    )


def _mat_json(mat: ChainRingMatrix) -> list:
    return [[list(e) for e in row] for row in mat.entries]


def _mat_from(field: FieldSpec, m: int, grid, rows: int, cols: int, path: str) -> ChainRingMatrix:
    g = _grid(grid, path)
    if len(g) != rows or any(len(r) != cols for r in g):
        raise SchemaError(f"{path}: expected a {rows}x{cols} matrix")
    R = zq_ring(field, m)
    for i, row in enumerate(g):
        for j, e in enumerate(row):
            if len(e) != field.n:
                raise SchemaError(f"{path}[{i}][{j}]: expected {field.n} coefficients")
    ent = tuple(tuple(tuple(c % R.pm for c in e) for e in row) for row in g)
    return ChainRingMatrix(R, rows, cols, ent)


# -- per-type encoders -----------------------------------------------------------


def _field_json(f: FieldSpec) -> dict:
    return {"kind": "field", "p": f.p, "n": f.n, "modulus": list(f.modulus)}


def _field_from(obj, path: str) -> FieldSpec:
    obj = _dict(obj, path)
    p = _int(_need(obj, "p", path), f"{path}.p")
    n = _int(_need(obj, "n", path), f"{path}.n")
    modulus = obj.get("modulus")
    if modulus is not None:
        modulus = _element(modulus, f"{path}.modulus")
    return make_field(p, n, modulus)


def _witt_json(w: WittVector) -> dict:
    return {"kind": "witt", "field": _field_json(w.field), "components": [list(c) for c in w.components]}


def _witt_from(obj: dict, path: str) -> WittVector:
    field = _field_from(_need(obj, "field", path), f"{path}.field")
    comps = _list(_need(obj, "components", path), f"{path}.components")
    out = []
    for i, c in enumerate(comps):
        e = _element(c, f"{path}.components[{i}]")
        if len(e) != field.n:
            raise SchemaError(f"{path}.components[{i}]: expected {field.n} coefficients")
        out.append(tuple(x % field.p for x in e))
    if not out:
        raise SchemaError(f"{path}.components: must be nonempty")
    return WittVector(field, tuple(out))


def _covector_json(u: Covector) -> dict:
    return {"kind": "covector", "field": _field_json(u.field), "components": [list(c) for c in u.components]}


def _covector_from(obj: dict, path: str) -> Covector:
    field = _field_from(_need(obj, "field", path), f"{path}.field")
    comps = _list(_need(obj, "components", path), f"{path}.components")
    out = []
    for i, c in enumerate(comps):
        e = _element(c, f"{path}.components[{i}]")
        if len(e) != field.n:
            raise SchemaError(f"{path}.components[{i}]: expected {field.n} coefficients")
        out.append(tuple(x % field.p for x in e))
    return covector_new(field, out)


def _dm_json(M: DieudonneModule) -> dict:
    return {
        "kind": "dieudonne_module",
        "field": _field_json(M.field),
        "profile": list(M.profile),
        "F": _mat_json(M.F),
        "V": _mat_json(M.V),
    }


def _dm_from(obj: dict, path: str) -> DieudonneModule:
    field = _field_from(_need(obj, "field", path), f"{path}.field")
    profile = tuple(_int(e, f"{path}.profile[{i}]") for i, e in enumerate(_list(_need(obj, "profile", path), f"{path}.profile")))
    r = len(profile)
    m = profile[0] if profile else 1
    F = _mat_from(field, m, _need(obj, "F", path), r, r, f"{path}.F")
    V = _mat_from(field, m, _need(obj, "V", path), r, r, f"{path}.V")
    return dm_new(field, profile, F, V)


def _gs_json(G: GroupScheme) -> dict:
    return {
        "kind": "group_scheme",
        "module": _dm_json(G.p_part),
        "etale_coprime": list(G.etale_coprime),
        "label": G.label,
    }


def _gs_from(obj: dict, path: str) -> GroupScheme:
    M = _dm_from(_dict(_need(obj, "module", path), f"{path}.module"), f"{path}.module")
    co = tuple(_int(d, f"{path}.etale_coprime[{i}]") for i, d in enumerate(_list(obj.get("etale_coprime", []), f"{path}.etale_coprime")))
    label = obj.get("label")
    if label is not None:
        label = _str(label, f"{path}.label")
    return gs_from_module(M, co, label)


def _summand_json(s) -> dict:
    if isinstance(s, UnitSummand):
        return {"type": "unit", "rank": s.rank, "F_unit": _mat_json(s.F_unit)}
    if isinstance(s, AdditiveSummand):
        return {"type": "additive", "rank": s.rank}
    if isinstance(s, FormalSummand):
        return {"type": "formal", "h": s.h, "mult": s.mult}
    if isinstance(s, FiniteSummand):
        return {"type": "finite", "module": _dm_json(s.module)}
    raise SchemaError(f"unknown summand {type(s).__name__}")


def _summand_from(obj, field: FieldSpec, witt_precision: int, path: str):
    obj = _dict(obj, path)
    t = _str(_need(obj, "type", path), f"{path}.type")
    if t == "unit":
        rank = _int(_need(obj, "rank", path), f"{path}.rank")
        U = _mat_from(field, witt_precision, _need(obj, "F_unit", path), rank, rank, f"{path}.F_unit")
        return UnitSummand(rank, U)
    if t == "additive":
        return AdditiveSummand(_int(_need(obj, "rank", path), f"{path}.rank"))
    if t == "formal":
        return FormalSummand(
            _int(_need(obj, "h", path), f"{path}.h"),
            _int(obj.get("mult", 1), f"{path}.mult"),
        )
    if t == "finite":
        M = _dm_from(_dict(_need(obj, "module", path), f"{path}.module"), f"{path}.module")
        if M.field != field:
            raise SchemaError(f"{path}.module: field mismatch")
        return FiniteSummand(M)
    raise SchemaError(f"{path}.type: unknown summand type {t!r}")


def _cartier_json(M: CartierModule) -> dict:
    return {
        "kind": "cartier_module",
        "field": _field_json(M.field),
        "v_precision": M.v_precision,
        "witt_precision": M.witt_precision,
        "summands": [_summand_json(s) for s in M.summands],
    }


def _cartier_from(obj: dict, path: str) -> CartierModule:
    field = _field_from(_need(obj, "field", path), f"{path}.field")
    w = _int(_need(obj, "witt_precision", path), f"{path}.witt_precision")
    v = _int(_need(obj, "v_precision", path), f"{path}.v_precision")
    summands = [
        _summand_from(s, field, w, f"{path}.summands[{i}]")
        for i, s in enumerate(_list(_need(obj, "summands", path), f"{path}.summands"))
    ]
    return cm_new(field, summands, v, w)


def _connected_json(r: ConnectedDmReport) -> dict:
    return {
        "kind": "connected_report",
        "summands": list(r.summands),
        "unipotent_dim": r.unipotent_dim,
        "mult_corank": r.mult_corank,
        "finite_leftover": _dm_json(r.finite_leftover),
    }


def _connected_from(obj: dict, path: str) -> ConnectedDmReport:
    return ConnectedDmReport(
        tuple(_str(s, f"{path}.summands[{i}]") for i, s in enumerate(_list(_need(obj, "summands", path), f"{path}.summands"))),
        _int(_need(obj, "unipotent_dim", path), f"{path}.unipotent_dim"),
        _int(_need(obj, "mult_corank", path), f"{path}.mult_corank"),
        _dm_from(_dict(_need(obj, "finite_leftover", path), f"{path}.finite_leftover"), f"{path}.finite_leftover"),
    )


def _cohom_json(r: CohomReport) -> dict:
    return {
        "kind": "cohom_report",
        "coefficient": r.coefficient,
        "degree": r.degree,
        "finite_part": _dm_json(r.finite_part),
        "vector_dim": r.vector_dim,
        "etale_rank": r.etale_rank,
        "extension_status": r.extension_status,
        "warnings": list(r.warnings),
    }


def _cohom_from(obj: dict, path: str) -> CohomReport:
    etale = obj.get("etale_rank")
    if etale is not None:
        etale = _int(etale, f"{path}.etale_rank")
    return CohomReport(
        _str(_need(obj, "coefficient", path), f"{path}.coefficient"),
        _int(_need(obj, "degree", path), f"{path}.degree"),
        _dm_from(_dict(_need(obj, "finite_part", path), f"{path}.finite_part"), f"{path}.finite_part"),
        _int(_need(obj, "vector_dim", path), f"{path}.vector_dim"),
        etale,
        _str(_need(obj, "extension_status", path), f"{path}.extension_status"),
        tuple(_str(w, f"{path}.warnings[{i}]") for i, w in enumerate(_list(obj.get("warnings", []), f"{path}.warnings"))),
    )


def _formal_json(r: FormalGroupReport) -> dict:
    return {
        "kind": "formal_group_report",
        "functor": r.kind,
        "degree": r.degree,
        "connected": _connected_json(r.connected),
        "inf_obstruction": _dm_json(r.inf_obstruction),
        "etale_corank": r.etale_corank,
        "mult_corank": r.mult_corank,
        "unipotent_dim": r.unipotent_dim,
        "extension_status": r.extension_status,
        "warnings": list(r.warnings),
    }


def _formal_from(obj: dict, path: str) -> FormalGroupReport:
    etale = obj.get("etale_corank")
    if etale is not None:
        etale = _int(etale, f"{path}.etale_corank")
    return FormalGroupReport(
        _str(_need(obj, "functor", path), f"{path}.functor"),
        _int(_need(obj, "degree", path), f"{path}.degree"),
        _connected_from(_dict(_need(obj, "connected", path), f"{path}.connected"), f"{path}.connected"),
        _dm_from(_dict(_need(obj, "inf_obstruction", path), f"{path}.inf_obstruction"), f"{path}.inf_obstruction"),
        etale,
        _int(_need(obj, "mult_corank", path), f"{path}.mult_corank"),
        _int(_need(obj, "unipotent_dim", path), f"{path}.unipotent_dim"),
        _str(_need(obj, "extension_status", path), f"{path}.extension_status"),
        tuple(_str(w, f"{path}.warnings[{i}]") for i, w in enumerate(_list(obj.get("warnings", []), f"{path}.warnings"))),
    )


# -- geometric packets (ffgs_packet_v1) --------------------------------------------


SCHEMA_VERSION = "ffgs_packet_v1"


def packet_to_jsonable(P: GeometricPacket) -> dict:
    degrees = {}
    for i, dd in sorted(P.degrees.items()):
        block: dict = {"wo": [_summand_json(s) for s in dd.wo.summands]}
        if dd.has_derham:
            block["o"] = {
                "dim": dd.o_dim,
                "matrix": [[list(e) for e in row] for row in dd.o_matrix],
                "twist": dd.o_twist,
            }
            block["b"] = {
                "dim_at_level": dd.b_dim,
                "matrix": [[list(e) for e in row] for row in dd.b_matrix],
                "twist": dd.b_twist,
                "stabilized": dd.b_stabilized,
            }
            block["d"] = [[list(e) for e in row] for row in dd.d_matrix]
        if dd.etale_corank is not None:
            block["etale_corank"] = dd.etale_corank
        degrees[str(i)] = block
    out = {
        "schema": SCHEMA_VERSION,
        "p": P.field.p,
        "n": P.field.n,
        "witt_precision": P.witt_precision,
        "v_precision": P.v_precision,
        "extension_policy": P.extension_policy,
        "degrees": degrees,
    }
    if P.name:
        out["name"] = P.name
    return out


def packet_from_jsonable(obj, path: str = "$") -> GeometricPacket:
    obj = _dict(obj, path)
    version = _str(_need(obj, "schema", path), f"{path}.schema")
    if version != SCHEMA_VERSION:
        raise SchemaError(f"{path}.schema: expected {SCHEMA_VERSION!r}, got {version!r}")
    field = make_field(_int(_need(obj, "p", path), f"{path}.p"), _int(_need(obj, "n", path), f"{path}.n"))
    w = _int(_need(obj, "witt_precision", path), f"{path}.witt_precision")
    v = _int(_need(obj, "v_precision", path), f"{path}.v_precision")
    policy = _str(obj.get("extension_policy", "split"), f"{path}.extension_policy")
    name = _str(obj.get("name", ""), f"{path}.name")
    degrees: dict[int, DegreeData] = {}
    for key, block in _dict(_need(obj, "degrees", path), f"{path}.degrees").items():
        dpath = f"{path}.degrees.{key}"
        try:
            i = int(key)
        except ValueError:
            raise SchemaError(f"{dpath}: degree keys must be integers") from None
        block = _dict(block, dpath)
        wo_summands = [
            _summand_from(s, field, w, f"{dpath}.wo[{k}]")
            for k, s in enumerate(_list(_need(block, "wo", dpath), f"{dpath}.wo"))
        ]
        wo = cm_new(field, wo_summands, v, w)
        etale = block.get("etale_corank")
        if etale is not None:
            etale = _int(etale, f"{dpath}.etale_corank")
        if "o" not in block:
            for k in ("b", "d"):
                if k in block:
                    raise SchemaError(f"{dpath}.{k}: present without 'o'")
            degrees[i] = DegreeData(wo, etale_corank=etale)
            continue
        o = _dict(block["o"], f"{dpath}.o")
        b = _dict(_need(block, "b", dpath), f"{dpath}.b")
        o_dim = _int(_need(o, "dim", f"{dpath}.o"), f"{dpath}.o.dim")
        b_dim = _int(_need(b, "dim_at_level", f"{dpath}.b"), f"{dpath}.b.dim_at_level")
        degrees[i] = DegreeData(
            wo,
            o_dim,
            _grid(_need(o, "matrix", f"{dpath}.o"), f"{dpath}.o.matrix"),
            b_dim,
            _grid(_need(b, "matrix", f"{dpath}.b"), f"{dpath}.b.matrix"),
            _bool(_need(b, "stabilized", f"{dpath}.b"), f"{dpath}.b.stabilized"),
            _grid(_need(block, "d", dpath), f"{dpath}.d"),
            etale,
            _int(_need(o, "twist", f"{dpath}.o"), f"{dpath}.o.twist"),
            _int(_need(b, "twist", f"{dpath}.b"), f"{dpath}.b.twist"),
        )
    return packet_new(field, degrees, w, v, policy, name)


# -- dispatch ------------------------------------------------------------------------


_ENCODERS = [
    (GeometricPacket, packet_to_jsonable),
    (FieldSpec, _field_json),
    (WittVector, _witt_json),
    (Covector, _covector_json),
    (DieudonneModule, _dm_json),
    (GroupScheme, _gs_json),
    (CartierModule, _cartier_json),
    (ConnectedDmReport, _connected_json),
    (CohomReport, _cohom_json),
    (FormalGroupReport, _formal_json),
]

_DECODERS = {
    "field": _field_from,
    "witt": _witt_from,
    "covector": _covector_from,
    "dieudonne_module": _dm_from,
    "group_scheme": _gs_from,
    "cartier_module": _cartier_from,
    "connected_report": _connected_from,
    "cohom_report": _cohom_from,
    "formal_group_report": _formal_from,
}


def to_jsonable(x):
    if isinstance(x, (list, tuple)):
        return [to_jsonable(e) for e in x]
    for cls, enc in _ENCODERS:
        if isinstance(x, cls):
            return enc(x)
    raise SchemaError(f"cannot serialize {type(x).__name__}")


def from_jsonable(obj, path: str = "$"):
    if isinstance(obj, list):
        return [from_jsonable(e, f"{path}[{i}]") for i, e in enumerate(obj)]
    obj = _dict(obj, path)
    if "schema" in obj:
        return packet_from_jsonable(obj, path)
    kind = _str(_need(obj, "kind", path), f"{path}.kind")
    dec = _DECODERS.get(kind)
    if dec is None:
        raise SchemaError(f"{path}.kind: unknown kind {kind!r}")
    return dec(obj, path)
