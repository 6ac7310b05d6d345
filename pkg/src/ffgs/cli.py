"""``ffgs`` — the command-line front end.

Verb grammar::

    ffgs atom <name> --p P [--n N] [--a A]
    ffgs dm {show|dual|classify} --file F
    ffgs gs {classify|order} (--file F | --atom NAME --p P [--n N] [--a A])
    ffgs cartier {trunc|tc|connected} --file F [--level L | --order N]
    ffgs cohom {report|bundle} --packet P (--deg I | --all-degrees) [--coeff C] [--order N]
    ffgs formal {phi|psi|obstruction} --packet P --deg I
    ffgs check {les|parallelogram|packet} --packet P [--deg I | --all-degrees]
    ffgs examples {list|show|export} [NAME | DIR]

Every leaf command accepts ``--json`` (emit only the machine block, which
round-trips through :func:`ffgs.serialize.parse`) and ``--precision m,N``
(reinterpret the input's Witt/V precisions before computing; stored level
data is never rescaled, so cross-checks may warn).

``--packet`` accepts a real path, a bundled packet name, or a path ending in
``<name>.json`` for a bundled name, so the documented
``examples/elliptic_ordinary.json`` spellings work without an export step.

Exit codes: 0 success; 1 invalid input or a failed check; 2 precision
insufficient; 3 indeterminate (isomorphism-search budget).  Errors print a
one-line message on stderr; no traceback escapes.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from .cartier import CartierModule, ConnectedDmReport, cm_connected_dm, cm_tc_n, cm_trunc
from .cohomology import (
    CohomReport,
    FormalGroupReport,
    GeometricPacket,
    h_alpha_p,
    h_mu_p,
    h_omega_nu,
    h_z_p,
    les_check,
    packet_validate,
    parallelogram_check,
    phi_fl_report,
    phi_obstruction,
    projective_bundle_mu,
    psi_report,
)
from .dieudonne import DieudonneModule, dm_dual, dm_length
from .errors import (
    BudgetExceeded,
    FfgsError,
    PrecisionExceeded,
    SchemaError,
    UnstableTruncation,
)
from .field import make_field
from .group_scheme import GroupScheme, GsClassification, gs_atom, gs_classify, gs_from_module, gs_order
from .serialize import from_jsonable, packet_from_jsonable, parse, serialize

__all__ = ["main", "run"]

_ATOMS = {"mu_p": "mu", "alpha_p": "alpha", "z_mod_p": "zmod", "ss_kernel": "ss_kernel"}
_BUNDLED = ("elliptic_ordinary", "elliptic_supersingular", "k3_ordinary", "k3_supersingular")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # map argparse usage failures onto the exit-code contract (1, not 2)
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


# -- input loading ---------------------------------------------------------------


def _bundled_text(name: str) -> str:
    return resources.files("ffgs").joinpath(f"packets/{name}.json").read_text(encoding="utf-8")


def _packet_text(spec: str) -> str:
    path = Path(spec)
    if path.is_file():
        return path.read_text(encoding="utf-8")
    name = path.name
    if name.endswith(".json"):
        name = name[:-5]
    if name in _BUNDLED:
        return _bundled_text(name)
    raise SchemaError(f"no packet file or bundled name {spec!r} (bundled: {', '.join(_BUNDLED)})")


def _json_obj(text: str) -> dict:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from None
    if not isinstance(obj, dict):
        raise SchemaError("$: expected an object")
    return obj


def _load_packet(args) -> GeometricPacket:
    obj = _json_obj(_packet_text(args.packet))
    if args.precision is not None:
        m, N = args.precision
        obj = dict(obj, witt_precision=m, v_precision=N)
    return packet_from_jsonable(obj)


def _load_file(path_str: str):
    path = Path(path_str)
    if not path.is_file():
        raise SchemaError(f"no such file: {path_str}")
    return path.read_text(encoding="utf-8")


def _load_module(args) -> DieudonneModule:
    obj = parse(_load_file(args.file))
    if isinstance(obj, GroupScheme):
        return obj.p_part
    if isinstance(obj, DieudonneModule):
        return obj
    raise SchemaError(f"{args.file}: expected a serialized module, got {type(obj).__name__}")


def _load_gs(args) -> GroupScheme:
    if args.file is not None:
        obj = parse(_load_file(args.file))
        if isinstance(obj, DieudonneModule):
            return gs_from_module(obj)
        if isinstance(obj, GroupScheme):
            return obj
        raise SchemaError(f"{args.file}: expected a serialized group scheme, got {type(obj).__name__}")
    if args.atom is None:
        raise _UsageError("gs: one of --file or --atom is required")
    if args.p is None:
        raise _UsageError("gs: --atom requires --p")
    return gs_atom(make_field(args.p, args.n), _ATOMS[args.atom], args.a)


def _load_cartier(args) -> CartierModule:
    obj = _json_obj(_load_file(args.file))
    if args.precision is not None:
        m, N = args.precision
        obj = dict(obj, witt_precision=m, v_precision=N)
    out = from_jsonable(obj)
    if not isinstance(out, CartierModule):
        raise SchemaError(f"{args.file}: expected a serialized cartier_module, got {type(out).__name__}")
    return out


# -- rendering -------------------------------------------------------------------


def _entry_str(e) -> str:
    return str(e[0]) if len(e) == 1 else str(list(e))


def _mat_str(mat) -> str:
    if not mat.rows or not mat.cols:
        return f"[]  ({mat.rows}x{mat.cols})"
    return "[" + "; ".join("[" + ", ".join(_entry_str(e) for e in row) + "]" for row in mat.entries) + "]"


def _module_lines(M: DieudonneModule, head: str = "module") -> list[str]:
    if not M.rank:
        return [f"{head}: 0"]
    return [
        f"{head}: order p^{dm_length(M)}, profile {list(M.profile)}",
        f"  F = {_mat_str(M.F)}",
        f"  V = {_mat_str(M.V)}",
    ]


def _field_str(field) -> str:
    return f"F_{field.p ** field.n}"


def _cohom_lines(r: CohomReport, origin: str) -> list[str]:
    lines = [f"R^{r.degree} of {r.coefficient}{origin}"]
    lines += ["  " + s for s in _module_lines(r.finite_part, "finite part")]
    lines.append(f"  vector dim : {r.vector_dim}")
    lines.append(f"  etale rank : {'undeclared' if r.etale_rank is None else r.etale_rank}")
    lines.append(f"  status     : {r.extension_status}")
    lines += [f"  warning    : {w}" for w in r.warnings]
    return lines


def _connected_lines(c: ConnectedDmReport) -> list[str]:
    lines = [f"  connected  : {' + '.join(c.summands) if c.summands else '0'}"]
    lines.append(f"  unipotent dim {c.unipotent_dim}, multiplicative corank {c.mult_corank}")
    if c.finite_leftover.rank:
        lines += ["  " + s for s in _module_lines(c.finite_leftover, "finite leftover")]
    return lines


def _formal_lines(r: FormalGroupReport, origin: str) -> list[str]:
    lines = [f"{r.kind}^{r.degree}{origin}"]
    lines += _connected_lines(r.connected)
    lines += ["  " + s for s in _module_lines(r.inf_obstruction, "inf obstruction")]
    lines.append(f"  etale corank : {'undeclared' if r.etale_corank is None else r.etale_corank}")
    lines.append(f"  status       : {r.extension_status}")
    lines += [f"  warning      : {w}" for w in r.warnings]
    return lines


def _yesno(b: "bool | None") -> str:
    return "unknown" if b is None else ("yes" if b else "no")


def _les_lines(res: dict, origin: str) -> list[str]:
    lines = [f"long exact sequence window at degree {res['degree']}{origin}"]
    for name, ok in res["maps_equivariant"].items():
        lines.append(f"  {name:<7}: {'equivariant' if ok else 'NOT equivariant'}")
    for pos, ok in res["positions"].items():
        lines.append(f"  exact at {pos}: {_yesno(ok)}")
    lines.append(f"  exact: {_yesno(res['exact'])}")
    return lines


def _par_lines(res: dict, origin: str) -> list[str]:
    lines = [f"parallelogram at degree {res['degree']}{origin}"]
    for name, ok in res["checks"].items():
        lines.append(f"  {name:<10}: {_yesno(ok)}")
    lines.append(f"  commutes: {_yesno(res['commutes'])}")
    return lines


def _classification_jsonable(c: GsClassification) -> dict:
    h1 = None
    if c.height_one is not None:
        h1 = {"dimension": c.height_one.dimension, "rho": [[list(e) for e in row] for row in c.height_one.rho]}
    return {
        "order": c.order,
        "height": c.height,
        "cell_lengths": dict(sorted(c.cell_lengths.items())),
        "decomposition": None if c.decomposition is None else list(c.decomposition),
        "decomposition_status": c.decomposition_status,
        "self_dual": c.self_dual,
        "height_one": h1,
        "etale_coprime": list(c.etale_coprime),
    }


def _classification_lines(c: GsClassification) -> list[str]:
    lines = [
        f"order        : {c.order}",
        f"height       : {'V not nilpotent' if c.height is None else c.height}",
        "cells        : "
        + ", ".join(f"{k}={v}" for k, v in sorted(c.cell_lengths.items())),
    ]
    if c.decomposition is not None:
        lines.append(f"decomposition: {' + '.join(c.decomposition) if c.decomposition else '0'}")
    lines.append(f"status       : {c.decomposition_status}")
    lines.append(f"self-dual    : {c.self_dual}")
    if c.height_one is not None:
        lines.append(f"height one   : rho is {c.height_one.dimension}x{c.height_one.dimension}")
    if c.etale_coprime:
        lines.append(f"coprime part : order {'+'.join(str(d) for d in c.etale_coprime)}")
    return lines


def _plain_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _emit(args, lines: list[str], machine: str) -> None:
    if args.json:
        sys.stdout.write(machine)
    else:
        print("\n".join(lines))


def _origin(args) -> str:
    name = Path(args.packet).name
    return f"  ({name[:-5] if name.endswith('.json') else name})"


# -- command handlers ------------------------------------------------------------


def _cmd_atom(args) -> int:
    G = gs_atom(make_field(args.p, args.n), _ATOMS[args.name], args.a)
    lines = [f"{G.label} over {_field_str(G.field)}"]
    lines += _module_lines(G.p_part)
    lines.append(f"order: {gs_order(G)}")
    _emit(args, lines, serialize(G))
    return 0


def _cmd_dm(args) -> int:
    M = _load_module(args)
    if args.sub == "show":
        _emit(args, _module_lines(M), serialize(M))
        return 0
    if args.sub == "dual":
        D = dm_dual(M)
        _emit(args, _module_lines(D, "dual module"), serialize(D))
        return 0
    c = gs_classify(gs_from_module(M))
    _emit(args, _classification_lines(c), _plain_json(_classification_jsonable(c)))
    return 3 if c.decomposition_status == "indeterminate" else 0


def _cmd_gs(args) -> int:
    G = _load_gs(args)
    if args.sub == "order":
        _emit(args, [f"order: {gs_order(G)}"], _plain_json({"order": gs_order(G)}))
        return 0
    c = gs_classify(G)
    _emit(args, _classification_lines(c), _plain_json(_classification_jsonable(c)))
    return 3 if c.decomposition_status == "indeterminate" else 0


def _cmd_cartier(args) -> int:
    M = _load_cartier(args)
    if args.sub == "trunc":
        T = cm_trunc(M, args.level)
        _emit(args, _module_lines(T, f"M/V^{args.level}"), serialize(T))
        return 0
    if args.sub == "tc":
        T = cm_tc_n(M, args.order)
        _emit(args, _module_lines(T, f"TC_{args.order}"), serialize(T))
        return 0
    r = cm_connected_dm(M)
    _emit(args, _connected_lines(r), serialize(r))
    return 0


def _one_cohom(P: GeometricPacket, i: int, args) -> CohomReport:
    if args.sub == "bundle":
        return projective_bundle_mu(P, i)
    if args.coeff == "alpha_p":
        return h_alpha_p(P, i)
    if args.coeff == "z_p":
        return h_z_p(P, i)
    if args.coeff == "mu_p":
        return h_mu_p(P, i, args.order)
    return h_omega_nu(P, i, args.order, args.coeff)


def _cmd_cohom(args) -> int:
    P = _load_packet(args)
    degrees = sorted(P.degrees) if args.all_degrees else [args.deg]
    reports = [_one_cohom(P, i, args) for i in degrees]
    lines: list[str] = []
    for r in reports:
        if lines:
            lines.append("")
        lines += _cohom_lines(r, _origin(args))
    _emit(args, lines, serialize(reports if args.all_degrees else reports[0]))
    return 0


def _cmd_formal(args) -> int:
    P = _load_packet(args)
    if args.sub == "obstruction":
        M = phi_obstruction(P, args.deg)
        lines = [f"prorepresentable: {'yes' if not M.rank else 'no'}"]
        lines += _module_lines(M, "V-torsion obstruction")
        _emit(args, lines, serialize(M))
        return 0
    r = phi_fl_report(P, args.deg) if args.sub == "phi" else psi_report(P, args.deg)
    _emit(args, _formal_lines(r, _origin(args)), serialize(r))
    return 0


def _cmd_check(args) -> int:
    P = _load_packet(args)
    if args.sub == "packet":
        v = packet_validate(P)
        lines = ["packet: valid"] + [f"  warning: {w}" for w in v["warnings"]]
        _emit(args, lines, _plain_json(v))
        return 0
    checker, key, render = (
        (les_check, "exact", _les_lines) if args.sub == "les" else (parallelogram_check, "commutes", _par_lines)
    )
    degrees = sorted(P.degrees) if args.all_degrees else [args.deg]
    results = [checker(P, i) for i in degrees]
    lines = []
    for res in results:
        if lines:
            lines.append("")
        lines += render(res, _origin(args))
    _emit(args, lines, _plain_json(results if args.all_degrees else results[0]))
    return 0 if all(res[key] for res in results) else 1


def _cmd_examples(args) -> int:
    if args.sub == "list":
        _emit(args, list(_BUNDLED), _plain_json(list(_BUNDLED)))
        return 0
    if args.sub == "show":
        if args.name is None:
            raise _UsageError("examples show: a packet name is required")
        text = _packet_text(args.name)
        sys.stdout.write(text)
        return 0
    if args.dir is None:
        raise _UsageError("examples export: a target directory is required")
    target = Path(args.dir)
    target.mkdir(parents=True, exist_ok=True)
    written = []
    for name in _BUNDLED:
        out = target / f"{name}.json"
        out.write_text(_bundled_text(name), encoding="utf-8")
        written.append(str(out))
    _emit(args, [f"wrote {p}" for p in written], _plain_json(written))
    return 0


# -- parser ------------------------------------------------------------------------


def _precision_arg(text: str) -> tuple[int, int]:
    parts = text.split(",")
    try:
        m, N = (int(x) for x in parts)
    except ValueError:
        raise argparse.ArgumentTypeError("expected two integers m,N") from None
    if m < 1 or N < 1:
        raise argparse.ArgumentTypeError("precisions must be >= 1")
    return m, N


def _build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit only the machine block")
    common.add_argument(
        "--precision",
        type=_precision_arg,
        metavar="m,N",
        help="override Witt and V precisions of the loaded object",
    )

    parser = _Parser(prog="ffgs", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p_atom = sub.add_parser("atom", parents=[common], help="print a standard atom")
    p_atom.add_argument("name", choices=sorted(_ATOMS))
    p_atom.add_argument("--p", type=int, required=True, help="characteristic")
    p_atom.add_argument("--n", type=int, default=1, help="field degree over F_p")
    p_atom.add_argument("--a", type=int, default=1, help="order exponent (mu_{p^a} etc.)")
    p_atom.set_defaults(func=_cmd_atom)

    p_dm = sub.add_parser("dm", help="operate on a serialized module")
    dm_sub = p_dm.add_subparsers(dest="sub", required=True, parser_class=_Parser)
    for name in ("show", "dual", "classify"):
        sp = dm_sub.add_parser(name, parents=[common])
        sp.add_argument("--file", required=True, help="serialized dieudonne_module or group_scheme")
        sp.set_defaults(func=_cmd_dm, sub=name)

    p_gs = sub.add_parser("gs", help="operate on a group scheme")
    gs_sub = p_gs.add_subparsers(dest="sub", required=True, parser_class=_Parser)
    for name in ("classify", "order"):
        sp = gs_sub.add_parser(name, parents=[common])
        sp.add_argument("--file", help="serialized group_scheme or dieudonne_module")
        sp.add_argument("--atom", choices=sorted(_ATOMS), help="build an atom instead of reading a file")
        sp.add_argument("--p", type=int, help="characteristic (with --atom)")
        sp.add_argument("--n", type=int, default=1)
        sp.add_argument("--a", type=int, default=1)
        sp.set_defaults(func=_cmd_gs, sub=name)

    p_ct = sub.add_parser("cartier", help="operate on a serialized V-complete module")
    ct_sub = p_ct.add_subparsers(dest="sub", required=True, parser_class=_Parser)
    sp = ct_sub.add_parser("trunc", parents=[common])
    sp.add_argument("--file", required=True)
    sp.add_argument("--level", type=int, required=True, help="quotient by V^level")
    sp.set_defaults(func=_cmd_cartier, sub="trunc")
    sp = ct_sub.add_parser("tc", parents=[common])
    sp.add_argument("--file", required=True)
    sp.add_argument("--order", type=int, required=True, help="TC_n level")
    sp.set_defaults(func=_cmd_cartier, sub="tc")
    sp = ct_sub.add_parser("connected", parents=[common])
    sp.add_argument("--file", required=True)
    sp.set_defaults(func=_cmd_cartier, sub="connected")

    p_cohom = sub.add_parser("cohom", help="pushforward reports from a packet")
    co_sub = p_cohom.add_subparsers(dest="sub", required=True, parser_class=_Parser)
    sp = co_sub.add_parser("report", parents=[common])
    sp.add_argument("--packet", required=True)
    grp = sp.add_mutually_exclusive_group(required=True)
    grp.add_argument("--deg", type=int)
    grp.add_argument("--all-degrees", action="store_true")
    sp.add_argument("--coeff", choices=("alpha_p", "z_p", "mu_p", "omega", "nu"), default="mu_p")
    sp.add_argument("--order", type=int, default=1, help="n in mu_{p^n} / omega_n / nu_n")
    sp.set_defaults(func=_cmd_cohom, sub="report")
    sp = co_sub.add_parser("bundle", parents=[common], help="mu_p on a P^1-bundle")
    sp.add_argument("--packet", required=True)
    grp = sp.add_mutually_exclusive_group(required=True)
    grp.add_argument("--deg", type=int)
    grp.add_argument("--all-degrees", action="store_true")
    sp.set_defaults(func=_cmd_cohom, sub="bundle")

    p_formal = sub.add_parser("formal", help="formal-group reports from a packet")
    fm_sub = p_formal.add_subparsers(dest="sub", required=True, parser_class=_Parser)
    for name in ("phi", "psi", "obstruction"):
        sp = fm_sub.add_parser(name, parents=[common])
        sp.add_argument("--packet", required=True)
        sp.add_argument("--deg", type=int, required=True)
        sp.set_defaults(func=_cmd_formal, sub=name)

    p_check = sub.add_parser("check", help="consistency checks on a packet")
    ck_sub = p_check.add_subparsers(dest="sub", required=True, parser_class=_Parser)
    for name in ("les", "parallelogram"):
        sp = ck_sub.add_parser(name, parents=[common])
        sp.add_argument("--packet", required=True)
        grp = sp.add_mutually_exclusive_group(required=True)
        grp.add_argument("--deg", type=int)
        grp.add_argument("--all-degrees", action="store_true")
        sp.set_defaults(func=_cmd_check, sub=name)
    sp = ck_sub.add_parser("packet", parents=[common])
    sp.add_argument("--packet", required=True)
    sp.set_defaults(func=_cmd_check, sub="packet")

    p_ex = sub.add_parser("examples", help="bundled packet library")
    ex_sub = p_ex.add_subparsers(dest="sub", required=True, parser_class=_Parser)
    sp = ex_sub.add_parser("list", parents=[common])
    sp.set_defaults(func=_cmd_examples, sub="list")
    sp = ex_sub.add_parser("show", parents=[common])
    sp.add_argument("name", nargs="?")
    sp.set_defaults(func=_cmd_examples, sub="show")
    sp = ex_sub.add_parser("export", parents=[common])
    sp.add_argument("dir", nargs="?")
    sp.set_defaults(func=_cmd_examples, sub="export")

    return parser


def run(argv: "list[str] | None" = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (UnstableTruncation, PrecisionExceeded) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except BudgetExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except FfgsError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


def main(argv: "list[str] | None" = None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
