import json
import subprocess
import sys

import pytest

from ffgs import (
    CohomReport,
    dm_equal,
    dm_mu,
    dm_ss_kernel,
    dm_zmod,
    make_field,
    parse,
    serialize,
)
from ffgs.cli import run
from ffgs.cohomology import GeometricPacket
from ffgs.config import configure
from ffgs.dieudonne import DieudonneModule

from .conftest import BUILDERS
from .test_dieudonne import conjugate


def run_cli(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_atom_mu_p_over_f3(capsys):
    code, out, err = run_cli(capsys, "atom", "mu_p", "--p", "3")
    assert code == 0 and not err
    assert out.splitlines() == [
        "mu_p over F_3",
        "module: order p^1, profile [1]",
        "  F = [[1]]",
        "  V = [[0]]",
        "order: 3",
    ]


def test_atom_json_round_trips(capsys):
    code, out, _ = run_cli(capsys, "atom", "mu_p", "--p", "3", "--json")
    assert code == 0
    G = parse(out)
    assert dm_equal(G.p_part, dm_mu(make_field(3, 1)))
    assert serialize(G) == out


def test_spec_examples_cohom_alpha_p(capsys):
    code, out, _ = run_cli(
        capsys,
        "cohom", "report",
        "--packet", "examples/elliptic_supersingular.json",
        "--deg", "1", "--coeff", "alpha_p",
    )
    assert code == 0
    assert "vector dim : 1" in out
    assert "finite part: 0" in out
    code, out, _ = run_cli(
        capsys,
        "cohom", "report", "--json",
        "--packet", "examples/elliptic_supersingular.json",
        "--deg", "1", "--coeff", "alpha_p",
    )
    r = parse(out)
    assert isinstance(r, CohomReport)
    assert r.vector_dim == 1 and not r.finite_part.rank


def test_spec_examples_les_exit_zero(capsys):
    code, out, _ = run_cli(
        capsys, "check", "les", "--packet", "examples/elliptic_ordinary.json", "--deg", "1"
    )
    assert code == 0
    assert "exact: yes" in out


def test_json_output_byte_identical_across_runs(capsys):
    cases = [
        ("atom", "ss_kernel", "--p", "2", "--json"),
        ("cohom", "report", "--packet", "k3_supersingular", "--deg", "2", "--json"),
        ("cohom", "report", "--packet", "elliptic_ordinary", "--all-degrees", "--json"),
        ("formal", "phi", "--packet", "elliptic_supersingular", "--deg", "1", "--json"),
        ("check", "parallelogram", "--packet", "k3_ordinary", "--deg", "2", "--json"),
        ("examples", "list", "--json"),
    ]
    for argv in cases:
        c1, out1, _ = run_cli(capsys, *argv)
        c2, out2, _ = run_cli(capsys, *argv)
        assert c1 == c2 == 0
        assert out1 == out2
        json.loads(out1)  # machine block is bare JSON


def test_all_degrees_json_parses_to_reports(capsys):
    code, out, _ = run_cli(
        capsys, "cohom", "report", "--packet", "elliptic_ordinary", "--all-degrees", "--json"
    )
    assert code == 0
    reports = parse(out)
    assert [r.degree for r in reports] == [0, 1, 2, 3]
    assert all(isinstance(r, CohomReport) for r in reports)


def test_dm_show_and_dual(tmp_path, capsys):
    f3 = make_field(3, 1)
    path = tmp_path / "mu.json"
    path.write_text(serialize(dm_mu(f3)))
    code, out, _ = run_cli(capsys, "dm", "show", "--file", str(path))
    assert code == 0 and "profile [1]" in out
    code, out, _ = run_cli(capsys, "dm", "dual", "--file", str(path), "--json")
    assert code == 0
    assert dm_equal(parse(out), dm_zmod(f3))


def test_gs_classify_atom(capsys):
    code, out, _ = run_cli(capsys, "gs", "classify", "--atom", "ss_kernel", "--p", "2")
    assert code == 0
    assert "decomposition: M11" in out
    assert "self-dual    : yes" in out


def test_cartier_verbs(tmp_path, capsys, f2, packets):
    M = packets["elliptic_supersingular"].degrees[1].wo
    path = tmp_path / "formal.json"
    path.write_text(serialize(M))
    code, out, _ = run_cli(capsys, "cartier", "trunc", "--file", str(path), "--level", "2", "--json")
    assert code == 0
    assert dm_equal(parse(out), dm_ss_kernel(f2)) or parse(out).profile == dm_ss_kernel(f2).profile
    code, out, _ = run_cli(capsys, "cartier", "tc", "--file", str(path), "--order", "1")
    assert code == 0 and "TC_1" in out
    code, out, _ = run_cli(capsys, "cartier", "connected", "--file", str(path))
    assert code == 0 and "formal group of dimension 1 and height 2" in out


def test_exit_two_on_insufficient_precision(tmp_path, capsys, packets):
    M = packets["elliptic_supersingular"].degrees[1].wo
    path = tmp_path / "formal.json"
    path.write_text(serialize(M))
    code, _, err = run_cli(capsys, "cartier", "tc", "--file", str(path), "--order", "9")
    assert code == 2
    assert "v_precision" in err


def test_exit_three_on_search_budget(tmp_path, capsys, f2):
    M = conjugate(dm_ss_kernel(f2))
    path = tmp_path / "mod.json"
    path.write_text(serialize(M))
    with configure(iso_search_budget=1):
        code, out, _ = run_cli(capsys, "dm", "classify", "--file", str(path))
    assert code == 3
    assert "indeterminate" in out
    code, out, _ = run_cli(capsys, "dm", "classify", "--file", str(path))
    assert code == 0
    assert "decomposition: M11" in out


def test_exit_one_on_bad_input(tmp_path, capsys):
    code, _, err = run_cli(capsys, "atom", "mu_p", "--p", "4")
    assert code == 1 and "prime" in err
    code, _, err = run_cli(capsys, "dm", "show", "--file", str(tmp_path / "missing.json"))
    assert code == 1 and "no such file" in err
    bad = tmp_path / "bad.json"
    bad.write_text('{"kind": "widget"}')
    code, _, err = run_cli(capsys, "dm", "show", "--file", str(bad))
    assert code == 1 and "unknown kind" in err
    code, _, err = run_cli(capsys, "atom", "nonsense", "--p", "2")
    assert code == 1
    code, _, err = run_cli(capsys, "cohom", "report", "--packet", "elliptic_ordinary")
    assert code == 1  # neither --deg nor --all-degrees


def test_check_detects_corruption(tmp_path, capsys, packets):
    obj = json.loads(serialize(packets["elliptic_supersingular"]))
    obj["degrees"]["0"]["d"] = [[[1]]]
    bad = tmp_path / "corrupt.json"
    bad.write_text(json.dumps(obj))
    code, out, _ = run_cli(capsys, "check", "les", "--packet", str(bad), "--deg", "0")
    assert code == 1
    assert "exact: no" in out
    code, out, _ = run_cli(capsys, "check", "parallelogram", "--packet", str(bad), "--deg", "0")
    assert code == 1
    assert "commutes: no" in out


def test_check_all_degrees(capsys):
    for name in BUILDERS:
        code, out, _ = run_cli(capsys, "check", "les", "--packet", name, "--all-degrees")
        assert code == 0
        code, out, _ = run_cli(capsys, "check", "parallelogram", "--packet", name, "--all-degrees")
        assert code == 0


def test_examples_show_matches_export(tmp_path, capsys):
    code, shown, _ = run_cli(capsys, "examples", "show", "elliptic_ordinary")
    assert code == 0
    code, _, _ = run_cli(capsys, "examples", "export", str(tmp_path))
    assert code == 0
    exported = (tmp_path / "elliptic_ordinary.json").read_text()
    assert exported == shown
    P = parse(exported)
    assert isinstance(P, GeometricPacket)
    for name in BUILDERS:
        assert (tmp_path / f"{name}.json").exists()


def test_precision_override_keeps_reports(capsys):
    base = run_cli(capsys, "cohom", "report", "--packet", "k3_ordinary", "--deg", "2", "--json")
    bumped = run_cli(
        capsys,
        "cohom", "report", "--packet", "k3_ordinary", "--deg", "2",
        "--precision", "7,7", "--json",
    )
    assert base[0] == bumped[0] == 0
    assert base[1] == bumped[1]


def test_installed_entry_point():
    r = subprocess.run(
        ["ffgs", "atom", "z_mod_p", "--p", "5", "--a", "2"],
        capture_output=True, text=True,
    )
    assert r.returncode == 0
    assert "Z/p^2 over F_5" in r.stdout
    assert "order: 25" in r.stdout
    r2 = subprocess.run(
        [sys.executable, "-m", "ffgs.cli", "examples", "list"],
        capture_output=True, text=True,
    )
    assert r2.returncode == 0 and "k3_supersingular" in r2.stdout
