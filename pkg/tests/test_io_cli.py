import csv
import io as _io
import json

import pytest

from omltopo import io as oio
from omltopo.cli import main
from omltopo.lattice import NotOrthomodular, gen_boolean, gen_mo, validate


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("kind", ["covers", "full"])
def test_json_round_trip(kind):
    lat = gen_mo(3)
    again = validate(oio.spec_from_dict(json.loads(oio.dumps_lattice(lat, kind))))
    assert again.names == lat.names
    assert (again.order == lat.order).all()
    assert (again.ortho_map == lat.ortho_map).all()


def test_malformed_documents(tmp_path):
    with pytest.raises(oio.LatticeFormatError):
        oio.spec_from_dict({"elements": ["0"]})
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(oio.LatticeFormatError):
        oio.read_spec(bad)


def test_o6_fixture_is_rejected(fixtures_dir):
    spec = oio.read_spec(fixtures_dir / "o6.json")
    with pytest.raises(NotOrthomodular):
        validate(spec)


def test_dot_is_hasse():
    dot = oio.to_dot(gen_boolean(2))
    assert dot.startswith("digraph") and "rankdir=BT" in dot
    assert dot.count("->") == 4


@pytest.mark.parametrize("spec, n", [
    ("gen:boolean:3", 8), ("gen:mo:2", 6),
    ("gen:product:gen:boolean:1,gen:mo:2", 12),
    ("gen:product:[gen:product:gen:boolean:1,gen:boolean:1],[gen:boolean:1]", 8),
    ("gen:hsum:gen:boolean:2,gen:boolean:2", 6),
    ("gen:greechie:abc/cde", 12),
])
def test_generators(spec, n):
    assert oio.parse_generator(spec).n == n


@pytest.mark.parametrize("spec", ["gen:foo:1", "gen:boolean:x", "gen:product:gen:mo:2", "boolean:3"])
def test_bad_generators(spec):
    with pytest.raises(oio.LatticeFormatError):
        oio.parse_generator(spec)


def test_check_boolean(capsys):
    code, out, _ = run(capsys, "check", "gen:boolean:3")
    doc = json.loads(out)
    assert code == 0
    assert doc["orthomodular"] and doc["atomic"] and doc["atom_projection"]


def test_check_mo2(capsys):
    code, out, _ = run(capsys, "check", "gen:mo:2")
    doc = json.loads(out)
    assert code == 0
    assert all(doc[k] for k in ("poset", "lattice", "ortholattice", "orthomodular", "atomic", "atom_projection"))


def test_check_o6(capsys, fixtures_dir):
    code, out, _ = run(capsys, "check", str(fixtures_dir / "o6.json"))
    doc = json.loads(out)
    assert code == 5
    assert doc["orthomodular"] is False and doc["ortholattice"] is True
    assert doc["failed"] == "orthomodular" and len(doc["witness"]) == 2


def test_check_dot(capsys):
    code, out, _ = run(capsys, "check", "gen:mo:2", "--format", "dot")
    assert code == 0 and "digraph" in out


def test_rn_boolean(capsys):
    code, out, _ = run(capsys, "rn", "gen:boolean:3", "--family", "general")
    doc = json.loads(out)
    assert code == 0 and doc["stabilization"] == 0


def test_topology_boolean(capsys):
    code, out, _ = run(capsys, "topology", "gen:boolean:3", "--open", "p1,p2")
    doc = json.loads(out)
    assert code == 0
    assert sorted(doc["isolated"]) == sorted(gen_boolean(3).names)
    assert doc["openness"]["p1,p2"] is True


def test_balls_mo2(capsys):
    code, out, _ = run(capsys, "balls", "gen:mo:2", "--element", "a", "--n", "0")
    assert code == 0
    assert json.loads(out)["balls"]["a"]["0"] == []


def test_geom_lemma_csv(capsys):
    code, out, _ = run(capsys, "geom", "lemma", "--thetas", "50")
    rows = list(csv.DictReader(_io.StringIO(out)))
    assert code == 0 and len(rows) == 50
    assert max(float(r["abs_err"]) for r in rows) < 1e-6


def test_geom_ladder(capsys):
    code, out, _ = run(capsys, "geom", "ladder", "--n", "1000")
    assert code == 0 and json.loads(out)["verified"] is True


def test_geom_chain_and_determinism(capsys):
    args = ("geom", "chain", "--n", "3", "--trials", "100", "--seed", "7")
    code, first, _ = run(capsys, *args)
    doc = json.loads(first)
    assert code == 0 and len(doc["traces"]) == 100 and doc["max_residual"] < 1e-7
    _, second, _ = run(capsys, *args)
    assert first == second


def test_certificate_failure_exit(capsys):
    code, _, err = run(capsys, "geom", "lemma", "--thetas", "3", "--tol", "1e-30")
    assert code == 7 and json.loads(err)["error"] == "certificate_failure"


@pytest.mark.parametrize("argv, code, reason", [
    (["check", "/nonexistent/x.json"], 3, "io_error"),
    (["rn", "gen:nope:1"], 4, "parse_error"),
    (["balls", "gen:mo:2", "--element", "zz"], 4, "unknown_element"),
    (["topology", "gen:boolean:3", "--family", "lattice", "--cap", "4"], 8, "size_limit"),
    (["rn", "gen:boolean:3", "--cap", "1000"], 8, "size_limit"),
    (["topology", "gen:greechie:abc/cde/efg", "--family", "lattice"], 6, "NoAtomProjection"),
])
def test_failure_paths(capsys, argv, code, reason):
    got, _, err = run(capsys, *argv)
    assert got == code
    assert json.loads(err)["error"] == reason


def test_out_writes_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out, _ = run(capsys, "rn", "gen:mo:2", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["stabilization"] == 0
