from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from toric_orbits import cli, orbit_classifier, sweep
from toric_orbits.orbit_classifier import Kind, OrbitVerdict

TRIANGLE = {"lattice_rank": 2, "weights": [[1, 0], [0, 1], [1, 1]], "trivial_dim": 0}
BASIS = {"lattice_rank": 2, "weights": [[1, 0], [0, 1]], "trivial_dim": 0}
U24 = {"lattice_rank": 2, "weights": [[1, 0], [0, 1], [1, 1], [1, 2]], "trivial_dim": 0}


@pytest.fixture
def write(tmp_path):
    def _write(name, data):
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return str(path)
    return _write


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestAnalyze:
    def test_closed(self, capsys, write):
        code, out, _ = run(capsys, "analyze", "--input", write("tri.json", TRIANGLE))
        assert code == 0 and "closed manifold ℝ⁴" in out

    def test_boundary(self, capsys, write):
        code, out, _ = run(capsys, "analyze", write("basis.json", BASIS))
        assert code == 1 and "half-space" in out

    def test_not_a_manifold_has_witness(self, capsys, write):
        code, out, _ = run(capsys, "analyze", "--json", write("u24.json", U24))
        data = json.loads(out)
        assert code == 2 and data["kind"] == "NotManifold"
        assert data["witness"]["facet_count"] == 3

    def test_stdin(self, capsys, monkeypatch):
        monkeypatch.setattr(sys, "stdin", io.StringIO(json.dumps(TRIANGLE)))
        code, out, _ = run(capsys, "analyze", "--json")
        assert code == 0 and json.loads(out)["model_dim"] == 4

    def test_byte_stable_json(self, capsys):
        raw = json.dumps(U24)
        first = run(capsys, "analyze", "--json", raw)[1]
        second = run(capsys, "analyze", "--json", raw)[1]
        assert first == second
        assert first == json.dumps(json.loads(first), sort_keys=True, ensure_ascii=False) + "\n"

    def test_bad_input(self, capsys):
        code, _, err = run(capsys, "analyze", '{"lattice_rank": 2, "weights": [[1, 0], [0, 1, 1]]}')
        assert code == 3
        assert "rep_model" in err and "inconsistent vector lengths" in err and "input:" in err

    def test_bad_input_json_mode(self, capsys):
        code, _, err = run(capsys, "analyze", "--json", "{oops")
        assert code == 3 and json.loads(err)["module"] == "rep_model"

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "analyze", "--input", str(tmp_path / "absent.json"))
        assert code == 3 and "cli" in err

    def test_route_disagreement_exit_code(self, capsys, monkeypatch):
        wrong = OrbitVerdict(Kind.NOT_MANIFOLD, 4, None, None, "pseudomanifold")
        monkeypatch.setattr(orbit_classifier, "classify_pseudomanifold", lambda ws: wrong)
        code, _, err = run(capsys, "analyze", json.dumps(TRIANGLE))
        assert code == 70
        dump = json.loads(err.splitlines()[-1])
        assert dump["structural"]["kind"] == "ClosedManifold"

    def test_verbose_logs_reduction(self, capsys):
        ws = {"lattice_rank": 2, "weights": [[1, 0], [2, 0]]}
        code, _, err = run(capsys, "analyze", "--verbose", json.dumps(ws))
        assert code == 0 and "not effective" in err


class TestOtherVerbs:
    def test_decompose(self, capsys):
        ws = {"lattice_rank": 3, "weights": [[1, 0, 0], [0, 1, 0], [0, 0, 1], [0, 1, 1]], "trivial_dim": 2}
        code, out, _ = run(capsys, "decompose", "--json", json.dumps(ws))
        data = json.loads(out)
        assert code == 0 and (data["d"], data["blocks"], data["l"]) == (1, [3], 2)

    def test_decompose_not_manifold(self, capsys):
        data = json.loads(run(capsys, "decompose", "--json", json.dumps(U24))[1])
        assert data["kind"] == "NotManifold" and "witness" in data

    def test_faces(self, capsys):
        data = json.loads(run(capsys, "faces", "--json", json.dumps(TRIANGLE))[1])
        assert data["size"] == 5 and len(data["encoding"]) == 5

    def test_homology_text(self, capsys):
        code, out, _ = run(capsys, "homology", json.dumps(U24))
        assert code == 0 and "H~_1: Z^3" in out and "Neither" in out

    def test_lp(self, capsys):
        data = json.loads(run(capsys, "lp", "--json", '{"A": [[1, 1, 1]], "b": [1]}')[1])
        assert data["polyhedron"]["bounded"] and len(data["polyhedron"]["vertices"]) == 3
        assert data["nerve"]["facets"] == [[0, 1], [0, 2], [1, 2]]

    def test_lp_bad_input(self, capsys):
        code, _, err = run(capsys, "lp", '{"A": [[1, 1]], "b": [1, 2]}')
        assert code == 3 and "leontief_lp" in err

    def test_bridge(self, capsys):
        data = json.loads(run(capsys, "bridge", "--json", '{"A": [[1, 1, 0]], "b": [1]}')[1])
        assert data["agree"] and data["leontief"] == "NonTotally"


class TestSelfcheck:
    def test_truncated_run_reports_coverage(self, capsys):
        code, out, _ = run(capsys, "selfcheck", "--budget", "1", "--json")
        data = json.loads(out)
        assert code == 0 and data["ok"]
        assert not data["complete"] and 0 < data["coverage"] < 1

    def test_injected_fault_fails(self, capsys, monkeypatch):
        def broken(ws):
            return OrbitVerdict(Kind.NOT_MANIFOLD, -1, None, None, "pseudomanifold")
        monkeypatch.setattr(sweep, "classify_pseudomanifold", broken)
        code, out, _ = run(capsys, "selfcheck", "--budget", "0.5")
        assert code != 0 and "FAILED" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "toric_orbits", "analyze", "--json", json.dumps(BASIS)],
                          capture_output=True, text=True, encoding="utf-8")
    assert proc.returncode == 1
    assert json.loads(proc.stdout)["kind"] == "ManifoldWithBoundary"
