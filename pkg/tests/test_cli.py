import json
import math

import pytest

from fredkin_lab.algebra import UMatrix
from fredkin_lab.cli import main
from fredkin_lab.constructions import fredkin_from_table, m_matrix, toffoli_matrix


@pytest.fixture
def files(tmp_path, capsys):
    def demo(name):
        path = tmp_path / f"{name.replace(':', '_')}.qc"
        assert main(["demo", name, "-o", str(path)]) == 0
        return str(path)

    def write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    capsys.readouterr()
    return demo, write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestCompile:
    def test_canonical_exact_json(self, files, capsys):
        demo, _ = files
        code, out, _ = run(capsys, "compile", demo("canonical"), "--exact", "--json")
        assert code == 0
        assert UMatrix.from_json(json.loads(out)) == fredkin_from_table()

    def test_empty_is_identity(self, files, capsys):
        _, write = files
        code, out, _ = run(capsys, "compile", write("empty.qc", ""))
        assert code == 0
        m = UMatrix.from_json(json.loads(out))
        assert m.is_exact and m == UMatrix.identity(8, "exact")

    def test_parse_error_position(self, files, capsys):
        _, write = files
        path = write("bad.qc", "wires a b c\nnot c\ncnot a a\n")
        code, _, err = run(capsys, "compile", path)
        assert code == 2
        assert f"{path}:3:8:" in err and "control equals target" in err

    def test_exact_kernel_violation(self, files, capsys):
        _, write = files
        code, _, err = run(capsys, "compile", write("v.qc", "wires a b c\ncu V(0.3) a b\n"), "--exact")
        assert code == 3 and "error" in err

    def test_text_and_output_file(self, files, capsys, tmp_path):
        demo, _ = files
        code, out, _ = run(capsys, "compile", demo("canonical"), "--text")
        assert code == 0 and len(out.strip().splitlines()) == 8
        dest = tmp_path / "m.json"
        assert run(capsys, "compile", demo("canonical"), "-o", str(dest))[0] == 0
        assert UMatrix.from_json(json.loads(dest.read_text())) == fredkin_from_table()

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "compile", str(tmp_path / "nope.qc"))[0] == 3


class TestVerify:
    def test_canonical_vs_fredkin_exact(self, files, capsys):
        demo, _ = files
        code, out, _ = run(capsys, "verify", demo("canonical"), "--target", "fredkin", "--exact")
        assert code == 0 and out.startswith("VERIFIED")

    def test_commutator_block_vs_m(self, files, capsys):
        demo, _ = files
        path = demo("m:1.5707963267948966")
        assert run(capsys, "verify", path, "--target", "m:1.5707963267948966", "--tol", "1e-12")[0] == 0

    def test_general_lambda(self, files, capsys):
        demo, _ = files
        assert run(capsys, "verify", demo("m:0.7"), "--target", "m:0.7")[0] == 0
        assert run(capsys, "verify", demo("m:0.7"), "--target", "m:0.8")[0] == 1

    def test_mismatch_names_first_entry(self, files, capsys):
        _, write = files
        code, out, _ = run(capsys, "verify", write("n.qc", "wires a b c\nnot c\n"), "--target", "fredkin")
        assert code == 1
        assert "MISMATCH" in out and "row 0, col 0" in out

    def test_json_report(self, files, capsys):
        _, write = files
        code, out, _ = run(capsys, "verify", write("n.qc", "wires a b c\nnot c\n"), "--target", "fredkin", "--json")
        rep = json.loads(out)
        assert code == 1 and rep["passed"] is False
        assert rep["first_mismatch"]["row"] == 0 and rep["first_mismatch"]["col"] == 0
        assert rep["max_abs_error"] == 1.0

    def test_up_to_phase(self, files, capsys, tmp_path):
        demo, _ = files
        path = tmp_path / "phased.json"
        path.write_text(json.dumps(fredkin_from_table().to_float().scale(1j).to_json()))
        target = f"file:{path}"
        assert run(capsys, "verify", demo("canonical"), "--target", target)[0] == 1
        assert run(capsys, "verify", demo("canonical"), "--target", target, "--up-to-phase")[0] == 0

    def test_toffoli_target(self, files, capsys, tmp_path):
        _, write = files
        text = "wires a b c\ncu V b c\ncu Y a c\ncu V b c\ncu Y a c\nccphase -i a b\n"
        assert run(capsys, "verify", write("t.qc", text), "--target", "toffoli", "--exact")[0] == 0
        assert toffoli_matrix().is_exact

    @pytest.mark.parametrize(
        "extra",
        [
            ["--target", "swap"],
            ["--target", "m:abc"],
            ["--target", "m:inf"],
            ["--target", "file:/nonexistent.json"],
            ["--target", "fredkin", "--exact", "--tol", "1e-9"],
            ["--target", "fredkin", "--tol", "-1"],
            ["--target", "m:0.3", "--exact"],
        ],
    )
    def test_config_errors(self, files, capsys, extra):
        demo, _ = files
        assert run(capsys, "verify", demo("canonical"), *extra)[0] == 3

    @pytest.mark.parametrize("extra", [[], ["--target", "fredkin", "--exact", "--float"]])
    def test_usage_errors(self, files, extra):
        demo, _ = files
        with pytest.raises(SystemExit) as info:
            main(["verify", demo("canonical"), *extra])
        assert info.value.code == 3

    def test_bad_matrix_file(self, files, capsys, tmp_path):
        demo, _ = files
        bad = tmp_path / "bad.json"
        bad.write_text('{"dim": 2, "kernel": "exact", "rows": [[[1,0,0,0,0],[0,0,0,0,0]],[[0,0,0,0,0],[1,0,0,0,0]]]}')
        assert run(capsys, "verify", demo("canonical"), "--target", f"file:{bad}")[0] == 3
        bad.write_text("not json")
        assert run(capsys, "verify", demo("canonical"), "--target", f"file:{bad}")[0] == 3

    def test_parse_error(self, files, capsys):
        _, write = files
        assert run(capsys, "verify", write("x.qc", "not a"), "--target", "fredkin")[0] == 2


class TestTruthTable:
    def test_canonical_layout(self, files, capsys):
        demo, _ = files
        code, out, _ = run(capsys, "truth-table", demo("canonical"))
        lines = out.splitlines()
        assert code == 0 and len(lines) == 10
        rows = [tuple(l.replace("|", " ").split()) for l in lines[2:]]
        got = {r[:3]: r[3:] for r in rows}
        assert got[("1", "0", "1")] == ("1", "1", "0")
        assert got[("1", "1", "0")] == ("1", "0", "1")
        for k, v in got.items():
            if k not in (("1", "0", "1"), ("1", "1", "0")):
                assert k == v

    def test_json(self, files, capsys):
        demo, _ = files
        code, out, _ = run(capsys, "truth-table", demo("canonical"), "--json")
        rep = json.loads(out)
        assert code == 0 and rep["unit_phases"] and len(rep["rows"]) == 8

    def test_not_classical(self, files, capsys):
        demo, _ = files
        code, _, err = run(capsys, "truth-table", demo("m:0.7"))
        assert code == 1 and "not a classical gate" in err

    def test_phases_shown(self, files, capsys):
        _, write = files
        code, out, _ = run(capsys, "truth-table", write("p.qc", "wires a b c\nccphase -i a b\n"))
        assert code == 0 and "phase" in out.splitlines()[0]


class TestCount:
    def test_counts(self, files, capsys):
        demo, _ = files
        assert run(capsys, "count", demo("canonical"))[1] == "1-body: 2, 2-body: 7\n"
        assert run(capsys, "count", demo("canonical"), "--merge")[1] == "1-body: 0, 2-body: 6\n"

    def test_json(self, files, capsys):
        demo, _ = files
        assert json.loads(run(capsys, "count", demo("canonical"), "--json")[1]) == {"merged": False, "one_body": 2, "two_body": 7}


class TestDemo:
    def test_canonical_to_stdout(self, capsys):
        code, out, _ = run(capsys, "demo", "canonical")
        assert code == 0
        body = [l for l in out.splitlines() if not l.startswith("#")]
        assert body[0] == "wires a b c" and len(body) == 10

    def test_unknown(self, capsys):
        assert run(capsys, "demo", "toffoli")[0] == 3
        assert run(capsys, "demo", "m:nan")[0] == 3


class TestSearch:
    def test_report_and_determinism(self, capsys, tmp_path):
        args = ["search", "--target", "m:1.5707963", "--restarts", "2", "--iters", "200", "--seed", "3"]
        code, first, _ = run(capsys, *args)
        assert code == 0
        rep = json.loads(first)
        assert rep["seed"] == 3 and rep["restarts"] == 2 and rep["slots"] == ["bc", "ac", "bc", "ac"]
        assert len(rep["best_params"]) == 16
        out = tmp_path / "r.json"
        code, msg, _ = run(capsys, *args, "-o", str(out))
        assert code == 0 and "best_distance" in msg
        assert out.read_text() == first

    def test_bad_slots(self, capsys):
        assert run(capsys, "search", "--target", "fredkin", "--slots", "bb")[0] == 3
        assert run(capsys, "search", "--target", "fredkin", "--restarts", "0")[0] == 3

    def test_usage_error_is_config_exit(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["search"])
        assert info.value.code == 3
        with pytest.raises(SystemExit) as info:
            main([])
        assert info.value.code == 3


def test_m_target_is_float():
    assert not m_matrix(math.pi / 3).is_exact
