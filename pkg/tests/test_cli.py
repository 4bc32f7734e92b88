import json

import pytest

from strongedge.cli import main
from strongedge.graph import format_edge_list, gen_blowup_c5, gen_incidence_pg
from strongedge.coloring import coloring_from_json


def write_graph(tmp_path, g, name="graph.txt"):
    p = tmp_path / name
    p.write_text(format_edge_list(g))
    return str(p)


def c5_file(tmp_path):
    return write_graph(tmp_path, gen_blowup_c5(1), "c5.txt")


class TestColor:
    def test_reduce21_on_incidence_graph(self, tmp_path, capsys):
        gpath = write_graph(tmp_path, gen_incidence_pg(3))
        out = tmp_path / "col.json"
        trace = tmp_path / "trace.txt"
        code = main(["color", gpath, "--alg", "reduce21",
                     "--out", str(out), "--trace", str(trace)])
        assert code == 0
        data = json.loads(out.read_text())
        assert data["k"] == 21 and len(data["colors"]) == 52
        assert trace.read_text().strip()
        assert main(["verify", gpath, str(out)]) == 0

    def test_greedy_bound_succeeds(self, tmp_path):
        gpath = write_graph(tmp_path, gen_incidence_pg(3))
        out = tmp_path / "col.json"
        assert main(["color", gpath, "--alg", "greedy", "--k", "25",
                     "--out", str(out)]) == 0
        assert main(["verify", gpath, str(out)]) == 0

    def test_greedy_too_few_colors_exits_one(self, tmp_path, capsys):
        code = main(["color", c5_file(tmp_path), "--alg", "greedy", "--k", "4",
                     "--out", str(tmp_path / "x.json")])
        assert code == 1
        assert "failed at edge" in capsys.readouterr().err

    def test_reduce21_rejects_degree_five(self, tmp_path):
        gpath = write_graph(tmp_path, gen_blowup_c5(3))  # 6-regular
        assert main(["color", gpath, "--alg", "reduce21",
                     "--out", str(tmp_path / "x.json")]) == 2

    def test_malformed_graph_exits_two(self, tmp_path):
        p = tmp_path / "bad.txt"
        p.write_text("e 0 1\n")
        assert main(["color", str(p)]) == 2

    def test_deterministic_output(self, tmp_path):
        gpath = write_graph(tmp_path, gen_incidence_pg(3))
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        main(["color", gpath, "--out", str(a)])
        main(["color", gpath, "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()


class TestExact:
    def test_blowup_prints_twenty(self, tmp_path, capsys):
        gpath = write_graph(tmp_path, gen_blowup_c5(2))
        assert main(["exact", gpath]) == 0
        assert capsys.readouterr().out.strip() == "20"

    def test_c5_prints_five(self, tmp_path, capsys):
        assert main(["exact", c5_file(tmp_path)]) == 0
        assert capsys.readouterr().out.strip() == "5"

    def test_k4_prints_six(self, tmp_path, capsys):
        p = tmp_path / "k4.txt"
        p.write_text("p 4 6\n" + "".join(
            f"e {i} {j}\n" for i in range(4) for j in range(i + 1, 4)))
        assert main(["exact", str(p)]) == 0
        assert capsys.readouterr().out.strip() == "6"

    def test_budget_exhaustion_exits_four(self, tmp_path, capsys):
        p = tmp_path / "c7.txt"
        p.write_text("p 7 7\n" + "".join(f"e {i} {(i + 1) % 7}\n" for i in range(7)))
        assert main(["exact", str(p), "--budget", "1"]) == 4
        assert "bounds" in capsys.readouterr().out

    def test_witness_verifies(self, tmp_path):
        gpath = write_graph(tmp_path, gen_blowup_c5(2))
        out = tmp_path / "w.json"
        main(["exact", gpath, "--out", str(out)])
        assert main(["verify", gpath, str(out)]) == 0


class TestVerify:
    def test_tampered_color_exits_one(self, tmp_path, capsys):
        gpath = c5_file(tmp_path)
        out = tmp_path / "col.json"
        main(["color", gpath, "--alg", "greedy", "--k", "5", "--out", str(out)])
        data = json.loads(out.read_text())
        first = sorted(data["colors"])[0]
        other = sorted(data["colors"])[1]
        data["colors"][first] = data["colors"][other]
        out.write_text(json.dumps(data))
        assert main(["verify", gpath, str(out)]) == 1
        assert "see each other" in capsys.readouterr().err

    def test_unknown_edge_id_exits_two(self, tmp_path):
        gpath = c5_file(tmp_path)
        out = tmp_path / "col.json"
        out.write_text(json.dumps({"k": 5, "colors": {"99": 1}}))
        assert main(["verify", gpath, str(out)]) == 2

    def test_malformed_json_exits_two(self, tmp_path):
        gpath = c5_file(tmp_path)
        out = tmp_path / "col.json"
        out.write_text("{")
        assert main(["verify", gpath, str(out)]) == 2


class TestGen:
    def test_blowup(self, tmp_path, capsys):
        out = tmp_path / "g.txt"
        assert main(["gen", "blowup", "--t", "2", "--out", str(out)]) == 0
        err = capsys.readouterr().err
        assert "n=10 m=20" in err and "4-regular" in err
        lines = out.read_text().splitlines()
        assert lines[0] == "p 10 20" and len(lines) == 21

    def test_pg(self, tmp_path, capsys):
        out = tmp_path / "g.txt"
        assert main(["gen", "pg", "--q", "3", "--out", str(out)]) == 0
        err = capsys.readouterr().err
        assert "n=26 m=52" in err and "girth=6" in err

    def test_regular(self, tmp_path, capsys):
        out = tmp_path / "g.txt"
        assert main(["gen", "regular", "--d", "4", "--n", "20", "--seed", "1",
                     "--out", str(out)]) == 0
        assert "m=40" in capsys.readouterr().err

    def test_gen_deterministic(self, tmp_path):
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        main(["gen", "regular", "--d", "4", "--n", "16", "--seed", "9", "--out", str(a)])
        main(["gen", "regular", "--d", "4", "--n", "16", "--seed", "9", "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_invalid_generator_params_exit_two(self, tmp_path):
        assert main(["gen", "regular", "--d", "3", "--n", "5",
                     "--out", str(tmp_path / "g.txt")]) == 2


class TestHunt:
    def test_small_sweep_report(self, tmp_path, capsys):
        out = tmp_path / "report.txt"
        code = main(["hunt", "--alg", "reduce21", "--d", "4", "--n", "12",
                     "--seed", "0", "--count", "3", "--out", str(out)])
        assert code == 0
        report = out.read_text()
        assert "instances=3" in report
        assert "max colors" in report
        assert "fallbacks = 0" in report

    def test_hunt_deterministic(self, tmp_path):
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        args = ["hunt", "--d", "4", "--n", "12", "--seed", "3", "--count", "2"]
        main(args + ["--out", str(a)])
        main(args + ["--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_hunt_exact_mode(self, tmp_path):
        out = tmp_path / "r.txt"
        assert main(["hunt", "--alg", "exact", "--d", "3", "--n", "8",
                     "--seed", "0", "--count", "2", "--out", str(out)]) == 0
        assert "max exact" in out.read_text()

    def test_hunt_threads_env(self, tmp_path, monkeypatch):
        monkeypatch.setenv("STRONGEDGE_THREADS", "2")
        out = tmp_path / "r.txt"
        assert main(["hunt", "--d", "4", "--n", "10", "--seed", "0",
                     "--count", "4", "--out", str(out)]) == 0
        assert "instances=4" in out.read_text()


class TestUsage:
    def test_no_command(self):
        assert main([]) == 2

    def test_unknown_command(self):
        assert main(["frobnicate"]) == 2
