"""Command-line surface: happy paths, exit codes, reproducibility."""

import json
from fractions import Fraction

import pytest

from edlab.cli import main
from edlab.graphs import (
    Graph,
    WeightedCompleteGraph,
    blowup,
    to_edge_list_text,
    to_weighted_text,
)
from edlab.hardness import dgt_graph
from edlab.regularity import from_partition_text


@pytest.fixture
def k4_file(tmp_path):
    p = tmp_path / "k4.el"
    p.write_text(to_edge_list_text(Graph.complete(4)))
    return str(p)


@pytest.fixture
def planted_file(tmp_path):
    p = tmp_path / "c5b6.el"
    p.write_text(to_edge_list_text(blowup(Graph.cycle(5), 6)))
    return str(p)


class TestExact:
    def test_k4_triangle_family(self, k4_file, capsys):
        code = main(["exact", "--graph", k4_file, "--family", "clique>=3"])
        out = capsys.readouterr().out
        assert code == 0
        assert out.splitlines()[0] == "E'=2 E=2/16"

    def test_witness_lines(self, k4_file, capsys):
        code = main(["exact", "--graph", k4_file, "--family", "clique>=3", "--witness"])
        out = capsys.readouterr().out.splitlines()
        assert code == 0
        assert len(out) == 3  # headline + two deleted edges
        for line in out[1:]:
            u, v = map(int, line.split())
            assert 0 <= u < v < 4

    def test_r_parts(self, k4_file, capsys):
        code = main(["exact", "--graph", k4_file, "--r-parts", "2"])
        assert code == 0
        assert capsys.readouterr().out.splitlines()[0] == "E'=2 E=2/16"

    def test_family_file(self, k4_file, tmp_path, capsys):
        fam = tmp_path / "fam.json"
        fam.write_text(json.dumps({"graphs": ["3 3\n0 1\n0 2\n1 2\n"]}))
        code = main(["exact", "--graph", k4_file, "--family", f"@{fam}"])
        assert code == 0
        assert "E'=2" in capsys.readouterr().out

    def test_bad_family_token_is_usage_error(self, k4_file, capsys):
        assert main(["exact", "--graph", k4_file, "--family", "hexagons"]) == 1

    def test_malformed_graph_file_is_contract_violation(self, tmp_path, capsys):
        bad = tmp_path / "bad.el"
        bad.write_text("not a graph\n")
        assert main(["exact", "--graph", str(bad), "--family", "odd-cycles"]) == 2

    def test_unknown_flag_is_usage_error(self, k4_file):
        assert main(["exact", "--graph", k4_file, "--frobnicate"]) == 1


class TestHomDist:
    def test_weighted_file(self, tmp_path, capsys):
        W = WeightedCompleteGraph(
            3, {(0, 1): Fraction(1), (0, 2): Fraction(1), (1, 2): Fraction(1, 2)}
        )
        p = tmp_path / "w.wg"
        p.write_text(to_weighted_text(W))
        code = main(["hom-dist", "--weighted", str(p), "--family", "clique>=3"])
        out = capsys.readouterr().out
        assert code == 0
        assert out.splitlines()[0] == "H'=1/2 H=1/18"


class TestApproxAndSample:
    def test_pipeline_output(self, planted_file, capsys):
        code = main(
            [
                "approx",
                "--graph",
                planted_file,
                "--family",
                "odd-cycles",
                "--epsilon",
                "1/8",
                "--schedule",
                "strict",
                "--m",
                "5",
            ]
        )
        captured = capsys.readouterr()
        assert code == 0
        assert "estimate=1/25" in captured.out
        assert "certified=true" in captured.out

    def test_sample_reproducible(self, planted_file, capsys):
        argv = [
            "sample",
            "--graph",
            planted_file,
            "--family",
            "odd-cycles",
            "--d",
            "10",
            "--trials",
            "4",
            "--seed",
            "3",
            "--values",
        ]
        assert main(argv) == 0
        first = capsys.readouterr().out
        assert main(argv) == 0
        second = capsys.readouterr().out
        assert first == second
        assert first.startswith("mean=")

    def test_bad_epsilon_is_contract_violation(self, planted_file):
        code = main(
            ["approx", "--graph", planted_file, "--family", "odd-cycles", "--epsilon", "2/3"]
        )
        assert code == 2


class TestRegularity:
    def test_planted_run_with_dump(self, planted_file, tmp_path, capsys):
        dump = tmp_path / "partition.txt"
        code = main(
            [
                "regularity",
                "--graph",
                planted_file,
                "--schedule",
                "strict",
                "--epsilon",
                "1/8",
                "--m",
                "5",
                "--dump",
                str(dump),
            ]
        )
        out = capsys.readouterr().out
        assert code == 0
        assert "ok=true" in out
        ref = from_partition_text(dump.read_text())
        assert ref.outer.k == 5


class TestGenerators:
    def test_gen_dgt(self, tmp_path, capsys):
        out = tmp_path / "host.el"
        code = main(["gen-dgt", "--q", "5", "--k", "2", "--out", str(out)])
        assert code == 0
        assert out.read_text() == to_edge_list_text(dgt_graph(5, 2))

    def test_gen_dgt_size_cap(self, tmp_path):
        code = main(["gen-dgt", "--q", "101", "--k", "2", "--out", str(tmp_path / "x.el")])
        assert code == 3

    def test_reduction_bundle_flow(self, tmp_path, capsys):
        pattern = tmp_path / "c5.el"
        pattern.write_text(to_edge_list_text(Graph.cycle(5)))
        bundle = tmp_path / "bundle"
        code = main(
            [
                "gen-reduction",
                "--pattern",
                str(pattern),
                "--r",
                "2",
                "--b",
                "2",
                "--mu",
                "1/2",
                "--out",
                str(bundle),
            ]
        )
        gen_out = capsys.readouterr().out
        assert code == 0
        assert "q=5" in gen_out and "mu_eff=13/25" in gen_out

        assert main(["verify", "--bundle", str(bundle)]) == 0
        capsys.readouterr()

        # predicted count for a planted solution size inverts exactly
        from edlab.hardness import predict_e_r, read_bundle

        inst = read_bundle(bundle)
        observed = predict_e_r(inst, 7)
        code = main(["recover", "--bundle", str(bundle), "--observed", str(observed)])
        out = capsys.readouterr().out
        assert code == 0
        assert "ell=7" in out
        assert "tie=false" in out

    def test_tampered_bundle_fails_verify(self, tmp_path, capsys):
        pattern = tmp_path / "c5.el"
        pattern.write_text(to_edge_list_text(Graph.cycle(5)))
        bundle = tmp_path / "bundle"
        assert (
            main(
                [
                    "gen-reduction",
                    "--pattern",
                    str(pattern),
                    "--r",
                    "2",
                    "--b",
                    "2",
                    "--mu",
                    "1/2",
                    "--out",
                    str(bundle),
                ]
            )
            == 0
        )
        capsys.readouterr()
        meta = json.loads((bundle / "meta.json").read_text())
        meta["mu_eff"] = "1/3"
        (bundle / "meta.json").write_text(json.dumps(meta))
        assert main(["verify", "--bundle", str(bundle)]) == 2


class TestVerifySuite:
    def test_suite_passes(self, capsys):
        code = main(["verify", "--suite", "--seed", "0", "--trials", "2"])
        out = capsys.readouterr().out
        assert code == 0
        assert "ok" in out
        assert "FAIL" not in out


class TestBench:
    def test_bench_runs(self, capsys):
        code = main(["bench", "--repeats", "1"])
        out = capsys.readouterr().out
        assert code == 0
        assert "active backend:" in out
