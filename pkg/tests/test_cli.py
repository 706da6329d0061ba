import json
import math

import pytest
from click.testing import CliRunner

from waringcount.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


def invoke(runner, args, **kwargs):
    return runner.invoke(main, args, catch_exceptions=False, **kwargs)


def write(path, text):
    path.write_text(text)
    return str(path)


K4 = "0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n"


class TestCountCycles:
    def test_exact_k4_triangles(self, runner, tmp_path):
        graph = write(tmp_path / "k4.txt", K4)
        result = invoke(
            runner,
            ["count-cycles", "--graph", graph, "--d", "3", "--exact",
             "--convention", "undirected-cycles"],
        )
        assert result.exit_code == 0
        doc = json.loads(result.output)
        assert doc["value"] == "4"
        assert doc["queries"] == sum(math.comb(4, i) for i in range(2))

    def test_approx_runs_and_reproduces(self, runner, tmp_path):
        graph = write(tmp_path / "k4.txt", K4)
        args = ["count-cycles", "--graph", graph, "--d", "3", "--approx",
                "--eps", "1/2", "--seed", "11"]
        first = invoke(runner, args)
        second = invoke(runner, args)
        assert first.exit_code == 0
        assert first.output == second.output  # byte-identical reruns
        doc = json.loads(first.output)
        assert doc["queries"] == 25 * 6

    def test_human_mode_same_value(self, runner, tmp_path):
        graph = write(tmp_path / "k4.txt", K4)
        base = ["count-cycles", "--graph", graph, "--d", "3"]
        js = json.loads(invoke(runner, base).output)
        human = invoke(runner, base + ["--format", "human"]).output
        assert f"value: {js['value']}" in human

    def test_domain_error_exit_2(self, runner, tmp_path):
        graph = write(tmp_path / "k4.txt", K4)
        result = runner.invoke(
            main, ["count-cycles", "--graph", graph, "--d", "2"]
        )
        assert result.exit_code == 2
        approx = runner.invoke(
            main, ["count-cycles", "--graph", graph, "--d", "2", "--approx",
                   "--seed", "1"]
        )
        assert approx.exit_code == 2

    def test_parse_error_exit_2(self, runner, tmp_path):
        graph = write(tmp_path / "bad.txt", "0 1 junk\n")
        result = runner.invoke(main, ["count-cycles", "--graph", graph, "--d", "3"])
        assert result.exit_code == 2

    def test_report_dir(self, runner, tmp_path):
        graph = write(tmp_path / "k4.txt", K4)
        outdir = tmp_path / "report"
        result = invoke(
            runner,
            ["count-cycles", "--graph", graph, "--d", "3", "--approx",
             "--eps", "1/2", "--seed", "4", "--report-dir", str(outdir)],
        )
        assert result.exit_code == 0
        assert (outdir / "estimates.csv").exists()
        assert (outdir / "estimates.png").stat().st_size > 0
        doc = json.loads(result.output)
        assert len(doc["samples"]) == 25

    def test_convention_alias(self, runner, tmp_path):
        graph = write(tmp_path / "k4.txt", K4)
        result = invoke(
            runner,
            ["count-cycles", "--graph", graph, "--d", "3", "--exact",
             "--convention", "undirected"],
        )
        doc = json.loads(result.output)
        assert doc["value"] == "4"
        assert doc["parameters"]["convention"] == "undirected-cycles"

    def test_seed_from_environment(self, runner, tmp_path):
        graph = write(tmp_path / "k4.txt", K4)
        args = ["count-cycles", "--graph", graph, "--d", "3", "--approx", "--eps", "1/2"]
        result = invoke(runner, args, env={"WARING_SEED": "123"})
        assert json.loads(result.output)["seed"] == 123


class TestCountSub:
    def test_p3_in_k4(self, runner, tmp_path):
        pattern = write(tmp_path / "p3.txt", "0 1\n1 2\n")
        graph = write(tmp_path / "k4.txt", K4)
        result = invoke(
            runner,
            ["count-sub", "--pattern", pattern, "--graph", graph,
             "--eps", "1/2", "--seed", "5"],
        )
        doc = json.loads(result.output)
        assert doc["method"] == "count-subgraphs-approx"
        assert doc["parameters"]["automorphisms"] == 2

    def test_table_budget_exit_3(self, runner, tmp_path):
        pattern = write(tmp_path / "p3.txt", "0 1\n1 2\n")
        graph = write(tmp_path / "k4.txt", K4)
        result = runner.invoke(
            main,
            ["count-sub", "--pattern", pattern, "--graph", graph,
             "--eps", "1/2", "--seed", "1", "--budget", "2"],
        )
        assert result.exit_code == 3

    def test_with_td_file(self, runner, tmp_path):
        pattern = write(tmp_path / "p3.txt", "0 1\n1 2\n")
        graph = write(tmp_path / "k4.txt", K4)
        td = write(tmp_path / "p3.td", "s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n")
        result = invoke(
            runner,
            ["count-sub", "--pattern", pattern, "--graph", graph, "--td", td,
             "--eps", "1/2", "--seed", "5"],
        )
        assert result.exit_code == 0


class TestPermanentHamiltonianPartitions:
    def test_permanent_ones3(self, runner, tmp_path):
        matrix = write(tmp_path / "ones3.txt", "1 1 1\n1 1 1\n1 1 1\n")
        doc = json.loads(invoke(runner, ["permanent", "--matrix", matrix]).output)
        assert doc["value"] == "6"

    def test_permanent_budget_exit_3(self, runner, tmp_path):
        matrix = write(tmp_path / "m.txt", "\n".join(" ".join("1" for _ in range(6)) for _ in range(6)))
        result = runner.invoke(main, ["permanent", "--matrix", matrix, "--budget", "4"])
        assert result.exit_code == 3

    def test_hamiltonian_k4(self, runner, tmp_path):
        graph = write(tmp_path / "k4.txt", K4)
        doc = json.loads(invoke(runner, ["hamiltonian", "--graph", graph]).output)
        assert doc["value"] == "3"

    def test_partitions(self, runner, tmp_path):
        sets = write(tmp_path / "sets.txt", "0 1\n2 3\n")
        doc = json.loads(
            invoke(runner, ["partitions", "--sets", sets, "--k", "2"]).output
        )
        assert doc["value"] == "2"
        assert doc["parameters"]["unordered"] == "1"


class TestDetectAndCertify:
    def test_detect_positive(self, runner, tmp_path):
        poly = write(tmp_path / "f.txt", "1 1 1\n")
        doc = json.loads(
            invoke(
                runner,
                ["detect-multilinear", "--poly", poly, "--m", "4", "--seed", "9"],
            ).output
        )
        assert doc["detected"] is True

    def test_detect_zero_polynomial(self, runner, tmp_path):
        # rows that cancel in characteristic 2: identically zero, never detected
        poly = write(tmp_path / "f.txt", "1 1 1\n1 1 1\n")
        doc = json.loads(
            invoke(
                runner,
                ["detect-multilinear", "--poly", poly, "--m", "4", "--seed", "1"],
            ).output
        )
        assert doc["detected"] is False

    def test_detect_negative(self, runner, tmp_path):
        poly = write(tmp_path / "f.txt", "1 2 0\n")
        doc = json.loads(
            invoke(
                runner,
                ["detect-multilinear", "--poly", poly, "--m", "4", "--seed", "9",
                 "--trials", "20"],
            ).output
        )
        assert doc["detected"] is False
        assert doc["trials_run"] == 20

    def test_certify(self, runner, tmp_path):
        poly = write(tmp_path / "f.txt", "1 1 1 1\n")
        doc = json.loads(
            invoke(
                runner,
                ["certify", "--poly", poly, "--delta", "1/4", "--seed", "2"],
            ).output
        )
        assert doc["intersects"] is True

    def test_certify_nonneg_disjoint(self, runner, tmp_path):
        poly = write(tmp_path / "f.txt", "1 2 1 0\n")
        doc = json.loads(
            invoke(runner, ["certify", "--poly", poly, "--nonneg"]).output
        )
        assert doc["intersects"] is False


class TestSplitterCommands:
    def test_sample_balanced_verified(self, runner, tmp_path):
        out = tmp_path / "family.json"
        result = invoke(
            runner,
            ["sample-splitter", "--kind", "balanced", "--n", "10", "--k", "3",
             "--l", "3", "--delta", "2", "--seed", "11", "--out", str(out)],
        )
        doc = json.loads(result.output)
        assert doc["verified"] is True
        assert out.exists()
        verify = invoke(
            runner,
            ["verify-splitter", "--family", str(out), "--k", "3", "--delta", "2"],
        )
        assert json.loads(verify.output)["ok"] is True

    def test_sample_perfect(self, runner, tmp_path):
        out = tmp_path / "perfect.json"
        result = invoke(
            runner,
            ["sample-splitter", "--kind", "perfect", "--n", "6", "--d", "2",
             "--n0", "3", "--d0", "2", "--seed", "5", "--out", str(out)],
        )
        doc = json.loads(result.output)
        assert doc["verified"] is True
        assert doc["sigma"] == doc["size"]
        verify = invoke(
            runner, ["verify-splitter", "--family", str(out), "--d0", "2"]
        )
        assert json.loads(verify.output)["ok"] is True

    def test_missing_args_exit_2(self, runner):
        result = runner.invoke(main, ["sample-splitter", "--n", "10"])
        assert result.exit_code == 2


class TestHashBoundAndAudit:
    def test_hash_bound_example(self, runner):
        doc = json.loads(
            invoke(runner, ["hash-bound", "--n", "100", "--k", "3", "--l", "3"]).output
        )
        assert doc["value"] == "101/4"

    def test_hash_bound_domain_error(self, runner):
        result = runner.invoke(main, ["hash-bound", "--n", "3", "--k", "3", "--l", "3"])
        assert result.exit_code == 2

    def test_verify_decompositions(self, runner):
        result = invoke(
            runner,
            ["verify-decompositions", "--nmax", "4", "--dmax", "3",
             "--rank-nmax", "4", "--rank-dmax", "3", "--seed", "1"],
        )
        assert result.exit_code == 0
        doc = json.loads(result.output)
        assert doc["ok"] is True
        assert all(check["ok"] for check in doc["checks"])
