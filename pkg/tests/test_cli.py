import json
from importlib import resources
from pathlib import Path

import pytest
from click.testing import CliRunner

from cfexplain.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


def fixture_path(name: str) -> str:
    return str(resources.files("cfexplain.fixtures").joinpath(name))


class TestSentences:
    def test_depth1_count(self, runner):
        result = runner.invoke(main, ["sentences", "--depth", "1"])
        assert result.exit_code == 0
        lines = result.output.strip().splitlines()
        assert len(lines) == 360
        assert lines[0] == "go to the blue ball"


class TestParse:
    def test_in_grammar(self, runner):
        result = runner.invoke(main, ["parse", "go to the green ball"])
        assert result.exit_code == 0
        assert result.output.strip() == "goto(green,ball)"

    def test_unknown_token_exits_1(self, runner):
        result = runner.invoke(main, ["parse", "go to the blue circle"])
        assert result.exit_code == 1
        assert "circle" in result.output

    def test_structured_matches_library(self, runner):
        result = runner.invoke(main, ["parse", "go to the blue circle", "--format", "structured"])
        assert result.exit_code == 1
        assert json.loads(result.output) == {"kind": "unknown_token", "token": "circle"}


class TestExecute:
    def test_runs_program(self, runner):
        result = runner.invoke(main, [
            "execute", "--task", fixture_path("example_task.json"),
            "--program", "goto(blue,ball)",
        ])
        assert result.exit_code == 0
        assert "forward" in result.output

    def test_unsatisfiable_exits_1(self, runner):
        result = runner.invoke(main, [
            "execute", "--task", fixture_path("example_task.json"),
            "--program", "goto(red,key)",
        ])
        assert result.exit_code == 1


class TestExplain:
    def test_bundled_example(self, runner):
        result = runner.invoke(main, [
            "explain", "--task", fixture_path("example_task.json"),
            "--utterance", "go to the blue circle",
            "--demo", fixture_path("example_demo.json"),
            "--depth", "1",
        ])
        assert result.exit_code == 0
        assert result.output.strip() == "go to the blue ball"

    def test_structured_output(self, runner):
        result = runner.invoke(main, [
            "explain", "--task", fixture_path("example_task.json"),
            "--utterance", "go to the blue circle", "--depth", "1",
            "--format", "structured",
        ])
        assert result.exit_code == 0
        body = json.loads(result.output)
        assert body["explanation"] == "go to the blue ball"
        assert body["program"] == "goto(blue,ball)"

    def test_naive_flag_matches_pruned(self, runner):
        args = [
            "explain", "--task", fixture_path("example_task.json"),
            "--utterance", "go to the blue circle", "--depth", "1",
            "--format", "structured",
        ]
        pruned = runner.invoke(main, args)
        naive = runner.invoke(main, args + ["--naive"])
        assert pruned.output == naive.output

    def test_no_valid_explanation_exits_1(self, runner, tmp_path):
        empty_demo = tmp_path / "demo.json"
        empty_demo.write_text(json.dumps({"actions": []}))
        result = runner.invoke(main, [
            "explain", "--task", fixture_path("example_task.json"),
            "--utterance", "go to the blue circle",
            "--demo", str(empty_demo), "--depth", "1",
        ])
        assert result.exit_code == 1


class TestCheck:
    def test_success(self, runner):
        result = runner.invoke(main, [
            "check", "--task", fixture_path("example_task.json"),
            "--utterance", "go to the blue ball", "--depth", "1",
        ])
        assert result.exit_code == 0
        assert result.output.strip() == "success"

    def test_failure(self, runner):
        result = runner.invoke(main, [
            "check", "--task", fixture_path("example_task.json"),
            "--utterance", "go to the blue circle", "--depth", "1",
        ])
        assert result.exit_code == 1


class TestGenTasks:
    def test_writes_task_files(self, runner, tmp_path):
        out = tmp_path / "tasks"
        result = runner.invoke(main, ["gen-tasks", "--n", "4", "--seed", "7", "--out", str(out)])
        assert result.exit_code == 0
        files = sorted(out.glob("*.json"))
        assert len(files) == 4
        body = json.loads(files[0].read_text())
        assert set(body) == {"id", "initial", "goal", "reference_demo"}


class TestCorpus:
    def test_emits_jsonl_pairs(self, runner):
        result = runner.invoke(main, ["corpus", "--n", "5", "--seed", "0"])
        assert result.exit_code == 0
        lines = result.output.strip().splitlines()
        assert len(lines) == 5
        pair = json.loads(lines[0])
        assert set(pair) == {"sentence", "program"}

    def test_determinism(self, runner):
        a = runner.invoke(main, ["corpus", "--n", "20", "--seed", "4"]).output
        b = runner.invoke(main, ["corpus", "--n", "20", "--seed", "4"]).output
        assert a == b


class TestVerify:
    def test_passes(self, runner):
        result = runner.invoke(main, ["verify", "--seeds", "3"])
        assert result.exit_code == 0
        assert result.output.count("PASS") == 3
