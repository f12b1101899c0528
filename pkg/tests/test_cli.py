import json
from pathlib import Path

import pytest

from pinkey.cli import main

GOLDENS = Path(__file__).parent / "goldens"
TRIANGLE = str(GOLDENS / "triangle_model.json")
PATH_MODEL = str(GOLDENS / "path_model.json")
STAR = str(GOLDENS / "star_model.json")


def run_cli(capsys, *args):
    code = main(list(args))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCapacityCommand:
    def test_text_output(self, capsys):
        code, out, _ = run_cli(capsys, "capacity", TRIANGLE)
        assert code == 0
        assert "capacity C(A) = 3/2" in out
        assert "tight" in out

    def test_structured_golden(self, capsys):
        code, out, _ = run_cli(capsys, "capacity", TRIANGLE, "--format", "structured")
        assert code == 0
        assert out == (GOLDENS / "triangle_capacity.json").read_text()
        doc = json.loads(out)
        assert doc["capacity"] == "3/2"
        assert doc["upper_bound"] == "3/2"
        assert doc["tight"] is True
        assert doc["format_version"] == 1

    @pytest.mark.parametrize(
        "model,extra,golden,value",
        [
            (PATH_MODEL, ("--set", "1,3"), "path_capacity_pair.json", "1"),
            (PATH_MODEL, (), "path_capacity_full.json", "1"),
            (STAR, (), "star_capacity.json", "1"),
        ],
    )
    def test_worked_examples(self, capsys, model, extra, golden, value):
        code, out, _ = run_cli(
            capsys, "capacity", model, *extra, "--format", "structured"
        )
        assert code == 0
        assert out == (GOLDENS / golden).read_text()
        assert json.loads(out)["capacity"] == value

    def test_single_terminal_is_usage_error(self, capsys):
        code, _, err = run_cli(capsys, "capacity", TRIANGLE, "--set", "1")
        assert code == 2
        assert "two terminals" in err

    def test_bad_set_spec(self, capsys):
        code, _, err = run_cli(capsys, "capacity", TRIANGLE, "--set", "1,x")
        assert code == 2

    def test_out_of_range_set(self, capsys):
        code, _, err = run_cli(capsys, "capacity", TRIANGLE, "--set", "1,7")
        assert code == 2

    def test_missing_file(self, capsys):
        code, _, err = run_cli(capsys, "capacity", "/nonexistent.json")
        assert code == 2

    def test_size_limit_exit_code(self, capsys, tmp_path):
        doc = {"terminals": 13, "weights": [{"i": 1, "j": 2, "value": 1}]}
        path = tmp_path / "big.json"
        path.write_text(json.dumps(doc))
        code, _, err = run_cli(capsys, "capacity", str(path))
        assert code == 3
        assert "cap" in err


class TestUpperBoundCommand:
    def test_triangle(self, capsys):
        code, out, _ = run_cli(
            capsys, "upper-bound", TRIANGLE, "--format", "structured"
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["upper_bound"] == "3/2"
        assert doc["minimizing_partition"] == [[1], [2], [3]]


class TestPackCommand:
    def test_triangle_scale_two(self, capsys):
        code, out, _ = run_cli(
            capsys, "pack", TRIANGLE, "--scale", "2", "--format", "structured"
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["tree_count"] == 3
        assert doc["rate"] == "3/2"
        assert len(doc["trees"]) == 3

    def test_default_scale_is_base(self, capsys):
        code, out, _ = run_cli(capsys, "pack", TRIANGLE, "--format", "structured")
        assert code == 0
        assert json.loads(out)["scale"] == 1

    def test_invalid_scale(self, capsys, tmp_path):
        doc = {"terminals": 2, "weights": [{"i": 1, "j": 2, "value": "3/2"}]}
        path = tmp_path / "half.json"
        path.write_text(json.dumps(doc))
        code, _, err = run_cli(capsys, "pack", str(path), "--scale", "3")
        assert code == 2
        assert "base scale" in err


class TestSimulateCommand:
    def test_structured_golden(self, capsys):
        code, out, _ = run_cli(
            capsys, "simulate", TRIANGLE, "--scale", "2", "--seed", "0",
            "--format", "structured",
        )
        assert code == 0
        assert out == (GOLDENS / "triangle_simulate.json").read_text()
        doc = json.loads(out)
        assert doc["security_index"] == "0"
        assert doc["audit_passed"] is True
        assert doc["key_bits"] == 3
        assert doc["key_bits"] + doc["transcript_bits"] + doc["residual_bits"] \
            == doc["edge_total"]

    def test_seed_repeat_is_byte_identical(self, capsys):
        args = ("simulate", PATH_MODEL, "--set", "1,3", "--seed", "9",
                "--format", "structured")
        _, first, _ = run_cli(capsys, *args)
        _, second, _ = run_cli(capsys, *args)
        assert first == second

    def test_text_output_contains_transcript(self, capsys):
        code, out, _ = run_cli(capsys, "simulate", PATH_MODEL, "--set", "1,3")
        assert code == 0
        assert "security index s = 0" in out
        assert "seed 0" in out
        assert "recovery: 1:ok 3:ok" in out

    def test_audit_failure_exit_code(self, capsys, monkeypatch):
        import pinkey.cli as cli_module
        from dataclasses import replace

        real_audit = cli_module.audit

        def failing_audit(run, **kwargs):
            report = real_audit(run, **kwargs)
            recoverability = dict(report.recoverability)
            recoverability[min(recoverability)] = False
            return replace(report, recoverability=recoverability)

        monkeypatch.setattr(cli_module, "audit", failing_audit)
        code, out, err = run_cli(
            capsys, "simulate", TRIANGLE, "--format", "structured"
        )
        assert code == 4
        assert "audit failed" in err
        assert json.loads(out)["audit_passed"] is False


class TestValidateCommand:
    def test_valid_model(self, capsys):
        code, out, _ = run_cli(capsys, "validate", TRIANGLE, "--format", "structured")
        assert code == 0
        doc = json.loads(out)
        assert doc["valid"] is True
        assert doc["exact"] is True
        assert doc["base_scale"] == 1

    def test_unknown_field_rejected(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"terminals": 2, "weights": [], "color": "red"}')
        code, _, err = run_cli(capsys, "validate", str(path))
        assert code == 2
        assert "unknown" in err

    def test_float_mode_model(self, capsys, tmp_path):
        path = tmp_path / "pmf.json"
        path.write_text(
            '{"terminals": 2, "pmfs": [{"i": 1, "j": 2, "rows": 2, "cols": 2,'
            ' "probs": [0.5, 0.0, 0.0, 0.5]}]}'
        )
        code, out, _ = run_cli(capsys, "validate", str(path), "--format", "structured")
        assert code == 0
        doc = json.loads(out)
        assert doc["exact"] is False
        assert "base_scale" not in doc

    def test_float_mode_capacity_is_usage_error(self, capsys, tmp_path):
        path = tmp_path / "pmf.json"
        path.write_text(
            '{"terminals": 2, "pmfs": [{"i": 1, "j": 2, "rows": 1, "cols": 1,'
            ' "probs": [1.0]}]}'
        )
        code, _, err = run_cli(capsys, "capacity", str(path))
        assert code == 2
        assert "exact" in err


class TestParser:
    def test_no_command_is_usage_error(self, capsys):
        assert main([]) == 2

    def test_unknown_command(self, capsys):
        assert main(["frobnicate", "x.json"]) == 2

    def test_help_exits_zero(self, capsys):
        assert main(["--help"]) == 0
