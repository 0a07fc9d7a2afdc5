import json
import math

import pytest

from growthcalc import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


class TestEval:
    def test_single_point(self, capsys):
        data = run_json(capsys, "eval", "x^2+1", "--at", "3")
        assert data["points"] == [{"x": 3.0, "value": 10.0}]

    def test_tower_literal_input(self, capsys):
        data = run_json(capsys, "eval", "xi(x)", "--at", "L7:0.25")
        assert data["points"][0]["value"] == 7.25

    def test_tower_valued_output_is_li_literal(self, capsys):
        data = run_json(capsys, "eval", "exp(exp(x))", "--at", "1e10")
        assert data["points"][0]["value"].startswith("L")

    def test_ladder_and_parallel_order(self, capsys):
        argv = ("eval", "x+1", "--ladder", "geom:1:2:8")
        serial = run_json(capsys, *argv)
        parallel = run_json(capsys, *argv, "--parallel")
        assert serial == parallel
        assert [r["value"] for r in serial["points"]] == [
            1.0 + 2.0 ** i for i in range(8)]

    def test_text_format(self, capsys):
        code, out, _ = run(capsys, "--format", "text", "eval", "2*x",
                           "--at", "4")
        assert code == 0
        assert out.strip() == "4.0\t8.0"


class TestSimpleCommands:
    def test_xi(self, capsys):
        data = run_json(capsys, "xi", "--k", "2", "--at", "10")
        assert data["xi"] == pytest.approx(math.log(10.0))

    def test_ack(self, capsys):
        data = run_json(capsys, "ack", "3", "2")
        assert data["value"] == 65534

    def test_ack_tower_value(self, capsys):
        data = run_json(capsys, "ack", "3", "4")
        assert isinstance(data["value"], str) and data["value"].startswith("L")

    def test_order_defaults_to_towers(self, capsys):
        data = run_json(capsys, "order", "--F", "xi(x)", "--f", "exp(x)")
        assert data["converged"] is True
        assert data["lambda_hat"] == 1.0

    def test_classify(self, capsys):
        data = run_json(capsys, "classify", "exp(x)")
        assert data["class"] == "2"
        assert data["witness"]

    def test_table_all_pass(self, capsys):
        code, out, _ = run(capsys, "--format", "text", "table")
        assert code == 0
        lines = [ln for ln in out.splitlines() if ln.strip()]
        assert len(lines) == 8
        assert all(ln.endswith("PASS") for ln in lines)

    def test_props(self, capsys):
        data = run_json(capsys, "props", "--F", "log(x)")
        assert set(data["conditions"]) == {"R0", "R1", "R2", "R3"}
        assert data["conditions"]["R0"]["verdict"] is True


class TestIterate:
    def test_half_iterate_twice_is_exp(self, capsys):
        data = run_json(capsys, "iterate", "--f", "exp(x)", "--lambda", "0.5",
                        "--at", "1", "--twice")
        assert data["value"] == pytest.approx(math.e, rel=1e-9)

    def test_seed_cache_roundtrip(self, capsys, tmp_path):
        cache = tmp_path / "seeds.json"
        argv = ("iterate", "--f", "2*x", "--lambda", "0.5", "--at", "3",
                "--seed-cache", str(cache))
        first = run_json(capsys, *argv)
        assert cache.exists()
        assert "2*x" in json.loads(cache.read_text())
        second = run_json(capsys, *argv)
        assert second["value"] == pytest.approx(first["value"], abs=1e-9)

    def test_cache_env_var(self, capsys, tmp_path, monkeypatch):
        cache = tmp_path / "env-seeds.json"
        monkeypatch.setenv(cli.SEED_CACHE_ENV, str(cache))
        run_json(capsys, "iterate", "--f", "2*x", "--lambda", "0.25",
                 "--at", "5")
        assert cache.exists()


class TestPlotdata:
    def test_csv_shape(self, capsys):
        code, out, _ = run(capsys, "--format", "csv", "plotdata", "x^2",
                           "--ladder", "geom:1:2:8")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "x,f(x)"
        assert len(lines) == 9
        assert lines[1] == "1.0,1.0"

    def test_json_rows(self, capsys):
        data = run_json(capsys, "plotdata", "2*x", "--ladder", "geom:1:2:8")
        assert len(data["rows"]) == 8


class TestExitCodes:
    def test_usage_error_is_one(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["no-such-command"])
        assert exc.value.code == 1

    def test_missing_required_flag_is_one(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["order", "--F", "log(x)"])
        assert exc.value.code == 1

    def test_parse_error_is_two(self, capsys):
        code, _, err = run(capsys, "eval", "x+")
        assert code == 2
        assert "ParseError" in err

    def test_domain_error_is_two(self, capsys):
        code, _, err = run(capsys, "ack", "9", "1")
        assert code == 2
        assert "DomainError" in err

    def test_bad_ladder_spec_is_two(self, capsys):
        code, _, err = run(capsys, "eval", "x", "--ladder", "nope:1")
        assert code == 2
