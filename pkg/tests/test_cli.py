import json

import pytest

from modular_flags.cache import BYPASS, HIT, MISS, VERIFIED, ResultCache
from modular_flags.cli import CommandRequest, main
from modular_flags.errors import ConsistencyError, InputError


@pytest.fixture
def cli(tmp_path, capsys):
    "Runs the command line with a private cache, returns (exit code, output)"
    def _run(*argv, fmt="json"):
        code = main([*argv, "--cache-dir", str(tmp_path), "--format", fmt])
        out = capsys.readouterr().out
        return code, (json.loads(out) if fmt == "json" else out)
    return _run


def test_simple_c4(cli):
    code, out = cli("simple", "C4", "0001", "-p", "2")
    assert code == 0
    assert out["payload"]["dim"] == 16
    assert out["payload"]["weyl_dim"] == 42
    assert out["request"] == {"subcommand": "simple", "root_system": "C4", "weight": "0001", "p": 2}
    assert any("characteristic bound" in w for w in out["warnings"])


def test_stabilizer_checks_table(cli):
    code, out = cli("stabilizer", "C4", "0001", "-p", "2", "--check-reference-table", "C4")
    assert code == 0
    payload = out["payload"]
    assert payload["reference_table"]["match"]
    assert payload["exceptional"]
    assert payload["orbit_dimension"] == 10
    assert payload["embedding_dimension"] == 15
    assert payload["simple_exponents"] == ["inf", "inf", "inf", 0]
    assert "standard_form" not in payload


def test_table_flag_primary_name(cli):
    code, out = cli("stabilizer", "C4", "0001", "-p", "2", "--check-paper-table", "C4")
    assert code == 0
    assert out["payload"]["reference_table"]["match"]
    assert len(out["payload"]["rows"]) == 16


def test_stabilizer_tsv_columns(cli):
    code, out = cli("stabilizer", "B2", "1,0", "-p", "2", fmt="tsv")
    assert code == 0
    lines = [line for line in out.strip().splitlines() if not line.startswith("#")]
    assert lines[0].split("\t") == ["root", "exponent"]
    assert lines[1:] == ["01\tinf", "10\t0", "11\t1", "12\t0"]


def test_stabilizer_b2_reports_labels(cli):
    code, out = cli("stabilizer", "B2", "10", "-p", "2", "--check-reference-table", "B2")
    assert code == 0
    assert any("label discrepancy" in w for w in out["warnings"])


def test_table_for_another_module(cli):
    code, out = cli("stabilizer", "C4", "1000", "-p", "2", "--check-reference-table", "C4")
    assert code == 2
    assert out["error"]["code"] == "invalid_input"


@pytest.mark.parametrize("argv", [
    ("roots", "Z9"),
    ("weyl-dim", "A2", "1,-1"),
    ("weyl-dim", "A2", "111"),
    ("simple", "A2", "11", "-p", "4"),
    ("lattice", "C4", "-p", "2", "--exponents", "0,inf"),
    ("incidence", "-p", "2", "--n", "1", "--r", "1", "--a", "1", "--b", "1"),
])
def test_invalid_input(cli, argv):
    code, out = cli(*argv)
    assert code == 2
    assert out["payload"] is None
    assert out["error"]["code"] == "invalid_input"


def test_size_cap(cli):
    code, out = cli("simple", "C4", "0001", "-p", "2", "--size-cap", "10")
    assert code == 3
    assert out["error"]["code"] == "cap_exceeded"


def test_roots_tsv(cli):
    code, out = cli("roots", "B2", fmt="tsv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("# roots")
    assert lines[1].split("\t") == ["root", "height", "norm", "weight"]
    assert len(lines) == 2 + 4


def test_text_format(cli):
    code, out = cli("weyl-dim", "C4", "0001", fmt="text")
    assert code == 0
    assert "42" in out


def test_lattice(cli):
    code, out = cli("lattice", "C4", "-p", "2", "--exponents", "0,inf,inf,1")
    assert code == 0
    assert out["payload"]["finite_part"] == [1, 4]
    assert [r["multiplier"] for r in out["payload"]["rows"]] == [1, 2]


def test_very_ample(cli):
    code, out = cli("very-ample", "C4", "1,0,0,2", "-p", "2", "--exponents", "0,inf,inf,1")
    assert code == 0
    assert out["payload"]["very_ample"]
    code, out = cli("very-ample", "C4", "0100", "-p", "2", "--exponents", "0,inf,inf,1")
    assert code == 2
    assert out["error"]["code"] == "not_a_character"


class TestIncidence:

    def test_closed_form(self, cli):
        code, out = cli("incidence", "-p", "3", "--n", "2", "--r", "1", "--a", "3", "--b", "1", "--oracle")
        assert code == 0
        payload = out["payload"]
        assert payload["table"]["h0"] == 29
        assert payload["oracle_h0"] == 29
        assert payload["ample"]

    def test_swap(self, cli):
        code, out = cli("incidence", "-p", "3", "--n", "2", "--r", "1", "--a", "1", "--b", "3", "--swap")
        assert code == 0
        assert out["payload"]["computed_as"] == [3, 1]
        assert out["payload"]["table"]["h0"] == 29

    def test_indeterminate(self, cli):
        code, out = cli("incidence", "-p", "2", "--n", "2", "--r", "1", "--a", "5", "--b", "-3",
                        "--size-cap", "10")
        assert code == 4
        assert out["payload"]["status"] == "indeterminate"
        assert set(out["payload"]["bounds"]) == {"h1", "h2"}


class TestCache:

    def test_provenance(self, cli):
        argv = ("weyl-char", "A2", "11")
        _, first = cli(*argv)
        _, second = cli(*argv)
        _, third = cli(*argv, "--verify-cache")
        _, fourth = cli(*argv, "--no-cache")
        assert [first["cache"], second["cache"], third["cache"], fourth["cache"]] == [MISS, HIT, VERIFIED, BYPASS]
        assert first["payload"] == second["payload"] == third["payload"] == fourth["payload"]

    def test_corrupted_entry(self, cli, tmp_path):
        argv = ("weyl-dim", "B2", "11")
        cli(*argv)
        for path in tmp_path.glob("*.json"):
            path.write_text("{not json")
        code, out = cli(*argv)
        assert code == 0
        assert out["cache"] == MISS
        assert out["payload"]["dim"] == 16
        assert any("Corrupted cache entry" in w for w in out["warnings"])

    def test_store_load(self, tmp_path):
        cache = ResultCache(tmp_path)
        key = {"subcommand": "weyl-dim", "weight": "11"}
        cache.store(key, {"dim": (1, 2)})
        assert cache.load(key) == {"dim": [1, 2]}
        assert cache.load({"subcommand": "weyl-dim", "weight": "10"}) is None

    def test_cached_rows_keep_column_order(self, cli):
        argv = ("roots", "B2")
        _, first = cli(*argv, fmt="tsv")
        _, second = cli(*argv, fmt="tsv")
        assert first.splitlines()[1:] == second.splitlines()[1:]
        assert second.splitlines()[1].split("\t") == ["root", "height", "norm", "weight"]

    def test_store_keeps_key_order(self, tmp_path):
        cache = ResultCache(tmp_path)
        key = {"subcommand": "stabilizer"}
        cache.store(key, {"rows": [{"root": "10", "exponent": 0}]})
        assert list(cache.load(key)["rows"][0]) == ["root", "exponent"]

    def test_verify_detects_drift(self, tmp_path):
        cache = ResultCache(tmp_path)
        key = {"subcommand": "roots"}
        cache.roundtrip(key, lambda: {"count": 1})
        with pytest.raises(ConsistencyError):
            cache.roundtrip(key, lambda: {"count": 2}, verify=True)


def test_request_validation_order():
    request = CommandRequest("very-ample", root_system="A2", weight="1,-1", p=2)
    with pytest.raises(InputError):
        # non dominant characters are fine, the missing exponents are not
        request.validate()
