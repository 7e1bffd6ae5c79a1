"""Command-line behavior: exit codes, document output, round-trips."""

import json

import pytest

from netmatch import fixtures
from netmatch.cli import run
from netmatch.entropy import source_model_to_document
from netmatch.graph import network_to_document


@pytest.fixture
def paths(tmp_path):
    network = tmp_path / "butterfly.json"
    network.write_text(json.dumps(network_to_document(fixtures.butterfly_network())))
    source = tmp_path / "uniform2.json"
    source.write_text(json.dumps(source_model_to_document(fixtures.uniform_pair_source())))
    return {"network": str(network), "source": str(source)}


def test_check_boundary_exit_code(paths, capsys):
    code = run(["check", "--network", paths["network"], "--source", paths["source"]])
    out = capsys.readouterr().out
    assert code == 2
    assert out.count("tight") >= 3
    assert "boundary" in out


def test_check_json_document(paths, capsys):
    code = run(["--format", "json", "check", "--network", paths["network"],
                "--source", paths["source"]])
    doc = json.loads(capsys.readouterr().out)
    assert code == 2
    assert doc["verdict"] == "boundary"
    assert [row["subset"] for row in doc["rows"]] == ["s1", "s2", "s1+s2"]
    assert all(row["margin"] == 0 for row in doc["rows"])


def test_check_failing_instance_exits_one(tmp_path, paths, capsys):
    import fractions

    starved = tmp_path / "starved.json"
    starved.write_text(json.dumps(network_to_document(
        fixtures.scaled_butterfly(fractions.Fraction(1, 2)))))
    code = run(["check", "--network", str(starved), "--source", paths["source"]])
    out = capsys.readouterr().out
    assert code == 1
    assert "not-transmissible" in out
    assert "add at least" in out


def test_check_missing_flag_is_usage_error(paths, capsys):
    assert run(["check", "--network", paths["network"]]) == 64
    assert "usage error" in capsys.readouterr().err


def test_malformed_document_is_data_error(tmp_path, paths, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["check", "--network", str(bad), "--source", paths["source"]]) == 65
    assert "error" in capsys.readouterr().err


def test_missing_file_is_data_error(paths):
    assert run(["check", "--network", "/nonexistent.json",
                "--source", paths["source"]]) == 65


def test_mincut_subset_and_sink(paths, capsys):
    assert run(["mincut", "--network", paths["network"], "--subset", "s1",
                "--sink", "t1"]) == 0
    assert capsys.readouterr().out.strip() == "rho_t1(s1) = 2"
    assert run(["mincut", "--network", paths["network"], "--subset", "s1,s2"]) == 0
    assert capsys.readouterr().out.strip() == "rho_N(s1+s2) = 2"


def test_mincut_all_document(paths, capsys):
    assert run(["--format", "json", "mincut", "--network", paths["network"],
                "--all"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["network_wide"] == {"s1": "1", "s2": "1", "s1+s2": "2"}
    assert doc["per_sink"]["t1"]["s1"] == "2"


def test_entropy_subset(paths, capsys):
    assert run(["entropy", "--source", paths["source"], "--subset", "s1"]) == 0
    out = capsys.readouterr().out
    assert "H(s1) = 1" in out
    assert "H(s1|rest) = 1" in out


def test_entropy_full_profile_json(paths, capsys):
    assert run(["--format", "json", "entropy", "--source", paths["source"]]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["joint"] == {"s1": 1.0, "s2": 1.0, "s1+s2": 2.0}


def test_setfunc_verify_exit_codes(tmp_path, capsys):
    good = tmp_path / "poly.json"
    good.write_text(json.dumps({
        "ground": ["s1", "s2"],
        "values": {"s1": "2", "s2": "1", "s1+s2": "2"},
    }))
    assert run(["setfunc", "verify", "--kind", "poly", "--input", str(good)]) == 0
    capsys.readouterr()
    bad = tmp_path / "notpoly.json"
    bad.write_text(json.dumps({
        "ground": ["a", "b"],
        "values": {"a": "2", "b": "2", "a+b": "5"},
    }))
    assert run(["setfunc", "verify", "--kind", "poly", "--input", str(bad)]) == 1
    out = capsys.readouterr().out
    assert "submodularity" in out


def test_regions_exit_codes(paths, capsys):
    assert run(["regions", "--network", paths["network"],
                "--source", paths["source"]]) == 2  # boundary instance
    capsys.readouterr()
    assert run(["regions", "--network", paths["network"], "--source", paths["source"],
                "--separation"]) == 0
    out = capsys.readouterr().out
    assert "separable: True" in out


def test_regions_separation_failure(tmp_path, capsys):
    p = 0.11
    network = tmp_path / "net2.json"
    network.write_text(json.dumps(network_to_document(fixtures.dsbs_network(p))))
    source = tmp_path / "src2.json"
    source.write_text(json.dumps(source_model_to_document(fixtures.dsbs_source(p))))
    assert run(["regions", "--network", str(network), "--source", str(source),
                "--separation"]) == 1
    out = capsys.readouterr().out
    assert "separable: False" in out
    assert "contradiction" in out


def test_simulate_byte_identical_documents(paths, capsys):
    argv = ["--format", "json", "simulate", "--network", paths["network"],
            "--source", paths["source"], "--n", "2", "--trials", "25", "--seed", "42"]
    assert run(argv) == 0
    first = capsys.readouterr().out
    assert run(argv) == 0
    second = capsys.readouterr().out
    assert first == second
    doc = json.loads(first)
    assert doc["trials"] == 25 and doc["n"] == 2
    assert set(doc["sinks"]) == {"t1", "t2"}


def test_simulate_sweep_table(paths, capsys):
    assert run(["simulate", "--network", paths["network"], "--source", paths["source"],
                "--sweep", "1,2", "--trials", "10", "--seed", "3"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0].split()[:3] == ["n", "err_t1", "err_t2"]
    assert len(out) == 4  # header, rule, two data rows


def test_simulate_requires_n_or_sweep(paths, capsys):
    assert run(["simulate", "--network", paths["network"],
                "--source", paths["source"]]) == 64


def test_table_digits_round_trip_through_json(paths, capsys, tmp_path):
    p = 0.11
    network = tmp_path / "net2.json"
    network.write_text(json.dumps(network_to_document(fixtures.dsbs_network(p))))
    source = tmp_path / "src2.json"
    source.write_text(json.dumps(source_model_to_document(fixtures.dsbs_source(p))))
    argv = ["check", "--network", str(network), "--source", str(source)]
    run(argv)
    table = capsys.readouterr().out
    run(["--format", "json"] + argv)
    doc = json.loads(capsys.readouterr().out)
    for row in doc["rows"]:
        assert f"{row['sigma']:.9g}" in table
        assert f"{row['margin']:.9g}" in table


def test_demo_example1(capsys):
    assert run(["demo", "example1"]) == 0
    out = capsys.readouterr().out
    assert "0 decoding errors" in out
    assert "65536" in out
    assert "boundary" in out


def test_demo_example2_custom_p(capsys):
    assert run(["demo", "example2", "--p", "0.25"]) == 0
    out = capsys.readouterr().out
    assert "0.811278" in out  # h(1/4) to the printed precision
    assert "transmissible" in out


def test_demo_example2_degenerate_p_zero(capsys):
    assert run(["demo", "example2", "--p", "0"]) == 0
    out = capsys.readouterr().out
    assert "transmissible" in out


def test_demo_unknown_name(capsys):
    assert run(["demo", "example3"]) == 64


def test_quiet_suppresses_output(paths, capsys):
    code = run(["--quiet", "check", "--network", paths["network"],
                "--source", paths["source"]])
    assert code == 2
    assert capsys.readouterr().out == ""
