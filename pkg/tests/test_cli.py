"""The command-line surface: outputs, envelopes, exit codes, env fallbacks."""

import json

from friendly.abundancy import abundancy_index, find_friends
from friendly.arith import factorize, sigma
from friendly.cli import parse_natural, validate_envelope
from friendly.friend10 import derive_residue_class


def envelope_of(result):
    assert result.returncode == 0, result.stderr
    doc = json.loads(result.stdout)
    validate_envelope(doc)
    return doc


# --- golden outputs ----------------------------------------------------------


def test_sigma_human(run_cli):
    result = run_cli("sigma", "25")
    assert result.returncode == 0
    assert result.stdout == "sigma(25) = 31\n"


def test_index_human(run_cli):
    result = run_cli("index", "10")
    assert result.stdout == "I(10) = 9/5\n"


def test_derive_human(run_cli):
    result = run_cli("derive", "--a", "1")
    assert result.stdout == "residue: 5425\nmodulus: 6200\n"


def test_friends_human(run_cli):
    result = run_cli("friends", "6", "--bound", "1000")
    assert result.stdout == "friends of 6 up to 1000: [28, 496]\n"


def test_solitary_human(run_cli):
    assert "certified-solitary" in run_cli("solitary", "5").stdout
    assert "inconclusive" in run_cli("solitary", "10").stdout


def test_check_human_reports_first_rejection(run_cli):
    result = run_cli("check", "--a", "1", "--q-factors", "7,11,13,17,19,23")
    assert result.returncode == 0
    assert "overall: RejectedBy(exponent_mod3)" in result.stdout
    assert "REJECT" in result.stdout


def test_check_defaults_to_q_equal_one(run_cli):
    result = run_cli("check", "--a", "1")
    assert "RejectedBy(structural)" in result.stdout


# --- the CLI is a thin adapter over the library --------------------------------


def test_sigma_json_matches_library(run_cli):
    doc = envelope_of(run_cli("sigma", "25", "--json"))
    assert doc["result"]["sigma"] == str(sigma(factorize(25)))
    assert doc["inputs"] == {"n": "25"}


def test_index_json_matches_library(run_cli):
    doc = envelope_of(run_cli("index", "360", "--json"))
    value = abundancy_index(360)
    assert doc["result"]["index"] == f"{value.numerator}/{value.denominator}"


def test_friends_json_matches_library(run_cli):
    doc = envelope_of(run_cli("friends", "30", "--bound", "2000", "--json"))
    assert doc["result"]["friends"] == [str(m) for m in find_friends(30, 2000)]


def test_derive_json_matches_library(run_cli):
    doc = envelope_of(run_cli("derive", "--a", "3", "--json"))
    rc = derive_residue_class(3)
    assert doc["result"] == {"residue": str(rc.residue), "modulus": str(rc.modulus)}


def test_every_subcommand_envelope_validates(run_cli):
    calls = [
        ("sigma", "100", "--json"),
        ("index", "10", "--json"),
        ("friends", "6", "--bound", "500", "--json"),
        ("solitary", "7", "--json"),
        ("check", "--a", "1", "--q-factors", "7^2,11", "--json"),
        ("derive", "--a", "2", "--json"),
        ("scan", "--bound", "2000", "--index", "2/1", "--json"),
        ("verify", "--suite", "bounds", "--json"),
    ]
    for call in calls:
        envelope_of(run_cli(*call))


# --- scan subcommand -----------------------------------------------------------


def test_scan_human_output(run_cli):
    result = run_cli("scan", "--bound", "100000", "--index", "9/5")
    assert result.returncode == 0
    lines = result.stdout.splitlines()
    assert lines[0] == "scanned [1, 100000) for index 9/5"
    assert "hits: [10]" in lines
    assert not any("elapsed" in line for line in lines)


def test_scan_output_bytes_identical_across_workers(run_cli):
    one = run_cli("scan", "--bound", "300000", "--index", "9/5", "--workers", "1")
    two = run_cli("scan", "--bound", "300000", "--index", "9/5", "--workers", "2")
    assert one.returncode == two.returncode == 0
    assert one.stdout == two.stdout


def test_scan_json_envelope(run_cli):
    doc = envelope_of(run_cli("scan", "--bound", "10000", "--index", "9/5", "--json"))
    assert doc["result"]["hits"] == ["10"]
    assert doc["result"]["complete"] is True


def test_scan_resume_via_cli(run_cli, tmp_path):
    path = tmp_path / "cp.json"
    first = run_cli("scan", "--bound", "200000", "--index", "9/5",
                    "--segment-size", "65536", "--resume", str(path))
    assert first.returncode == 0
    again = run_cli("scan", "--bound", "200000", "--index", "9/5",
                    "--segment-size", "65536", "--resume", str(path))
    assert again.returncode == 0
    assert again.stdout == first.stdout  # nothing rescanned, same totals
    clash = run_cli("scan", "--bound", "999999", "--index", "9/5",
                    "--segment-size", "65536", "--resume", str(path))
    assert clash.returncode == 1
    assert "refusing to resume" in clash.stderr


# --- verify subcommand -----------------------------------------------------------


def test_verify_single_suite(run_cli):
    result = run_cli("verify", "--suite", "bounds")
    assert result.returncode == 0
    assert "bounds:" in result.stdout and "0 failures" in result.stdout
    assert result.stdout.rstrip().endswith("overall: PASS")


def test_verify_rejects_unknown_suite(run_cli):
    result = run_cli("verify", "--suite", "nope")
    assert result.returncode == 2


# --- exit codes and errors --------------------------------------------------------


def test_usage_error_exit_2(run_cli):
    assert run_cli("friends", "6").returncode == 2  # --bound missing
    assert run_cli("sigma").returncode == 2
    assert run_cli("unknown-command").returncode == 2
    assert run_cli("sigma", "twelve").returncode == 2


def test_domain_error_exit_1(run_cli):
    result = run_cli("sigma", "0")
    assert result.returncode == 1
    assert "error:" in result.stderr


def test_domain_error_json_object(run_cli):
    result = run_cli("sigma", "0", "--json")
    assert result.returncode == 1
    doc = json.loads(result.stdout)
    assert doc["command"] == "sigma"
    assert doc["error"]["type"] == "ValueError"
    assert "n >= 1" in doc["error"]["message"]


def test_check_rejects_bad_q_factors(run_cli):
    result = run_cli("check", "--a", "1", "--q-factors", "4^2")
    assert result.returncode == 2  # parse-level validation: 4 is not prime


# --- environment variable fallbacks -------------------------------------------------


def test_env_provides_missing_flag(run_cli):
    result = run_cli("friends", "6", env={"FRIENDLY_BOUND": "1000"})
    assert result.returncode == 0
    assert "[28, 496]" in result.stdout


def test_flag_beats_env(run_cli):
    result = run_cli("friends", "6", "--bound", "100", env={"FRIENDLY_BOUND": "1000"})
    assert result.stdout == "friends of 6 up to 100: [28]\n"


def test_env_json_toggle(run_cli):
    result = run_cli("sigma", "25", env={"FRIENDLY_JSON": "1"})
    doc = json.loads(result.stdout)
    assert doc["result"]["sigma"] == "31"


def test_bad_env_value_is_usage_error(run_cli):
    result = run_cli("friends", "6", env={"FRIENDLY_BOUND": "soon"})
    assert result.returncode == 2


# --- numeric argument forms ----------------------------------------------------------


def test_parse_natural_forms():
    assert parse_natural("10000000") == 10 ** 7
    assert parse_natural("10^7") == 10 ** 7
    assert parse_natural("1_000") == 1000


def test_caret_form_on_the_command_line(run_cli):
    result = run_cli("sigma", "10^1")
    assert result.stdout == "sigma(10) = 18\n"
