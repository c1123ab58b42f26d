import msgspec
import pytest
from pyarrow import csv
from typer.testing import CliRunner

from bgkness.cli import CLI
from bgkness.errors import ConfigError, ParameterError
from bgkness.runs import (
    COMMANDS,
    OUTPUT_ENV,
    ExitCode,
    anchor,
    parse_config,
    parse_flags,
    quantity_table,
    read_config_file,
    run,
)
from bgkness.utils import sha256sum

from .utils import close, equal

RUNNER = CliRunner()

MODEL = ["--alpha", "0", "--t1", "1", "--t2", "1"]

INVALID_FLAGS = [
    # flags, key named in the message
    (["--alpha", "2", "--t1", "1", "--t2", "1"], "alpha"),
    (["--alpha", "0.5", "--t1", "-1", "--t2", "1"], "t1"),
    (["--alpha", "0.5", "--t1", "1"], "t2"),
    ([*MODEL, "--bogus", "3"], "bogus"),
    ([*MODEL, "--convention", "line"], "convention"),
    ([*MODEL, "--dt", "1", "--t-end", "0.5"], "t_end"),
    ([*MODEL, "--n-modes", "many"], "n_modes"),
]


def quantities(path):
    table = csv.read_csv(path).to_pydict()
    return dict(zip(table["quantity"], table["value"]))


def anchors(path):
    table = csv.read_csv(path).to_pydict()
    return dict(zip(table["quantity"], table["anchor"]))


def test_parse_flags():
    assert equal(parse_flags(["--alpha", "0.5", "--t-end=3"]), {"alpha": "0.5", "t_end": "3"})

    with pytest.raises(ConfigError):
        parse_flags(["alpha", "0.5"])
    with pytest.raises(ConfigError):
        parse_flags(["--alpha", "--t1", "1"])


def test_parse_config():
    cfg = parse_config("rates", flags=["--alpha", "0.5", "--t1=1", "--t2", "3", "--scheme", "lie"])
    assert equal(cfg.command, "rates")
    assert equal((cfg.alpha, cfg.t1, cfg.t2), (0.5, 1.0, 3.0))
    assert equal(cfg.scheme, "lie")
    assert equal(cfg.n_basis, 24)
    assert equal(cfg.params.t_inf, 2.0)

    cfg = parse_config("evolve", flags={"alpha": 0.1, "t1": 1, "t2": 2, "linearized": "false"})
    assert cfg.linearized is False


@pytest.mark.parametrize("flags,key", INVALID_FLAGS)
def test_invalid_config(flags, key):
    with pytest.raises(ConfigError) as info:
        parse_config("rates", flags=flags)
    assert f"'{key}'" in str(info.value)
    assert isinstance(info.value, ParameterError)


def test_config_file(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# model\nalpha = 0.2\nt1 = 1\nt2 = 3\n\nn-modes = 4\n")
    assert equal(read_config_file(path)["n_modes"], "4")

    cfg = parse_config("ness", path=path, flags=["--alpha", "0.3"])
    assert equal(cfg.alpha, 0.3)
    assert equal(cfg.n_modes, 4)

    path.write_text("alpha 0.2\n")
    with pytest.raises(ConfigError):
        read_config_file(path)
    with pytest.raises(ConfigError):
        read_config_file(tmp_path / "missing.cfg")


def test_output_dir(tmp_path, monkeypatch):
    assert equal(parse_config("rates", flags=MODEL).output_dir, "runs")

    monkeypatch.setenv(OUTPUT_ENV, str(tmp_path))
    assert equal(parse_config("rates", flags=MODEL).output_dir, str(tmp_path))

    cfg = parse_config("rates", flags=[*MODEL, "--output-dir", "elsewhere"])
    assert equal(cfg.output_dir, "elsewhere")


def test_run_rates(tmp_path):
    cfg = parse_config("rates", flags=[*MODEL, "--samples", "1000", "--output-dir", str(tmp_path)])
    manifest = run(cfg)

    assert manifest.passed, manifest.failed()
    assert equal(manifest.exit_code, ExitCode.Pass)
    assert equal([f.name for f in manifest.files], ["rates-constants.csv", "rates-rate.json"])
    for entry in manifest.files:
        assert equal(entry.sha256, sha256sum(tmp_path / entry.name))

    values = quantities(tmp_path / "rates-constants.csv")
    assert equal(values["explicit-rate-prefactor"], 4.0)
    assert close(values["explicit-rate-lambda"], 0.125, rtol=1e-14)
    assert close(values["c-alpha"], 2**-0.5, rtol=1e-14)

    labels = anchors(tmp_path / "rates-constants.csv")
    assert equal(labels["explicit-rate-lambda"], "Thm:expl")
    assert equal(labels["certified-rate"], "Eq:(modno)")
    assert equal(labels["c-alpha"], "Eq:(lowh)")
    assert equal(set(labels), set(values))

    written = msgspec.json.decode((tmp_path / "rates-manifest.json").read_bytes())
    assert equal(written["status"], "pass")
    assert equal(written["config"]["alpha"], 0.0)
    assert all(a["passed"] for a in written["assertions"])


def test_run_verify_bounds(tmp_path):
    flags = [*MODEL, "--samples", "5", "--n-modes", "4", "--output-dir", str(tmp_path)]
    manifest = run(parse_config("verify-bounds", flags=flags), log=True)
    assert manifest.passed, manifest.failed()

    values = quantities(tmp_path / "verify-bounds-bounds.csv")
    assert close(values["density-lower-bound"], 6 / 37, rtol=1e-14)
    assert values["steady-min-density"] >= 6 / 37

    labels = anchors(tmp_path / "verify-bounds-bounds.csv")
    assert equal(labels["density-lower-bound"], "Eq:(ST3)")
    assert equal(labels["pointwise-lower-bound"], "Eq:(plb)")
    assert all(labels.values())


def test_quantity_anchors():
    assert equal(anchor("fourth-moment-bound"), "Eq:(ST2)")
    assert equal(anchor("dms-lambda-M"), "Thm:hypo")
    with pytest.raises(KeyError):
        anchor("made-up-quantity")

    table = quantity_table({"gain-b2": 0.5, "recurrence-a1": 1.0})
    assert equal(table.column_names, ["quantity", "anchor", "value"])
    assert equal(table.column("anchor").to_pylist(), ["Eq:(L1L2)", "Eq:(L1L2)"])


def test_run_domain_error(tmp_path):
    flags = ["--alpha", "0.5", "--t1", "1", "--t2", "3", "--cutoff", "3"]
    manifest = run(parse_config("spectrum", flags=[*flags, "--output-dir", str(tmp_path)]))
    assert equal(manifest.status, "domain-error")
    assert equal(manifest.exit_code, ExitCode.DomainError)
    assert "resolves f∞ moments" in manifest.error
    assert (tmp_path / "spectrum-manifest.json").is_file()


def test_cli_commands():
    assert equal(sorted(COMMANDS), sorted(cmd.name for cmd in CLI.registered_commands))


def test_cli_pass(tmp_path):
    args = ["dms", *MODEL, "--samples", "200", "--kmax", "2", "--n-basis", "8"]
    result = RUNNER.invoke(CLI, [*args, "--output-dir", str(tmp_path)])
    assert equal(result.exit_code, 0), result.output
    assert (tmp_path / "dms-constants.csv").is_file()
    assert (tmp_path / "dms-manifest.json").is_file()


def test_cli_usage_error():
    result = RUNNER.invoke(CLI, ["rates", "--alpha", "1.5", "--t1", "1", "--t2", "1"])
    assert equal(result.exit_code, 2)


def test_cli_assertion_failure(tmp_path):
    args = ["ness", "--alpha", "0.05", "--t1", "1", "--t2", "3", "--n-modes", "4"]
    result = RUNNER.invoke(CLI, [*args, "--max-iter", "1", "--output-dir", str(tmp_path)])
    assert equal(result.exit_code, 1)

    manifest = msgspec.json.decode((tmp_path / "ness-manifest.json").read_bytes())
    failed = [a["name"] for a in manifest["assertions"] if not a["passed"]]
    assert "picard-converged" in failed


def test_verify_bounds_unconverged(tmp_path):
    args = ["verify-bounds", "--alpha", "0.5", "--t1", "1", "--t2", "3", "--n-modes", "4"]
    flags = ["--samples", "3", "--max-iter", "1", "--output-dir", str(tmp_path)]
    result = RUNNER.invoke(CLI, [*args, *flags])
    assert equal(result.exit_code, 1)

    manifest = msgspec.json.decode((tmp_path / "verify-bounds-manifest.json").read_bytes())
    failed = [a["name"] for a in manifest["assertions"] if not a["passed"]]
    assert "picard-converged" in failed


def test_cli_domain_error(tmp_path):
    args = ["spectrum", "--alpha", "0.5", "--t1", "1", "--t2", "3", "--cutoff", "3"]
    result = RUNNER.invoke(CLI, [*args, "--output-dir", str(tmp_path)])
    assert equal(result.exit_code, 3)


def test_cli_config_file(tmp_path):
    path = tmp_path / "dms.cfg"
    path.write_text(f"alpha = 0.5\nt1 = 1\nt2 = 3\nn_basis = 8\noutput_dir = {tmp_path}\n")
    result = RUNNER.invoke(CLI, ["dms", "--config", str(path), "--samples", "100", "--kmax", "1"])
    assert equal(result.exit_code, 0), result.output

    manifest = msgspec.json.decode((tmp_path / "dms-manifest.json").read_bytes())
    assert equal(manifest["config"]["samples"], 100)
    assert equal(manifest["config"]["alpha"], 0.5)
