"""CLI: schemas, exit codes, reproducibility."""

import json

import pytest

from mabkcert import cli
from mabkcert.sdp import SdpSolverError


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_mabk_show_text(capsys):
    code, out, _ = run(capsys, "mabk-show", "--n", "3")
    assert code == cli.EXIT_OK
    assert "n_terms: 4" in out
    assert "[PASS]" in out and "[FAIL]" not in out


def test_mabk_show_json_schema(capsys):
    code, out, _ = run(capsys, "mabk-show", "--n", "4", "--format", "json")
    assert code == cli.EXIT_OK
    payload = json.loads(out)
    assert set(payload) == {"command", "params", "results", "verdicts", "duration_ms"}
    assert payload["params"] == {"n": 4}
    assert payload["results"]["n_terms"] == 16
    assert payload["results"]["normalization"] == 4
    for verdict in payload["verdicts"]:
        assert set(verdict) == {"claim", "target", "observed", "tolerance", "pass"}
        assert verdict["pass"]


def test_mabk_show_rejects_out_of_range_n(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["mabk-show", "--n", "11"])
    assert exc.value.code == cli.EXIT_USAGE


def test_theorem1_passes_odd_and_even(capsys):
    for n in ("5", "4"):
        code, out, _ = run(
            capsys, "theorem1", "--n", n, "--trials", "50", "--format", "json"
        )
        assert code == cli.EXIT_OK
        payload = json.loads(out)
        assert payload["results"]["max_residual"] < 1e-12


def test_theorem1_zero_trials_warns_but_passes(capsys):
    code, out, err = run(
        capsys, "theorem1", "--n", "5", "--trials", "0", "--format", "json"
    )
    assert code == cli.EXIT_OK
    assert "vacuous" in json.loads(out)["results"]["warning"]
    assert "warning" in err


def test_optimize_unconstrained_small(capsys):
    code, out, _ = run(
        capsys,
        "optimize", "--n", "3", "--restarts", "8", "--seed", "5", "--format", "json",
    )
    assert code == cli.EXIT_OK
    payload = json.loads(out)
    assert payload["results"]["best_value"] == pytest.approx(2.0, abs=1e-3)


def test_optimize_honest_four_party_reports_failing_target(capsys):
    # the classical-bound target is kept verbatim; the optimizer provably
    # reaches sqrt(2), so this verdict fails and exit code 4 signals it
    code, out, _ = run(
        capsys,
        "optimize", "--n", "4", "--honest", "--restarts", "20", "--seed", "5",
        "--format", "json",
    )
    assert code == cli.EXIT_VERDICT
    payload = json.loads(out)
    verdicts = {v["claim"]: v for v in payload["verdicts"]}
    classical = verdicts["four-party pinned-key maximum equals the classical bound"]
    assert not classical["pass"]
    assert classical["observed"] == pytest.approx(2.0**0.5, abs=1e-6)
    threshold = verdicts[
        "pinned-key maximum stays below the GME-certification threshold"
    ]
    assert threshold["pass"]


def test_npa_level2_constrained(capsys):
    code, out, _ = run(
        capsys, "npa", "--level", "2", "--perfect-correlations", "--format", "json"
    )
    assert code == cli.EXIT_OK
    payload = json.loads(out)
    assert payload["results"]["bound"] == pytest.approx(2.0**0.5, abs=1e-5)
    assert payload["results"]["certificate"]["verified"]


def test_csv_is_a_flat_verdict_table(capsys):
    code, out, _ = run(
        capsys, "theorem1", "--n", "3", "--trials", "10", "--format", "csv"
    )
    assert code == cli.EXIT_OK
    lines = out.strip().splitlines()
    assert lines[0] == "command,claim,target,observed,tolerance,pass"
    assert lines[1].startswith("theorem1,")


def test_reports_are_reproducible_modulo_duration(capsys):
    outputs = []
    for _ in range(2):
        code, out, _ = run(
            capsys,
            "optimize", "--n", "3", "--restarts", "6", "--seed", "11",
            "--format", "json",
        )
        assert code == cli.EXIT_OK
        payload = json.loads(out)
        payload.pop("duration_ms")
        outputs.append(json.dumps(payload, sort_keys=True))
    assert outputs[0] == outputs[1]


def test_reproduce_paper_fast(capsys):
    code, out, _ = run(
        capsys, "reproduce-paper", "--fast", "--seed", "3", "--format", "json"
    )
    assert code == cli.EXIT_VERDICT  # the documented four-party verdict fails
    payload = json.loads(out)
    assert payload["params"]["fast"] is True
    failing = [v["claim"] for v in payload["verdicts"] if not v["pass"]]
    assert failing == [
        "optimize: four-party pinned-key maximum equals the classical bound"
    ]
    # nested reports carry no duration, keeping the payload reproducible
    for sub in payload["results"]["reports"]:
        assert "duration_ms" not in sub


def test_numerical_failure_exit_code(capsys, monkeypatch):
    def boom(*args, **kwargs):
        raise SdpSolverError("synthetic breakdown", {"detail": 1})

    monkeypatch.setattr(cli.npa, "npa_upper_bound", boom)
    code, _, err = run(capsys, "npa", "--level", "2")
    assert code == cli.EXIT_NUMERICAL
    assert "synthetic breakdown" in err
    assert "detail" in err


def test_verbose_goes_to_stderr(capsys):
    code, out, err = run(
        capsys, "mabk-show", "--n", "3", "--format", "json", "-vv"
    )
    assert code == cli.EXIT_OK
    assert "finished" in err and "verdict" in err
    json.loads(out)  # stdout stays pure JSON
