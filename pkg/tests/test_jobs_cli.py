"""Tests for job parsing, report rendering, and the command line."""

from __future__ import annotations

import json
import os
import subprocess
import sys

import pytest

from fhcalc.errors import ComputationGuardError, JobValidationError
from fhcalc.jobs import (
    SCHEMA_TAG,
    load_job,
    parse_job,
    render,
    render_csv,
    render_text,
    run_job,
)

SAMPLES = os.path.join(os.path.dirname(__file__), "..", "sample_jobs")


def base_job(**extra) -> dict:
    doc = {
        "schema": SCHEMA_TAG,
        "p": 2,
        "task": "stable-tor",
        "truncation": 6,
        "additive": [1, 1],
    }
    doc.update(extra)
    return doc


def tor_job(**extra) -> dict:
    doc = {
        "schema": SCHEMA_TAG,
        "p": 2,
        "task": "module-tor",
        "truncation": 8,
        "algebra": "dual_numbers(2)",
        "module_m": "trivial",
        "module_n": "trivial",
    }
    doc.update(extra)
    return doc


# ------------------------------------------------------------- validation


def test_minimal_job_parses():
    spec = parse_job(base_job())
    assert spec.task == "stable-tor"
    assert spec.fmt == "text"
    assert spec.truncation == 6


def test_schema_tag_required():
    with pytest.raises(JobValidationError, match="schema"):
        parse_job(base_job(schema="fhcalc/999"))
    doc = base_job()
    del doc["schema"]
    with pytest.raises(JobValidationError, match="schema"):
        parse_job(doc)


def test_unknown_fields_rejected():
    with pytest.raises(JobValidationError, match="unknown field 'surprise'"):
        parse_job(base_job(surprise=1))
    # Payload fields from another task count as unknown too.
    with pytest.raises(JobValidationError, match="unknown field"):
        parse_job(base_job(algebra="field(2)"))


def test_field_validation():
    with pytest.raises(JobValidationError, match="not prime"):
        parse_job(base_job(p=6))
    with pytest.raises(JobValidationError, match="task"):
        parse_job(base_job(task="made-up"))
    with pytest.raises(JobValidationError, match="truncation"):
        parse_job(base_job(truncation=65))
    with pytest.raises(JobValidationError, match="truncation"):
        parse_job(base_job(truncation=-1))
    with pytest.raises(JobValidationError, match="format"):
        parse_job(base_job(format="yaml"))
    with pytest.raises(JobValidationError, match="expected an integer"):
        parse_job(base_job(p=True))


def test_table_validation():
    with pytest.raises(JobValidationError, match="exceed truncation"):
        parse_job(base_job(additive=[1] * 8))
    with pytest.raises(JobValidationError, match="nonnegative"):
        parse_job(base_job(additive=[1, -2]))
    with pytest.raises(JobValidationError, match="list of integers"):
        parse_job(base_job(additive=[1, "x"]))


def test_algebra_payloads():
    with pytest.raises(JobValidationError, match="unknown algebra preset"):
        parse_job(tor_job(algebra="mystery(2)"))
    with pytest.raises(JobValidationError, match="takes 1 argument"):
        parse_job(tor_job(algebra="dual_numbers(2, 3)"))
    with pytest.raises(JobValidationError, match="job says p=2"):
        parse_job(tor_job(algebra="dual_numbers(3)"))
    # Explicit structure constants: dual numbers again, flat row-major cube.
    explicit = {
        "dim": 2,
        "structure_constants": [1, 0, 0, 1, 0, 1, 0, 0],
        "unit": [1, 0],
        "augmentation": [1, 0],
    }
    spec = parse_job(tor_job(algebra=explicit))
    assert run_job(spec).dims.dims == (1,) * 9
    # Zeroing b0*b0 breaks associativity: (b0 b0) b1 = 0 but b0 (b0 b1) = b1.
    bad = dict(explicit, structure_constants=[0, 0, 0, 1, 0, 1, 0, 0])
    with pytest.raises(JobValidationError, match="associative"):
        parse_job(tor_job(algebra=bad))


def test_module_payloads():
    with pytest.raises(JobValidationError, match="unknown module preset"):
        parse_job(tor_job(module_m="mystery"))
    with pytest.raises(JobValidationError, match="one per basis element"):
        parse_job(tor_job(module_m={"dim": 1, "action": [[1]]}))
    spec = parse_job(
        tor_job(module_m={"dim": 1, "action": [[1], [0]]})  # trivial, explicitly
    )
    assert run_job(spec).dims.dims == (1,) * 9
    # No augmentation, no trivial module.
    with pytest.raises(JobValidationError, match="no augmentation"):
        parse_job(tor_job(algebra="gf4_over_gf2"))


def test_representation_payloads():
    schur = {
        "schema": SCHEMA_TAG,
        "p": 5,
        "task": "schur",
        "truncation": 4,
        "rep": {"preset": "sign", "blocks": [2]},
        "table": [0, 1],
    }
    assert run_job(parse_job(schur)).dims.dims == (0, 0, 1, 0, 0)
    with pytest.raises(JobValidationError, match="needs blocks"):
        parse_job(dict(schur, rep={"preset": "standard(3)", "blocks": [2, 1]}))
    with pytest.raises(JobValidationError, match="unknown preset"):
        parse_job(dict(schur, rep={"preset": "mystery", "blocks": [2]}))
    # Explicit generators: the sign representation of S_2 by hand.
    explicit = {"blocks": [2], "dim": 1, "generators": [[4]]}
    assert run_job(parse_job(dict(schur, rep=explicit))).dims.dims == (0, 0, 1, 0, 0)
    broken = {"blocks": [2], "dim": 1, "generators": [[2]]}
    with pytest.raises(JobValidationError, match="squared is not the identity"):
        parse_job(dict(schur, rep=broken))


def test_tensor_functor_payload_validation():
    doc = {
        "schema": SCHEMA_TAG,
        "p": 3,
        "task": "tensor-functor",
        "truncation": 4,
        "grid": [[[1]], [[1]]],
        "u": {"preset": "trivial", "blocks": [2]},
        "v": {"preset": "trivial", "blocks": [1]},
    }
    assert run_job(parse_job(doc)).dims.is_zero()
    with pytest.raises(JobValidationError, match="grid rows"):
        parse_job(dict(doc, u={"preset": "trivial", "blocks": [3]}))
    with pytest.raises(JobValidationError, match="grid columns"):
        parse_job(dict(doc, v={"preset": "trivial", "blocks": [2]}))
    with pytest.raises(JobValidationError, match="equal length"):
        parse_job(dict(doc, grid=[[[1]], [[1], [1]]]))


def test_verify_task_suites():
    doc = {
        "schema": SCHEMA_TAG,
        "p": 2,
        "task": "verify",
        "truncation": 0,
        "suite": "linalg",
    }
    report = run_job(parse_job(doc))
    assert report.checks and report.passed()
    assert parse_job(dict(doc, suite="all")).data["suite"] == "all"
    with pytest.raises(JobValidationError, match="suite"):
        parse_job(dict(doc, suite="bogus"))
    with pytest.raises(JobValidationError, match="no CSV form"):
        render_csv(report)


# ---------------------------------------------------------------- reports


def test_report_rendering_deterministic():
    spec = parse_job(base_job(format="csv"))
    first = render(run_job(spec))
    second = render(run_job(parse_job(base_job(format="csv"))))
    assert first == second
    assert first == "degree,dimension\n0,1\n1,1\n2,1\n3,1\n4,1\n5,1\n6,1\n"


def test_report_text_layout():
    text = render_text(run_job(parse_job(tor_job())))
    assert text.startswith("fhcalc report\nschema: fhcalc/1\ntask: module-tor\n")
    assert "provenance:" in text
    assert "hypotheses: none" in text
    assert "poincare: 1 + t + t^2" in text
    assert text.endswith("total dimension: 9\n")


def test_guard_propagates_and_flag_overrides():
    doc = {
        "schema": SCHEMA_TAG,
        "p": 2,
        "task": "schur",
        "truncation": 3,
        "rep": {"preset": "trivial", "blocks": [2]},
        "table": [1, 1],
    }
    spec = parse_job(doc)
    with pytest.raises(ComputationGuardError, match="divisible"):
        run_job(spec)
    report = run_job(spec, assume_projective=True)
    assert report.hypotheses and "assume-projective" in report.hypotheses[0]
    assert "hypotheses:\n  - assume-projective" in render_text(report)


def test_resolve_and_minimize_knobs():
    for resolve in ("first", "second"):
        for minimize in (True, False):
            spec = parse_job(tor_job(resolve=resolve, minimize=minimize))
            assert run_job(spec).dims.dims == (1,) * 9
    with pytest.raises(JobValidationError, match="resolve"):
        parse_job(tor_job(resolve="third"))
    with pytest.raises(JobValidationError, match="expected a boolean"):
        parse_job(tor_job(minimize=1))


def test_load_job_errors(tmp_path):
    missing = tmp_path / "nope.json"
    with pytest.raises(JobValidationError, match="nope.json"):
        load_job(str(missing))
    bad = tmp_path / "bad.json"
    bad.write_text("{broken")
    with pytest.raises(JobValidationError, match="invalid JSON"):
        load_job(str(bad))
    scalar = tmp_path / "scalar.json"
    scalar.write_text("42")
    with pytest.raises(JobValidationError, match="JSON object"):
        load_job(str(scalar))


# ------------------------------------------------------------ sample jobs


def sample(name: str) -> str:
    return os.path.join(SAMPLES, name)


def test_sample_jobs_all_parse_and_run():
    expected = {
        "tor_dual_numbers.json": (1,) * 11,
        "stable_tor_dual.json": tuple(n // 2 + 1 for n in range(11)),
        "hochschild_gf4.json": (2, 0, 0, 0, 0, 0, 0, 0, 0),
        "tensor_vanish.json": (0,) * 7,
        "schur_sign_square.json": (0, 0, 1, 0, 0),
        "psi_ext_rank1.json": (1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0),
        "gl_homology.json": (2, 2, 1),
        "ext_truncated_poly.json": (1,) * 7,
        "example_c_standard.json": (0, 1, 2, 3, 5, 7, 9),
    }
    for name, dims in expected.items():
        report = run_job(load_job(sample(name)))
        assert report.dims.dims == dims, name


# ------------------------------------------------------------- subprocess


def run_cli(*args: str, cwd: str | None = None):
    return subprocess.run(
        [sys.executable, "-m", "fhcalc", *args],
        capture_output=True,
        text=True,
        cwd=cwd,
        timeout=120,
    )


def test_cli_run_golden_bytes():
    first = run_cli("run", sample("stable_tor_dual.json"))
    second = run_cli("run", sample("stable_tor_dual.json"))
    assert first.returncode == 0
    assert first.stdout == second.stdout
    assert first.stdout.startswith("degree,dimension\n0,1\n1,1\n2,2\n")
    assert "s\n" in first.stderr  # wall time lands on stderr only


def test_cli_format_override():
    out = run_cli("run", sample("tor_dual_numbers.json"), "--format", "csv")
    assert out.returncode == 0
    assert out.stdout == "degree,dimension\n" + "".join(
        f"{n},1\n" for n in range(11)
    )


def test_cli_exit_codes(tmp_path):
    guard = tmp_path / "guard.json"
    guard.write_text(
        json.dumps(
            {
                "schema": SCHEMA_TAG,
                "p": 2,
                "task": "schur",
                "truncation": 3,
                "rep": {"preset": "trivial", "blocks": [2]},
                "table": [1, 1],
            }
        )
    )
    refused = run_cli("run", str(guard))
    assert refused.returncode == 2
    assert "refused" in refused.stderr
    allowed = run_cli("run", str(guard), "--assume-projective")
    assert allowed.returncode == 0

    broken = tmp_path / "broken.json"
    broken.write_text("{nope")
    assert run_cli("run", str(broken)).returncode == 1
    assert run_cli("verify", "bogus").returncode == 1
    assert run_cli("nonsense").returncode == 1


def test_cli_batch_out_dir(tmp_path):
    out_dir = tmp_path / "reports"
    result = run_cli(
        "run",
        sample("stable_tor_dual.json"),
        sample("psi_ext_rank1.json"),
        "--out",
        str(out_dir),
        "--jobs",
        "2",
    )
    assert result.returncode == 0
    stable = (out_dir / "stable_tor_dual.csv").read_text()
    assert stable.startswith("degree,dimension\n0,1\n")
    assert (out_dir / "psi_ext_rank1.csv").read_text().startswith("degree,dimension\n")


def test_cli_single_out_file(tmp_path):
    target = tmp_path / "table.csv"
    result = run_cli("run", sample("stable_tor_dual.json"), "--out", str(target))
    assert result.returncode == 0
    assert target.read_text().startswith("degree,dimension\n")
    assert not list(tmp_path.glob("*.tmp-*"))  # atomic rename cleaned up


def test_cli_verify_and_presets():
    ok = run_cli("verify", "graded")
    assert ok.returncode == 0
    assert "result: pass" in ok.stdout
    listing = run_cli("presets")
    assert listing.returncode == 0
    for needle in ("dual_numbers(p)", "standard(d)", "fdalg-balance", "module-tor"):
        assert needle in listing.stdout


def test_cli_verify_job_exit_on_sample():
    result = run_cli("run", sample("verify_koszul.json"))
    assert result.returncode == 0
    assert "result: pass" in result.stdout
